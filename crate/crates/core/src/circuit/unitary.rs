use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::engine::GammaParams;
use crate::error::{PiteError, Result};
use crate::hamiltonians::{diagonalize, HamiltonianMatrix, Spectrum};

/// Largest register for which dense step unitaries are built.
pub const MAX_CIRCUIT_QUBITS: usize = 8;

const NORM_TOLERANCE: f64 = 1e-12;
const EMBEDDING_TOLERANCE: f64 = 1e-12;
const POSTSELECT_FLOOR: f64 = 1e-300;
const SELF_TEST_TOLERANCE: f64 = 1e-9;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Normalized amplitudes over register ⊗ ancilla, ancilla most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(PiteError::invalid(format!(
                "state length {len} is not 2^(n+1) with n >= 0"
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(PiteError::invalid(format!("state norm is {norm}, not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// `|ψ⟩ ⊗ |0⟩_ancilla` from a real register state, normalized on the way in.
    pub fn from_register(psi: &DVector<f64>) -> Result<Self> {
        let n = psi.len();
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(PiteError::invalid("register state has zero norm"));
        }
        let mut amps = DVector::zeros(2 * n);
        for (i, v) in psi.iter().enumerate() {
            amps[i] = c(v / norm);
        }
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn register_dim(&self) -> usize {
        self.amplitudes.len() / 2
    }

    /// Register amplitudes paired with ancilla `|0⟩`.
    pub fn register(&self) -> DVector<Complex64> {
        self.amplitudes.rows(0, self.register_dim()).into_owned()
    }

    /// `|⟨v_i|ψ⟩|²` for the register part over each eigenvector column.
    pub fn eigen_weights(&self, spec: &Spectrum) -> Result<Vec<f64>> {
        let v = spec
            .eigenvectors()
            .ok_or_else(|| PiteError::invalid("spectrum has no eigenvectors"))?;
        if v.nrows() != self.register_dim() {
            return Err(PiteError::invalid("spectrum and state dimensions differ"));
        }
        let reg = self.register();
        Ok(v.column_iter()
            .map(|col| {
                col.iter()
                    .zip(reg.iter())
                    .map(|(a, b)| b * a)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .collect())
    }
}

/// Dense `(n+1)`-qubit unitary implementing one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepUnitary {
    matrix: CMatrix,
}

impl StepUnitary {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn register_dim(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Register operator for ancilla `|0⟩ → |0⟩`.
    pub fn block_00(&self) -> CMatrix {
        let n = self.register_dim();
        self.matrix.view((0, 0), (n, n)).into_owned()
    }

    pub fn block(&self, row: usize, col: usize) -> CMatrix {
        let n = self.register_dim();
        self.matrix.view((row * n, col * n), (n, n)).into_owned()
    }

    /// `max |U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.nrows();
        let prod = self.matrix.adjoint() * &self.matrix;
        (prod - CMatrix::identity(d, d))
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    fn from_blocks(b: [[CMatrix; 2]; 2]) -> Self {
        let n = b[0][0].nrows();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        for (r, row) in b.iter().enumerate() {
            for (col, blk) in row.iter().enumerate() {
                m.view_mut((r * n, col * n), (n, n)).copy_from(blk);
            }
        }
        Self { matrix: m }
    }
}

fn check_register(n: usize) -> Result<()> {
    let qubits = n.trailing_zeros() as usize;
    if qubits > MAX_CIRCUIT_QUBITS {
        return Err(PiteError::ResourceLimit {
            what: "circuit register qubits",
            requested: qubits,
            max: MAX_CIRCUIT_QUBITS,
        });
    }
    Ok(())
}

/// `V diag(g(λ)) Vᵀ` for real eigenvectors `V`.
fn spectral<F: Fn(f64) -> Complex64>(v: &DMatrix<f64>, values: &[f64], g: F) -> CMatrix {
    let n = values.len();
    let vc = v.map(c);
    let scaled = CMatrix::from_fn(n, n, |r, col| vc[(r, col)] * g(values[col]));
    scaled * vc.transpose()
}

/// `[[M, √(1-M²)], [√(1-M²), -M]]` with `M = e^{-Hτ}`; requires `λ_1 ≥ 0`.
pub fn build_exact_block_unitary(spec: &Spectrum, tau: f64) -> Result<StepUnitary> {
    let v = spec
        .eigenvectors()
        .ok_or_else(|| PiteError::invalid("exact embedding needs eigenvectors"))?;
    check_register(spec.len())?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(PiteError::invalid(format!(
            "tau must be finite and >= 0, got {tau}"
        )));
    }
    let m: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .map(|l| (-l * tau).exp())
        .collect();
    if let Some(&bad) = m.iter().find(|&&x| x > 1.0 + EMBEDDING_TOLERANCE) {
        return Err(PiteError::Embedding { value: bad });
    }
    let m: Vec<f64> = m.into_iter().map(|x| x.min(1.0)).collect();
    let mm = spectral(v, &m, c);
    let co = spectral(v, &m, |x| c((1.0 - x * x).max(0.0).sqrt()));
    Ok(StepUnitary::from_blocks([
        [mm.clone(), co.clone()],
        [co, -mm],
    ]))
}

/// 2×2 ancilla gate as `[[g00, g01], [g10, g11]]`.
type Gate = [[Complex64; 2]; 2];

fn hadamard() -> Gate {
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    [[h, h], [h, -h]]
}

fn phase(sign: f64) -> Gate {
    [[c(1.0), c(0.0)], [c(0.0), Complex64::new(0.0, sign)]]
}

fn pauli_z() -> Gate {
    [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]
}

fn rz(angle: f64) -> Gate {
    [
        [Complex64::from_polar(1.0, -angle / 2.0), c(0.0)],
        [c(0.0), Complex64::from_polar(1.0, angle / 2.0)],
    ]
}

/// Operator as four `N × N` blocks indexed by ancilla (row, column).
struct Blocks([[CMatrix; 2]; 2]);

impl Blocks {
    fn identity(n: usize) -> Self {
        let i = CMatrix::identity(n, n);
        let z = CMatrix::zeros(n, n);
        Blocks([[i.clone(), z.clone()], [z, i]])
    }

    /// Left-multiplies by `g ⊗ I`.
    fn ancilla(self, g: Gate) -> Self {
        let [[a, b], [cc, d]] = self.0;
        Blocks([
            [&a * g[0][0] + &cc * g[0][1], &b * g[0][0] + &d * g[0][1]],
            [&a * g[1][0] + &cc * g[1][1], &b * g[1][0] + &d * g[1][1]],
        ])
    }

    /// Left-multiplies by `|0⟩⟨0| ⊗ on_zero + |1⟩⟨1| ⊗ on_one`.
    fn controlled(self, on_zero: &CMatrix, on_one: &CMatrix) -> Self {
        let [[a, b], [cc, d]] = self.0;
        Blocks([[on_zero * a, on_zero * b], [on_one * cc, on_one * d]])
    }
}

/// Gate-level first-order step whose ancilla-`|0⟩` block is
/// `sin(-(H - E)sΔτ + φ)`.
///
/// Time order on the ancilla: `S†`, `H`, then the controlled pair (ancilla `|0⟩`
/// runs `U_RTE(sΔτ)† = e^{+isΔτH}`, ancilla `|1⟩` runs `U_RTE(sΔτ)`), then
/// `R_z(2θ - π/2 + 2sΔτE)`, `H`, `S`, `Z`. The product is the real symmetric
/// `Z·R_y(2Y)` with `Y = θ - π/4 - (H - E)sΔτ`, so the top-left block is
/// `cos Y`. The result is checked against that function in the eigenbasis.
pub fn build_approx_step_circuit(
    h: &HamiltonianMatrix,
    dtau: f64,
    gp: &GammaParams,
    energy: f64,
) -> Result<StepUnitary> {
    let n = h.dimension();
    check_register(n)?;
    if !(dtau >= 0.0 && dtau.is_finite() && energy.is_finite()) {
        return Err(PiteError::invalid(format!(
            "need finite dtau >= 0 and energy, got {dtau} and {energy}"
        )));
    }
    let spec = diagonalize(h)?;
    let v = spec
        .eigenvectors()
        .expect("diagonalize returns eigenvectors");
    let x = gp.s() * dtau;
    let forward = spectral(v, spec.eigenvalues(), |l| {
        Complex64::from_polar(1.0, -x * l)
    });
    let backward = forward.adjoint();
    let angle = 2.0 * gp.theta() - std::f64::consts::FRAC_PI_2 + 2.0 * x * energy;

    let b = Blocks::identity(n)
        .ancilla(phase(-1.0))
        .ancilla(hadamard())
        .controlled(&backward, &forward)
        .ancilla(rz(angle))
        .ancilla(hadamard())
        .ancilla(phase(1.0))
        .ancilla(pauli_z());
    let u = StepUnitary::from_blocks(b.0);
    self_test(&u, &spec, dtau, gp, energy)?;
    Ok(u)
}

/// Confirms `Vᵀ block_00 V = diag(f(λ_i))`.
fn self_test(
    u: &StepUnitary,
    spec: &Spectrum,
    dtau: f64,
    gp: &GammaParams,
    energy: f64,
) -> Result<()> {
    let v = spec
        .eigenvectors()
        .expect("diagonalize returns eigenvectors")
        .map(c);
    let d = v.transpose() * u.block_00() * &v;
    let n = spec.len();
    let tol = SELF_TEST_TOLERANCE * (n as f64).sqrt().max(1.0);
    for i in 0..n {
        let lambda = spec.eigenvalues()[i];
        let f = crate::engine::step_factor(lambda, energy, dtau, gp);
        let off = (0..n)
            .filter(|&j| j != i)
            .fold(0.0_f64, |m, j| m.max(d[(j, i)].norm()));
        let dev = (d[(i, i)] - c(f)).norm().max(off);
        if dev > tol {
            return Err(PiteError::Internal(format!(
                "step circuit block deviates by {dev:e} at eigenvalue {i} ({lambda})"
            )));
        }
    }
    Ok(())
}

/// Applies `U`, measures the ancilla in `|0⟩` and renormalizes.
pub fn apply_postselect(state: &StateVector, u: &StepUnitary) -> Result<(StateVector, f64)> {
    let n = state.register_dim();
    if u.register_dim() != n {
        return Err(PiteError::invalid(format!(
            "unitary acts on {} register states, state has {n}",
            u.register_dim()
        )));
    }
    let out = u.matrix() * state.amplitudes();
    let kept = out.rows(0, n);
    let p0 = kept.norm_squared();
    if !(p0 >= POSTSELECT_FLOOR) {
        return Err(PiteError::PostselectionImpossible { p0 });
    }
    let mut amps = DVector::zeros(2 * n);
    amps.rows_mut(0, n).copy_from(&(kept * c(1.0 / p0.sqrt())));
    Ok((StateVector { amplitudes: amps }, p0))
}
