use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use super::HamiltonianMatrix;
use crate::error::{PiteError, Result};

/// Relative tolerance below which two eigenvalues count as degenerate.
const GAP_TOLERANCE: f64 = 1e-10;

/// Ascending eigenvalues, optionally with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Option<DMatrix<f64>>,
}

impl Spectrum {
    /// Spectrum without eigenvectors. Values must be finite and nondecreasing.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(PiteError::invalid("spectrum is empty"));
        }
        if let Some(v) = eigenvalues.iter().find(|v| !v.is_finite()) {
            return Err(PiteError::invalid(format!("eigenvalue {v} is not finite")));
        }
        if let Some(i) = eigenvalues.windows(2).position(|w| w[1] < w[0]) {
            return Err(PiteError::invalid(format!(
                "eigenvalues must be nondecreasing; index {} ({}) < index {} ({})",
                i + 1,
                eigenvalues[i + 1],
                i,
                eigenvalues[i]
            )));
        }
        Ok(Self {
            eigenvalues,
            eigenvectors: None,
        })
    }

    /// Spectrum with eigenvectors stored as the columns of `vectors`.
    pub fn with_eigenvectors(eigenvalues: Vec<f64>, vectors: DMatrix<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if vectors.shape() != (n, n) {
            return Err(PiteError::invalid(format!(
                "eigenvector matrix is {:?}, expected {n}x{n}",
                vectors.shape()
            )));
        }
        let mut s = Self::from_eigenvalues(eigenvalues)?;
        s.eigenvectors = Some(vectors);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> Option<&DMatrix<f64>> {
        self.eigenvectors.as_ref()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Excitation energies `Δλ_i = λ_i - λ_1`.
    pub fn excitations(&self) -> Vec<f64> {
        let g = self.ground_energy();
        self.eigenvalues.iter().map(|l| l - g).collect()
    }

    fn degeneracy_tolerance(&self) -> f64 {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        GAP_TOLERANCE * scale
    }

    /// Smallest nonzero excitation `Δλ_min`, skipping any ground-state degeneracy.
    pub fn min_gap(&self) -> Option<f64> {
        let tol = self.degeneracy_tolerance();
        self.excitations().into_iter().find(|d| *d > tol)
    }

    /// Largest excitation `Δλ_max`, if the spectrum is not fully degenerate.
    pub fn max_gap(&self) -> Option<f64> {
        let d = self.eigenvalues[self.len() - 1] - self.ground_energy();
        (d > self.degeneracy_tolerance()).then_some(d)
    }

    /// Same spectrum with every eigenvalue moved by `-shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            eigenvalues: self.eigenvalues.iter().map(|l| l - shift).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
    }

    /// `max |V Λ Vᵀ - H|`, or `None` without eigenvectors.
    pub fn reconstruction_error(&self, h: &HamiltonianMatrix) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        let rebuilt = v * lambda * v.transpose();
        Some((rebuilt - h.matrix()).amax())
    }
}

fn eigen_failure(h: &HamiltonianMatrix) -> PiteError {
    let m = h.matrix();
    PiteError::Numeric(format!(
        "symmetric eigensolver did not converge (dimension {}, max |H_ij| = {:e}, Frobenius norm = {:e})",
        m.nrows(),
        m.amax(),
        m.norm()
    ))
}

fn max_iterations(dim: usize) -> usize {
    200 * dim.max(10)
}

/// Eigenvalues only; cheaper than [`diagonalize`].
pub fn diagonalize_values(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let dim = h.dimension();
    let eig = h
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, max_iterations(dim))
        .ok_or_else(|| eigen_failure(h))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Spectrum::from_eigenvalues(values)
}

/// Full eigendecomposition. Eigenvalues ascend; each eigenvector is signed so
/// its largest-magnitude component is positive, and exact ties are ordered
/// lexicographically by eigenvector.
pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let dim = h.dimension();
    let eig = h
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, max_iterations(dim))
        .ok_or_else(|| eigen_failure(h))?;

    let mut vectors = eig.eigenvectors;
    for mut col in vectors.column_iter_mut() {
        let pivot = col.iter().copied().fold(
            0.0_f64,
            |best, v| {
                if v.abs() > best.abs() {
                    v
                } else {
                    best
                }
            },
        );
        if pivot < 0.0 {
            col.neg_mut();
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then_with(|| {
                vectors
                    .column(a)
                    .iter()
                    .zip(vectors.column(b).iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
    });

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let sorted = DMatrix::from_fn(dim, dim, |r, c| vectors[(r, order[c])]);
    Spectrum::with_eigenvectors(values, sorted)
}

/// Eigenvalue histogram on bins of equal width starting at `λ_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DosHistogram {
    /// `counts.len() + 1` ascending edges.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `counts / (N · width)`; sums to 1 when multiplied by the bin width.
    pub normalized: Vec<f64>,
}

impl DosHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Bins cover `[λ_1, λ_N]`; bin `b` holds `λ_1 + b·w <= λ < λ_1 + (b+1)·w`.
pub fn dos_histogram(spec: &Spectrum, bin_width: f64) -> Result<DosHistogram> {
    if spec.is_empty() {
        return Err(PiteError::invalid("cannot bin an empty spectrum"));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(PiteError::invalid(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let lo = spec.ground_energy();
    let bin_of = |l: f64| ((l - lo) / bin_width).floor() as usize;
    let bins = bin_of(spec.eigenvalues()[spec.len() - 1]) + 1;
    let mut counts = vec![0usize; bins];
    for &l in spec.eigenvalues() {
        counts[bin_of(l)] += 1;
    }
    let n = spec.len() as f64;
    let normalized = counts.iter().map(|&c| c as f64 / (n * bin_width)).collect();
    let bin_edges = (0..=bins).map(|b| lo + b as f64 * bin_width).collect();
    Ok(DosHistogram {
        bin_edges,
        counts,
        normalized,
    })
}
