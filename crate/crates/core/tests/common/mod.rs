//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the crate under test; every routine is a textbook
//! algorithm implemented directly.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::{FRAC_PI_2, PI};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = K15_WEIGHTS[7] * fc;
    let mut g = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 50 || (b - a).abs() < 1e-14 * a.abs().max(1.0) {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Integrates over `[a, b]` in panels of length at most `panel`, so that
/// oscillatory integrands are resolved panel by panel.
pub fn integrate_panels(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panel: f64, tol: f64) -> f64 {
    let n = ((b - a) / panel).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    // Kahan summation keeps panel round-off from accumulating.
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for i in 0..n {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == n { b } else { lo + h };
        let y = integrate(f, lo, hi, tol / n as f64) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Tanh–sinh quadrature; tolerates integrable endpoint singularities.
/// `f` receives the point and its distances to the left and right ends so that
/// singular integrands can be evaluated without cancellation.
pub fn tanh_sinh(f: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // 1 - tanh(u) computed stably as 2/(e^{2u}+1).
        let right = half * 2.0 / ((2.0 * u).exp() + 1.0);
        let left = half * 2.0 / ((-2.0 * u).exp() + 1.0);
        if right <= 0.0 || left <= 0.0 || w == 0.0 {
            continue;
        }
        let x = if u >= 0.0 { b - right } else { a + left };
        sum += w * f(x, left, right);
    }
    sum * half * h
}

/// `∫_lo^hi ln cos² t dt`, split at every zero of `cos`.
pub fn log_cos2_integral(lo: f64, hi: f64) -> f64 {
    assert!(hi >= lo);
    let mut cuts = vec![lo];
    let mut m = ((lo - FRAC_PI_2) / PI).floor() as i64 + 1;
    loop {
        let z = FRAC_PI_2 + m as f64 * PI;
        if z >= hi {
            break;
        }
        if z > lo {
            cuts.push(z);
        }
        m += 1;
    }
    cuts.push(hi);
    cuts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            // Near a zero z of cos, ln cos² t = 2 ln|sin(t - z)|, which keeps
            // precision where cos itself would cancel.
            let za = FRAC_PI_2 + (((a - FRAC_PI_2) / PI).round()) * PI;
            let zb = FRAC_PI_2 + (((b - FRAC_PI_2) / PI).round()) * PI;
            let g = |x: f64, left: f64, right: f64| {
                if (a - za).abs() < 1e-12 && left < 0.5 {
                    2.0 * left.sin().abs().ln()
                } else if (b - zb).abs() < 1e-12 && right < 0.5 {
                    2.0 * right.sin().abs().ln()
                } else {
                    x.cos().powi(2).ln()
                }
            };
            tanh_sinh(&g, a, b)
        })
        .sum()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense Heisenberg chain from explicit Pauli Kronecker products (real part;
/// the Hamiltonian is real in the computational basis).
pub fn heisenberg_kron(n: usize, j: f64, h: f64) -> Vec<Vec<f64>> {
    let dim = 1usize << n;
    // Apply each Pauli string to basis states column by column.
    let mut m = vec![vec![0.0; dim]; dim];
    for col in 0..dim {
        let bit = |s: usize, k: usize| (s >> k) & 1;
        for site in 0..n {
            let z = if bit(col, site) == 0 { 1.0 } else { -1.0 };
            m[col][col] += h * z;
            let next = (site + 1) % n;
            let z2 = if bit(col, next) == 0 { 1.0 } else { -1.0 };
            m[col][col] += j * z * z2;
            let flipped = col ^ (1 << site) ^ (1 << next);
            // X X contributes 1, Y Y contributes -(i·sign)(i·sign') = -z z'.
            m[flipped][col] += j * (1.0 - z * z2);
        }
    }
    m
}

/// Step factor `sin(−(λ−E)sΔτ + φ)` straight from γ, with the full shift on
/// branch `n`.
pub fn direct_step_factor(dl: f64, dtau: f64, gamma: f64, alpha: f64, n: i64) -> f64 {
    let s = gamma / (1.0 - gamma * gamma).sqrt();
    let phi = gamma.asin();
    let shift = alpha * (s.atan() - FRAC_PI_2 * (2 * n + 1) as f64) / (dtau * s);
    // λ − E = Δλ + α(...)/(Δτ s), E = λ1 − shift
    (-(dl + shift) * s * dtau + phi).sin()
}

/// Linear schedule written out from its definition.
pub fn linear_steps(dmin: f64, dmax: f64, k: usize) -> Vec<f64> {
    (1..=k)
        .map(|i| (i - 1) as f64 / (k - 1) as f64 * (dmax - dmin) + dmin)
        .collect()
}

/// Exponential schedule written out from its definition with `κ = κ̄K`.
pub fn exponential_steps(dmin: f64, dmax: f64, k: usize, kappa_bar: f64) -> Vec<f64> {
    let kappa = kappa_bar * k as f64;
    (1..=k)
        .map(|i| dmax - (-((i - 1) as f64) / kappa).exp() * (dmax - dmin))
        .collect()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for t in i..=j {
                r[idx[t]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// `sin(A)` of a real symmetric matrix by scaled Taylor series and repeated
/// double-angle formulas, with no eigen-decomposition.
pub fn matrix_sin(a: &nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let m = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let x = a / 2f64.powi(m);
    let id = nalgebra::DMatrix::<f64>::identity(n, n);
    let x2 = &x * &x;
    let (mut s, mut c) = (x.clone(), id.clone());
    let (mut ts, mut tc) = (x.clone(), id.clone());
    for k in 1..20 {
        let kf = k as f64;
        ts = -(&ts * &x2) / ((2.0 * kf) * (2.0 * kf + 1.0));
        tc = -(&tc * &x2) / ((2.0 * kf - 1.0) * (2.0 * kf));
        s += &ts;
        c += &tc;
    }
    for _ in 0..m {
        let s2 = 2.0 * &s * &c;
        let c2 = 2.0 * &c * &c - &id;
        s = s2;
        c = c2;
    }
    s
}
