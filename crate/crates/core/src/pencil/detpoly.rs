//! Determinant-polynomial oracle: `p(λ) = det(A1 + λ·A2)` is recovered from its
//! values at real Chebyshev nodes, and its roots from a companion matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_tol, Method, PencilSpectrum};
use crate::error::Result;
use crate::linalg::{general_eigenvalues, spectral_norm, CMatrix, CartesianPair};

const NEWTON_STEPS: usize = 4;

/// Coefficients of `p` in the scaled variable `x = λ/ρ`, lowest degree first.
pub(crate) struct ScaledPolynomial {
    pub coeffs: Vec<f64>,
    pub rho: f64,
    /// Largest Hadamard bound over the sampled matrices, the natural scale of `p`.
    pub scale: f64,
    /// Normalization applied to `A1` and `A2` before taking determinants.
    pub norm: f64,
}

fn node(k: usize, n: usize) -> f64 {
    ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * (n + 1)) as f64).cos()
}

fn hadamard_bound(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product()
}

pub(crate) fn scaled_polynomial(pair: &CartesianPair) -> ScaledPolynomial {
    let n = pair.dim();
    let n1 = spectral_norm(pair.a1().matrix());
    let n2 = spectral_norm(pair.a2().matrix());
    let rho = if n2 > 0.0 { (n1 / n2).max(1.0) } else { 1.0 };
    let norm = (n1 + rho * n2).max(f64::MIN_POSITIVE);
    let a1 = pair.a1().matrix() / Complex64::new(norm, 0.0);
    let a2 = pair.a2().matrix() / Complex64::new(norm, 0.0);

    let xs: Vec<f64> = (0..=n).map(|k| node(k, n)).collect();
    let mut values = Vec::with_capacity(n + 1);
    let mut scale = 0.0_f64;
    for &x in &xs {
        let m = &a1 + &a2 * Complex64::new(rho * x, 0.0);
        scale = scale.max(hadamard_bound(&m));
        // real for Hermitian A1 + r·A2; the imaginary part is rounding
        values.push(m.lu().determinant().re);
    }
    let v = DMatrix::from_fn(n + 1, n + 1, |k, j| xs[k].powi(j as i32));
    let rhs = nalgebra::DVector::from_vec(values);
    let coeffs = v
        .lu()
        .solve(&rhs)
        .map(|c| c.iter().copied().collect())
        .unwrap_or_else(|| vec![0.0; n + 1]);
    ScaledPolynomial {
        coeffs,
        rho,
        scale,
        norm,
    }
}

/// Coefficients `c_0, …, c_n` of `det(A1 + λ·A2) = Σ c_j λ^j`.
pub fn determinant_coefficients(pair: &CartesianPair) -> Vec<f64> {
    let p = scaled_polynomial(pair);
    let n = pair.dim() as i32;
    p.coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * p.norm.powi(n) / p.rho.powi(j as i32))
        .collect()
}

fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut c = CMatrix::zeros(deg, deg);
    for i in 1..deg {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        c[(i, deg - 1)] = Complex64::new(-coeffs[i] / lead, 0.0);
    }
    general_eigenvalues(&c)
}

/// Newton steps on `det(A1 + λ·A2)` using `d/dλ log det = tr(P(λ)⁻¹·A2)`; a step
/// is kept only when it is small and decreases `|det|`.
fn polish(a1: &CMatrix, a2: &CMatrix, mut lambda: Complex64) -> Complex64 {
    let eval = |l: Complex64| {
        let lu = (a1 + a2 * l).lu();
        let det = lu.determinant();
        (lu, det)
    };
    let (mut lu, mut det) = eval(lambda);
    for _ in 0..NEWTON_STEPS {
        if det.norm() == 0.0 {
            break;
        }
        let Some(x) = lu.solve(a2) else { break };
        let dlog = x.trace();
        if dlog.norm() == 0.0 {
            break;
        }
        let step = Complex64::new(1.0, 0.0) / dlog;
        if !(step.norm() <= 1e-3 * (1.0 + lambda.norm())) {
            break;
        }
        let next = lambda - step;
        let (lu2, det2) = eval(next);
        if det2.norm() >= det.norm() {
            break;
        }
        lambda = next;
        lu = lu2;
        det = det2;
    }
    lambda
}

/// Pencil spectrum from the interpolated determinant polynomial.
pub fn pencil_spectrum_detpoly(pair: &CartesianPair, tol: f64) -> Result<PencilSpectrum> {
    pair.require_nonzero_a2()?;
    check_tol(tol)?;
    let n = pair.dim();
    let poly = scaled_polynomial(pair);
    let cmax = poly.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
    if cmax <= tol * poly.scale {
        return Ok(PencilSpectrum::assemble(pair, false, Vec::new(), 0, Method::DetPoly, tol));
    }
    let mut deg = n;
    while deg > 0 && poly.coeffs[deg].abs() <= tol * cmax {
        deg -= 1;
    }
    let a1 = pair.a1().matrix() / Complex64::new(poly.norm, 0.0);
    let a2 = pair.a2().matrix() / Complex64::new(poly.norm, 0.0);
    let finite = polynomial_roots(&poly.coeffs[..=deg])?
        .into_iter()
        .map(|x| polish(&a1, &a2, x * poly.rho))
        .collect();
    let mut spec = PencilSpectrum::assemble(pair, true, finite, n - deg, Method::DetPoly, tol);
    spec.has_infinity |= deg < n;
    Ok(spec)
}
