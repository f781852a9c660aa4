//! Complex QZ iteration for the generalized eigenvalues of a pair `(A, B)`.
//!
//! Eigenvalues are returned as scalar pairs `(α, β)` with `det(β·A − α·B) = 0`;
//! `β = 0` marks an infinite eigenvalue and `α = β = 0` a singular pencil.
//! Only eigenvalues are computed, so transformations are applied to the active
//! diagonal block alone.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::schur::givens;
use crate::linalg::CMatrix;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Applies the rotation to rows `i`, `i+1` over columns `cols`.
fn rot_rows(m: &mut CMatrix, i: usize, cols: std::ops::RangeInclusive<usize>, c: f64, s: Complex64) {
    for j in cols {
        let a = m[(i, j)];
        let b = m[(i + 1, j)];
        m[(i, j)] = a * c + s * b;
        m[(i + 1, j)] = -s.conj() * a + b * c;
    }
}

/// Right-multiplies columns `j`, `j+1` (rows `rows`) by the rotation that maps
/// `[x_j, x_{j+1}]` to `[0, r]` for `(c, s) = givens(x_{j+1}, x_j)`.
fn rot_cols(m: &mut CMatrix, j: usize, rows: std::ops::RangeInclusive<usize>, c: f64, s: Complex64) {
    for i in rows {
        let a = m[(i, j)];
        let b = m[(i, j + 1)];
        m[(i, j)] = a * c - s.conj() * b;
        m[(i, j + 1)] = b * c + s * a;
    }
}

/// Householder QR of `B` applied to both matrices: `A <- Q*A`, `B <- R`.
fn triangularize_b(a: &mut CMatrix, b: &mut CMatrix) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(1) {
        let xnorm = (k..n).map(|i| b[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = b[(k, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<Complex64> = (k..n).map(|i| b[(i, k)]).collect();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        for m in [&mut *a, &mut *b] {
            for j in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * m[(k + i, j)]).sum();
                for (i, vi) in v.iter().enumerate() {
                    m[(k + i, j)] -= *vi * dot * 2.0;
                }
            }
        }
        for i in k + 1..n {
            b[(i, k)] = zero();
        }
    }
}

/// Givens reduction to `A` upper Hessenberg, `B` upper triangular.
fn hessenberg_triangular(a: &mut CMatrix, b: &mut CMatrix) {
    let n = a.nrows();
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let (c, s) = givens(a[(i - 1, j)], a[(i, j)]);
            rot_rows(a, i - 1, j..=n - 1, c, s);
            rot_rows(b, i - 1, i - 1..=n - 1, c, s);
            a[(i, j)] = zero();
            // B gained b[i][i-1]; remove it with a column rotation on (i-1, i)
            let (c, s) = givens(b[(i, i)], b[(i, i - 1)]);
            rot_cols(b, i - 1, 0..=i, c, s);
            rot_cols(a, i - 1, 0..=n - 1, c, s);
            b[(i, i - 1)] = zero();
        }
    }
}

/// Generalized eigenvalues of `(A, B)` as `(α, β)` pairs in no particular order.
pub fn generalized_eigenvalues(a: &CMatrix, b: &CMatrix) -> Result<Vec<(Complex64, Complex64)>> {
    let n = a.nrows();
    if n != a.ncols() || b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension("QZ needs two square matrices of equal size".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    let mut t = b.clone();
    triangularize_b(&mut h, &mut t);
    hessenberg_triangular(&mut h, &mut t);

    let eps = f64::EPSILON;
    let anorm = h.norm();
    let bnorm = t.norm();
    let atol = eps * anorm.max(f64::MIN_POSITIVE);
    let btol = eps * bnorm.max(f64::MIN_POSITIVE);

    let mut out = vec![(zero(), zero()); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    'outer: loop {
        // split point: largest lo with h[lo][lo-1] negligible
        let mut lo = hi;
        while lo > 0 {
            if abs1(h[(lo, lo - 1)]) <= atol {
                h[(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = (h[(hi, hi)], t[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }

        // infinite eigenvalue at the bottom of the block
        if t[(hi, hi)].norm() <= btol {
            t[(hi, hi)] = zero();
            let (c, s) = givens(h[(hi, hi)], h[(hi, hi - 1)]);
            rot_cols(&mut h, hi - 1, lo..=hi, c, s);
            rot_cols(&mut t, hi - 1, lo..=hi - 1, c, s);
            h[(hi, hi - 1)] = zero();
            out[hi] = (h[(hi, hi)], zero());
            hi -= 1;
            iter = 0;
            continue;
        }

        // a negligible diagonal entry of T higher up: split at the top, or chase it down
        for j in lo..hi {
            if t[(j, j)].norm() > btol {
                continue;
            }
            t[(j, j)] = zero();
            if j == lo {
                let (c, s) = givens(h[(lo, lo)], h[(lo + 1, lo)]);
                rot_rows(&mut h, lo, lo..=hi, c, s);
                rot_rows(&mut t, lo, lo + 1..=hi, c, s);
                h[(lo + 1, lo)] = zero();
            } else {
                for k in j..hi {
                    let (c, s) = givens(t[(k, k + 1)], t[(k + 1, k + 1)]);
                    rot_rows(&mut t, k, k + 1..=hi, c, s);
                    t[(k + 1, k + 1)] = zero();
                    rot_rows(&mut h, k, k - 1..=hi, c, s);
                    let (c, s) = givens(h[(k + 1, k)], h[(k + 1, k - 1)]);
                    rot_cols(&mut h, k - 1, lo..=k + 1, c, s);
                    rot_cols(&mut t, k - 1, lo..=k - 1, c, s);
                    h[(k + 1, k - 1)] = zero();
                }
            }
            continue 'outer;
        }

        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::NoConvergence("QZ iteration"));
        }
        let shift = if iter.is_multiple_of(11) {
            h[(hi, hi)] / t[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]) / t[(hi, hi)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, &t, hi)
        };

        // implicit single-shift QZ sweep over [lo, hi]
        let mut x = h[(lo, lo)] - shift * t[(lo, lo)];
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let col0 = if k > lo { k - 1 } else { lo };
            rot_rows(&mut h, k, col0..=hi, c, s);
            rot_rows(&mut t, k, k..=hi, c, s);
            if k > lo {
                h[(k + 1, k - 1)] = zero();
            }
            // restore triangularity of T
            let (c, s) = givens(t[(k + 1, k + 1)], t[(k + 1, k)]);
            rot_cols(&mut t, k, lo..=k + 1, c, s);
            rot_cols(&mut h, k, lo..=(k + 2).min(hi), c, s);
            t[(k + 1, k)] = zero();
            if k + 2 <= hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    Ok(out)
}

/// Eigenvalue of the trailing 2×2 pencil closest to `h[hi][hi] / t[hi][hi]`.
fn wilkinson_shift(h: &CMatrix, t: &CMatrix, hi: usize) -> Complex64 {
    let k = hi - 1;
    let (a11, a12, a21, a22) = (h[(k, k)], h[(k, hi)], h[(hi, k)], h[(hi, hi)]);
    let (b11, b12, b22) = (t[(k, k)], t[(k, hi)], t[(hi, hi)]);
    let target = a22 / b22;
    if b11.norm() == 0.0 {
        return target;
    }
    // det([[a11 - μ b11, a12 - μ b12], [a21, a22 - μ b22]]) = p μ² + q μ + r
    let p = b11 * b22;
    let q = -(a11 * b22 + a22 * b11) + a21 * b12;
    let r = a11 * a22 - a12 * a21;
    let disc = (q * q - p * r * 4.0).sqrt();
    let mu1 = (-q + disc) / (p * 2.0);
    let mu2 = (-q - disc) / (p * 2.0);
    let pick = if (mu1 - target).norm() <= (mu2 - target).norm() { mu1 } else { mu2 };
    if pick.re.is_finite() && pick.im.is_finite() {
        pick
    } else {
        target
    }
}
