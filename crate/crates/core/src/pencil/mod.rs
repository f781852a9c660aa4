//! Spectrum of the self-adjoint linear pencil `P(λ) = A1 + λ·A2`.
//!
//! `σ(A1, A2)` is the set of `λ ∈ ℂ` where `P(λ)` is singular, together with the
//! point `∞` whenever `A2` is singular. Two independent solvers are provided:
//! a complex QZ iteration on `(A1, −A2)` and an interpolated determinant
//! polynomial whose roots come from its companion matrix.

mod detpoly;
pub mod qz;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{sigma_min, spectral_norm, CMatrix, CartesianPair};

pub use detpoly::{determinant_coefficients, pencil_spectrum_detpoly};

/// Default tolerance for pencil classification and the reality filter.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    GeneralizedEig,
    DetPoly,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::GeneralizedEig => "generalized-eig",
            Method::DetPoly => "det-poly",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite eigenvalues that agree within the clustering tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilSpectrum {
    /// `false` when `det(A1 + λ·A2)` vanishes identically; `finite` is then empty.
    pub regular: bool,
    /// Finite eigenvalues with multiplicity, sorted by real then imaginary part.
    pub finite: Vec<Complex64>,
    pub clusters: Vec<EigenCluster>,
    /// `∞ ∈ σ(A1, A2)`, i.e. `A2` is singular.
    pub has_infinity: bool,
    /// Number of eigenvalues at infinity reported by the solver.
    pub infinite_count: usize,
    pub real_subset: Vec<f64>,
    pub method: Method,
    pub tol: f64,
}

impl PencilSpectrum {
    pub(crate) fn assemble(
        pair: &CartesianPair,
        regular: bool,
        mut finite: Vec<Complex64>,
        infinite_count: usize,
        method: Method,
        tol: f64,
    ) -> Self {
        if !regular {
            finite.clear();
        }
        sort_complex(&mut finite);
        let clusters = cluster(&finite, tol);
        let mut spec = PencilSpectrum {
            regular,
            finite,
            clusters,
            has_infinity: a2_singular(pair, tol),
            infinite_count: if regular { infinite_count } else { 0 },
            real_subset: Vec::new(),
            method,
            tol,
        };
        spec.real_subset = real_subset(&spec, tol);
        spec
    }

    /// Error out on singular pencils, whose spectrum is all of `ℂ ∪ {∞}`.
    pub fn require_regular(&self) -> Result<&Self> {
        if self.regular {
            Ok(self)
        } else {
            Err(Error::SingularPencil)
        }
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("tolerance must lie in (0, 1), got {tol}")))
    }
}

/// `σ_min(A2) ≤ tol·‖A2‖`.
pub fn a2_singular(pair: &CartesianPair, tol: f64) -> bool {
    let a2 = pair.a2().matrix();
    sigma_min(a2) <= tol * spectral_norm(a2)
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Greedy clustering of a sorted list within `tol·(1 + |λ|)`.
fn cluster(sorted: &[Complex64], tol: f64) -> Vec<EigenCluster> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &z in sorted {
        match out.iter_mut().find(|(c, _)| (z - *c).norm() <= tol * (1.0 + c.norm())) {
            Some(entry) => entry.1 += 1,
            None => out.push((z, 1)),
        }
    }
    out.into_iter()
        .map(|(value, multiplicity)| EigenCluster { value, multiplicity })
        .collect()
}

/// Real parts of the finite eigenvalues with `|Im λ| ≤ tol·(1 + |λ|)`,
/// ascending and deduplicated within `tol·(1 + |r|)`. `∞` is never included.
pub fn real_subset(spec: &PencilSpectrum, tol: f64) -> Vec<f64> {
    let mut reals: Vec<f64> = spec
        .finite
        .iter()
        .filter(|z| z.im.abs() <= tol * (1.0 + z.norm()))
        .map(|z| z.re)
        .collect();
    reals.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for r in reals {
        match out.last() {
            Some(&last) if (r - last).abs() <= tol * (1.0 + last.abs()) => {}
            _ => out.push(r),
        }
    }
    out
}

/// Pencil spectrum from complex QZ on `(A1, −A2)`, so that `λ = α/β` solves
/// `det(A1 + λ·A2) = 0`.
pub fn pencil_spectrum_geig(pair: &CartesianPair, tol: f64) -> Result<PencilSpectrum> {
    pair.require_nonzero_a2()?;
    check_tol(tol)?;
    let s1 = nonzero_or_one(spectral_norm(pair.a1().matrix()));
    let s2 = spectral_norm(pair.a2().matrix());
    let a = pair.a1().matrix() / Complex64::new(s1, 0.0);
    let b = -(pair.a2().matrix() / Complex64::new(s2, 0.0));
    let pairs = qz::generalized_eigenvalues(&a, &b)?;

    let regular = !pairs.iter().any(|(al, be)| al.norm() <= tol && be.norm() <= tol);
    let mut finite = Vec::new();
    let mut infinite = 0;
    for (al, be) in pairs {
        if be.norm() <= tol * al.norm() {
            infinite += 1;
            continue;
        }
        let lambda = al / be * (s1 / s2);
        if lambda.norm() * tol > s1 / s2 {
            infinite += 1;
        } else {
            finite.push(lambda);
        }
    }
    Ok(PencilSpectrum::assemble(pair, regular, finite, infinite, Method::GeneralizedEig, tol))
}

/// Spectrum by the requested method.
pub fn pencil_spectrum(pair: &CartesianPair, method: Method, tol: f64) -> Result<PencilSpectrum> {
    match method {
        Method::GeneralizedEig => pencil_spectrum_geig(pair, tol),
        Method::DetPoly => pencil_spectrum_detpoly(pair, tol),
    }
}

fn nonzero_or_one(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        1.0
    }
}

/// `σ_min(A1 + λ·A2) / (‖A1‖ + |λ|·‖A2‖)`; small values certify `λ ∈ σ(A1, A2)`.
pub fn root_certificate(pair: &CartesianPair, lambda: Complex64) -> f64 {
    let m: CMatrix = pair.a1().matrix() + pair.a2().matrix() * lambda;
    let scale = spectral_norm(pair.a1().matrix()) + lambda.norm() * spectral_norm(pair.a2().matrix());
    if scale == 0.0 {
        return 0.0;
    }
    sigma_min(&m) / scale
}

/// Smallest achievable maximum of `|a − b| / max(1, |b|)` over bijections between
/// the two lists, or `None` when their lengths differ.
pub fn bottleneck_match(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    if n == 0 {
        return Some(0.0);
    }
    assert!(n <= 20, "bottleneck matching is exponential in the list length");
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm() / b[j].norm().max(1.0);
    let mut dp = vec![f64::INFINITY; 1 << n];
    dp[0] = 0.0;
    for mask in 0usize..(1 << n) {
        if !dp[mask].is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                let v = dp[mask].max(cost(i, j));
                if v < dp[next] {
                    dp[next] = v;
                }
            }
        }
    }
    Some(dp[(1 << n) - 1])
}
