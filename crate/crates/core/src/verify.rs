//! Independent oracles and theorem-level checks over fixed and seeded ensembles.
//!
//! Every check returns a [`VerificationReport`]. Reports of one subject over many
//! cases are merged by [`run_suite`], which gives each case its own ChaCha8
//! stream derived from `(seed, case index)` so that parallel and serial runs
//! agree bit for bit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{check_theorem_2_1, frame_transforms, projected_support};
use crate::linalg::{
    a_t, cartesian_decompose, hermitian_eigenvalues_unchecked, sigma_min, spectral_norm, spectral_split, CMatrix,
    CartesianPair, ComplexMatrix, Direction2, ExtendedReal, DEFAULT_SPLIT_TOL,
};
use crate::pencil::{pencil_spectrum_geig, PencilSpectrum, DEFAULT_TOL};
use crate::scale::{
    check_unit3, exposed_face, horizontal_segments_2d, polygon_from_eigenvalues, support_2d, support_unchecked,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID: usize = 360;
/// Number of θ values scanned by the Lemma 2.3 and Theorem 2.5 checks.
pub const THETA_GRID: usize = 720;
pub const THEOREM_2_1_TOL: f64 = 1e-9;
pub const REMARK_2_2_IDENTITY_TOL: f64 = 1e-12;
pub const REMARK_2_2_SUPPORT_TOL: f64 = 1e-9;
/// `σ_min(A_t) ≤ LEMMA_ROOT_TOL·s_t` at every real root, `s_t = |t1|·‖A1‖ + |t2|·‖A2‖`.
pub const LEMMA_ROOT_TOL: f64 = 1e-8;
/// Grid points with `σ_min(A_t) ≤ LEMMA_GRID_TOL·s_t` need a nearby root.
pub const LEMMA_GRID_TOL: f64 = 1e-10;
pub const NORMALITY_TOL: f64 = 1e-10;
pub const REMARK_2_4_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Theorem21,
    Remark22,
    Lemma23,
    Remark24,
    Theorem25,
}

impl Subject {
    pub const ALL: [Subject; 5] = [
        Subject::Theorem21,
        Subject::Remark22,
        Subject::Lemma23,
        Subject::Remark24,
        Subject::Theorem25,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Subject::Theorem21 => "thm-2.1",
            Subject::Remark22 => "rmk-2.2",
            Subject::Lemma23 => "lemma-2.3",
            Subject::Remark24 => "rmk-2.4",
            Subject::Theorem25 => "thm-2.5",
        }
    }

    /// Subjects whose hypotheses exclude singular pencils.
    pub fn needs_regular_pencil(&self) -> bool {
        matches!(self, Subject::Lemma23 | Subject::Theorem25)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2.1" | "thm-2.1" => Ok(Subject::Theorem21),
            "2.2" | "rmk-2.2" => Ok(Subject::Remark22),
            "2.3" | "lemma-2.3" => Ok(Subject::Lemma23),
            "2.4" | "rmk-2.4" => Ok(Subject::Remark24),
            "2.5" | "thm-2.5" => Ok(Subject::Theorem25),
            _ => Err(Error::Validation(format!("unknown subject '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
    NotApplicable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Passed => "passed",
            Status::Failed => "failed",
            Status::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseRecord {
    pub label: String,
    pub status: Status,
    pub residual: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub subject: Subject,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    pub details: Vec<CaseRecord>,
    pub seed: Option<u64>,
}

impl VerificationReport {
    /// A report whose status follows from `max_residual ≤ tolerance`.
    pub fn from_records(subject: Subject, tolerance: f64, details: Vec<CaseRecord>) -> Self {
        let max_residual = details.iter().fold(0.0_f64, |a, r| a.max(r.residual));
        let status = if max_residual <= tolerance {
            Status::Passed
        } else {
            Status::Failed
        };
        Self {
            subject,
            status,
            max_residual,
            tolerance,
            details,
            seed: None,
        }
    }

    pub fn not_applicable(subject: Subject, tolerance: f64, note: impl Into<String>) -> Self {
        Self {
            subject,
            status: Status::NotApplicable,
            max_residual: 0.0,
            tolerance,
            details: vec![CaseRecord {
                label: "hypotheses".into(),
                status: Status::NotApplicable,
                residual: 0.0,
                note: note.into(),
            }],
            seed: None,
        }
    }

    /// Not-applicable reports do not count as failures.
    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }

    /// One record per case, labeled by the caller.
    pub fn merge(subject: Subject, tolerance: f64, cases: Vec<(String, VerificationReport)>, seed: Option<u64>) -> Self {
        let details: Vec<CaseRecord> = cases
            .into_iter()
            .map(|(label, r)| {
                let note = r
                    .details
                    .iter()
                    .filter(|d| d.status != Status::Passed)
                    .map(|d| format!("{}: {}", d.label, d.note))
                    .collect::<Vec<_>>()
                    .join("; ");
                CaseRecord {
                    label,
                    status: r.status,
                    residual: r.max_residual,
                    note,
                }
            })
            .collect();
        let max_residual = details.iter().fold(0.0_f64, |a, r| a.max(r.residual));
        let status = if details.iter().any(|d| d.status == Status::Failed) || max_residual > tolerance {
            Status::Failed
        } else if !details.is_empty() && details.iter().all(|d| d.status == Status::NotApplicable) {
            Status::NotApplicable
        } else {
            Status::Passed
        };
        Self {
            subject,
            status,
            max_residual,
            tolerance,
            details,
            seed,
        }
    }
}

fn record(label: impl Into<String>, residual: f64, tolerance: f64, note: impl Into<String>) -> CaseRecord {
    CaseRecord {
        label: label.into(),
        status: if residual <= tolerance { Status::Passed } else { Status::Failed },
        residual,
        note: note.into(),
    }
}

// ---------------------------------------------------------------------------
// random ensembles

/// Matrix with independent standard complex Gaussian entries.
pub fn complex_gaussian(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * FRAC_1_SQRT_2
    })
}

/// `(G + G*)/2`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = complex_gaussian(n, rng);
    ComplexMatrix::new((&g + g.adjoint()) * Complex64::new(0.5, 0.0)).expect("finite square matrix")
}

/// Haar unitary: `Q` from the QR factorization of a complex Gaussian matrix,
/// with the phases of `diag(R)` moved into `Q`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = complex_gaussian(n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

pub fn random_hermitian_pair(n: usize, rng: &mut impl Rng) -> CartesianPair {
    let a1 = random_hermitian(n, rng);
    let a2 = random_hermitian(n, rng);
    CartesianPair::new(a1, a2).expect("Hermitian by construction")
}

/// `U·diag(z)·U*` with Haar `U` and complex Gaussian `z`.
pub fn random_normal(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    let z = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ComplexMatrix::new(&u * z * u.adjoint()).expect("finite square matrix")
}

/// Hermitian pair sharing a null vector, so `det(A1 + λ·A2) ≡ 0`.
pub fn random_singular_pencil(n: usize, rng: &mut impl Rng) -> Result<CartesianPair> {
    if n < 2 {
        return Err(Error::Validation("a singular pencil with nonzero A2 needs n ≥ 2".into()));
    }
    let v = random_unitary(n, rng).column(0).into_owned();
    let p = CMatrix::identity(n, n) - &v * v.adjoint();
    let compress = |m: ComplexMatrix| {
        let c = &p * m.matrix() * &p;
        ComplexMatrix::new((&c + c.adjoint()) * Complex64::new(0.5, 0.0)).expect("finite square matrix")
    };
    let a1 = compress(random_hermitian(n, rng));
    let a2 = compress(random_hermitian(n, rng));
    CartesianPair::new(a1, a2)
}

pub fn random_direction(rng: &mut impl Rng) -> Direction2 {
    Direction2::from_angle(rng.random_range(0.0..2.0 * PI))
}

pub fn random_unit3(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-6 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

// ---------------------------------------------------------------------------
// brute-force support oracle

/// Hermitian `C` with `0 ≤ C ≤ I`.
#[derive(Clone, Debug)]
pub struct PositiveContraction {
    pub c: ComplexMatrix,
}

/// `V·diag(s)·V*` with Haar `V` and `s` uniform in `[0, 1]ⁿ`.
pub fn sample_positive_contraction(n: usize, rng: &mut impl Rng) -> PositiveContraction {
    let v = random_unitary(n, rng);
    let s = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(rng.random::<f64>(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let c = &v * s * v.adjoint();
    PositiveContraction {
        c: ComplexMatrix::new((&c + c.adjoint()) * Complex64::new(0.5, 0.0)).expect("finite square matrix"),
    }
}

/// `(τ(C), τ(A1·C), τ(A2·C))`.
pub fn scale_point(pair: &CartesianPair, c: &CMatrix) -> [f64; 3] {
    let n = pair.dim() as f64;
    let tau = |m: &CMatrix| m.trace().re / n;
    [
        tau(c),
        tau(&(pair.a1().matrix() * c)),
        tau(&(pair.a2().matrix() * c)),
    ]
}

/// Largest `u·p` over scale points of sampled contractions, together with
/// `C = 0`, `C = I` and the spectral projection `P+` of `M(u)`.
pub fn oracle_support(pair: &CartesianPair, u: [f64; 3], n_samples: usize, rng: &mut impl Rng) -> Result<f64> {
    check_unit3(u)?;
    if n_samples < 100 {
        return Err(Error::Validation(format!("need at least 100 samples, got {n_samples}")));
    }
    let n = pair.dim();
    let dot = |p: [f64; 3]| u[0] * p[0] + u[1] * p[1] + u[2] * p[2];
    let mut best = 0.0_f64;
    best = best.max(dot(scale_point(pair, &CMatrix::identity(n, n))));
    let split = spectral_split(&pair.combination(u), DEFAULT_SPLIT_TOL)?;
    best = best.max(dot(scale_point(pair, &split.plus)));
    for _ in 0..n_samples {
        let c = sample_positive_contraction(n, rng);
        best = best.max(dot(scale_point(pair, c.c.matrix())));
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// subjects

fn direction_label(t: Direction2) -> String {
    format!("t=({:.6}, {:.6})", t.t1(), t.t2())
}

/// Support-function comparison of `Q_t(B(A))` and `R_t(B(A_t))` for each `t`.
pub fn verify_theorem_2_1(pair: &CartesianPair, directions: &[Direction2], grid: usize) -> Result<VerificationReport> {
    let deviations: Vec<Result<f64>> = directions
        .par_iter()
        .map(|&t| check_theorem_2_1(pair, t, grid))
        .collect();
    let mut details = Vec::with_capacity(directions.len());
    for (t, dev) in directions.iter().zip(deviations) {
        details.push(record(direction_label(*t), dev?, THEOREM_2_1_TOL, ""));
    }
    Ok(VerificationReport::from_records(Subject::Theorem21, THEOREM_2_1_TOL, details))
}

/// `π_t = R_tᵀ·Q_t`, and when a pair is supplied, `h_{π_t(B(A))} = h_{B(A_t)}`
/// on `grid` directions. Residuals are scaled by their tolerances, so the
/// report tolerance is 1.
pub fn verify_remark_2_2(t: Direction2, pair: Option<&CartesianPair>, grid: usize) -> Result<VerificationReport> {
    let f = frame_transforms(t);
    let identity = (f.r.transpose() * f.q - f.pi).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut details = vec![record(
        format!("{} identity", direction_label(t)),
        identity / REMARK_2_2_IDENTITY_TOL,
        1.0,
        format!("max |π − RᵀQ| = {identity:e}"),
    )];
    if let Some(pair) = pair {
        if grid < 8 {
            return Err(Error::Validation(format!("grid size must be at least 8, got {grid}")));
        }
        let eigs = hermitian_eigenvalues_unchecked(a_t(pair, f.t).matrix());
        let pit = f.pi.transpose();
        let mut worst = 0.0_f64;
        for k in 0..grid {
            let (s, c) = (2.0 * PI * k as f64 / grid as f64).sin_cos();
            let u = pit * nalgebra::Vector3::new(c, s, 0.0);
            let lhs = support_unchecked(pair, [u[0], u[1], u[2]]);
            let rhs = support_2d(&eigs, c, s);
            worst = worst.max((lhs - rhs).abs());
        }
        details.push(record(
            format!("{} support", direction_label(t)),
            worst / REMARK_2_2_SUPPORT_TOL,
            1.0,
            format!("max support deviation = {worst:e}"),
        ));
    }
    Ok(VerificationReport::from_records(Subject::Remark22, 1.0, details))
}

/// Directions of the scan used by Lemma 2.3 and Theorem 2.5:
/// `θ_k = −π/2 + (k+1)·π/720`, the last one exactly `(0, 1)`.
pub fn theta_grid() -> Vec<Direction2> {
    (0..THETA_GRID)
        .map(|k| {
            if k + 1 == THETA_GRID {
                Direction2::from_tan(ExtendedReal::Infinity)
            } else {
                Direction2::from_angle(-FRAC_PI_2 + (k + 1) as f64 * PI / THETA_GRID as f64)
            }
        })
        .collect()
}

/// Distance between two lines through the origin, as angles modulo π.
fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn relative_sigma_min(m: &CMatrix) -> f64 {
    let norm = spectral_norm(m);
    if norm == 0.0 {
        0.0
    } else {
        sigma_min(m) / norm
    }
}

/// `σ_min(A_t) / (|t1|·‖A1‖ + |t2|·‖A2‖)`. The denominator is the size of
/// `A_t` before cancellation, so a vanishing `A_t` (always the case for
/// `n = 1` at a root) reads as singular rather than `0/0`.
fn relative_sigma_min_at(pair: &CartesianPair, t: Direction2) -> f64 {
    let scale = t.t1().abs() * spectral_norm(pair.a1().matrix()) + t.t2().abs() * spectral_norm(pair.a2().matrix());
    if scale == 0.0 {
        0.0
    } else {
        sigma_min(a_t(pair, t).matrix()) / scale
    }
}

fn regular_spectrum(pair: &CartesianPair, subject: Subject, tol: f64) -> Result<std::result::Result<PencilSpectrum, VerificationReport>> {
    pair.require_nonzero_a2()?;
    let spec = pencil_spectrum_geig(pair, tol)?;
    if spec.regular {
        Ok(Ok(spec))
    } else {
        let tolerance = if subject == Subject::Theorem25 { 0.0 } else { 1.0 };
        Ok(Err(VerificationReport::not_applicable(
            subject,
            tolerance,
            "singular pencil: det(A1 + λ·A2) vanishes identically",
        )))
    }
}

/// Both directions of `tan θ_t ∈ σ(A1, A2) ⇔ 0 ∈ σ(A_t)`, including `θ_t = π/2`.
///
/// Roots must satisfy `σ_min(A_t) ≤ 1e-8·s_t`; grid directions with
/// `σ_min(A_t) ≤ 1e-10·s_t` need a root within one grid step. Residuals are
/// scaled so that the tolerance is 1.
pub fn verify_lemma_2_3(pair: &CartesianPair, tol: f64) -> Result<VerificationReport> {
    let spec = match regular_spectrum(pair, Subject::Lemma23, tol)? {
        Ok(s) => s,
        Err(report) => return Ok(report),
    };
    let mut details = Vec::new();
    let mut root_angles: Vec<f64> = spec.real_subset.iter().map(|r| r.atan()).collect();
    for &r in &spec.real_subset {
        let t = Direction2::from_tan(ExtendedReal::Finite(r));
        let rel = relative_sigma_min_at(pair, t);
        details.push(record(format!("root {r:.12}"), rel / LEMMA_ROOT_TOL, 1.0, format!("σ_min(A_t)/s_t = {rel:e}")));
    }
    if spec.has_infinity {
        root_angles.push(FRAC_PI_2);
        let rel = relative_sigma_min(pair.a2().matrix());
        details.push(record("root inf", rel / LEMMA_ROOT_TOL, 1.0, format!("σ_min(A2)/‖A2‖ = {rel:e}")));
    }
    let step = PI / THETA_GRID as f64;
    let flagged: Vec<(Direction2, f64)> = theta_grid()
        .into_par_iter()
        .filter_map(|t| {
            let rel = relative_sigma_min_at(pair, t);
            (rel <= LEMMA_GRID_TOL).then_some((t, rel))
        })
        .collect();
    for (t, rel) in flagged {
        let theta = t.theta();
        let nearest = root_angles
            .iter()
            .map(|&a| angular_distance(a, theta))
            .fold(FRAC_PI_2, f64::min);
        details.push(record(
            format!("grid θ={theta:.12}"),
            nearest / step,
            1.0,
            format!("σ_min(A_t)/s_t = {rel:e}, nearest root direction {nearest:e} rad away"),
        ));
    }
    Ok(VerificationReport::from_records(Subject::Lemma23, 1.0, details))
}

/// The five conditions of the face correspondence evaluated at one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceConditions {
    /// `0 ∈ σ(A_t)`.
    pub kernel: bool,
    /// `tan θ_t` is a real point of `σ(A1, A2)` (or `∞` with `A2` singular).
    pub pencil_root: bool,
    /// `B(A_t)` has a boundary segment parallel to the x-axis.
    pub flat_polygon: bool,
    /// `Q_t(B(A))` has a boundary segment parallel to the x-axis.
    pub flat_projection: bool,
    /// `B(A)` has an exposed face with positive x-extent in direction `(0, t1, t2)`.
    pub face: bool,
}

impl FaceConditions {
    pub fn as_array(&self) -> [bool; 5] {
        [self.kernel, self.pencil_root, self.flat_polygon, self.flat_projection, self.face]
    }

    pub fn agree(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&b| b == a[0])
    }

    fn describe(&self) -> String {
        self.as_array()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Width in x of the face of `Q_t(B(A))` exposed by `(0, t1, t2)`, from a
/// second difference of the projected support function with step `delta`.
pub fn projected_face_width(pair: &CartesianPair, t: Direction2, delta: f64) -> f64 {
    let t = t.canonical();
    let h = |x: f64| {
        let v = [x, t.t1(), t.t2()];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        projected_support(pair, t, [v[0] / r, v[1] / r, v[2] / r]).expect("in-plane unit direction") * r
    };
    (h(delta) + h(-delta) - 2.0 * h(0.0)) / delta
}

/// Evaluates the five conditions at `t`. `scale = max(1, ‖A_t‖)` sets all
/// zero thresholds to `tol·scale`.
pub fn face_conditions(pair: &CartesianPair, spec: &PencilSpectrum, t: Direction2, tol: f64) -> FaceConditions {
    let t = t.canonical();
    let at = a_t(pair, t);
    let scale = spectral_norm(at.matrix()).max(1.0);
    let n = pair.dim() as f64;

    let kernel = sigma_min(at.matrix()) <= tol * scale;
    let pencil_root = match t.tan_theta() {
        ExtendedReal::Infinity => spec.has_infinity,
        ExtendedReal::Finite(r) => spec.real_subset.iter().any(|&x| (r - x).abs() <= tol * (1.0 + x.abs())),
    };
    let poly = polygon_from_eigenvalues(&hermitian_eigenvalues_unchecked(at.matrix()));
    let flat_polygon = !horizontal_segments_2d(&poly, tol * scale).is_empty();
    let flat_projection = projected_face_width(pair, t, 2.0 * tol * scale) >= 0.5 / n;
    let face = exposed_face(pair, [0.0, t.t1(), t.t2()], tol)
        .map(|f| f.x_extent > tol)
        .unwrap_or(false);
    FaceConditions {
        kernel,
        pencil_root,
        flat_polygon,
        flat_projection,
        face,
    }
}

/// Agreement of the five face conditions at every real root, at `∞` when `A2`
/// is singular, and on the θ scan. The residual counts disagreeing directions.
pub fn verify_theorem_2_5(pair: &CartesianPair, tol: f64) -> Result<VerificationReport> {
    let spec = match regular_spectrum(pair, Subject::Theorem25, tol)? {
        Ok(s) => s,
        Err(report) => return Ok(report),
    };
    let mut candidates: Vec<(String, Direction2)> = spec
        .real_subset
        .iter()
        .map(|&r| (format!("root {r:.12}"), Direction2::from_tan(ExtendedReal::Finite(r))))
        .collect();
    if spec.has_infinity {
        candidates.push(("root inf".into(), Direction2::from_tan(ExtendedReal::Infinity)));
    }
    candidates.extend(theta_grid().into_iter().map(|t| (format!("grid θ={:.12}", t.theta()), t)));

    let evaluated: Vec<FaceConditions> = candidates
        .par_iter()
        .map(|(_, t)| face_conditions(pair, &spec, *t, tol))
        .collect();
    let details = candidates
        .into_iter()
        .zip(evaluated)
        .filter(|(_, c)| c.as_array().iter().any(|&b| b))
        .map(|((label, _), c)| {
            let residual = if c.agree() { 0.0 } else { 1.0 };
            record(label, residual, 0.0, format!("conditions (1..5) = {}", c.describe()))
        })
        .collect();
    Ok(VerificationReport::from_records(Subject::Theorem25, 0.0, details))
}

/// For normal `A` with invertible `A2`, every finite pencil eigenvalue is real.
pub fn verify_remark_2_4(pair: &CartesianPair, tol: f64) -> Result<VerificationReport> {
    let a = pair.reconstruct();
    let m = a.matrix();
    let norm = spectral_norm(m);
    let commutator = spectral_norm(&(m * m.adjoint() - m.adjoint() * m));
    if commutator > NORMALITY_TOL * norm * norm {
        return Ok(VerificationReport::not_applicable(
            Subject::Remark24,
            REMARK_2_4_TOL,
            format!("A is not normal: ‖AA* − A*A‖ = {commutator:e}"),
        ));
    }
    if pair.a2_is_zero() || crate::pencil::a2_singular(pair, tol) {
        return Ok(VerificationReport::not_applicable(
            Subject::Remark24,
            REMARK_2_4_TOL,
            "A2 is not invertible",
        ));
    }
    let spec = pencil_spectrum_geig(pair, tol)?;
    let details = spec
        .finite
        .iter()
        .map(|z| {
            let residual = z.im.abs() / (1.0 + z.norm());
            record(format!("λ = {:.12}{:+.12}i", z.re, z.im), residual, REMARK_2_4_TOL, "")
        })
        .collect();
    Ok(VerificationReport::from_records(Subject::Remark24, REMARK_2_4_TOL, details))
}

/// Dispatches one subject on one pair; `directions` feeds Theorem 2.1 and
/// Remark 2.2.
pub fn verify_subject(
    subject: Subject,
    pair: &CartesianPair,
    directions: &[Direction2],
    grid: usize,
    tol: f64,
) -> Result<VerificationReport> {
    match subject {
        Subject::Theorem21 => verify_theorem_2_1(pair, directions, grid),
        Subject::Remark22 => {
            let cases = directions
                .iter()
                .map(|&t| verify_remark_2_2(t, Some(pair), grid).map(|r| (direction_label(t), r)))
                .collect::<Result<Vec<_>>>()?;
            let mut report = VerificationReport::merge(Subject::Remark22, 1.0, cases, None);
            report.details.retain(|d| d.status != Status::NotApplicable);
            Ok(report)
        }
        Subject::Lemma23 => verify_lemma_2_3(pair, tol),
        Subject::Remark24 => verify_remark_2_4(pair, tol),
        Subject::Theorem25 => verify_theorem_2_5(pair, tol),
    }
}

/// Axis directions plus `count` seeded random ones.
pub fn test_directions(count: usize, rng: &mut impl Rng) -> Vec<Direction2> {
    let mut out = vec![
        Direction2::from_tan(ExtendedReal::Finite(0.0)),
        Direction2::from_tan(ExtendedReal::Finite(1.0)),
        Direction2::from_tan(ExtendedReal::Infinity),
        Direction2::from_tan(ExtendedReal::Finite(-1.0)),
    ];
    out.extend((0..count).map(|_| random_direction(rng)));
    out
}

// ---------------------------------------------------------------------------
// suite

/// A named pair used by the built-in suite.
#[derive(Clone, Debug)]
pub struct FixedExample {
    pub name: &'static str,
    pub pair: CartesianPair,
}

fn real_pair(n: usize, a1: &[f64], a2: &[f64]) -> CartesianPair {
    CartesianPair::new(
        ComplexMatrix::from_real(n, a1).expect("valid literal"),
        ComplexMatrix::from_real(n, a2).expect("valid literal"),
    )
    .expect("Hermitian literal")
}

/// Worked examples with known answers.
pub fn fixed_examples() -> Vec<FixedExample> {
    let from_a = |re: &[f64], im: &[f64]| {
        let n = (re.len() as f64).sqrt() as usize;
        cartesian_decompose(&ComplexMatrix::from_row_major(n, re, im).expect("valid literal"))
    };
    vec![
        FixedExample {
            name: "diag(1,-1) / I",
            pair: real_pair(2, &[1., 0., 0., -1.], &[1., 0., 0., 1.]),
        },
        FixedExample {
            name: "diag(0,1) / diag(1,0)",
            pair: real_pair(2, &[0., 0., 0., 1.], &[1., 0., 0., 0.]),
        },
        FixedExample {
            name: "diag(1,-1) / pauli-x",
            pair: real_pair(2, &[1., 0., 0., -1.], &[0., 1., 1., 0.]),
        },
        FixedExample {
            name: "diag(1.3,-0.7) / I",
            pair: real_pair(2, &[1.3, 0., 0., -0.7], &[1., 0., 0., 1.]),
        },
        FixedExample {
            name: "singular [[1,0],[0,0]] / [[2,0],[0,0]]",
            pair: real_pair(2, &[1., 0., 0., 0.], &[2., 0., 0., 0.]),
        },
        FixedExample {
            name: "A = diag(1+i, -1+i)",
            pair: from_a(&[1., 0., 0., -1.], &[1., 0., 0., 1.]),
        },
        FixedExample {
            name: "A = diag(i, 1)",
            pair: from_a(&[0., 0., 0., 1.], &[1., 0., 0., 0.]),
        },
        FixedExample {
            name: "1x1 2 / 1",
            pair: real_pair(1, &[2.], &[1.]),
        },
        FixedExample {
            name: "A = [[0,1],[0,0]]",
            pair: from_a(&[0., 1., 0., 0.], &[0., 0., 0., 0.]),
        },
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Random Hermitian pairs for Theorem 2.1.
    pub hermitian_pairs: usize,
    /// Random pairs for Lemma 2.3 and Theorem 2.5.
    pub pencil_pairs: usize,
    /// Random normal matrices for Remark 2.4.
    pub normal_matrices: usize,
    /// Random directions checked against the `π_t = R_tᵀ·Q_t` identity.
    pub remark_directions: usize,
    /// Random pairs for the Remark 2.2 support comparison.
    pub remark_pairs: usize,
    /// Random directions per pair for Theorem 2.1.
    pub t_per_pair: usize,
    pub grid: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tol: f64,
    pub include_fixed: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            hermitian_pairs: 50,
            pencil_pairs: 200,
            normal_matrices: 100,
            remark_directions: 1000,
            remark_pairs: 20,
            t_per_pair: 64,
            grid: DEFAULT_GRID,
            n_min: 2,
            n_max: 8,
            tol: DEFAULT_TOL,
            include_fixed: true,
        }
    }
}

impl SuiteConfig {
    /// Fixed examples only.
    pub fn empty() -> Self {
        Self {
            hermitian_pairs: 0,
            pencil_pairs: 0,
            normal_matrices: 0,
            remark_directions: 0,
            remark_pairs: 0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Validation(format!(
                "invalid dimension range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.grid < 8 {
            return Err(Error::Validation(format!("grid size must be at least 8, got {}", self.grid)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Validation(format!("tolerance must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }
}

const STREAM_HERMITIAN: u64 = 1;
const STREAM_PENCIL: u64 = 2;
const STREAM_NORMAL: u64 = 3;
const STREAM_REMARK_T: u64 = 4;
const STREAM_REMARK_PAIR: u64 = 5;
const STREAM_FIXED: u64 = 6;

/// Independent generator for case `index` of ensemble `tag`.
pub fn case_rng(seed: u64, tag: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((tag << 32) | index as u64);
    rng
}

fn dimension(config: &SuiteConfig, rng: &mut impl Rng) -> usize {
    rng.random_range(config.n_min..=config.n_max)
}

type Case = (String, VerificationReport);

fn run_cases<F>(count: usize, f: F) -> Result<Vec<Case>>
where
    F: Fn(usize) -> Result<Case> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Runs the requested subjects over the fixed examples and the seeded
/// ensembles; one merged report per subject, in the order of `subjects`.
pub fn run_suite(config: &SuiteConfig, seed: u64, subjects: &[Subject]) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let fixed = if config.include_fixed { fixed_examples() } else { Vec::new() };
    let tol = config.tol;
    let mut reports = Vec::new();
    for &subject in subjects {
        let mut cases: Vec<Case> = Vec::new();
        let tolerance = match subject {
            Subject::Theorem21 => {
                cases.extend(run_cases(fixed.len(), |i| {
                    let mut rng = case_rng(seed, STREAM_FIXED, i);
                    let ts = test_directions(config.t_per_pair, &mut rng);
                    Ok((fixed[i].name.to_string(), verify_theorem_2_1(&fixed[i].pair, &ts, config.grid)?))
                })?);
                cases.extend(run_cases(config.hermitian_pairs, |i| {
                    let mut rng = case_rng(seed, STREAM_HERMITIAN, i);
                    let n = dimension(config, &mut rng);
                    let pair = random_hermitian_pair(n, &mut rng);
                    let ts: Vec<Direction2> = (0..config.t_per_pair).map(|_| random_direction(&mut rng)).collect();
                    Ok((format!("hermitian #{i} n={n}"), verify_theorem_2_1(&pair, &ts, config.grid)?))
                })?);
                THEOREM_2_1_TOL
            }
            Subject::Remark22 => {
                let axes = [
                    Direction2::from_tan(ExtendedReal::Finite(0.0)),
                    Direction2::from_tan(ExtendedReal::Infinity),
                    Direction2::from_tan(ExtendedReal::Finite(1.0)),
                ];
                if config.include_fixed {
                    for t in axes {
                        cases.push((format!("fixed {}", direction_label(t)), verify_remark_2_2(t, Some(&fixed[0].pair), config.grid)?));
                    }
                }
                cases.extend(run_cases(config.remark_directions, |i| {
                    let mut rng = case_rng(seed, STREAM_REMARK_T, i);
                    let t = random_direction(&mut rng);
                    Ok((format!("direction #{i}"), verify_remark_2_2(t, None, config.grid)?))
                })?);
                cases.extend(run_cases(config.remark_pairs, |i| {
                    let mut rng = case_rng(seed, STREAM_REMARK_PAIR, i);
                    let n = dimension(config, &mut rng);
                    let pair = random_hermitian_pair(n, &mut rng);
                    let t = random_direction(&mut rng);
                    Ok((format!("hermitian #{i} n={n}"), verify_remark_2_2(t, Some(&pair), config.grid)?))
                })?);
                1.0
            }
            Subject::Lemma23 | Subject::Theorem25 => {
                let verify = |pair: &CartesianPair| {
                    if subject == Subject::Lemma23 {
                        verify_lemma_2_3(pair, tol)
                    } else {
                        verify_theorem_2_5(pair, tol)
                    }
                };
                for ex in fixed.iter().filter(|ex| !ex.pair.a2_is_zero()) {
                    cases.push((ex.name.to_string(), verify(&ex.pair)?));
                }
                cases.extend(run_cases(config.pencil_pairs, |i| {
                    let mut rng = case_rng(seed, STREAM_PENCIL, i);
                    let n = dimension(config, &mut rng);
                    let pair = random_hermitian_pair(n, &mut rng);
                    Ok((format!("pencil #{i} n={n}"), verify(&pair)?))
                })?);
                if subject == Subject::Lemma23 {
                    1.0
                } else {
                    0.0
                }
            }
            Subject::Remark24 => {
                for ex in &fixed {
                    cases.push((ex.name.to_string(), verify_remark_2_4(&ex.pair, tol)?));
                }
                cases.extend(run_cases(config.normal_matrices, |i| {
                    let mut rng = case_rng(seed, STREAM_NORMAL, i);
                    let n = dimension(config, &mut rng);
                    let pair = cartesian_decompose(&random_normal(n, &mut rng));
                    Ok((format!("normal #{i} n={n}"), verify_remark_2_4(&pair, tol)?))
                })?);
                REMARK_2_4_TOL
            }
        };
        reports.push(VerificationReport::merge(subject, tolerance, cases, Some(seed)));
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_plane_direction;
    use crate::scale::support_value;

    fn example(name: &str) -> CartesianPair {
        fixed_examples().into_iter().find(|e| e.name == name).unwrap().pair
    }

    #[test]
    fn contraction_invariants() {
        let mut rng = case_rng(7, 0, 0);
        for n in [1, 2, 5] {
            let c = sample_positive_contraction(n, &mut rng);
            let eigs = hermitian_eigenvalues_unchecked(c.c.matrix());
            assert!(eigs[0] >= -1e-12 && eigs[n - 1] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn oracle_attains_support() {
        let pair = example("diag(1,-1) / I");
        let mut rng = case_rng(1, 0, 0);
        let v = oracle_support(&pair, [0.0, 1.0, 0.0], 1000, &mut rng).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert!((oracle_support(&pair, [1.0, 0.0, 0.0], 100, &mut rng).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(oracle_support(&pair, [-1.0, 0.0, 0.0], 100, &mut rng).unwrap(), 0.0);
        assert!(oracle_support(&pair, [1.0, 0.0, 0.0], 10, &mut rng).is_err());
    }

    #[test]
    fn oracle_is_dominated_by_support_value() {
        let mut rng = case_rng(3, 0, 0);
        let pair = random_hermitian_pair(4, &mut rng);
        for _ in 0..20 {
            let u = random_unit3(&mut rng);
            let h = support_value(&pair, u).unwrap();
            let o = oracle_support(&pair, u, 200, &mut rng).unwrap();
            assert!((o - h).abs() <= 1e-10, "{o} vs {h}");
        }
    }

    #[test]
    fn lemma_on_fixed_examples() {
        for name in ["diag(1,-1) / I", "diag(0,1) / diag(1,0)", "diag(1,-1) / pauli-x", "diag(1.3,-0.7) / I", "1x1 2 / 1"] {
            let r = verify_lemma_2_3(&example(name), DEFAULT_TOL).unwrap();
            assert_eq!(r.status, Status::Passed, "{name}: {r:?}");
        }
        let r = verify_lemma_2_3(&example("diag(0,1) / diag(1,0)"), DEFAULT_TOL).unwrap();
        assert!(r.details.iter().any(|d| d.label == "root inf"));
        let r = verify_lemma_2_3(&example("singular [[1,0],[0,0]] / [[2,0],[0,0]]"), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn theorem_2_5_on_fixed_examples() {
        let r = verify_theorem_2_5(&example("diag(1,-1) / I"), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::Passed, "{r:?}");
        // two roots plus their grid hits
        assert!(r.details.iter().all(|d| d.note.ends_with("11111")));
        assert!(r.details.iter().any(|d| d.label.starts_with("root -1")));

        let r = verify_theorem_2_5(&example("diag(1,-1) / pauli-x"), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::Passed);
        assert!(r.details.is_empty());

        let r = verify_theorem_2_5(&example("diag(1.3,-0.7) / I"), DEFAULT_TOL).unwrap();
        assert_eq!(r.status, Status::Passed);
        let roots: Vec<&str> = r.details.iter().filter(|d| d.label.starts_with("root")).map(|d| d.label.as_str()).collect();
        assert_eq!(roots, vec!["root -1.300000000000", "root 0.700000000000"]);
    }

    #[test]
    fn remark_2_4_cases() {
        assert_eq!(verify_remark_2_4(&example("A = diag(1+i, -1+i)"), DEFAULT_TOL).unwrap().status, Status::Passed);
        assert_eq!(
            verify_remark_2_4(&example("diag(1,-1) / pauli-x"), DEFAULT_TOL).unwrap().status,
            Status::NotApplicable
        );
        assert_eq!(verify_remark_2_4(&example("A = diag(i, 1)"), DEFAULT_TOL).unwrap().status, Status::NotApplicable);
    }

    #[test]
    fn remark_2_2_axes() {
        let r = verify_remark_2_2(Direction2::from_tan(ExtendedReal::Infinity), None, 360).unwrap();
        assert_eq!(r.status, Status::Passed);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn face_width_matches_kernel() {
        let pair = example("diag(1,-1) / I");
        let t = Direction2::from_tan(ExtendedReal::Finite(1.0));
        assert!((projected_face_width(&pair, t, 1e-6) - 0.5).abs() < 1e-6);
        let t = Direction2::from_tan(ExtendedReal::Finite(0.3));
        assert!(projected_face_width(&pair, t, 1e-6).abs() < 1e-6);
    }

    #[test]
    fn fixed_only_suite_is_deterministic() {
        let a = run_suite(&SuiteConfig::empty(), 42, &Subject::ALL).unwrap();
        let b = run_suite(&SuiteConfig::empty(), 42, &Subject::ALL).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn in_plane_helper_is_unit() {
        let w = in_plane_direction(Direction2::from_angle(0.4), 1.1);
        assert!(((w[0] * w[0] + w[1] * w[1] + w[2] * w[2]) - 1.0).abs() < 1e-15);
    }
}
