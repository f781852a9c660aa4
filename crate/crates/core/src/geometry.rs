//! The frame maps `Q_t`, `R_t`, `π_t` and the correspondence between horizontal
//! faces of `B(A)` and real points of `σ(A1, A2)`.
//!
//! `Q_t` projects `ℝ³` orthogonally onto `span{(1,0,0), (0,t1,t2)}` and `R_t`
//! rotates about the x-axis by `θ_t`. The projection `Q_t(B(A))` is the rotated
//! copy `R_t(B(A_t))` of the planar scale of `A_t = t1·A1 + t2·A2`; both sides
//! are compared here through their support functions.

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{a_t, hermitian_eigenvalues_unchecked, CartesianPair, Direction2, ExtendedReal};
use crate::pencil::{pencil_spectrum_geig, PencilSpectrum};
use crate::scale::{check_unit3, exposed_face, support_2d, support_unchecked, FaceDescriptor};

/// Default relative tolerance when matching a face's `tan θ_t` to a pencil root.
pub const DEFAULT_MATCH_TOL: f64 = 1e-6;
/// Minimum number of in-plane directions for [`check_theorem_2_1`].
pub const MIN_GRID: usize = 8;
const PLANE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameTransforms {
    /// Canonical direction (`t1 > 0`, or `(0, 1)`).
    pub t: Direction2,
    /// `θ_t ∈ (−π/2, π/2]`.
    pub theta: f64,
    pub tan_theta: ExtendedReal,
    pub q: Matrix3<f64>,
    pub r: Matrix3<f64>,
    pub pi: Matrix3<f64>,
}

pub fn frame_transforms(t: Direction2) -> FrameTransforms {
    let t = t.canonical();
    let (t1, t2) = (t.t1(), t.t2());
    #[rustfmt::skip]
    let q = Matrix3::new(
        1.0, 0.0, 0.0,
        0.0, t1 * t1, t1 * t2,
        0.0, t1 * t2, t2 * t2,
    );
    #[rustfmt::skip]
    let r = Matrix3::new(
        1.0, 0.0, 0.0,
        0.0, t1, -t2,
        0.0, t2, t1,
    );
    #[rustfmt::skip]
    let pi = Matrix3::new(
        1.0, 0.0, 0.0,
        0.0, t1, t2,
        0.0, 0.0, 0.0,
    );
    FrameTransforms {
        t,
        theta: t.theta(),
        tan_theta: t.tan_theta(),
        q,
        r,
        pi,
    }
}

fn mul(m: &Matrix3<f64>, w: [f64; 3]) -> [f64; 3] {
    let v = m * nalgebra::Vector3::new(w[0], w[1], w[2]);
    [v[0], v[1], v[2]]
}

/// Support function of `Q_t(B(A))` at a unit `w` in the range of `Q_t`:
/// `h_{B(A)}(Q_t·w)`.
pub fn projected_support(pair: &CartesianPair, t: Direction2, w: [f64; 3]) -> Result<f64> {
    check_unit3(w)?;
    let t = t.canonical();
    let off_plane = -t.t2() * w[1] + t.t1() * w[2];
    if off_plane.abs() > PLANE_TOL {
        return Err(Error::Validation(format!(
            "w = ({}, {}, {}) is not in span{{(1,0,0), (0,{},{})}} (distance {off_plane:e})",
            w[0],
            w[1],
            w[2],
            t.t1(),
            t.t2()
        )));
    }
    let qw = mul(&frame_transforms(t).q, w);
    Ok(support_unchecked(pair, qw))
}

/// Support function of `R_t(B(A_t))` at a unit `w`: the planar support of
/// `B(A_t)` at the first two coordinates of `R_tᵀ·w`.
pub fn rotated_scale_support(pair: &CartesianPair, t: Direction2, w: [f64; 3]) -> Result<f64> {
    check_unit3(w)?;
    let eigs = hermitian_eigenvalues_unchecked(a_t(pair, t.canonical()).matrix());
    Ok(rotated_support_from_eigs(&frame_transforms(t), &eigs, w))
}

fn rotated_support_from_eigs(frame: &FrameTransforms, eigs: &[f64], w: [f64; 3]) -> f64 {
    let v = mul(&frame.r.transpose(), w);
    support_2d(eigs, v[0], v[1])
}

/// In-plane unit direction `cos φ·(1,0,0) + sin φ·(0,t1,t2)`.
pub fn in_plane_direction(t: Direction2, phi: f64) -> [f64; 3] {
    let t = t.canonical();
    let (s, c) = phi.sin_cos();
    [c, s * t.t1(), s * t.t2()]
}

/// Largest disagreement between the support functions of `Q_t(B(A))` and
/// `R_t(B(A_t))` over `grid_size` equally spaced in-plane directions.
pub fn check_theorem_2_1(pair: &CartesianPair, t: Direction2, grid_size: usize) -> Result<f64> {
    if grid_size < MIN_GRID {
        return Err(Error::Validation(format!("grid size must be at least {MIN_GRID}, got {grid_size}")));
    }
    let frame = frame_transforms(t);
    let eigs = hermitian_eigenvalues_unchecked(a_t(pair, frame.t).matrix());
    let mut worst = 0.0_f64;
    for k in 0..grid_size {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / grid_size as f64;
        let w = in_plane_direction(frame.t, phi);
        let lhs = support_unchecked(pair, mul(&frame.q, w));
        let rhs = rotated_support_from_eigs(&frame, &eigs, w);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceMatch {
    /// Index into [`HorizontalFaceReport::faces`].
    pub face: usize,
    pub root: ExtendedReal,
    /// `|tan θ_t − root|`, zero for the `∞` branch.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalFaceReport {
    pub faces: Vec<FaceDescriptor>,
    pub pencil_reals: Vec<f64>,
    pub has_infinity: bool,
    pub matched: Vec<FaceMatch>,
    pub unmatched_faces: Vec<usize>,
    pub unmatched_roots: Vec<ExtendedReal>,
    pub tol: f64,
    pub match_tol: f64,
}

impl HorizontalFaceReport {
    pub fn is_consistent(&self) -> bool {
        self.unmatched_faces.is_empty() && self.unmatched_roots.is_empty()
    }
}

/// Faces of `B(A)` exposed by `(0, t1, t2)` with positive x-extent, located from
/// the real pencil spectrum (and `∞`), then matched back to the roots.
pub fn horizontal_faces_3d(pair: &CartesianPair, tol: f64) -> Result<HorizontalFaceReport> {
    horizontal_faces_3d_with(pair, tol, DEFAULT_MATCH_TOL)
}

pub fn horizontal_faces_3d_with(pair: &CartesianPair, tol: f64, match_tol: f64) -> Result<HorizontalFaceReport> {
    let spec = pencil_spectrum_geig(pair, tol)?;
    spec.require_regular()?;
    Ok(faces_from_spectrum(pair, &spec, tol, match_tol))
}

pub(crate) fn faces_from_spectrum(
    pair: &CartesianPair,
    spec: &PencilSpectrum,
    tol: f64,
    match_tol: f64,
) -> HorizontalFaceReport {
    let mut roots: Vec<ExtendedReal> = spec.real_subset.iter().map(|&r| ExtendedReal::Finite(r)).collect();
    if spec.has_infinity {
        roots.push(ExtendedReal::Infinity);
    }
    let candidates: Vec<(ExtendedReal, FaceDescriptor)> = roots
        .par_iter()
        .map(|&root| {
            let t = Direction2::from_tan(root);
            let face = exposed_face(pair, [0.0, t.t1(), t.t2()], tol).expect("unit direction");
            (root, face)
        })
        .collect();

    let mut report = HorizontalFaceReport {
        faces: Vec::new(),
        pencil_reals: spec.real_subset.clone(),
        has_infinity: spec.has_infinity,
        matched: Vec::new(),
        unmatched_faces: Vec::new(),
        unmatched_roots: Vec::new(),
        tol,
        match_tol,
    };
    for (root, face) in candidates {
        if face.x_extent <= tol {
            report.unmatched_roots.push(root);
            continue;
        }
        let index = report.faces.len();
        let deviation = match (face.tan_theta, root) {
            (Some(ExtendedReal::Infinity), ExtendedReal::Infinity) => Some(0.0),
            (Some(ExtendedReal::Finite(a)), ExtendedReal::Finite(r)) => {
                Some((a - r).abs()).filter(|d| *d <= match_tol * (1.0 + r.abs()))
            }
            _ => None,
        };
        report.faces.push(face);
        match deviation {
            Some(deviation) => report.matched.push(FaceMatch {
                face: index,
                root,
                deviation,
            }),
            None => {
                report.unmatched_faces.push(index);
                report.unmatched_roots.push(root);
            }
        }
    }
    report
}
