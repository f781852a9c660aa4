//! The spectral scale `B(A) ⊂ ℝ³`.
//!
//! Maximizing `u·(τ(C), τ(A1·C), τ(A2·C)) = τ(M(u)·C)` over `0 ≤ C ≤ I`, with
//! `M(u) = u0·I + u1·A1 + u2·A2`, gives the support function
//! `h(u) = (1/n)·Σ max(λ_i(M(u)), 0)`. The maximizers are `P+ + D` with
//! `0 ≤ D ≤ P0`, so the exposed face in direction `u` is the image of that
//! operator interval. Everything here is computed from those two facts; the
//! sampled hull in [`ScaleBody3D`] is only for export.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::{self, Mesh};
use crate::linalg::{
    self, hermitian_eigenvalues_unchecked, hermitian_eigs_unchecked, CMatrix, CartesianPair, Direction2,
    ExtendedReal, SpectralPartition, DEFAULT_SPLIT_TOL, UNIT_TOL,
};

/// Default number of sampled directions for [`scale_body`].
pub const DEFAULT_DIRECTIONS: usize = 2000;
/// Minimum number of sampled directions for [`scale_body`].
pub const MIN_DIRECTIONS: usize = 20;
/// Relative singular-value cutoff used for affine ranks.
pub const RANK_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative to `max(1, ‖M‖)`) share a polygon edge.
const MERGE_TOL: f64 = 1e-12;

/// One evaluation of the support function: `h = u·p` with `p` an exposed point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportSample {
    pub u: [f64; 3],
    pub h: f64,
    pub p: [f64; 3],
}

/// `B(M)` of a self-adjoint `M`: a convex polygon in the plane between a convex
/// lower chain and a concave upper chain, both from `(0, 0)` to `(1, τ(M))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalePolygon2D {
    pub lower_vertices: Vec<[f64; 2]>,
    pub upper_vertices: Vec<[f64; 2]>,
    /// Lower-chain slopes: the distinct eigenvalues of `M`, ascending.
    pub segment_slopes: Vec<f64>,
    /// Upper-chain slopes: the distinct eigenvalues of `M`, descending.
    pub upper_slopes: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chain {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment2D {
    pub chain: Chain,
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub slope: f64,
}

#[derive(Clone, Debug)]
pub struct ScaleBody3D {
    pub samples: Vec<SupportSample>,
    pub hull_vertices: Vec<[f64; 3]>,
    pub hull_triangles: Vec<[usize; 3]>,
    pub affine_dimension: usize,
}

impl ScaleBody3D {
    pub fn mesh(&self) -> Mesh {
        Mesh {
            vertices: self.hull_vertices.clone(),
            triangles: self.hull_triangles.clone(),
        }
    }
}

/// The face of `B(A)` exposed by `u`: `{base + image(D) : 0 ≤ D ≤ P0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceDescriptor {
    pub u: [f64; 3],
    /// Image of `P+`.
    pub base: [f64; 3],
    /// Image of `P+ + P0`, the opposite end of the x-range of the face.
    pub far: [f64; 3],
    /// `τ(P0) = dim ker M(u) / n`.
    pub x_extent: f64,
    pub kernel_dim: usize,
    /// Affine dimension of the face (0, 1 or 2).
    pub dimension: usize,
    /// Set when `u0 = 0`, i.e. `u = (0, t1, t2)`.
    pub t: Option<Direction2>,
    pub tan_theta: Option<ExtendedReal>,
}

pub(crate) fn check_unit3(u: [f64; 3]) -> Result<()> {
    let r = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if !(r.is_finite() && (r - 1.0).abs() <= UNIT_TOL) {
        return Err(Error::Validation(format!(
            "direction ({}, {}, {}) is not a unit vector (|u|² = {r})",
            u[0], u[1], u[2]
        )));
    }
    Ok(())
}

/// `(1/n)·Σ max(λ_i, 0)`.
pub(crate) fn positive_part_mean(values: &[f64]) -> f64 {
    values.iter().map(|&l| l.max(0.0)).sum::<f64>() / values.len() as f64
}

/// Support function of `B(A)` at a unit vector `u`.
pub fn support_value(pair: &CartesianPair, u: [f64; 3]) -> Result<f64> {
    check_unit3(u)?;
    Ok(support_unchecked(pair, u))
}

/// Support function at an arbitrary `u` (positively homogeneous, `h(0) = 0`).
pub(crate) fn support_unchecked(pair: &CartesianPair, u: [f64; 3]) -> f64 {
    if u == [0.0; 3] {
        return 0.0;
    }
    positive_part_mean(&hermitian_eigenvalues_unchecked(&pair.combination(u)))
}

/// `(τ(P), τ(A1·P), τ(A2·P))` for `P = V·V*`.
fn image_of_projector(pair: &CartesianPair, v: &CMatrix) -> [f64; 3] {
    let n = pair.dim() as f64;
    if v.ncols() == 0 {
        return [0.0; 3];
    }
    let quad = |a: &CMatrix| -> f64 {
        let av = a * v;
        let mut s = 0.0;
        for j in 0..v.ncols() {
            s += v.column(j).dotc(&av.column(j)).re;
        }
        s / n
    };
    [v.ncols() as f64 / n, quad(pair.a1().matrix()), quad(pair.a2().matrix())]
}

/// Real coordinates of a Hermitian `k×k` matrix in an orthonormal basis of the
/// real space of Hermitian matrices with the trace inner product.
fn hermitian_coordinates(m: &CMatrix) -> Vec<f64> {
    let k = m.nrows();
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        out.push(m[(i, i)].re);
        for j in i + 1..k {
            out.push(std::f64::consts::SQRT_2 * m[(i, j)].re);
            out.push(std::f64::consts::SQRT_2 * m[(i, j)].im);
        }
    }
    out
}

fn numerical_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    let cut = rel_tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Exposed face of `B(A)` in direction `u`, with eigenvalues of `M(u)` within
/// `tol·max(1, ‖M(u)‖)` of zero treated as zero.
pub fn exposed_face(pair: &CartesianPair, u: [f64; 3], tol: f64) -> Result<FaceDescriptor> {
    check_unit3(u)?;
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tolerance must be positive, got {tol}")));
    }
    let part = SpectralPartition::from_eigs(hermitian_eigs_unchecked(&pair.combination(u)), tol);
    let n = pair.dim();
    let vp = part.basis(part.plus.clone());
    let v0 = part.basis(part.zero.clone());
    let base = image_of_projector(pair, &vp);
    let zero_img = image_of_projector(pair, &v0);
    let far = [base[0] + zero_img[0], base[1] + zero_img[1], base[2] + zero_img[2]];
    let kernel_dim = v0.ncols();

    // the face is base + {(τ(D), τ(A1·D), τ(A2·D)) : D = V0·H·V0*, 0 ≤ H ≤ I}; its
    // affine dimension is the rank of H ↦ (tr H, tr(B1·H), tr(B2·H)) with Bj = V0*·Aj·V0
    let dimension = if kernel_dim == 0 {
        0
    } else {
        let b1 = v0.adjoint() * pair.a1().matrix() * &v0;
        let b2 = v0.adjoint() * pair.a2().matrix() * &v0;
        let rows = vec![
            hermitian_coordinates(&CMatrix::identity(kernel_dim, kernel_dim)),
            hermitian_coordinates(&linalg::hermitian_part(&b1)),
            hermitian_coordinates(&linalg::hermitian_part(&b2)),
        ];
        numerical_rank(&rows, RANK_TOL).min(2)
    };

    let (t, tan_theta) = if u[0] == 0.0 {
        let t = Direction2::normalized(u[1], u[2])?;
        (Some(t), Some(t.tan_theta()))
    } else {
        (None, None)
    };
    Ok(FaceDescriptor {
        u,
        base,
        far,
        x_extent: kernel_dim as f64 / n as f64,
        kernel_dim,
        dimension,
        t,
        tan_theta,
    })
}

/// Exact polygon `B(M)` of a Hermitian matrix from eigenvalue prefix sums.
pub fn scale_polygon_selfadjoint(m: &CMatrix) -> Result<ScalePolygon2D> {
    let values = linalg::hermitian_eigenvalues(m)?;
    Ok(polygon_from_eigenvalues(&values))
}

/// Polygon from ascending eigenvalues.
pub fn polygon_from_eigenvalues(ascending: &[f64]) -> ScalePolygon2D {
    let n = ascending.len();
    let scale = ascending.iter().fold(1.0_f64, |a, &l| a.max(l.abs()));
    let merge = MERGE_TOL * scale;

    // clusters of (nearly) equal eigenvalues as index ranges
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || ascending[i] - ascending[start] > merge {
            clusters.push((start, i));
            start = i;
        }
    }
    let nf = n as f64;
    let slope_of = |(a, b): (usize, usize)| ascending[a..b].iter().sum::<f64>() / (b - a) as f64;

    let mut lower_vertices = vec![[0.0, 0.0]];
    let mut segment_slopes = Vec::new();
    let mut acc = 0.0;
    for &(a, b) in &clusters {
        acc += ascending[a..b].iter().sum::<f64>();
        lower_vertices.push([b as f64 / nf, acc / nf]);
        segment_slopes.push(slope_of((a, b)));
    }

    let mut upper_vertices = vec![[0.0, 0.0]];
    let mut upper_slopes = Vec::new();
    let mut acc = 0.0;
    let mut count = 0;
    for &(a, b) in clusters.iter().rev() {
        acc += ascending[a..b].iter().rev().sum::<f64>();
        count += b - a;
        upper_vertices.push([count as f64 / nf, acc / nf]);
        upper_slopes.push(slope_of((a, b)));
    }

    ScalePolygon2D {
        lower_vertices,
        upper_vertices,
        segment_slopes,
        upper_slopes,
    }
}

/// Boundary segments of the polygon with `|slope| ≤ tol`.
pub fn horizontal_segments_2d(poly: &ScalePolygon2D, tol: f64) -> Vec<Segment2D> {
    let mut out = Vec::new();
    for (chain, vertices, slopes) in [
        (Chain::Lower, &poly.lower_vertices, &poly.segment_slopes),
        (Chain::Upper, &poly.upper_vertices, &poly.upper_slopes),
    ] {
        for (i, &slope) in slopes.iter().enumerate() {
            if slope.abs() <= tol {
                out.push(Segment2D {
                    chain,
                    start: vertices[i],
                    end: vertices[i + 1],
                    slope,
                });
            }
        }
    }
    out
}

/// Support function of the polygon `B(M)` at `(a, b)`, from the eigenvalues of `M`.
pub fn support_2d(eigenvalues: &[f64], a: f64, b: f64) -> f64 {
    eigenvalues.iter().map(|&l| (a + b * l).max(0.0)).sum::<f64>() / eigenvalues.len() as f64
}

/// Deterministic, approximately uniform directions on the unit sphere.
pub fn fibonacci_directions(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let x = 1.0 - (2 * i + 1) as f64 / count as f64;
            let r = (1.0 - x * x).max(0.0).sqrt();
            let phi = golden * i as f64;
            let u = [x, r * phi.cos(), r * phi.sin()];
            let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            [u[0] / norm, u[1] / norm, u[2] / norm]
        })
        .collect()
}

/// Support sample at `u`; `p` is the image of `P+`.
pub fn support_sample(pair: &CartesianPair, u: [f64; 3]) -> Result<SupportSample> {
    let face = exposed_face(pair, u, DEFAULT_SPLIT_TOL)?;
    let p = face.base;
    Ok(SupportSample {
        u,
        h: u[0] * p[0] + u[1] * p[1] + u[2] * p[2],
        p,
    })
}

/// Samples the support function on `n_directions` Fibonacci directions and
/// builds the hull of the exposed points together with `(0,0,0)` and
/// `(1, τ(A1), τ(A2))`.
pub fn scale_body(pair: &CartesianPair, n_directions: usize) -> Result<ScaleBody3D> {
    if n_directions < MIN_DIRECTIONS {
        return Err(Error::Validation(format!(
            "need at least {MIN_DIRECTIONS} directions, got {n_directions}"
        )));
    }
    let samples = fibonacci_directions(n_directions)
        .into_par_iter()
        .map(|u| support_sample(pair, u))
        .collect::<Result<Vec<_>>>()?;

    let (tau1, tau2) = pair.traces();
    let mut points: Vec<[f64; 3]> = samples.iter().map(|s| s.p).collect();
    points.push([0.0, 0.0, 0.0]);
    points.push([1.0, tau1, tau2]);
    let points = hull::snap_and_dedup(&points);

    let (affine_dimension, axes, centroid) = principal_axes(&points);
    let mesh = match affine_dimension {
        3 => hull::convex_hull_3d(&points).unwrap_or_default(),
        2 => flat_polygon(&points, &axes, &centroid),
        1 => {
            let along = |p: &[f64; 3]| dot(&sub(p, &centroid), &axes[0]);
            let lo = points.iter().min_by(|a, b| along(a).total_cmp(&along(b))).copied().unwrap_or(centroid);
            let hi = points.iter().max_by(|a, b| along(a).total_cmp(&along(b))).copied().unwrap_or(centroid);
            Mesh { vertices: vec![lo, hi], triangles: Vec::new() }
        }
        _ => Mesh { vertices: points.first().copied().into_iter().collect(), triangles: Vec::new() },
    };

    Ok(ScaleBody3D {
        samples,
        hull_vertices: mesh.vertices,
        hull_triangles: mesh.triangles,
        affine_dimension,
    })
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Affine dimension of a point set, its principal axes (descending spread)
/// and its centroid.
pub fn principal_axes(points: &[[f64; 3]]) -> (usize, [[f64; 3]; 3], [f64; 3]) {
    let m = points.len().max(1) as f64;
    let mut centroid = [0.0; 3];
    for p in points {
        for k in 0..3 {
            centroid[k] += p[k] / m;
        }
    }
    let mut cov = Matrix3::<f64>::zeros();
    for p in points {
        let d = sub(p, &centroid);
        for i in 0..3 {
            for j in 0..3 {
                cov[(i, j)] += d[i] * d[j] / m;
            }
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let spreads: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
    let cut = RANK_TOL * spreads[0].max(1.0);
    let dim = if points.len() <= 1 { 0 } else { spreads.iter().filter(|&&s| s > cut).count() };
    let axes = order.map(|i| {
        let c = eig.eigenvectors.column(i);
        [c[0], c[1], c[2]]
    });
    (dim, axes, centroid)
}

fn flat_polygon(points: &[[f64; 3]], axes: &[[f64; 3]; 3], centroid: &[f64; 3]) -> Mesh {
    let planar: Vec<[f64; 2]> = points
        .iter()
        .map(|p| {
            let d = sub(p, centroid);
            [dot(&d, &axes[0]), dot(&d, &axes[1])]
        })
        .collect();
    let ring = hull::convex_hull_2d(&planar);
    let vertices: Vec<[f64; 3]> = ring.iter().map(|&i| points[i]).collect();
    let triangles = (1..vertices.len().saturating_sub(1)).map(|i| [0, i, i + 1]).collect();
    Mesh { vertices, triangles }
}

/// `(1/n)·Σ max(λ_i(M), 0)` evaluated through the full Hermitian solver; used
/// by callers that already hold the matrix.
pub fn support_of_matrix(m: &CMatrix) -> f64 {
    positive_part_mean(&hermitian_eigenvalues_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn square_pair() -> CartesianPair {
        CartesianPair::new(ComplexMatrix::from_real_diagonal(&[1.0, -1.0]), ComplexMatrix::identity(2)).unwrap()
    }

    #[test]
    fn support_along_x_axis() {
        let pair = square_pair();
        assert_eq!(support_value(&pair, [1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(support_value(&pair, [-1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(support_value(&pair, [1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn support_matches_diagonal_grid_search() {
        // C = diag(c1, c2): u·p = (c1 - c2)/2 for u = (0,1,0)
        let pair = square_pair();
        let mut best = f64::NEG_INFINITY;
        for i in 0..=50 {
            for j in 0..=50 {
                let (c1, c2) = (i as f64 / 50.0, j as f64 / 50.0);
                best = best.max((c1 - c2) / 2.0);
            }
        }
        assert_eq!(best, 0.5);
        assert!((support_value(&pair, [0.0, 1.0, 0.0]).unwrap() - best).abs() < 1e-15);
    }

    #[test]
    fn face_of_flat_square_edge() {
        let face = exposed_face(&square_pair(), [0.0, H, H], 1e-10).unwrap();
        for (a, b) in face.base.iter().zip([0.5, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in face.far.iter().zip([1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(face.x_extent, 0.5);
        assert_eq!(face.dimension, 1);
        assert_eq!(face.tan_theta, Some(ExtendedReal::Finite(1.0)));
    }

    #[test]
    fn generic_face_is_a_point() {
        let face = exposed_face(&square_pair(), [0.6, 0.0, 0.8], 1e-10).unwrap();
        assert_eq!(face.x_extent, 0.0);
        assert_eq!(face.dimension, 0);
        assert!(face.t.is_none());
    }

    #[test]
    fn face_along_a2_for_diag_i_1() {
        let pair = CartesianPair::new(
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
        )
        .unwrap();
        let face = exposed_face(&pair, [0.0, 0.0, 1.0], 1e-10).unwrap();
        assert_eq!(face.x_extent, 0.5);
        assert_eq!(face.tan_theta, Some(ExtendedReal::Infinity));
    }

    #[test]
    fn polygon_golden_diag_123() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let poly = scale_polygon_selfadjoint(m.matrix()).unwrap();
        let lower = [[0.0, 0.0], [1.0 / 3.0, 1.0 / 3.0], [2.0 / 3.0, 1.0], [1.0, 2.0]];
        let upper = [[0.0, 0.0], [1.0 / 3.0, 1.0], [2.0 / 3.0, 5.0 / 3.0], [1.0, 2.0]];
        for (v, e) in poly.lower_vertices.iter().zip(lower.iter()).chain(poly.upper_vertices.iter().zip(upper.iter())) {
            assert!((v[0] - e[0]).abs() < 1e-12 && (v[1] - e[1]).abs() < 1e-12, "{v:?} vs {e:?}");
        }
        assert_eq!(poly.lower_vertices.len(), 4);
        assert!(horizontal_segments_2d(&poly, 1e-10).is_empty());
    }

    #[test]
    fn polygon_of_diag_01_has_flat_lower_edge() {
        let m = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let poly = scale_polygon_selfadjoint(m.matrix()).unwrap();
        let flat = horizontal_segments_2d(&poly, 1e-10);
        // both chains have a slope-zero edge of x-length 1/2
        assert_eq!(flat.len(), 2);
        assert_eq!(flat[0].chain, Chain::Lower);
        assert_eq!((flat[0].start, flat[0].end), ([0.0, 0.0], [0.5, 0.0]));
        assert_eq!(flat[1].chain, Chain::Upper);
        assert_eq!((flat[1].start, flat[1].end), ([0.5, 1.0 / 2.0], [1.0, 0.5]));
    }

    #[test]
    fn zero_matrix_polygon_is_a_segment() {
        let poly = scale_polygon_selfadjoint(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(poly.lower_vertices, vec![[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(poly.upper_vertices, vec![[0.0, 0.0], [1.0, 0.0]]);
        let flat = horizontal_segments_2d(&poly, 1e-12);
        assert_eq!(flat.len(), 2);
    }

    #[test]
    fn repeated_eigenvalues_merge() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, -1.0, 2.0, -1.0]);
        let poly = scale_polygon_selfadjoint(m.matrix()).unwrap();
        assert_eq!(poly.segment_slopes, vec![-1.0, 2.0]);
        assert_eq!(poly.lower_vertices, vec![[0.0, 0.0], [0.5, -0.5], [1.0, 0.5]]);
    }

    #[test]
    fn polygon_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(scale_polygon_selfadjoint(m.matrix()).is_err());
    }

    #[test]
    fn flat_square_body() {
        let body = scale_body(&square_pair(), 200).unwrap();
        assert_eq!(body.affine_dimension, 2);
        for s in &body.samples {
            assert!((s.p[0] - s.p[2]).abs() < 1e-10);
        }
        assert_eq!(body.hull_vertices.len(), 4);
        assert_eq!(body.hull_triangles.len(), 2);
        let corners = [[0.0, 0.0, 0.0], [0.5, 0.5, 0.5], [0.5, -0.5, 0.5], [1.0, 0.0, 1.0]];
        for c in corners {
            assert!(body
                .hull_vertices
                .iter()
                .any(|v| (0..3).all(|k| (v[k] - c[k]).abs() < 1e-10)));
        }
    }

    #[test]
    fn too_few_directions() {
        assert!(scale_body(&square_pair(), 5).is_err());
    }
}
