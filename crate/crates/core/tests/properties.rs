//! Property tests for the library invariants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use specscale::geometry::{frame_transforms, horizontal_faces_3d};
use specscale::linalg::{
    a_t, cartesian_decompose, hermitian_eigs, spectral_norm, spectral_split, CMatrix, CartesianPair, ComplexMatrix,
    Direction2,
};
use specscale::pencil::{
    bottleneck_match, pencil_spectrum_detpoly, pencil_spectrum_geig, root_certificate, DEFAULT_TOL,
};
use specscale::scale::{
    exposed_face, horizontal_segments_2d, scale_polygon_selfadjoint, ScalePolygon2D, support_sample, support_value,
};
use specscale::verify::{fixed_examples, oracle_support, verify_lemma_2_3, verify_theorem_2_5, case_rng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn frob(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues through the real symmetric embedding `[[Re, −Im], [Im, Re]]`.
fn oracle_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut all: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    all.sort_by(f64::total_cmp);
    all.into_iter().step_by(2).collect()
}

/// Lower-chain slopes repeated by multiplicity, `n·Δx` per segment.
fn expanded_slopes(poly: &ScalePolygon2D, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for (k, &s) in poly.segment_slopes.iter().enumerate() {
        let width = poly.lower_vertices[k + 1][0] - poly.lower_vertices[k][0];
        out.extend(std::iter::repeat_n(s, (width * n as f64).round() as usize));
    }
    out
}

fn general(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n)
        .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| c(v[i * n + j].0, v[i * n + j].1)))
}

fn hermitian_of(g: &CMatrix) -> CMatrix {
    (g + g.adjoint()) * c(0.5, 0.0)
}

/// Hermitian matrices, sometimes of deficient rank so that kernels occur.
fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (general(n), 0..=n).prop_map(move |(g, rank)| {
        let h = if rank == n || rank == 0 {
            hermitian_of(&g)
        } else {
            let v = g.columns(0, rank).into_owned();
            let w = CMatrix::from_fn(rank, rank, |i, j| if i == j { c(g[(i, i)].re, 0.0) } else { c(0.0, 0.0) });
            let h = &v * w * v.adjoint();
            hermitian_of(&h)
        };
        ComplexMatrix::new(h).unwrap()
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = CartesianPair> {
    (1..=max_n).prop_flat_map(|n| (hermitian(n), hermitian(n))).prop_map(|(a1, a2)| CartesianPair::new(a1, a2).unwrap())
}

fn full_rank_pair(max_n: usize) -> impl Strategy<Value = CartesianPair> {
    (1..=max_n)
        .prop_flat_map(|n| (general(n), general(n)))
        .prop_map(|(g1, g2)| {
            CartesianPair::new(ComplexMatrix::new(hermitian_of(&g1)).unwrap(), ComplexMatrix::new(hermitian_of(&g2)).unwrap())
                .unwrap()
        })
}

fn unit3() -> impl Strategy<Value = [f64; 3]> {
    (-1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        [z, r * phi.cos(), r * phi.sin()]
    })
}

fn direction() -> impl Strategy<Value = Direction2> {
    (-std::f64::consts::PI..std::f64::consts::PI).prop_map(Direction2::from_angle)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_projections_partition_identity(m in (1..=8usize).prop_flat_map(hermitian), tol in 1e-12..1e-6f64) {
        let p = spectral_split(m.matrix(), tol).unwrap();
        let n = m.dim();
        let id = CMatrix::identity(n, n);
        prop_assert!(frob(&(&p.plus + &p.zero + &p.minus - &id)) <= 1e-10);
        for q in [&p.plus, &p.zero, &p.minus] {
            prop_assert!(frob(&(q * q - q)) <= 1e-10);
            prop_assert!(frob(&(q.adjoint() - q)) <= 1e-10);
        }
    }

    #[test]
    fn cartesian_decomposition_reconstructs(g in (1..=8usize).prop_flat_map(general)) {
        let a = ComplexMatrix::new(g.clone()).unwrap();
        let pair = cartesian_decompose(&a);
        let back = pair.a1().matrix() + pair.a2().matrix() * c(0.0, 1.0);
        prop_assert!(frob(&(back - &g)) <= 1e-14 * spectral_norm(&g).max(f64::MIN_POSITIVE) * 4.0);
        prop_assert!(pair.a1().is_hermitian(0.0) && pair.a2().is_hermitian(0.0));
    }

    #[test]
    fn a_t_is_the_linear_combination(p in pair(6), t in direction(), alpha in 0.1..10.0f64) {
        let m = a_t(&p, t);
        let expected = p.a1().matrix() * c(t.t1(), 0.0) + p.a2().matrix() * c(t.t2(), 0.0);
        prop_assert!(frob(&(m.matrix() - &expected)) <= 1e-14 * (1.0 + frob(&expected)));
        let sum = p.combination([0.0, alpha * t.t1(), alpha * t.t2()]);
        prop_assert!(frob(&(sum - m.matrix() * c(alpha, 0.0))) <= 1e-13 * alpha * (1.0 + frob(&expected)));
    }

    #[test]
    fn support_central_symmetry(p in pair(8), u in unit3()) {
        let n = p.dim() as f64;
        let tau1 = p.a1().matrix().trace().re / n;
        let tau2 = p.a2().matrix().trace().re / n;
        let h = support_value(&p, u).unwrap();
        let hm = support_value(&p, [-u[0], -u[1], -u[2]]).unwrap();
        prop_assert!((h - hm - (u[0] + u[1] * tau1 + u[2] * tau2)).abs() <= 1e-10);
    }

    #[test]
    fn support_is_sublinear(p in pair(8), u in unit3(), v in unit3()) {
        let s = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
        let len = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        prop_assume!(len > 1e-6);
        let w = [s[0] / len, s[1] / len, s[2] / len];
        let lhs = support_value(&p, w).unwrap() * len;
        prop_assert!(lhs <= support_value(&p, u).unwrap() + support_value(&p, v).unwrap() + 1e-9);
    }

    #[test]
    fn exposed_points_are_dominated(p in pair(6), u in unit3(), others in prop::collection::vec(unit3(), 200)) {
        let s = support_sample(&p, u).unwrap();
        for w in others {
            let h = support_value(&p, w).unwrap();
            prop_assert!(w[0] * s.p[0] + w[1] * s.p[1] + w[2] * s.p[2] <= h + 1e-9);
        }
    }

    #[test]
    fn oracle_support_never_exceeds_support(p in pair(5), u in unit3(), seed in any::<u64>()) {
        let mut rng = case_rng(seed, 0, 0);
        let o = oracle_support(&p, u, 200, &mut rng).unwrap();
        let h = support_value(&p, u).unwrap();
        prop_assert!((o - h).abs() <= 1e-10, "oracle {o} support {h}");
    }

    #[test]
    fn polygon_slopes_are_sorted_eigenvalues(m in (1..=8usize).prop_flat_map(hermitian)) {
        let poly = scale_polygon_selfadjoint(m.matrix()).unwrap();
        let eig = oracle_eigenvalues(m.matrix());
        let slopes = expanded_slopes(&poly, m.dim());
        prop_assert_eq!(slopes.len(), eig.len());
        for (s, e) in slopes.iter().zip(&eig) {
            prop_assert!((s - e).abs() <= 1e-10);
        }
    }

    #[test]
    fn x_extent_counts_the_kernel(p in pair(6), t in direction()) {
        let tol = 1e-8;
        let eig = oracle_eigenvalues(a_t(&p, t).matrix());
        let scale = eig.iter().fold(1.0_f64, |a, l| a.max(l.abs()));
        prop_assume!(eig.iter().all(|l| l.abs() < tol * scale / 100.0 || l.abs() > tol * scale * 100.0));
        let kernel = eig.iter().filter(|l| l.abs() <= tol * scale).count();
        let face = exposed_face(&p, [0.0, t.t1(), t.t2()], tol).unwrap();
        prop_assert_eq!(face.x_extent, kernel as f64 / p.dim() as f64);
    }

    #[test]
    fn horizontal_segments_iff_zero_eigenvalue(m in (1..=8usize).prop_flat_map(hermitian)) {
        let tol = 1e-8;
        let eig = oracle_eigenvalues(m.matrix());
        prop_assume!(eig.iter().all(|l| l.abs() < tol / 100.0 || l.abs() > tol * 100.0));
        let poly = scale_polygon_selfadjoint(m.matrix()).unwrap();
        let flat = !horizontal_segments_2d(&poly, tol).is_empty();
        prop_assert_eq!(flat, eig.iter().any(|l| l.abs() <= tol));
    }

    #[test]
    fn frame_transform_identities(t in direction()) {
        let f = frame_transforms(t);
        prop_assert!((f.q * f.q - f.q).abs().max() <= 1e-12);
        prop_assert!((f.q.transpose() - f.q).abs().max() <= 1e-12);
        prop_assert!((f.r.transpose() * f.r - nalgebra::Matrix3::identity()).abs().max() <= 1e-12);
        prop_assert!((f.r.transpose() * f.q - f.pi).abs().max() <= 1e-12);
        prop_assert!(f.t.t1() > 0.0 || (f.t.t1() == 0.0 && f.t.t2() == 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_eigs_reconstruct(m in (1..=64usize).prop_flat_map(hermitian)) {
        let e = hermitian_eigs(m.matrix()).unwrap();
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(e.values.len(), e.values.iter().map(|&x| c(x, 0.0))));
        let back = &e.vectors * lambda * e.vectors.adjoint();
        prop_assert!(spectral_norm(&(back - m.matrix())) <= 1e-10 * spectral_norm(m.matrix()).max(f64::MIN_POSITIVE));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pencil_methods_agree_and_certify(p in full_rank_pair(8)) {
        let g = pencil_spectrum_geig(&p, DEFAULT_TOL).unwrap();
        let d = pencil_spectrum_detpoly(&p, DEFAULT_TOL).unwrap();
        prop_assert!(g.regular && d.regular);
        let m = bottleneck_match(&g.finite, &d.finite);
        prop_assert!(m.is_some_and(|m| m <= 1e-6), "geig {:?} detpoly {:?}", g.finite, d.finite);
        for &z in g.finite.iter().chain(&d.finite) {
            prop_assert!(root_certificate(&p, z) <= 1e-7);
        }
    }

    #[test]
    fn infinity_follows_a2_singularity(p in pair(6)) {
        prop_assume!(!p.a2_is_zero());
        let s = oracle_eigenvalues(p.a2().matrix());
        let largest = s.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let smallest = s.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
        prop_assume!(smallest > largest * DEFAULT_TOL * 100.0 || smallest < largest * DEFAULT_TOL / 100.0);
        let singular = smallest <= DEFAULT_TOL * largest;
        prop_assert_eq!(pencil_spectrum_geig(&p, DEFAULT_TOL).unwrap().has_infinity, singular);
    }

    #[test]
    fn pencil_spectrum_is_scale_invariant(p in full_rank_pair(6), k in 0.01..100.0f64) {
        let scaled = CartesianPair::new(
            ComplexMatrix::new(p.a1().matrix() * c(k, 0.0)).unwrap(),
            ComplexMatrix::new(p.a2().matrix() * c(k, 0.0)).unwrap(),
        ).unwrap();
        let a = pencil_spectrum_geig(&p, DEFAULT_TOL).unwrap();
        let b = pencil_spectrum_geig(&scaled, DEFAULT_TOL).unwrap();
        prop_assert!(bottleneck_match(&a.finite, &b.finite).is_some_and(|m| m <= 1e-8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lemma_and_face_equivalence_hold(p in full_rank_pair(4)) {
        let lemma = verify_lemma_2_3(&p, DEFAULT_TOL).unwrap();
        prop_assert!(lemma.passed(), "{lemma:?}");
        let thm = verify_theorem_2_5(&p, DEFAULT_TOL).unwrap();
        prop_assert!(thm.passed(), "{thm:?}");
        prop_assert!(horizontal_faces_3d(&p, DEFAULT_TOL).unwrap().is_consistent());
    }
}

#[test]
fn fixed_examples_cover_the_worked_cases() {
    let names: Vec<&str> = fixed_examples().iter().map(|e| e.name).collect();
    for name in [
        "diag(1,-1) / I",
        "diag(0,1) / diag(1,0)",
        "diag(1,-1) / pauli-x",
        "singular [[1,0],[0,0]] / [[2,0],[0,0]]",
        "A = diag(i, 1)",
        "1x1 2 / 1",
    ] {
        assert!(names.contains(&name), "{name} missing from {names:?}");
    }
}
