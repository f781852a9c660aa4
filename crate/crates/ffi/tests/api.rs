use std::ffi::{CStr, CString};
use std::ptr;

use specscale_ffi::*;

fn square() -> *mut SpecscalePair {
    let (a1, a2) = ([1.0, 0.0, 0.0, -1.0], [1.0, 0.0, 0.0, 1.0]);
    let mut pair = ptr::null_mut();
    let s = unsafe { specscale_pair_from_hermitian(2, a1.as_ptr(), ptr::null(), a2.as_ptr(), ptr::null(), 1e-12, &mut pair) };
    assert_eq!(s, SpecscaleStatus::Ok);
    pair
}

fn last_error() -> String {
    let p = specscale_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn support_and_faces_of_the_square() {
    let pair = square();
    unsafe {
        let mut h = 0.0;
        assert_eq!(specscale_support_value(pair, [1.0, 0.0, 0.0].as_ptr(), &mut h), SpecscaleStatus::Ok);
        assert_eq!(h, 1.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut face = SpecscaleFace::default();
        assert_eq!(specscale_exposed_face(pair, [0.0, r, r].as_ptr(), 1e-10, &mut face), SpecscaleStatus::Ok);
        assert!((face.x_extent - 0.5).abs() < 1e-12 && face.kernel_dim == 1);

        let mut faces = ptr::null_mut();
        assert_eq!(specscale_horizontal_faces(pair, 1e-8, &mut faces), SpecscaleStatus::Ok);
        assert_eq!(specscale_faces_count(faces), 2);
        let mut tans = Vec::new();
        for i in 0..2 {
            let mut f = SpecscaleHorizontalFace::default();
            assert_eq!(specscale_faces_get(faces, i, &mut f), SpecscaleStatus::Ok);
            assert!(f.matched);
            tans.push(f.root);
        }
        tans.sort_by(f64::total_cmp);
        assert_eq!(tans, vec![-1.0, 1.0]);
        let mut f = SpecscaleHorizontalFace::default();
        assert_eq!(specscale_faces_get(faces, 2, &mut f), SpecscaleStatus::InvalidArgument);
        specscale_faces_free(faces);
        specscale_pair_free(pair);
    }
}

#[test]
fn spectrum_of_diag_i_1() {
    let (re, im) = ([0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0]);
    let mut pair = ptr::null_mut();
    unsafe {
        assert_eq!(specscale_pair_from_matrix(2, re.as_ptr(), im.as_ptr(), &mut pair), SpecscaleStatus::Ok);
        let mut spec = ptr::null_mut();
        assert_eq!(specscale_pencil_spectrum(pair, SpecscaleMethod::GeneralizedEig, 1e-8, &mut spec), SpecscaleStatus::Ok);
        assert!(specscale_spectrum_is_regular(spec) && specscale_spectrum_has_infinity(spec));
        assert_eq!(specscale_spectrum_finite_count(spec), 1);
        let (mut x, mut y) = (1.0, 1.0);
        assert_eq!(specscale_spectrum_finite(spec, 0, &mut x, &mut y), SpecscaleStatus::Ok);
        assert!(x.abs() < 1e-14 && y.abs() < 1e-14);
        assert_eq!(specscale_spectrum_finite(spec, 1, &mut x, &mut y), SpecscaleStatus::InvalidArgument);
        specscale_spectrum_free(spec);
        specscale_pair_free(pair);
    }
}

#[test]
fn errors_are_classified() {
    unsafe {
        let mut pair = ptr::null_mut();
        let bad = [0.0, 1.0, 0.0, 0.0];
        let id = [1.0, 0.0, 0.0, 1.0];
        assert_eq!(
            specscale_pair_from_hermitian(2, bad.as_ptr(), ptr::null(), id.as_ptr(), ptr::null(), 1e-12, &mut pair),
            SpecscaleStatus::Validation
        );
        assert!(last_error().contains("A1"));
        assert!(pair.is_null());
        assert_eq!(specscale_pair_from_matrix(0, id.as_ptr(), ptr::null(), &mut pair), SpecscaleStatus::Dimension);
        assert_eq!(specscale_pair_from_matrix(2, ptr::null(), ptr::null(), &mut pair), SpecscaleStatus::NullPointer);
        assert_eq!(specscale_pair_from_matrix(2, id.as_ptr(), ptr::null(), ptr::null_mut()), SpecscaleStatus::NullPointer);

        let path = CString::new("/nonexistent/matrix.json").unwrap();
        assert_eq!(specscale_pair_from_file(path.as_ptr(), &mut pair), SpecscaleStatus::Io);

        assert_eq!(specscale_pair_from_matrix(2, id.as_ptr(), ptr::null(), &mut pair), SpecscaleStatus::Ok);
        assert!(specscale_last_error().is_null());
        let mut spec = ptr::null_mut();
        assert_eq!(specscale_pencil_spectrum(pair, SpecscaleMethod::DetPoly, 1e-8, &mut spec), SpecscaleStatus::ZeroA2);
        assert!(spec.is_null());
        let mut h = 0.0;
        assert_eq!(specscale_support_value(pair, [1.0, 1.0, 0.0].as_ptr(), &mut h), SpecscaleStatus::Validation);
        specscale_pair_free(pair);
        specscale_pair_free(ptr::null_mut());
        assert_eq!(specscale_pair_dim(ptr::null()), 0);
    }
}

#[test]
fn verification_through_the_boundary() {
    let pair = square();
    unsafe {
        for which in [SpecscaleSubject::Theorem21, SpecscaleSubject::Lemma23, SpecscaleSubject::Theorem25] {
            let mut v = SpecscaleVerification { verdict: SpecscaleVerdict::Failed, max_residual: f64::NAN, tolerance: 0.0 };
            assert_eq!(specscale_verify(pair, which, 4, 90, 1e-8, 42, &mut v), SpecscaleStatus::Ok);
            assert_eq!(v.verdict, SpecscaleVerdict::Passed, "{which:?}");
        }
        specscale_pair_free(pair);
    }
}

#[test]
fn version_matches_the_library() {
    let v = unsafe { CStr::from_ptr(specscale_version()) }.to_str().unwrap();
    assert_eq!(v, specscale::VERSION);
}
