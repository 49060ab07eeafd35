use std::ffi::{c_void, CStr};
use std::ptr;

use nbqi_ffi::*;

unsafe extern "C" fn exp(x: f64, _: *mut c_void) -> f64 {
    x.exp()
}

unsafe extern "C" fn counted(x: f64, user: *mut c_void) -> f64 {
    *(user as *mut usize) += 1;
    x
}

fn knots(m: usize, b: &[f64]) -> *mut NbqiKnots {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { nbqi_knots_clamped(m, b.as_ptr(), b.len(), &mut k) }, NbqiStatus::Ok);
    k
}

fn last_error() -> String {
    let p = nbqi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn coefficients_and_user_data() {
    let k = knots(2, &[0.0, 0.25, 0.5, 0.75, 1.0]);
    unsafe {
        assert_eq!(nbqi_knots_len(k), 6);
        let mut op = ptr::null_mut();
        assert_eq!(nbqi_operator_new(k, c"schoenberg".as_ptr(), 0, 0, &mut op), NbqiStatus::Ok);
        let mut calls = 0usize;
        let mut c = vec![0.0; 6];
        let st = nbqi_operator_coefficients(op, Some(counted), (&mut calls as *mut usize).cast(), c.as_mut_ptr(), 6);
        assert_eq!(st, NbqiStatus::Ok);
        assert_eq!(calls, 6);
        // Schoenberg coefficients of x are the Greville abscissae.
        assert_eq!(c[0], 0.0);
        assert!((c[1] - 0.125).abs() < 1e-15);
        assert_eq!(
            nbqi_operator_coefficients(op, Some(exp), ptr::null_mut(), c.as_mut_ptr(), 5),
            NbqiStatus::BufferTooSmall
        );
        assert!(last_error().contains("need 6"));
        nbqi_operator_free(op);
        nbqi_knots_free(k);
    }
}

#[test]
fn quadrature_round_trip() {
    let b: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
    let k = knots(2, &b);
    unsafe {
        let mut op = ptr::null_mut();
        assert_eq!(nbqi_operator_new(k, c"s2".as_ptr(), 0, 0, &mut op), NbqiStatus::Ok);
        let mut deg = 0;
        assert_eq!(nbqi_operator_degree(op, &mut deg), NbqiStatus::Ok);
        assert_eq!(deg, 2);
        let mut rule = ptr::null_mut();
        assert_eq!(nbqi_quadrature_new(op, &mut rule), NbqiStatus::Ok);
        let n = nbqi_quadrature_len(rule);
        let mut w = vec![0.0; n];
        assert_eq!(nbqi_quadrature_get(rule, ptr::null_mut(), w.as_mut_ptr(), n), NbqiStatus::Ok);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let mut v = 0.0;
        assert_eq!(nbqi_quadrature_apply(rule, Some(exp), ptr::null_mut(), &mut v), NbqiStatus::Ok);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-6);
        nbqi_quadrature_free(rule);
        nbqi_operator_free(op);
        nbqi_knots_free(k);
    }
}

#[test]
fn cardinal_and_box_values() {
    unsafe {
        let mut op = ptr::null_mut();
        assert_eq!(nbqi_operator_cardinal(NbqiCardinalKind::Discrete, 4, 2, 3, &mut op), NbqiStatus::Ok);
        let mut nu = 0.0;
        assert_eq!(nbqi_operator_nu_bound(op, &mut nu), NbqiStatus::Ok);
        assert!((nu - 7.0 / 6.0).abs() < 1e-12);
        let mut norm = 0.0;
        assert_eq!(nbqi_operator_norm(op, 0, &mut norm), NbqiStatus::Ok);
        assert!((norm - 1.1389).abs() < 1e-3);
        nbqi_operator_free(op);

        let (mut c, mut v, mut nu) = (0.0, 0.0, 0.0);
        assert_eq!(nbqi_box_stencil(NbqiBoxMesh::FourDirection, 2, &mut c, &mut v, &mut nu), NbqiStatus::Ok);
        assert_eq!((c, v, nu), (1.125, -1.0 / 32.0, 1.25));
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut k = ptr::null_mut();
        let b = [0.0, 1.0, 0.5];
        assert_eq!(nbqi_knots_clamped(2, b.as_ptr(), 3, &mut k), NbqiStatus::InvalidKnots);
        assert!(k.is_null());
        let k = knots(2, &[0.0, 0.5, 1.0]);
        let mut op = ptr::null_mut();
        assert_eq!(nbqi_operator_new(k, c"bogus".as_ptr(), 0, 0, &mut op), NbqiStatus::InvalidArgument);
        assert!(last_error().contains("bogus"));
        assert_eq!(nbqi_operator_new(k, c"gs1".as_ptr(), 0, 0, &mut op), NbqiStatus::Ok);
        let mut rule = ptr::null_mut();
        assert_eq!(nbqi_quadrature_new(op, &mut rule), NbqiStatus::NotDiscrete);
        assert_eq!(nbqi_operator_nu_bound(ptr::null(), ptr::null_mut()), NbqiStatus::NullPointer);
        assert_eq!(nbqi_operator_eval(op, None, ptr::null_mut(), 0.5, &mut 0.0), NbqiStatus::NullPointer);
        assert_eq!(
            nbqi_operator_cardinal(NbqiCardinalKind::Integral, 3, 1, 3, &mut op),
            NbqiStatus::Unsupported
        );
        nbqi_operator_free(op);
        nbqi_knots_free(k);
        // Freeing NULL is a no-op.
        nbqi_knots_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/nbqi.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|rest| rest.split('(').next())
        .filter(|name| name.starts_with("nbqi_"))
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(nbqi_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
