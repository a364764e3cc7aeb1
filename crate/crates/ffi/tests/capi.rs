use std::ffi::{CStr, CString};
use std::ptr;

use eikonal_lines_ffi::*;

fn last_error() -> String {
    let p = el_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn field_lifecycle_and_eval() {
    unsafe {
        let mut field = ptr::null_mut();
        assert_eq!(el_field_new(ElFieldKind::Competitor, std::f64::consts::FRAC_PI_3, 0, &mut field), ElStatus::Ok);
        assert_eq!(el_field_curve_count(field), 3);
        let (mut mx, mut my) = (0.0, 0.0);
        assert_eq!(el_field_eval(field, 0.5, 0.0, &mut mx, &mut my), ElStatus::Ok);
        assert!(mx.abs() < 1e-15 && (my + 1.0).abs() < 1e-15);
        assert_eq!(el_field_eval(field, 1.0, 0.0, &mut mx, &mut my), ElStatus::OnJumpCurve);
        assert!(last_error().contains("arc"));
        assert_eq!(el_field_eval(field, 0.0, 0.0, &mut mx, &mut my), ElStatus::SingularPoint);
        assert_eq!(el_field_eval(field, 3.0, 0.0, &mut mx, &mut my), ElStatus::OutsideDomain);
        assert_eq!(el_field_eval(field, 0.5, 0.0, ptr::null_mut(), &mut my), ElStatus::NullPointer);
        el_field_free(field);

        let mut tiling = ptr::null_mut();
        assert_eq!(el_field_new(ElFieldKind::Tiling, 1.0, 5, &mut tiling), ElStatus::Ok);
        assert_eq!(el_field_curve_count(tiling), 15);
        el_field_free(tiling);
        el_field_free(ptr::null_mut());
        assert_eq!(el_field_curve_count(ptr::null()), 0);
    }
}

#[test]
fn invalid_arguments_are_reported() {
    unsafe {
        let mut field = ptr::null_mut();
        assert_eq!(el_field_new(ElFieldKind::Viscosity, 2.0, 0, &mut field), ElStatus::InvalidArgument);
        assert!(field.is_null());
        assert!(last_error().contains("theta0"));
        assert_eq!(el_field_new(ElFieldKind::Tiling, 1.0, 0, &mut field), ElStatus::InvalidArgument);
        assert_eq!(el_field_new(ElFieldKind::Viscosity, 1.0, 0, ptr::null_mut()), ElStatus::NullPointer);
        let mut cost = ptr::null_mut();
        assert_eq!(el_cost_power(-1.0, &mut cost), ElStatus::InvalidArgument);
        let bad = CString::new("cubic").unwrap();
        assert_eq!(el_cost_parse(bad.as_ptr(), &mut cost), ElStatus::InvalidArgument);
        assert_eq!(el_cost_parse(ptr::null(), &mut cost), ElStatus::NullPointer);
    }
}

#[test]
fn energies() {
    unsafe {
        let text = CString::new("power:3").unwrap();
        let mut cost = ptr::null_mut();
        assert_eq!(el_cost_parse(text.as_ptr(), &mut cost), ElStatus::Ok);
        let mut field = ptr::null_mut();
        assert_eq!(el_field_new(ElFieldKind::Viscosity, std::f64::consts::FRAC_PI_3, 0, &mut field), ElStatus::Ok);
        let mut total = 0.0;
        assert_eq!(el_line_energy(field, cost, 1e-10, &mut total), ElStatus::Ok);
        assert!((total - 6.0 * 3f64.sqrt()).abs() < 1e-12);
        let mut gap = 0.0;
        assert_eq!(el_energy_gap(cost, std::f64::consts::FRAC_PI_3, 1e-10, &mut gap), ElStatus::Ok);
        assert!((gap - 26.582118408015619).abs() < 1e-10);
        assert_eq!(el_line_energy(ptr::null(), cost, 1e-10, &mut total), ElStatus::NullPointer);
        el_field_free(field);
        el_cost_free(cost);
    }
}

#[test]
fn critical_angle() {
    unsafe {
        let (mut t, mut lo, mut hi) = (0.0, 0.0, 0.0);
        assert_eq!(el_critical_angle(0.5, 1e-10, &mut t, &mut lo, &mut hi), ElStatus::Ok);
        assert!((t - 0.0625560798663733).abs() < 1e-9);
        assert!(lo < t && t < hi && hi - lo <= 1e-10);
        assert_eq!(el_critical_angle(0.5, 1e-10, &mut t, ptr::null_mut(), ptr::null_mut()), ElStatus::Ok);
        assert_eq!(el_critical_angle(2.0, 1e-8, &mut t, &mut lo, &mut hi), ElStatus::NoSignChange);
        assert!(last_error().contains("no sign change"));
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/eikonal_lines.h")).unwrap();
    for name in [
        "el_field_new",
        "el_field_eval",
        "el_field_free",
        "el_cost_power",
        "el_cost_parse",
        "el_line_energy",
        "el_energy_gap",
        "el_critical_angle",
        "el_last_error_message",
        "typedef struct ElField ElField",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn table_cost_matches_power() {
    unsafe {
        let ts: Vec<f64> = (0..=256).map(|k| 2.0 * k as f64 / 256.0).collect();
        let vs: Vec<f64> = ts.iter().map(|t| t * t * t).collect();
        let mut table = ptr::null_mut();
        assert_eq!(el_cost_table(ts.as_ptr(), vs.as_ptr(), ts.len(), &mut table), ElStatus::Ok);
        let mut field = ptr::null_mut();
        assert_eq!(el_field_new(ElFieldKind::OneDTransition, 0.5, 0, &mut field), ElStatus::Ok);
        let mut total = 0.0;
        assert_eq!(el_line_energy(field, table, 1e-10, &mut total), ElStatus::Ok);
        let exact = (2.0 * 0.5f64.sin()).powi(3);
        assert!((total - exact).abs() < 1e-3 * exact);
        assert_eq!(el_cost_table(ts.as_ptr(), vs.as_ptr(), 1, &mut table), ElStatus::InvalidArgument);
        el_field_free(field);
        el_cost_free(table);
    }
}
