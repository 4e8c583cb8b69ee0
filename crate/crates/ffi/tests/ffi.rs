use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use crackspec_ffi::*;

fn last_error() -> String {
    // SAFETY: the library returns a NUL-terminated thread-local buffer.
    unsafe { CStr::from_ptr(crackspec_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn bessel_and_version() {
    // SAFETY: pointers are locals or live handles, each freed once.
    unsafe {
        let mut v = 0.0;
        assert_eq!(crackspec_bessel_zero(0, 1, &mut v), CsStatus::Ok);
        assert!((v - 2.404825557695773).abs() < 1e-12);
        assert_eq!(crackspec_bessel_j(0, v, &mut v), CsStatus::Ok);
        assert!(v.abs() < 1e-12);
        assert_eq!(crackspec_bessel_zero(0, 0, &mut v), CsStatus::Range);
        assert!(!last_error().is_empty());
        assert_eq!(crackspec_bessel_j(0, 1.0, ptr::null_mut()), CsStatus::NullPointer);
        let version = CStr::from_ptr(crackspec_version()).to_str().unwrap();
        assert!(version.contains("schemas"));
    }
}

#[test]
fn spec_validation_reports_code_and_message() {
    // SAFETY: pointers are locals or live handles, each freed once.
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(crackspec_spec_new(0, 0.1, 0.5, 1.0, &mut spec), CsStatus::Validation);
        assert!(spec.is_null());
        assert!(last_error().contains("N must be"));
        crackspec_spec_free(spec);
    }
}

#[test]
fn disk_spectrum_through_handles() {
    // SAFETY: pointers are locals or live handles, each freed once.
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(crackspec_spec_new(1, std::f64::consts::PI, 0.5, 1.0, &mut spec), CsStatus::Ok);
        let mut sp = ptr::null_mut();
        assert_eq!(crackspec_solve(spec, 40, 6, 1e-6, &mut sp), CsStatus::Ok);
        assert_eq!(crackspec_spectrum_len(sp), 6);
        let mut buf = [0.0; 4];
        let mut written = 0;
        assert_eq!(crackspec_spectrum_lowest(sp, buf.as_mut_ptr(), 4, &mut written), CsStatus::Ok);
        assert_eq!(written, 4);
        assert!((buf[0] - 5.783).abs() < 0.05, "{buf:?}");
        assert!((buf[1] - buf[2]).abs() < 1e-6);
        let mut e = CsEigenvalue::default();
        assert_eq!(crackspec_spectrum_get(sp, 0, &mut e), CsStatus::Ok);
        assert_eq!((e.ell, e.weight), (0, 1));
        assert!(e.residual <= 1e-6);
        assert_eq!(crackspec_spectrum_get(sp, 99, &mut e), CsStatus::Range);
        crackspec_spectrum_free(sp);
        crackspec_spec_free(spec);
    }
}

#[test]
fn quarter_and_capacity() {
    // SAFETY: pointers are locals or live handles, each freed once.
    unsafe {
        let mut case = CsQuarterCase::Nnd;
        let name = CString::new("dnd").unwrap();
        assert_eq!(crackspec_quarter_case_parse(name.as_ptr(), &mut case), CsStatus::Ok);
        assert_eq!(case, CsQuarterCase::Dnd);
        let mut buf = [0.0; 2];
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert_eq!(crackspec_quarter(case, half_pi, 0.4356, 1.0, 40, 1e-6, buf.as_mut_ptr(), 2), CsStatus::Ok);
        assert!((buf[0] - 14.68).abs() < 0.2, "{buf:?}");
        let mut p = CsAdditivity::default();
        assert_eq!(crackspec_capacity_additivity(0.4356, 1.0, 0.2, 40, &mut p), CsStatus::Ok);
        assert!(p.ratio > 0.0 && p.ratio <= 1.0 + 1e-9);
        assert_eq!(crackspec_capacity_additivity(0.4356, 1.0, 3.0, 40, &mut p), CsStatus::Domain);
    }
}

#[test]
fn crossings_list() {
    // SAFETY: pointers are locals or live handles, each freed once.
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(crackspec_spec_new(3, 0.0, 0.4356, 1.0, &mut spec), CsStatus::Ok);
        let eps: Vec<f64> = (0..8).map(|i| 0.1 + 0.05 * i as f64).collect();
        let mut list = ptr::null_mut();
        assert_eq!(crackspec_crossings(spec, eps.as_ptr(), eps.len(), 48, 3, 1e-6, 2, &mut list), CsStatus::Ok);
        let n = crackspec_crossings_len(list);
        assert!(n >= 1);
        let mut c = CsCrossing::default();
        assert_eq!(crackspec_crossings_get(list, 0, &mut c), CsStatus::Ok);
        assert_eq!(c.multiplicity, 3);
        assert!(c.epsilon_star > 0.1 && c.epsilon_star < 0.45);
        crackspec_crossings_free(list);
        crackspec_spec_free(spec);
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"crackspec.h\"\nint main(void) { CsSpec *s = 0; double v; \
         return crackspec_spec_new(1, 3.14, 0.5, 1.0, &s) == CS_STATUS_OK && crackspec_bessel_zero(0, 1, &v) == 0; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
