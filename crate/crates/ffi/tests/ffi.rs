use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use harmconv_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn build(spec: &str, order: usize) -> *mut HcMap {
    let s = CString::new(spec).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hc_map_from_spec(s.as_ptr(), order, &mut out) },
        HcStatus::Ok,
        "{}",
        last_error()
    );
    out
}

#[test]
fn map_lifecycle() {
    let f0 = build("f0", 32);
    let fa = build("fa(a=0.5, gamma=pi/3)", 32);
    let mut conv = ptr::null_mut();
    unsafe {
        assert_eq!(hc_map_convolve(f0, fa, &mut conv), HcStatus::Ok);
        assert_eq!(hc_map_order(conv), 32);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(hc_map_eval(f0, 0.5, 0.0, &mut re, &mut im), HcStatus::Ok);
        assert!((re - 1.0).abs() < 1e-6 && im.abs() < 1e-12, "{re} {im}");
        let mut j = 0.0;
        assert_eq!(hc_map_jacobian(f0, 0.2, 0.1, &mut j), HcStatus::Ok);
        assert!(j > 0.0);
        assert_eq!(
            hc_map_dilatation(f0, 0.3, 0.0, &mut re, &mut im),
            HcStatus::Ok
        );
        assert!((re + 0.3).abs() < 1e-12 && im.abs() < 1e-12);
        hc_map_free(conv);
        hc_map_free(fa);
        hc_map_free(f0);
        hc_map_free(ptr::null_mut());
    }
}

#[test]
fn coefficients_are_interleaved() {
    let f0 = build("f0", 8);
    let mut h = vec![f64::NAN; 18];
    let mut g = vec![f64::NAN; 18];
    unsafe {
        assert_eq!(
            hc_map_coeffs(f0, h.as_mut_ptr(), g.as_mut_ptr(), 18),
            HcStatus::Ok
        );
        for n in 1..=8 {
            assert_eq!(h[2 * n], (n as f64 + 1.0) / 2.0);
            assert_eq!(g[2 * n], (1.0 - n as f64) / 2.0);
            assert_eq!(h[2 * n + 1], 0.0);
        }
        assert_eq!(
            hc_map_coeffs(f0, h.as_mut_ptr(), ptr::null_mut(), 17),
            HcStatus::BufferTooSmall
        );
        assert_eq!(
            hc_map_coeffs(f0, ptr::null_mut(), g.as_mut_ptr(), 18),
            HcStatus::Ok
        );
        hc_map_free(f0);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let mut out = ptr::null_mut();
    unsafe {
        let bad = CString::new("conv(f0)").unwrap();
        assert_eq!(
            hc_map_from_spec(bad.as_ptr(), 16, &mut out),
            HcStatus::MapSpec
        );
        assert!(out.is_null());
        assert!(!last_error().is_empty());
        let bad = CString::new("fa(a=2)").unwrap();
        assert_eq!(
            hc_map_from_spec(bad.as_ptr(), 16, &mut out),
            HcStatus::InvalidParameter
        );
        assert_eq!(
            hc_map_from_spec(ptr::null(), 16, &mut out),
            HcStatus::NullPointer
        );
        let ok = CString::new("f0").unwrap();
        assert_eq!(
            hc_map_from_spec(ok.as_ptr(), 0, &mut out),
            HcStatus::InvalidParameter
        );
        assert_eq!(
            hc_map_from_spec(ok.as_ptr(), 16, ptr::null_mut()),
            HcStatus::NullPointer
        );
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            hc_map_eval(ptr::null(), 0.0, 0.0, &mut re, &mut im),
            HcStatus::NullPointer
        );
        assert_eq!(hc_map_order(ptr::null()), 0);
        let f = build("identity", 4);
        assert_eq!(hc_map_eval(f, 0.1, 0.0, &mut re, &mut im), HcStatus::Ok);
        assert!(last_error().is_empty());
        hc_map_free(f);
    }
}

#[test]
fn root_counts() {
    // (z - 2)(z - 1/2) = z² - 2.5z + 1
    let p = [1.0, 0.0, -2.5, 0.0, 1.0, 0.0];
    let mut n = 99;
    unsafe {
        assert_eq!(hc_roots_in_disk(p.as_ptr(), 3, &mut n), HcStatus::Ok);
        assert_eq!(n, 1);
        // z² + 1 has both roots on the circle
        let q = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(
            hc_roots_in_disk(q.as_ptr(), 3, &mut n),
            HcStatus::Inconclusive
        );
        assert_eq!(
            hc_roots_in_disk(ptr::null(), 3, &mut n),
            HcStatus::NullPointer
        );
    }
}

#[test]
fn verification_reports() {
    let mut json = ptr::null_mut();
    let mut code = -1;
    unsafe {
        assert_eq!(
            hc_verify_half_plane(1, 0.0, 0.0, 0.0, 0.0, &mut json, &mut code),
            HcStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        hc_string_free(json);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "verify-t2");
        assert_eq!(v["verdict"], "consistent");

        assert_eq!(
            hc_verify_strip(
                1,
                0.0,
                std::f64::consts::FRAC_PI_2,
                0.0,
                0.0,
                &mut json,
                ptr::null_mut()
            ),
            HcStatus::Ok
        );
        hc_string_free(json);
        assert_eq!(
            hc_verify_strip(1, 0.0, 0.0, 0.0, 0.0, &mut json, &mut code),
            HcStatus::InvalidParameter
        );
        assert_eq!(
            hc_verify_mobius(0.9, 1.0, 0.0, &mut json, &mut code),
            HcStatus::Ok
        );
        hc_string_free(json);
        hc_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_is_generated() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/harmconv.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "typedef struct HcMap HcMap;",
        "HC_STATUS_OK = 0",
        "hc_map_from_spec",
        "hc_map_convolve",
        "hc_map_coeffs",
        "hc_roots_in_disk",
        "hc_verify_strip",
        "hc_string_free",
        "hc_last_error",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libharmconv_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
