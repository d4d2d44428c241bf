//! Exercises the C ABI through the exported symbols.

use std::ffi::{CStr, CString};
use std::ptr;

use borel_capi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    borel_string_free(p);
    s
}

#[test]
fn handle_lifecycle_and_roots() {
    let fam = CString::new("B").unwrap();
    let mut h: *mut BorelSystem = ptr::null_mut();
    let st = unsafe { borel_system_new(fam.as_ptr(), 3, &mut h) };
    assert!(st == BorelStatus::Ok);
    let mut out = ptr::null_mut();
    assert!(unsafe { borel_system_roots_json(h, &mut out) } == BorelStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 9);
    assert_eq!(v["s"], serde_json::json!([0, 1, 0]));

    let mut out = ptr::null_mut();
    assert!(unsafe { borel_system_nilradical_json(h, &mut out) } == BorelStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["dim"], 9);

    unsafe { borel_system_free(h) };
}

#[test]
fn unknown_family_reports_invalid_argument() {
    let fam = CString::new("Z").unwrap();
    let mut h: *mut BorelSystem = ptr::null_mut();
    let st = unsafe { borel_system_new(fam.as_ptr(), 9, &mut h) };
    assert!(st == BorelStatus::InvalidArgument);
    let msg = take_string(borel_last_error());
    assert!(!msg.is_empty());
}

#[test]
fn derivations_and_classify() {
    let fam = CString::new("A").unwrap();
    let mut h: *mut BorelSystem = ptr::null_mut();
    assert!(unsafe { borel_system_new(fam.as_ptr(), 3, &mut h) } == BorelStatus::Ok);

    let mut out = ptr::null_mut();
    assert!(unsafe { borel_system_derivations_json(h, 40, &mut out) } == BorelStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["outer_dim"], 6);

    let field = CString::new("complex").unwrap();
    let mut out = ptr::null_mut();
    assert!(
        unsafe { borel_system_classify_json(h, field.as_ptr(), &mut out) } == BorelStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);

    unsafe { borel_system_free(h) };
}

#[test]
fn extend_and_canonicalize_round_trip() {
    let spec = CString::new(
        r#"{"family":"A","rank":3,"q":1,"field":"complex",
            "sigma":[["1","1","-1"]],"omega":[["0","0","0"]],"gamma":[["0"]]}"#,
    )
    .unwrap();

    let mut out = ptr::null_mut();
    assert!(unsafe { borel_extend_json(spec.as_ptr(), &mut out) } == BorelStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["dim"], 7);
    assert_eq!(v["certificates"]["jacobi"], true);

    let mut out = ptr::null_mut();
    assert!(unsafe { borel_canonicalize_json(spec.as_ptr(), 0, &mut out) } == BorelStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["surviving"], serde_json::json!([1]));

    let bad = CString::new("not json").unwrap();
    let mut out = ptr::null_mut();
    assert!(unsafe { borel_extend_json(bad.as_ptr(), &mut out) } == BorelStatus::InvalidArgument);
}
