use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use algcic_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    alg_string_free(p);
    s
}

unsafe fn last_kind(s: *const AlgSession) -> String {
    CStr::from_ptr(alg_session_last_error_kind(s)).to_str().unwrap().to_string()
}

fn corpus(rel: &str) -> CString {
    cstr(algcic::prelude::corpus_dir().join(rel).to_str().unwrap())
}

#[test]
fn load_query_and_evaluate() {
    unsafe {
        let s = alg_session_new(0, 0);
        assert!(!s.is_null());
        assert_eq!(alg_session_load_file(s, corpus("prelude/arith.alg").as_ptr()), AlgStatus::Ok);
        assert!(alg_session_len(s) > 0);

        let mut out = ptr::null_mut();
        assert_eq!(alg_session_type_of(s, cstr("add").as_ptr(), &mut out), AlgStatus::Ok);
        assert_eq!(take(out), "Nat → Nat → Nat");

        assert_eq!(alg_session_eval(s, cstr("two").as_ptr(), &mut out), AlgStatus::Ok);
        assert_eq!(take(out), "inr (inr (inl ()))");

        assert_eq!(alg_session_eval(s, cstr("missing").as_ptr(), &mut out), AlgStatus::NotFound);
        assert!(out.is_null());
        assert_eq!(last_kind(s), "NotFound");
        alg_session_free(s);
    }
}

#[test]
fn source_text_and_type_errors() {
    unsafe {
        let s = alg_session_new(0, 0);
        let ok = cstr("def U : Type := 1\ndef u : U := ()");
        assert_eq!(alg_session_load_source(s, ok.as_ptr(), cstr("unit").as_ptr()), AlgStatus::Ok);
        assert_eq!(alg_session_len(s), 2);

        let bad = cstr("def v : U := fun (x : U) => x");
        assert_eq!(alg_session_load_source(s, bad.as_ptr(), cstr("bad").as_ptr()), AlgStatus::Type);
        assert_eq!(last_kind(s), "NotConvertible");
        let msg = CStr::from_ptr(alg_session_last_error(s)).to_str().unwrap();
        assert!(msg.starts_with("bad:1: in `v`"), "{msg}");

        assert_eq!(alg_session_load_source(s, cstr("def = 1").as_ptr(), cstr("p").as_ptr()), AlgStatus::Parse);
        assert_eq!(last_kind(s), "ParseError");
        alg_session_free(s);
    }
}

#[test]
fn flags_are_fixed_at_creation() {
    unsafe {
        let path = corpus("negative/paradox_weak.alg");
        let weak = alg_session_new(0, 0);
        assert_eq!(alg_session_load_file(weak, path.as_ptr()), AlgStatus::Type);
        assert_eq!(last_kind(weak), "EliminationRestricted");
        alg_session_free(weak);

        let dep = alg_session_new(ALG_FLAG_COFIX_DEP_ELIM, 0);
        assert_eq!(alg_session_load_file(dep, path.as_ptr()), AlgStatus::Ok);
        alg_session_free(dep);

        assert!(alg_session_new(1 << 20, 0).is_null());
    }
}

#[test]
fn fuel_and_io_failures() {
    unsafe {
        let s = alg_session_new(0, 200);
        assert_eq!(alg_session_load_file(s, corpus("negative/fuel.alg").as_ptr()), AlgStatus::Type);
        assert_eq!(last_kind(s), "FuelExhausted");
        assert_eq!(alg_session_load_file(s, cstr("/nonexistent/file.alg").as_ptr()), AlgStatus::Io);
        assert_eq!(last_kind(s), "IoError");
        alg_session_free(s);
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        assert_eq!(alg_session_load_file(ptr::null_mut(), cstr("x").as_ptr()), AlgStatus::NullArgument);
        assert!(alg_session_last_error(ptr::null()).is_null());
        assert_eq!(alg_session_len(ptr::null()), 0);
        alg_session_free(ptr::null_mut());
        alg_string_free(ptr::null_mut());

        let s = alg_session_new(0, 0);
        assert!(alg_session_last_error(s).is_null());
        assert_eq!(alg_session_load_file(s, ptr::null()), AlgStatus::NullArgument);
        let bad_utf8 = [0xffu8 as c_char, 0];
        assert_eq!(alg_session_load_source(s, bad_utf8.as_ptr(), cstr("x").as_ptr()), AlgStatus::InvalidUtf8);
        assert_eq!(alg_session_type_of(s, cstr("x").as_ptr(), ptr::null_mut()), AlgStatus::NullArgument);
        alg_session_free(s);
    }
}

#[test]
fn status_names() {
    let name = |s| unsafe { CStr::from_ptr(alg_status_name(s)).to_str().unwrap() };
    assert_eq!(name(AlgStatus::Ok), "Ok");
    assert_eq!(name(AlgStatus::FuelExhausted), "FuelExhausted");
    assert_eq!(AlgStatus::Panic as i32, 9);
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/algcic.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["alg_session_new", "alg_session_eval", "alg_string_free", "ALG_STATUS_FUEL_EXHAUSTED"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .status()
            .expect("C compiler available");
        assert!(status.success(), "{compiler} rejected the header");
    }
}
