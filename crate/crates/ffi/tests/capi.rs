use std::ffi::{c_char, CStr, CString};
use std::ptr;

use permlogic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    pl_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(pl_last_error_message()).to_str().unwrap().to_string()
}

const RUNNING_MODEL: &str = "n 4\n1 3 p,q\n2 2 q\n3 4 q,r\n4 1 p\n";
const RUNNING_FORMULA: &str = "forall x. forall y. !(x -> y & y |> x & p(x))";

#[test]
fn check_and_print() {
    unsafe {
        let (mut f, mut m) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pl_formula_parse(c(RUNNING_FORMULA).as_ptr(), &mut f), PlStatus::Ok);
        assert_eq!(pl_model_parse(c(RUNNING_MODEL).as_ptr(), &mut m), PlStatus::Ok);
        assert_eq!(pl_model_size(m), 4);
        assert_eq!(pl_check(m, f), PlStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(pl_formula_to_string(f, &mut s), PlStatus::Ok);
        assert_eq!(take(s), RUNNING_FORMULA);
        assert_eq!(pl_formula_snf(f, &mut s), PlStatus::Ok);
        assert!(take(s).starts_with("chi: "));
        assert_eq!(pl_model_to_string(m, &mut s), PlStatus::Ok);
        assert!(take(s).starts_with("n 4\n"));
        pl_formula_free(f);
        pl_model_free(m);
    }
}

#[test]
fn sat_and_unsat() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(pl_formula_parse(c(RUNNING_FORMULA).as_ptr(), &mut f), PlStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(pl_sat(f, 6, 3, 5, &mut m), PlStatus::Ok);
        assert_eq!(pl_check(m, f), PlStatus::Ok);
        pl_model_free(m);
        pl_formula_free(f);
        assert_eq!(pl_formula_parse(c("(exists x. p(x)) & forall x. !p(x)").as_ptr(), &mut f), PlStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(pl_sat(f, 4, 2, 4, &mut m), PlStatus::Negative);
        assert!(m.is_null());
        pl_formula_free(f);
    }
}

#[test]
fn rlp_round_trip() {
    let inst = "alphabet a\nnfa1\nstates 2\ninit 0\nfinal 1\ntrans 0 a 1\nnfa2\nstates 2\ninit 0\nfinal 1\ntrans 0 a 1\n";
    unsafe {
        let mut i = ptr::null_mut();
        assert_eq!(pl_rlp_parse(c(inst).as_ptr(), &mut i), PlStatus::Ok);
        let mut w = ptr::null_mut();
        assert_eq!(pl_rlp_solve(i, 0, &mut w), PlStatus::Ok);
        assert_eq!(pl_model_size(w), 1);
        assert_eq!(pl_rlp_verify(i, w), PlStatus::Ok);
        pl_model_free(w);
        pl_rlp_free(i);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(pl_formula_parse(c("forall z. p(z)").as_ptr(), &mut f), PlStatus::InputError);
        assert!(f.is_null());
        assert!(last_error().contains("1:8"), "{}", last_error());
        assert_eq!(pl_formula_parse(c("p(x)").as_ptr(), &mut f), PlStatus::InputError);
        assert_eq!(pl_formula_parse(ptr::null(), &mut f), PlStatus::NullPointer);
        assert_eq!(pl_check(ptr::null(), ptr::null()), PlStatus::NullPointer);
        assert_eq!(pl_formula_parse(c("true").as_ptr(), ptr::null_mut()), PlStatus::NullPointer);
        assert_eq!(pl_formula_parse(c("true").as_ptr(), &mut f), PlStatus::Ok);
        assert_eq!(last_error(), "");
        pl_formula_free(f);
        pl_formula_free(ptr::null_mut());
        pl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/permlogic.h")).unwrap();
    for name in [
        "typedef struct PlFormula PlFormula",
        "typedef struct PlModel PlModel",
        "typedef struct PlRlpInstance PlRlpInstance",
        "PL_STATUS_OK = 0",
        "PL_STATUS_BUDGET = 3",
        "pl_last_error_message",
        "pl_sat(",
        "pl_rlp_solve(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
