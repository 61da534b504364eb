use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use clonelab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cl_last_error()) }.to_string_lossy().into_owned()
}

fn op(size: usize, arity: usize, table: &[u8]) -> *mut ClOperation {
    let mut p = ptr::null_mut();
    let s = unsafe { cl_operation_new(size, arity, table.as_ptr(), table.len(), &mut p) };
    assert_eq!(s, ClStatus::Ok, "{}", last_error());
    p
}

#[test]
fn operations_and_relations() {
    let maj = op(2, 3, &[0, 0, 0, 1, 0, 1, 1, 1]);
    let mut v = 9u8;
    assert_eq!(unsafe { cl_operation_apply(maj, [1, 0, 1].as_ptr(), 3, &mut v) }, ClStatus::Ok);
    assert_eq!(v, 1);
    assert_eq!(unsafe { cl_operation_apply(maj, [1, 0].as_ptr(), 2, &mut v) }, ClStatus::InputError);
    assert!(last_error().contains("arity"));
    let mut b = false;
    assert_eq!(unsafe { cl_is_near_unanimity(maj, &mut b) }, ClStatus::Ok);
    assert!(b);

    let mut leq = ptr::null_mut();
    let tuples = [0u8, 0, 0, 1, 1, 1];
    assert_eq!(unsafe { cl_relation_new(2, 2, tuples.as_ptr(), 3, &mut leq) }, ClStatus::Ok);
    assert_eq!(unsafe { cl_preserves(maj, leq, &mut b) }, ClStatus::Ok);
    assert!(b);
    let neg = op(2, 1, &[1, 0]);
    assert_eq!(unsafe { cl_preserves(neg, leq, &mut b) }, ClStatus::Ok);
    assert!(!b);
    unsafe {
        cl_relation_free(leq);
        cl_operation_free(neg);
        cl_operation_free(maj);
    }
}

#[test]
fn bad_arguments() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cl_operation_new(2, 2, [0u8, 1, 1].as_ptr(), 3, &mut p) }, ClStatus::InputError);
    assert!(p.is_null());
    assert_eq!(unsafe { cl_operation_new(2, 1, ptr::null(), 2, &mut p) }, ClStatus::InvalidArgument);
    let mut b = false;
    assert_eq!(unsafe { cl_is_near_unanimity(ptr::null(), &mut b) }, ClStatus::InvalidArgument);
    assert_eq!(unsafe { cl_fragment_generate(ptr::null(), 0, 2, 0, ptr::null_mut()) }, ClStatus::InvalidArgument);
    unsafe { cl_operation_free(ptr::null_mut()) };
}

#[test]
fn fragments_and_interpolation() {
    let nand = op(2, 2, &[1, 1, 1, 0]);
    let maj = op(2, 3, &[0, 0, 0, 1, 0, 1, 1, 1]);
    let xor = op(2, 2, &[0, 1, 1, 0]);
    let and = op(2, 2, &[0, 0, 0, 1]);
    let mut f = ptr::null_mut();
    let gens = [nand as *const ClOperation];
    assert_eq!(unsafe { cl_fragment_generate(gens.as_ptr(), 1, 2, 0, &mut f) }, ClStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { cl_fragment_member_count(f, 2, &mut n) }, ClStatus::Ok);
    assert_eq!(n, 16);
    let mut b = false;
    assert_eq!(unsafe { cl_fragment_contains(f, xor, &mut b) }, ClStatus::Ok);
    assert!(b);

    let mut g = ptr::null_mut();
    let gens = [maj as *const ClOperation];
    assert_eq!(unsafe { cl_fragment_generate(gens.as_ptr(), 1, 2, 0, &mut g) }, ClStatus::Ok);
    assert_eq!(unsafe { cl_is_lambda_interpolable(and, g, 1, &mut b) }, ClStatus::Ok);
    assert!(b);
    assert_eq!(unsafe { cl_is_lambda_interpolable(and, g, 2, &mut b) }, ClStatus::Ok);
    assert!(!b);

    let strat = CString::new("exhaustive").unwrap();
    let mut cover = ptr::null_mut();
    assert_eq!(unsafe { cl_search_dagger(and, g, 2, strat.as_ptr(), &mut b, &mut cover) }, ClStatus::Ok);
    assert!(!b);
    assert!(cover.is_null());
    assert_eq!(unsafe { cl_search_dagger(and, g, 1, strat.as_ptr(), &mut b, &mut cover) }, ClStatus::Ok);
    assert!(b);
    let text = unsafe { CStr::from_ptr(cover) }.to_str().unwrap().to_owned();
    assert!(text.starts_with('['), "{text}");
    let bad = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { cl_search_dagger(and, g, 1, bad.as_ptr(), &mut b, &mut cover) }, ClStatus::InvalidArgument);
    unsafe {
        cl_string_free(cover);
        cl_fragment_free(g);
        cl_fragment_free(f);
        cl_operation_free(and);
        cl_operation_free(xor);
        cl_operation_free(maj);
        cl_operation_free(nand);
    }
}

#[test]
fn cli_through_ffi() {
    let args: Vec<CString> = ["perm", "cover-witness", "--k", "2", "--window", "8"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut code = -1;
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cl_run_cli(ptrs.as_ptr(), ptrs.len(), &mut code, &mut s) }, ClStatus::Ok);
    assert_eq!(code, 0);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"verified\": true"), "{text}");
    unsafe { cl_string_free(s) };

    let bad = [CString::new("no-such-command").unwrap()];
    let ptrs: Vec<_> = bad.iter().map(|a| a.as_ptr()).collect();
    assert_eq!(unsafe { cl_run_cli(ptrs.as_ptr(), 1, &mut code, &mut s) }, ClStatus::Ok);
    assert_eq!(code, 1);
    unsafe { cl_string_free(s) };
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/clonelab.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "cl_last_error",
        "cl_string_free",
        "cl_operation_new",
        "cl_operation_free",
        "cl_operation_apply",
        "cl_is_near_unanimity",
        "cl_relation_new",
        "cl_relation_free",
        "cl_preserves",
        "cl_fragment_generate",
        "cl_fragment_free",
        "cl_fragment_contains",
        "cl_fragment_member_count",
        "cl_is_lambda_interpolable",
        "cl_search_dagger",
        "cl_run_cli",
        "typedef struct ClOperation ClOperation",
        "CL_STATUS_CAP_EXCEEDED = 3",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let src = "#include \"clonelab.h\"\nint main(void) { ClOperation *op = 0; cl_operation_free(op); return 0; }\n";
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("t.c");
    std::fs::write(&c, src).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header().parent().unwrap())
        .arg(&c)
        .status()
        .expect("a C compiler");
    assert!(status.success());
}
