use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use spekkens_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(spk_last_error()) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    spk_string_free(s);
    out
}

fn state(json: &str) -> *mut SpkState {
    let json = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { spk_state_from_json(json.as_ptr(), &mut out) }, SPK_OK, "{}", last_error());
    out
}

fn element(s: *const SpkState, obs: &[&str], outcomes: &[u64]) -> (i32, *mut SpkMeasurement) {
    let owned: Vec<CString> = obs.iter().map(|o| CString::new(*o).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|o| o.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let code = unsafe { spk_measurement_new(s, ptrs.as_ptr(), outcomes.as_ptr(), obs.len(), &mut out) };
    (code, out)
}

#[test]
fn measure_and_update() {
    unsafe {
        let s = state(r#"{"d":3,"n":1,"V":[[1,0]],"w":[0,0]}"#);
        let (code, e) = element(s, &["P"], &[2]);
        assert_eq!(code, SPK_OK);
        let (mut num, mut den) = (0, 0);
        assert_eq!(spk_outcome_probability(s, e, &mut num, &mut den), SPK_OK);
        assert_eq!((num, den), (1, 3));
        let mut post = ptr::null_mut();
        assert_eq!(spk_update(s, e, &mut post), SPK_OK);
        let mut json = ptr::null_mut();
        assert_eq!(spk_state_to_json(post, &mut json), SPK_OK);
        assert_eq!(take(json), r#"{"version":"v1","d":3,"n":1,"V":[[0,1]],"w":[0,2]}"#);
        let mut size = 0;
        assert_eq!(spk_state_support_size(post, &mut size), SPK_OK);
        assert_eq!(size, 3);
        let (mut d, mut n) = (0, 0);
        assert_eq!(spk_state_dims(post, &mut d, &mut n), SPK_OK);
        assert_eq!((d, n), (3, 1));
        let mut grid = ptr::null_mut();
        assert_eq!(spk_state_grid(post, &mut grid), SPK_OK);
        assert!(take(grid).contains("1/3"));
        let mut wigner = ptr::null_mut();
        assert_eq!(spk_wigner_grid(post, &mut wigner), SPK_OK);
        assert!(take(wigner).contains("1/3"));
        spk_state_free(post);
        spk_measurement_free(e);
        spk_state_free(s);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let s = state(r#"{"d":3,"n":1,"V":[[1,0]],"w":[0,0]}"#);
        let (_, e) = element(s, &["X"], &[1]);
        let mut post = ptr::null_mut();
        assert_eq!(spk_update(s, e, &mut post), SPK_ERR_IMPOSSIBLE_OUTCOME);
        assert!(post.is_null());
        assert!(!last_error().is_empty());
        spk_measurement_free(e);

        assert_eq!(element(s, &["X+Q"], &[0]).0, SPK_ERR_SYNTAX);
        assert_eq!(element(s, &["X2"], &[0]).0, SPK_ERR_INDEX_OUT_OF_RANGE);
        assert_eq!(element(s, &["3X"], &[0]).0, SPK_ERR_ZERO_OBSERVABLE);

        let bad = CString::new(r#"{"d":3,"n":1,"V":[[1,0],[0,1]],"w":[0,0]}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(spk_state_from_json(bad.as_ptr(), &mut out), SPK_ERR_INVALID_STATE);
        let garbage = CString::new("{").unwrap();
        assert_eq!(spk_state_from_json(garbage.as_ptr(), &mut out), SPK_ERR_DOCUMENT);
        assert_eq!(spk_state_from_json(ptr::null(), &mut out), SPK_ERR_NULL_POINTER);
        assert_eq!(spk_state_to_json(ptr::null(), &mut ptr::null_mut()), SPK_ERR_NULL_POINTER);

        let even = state(r#"{"d":6,"n":1,"V":[],"w":[0,0]}"#);
        let mut grid = ptr::null_mut();
        assert_eq!(spk_wigner_grid(even, &mut grid), SPK_ERR_EVEN_DIMENSION);
        let (code, coarse) = element(even, &["3X"], &[2]);
        assert_eq!(code, SPK_ERR_INVALID_OUTCOME);
        assert!(coarse.is_null());

        // success clears the message
        assert_eq!(spk_state_grid(even, &mut grid), SPK_OK);
        spk_string_free(grid);
        assert!(last_error().is_empty());
        spk_state_free(even);
        spk_state_free(s);
        spk_state_free(ptr::null_mut());
        spk_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_current_and_compiles() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(root.join("include/spekkens.h")).unwrap();
    for name in [
        "spk_state_from_json",
        "spk_measurement_new",
        "spk_update",
        "spk_last_error",
        "SPK_ERR_IMPOSSIBLE_OUTCOME 30",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping syntax check");
        return;
    };
    assert!(cc.status.success());
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", "-"])
        .arg(format!("-I{}", root.join("include").display()))
        .stdin(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(b"#include \"spekkens.h\"\nint main(void) { return SPK_OK; }\n")?;
            child.wait_with_output()
        })
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
