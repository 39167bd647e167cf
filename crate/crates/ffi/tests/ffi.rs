use sharbly_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

unsafe fn last_error() -> String {
    CStr::from_ptr(sh_last_error()).to_string_lossy().into_owned()
}

#[test]
fn build_verify_and_check() {
    unsafe {
        let mut z = ptr::null_mut();
        assert_eq!(sh_cycle_build(2, &mut z), ShStatus::Ok);
        assert_eq!(sh_cycle_len(z), 1);
        let mut valid = false;
        let mut cert = ptr::null_mut();
        assert_eq!(sh_cycle_verify(z, 0, &mut valid, &mut cert), ShStatus::Ok);
        assert!(valid);
        let mut ok = false;
        assert_eq!(sh_cert_check(cert, &mut ok), ShStatus::Ok);
        assert!(ok);

        // alter one witness entry
        let text = CStr::from_ptr(cert).to_str().unwrap().to_owned();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let e = v["payload"]["ledger"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|e| !e["witness"].is_null())
            .unwrap();
        let x = e["witness"][1][1].as_i64().unwrap();
        e["witness"][1][1] = (x + 2).into();
        let bad = CString::new(v.to_string()).unwrap();
        assert_eq!(sh_cert_check(bad.as_ptr(), &mut ok), ShStatus::Invalid);
        assert!(!ok);
        assert!(!last_error().is_empty());
        sh_string_free(cert);

        let mut json = ptr::null_mut();
        assert_eq!(sh_cycle_to_json(z, &mut json), ShStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sh_cycle_from_json(json, &mut back), ShStatus::Ok);
        assert_eq!(sh_cycle_len(back), 1);
        sh_string_free(json);
        sh_cycle_free(back);
        sh_cycle_free(z);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut z = ptr::null_mut();
        assert_eq!(sh_cycle_build(5, &mut z), ShStatus::UnsupportedRank);
        assert!(last_error().contains('5'));
        assert_eq!(sh_cycle_build(2, ptr::null_mut()), ShStatus::NullPointer);
        let junk = CString::new("{").unwrap();
        assert_eq!(sh_cycle_from_json(junk.as_ptr(), &mut z), ShStatus::InvalidInput);
        assert_eq!(sh_cycle_len(ptr::null()), 0);

        assert_eq!(sh_cycle_build(3, &mut z), ShStatus::Ok);
        let mut valid = false;
        assert_eq!(sh_cycle_verify(z, 1, &mut valid, ptr::null_mut()), ShStatus::BudgetExceeded);
        sh_cycle_free(z);
    }
}

#[test]
fn flipon_and_canon() {
    unsafe {
        let mut out = true;
        // the A3 simplex is proper
        let v = [1i64, 0, 0, 0, 1, 0, 0, 0, 1, 1, -1, 0, 1, 0, -1, 0, 1, -1];
        assert_eq!(sh_is_flipon(v.as_ptr(), 6, 3, &mut out), ShStatus::Ok);
        assert!(!out);
        // four of the vectors lie in one plane, so v v^t spans too little
        let v = [1i64, 0, 0, 0, 1, 0, 1, 1, 0, 1, -1, 0, 0, 0, 1, 1, 0, 1];
        assert_eq!(sh_is_flipon(v.as_ptr(), 6, 3, &mut out), ShStatus::Ok);
        assert!(out);
        let mut w = [0i64; 6];
        let mut s = 7;
        let rep = [1i64, 0, 1, 0, 1, 1];
        assert_eq!(sh_canonicalize(rep.as_ptr(), 3, 2, w.as_mut_ptr(), &mut s), ShStatus::Ok);
        assert_eq!(s, 0);
        let z = [0i64, 0, 1, 1, 1, 0];
        assert_eq!(sh_canonicalize(z.as_ptr(), 3, 2, w.as_mut_ptr(), &mut s), ShStatus::InvalidInput);
    }
}

#[test]
fn c_program_links_against_the_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libsharbly_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built; skipping");
        return;
    }
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let st = std::process::Command::new(&cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success(), "C build failed");
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn which_cc() -> Result<String, ()> {
    for c in ["cc", "gcc", "clang"] {
        if std::process::Command::new(c).arg("--version").output().is_ok() {
            return Ok(c.into());
        }
    }
    Err(())
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("sharbly-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
