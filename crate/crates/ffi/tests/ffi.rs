use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fa_cycles_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_string();
    fac_string_free(s);
    owned
}

unsafe fn measure(src: &str) -> *mut FacMeasure {
    let mut m = ptr::null_mut();
    assert_eq!(fac_measure_parse(c(src).as_ptr(), &mut m), FacStatus::Ok);
    m
}

unsafe fn show(m: *const FacMeasure) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(fac_measure_to_string(m, &mut s), FacStatus::Ok);
    take(s)
}

unsafe fn bundled(name: &str) -> *mut FacChain {
    let mut k = ptr::null_mut();
    assert_eq!(fac_chain_bundled(c(name).as_ptr(), &mut k), FacStatus::Ok);
    k
}

#[test]
fn apply_moves_germs_and_atoms() {
    unsafe {
        let k = bundled("two_interval_germs");
        let mu = measure("germ(0+)");
        let mut image = ptr::null_mut();
        assert_eq!(fac_chain_apply(k, mu, 1, &mut image), FacStatus::Ok);
        assert_eq!(show(image), "germ(1+)");
        fac_measure_free(image);

        let chain = bundled("three_state_swap");
        let d2 = measure("delta(2)");
        assert_eq!(fac_chain_apply(chain, d2, 3, &mut image), FacStatus::Ok);
        assert_eq!(show(image), "delta(3)");
        fac_measure_free(image);

        fac_measure_free(mu);
        fac_measure_free(d2);
        fac_chain_free(k);
        fac_chain_free(chain);
    }
}

#[test]
fn lattice_and_split() {
    unsafe {
        let a = measure("1/2*delta(1) + 1/2*germ(0+)");
        let b = measure("1/4*delta(1) + 3/4*delta(2)");
        let mut m = ptr::null_mut();
        assert_eq!(fac_measure_meet(a, b, &mut m), FacStatus::Ok);
        assert_eq!(show(m), "1/4*delta(1)");
        fac_measure_free(m);
        assert_eq!(fac_measure_join(a, b, &mut m), FacStatus::Ok);
        assert_eq!(show(m), "1/2*delta(1) + 3/4*delta(2) + 1/2*germ(0+)");
        fac_measure_free(m);

        let (mut ca, mut pfa) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(fac_measure_split(a, &mut ca, &mut pfa), FacStatus::Ok);
        assert_eq!(show(ca), "1/2*delta(1)");
        assert_eq!(show(pfa), "1/2*germ(0+)");
        fac_measure_free(ca);
        fac_measure_free(pfa);
        fac_measure_free(a);
        fac_measure_free(b);
    }
}

#[test]
fn evaluate_and_json_round_trip() {
    unsafe {
        let mu = measure("1/3*delta(0) + 2/3*germ(1-)");
        let mut s = ptr::null_mut();
        assert_eq!(
            fac_measure_evaluate(mu, c("[0,1)").as_ptr(), &mut s),
            FacStatus::Ok
        );
        assert_eq!(take(s), "1");
        assert_eq!(
            fac_measure_evaluate(mu, c("(0,1)").as_ptr(), &mut s),
            FacStatus::Ok
        );
        assert_eq!(take(s), "2/3");

        assert_eq!(fac_measure_to_json(mu, &mut s), FacStatus::Ok);
        let json = take(s);
        let mut back = ptr::null_mut();
        assert_eq!(
            fac_measure_from_json(c(&json).as_ptr(), &mut back),
            FacStatus::Ok
        );
        assert_eq!(show(back), show(mu));
        fac_measure_free(back);
        fac_measure_free(mu);
    }
}

#[test]
fn cycles_as_json() {
    unsafe {
        let k = bundled("three_state_swap");
        let mut s = ptr::null_mut();
        assert_eq!(fac_chain_cycles_json(k, 8, &mut s), FacStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        fac_chain_free(k);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut k = ptr::null_mut();
        let bad = "name = \"bad\"\nspace = \"{1,2}\"\n[stochastic]\nstates = [1, 2]\nmatrix = [[1, 0], [\"1/2\", \"2/5\"]]\n";
        assert_eq!(
            fac_chain_from_toml(c(bad).as_ptr(), &mut k),
            FacStatus::InvalidChain
        );
        assert!(k.is_null());
        assert!(take(fac_last_error()).contains("RowNotStochastic"));

        assert_eq!(
            fac_chain_bundled(c("nope").as_ptr(), &mut k),
            FacStatus::UnknownBundle
        );
        let mut m = ptr::null_mut();
        assert_eq!(
            fac_measure_parse(c("delta(").as_ptr(), &mut m),
            FacStatus::InvalidMeasure
        );
        assert_eq!(
            fac_measure_parse(ptr::null(), &mut m),
            FacStatus::NullPointer
        );

        let mu = measure("delta(0)");
        let mut s = ptr::null_mut();
        assert_eq!(
            fac_measure_evaluate(mu, c("(0,").as_ptr(), &mut s),
            FacStatus::InvalidSet
        );

        let chain = bundled("three_state_swap");
        assert_eq!(
            fac_chain_apply(chain, mu, 1, &mut m),
            FacStatus::KernelError
        );

        let neg = measure("-1*delta(0)");
        assert_eq!(fac_measure_meet(mu, neg, &mut m), FacStatus::MeasureError);

        assert_eq!(fac_measure_to_string(mu, &mut s), FacStatus::Ok);
        fac_string_free(s);
        assert!(fac_last_error().is_null());

        fac_measure_free(neg);
        fac_measure_free(mu);
        fac_chain_free(chain);
        fac_string_free(ptr::null_mut());
        fac_chain_free(ptr::null_mut());
        fac_measure_free(ptr::null_mut());
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/fa_cycles.h")).unwrap();
    let source = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
}

// Test builds only produce the rlib, so build the static library explicitly.
fn static_library() -> Option<PathBuf> {
    let profile_dir = std::env::current_exe().ok()?.parent()?.parent()?.to_path_buf();
    let mut cmd = Command::new(env!("CARGO"));
    cmd.args(["build", "--quiet", "--lib", "-p", "fa-cycles-ffi"]);
    if profile_dir.file_name()? == "release" {
        cmd.arg("--release");
    }
    if !cmd.status().ok()?.success() {
        return None;
    }
    Some(profile_dir.join("libfa_cycles_ffi.a")).filter(|p| p.exists())
}

#[test]
fn c_program_links_against_static_library() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = static_library().expect("static library builds");
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(Path::new(&exe)).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
