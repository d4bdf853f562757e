//! Compiles `tests/c/smoke.c` against the generated header and a freshly
//! built shared library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

/// `cargo test` does not refresh the cdylib, so build it here and take the
/// path from cargo's artifact messages.
fn build_cdylib() -> PathBuf {
    let out = Command::new(env!("CARGO"))
        .args(["build", "--profile", "test", "-p", "sehgalkit-ffi", "--lib", "--message-format=json"])
        .output()
        .expect("cargo runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .filter(|m| m["reason"] == "compiler-artifact" && m["target"]["name"] == "sehgalkit_ffi")
        .flat_map(|m| m["filenames"].as_array().cloned().unwrap_or_default())
        .filter_map(|f| f.as_str().map(PathBuf::from))
        .find(|p| p.extension().is_some_and(|e| e == "so" || e == "dylib"))
        .expect("a shared library artifact")
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = build_cdylib();
    let lib_dir = lib.parent().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let st = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(lib_dir)
        .arg("-lsehgalkit_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", lib_dir).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
