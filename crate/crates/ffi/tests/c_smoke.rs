//! Compiles examples/smoke.c against the generated header and the static
//! library. Skipped when no C compiler or no staticlib is available.

use std::path::{Path, PathBuf};
use std::process::Command;

fn staticlib() -> Option<PathBuf> {
    // target/<profile>/deps/c_smoke-* -> target/<profile>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("librispower_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = staticlib() else {
        eprintln!("skipping: librispower_ffi.a not found");
        return;
    };
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let compiled = Command::new("cc")
        .arg(crate_dir.join("examples/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    match compiled {
        Ok(s) if s.success() => {}
        Ok(s) => panic!("cc failed: {s}"),
        Err(e) => {
            eprintln!("skipping: cc unavailable ({e})");
            return;
        }
    }
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("circuits=32 static_uw=4802112 dynamic_uw=1612800 total_uw=6414912"),
        "{stdout}"
    );
    assert!(stdout.contains("control board power required"), "{stdout}");
}
