//! CLI golden cases shared by the `cli` and `acceptance` targets.
//!
//! Each case runs the `idem` binary from the crate root and compares exit
//! code, stdout and stderr with `tests/golden/<name>.out`. Setting
//! `IDEM_BLESS=1` rewrites the files instead.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

macro_rules! case {
    ($name:literal, $exit:literal, [$($arg:expr),* $(,)?]) => {
        Case { name: $name, exit: $exit, args: &[$($arg),*] }
    };
}

pub const CASES: &[Case] = &[
    case!("validate_chain3", 0, ["validate", "tests/fixtures/chain3.sr"]),
    case!("validate_bad_idem", 1, ["validate", "tests/fixtures/bad_idem.sr"]),
    case!("validate_malformed", 2, ["validate", "tests/fixtures/malformed.sr"]),
    case!("validate_builtin_lines", 0, ["validate", "--semiring", "chain:4", "--format", "lines"]),
    case!("validate_module", 0, ["validate", "tests/fixtures/cube2.mod"]),
    case!("validate_open_module", 1, ["validate", "tests/fixtures/open.mod"]),
    case!("validate_polymap", 0, ["validate", "tests/fixtures/outer.polymap"]),
    case!("validate_const_polymap", 1, ["validate", "tests/fixtures/const.polymap"]),
    case!("apply_identity", 0, ["apply", "tests/fixtures/identity.kernel", "tests/fixtures/phi.vec"]),
    case!("apply_rmax", 0, ["apply", "tests/fixtures/m.kernel", "tests/fixtures/zero.vec"]),
    case!("apply_table", 0, ["apply", "tests/fixtures/c3.kernel", "tests/fixtures/c3.vec"]),
    case!("apply_mismatch", 1, ["apply", "tests/fixtures/m.kernel", "tests/fixtures/psi.vec"]),
    case!("compose", 0, ["compose", "tests/fixtures/m.kernel", "tests/fixtures/n.kernel"]),
    case!("kron", 0, ["kron", "tests/fixtures/a.kernel", "tests/fixtures/b.kernel"]),
    case!("outer", 0, ["outer", "tests/fixtures/phi.vec", "tests/fixtures/psi.vec"]),
    case!("nuclear_identity", 0, ["nuclear", "tests/fixtures/identity.kernel"]),
    case!("nuclear_rmax", 0, ["nuclear", "tests/fixtures/m.kernel"]),
    case!("closure_empty", 0, ["closure", "tests/fixtures/cube2.mod", "tests/fixtures/cube2.mod"]),
    case!("closure_single", 0, [
        "closure", "tests/fixtures/cube2.mod", "tests/fixtures/cube2.mod",
        "--points", "tests/fixtures/single.pts",
    ]),
    case!("closure_rmax", 1, ["closure", "tests/fixtures/rmax.mod"]),
    case!("check_prop5_seed7", 0, ["check", "prop5", "--seed", "7", "--format", "lines"]),
    case!("check_theorem1_size2", 0, ["check", "theorem1", "--size", "2"]),
    case!("check_semiring", 0, ["check", "semiring", "--format", "lines"]),
    case!("check_unknown", 2, ["check", "nope"]),
];

pub fn crate_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Exit code, stdout and stderr in golden-file layout.
pub fn transcript(case: &Case) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_idem"))
        .args(case.args)
        .current_dir(crate_root())
        .output()
        .expect("spawn idem");
    let code = out.status.code().expect("exited normally");
    let body = format!(
        "exit {code}\n--- stdout\n{}--- stderr\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    (code, body)
}

fn golden_path(name: &str) -> PathBuf {
    crate_root().join("tests/golden").join(format!("{name}.out"))
}

/// `Err` describes the first difference. Blesses when `IDEM_BLESS` is set.
pub fn check(case: &Case) -> Result<(), String> {
    let (code, body) = transcript(case);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.exit));
    }
    let path = golden_path(case.name);
    if std::env::var_os("IDEM_BLESS").is_some() {
        fs::write(&path, &body).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let want = read(&path)?;
    if want != body {
        return Err(format!("{}: output differs from {}\n{body}", case.name, path.display()));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
