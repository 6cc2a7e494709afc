//! The `idem` binary against golden transcripts.

mod common;

use common::golden::{check, transcript, CASES};

#[test]
fn golden_transcripts() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| check(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn output_is_deterministic() {
    for c in CASES {
        assert_eq!(transcript(c), transcript(c), "{}", c.name);
    }
}

#[test]
fn exit_codes_are_documented() {
    for c in CASES {
        assert!(matches!(transcript(c).0, 0..=2), "{}", c.name);
    }
}

#[test]
fn in_process_runner_matches_the_binary() {
    for c in CASES {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let args = std::iter::once("idem").chain(c.args.iter().copied());
        let cwd = std::env::current_dir().unwrap();
        std::env::set_current_dir(common::golden::crate_root()).unwrap();
        let code = idem::cli::run(args, &mut out, &mut err);
        std::env::set_current_dir(cwd).unwrap();
        let body = format!(
            "exit {code}\n--- stdout\n{}--- stderr\n{}",
            String::from_utf8_lossy(&out),
            String::from_utf8_lossy(&err)
        );
        assert_eq!((code, body), transcript(c), "{}", c.name);
    }
}
