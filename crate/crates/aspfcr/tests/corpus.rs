//! Runs every corpus program through the corpus runner and fails on any
//! mismatch against its `.expected` file.

use std::path::Path;

#[test]
fn corpus_programs_match_expected_output() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<u8> = Vec::new();
    let mut err: Vec<u8> = Vec::new();
    let code = aspfcr::cli::run_corpus(&dir, &mut out, &mut err);
    let report = String::from_utf8(out).unwrap();
    print!("{report}");
    assert_eq!(
        code,
        aspfcr::cli::EXIT_OK,
        "corpus run failed:\n{report}{}",
        String::from_utf8_lossy(&err)
    );
}
