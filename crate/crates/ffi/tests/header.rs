use std::path::Path;
use std::process::Command;

fn compiles(compiler: &str, lang: &str) -> Option<bool> {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qrees.h");
    let status = Command::new(compiler)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
        .arg(&header)
        .status()
        .ok()?;
    Some(status.success())
}

#[test]
fn generated_header_is_valid_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qrees.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "qrees_problem_parse",
        "qrees_problem_free",
        "qrees_run",
        "qrees_resolve_json",
        "qrees_string_free",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++-header")] {
        if let Some(ok) = compiles(compiler, lang) {
            assert!(ok, "{compiler} rejects the header");
        }
    }
}
