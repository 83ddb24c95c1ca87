//! Acceptance suite: runs the built-in verification criteria and prints one
//! pass/fail line per criterion.

use linfty::verify;

#[test]
fn acceptance() {
    let results = verify::run_all(0);
    let mut ok = true;
    for c in &results {
        println!("{}", c.line());
        ok &= c.passed;
    }
    assert!(ok, "at least one acceptance criterion failed");
}
