//! Runs the full verification harness and prints one line per criterion.

use nccoarse::verify::{run_all, VerifyConfig};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let summary = run_all(&VerifyConfig::new(seed));
    for c in &summary.criteria {
        println!("{}", c.line());
    }
    let passed = summary.criteria.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria passed", summary.criteria.len());
}
