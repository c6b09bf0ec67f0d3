//! Full acceptance run at the stated instance counts and tolerances. Runs
//! without the libtest harness so every criterion line reaches the output.

use nccoarse::verify::{run_criterion, VerifyConfig, CRITERIA};

fn main() {
    let cfg = VerifyConfig::new(42);
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{}  ({} ms)", r.line(), r.millis);
        if !r.passed {
            failed.push(id);
        }
    }
    println!("{}/{} criteria passed", CRITERIA.len() - failed.len(), CRITERIA.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
