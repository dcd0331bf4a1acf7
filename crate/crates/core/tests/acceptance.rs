use std::process::ExitCode;

use specidx::acceptance::{run_all, AcceptanceConfig};

fn main() -> ExitCode {
    let results = run_all(&AcceptanceConfig::default());
    for r in &results {
        println!(
            "{} {:>2} {} ({:.1} s): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
