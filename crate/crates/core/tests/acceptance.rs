//! Runs the full acceptance suite and prints one line per criterion.

use std::process::ExitCode;

use gridmagic_core::acceptance::{run, Hooks};

fn main() -> ExitCode {
    // libtest flags such as --nocapture or a name filter are accepted and ignored.
    let outcomes = run(&Hooks::default(), &[]);
    for o in &outcomes {
        println!("{}", o.line(true));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
