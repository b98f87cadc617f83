//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use thuemorse::verify::{self, Outcome};

fn main() -> ExitCode {
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    let mut total = 0;
    for id in 1..=verify::CRITERIA {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let check = verify::criterion(id).expect("criterion in range");
        total += 1;
        let mark = if check.outcome == Outcome::Pass {
            "pass"
        } else {
            "FAIL"
        };
        println!("criterion {id:>2} {mark}: {check}");
        if check.outcome != Outcome::Pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {total} criteria passed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
