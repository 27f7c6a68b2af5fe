//! Runs the twelve acceptance criteria and prints one line per criterion.

use std::process::ExitCode;
use std::thread;

use friedrichs_lab::verify::{run_criterion, CriterionOutcome, CRITERIA};

fn main() -> ExitCode {
    let outcomes: Vec<CriterionOutcome> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|(id, _)| s.spawn(move || run_criterion(*id).expect("known criterion")))
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });

    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2}: {} ({:.1}s)", o.id, o.title, o.elapsed_secs);
    }
    let failed: Vec<&CriterionOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
    for o in &failed {
        print!("{o}");
    }
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
