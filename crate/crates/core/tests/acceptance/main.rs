//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod decide;
mod determinism;
mod lemmas;
mod oracle;
mod sums;
mod trees;

use std::process::ExitCode;
use std::time::{Duration, Instant};

pub type Check = Result<String, String>;

/// Every nonempty subset sum of `s`, computed without the library.
pub fn subset_sums(s: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = (1u64..1 << s.len())
        .map(|mask| (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).sum())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Number, title, time limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "finite sums match subset enumeration", 10, sums::criterion),
        (2, "oracle forcing bound", 60, oracle::forcing),
        (3, "driver and oracle agree on 2-colorings of [1..10]", 300, oracle::agreement),
        (4, "extend_decide totality and soundness", 600, decide::criterion),
        (5, "extension lemma postconditions", 600, lemmas::criterion),
        (6, "semigroup sanity across bounds", 600, decide::semigroups),
        (7, "Kleene-Brouwer order equals DFS post-order", 60, trees::criterion),
        (8, "iterated soundness", 60, decide::iterated),
        (9, "determinism across runs and job counts", 900, determinism::criterion),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {:.1}s, limit {limit}s", took.as_secs_f64()))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {n} PASS [{name}] {detail} ({:.2}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL [{name}] {why} ({:.2}s)", took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
