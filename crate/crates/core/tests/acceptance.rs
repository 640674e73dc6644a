//! Acceptance suite: runs every criterion at its stated scale and tolerance
//! and prints one pass/fail line per criterion.
//!
//! Pass criterion ids as arguments to run a subset, e.g.
//! `cargo test --test acceptance -- 2 9`.

use secgraph::validation::{run_criterion, CRITERIA};

const SEED: u64 = 20_240_601;

fn main() {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for &(id, _, _) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let r = run_criterion(id, SEED).expect("criterion id from the table");
        println!("{r}");
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: FAILED criteria {failed:?}");
        std::process::exit(1);
    }
}
