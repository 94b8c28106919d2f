//! Prints one PASS/FAIL line per acceptance criterion and fails if any criterion fails.
//!
//! Set `ADJLAB_GRID=full` for the larger seeded grids.

use std::process::ExitCode;
use std::time::Instant;

use adjlab::acceptance::{run, Grid, TITLES};

fn main() -> ExitCode {
    let grid = match std::env::var("ADJLAB_GRID").as_deref() {
        Ok("full") => Grid::Full,
        _ => Grid::Small,
    };
    let start = Instant::now();
    let mut failed = Vec::new();
    println!("\nrunning {} acceptance criteria ({grid:?} grid)", TITLES.len());
    for id in 1..=TITLES.len() {
        let r = run(id, grid);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass ({secs:.1} s)\n", TITLES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?} ({secs:.1} s)\n", failed.len(), TITLES.len());
        ExitCode::FAILURE
    }
}
