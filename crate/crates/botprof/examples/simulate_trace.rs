//! Run a seeded bot session and print the resulting trace.
//!
//! Run with: `cargo run --example simulate_trace`

use botprof::sim::{simulate, Policy, SimulationParams};
use botprof::trace::write_trace;

fn main() {
    let params = SimulationParams::new(42, 60, Policy::Heuristic);
    let trace = simulate(&params).expect("valid parameters");

    let captured = trace.ticks.iter().filter(|t| t.reward_captured).count();
    eprintln!(
        "subject {} survived {} ticks and captured {} rewards",
        trace.subject_id,
        trace.ticks.len(),
        captured
    );
    // the trace itself is plain text; same seed, same bytes
    print!("{}", write_trace(&trace));
}
