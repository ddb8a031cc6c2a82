//! Parse, validate, and re-serialize a trace file.
//!
//! Run with: `cargo run --example trace_roundtrip`

use botprof::sim::{simulate, Policy, SimulationParams};
use botprof::trace::{parse_trace, validate_trace, write_trace};

fn main() {
    let trace = simulate(&SimulationParams::new(5, 40, Policy::Random)).expect("valid parameters");
    let text = write_trace(&trace);
    println!("serialized {} bytes", text.len());

    let parsed = parse_trace(&text).expect("our own output parses");
    assert_eq!(parsed, trace);
    assert_eq!(write_trace(&parsed), text, "round trip is byte-stable");
    println!("round trip: byte-identical");

    // Break an invariant on purpose: teleport an opponent off the grid.
    let mut broken = trace;
    broken.ticks[0].opponent_pos[0] = (999, 999);
    for violation in validate_trace(&broken) {
        println!("violation: {violation}");
    }
}
