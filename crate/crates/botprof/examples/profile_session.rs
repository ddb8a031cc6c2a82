//! The full pipeline: simulate a session, compute per-tick metrics, run the
//! perception network, and print the linguistic behavior report.
//!
//! Run with: `cargo run --example profile_session`

use botprof::metrics::compute_metrics;
use botprof::network::CpNetwork;
use botprof::report::{profile_from_session, TemplateSet};
use botprof::sim::{simulate, Policy, SimulationParams};

fn main() {
    let params = SimulationParams::new(7, 300, Policy::Evasive);
    let trace = simulate(&params).expect("valid parameters");

    let metrics = compute_metrics(&trace).expect("simulator traces are valid");
    let network = CpNetwork::default_network();
    let session = network.run_session(&metrics).expect("session evaluates");
    let profile = profile_from_session(&session, &trace.subject_id, &TemplateSet::default_templates())
        .expect("all six perceptions are present");

    print!("{}", profile.to_text());
}
