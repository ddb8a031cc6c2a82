//! Grade a simulated bot session against the shipped human-expert
//! reference profile, on the 1-7 scale.
//!
//! Run with: `cargo run --example grade_session`

use botprof::compare::{final_grade, load_reference_profile, GradeConfig};
use botprof::metrics::compute_metrics;
use botprof::network::CpNetwork;
use botprof::report::{profile_from_session, TemplateSet};
use botprof::sim::{simulate, Policy, SimulationParams};

fn main() {
    let reference =
        load_reference_profile(botprof::HUMAN_EXPERT_PROFILE_JSON).expect("fixture is valid");

    let network = CpNetwork::default_network();
    let templates = TemplateSet::default_templates();

    for policy in [Policy::Random, Policy::Greedy, Policy::Evasive, Policy::Heuristic] {
        let trace = simulate(&SimulationParams::new(42, 300, policy)).expect("valid parameters");
        let metrics = compute_metrics(&trace).expect("simulator traces are valid");
        let session = network.run_session(&metrics).expect("session evaluates");
        let profile = profile_from_session(&session, &trace.subject_id, &templates)
            .expect("all six perceptions are present");

        let grade =
            final_grade(&reference, &profile, &GradeConfig::default()).expect("profiles align");
        println!(
            "{:<10} grade {:.1}  (FG = {:.4}, {} ticks)",
            policy.name(),
            grade.rounded,
            grade.fg,
            trace.ticks.len()
        );
    }
}
