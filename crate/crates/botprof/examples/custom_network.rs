//! Load a small custom perception network from JSON and evaluate it.
//!
//! The network below has one base perception (Mood) that reads the energy
//! metric through one linguistic variable with full rule coverage.
//!
//! Run with: `cargo run --example custom_network`

use botprof::metrics::compute_metrics;
use botprof::network::CpNetwork;
use botprof::sim::{simulate, Policy, SimulationParams};

const CONFIG: &str = r#"{
  "variables": [
    {
      "name": "EnergyLevel",
      "domain": [0, 100],
      "terms": [
        { "label": "Starving", "points": [0, 0, 5, 10] },
        { "label": "Fed", "points": [5, 10, 20, 30] },
        { "label": "Thriving", "points": [20, 30, 100, 100] }
      ]
    }
  ],
  "cps": [
    {
      "name": "Mood",
      "labels": ["Desperate", "Content", "Confident"],
      "antecedents": [{ "metric": "energy", "variable": "EnergyLevel" }],
      "rules": [
        { "when": ["Starving"], "then": "Desperate" },
        { "when": ["Fed"], "then": "Content" },
        { "when": ["Thriving"], "then": "Confident" }
      ]
    }
  ]
}"#;

fn main() {
    let network = CpNetwork::load(CONFIG).expect("config is valid");

    let trace = simulate(&SimulationParams::new(3, 120, Policy::Greedy)).expect("valid parameters");
    let metrics = compute_metrics(&trace).expect("simulator traces are valid");
    let session = network.run_session(&metrics).expect("session evaluates");

    let mood = &session.sigmas["Mood"];
    let p = mood.percentages().expect("at least one firing");
    println!("Mood over {} ticks:", session.ticks);
    for (label, pct) in p.iter() {
        println!("  {:<10} {:5.1}%", label, pct * 100.0);
    }
}
