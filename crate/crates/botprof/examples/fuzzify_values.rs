//! Fuzzify raw metric values with the default linguistic variables.
//!
//! Run with: `cargo run --example fuzzify_values`

use botprof::network::CpNetwork;

fn main() {
    let network = CpNetwork::default_network();

    let samples = [
        ("Distance", 3.60),
        ("Distance", 13.0),
        ("Distance", 15.26),
        ("Protection", 2.0),
        ("Energy", 17.0),
        ("Time", 15995.0),
        ("Iterations", 42.0),
        ("Memory", 924.0),
    ];

    for (variable, value) in samples {
        let var = &network.variables()[variable];
        let f = var.fuzzify(value);
        println!("{variable:>10}({value:>8}) -> {} ({:.4})", f.label, f.degree);
    }
}
