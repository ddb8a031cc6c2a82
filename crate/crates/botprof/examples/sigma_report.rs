//! Generate a report from accumulated per-label degree sums instead of a
//! raw trace, using the bot session fixture shipped with the crate.
//!
//! Run with: `cargo run --example sigma_report`

use botprof::network::SigmaFixture;
use botprof::report::{generate_profile, SessionStats, TemplateSet};

fn main() {
    let fixture = SigmaFixture::from_json(botprof::EXAMPLE_BOT_SIGMA_JSON).expect("fixture parses");
    let profile = generate_profile(
        &fixture.sigma_map(),
        &fixture.subject_id,
        &TemplateSet::default_templates(),
        SessionStats::default(),
    )
    .expect("fixture covers all six perceptions");

    for cp in &profile.cps {
        println!("{:<10} case {}: {}", cp.name, cp.case, cp.sentence);
    }
}
