//! Per-perception similarity between two behavior profiles, with the
//! per-label restricted-equivalence values behind each similarity.
//!
//! Run with: `cargo run --example compare_profiles`

use botprof::compare::{load_reference_profile, similarity_breakdown};
use botprof::network::SigmaFixture;
use botprof::report::{generate_profile, SessionStats, TemplateSet};

fn main() {
    let human =
        load_reference_profile(botprof::HUMAN_EXPERT_PROFILE_JSON).expect("fixture is valid");

    let fixture = SigmaFixture::from_json(botprof::EXAMPLE_BOT_SIGMA_JSON).expect("fixture parses");
    let bot = generate_profile(
        &fixture.sigma_map(),
        &fixture.subject_id,
        &TemplateSet::default_templates(),
        SessionStats::default(),
    )
    .expect("fixture covers all six perceptions");

    let breakdown = similarity_breakdown(&human, &bot).expect("profiles align");
    for cp in &breakdown.per_cp {
        println!("{:<10} similarity {:.4}", cp.name, cp.similarity);
        for r in &cp.per_label_ref {
            println!("    {:<16} {:.4}", r.label, r.ref_value);
        }
    }
}
