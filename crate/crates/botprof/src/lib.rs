//! Linguistic behavior profiles for grid-world game bots.
//!
//! The pipeline turns an execution trace of a bot session into a short
//! natural-language behavior report, and grades the bot by how similar its
//! profile is to a reference human-expert profile:
//!
//! 1. [`trace`] — the `ydy-trace v1` file format: parsing, writing, validation.
//! 2. [`metrics`] — per-tick metric vectors (distances, protection, energy, ...).
//! 3. [`fuzzy`] — trapezoidal linguistic variables and the restricted
//!    equivalence function `g(x,y) = 1 - |x - y|`.
//! 4. [`network`] — the declarative computational-perception network: six
//!    perceptions evaluated per tick through fuzzy rule tables and accumulated
//!    into per-label degree sums over the session.
//! 5. [`report`] — template-based sentence realization (one sentence per
//!    perception, four template cases, few/several/many quantifiers).
//! 6. [`compare`] — profile similarity and the 1–7 final grade.
//! 7. [`sim`] — a deterministic seeded simulator that produces traces.
//!
//! See the crate `examples/` directory for a runnable example per capability.

pub mod cli;
pub mod compare;
pub mod fuzzy;
pub mod metrics;
pub mod network;
pub mod report;
pub mod sim;
pub mod trace;

/// Default network configuration (linguistic variables, perceptions, rules).
pub const DEFAULT_NETWORK_JSON: &str = include_str!("../assets/default-network.json");

/// Default sentence templates, keyed by perception name and case number.
pub const DEFAULT_TEMPLATES_JSON: &str = include_str!("../assets/default-templates.json");

/// Reference profile of a human expert play session.
pub const HUMAN_EXPERT_PROFILE_JSON: &str = include_str!("../assets/human-expert.json");

/// Accumulated per-label degree sums of a published bot session, usable with
/// `--sigma-fixture` and in golden tests.
pub const EXAMPLE_BOT_SIGMA_JSON: &str = include_str!("../assets/example-bot-sigma.json");
