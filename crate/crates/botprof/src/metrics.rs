//! Per-tick metric vectors computed from raw trace observations.
//!
//! Distances are straight-line (Euclidean) in cell units. Protection counts
//! the obstacles inside or on the border of the axis-aligned rectangle
//! spanned by two entities.

use thiserror::Error;

use crate::trace::{validate_trace, Cell, Trace, Violation};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector {
    /// Distance from the player to each opponent, in opponent order.
    pub dist_player_opponent: Vec<f64>,
    /// Distance from the player to the reward nearest to the player.
    pub dist_player_nearest_reward: f64,
    /// Distance from the nearest opponent to that same reward.
    pub dist_nearest_opponent_nearest_reward: f64,
    /// Obstacle count between the player and each opponent.
    pub protection: Vec<u32>,
    pub energy: f64,
    pub time_ms: u64,
    pub reward_captured: bool,
    pub iterations: u64,
    pub memory_bytes: u64,
    pub nearest_opponent_index: usize,
    pub nearest_reward_index: usize,
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid trace: {0:?}")]
    InvalidTrace(Vec<Violation>),
    #[error("empty candidate list")]
    EmptyCandidates,
}

pub fn euclidean_distance(a: Cell, b: Cell) -> f64 {
    let dx = a.0 as f64 - b.0 as f64;
    let dy = a.1 as f64 - b.1 as f64;
    (dx * dx + dy * dy).sqrt()
}

/// Number of obstacles inside or on the border of the axis-aligned rectangle
/// with corners `agent` and `opponent`. Borders count: an obstacle on the
/// line of sight blocks it.
pub fn protection(agent: Cell, opponent: Cell, obstacles: &[Cell]) -> u32 {
    let (x0, x1) = (agent.0.min(opponent.0), agent.0.max(opponent.0));
    let (y0, y1) = (agent.1.min(opponent.1), agent.1.max(opponent.1));
    obstacles
        .iter()
        .filter(|&&(x, y)| x >= x0 && x <= x1 && y >= y0 && y <= y1)
        .count() as u32
}

/// Index and distance of the candidate closest to `entity`; ties go to the
/// lowest index.
pub fn nearest(entity: Cell, candidates: &[Cell]) -> Result<(usize, f64), MetricsError> {
    if candidates.is_empty() {
        return Err(MetricsError::EmptyCandidates);
    }
    let mut best = (0, euclidean_distance(entity, candidates[0]));
    for (i, &c) in candidates.iter().enumerate().skip(1) {
        let d = euclidean_distance(entity, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best)
}

/// Computes one [`MetricVector`] per tick. Fails when the trace does not
/// satisfy its invariants.
pub fn compute_metrics(trace: &Trace) -> Result<Vec<MetricVector>, MetricsError> {
    let violations = validate_trace(trace);
    if !violations.is_empty() {
        return Err(MetricsError::InvalidTrace(violations));
    }

    trace
        .ticks
        .iter()
        .map(|t| {
            let dist_player_opponent: Vec<f64> = t
                .opponent_pos
                .iter()
                .map(|&o| euclidean_distance(t.player_pos, o))
                .collect();
            let (nearest_opponent_index, _) = nearest(t.player_pos, &t.opponent_pos)?;
            let (nearest_reward_index, dist_player_nearest_reward) =
                nearest(t.player_pos, &t.reward_pos)?;
            let dist_nearest_opponent_nearest_reward = euclidean_distance(
                t.opponent_pos[nearest_opponent_index],
                t.reward_pos[nearest_reward_index],
            );
            let protection: Vec<u32> = t
                .opponent_pos
                .iter()
                .map(|&o| protection(t.player_pos, o, &trace.scenario.obstacles))
                .collect();
            Ok(MetricVector {
                dist_player_opponent,
                dist_player_nearest_reward,
                dist_nearest_opponent_nearest_reward,
                protection,
                energy: t.player_energy,
                time_ms: t.time_ms,
                reward_captured: t.reward_captured,
                iterations: t.iterations,
                memory_bytes: t.memory_bytes,
                nearest_opponent_index,
                nearest_reward_index,
            })
        })
        .collect()
}
