//! Deterministic seeded grid-world simulator.
//!
//! One player bot, greedy opponents that chase it and steal energy on
//! contact, respawning rewards that restore energy, obstacles, and periodic
//! energy decay. The same seed always produces the same trace, byte for
//! byte, which makes the simulator usable as a test-data generator.

use std::collections::HashSet;
use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::metrics::{euclidean_distance, nearest, protection};
use crate::trace::{Cell, ScenarioConfig, TickRecord, Trace};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("ticks must be > 0")]
    ZeroTicks,
    #[error("scenario too small to place {0} entities on free cells")]
    NotEnoughFreeCells(usize),
    #[error("unknown policy `{0}` (expected random, greedy, evasive or heuristic)")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Random,
    Greedy,
    Evasive,
    Heuristic,
}

impl FromStr for Policy {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Policy::Random),
            "greedy" => Ok(Policy::Greedy),
            "evasive" => Ok(Policy::Evasive),
            "heuristic" => Ok(Policy::Heuristic),
            other => Err(SimError::UnknownPolicy(other.to_string())),
        }
    }
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Random => "random",
            Policy::Greedy => "greedy",
            Policy::Evasive => "evasive",
            Policy::Heuristic => "heuristic",
        }
    }
}

/// Moves in fixed tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
    Stay,
}

pub const MOVE_ORDER: [Move; 5] = [Move::Up, Move::Down, Move::Left, Move::Right, Move::Stay];

impl Move {
    pub fn key(self) -> char {
        match self {
            Move::Up => 'U',
            Move::Down => 'D',
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }

    fn apply(self, cell: Cell, width: u32, height: u32) -> Option<Cell> {
        let (x, y) = cell;
        let target = match self {
            Move::Up => (x, y.checked_sub(1)?),
            Move::Down => (x, y + 1),
            Move::Left => (x.checked_sub(1)?, y),
            Move::Right => (x + 1, y),
            Move::Stay => (x, y),
        };
        (target.0 < width && target.1 < height).then_some(target)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationParams {
    pub scenario: ScenarioConfig,
    pub seed: u64,
    pub ticks: u64,
    pub tick_ms: u64,
    pub energy_start: f64,
    pub decay_every_ticks: u64,
    pub decay_amount: f64,
    pub reward_energy: f64,
    pub steal_amount: f64,
    pub policy: Policy,
    pub subject_id: String,
}

impl SimulationParams {
    /// 38x38 scenario with 20 seeded obstacles, three opponents, four
    /// rewards, and the default energy rules.
    pub fn new(seed: u64, ticks: u64, policy: Policy) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut obstacles = HashSet::new();
        while obstacles.len() < 20 {
            obstacles.insert((rng.gen_range(0..38u32), rng.gen_range(0..38u32)));
        }
        let mut obstacles: Vec<Cell> = obstacles.into_iter().collect();
        obstacles.sort();
        Self {
            scenario: ScenarioConfig {
                width: 38,
                height: 38,
                obstacles,
                reward_count: 4,
                opponent_count: 3,
                max_time_ms: 150_000,
            },
            seed,
            ticks,
            tick_ms: 1000,
            energy_start: 20.0,
            decay_every_ticks: 5,
            decay_amount: 1.0,
            reward_energy: 5.0,
            steal_amount: 2.0,
            policy,
            subject_id: format!("{}-{}", policy.name(), seed),
        }
    }
}

/// World state visible to a policy when choosing a move.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub width: u32,
    pub height: u32,
    pub obstacles: Vec<Cell>,
    pub obstacle_set: HashSet<Cell>,
    pub player: Cell,
    pub energy: f64,
    pub opponents: Vec<Cell>,
    pub rewards: Vec<Cell>,
}

impl WorldState {
    fn legal_moves(&self, from: Cell) -> Vec<Move> {
        MOVE_ORDER
            .iter()
            .copied()
            .filter(|m| {
                m.apply(from, self.width, self.height)
                    .map(|c| !self.obstacle_set.contains(&c))
                    .unwrap_or(false)
            })
            .collect()
    }
}

/// Iteration and allocation cost attributed to one move decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyStats {
    pub iterations: u64,
    pub memory_bytes: u64,
}

const BYTES_PER_NODE: u64 = 24;
const EVASIVE_CLOSE_THRESHOLD: f64 = 7.0;
const HEURISTIC_DANGER_DISTANCE: f64 = 3.0;

/// Chooses the player's next move. Every policy only ever returns a legal
/// move (inside the grid, not into an obstacle).
pub fn policy_step(
    policy: Policy,
    world: &WorldState,
    rng: &mut ChaCha8Rng,
) -> (Move, PolicyStats) {
    let legal = world.legal_moves(world.player);
    debug_assert!(!legal.is_empty(), "Stay is always legal");
    match policy {
        Policy::Random => {
            let mv = legal[rng.gen_range(0..legal.len())];
            let iterations = legal.len() as u64;
            (
                mv,
                PolicyStats {
                    iterations,
                    memory_bytes: iterations * BYTES_PER_NODE,
                },
            )
        }
        Policy::Greedy => greedy_step(world, &legal),
        Policy::Evasive => evasive_step(world, &legal),
        Policy::Heuristic => {
            let (opp_idx, opp_dist) = nearest(world.player, &world.opponents)
                .expect("simulator always has opponents");
            let exposed = opp_dist <= HEURISTIC_DANGER_DISTANCE
                && protection(world.player, world.opponents[opp_idx], &world.obstacles) == 0;
            let (mv, mut stats) = if exposed {
                evasive_step(world, &legal)
            } else {
                greedy_step(world, &legal)
            };
            stats.iterations += world.opponents.len() as u64;
            stats.memory_bytes = stats.iterations * BYTES_PER_NODE;
            (mv, stats)
        }
    }
}

/// Minimize distance to the reward nearest to the player; ties keep the
/// earlier move in [`MOVE_ORDER`].
fn greedy_step(world: &WorldState, legal: &[Move]) -> (Move, PolicyStats) {
    let (reward_idx, _) =
        nearest(world.player, &world.rewards).expect("simulator always has rewards");
    let target = world.rewards[reward_idx];
    let mut iterations = 0u64;
    let mut best: Option<(Move, f64)> = None;
    for &mv in legal {
        let cell = mv
            .apply(world.player, world.width, world.height)
            .expect("legal move stays on the grid");
        // one distance evaluation per reward models the search effort
        for &r in &world.rewards {
            let _ = euclidean_distance(cell, r);
            iterations += 1;
        }
        let d = euclidean_distance(cell, target);
        if best.map(|(_, bd)| d < bd).unwrap_or(true) {
            best = Some((mv, d));
        }
    }
    let (mv, _) = best.expect("at least one legal move");
    (
        mv,
        PolicyStats {
            iterations,
            memory_bytes: iterations * BYTES_PER_NODE,
        },
    )
}

/// Maximize distance to the nearest opponent while it is close, otherwise
/// fall back to greedy.
fn evasive_step(world: &WorldState, legal: &[Move]) -> (Move, PolicyStats) {
    let (opp_idx, opp_dist) =
        nearest(world.player, &world.opponents).expect("simulator always has opponents");
    if opp_dist >= EVASIVE_CLOSE_THRESHOLD {
        return greedy_step(world, legal);
    }
    let threat = world.opponents[opp_idx];
    let mut iterations = 0u64;
    let mut best: Option<(Move, f64)> = None;
    for &mv in legal {
        let cell = mv
            .apply(world.player, world.width, world.height)
            .expect("legal move stays on the grid");
        for &o in &world.opponents {
            let _ = euclidean_distance(cell, o);
            iterations += 1;
        }
        let d = euclidean_distance(cell, threat);
        if best.map(|(_, bd)| d > bd).unwrap_or(true) {
            best = Some((mv, d));
        }
    }
    let (mv, _) = best.expect("at least one legal move");
    (
        mv,
        PolicyStats {
            iterations,
            memory_bytes: iterations * BYTES_PER_NODE,
        },
    )
}

fn random_free_cell(world: &WorldState, rng: &mut ChaCha8Rng) -> Cell {
    loop {
        let cell = (
            rng.gen_range(0..world.width),
            rng.gen_range(0..world.height),
        );
        let occupied = world.obstacle_set.contains(&cell)
            || world.player == cell
            || world.opponents.contains(&cell)
            || world.rewards.contains(&cell);
        if !occupied {
            return cell;
        }
    }
}

/// Runs a full session. The trace has exactly `ticks` records, or fewer if
/// the player's energy reaches zero, and always passes validation.
pub fn simulate(params: &SimulationParams) -> Result<Trace, SimError> {
    if params.ticks == 0 {
        return Err(SimError::ZeroTicks);
    }
    let s = &params.scenario;
    let entities = 1 + s.opponent_count + s.reward_count;
    let free = (s.width as usize * s.height as usize).saturating_sub(s.obstacles.len());
    if free < entities {
        return Err(SimError::NotEnoughFreeCells(entities));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut world = WorldState {
        width: s.width,
        height: s.height,
        obstacles: s.obstacles.clone(),
        obstacle_set: s.obstacles.iter().copied().collect(),
        player: (0, 0),
        energy: params.energy_start,
        opponents: Vec::new(),
        rewards: Vec::new(),
    };
    // Seeded spawn: player first, then opponents, then rewards, all on
    // distinct free cells.
    world.player = random_free_cell(&world, &mut rng);
    for _ in 0..s.opponent_count {
        let cell = random_free_cell(&world, &mut rng);
        world.opponents.push(cell);
    }
    for _ in 0..s.reward_count {
        let cell = random_free_cell(&world, &mut rng);
        world.rewards.push(cell);
    }

    let mut ticks = Vec::new();
    for tick in 0..params.ticks {
        let (mv, stats) = policy_step(params.policy, &world, &mut rng);
        world.player = mv
            .apply(world.player, world.width, world.height)
            .expect("policy returns a legal move");

        let mut captured = false;
        if let Some(idx) = world.rewards.iter().position(|&r| r == world.player) {
            captured = true;
            world.energy += params.reward_energy;
            let respawn = random_free_cell(&world, &mut rng);
            world.rewards[idx] = respawn;
        }

        // Opponents chase the player greedily.
        for i in 0..world.opponents.len() {
            let from = world.opponents[i];
            let legal = world.legal_moves(from);
            let mut best: Option<(Cell, f64)> = None;
            for &omv in &legal {
                let cell = omv.apply(from, world.width, world.height).unwrap();
                let d = euclidean_distance(cell, world.player);
                if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                    best = Some((cell, d));
                }
            }
            if let Some((cell, _)) = best {
                world.opponents[i] = cell;
            }
        }

        for &o in &world.opponents {
            if o == world.player {
                world.energy -= params.steal_amount;
            }
        }
        if (tick + 1) % params.decay_every_ticks == 0 {
            world.energy -= params.decay_amount;
        }
        let dead = world.energy <= 0.0;
        if dead {
            world.energy = 0.0;
        }

        ticks.push(TickRecord {
            tick,
            time_ms: tick * params.tick_ms,
            player_pos: world.player,
            player_energy: world.energy,
            opponent_pos: world.opponents.clone(),
            reward_pos: world.rewards.clone(),
            reward_captured: captured,
            iterations: stats.iterations,
            memory_bytes: stats.memory_bytes,
            move_key: mv.key(),
        });
        if dead {
            break;
        }
    }

    Ok(Trace {
        scenario: s.clone(),
        subject_id: params.subject_id.clone(),
        ticks,
    })
}
