//! The `ydy-trace v1` file format and its in-memory representation.
//!
//! A trace file is UTF-8 text with LF line endings:
//!
//! ```text
//! # ydy-trace v1
//! width = 38
//! height = 38
//! opponents = 3
//! rewards = 4
//! max_time_ms = 150000
//! subject = bot-17
//! obstacles = (3,4);(10,11)
//!
//! tick,time_ms,px,py,energy,o1x,o1y,...,r1x,r1y,...,captured,iterations,memory_bytes,move
//! 0,0,1,13,17,3,16,4,12,2,12,...,false,42,924,J
//! ```
//!
//! Only raw observations are stored; derived quantities (distances,
//! protection) are always recomputed from positions by the `metrics` module.

use std::fmt;

use thiserror::Error;

/// A cell coordinate `(x, y)`.
pub type Cell = (u32, u32);

pub const TRACE_HEADER: &str = "# ydy-trace v1";

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub width: u32,
    pub height: u32,
    pub obstacles: Vec<Cell>,
    pub reward_count: usize,
    pub opponent_count: usize,
    pub max_time_ms: u64,
}

impl ScenarioConfig {
    pub fn contains(&self, cell: Cell) -> bool {
        cell.0 < self.width && cell.1 < self.height
    }
}

/// One raw observation row: the world state after a single move.
#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord {
    pub tick: u64,
    pub time_ms: u64,
    pub player_pos: Cell,
    pub player_energy: f64,
    pub opponent_pos: Vec<Cell>,
    pub reward_pos: Vec<Cell>,
    pub reward_captured: bool,
    pub iterations: u64,
    pub memory_bytes: u64,
    pub move_key: char,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub scenario: ScenarioConfig,
    pub subject_id: String,
    pub ticks: Vec<TickRecord>,
}

/// One broken invariant, naming the offending tick and field.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// `None` for scenario-level violations.
    pub tick: Option<u64>,
    pub field: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tick {
            Some(t) => write!(f, "tick {}: {}: {}", t, self.field, self.rule),
            None => write!(f, "scenario: {}: {}", self.field, self.rule),
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error("trace has no ticks")]
    NoTicks,
    #[error("invalid trace: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses a `ydy-trace v1` character stream.
///
/// Derived metrics are never read from the file; the format carries raw
/// observations only. The returned trace satisfies every invariant checked by
/// [`validate_trace`].
pub fn parse_trace(input: &str) -> Result<Trace, TraceError> {
    let mut lines = input.lines().enumerate();

    let (_, first) = lines.next().ok_or(TraceError::MissingHeader(TRACE_HEADER))?;
    if first.trim() != TRACE_HEADER {
        return Err(TraceError::MissingHeader(TRACE_HEADER));
    }

    let mut width = None;
    let mut height = None;
    let mut opponents = None;
    let mut rewards = None;
    let mut max_time_ms = 150_000u64;
    let mut subject = String::new();
    let mut obstacles = Vec::new();

    // Header block runs until the first blank line.
    let mut csv_header_line = None;
    for (idx, line) in &mut lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            break;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| TraceError::Syntax {
            line: lineno,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_u64 = |v: &str| {
            v.parse::<u64>().map_err(|_| TraceError::Syntax {
                line: lineno,
                message: format!("`{key}` is not a non-negative integer: `{v}`"),
            })
        };
        match key {
            "width" => width = Some(parse_u64(value)? as u32),
            "height" => height = Some(parse_u64(value)? as u32),
            "opponents" => opponents = Some(parse_u64(value)? as usize),
            "rewards" => rewards = Some(parse_u64(value)? as usize),
            "max_time_ms" => max_time_ms = parse_u64(value)?,
            "subject" => subject = value.to_string(),
            "obstacles" => obstacles = parse_obstacles(value, lineno)?,
            other => {
                return Err(TraceError::Syntax {
                    line: lineno,
                    message: format!("unknown header key `{other}`"),
                })
            }
        }
        csv_header_line = Some(lineno);
    }

    let missing = |what: &str, present: bool| {
        if present {
            Ok(())
        } else {
            Err(TraceError::Syntax {
                line: csv_header_line.unwrap_or(1),
                message: format!("header is missing `{what}`"),
            })
        }
    };
    missing("width", width.is_some())?;
    missing("height", height.is_some())?;
    missing("opponents", opponents.is_some())?;
    missing("rewards", rewards.is_some())?;

    let scenario = ScenarioConfig {
        width: width.unwrap(),
        height: height.unwrap(),
        obstacles,
        reward_count: rewards.unwrap(),
        opponent_count: opponents.unwrap(),
        max_time_ms,
    };

    // CSV section: header row, then one row per tick.
    let expected_columns = csv_columns(&scenario);
    let (idx, header_row) = lines
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(TraceError::NoTicks)?;
    if header_row.trim() != expected_columns {
        return Err(TraceError::Syntax {
            line: idx + 1,
            message: format!(
                "CSV header does not match scenario: expected `{expected_columns}`"
            ),
        });
    }

    let mut ticks = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        ticks.push(parse_tick_row(line, lineno, &scenario)?);
    }
    if ticks.is_empty() {
        return Err(TraceError::NoTicks);
    }

    let trace = Trace {
        scenario,
        subject_id: subject,
        ticks,
    };
    let violations = validate_trace(&trace);
    if violations.is_empty() {
        Ok(trace)
    } else {
        Err(TraceError::Invalid(violations))
    }
}

fn parse_obstacles(value: &str, lineno: usize) -> Result<Vec<Cell>, TraceError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(';')
        .map(|pair| {
            let inner = pair
                .trim()
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| TraceError::Syntax {
                    line: lineno,
                    message: format!("obstacle `{pair}` is not of the form (x,y)"),
                })?;
            let (x, y) = inner.split_once(',').ok_or_else(|| TraceError::Syntax {
                line: lineno,
                message: format!("obstacle `{pair}` is not of the form (x,y)"),
            })?;
            let parse = |v: &str| {
                v.trim().parse::<u32>().map_err(|_| TraceError::Syntax {
                    line: lineno,
                    message: format!("obstacle coordinate `{v}` is not an integer"),
                })
            };
            Ok((parse(x)?, parse(y)?))
        })
        .collect()
}

fn csv_columns(scenario: &ScenarioConfig) -> String {
    let mut cols = vec![
        "tick".to_string(),
        "time_ms".to_string(),
        "px".to_string(),
        "py".to_string(),
        "energy".to_string(),
    ];
    for i in 1..=scenario.opponent_count {
        cols.push(format!("o{i}x"));
        cols.push(format!("o{i}y"));
    }
    for i in 1..=scenario.reward_count {
        cols.push(format!("r{i}x"));
        cols.push(format!("r{i}y"));
    }
    cols.push("captured".to_string());
    cols.push("iterations".to_string());
    cols.push("memory_bytes".to_string());
    cols.push("move".to_string());
    cols.join(",")
}

fn parse_tick_row(
    line: &str,
    lineno: usize,
    scenario: &ScenarioConfig,
) -> Result<TickRecord, TraceError> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    let expected = 5 + 2 * scenario.opponent_count + 2 * scenario.reward_count + 4;
    if fields.len() != expected {
        return Err(TraceError::Syntax {
            line: lineno,
            message: format!("expected {expected} fields, got {}", fields.len()),
        });
    }
    let syntax = |column: usize, message: String| TraceError::Syntax {
        line: lineno,
        message: format!("column {}: {message}", column + 1),
    };
    let u64_at = |i: usize| {
        fields[i]
            .parse::<u64>()
            .map_err(|_| syntax(i, format!("`{}` is not a non-negative integer", fields[i])))
    };
    let u32_at = |i: usize| {
        fields[i]
            .parse::<u32>()
            .map_err(|_| syntax(i, format!("`{}` is not a cell coordinate", fields[i])))
    };

    let tick = u64_at(0)?;
    let time_ms = u64_at(1)?;
    let player_pos = (u32_at(2)?, u32_at(3)?);
    let player_energy: f64 = fields[4]
        .parse()
        .map_err(|_| syntax(4, format!("`{}` is not a number", fields[4])))?;

    let mut at = 5;
    let mut opponent_pos = Vec::with_capacity(scenario.opponent_count);
    for _ in 0..scenario.opponent_count {
        opponent_pos.push((u32_at(at)?, u32_at(at + 1)?));
        at += 2;
    }
    let mut reward_pos = Vec::with_capacity(scenario.reward_count);
    for _ in 0..scenario.reward_count {
        reward_pos.push((u32_at(at)?, u32_at(at + 1)?));
        at += 2;
    }

    let reward_captured = match fields[at] {
        "true" => true,
        "false" => false,
        other => return Err(syntax(at, format!("`{other}` is not true/false"))),
    };
    let iterations = u64_at(at + 1)?;
    let memory_bytes = u64_at(at + 2)?;
    let move_field = fields[at + 3];
    let mut chars = move_field.chars();
    let move_key = match (chars.next(), chars.next()) {
        (Some(c), None) => c,
        _ => return Err(syntax(at + 3, format!("`{move_field}` is not one character"))),
    };

    Ok(TickRecord {
        tick,
        time_ms,
        player_pos,
        player_energy,
        opponent_pos,
        reward_pos,
        reward_captured,
        iterations,
        memory_bytes,
        move_key,
    })
}

/// Serializes a valid trace. `parse_trace(write_trace(t))` recovers `t`
/// exactly, and serialization is deterministic.
pub fn write_trace(trace: &Trace) -> String {
    let s = &trace.scenario;
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    out.push_str(&format!("width = {}\n", s.width));
    out.push_str(&format!("height = {}\n", s.height));
    out.push_str(&format!("opponents = {}\n", s.opponent_count));
    out.push_str(&format!("rewards = {}\n", s.reward_count));
    out.push_str(&format!("max_time_ms = {}\n", s.max_time_ms));
    out.push_str(&format!("subject = {}\n", trace.subject_id));
    let obstacles = s
        .obstacles
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect::<Vec<_>>()
        .join(";");
    out.push_str(&format!("obstacles = {obstacles}\n"));
    out.push('\n');
    out.push_str(&csv_columns(s));
    out.push('\n');
    for t in &trace.ticks {
        let mut fields: Vec<String> = vec![
            t.tick.to_string(),
            t.time_ms.to_string(),
            t.player_pos.0.to_string(),
            t.player_pos.1.to_string(),
            t.player_energy.to_string(),
        ];
        for (x, y) in &t.opponent_pos {
            fields.push(x.to_string());
            fields.push(y.to_string());
        }
        for (x, y) in &t.reward_pos {
            fields.push(x.to_string());
            fields.push(y.to_string());
        }
        fields.push(t.reward_captured.to_string());
        fields.push(t.iterations.to_string());
        fields.push(t.memory_bytes.to_string());
        fields.push(t.move_key.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Checks every structural invariant; the result is empty iff the trace is
/// valid. Each violation names the tick, the field and the broken rule.
pub fn validate_trace(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let s = &trace.scenario;
    let scenario_violation = |field: &str, rule: String| Violation {
        tick: None,
        field: field.to_string(),
        rule,
    };

    if s.width == 0 {
        out.push(scenario_violation("width", "must be positive".into()));
    }
    if s.height == 0 {
        out.push(scenario_violation("height", "must be positive".into()));
    }
    if s.reward_count == 0 {
        out.push(scenario_violation("rewards", "reward_count must be >= 1".into()));
    }
    if s.opponent_count == 0 {
        out.push(scenario_violation(
            "opponents",
            "opponent_count must be >= 1".into(),
        ));
    }
    for (i, &cell) in s.obstacles.iter().enumerate() {
        if !s.contains(cell) {
            out.push(scenario_violation(
                "obstacles",
                format!("obstacle {i} at {cell:?} is outside the {}x{} grid", s.width, s.height),
            ));
        }
        if s.obstacles[..i].contains(&cell) {
            out.push(scenario_violation(
                "obstacles",
                format!("obstacle {i} at {cell:?} duplicates an earlier obstacle"),
            ));
        }
    }

    if trace.ticks.is_empty() {
        out.push(scenario_violation("ticks", "trace has no ticks".into()));
    }

    let mut prev_time = None;
    for (i, t) in trace.ticks.iter().enumerate() {
        let violation = |field: &str, rule: String| Violation {
            tick: Some(t.tick),
            field: field.to_string(),
            rule,
        };
        if !s.contains(t.player_pos) {
            out.push(violation(
                "player_pos",
                format!("{:?} is outside the {}x{} grid", t.player_pos, s.width, s.height),
            ));
        }
        if t.opponent_pos.len() != s.opponent_count {
            out.push(violation(
                "opponent_pos",
                format!("{} opponents listed, scenario declares {}", t.opponent_pos.len(), s.opponent_count),
            ));
        }
        if t.reward_pos.len() != s.reward_count {
            out.push(violation(
                "reward_pos",
                format!("{} rewards listed, scenario declares {}", t.reward_pos.len(), s.reward_count),
            ));
        }
        for (j, &cell) in t.opponent_pos.iter().enumerate() {
            if !s.contains(cell) {
                out.push(violation(
                    "opponent_pos",
                    format!("opponent {j} at {cell:?} is outside the grid"),
                ));
            }
        }
        for (j, &cell) in t.reward_pos.iter().enumerate() {
            if !s.contains(cell) {
                out.push(violation(
                    "reward_pos",
                    format!("reward {j} at {cell:?} is outside the grid"),
                ));
            }
        }
        if !(t.player_energy >= 0.0) {
            out.push(violation(
                "player_energy",
                format!("{} is negative or not a number", t.player_energy),
            ));
        }
        if let Some(prev) = prev_time {
            if t.time_ms <= prev {
                out.push(violation(
                    "time_ms",
                    format!("time_ms not increasing at tick {} ({} after {})", i, t.time_ms, prev),
                ));
            }
        }
        prev_time = Some(t.time_ms);
    }
    out
}
