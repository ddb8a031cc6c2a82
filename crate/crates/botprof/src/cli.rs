//! Command-line front end: `simulate`, `profile`, `compare`, `grade`,
//! `validate`.
//!
//! Exit codes are a stable contract: 0 success, 1 domain or runtime
//! failure, 2 usage error. Paths may be `-` for stdin/stdout so the
//! subcommands compose into a pipeline.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::compare::{final_grade, load_reference_profile, similarity_breakdown, GradeConfig};
use crate::metrics::compute_metrics;
use crate::network::{CpNetwork, SigmaFixture};
use crate::report::{profile_from_session, BehaviorProfile, SessionStats, TemplateSet};
use crate::sim::{simulate, Policy, SimulationParams};
use crate::trace::{parse_trace, validate_trace, write_trace, TRACE_HEADER};
use crate::{DEFAULT_TEMPLATES_JSON, HUMAN_EXPERT_PROFILE_JSON};

/// Environment variable that overrides the embedded network configuration.
pub const NETWORK_ENV_VAR: &str = "BOTPROF_NETWORK";

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Trace(#[from] crate::trace::TraceError),
    #[error(transparent)]
    Metrics(#[from] crate::metrics::MetricsError),
    #[error("network config: {0}")]
    Network(#[from] crate::network::NetworkError),
    #[error(transparent)]
    Report(#[from] crate::report::ReportError),
    #[error(transparent)]
    Compare(#[from] crate::compare::CompareError),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
    #[error("{0}")]
    Other(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "botprof",
    version,
    about = "Linguistic behavior profiles and grades for grid-world game bots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Markdown,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Random,
    Greedy,
    Evasive,
    Heuristic,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Random => Policy::Random,
            PolicyArg::Greedy => Policy::Greedy,
            PolicyArg::Evasive => Policy::Evasive,
            PolicyArg::Heuristic => Policy::Heuristic,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a seeded bot session and write the trace
    Simulate {
        /// Move policy of the simulated bot
        #[arg(long, value_enum, default_value = "heuristic")]
        policy: PolicyArg,
        /// Number of ticks to simulate (the session may end earlier)
        #[arg(long, default_value_t = 500)]
        ticks: u64,
        /// RNG seed; the same seed reproduces the trace byte for byte
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output trace file, or `-` for stdout
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn a trace (or a sigma fixture) into a behavior profile report
    #[command(group(ArgGroup::new("source").required(true).args(["input", "sigma_fixture"])))]
    Profile {
        /// Trace file, or `-` for stdin
        input: Option<PathBuf>,
        /// Skip the trace pipeline and report from accumulated per-label
        /// degree sums (JSON fixture)
        #[arg(long)]
        sigma_fixture: Option<PathBuf>,
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Output file, defaults to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-perception similarity between two profiles
    Compare {
        /// Subject profile JSON, or `-` for stdin
        input: PathBuf,
        /// Baseline profile JSON (default: embedded human-expert profile)
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grade a bot session against the reference profile (1-7 scale)
    #[command(group(
        ArgGroup::new("source").required(true).args(["input", "sigma_fixture", "batch"])
    ))]
    Grade {
        /// Trace or profile JSON, or `-` for stdin (the format is sniffed)
        input: Option<PathBuf>,
        /// Grade from accumulated per-label degree sums (JSON fixture)
        #[arg(long)]
        sigma_fixture: Option<PathBuf>,
        /// Grade every file in a directory, lexicographic by filename
        #[arg(long)]
        batch: Option<PathBuf>,
        /// Baseline profile JSON (default: embedded human-expert profile)
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Grade points awarded to every bot
        #[arg(long, default_value_t = 1.0)]
        g_min: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a trace file and/or a network config
    Validate {
        /// Trace file, or `-` for stdin
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Network configuration JSON
        #[arg(long)]
        network: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) if p == Path::new("-") => {
            print!("{content}");
            Ok(())
        }
        Some(p) => fs::write(p, content).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
    }
}

/// Precedence: `--network` flag, then `BOTPROF_NETWORK`, then the embedded
/// default.
fn load_network(flag: Option<&Path>) -> Result<CpNetwork, CliError> {
    let from_env = std::env::var(NETWORK_ENV_VAR).ok();
    let path = flag
        .map(|p| p.to_path_buf())
        .or_else(|| from_env.map(PathBuf::from));
    match path {
        Some(p) => Ok(CpNetwork::load(&read_input(&p)?)?),
        None => Ok(CpNetwork::default_network()),
    }
}

fn load_templates(flag: Option<&Path>) -> Result<TemplateSet, CliError> {
    match flag {
        Some(p) => Ok(TemplateSet::from_json(&read_input(p)?)?),
        None => Ok(TemplateSet::from_json(DEFAULT_TEMPLATES_JSON)?),
    }
}

fn load_reference(flag: Option<&Path>) -> Result<BehaviorProfile, CliError> {
    let json = match flag {
        Some(p) => read_input(p)?,
        None => HUMAN_EXPERT_PROFILE_JSON.to_string(),
    };
    Ok(load_reference_profile(&json)?)
}

/// Trace text -> behavior profile, through metrics and the perception
/// network.
fn profile_trace_text(
    text: &str,
    network: &CpNetwork,
    templates: &TemplateSet,
) -> Result<BehaviorProfile, CliError> {
    let trace = parse_trace(text)?;
    let metrics = compute_metrics(&trace)?;
    let session = network.run_session(&metrics)?;
    Ok(profile_from_session(&session, &trace.subject_id, templates)?)
}

fn profile_sigma_text(text: &str, templates: &TemplateSet) -> Result<BehaviorProfile, CliError> {
    let fixture = SigmaFixture::from_json(text)?;
    Ok(crate::report::generate_profile(
        &fixture.sigma_map(),
        &fixture.subject_id,
        templates,
        SessionStats::default(),
    )?)
}

fn render_profile(profile: &BehaviorProfile, format: Format) -> String {
    match format {
        Format::Text => profile.to_text(),
        Format::Markdown => profile.to_markdown(),
        Format::Json => profile.to_json(),
    }
}

fn grade_text(grade: &crate::compare::Grade) -> String {
    let mut out = format!("Final grade: {:.1} (FG = {:.4})\n", grade.rounded, grade.fg);
    for cp in &grade.per_cp {
        out.push_str(&format!("  {:<10} similarity {:.4}\n", cp.name, cp.similarity));
    }
    out
}

fn cmd_simulate(policy: PolicyArg, ticks: u64, seed: u64, out: &Path) -> Result<(), CliError> {
    let params = SimulationParams::new(seed, ticks, policy.into());
    let trace = simulate(&params)?;
    let captured = trace.ticks.iter().filter(|t| t.reward_captured).count();
    let final_energy = trace.ticks.last().map(|t| t.player_energy).unwrap_or(0.0);
    write_output(Some(out), &write_trace(&trace))?;
    // keep stdout clean when the trace itself goes to stdout
    eprintln!(
        "simulated {} ticks, {} rewards captured, final energy {}",
        trace.ticks.len(),
        captured,
        final_energy
    );
    Ok(())
}

fn cmd_profile(
    input: Option<&Path>,
    sigma_fixture: Option<&Path>,
    network: Option<&Path>,
    templates: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let templates = load_templates(templates)?;
    let profile = if let Some(fixture) = sigma_fixture {
        profile_sigma_text(&read_input(fixture)?, &templates)?
    } else {
        let network = load_network(network)?;
        let input = input.expect("clap enforces the source group");
        profile_trace_text(&read_input(input)?, &network, &templates)?
    };
    write_output(out, &render_profile(&profile, format))
}

fn cmd_compare(
    input: &Path,
    reference: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let subject: BehaviorProfile = serde_json::from_str(&read_input(input)?)
        .map_err(crate::compare::CompareError::from)?;
    let reference = load_reference(reference)?;
    let breakdown = similarity_breakdown(&reference, &subject)?;
    let rendered = match format {
        Format::Json => {
            serde_json::to_string_pretty(&breakdown).expect("breakdown serializes") + "\n"
        }
        _ => {
            let mut s = format!("{} vs {}\n", reference.subject_id, subject.subject_id);
            for cp in &breakdown.per_cp {
                s.push_str(&format!("  {:<10} similarity {:.4}\n", cp.name, cp.similarity));
            }
            s
        }
    };
    write_output(out, &rendered)
}

/// Reads one grade input, sniffing traces by their header line.
fn grade_one(
    text: &str,
    reference: &BehaviorProfile,
    network: &CpNetwork,
    templates: &TemplateSet,
    cfg: &GradeConfig,
) -> Result<crate::compare::Grade, CliError> {
    let profile = if text.lines().next() == Some(TRACE_HEADER) {
        profile_trace_text(text, network, templates)?
    } else {
        serde_json::from_str(text).map_err(crate::compare::CompareError::from)?
    };
    Ok(final_grade(reference, &profile, cfg)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_grade(
    input: Option<&Path>,
    sigma_fixture: Option<&Path>,
    batch: Option<&Path>,
    reference: Option<&Path>,
    network: Option<&Path>,
    templates: Option<&Path>,
    g_min: f64,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let reference = load_reference(reference)?;
    let net = load_network(network)?;
    let templates = load_templates(templates)?;
    let cfg = GradeConfig {
        g_min,
        ..GradeConfig::default()
    };

    if let Some(dir) = batch {
        let mut entries: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|source| CliError::Io {
                path: dir.display().to_string(),
                source,
            })?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        entries.sort_by_key(|p| p.file_name().map(|n| n.to_os_string()));
        if entries.is_empty() {
            return Err(CliError::Other(format!(
                "{}: no files to grade",
                dir.display()
            )));
        }
        let mut rows = Vec::new();
        for path in &entries {
            let grade = grade_one(&read_input(path)?, &reference, &net, &templates, &cfg)?;
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            rows.push((name, grade));
        }
        let rendered = match format {
            Format::Json => {
                let map: serde_json::Map<String, serde_json::Value> = rows
                    .iter()
                    .map(|(name, grade)| {
                        (
                            name.clone(),
                            serde_json::to_value(grade).expect("grade serializes"),
                        )
                    })
                    .collect();
                serde_json::to_string_pretty(&map).expect("map serializes") + "\n"
            }
            _ => {
                let mut s = String::new();
                for (name, grade) in &rows {
                    s.push_str(&format!("{:<30} {:.1}  (FG = {:.4})\n", name, grade.rounded, grade.fg));
                }
                s
            }
        };
        return write_output(out, &rendered);
    }

    let grade = if let Some(fixture) = sigma_fixture {
        let profile = profile_sigma_text(&read_input(fixture)?, &templates)?;
        final_grade(&reference, &profile, &cfg)?
    } else {
        let input = input.expect("clap enforces the source group");
        grade_one(&read_input(input)?, &reference, &net, &templates, &cfg)?
    };
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&grade).expect("grade serializes") + "\n",
        _ => grade_text(&grade),
    };
    write_output(out, &rendered)
}

fn cmd_validate(trace: Option<&Path>, network: Option<&Path>) -> Result<(), CliError> {
    if trace.is_none() && network.is_none() {
        // usage error, reported by the caller as exit 2
        return Err(CliError::Other(
            "validate: provide --trace and/or --network".into(),
        ));
    }
    if let Some(path) = trace {
        let parsed = parse_trace(&read_input(path)?)?;
        let violations = validate_trace(&parsed);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::Other(lines.join("\n")));
        }
    }
    if let Some(path) = network {
        CpNetwork::load(&read_input(path)?)?;
    }
    println!("OK");
    Ok(())
}

/// Entry point used by the `botprof` binary.
pub fn run() -> ExitCode {
    // clap itself exits with 2 on flag/usage errors
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate {
            policy,
            ticks,
            seed,
            out,
        } => cmd_simulate(*policy, *ticks, *seed, out),
        Command::Profile {
            input,
            sigma_fixture,
            network,
            templates,
            format,
            out,
        } => cmd_profile(
            input.as_deref(),
            sigma_fixture.as_deref(),
            network.as_deref(),
            templates.as_deref(),
            *format,
            out.as_deref(),
        ),
        Command::Compare {
            input,
            reference,
            format,
            out,
        } => cmd_compare(input, reference.as_deref(), *format, out.as_deref()),
        Command::Grade {
            input,
            sigma_fixture,
            batch,
            reference,
            network,
            templates,
            g_min,
            format,
            out,
        } => cmd_grade(
            input.as_deref(),
            sigma_fixture.as_deref(),
            batch.as_deref(),
            reference.as_deref(),
            network.as_deref(),
            templates.as_deref(),
            *g_min,
            *format,
            out.as_deref(),
        ),
        Command::Validate { trace, network } => cmd_validate(trace.as_deref(), network.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let usage = matches!(
                (&cli.command, &err),
                (Command::Validate { trace: None, network: None }, _)
            );
            if usage {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
