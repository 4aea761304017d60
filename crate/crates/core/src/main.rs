use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hyperfence::compose::{self_compose, DEFAULT_NODE_BUDGET};
use hyperfence::enforce::{
    build_parallel_game, format_inputs, format_outputs, parse_sessions, parse_steps, run_sequential, run_stream,
    EnforceConfig, EnforceError, EnforcerSession, NEW_SESSION,
};
use hyperfence::games::{parse_pgsolver, GameError, Player};
use hyperfence::harness::{bench_od, format_table, gen_stream, GenConfig, GenMode, RunStats};
use hyperfence::logic::{parse_spec_file, HyperSpec};

#[derive(Parser)]
#[command(name = "hyperfence", version, about = "Runtime enforcement of universally quantified HyperLTL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Random,
    Symmetric,
}

#[derive(Subcommand)]
enum Command {
    /// Print the self-composition of a spec over n traces.
    Compose {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Solve a PGSolver game, or build the parallel game of a spec and print it.
    Solve {
        /// Game in PGSolver format.
        game: Option<PathBuf>,
        #[arg(long, conflicts_with = "game", requires = "n")]
        spec: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Generate a trace stream with random bit flips.
    Gen {
        #[arg(long, default_value_t = 1)]
        inputs: usize,
        #[arg(long, default_value_t = 1)]
        outputs: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        flip: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enforce a spec on n traces arriving in lock-step.
    EnforceParallel {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Enforce a spec on sessions arriving one after another.
    EnforceSequential {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Rebuild every session's game from scratch.
        #[arg(long)]
        no_fast_path: bool,
    },
    /// Enforce observational determinism on generated streams and tabulate timings.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.005, 0.01])]
        flip: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        len: usize,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit 1: unrealizable. Exit 2: everything else.
enum Failure {
    Unrealizable(String),
    Error(String),
}

impl From<EnforceError> for Failure {
    fn from(e: EnforceError) -> Self {
        match e {
            EnforceError::Unrealizable
            | EnforceError::NextSessionUnrealizable { .. }
            | EnforceError::Game(GameError::Unrealizable) => Failure::Unrealizable(e.to_string()),
            e => Failure::Error(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_spec(path: &Path) -> Result<HyperSpec, Failure> {
    parse_spec_file(&read(path)?).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn config(budget: u64) -> EnforceConfig {
    EnforceConfig { budget, ..EnforceConfig::default() }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compose { spec, n, budget } => {
            let f = self_compose(&load_spec(&spec)?, n, budget).map_err(|e| Failure::Error(e.to_string()))?;
            println!("{f}");
        }
        Command::Solve { game: Some(path), out, .. } => {
            let arena = parse_pgsolver(&read(&path)?).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
            let solution = arena.solve();
            write(out.as_deref(), &solution.to_pgsolver(&arena))?;
            if !arena.is_empty() && !solution.wins(Player::P0, 0) {
                return Err(Failure::Unrealizable("player 0 loses from node 0".into()));
            }
        }
        Command::Solve { game: None, spec: Some(spec), n: Some(n), out, budget } => {
            let solved = build_parallel_game(&load_spec(&spec)?, n, &config(budget))?;
            write(out.as_deref(), &solved.game().to_pgsolver())?;
        }
        Command::Solve { .. } => return Err(Failure::Error("give a game file, or --spec with --n".into())),
        Command::Gen { inputs, outputs, n, len, flip, seed, mode, out } => {
            let mode = match mode {
                Mode::Random => GenMode::Random,
                Mode::Symmetric => GenMode::Symmetric,
            };
            let cfg = GenConfig { inputs, outputs, n, len, flip, seed, mode };
            write(out.as_deref(), &gen_stream(&cfg).map_err(|e| Failure::Error(e.to_string()))?)?;
        }
        Command::EnforceParallel { spec, n, traces, out, stats, budget } => {
            let spec = load_spec(&spec)?;
            let text = read(&traces)?;
            let steps = parse_steps(&text, spec.alphabet(), n as usize)
                .map_err(|e| Failure::Error(format!("{}: {e}", traces.display())))?;
            let started = Instant::now();
            let solved = Arc::new(build_parallel_game(&spec, n, &config(budget))?);
            let init = started.elapsed();
            let mut session = EnforcerSession::new(solved, false);
            let res = run_stream(&mut session, &steps)?;
            let mut text = String::new();
            for (j, step) in steps.iter().enumerate() {
                let outputs: Vec<_> = res.traces.iter().map(|t| t.events[j] & !spec.alphabet().input_mask()).collect();
                let _ = writeln!(text, "{}", format_outputs(&outputs, spec.alphabet(), res.enforced[j]));
                let _ = writeln!(text, "{}", format_inputs(&step.inputs, spec.alphabet()));
            }
            write(out.as_deref(), &text)?;
            if let Some(path) = stats {
                let st = RunStats {
                    init,
                    times: vec![res.stats.elapsed],
                    interventions: usize::from(res.stats.intervention.is_some()),
                    traces: n as usize,
                    length: steps.len(),
                };
                let mut kv = st.to_key_values();
                if let Some(j) = res.stats.intervention {
                    let _ = writeln!(kv, "intervention_step={j}");
                }
                write(Some(&path), &kv)?;
            }
        }
        Command::EnforceSequential { spec, traces, out, stats, budget, no_fast_path } => {
            let spec = load_spec(&spec)?;
            let text = read(&traces)?;
            let sessions =
                parse_sessions(&text, spec.alphabet()).map_err(|e| Failure::Error(format!("{}: {e}", traces.display())))?;
            let cfg = EnforceConfig { fast_path: !no_fast_path, ..config(budget) };
            let run = run_sequential(&spec, &sessions, &cfg)?;
            let mut text = String::new();
            let mut kv = String::new();
            let input_mask = spec.alphabet().input_mask();
            for (k, (o, steps)) in run.outcomes.iter().zip(&sessions).enumerate() {
                if k > 0 {
                    let _ = writeln!(text, "{NEW_SESSION}");
                }
                for (j, &letter) in o.trace.events.iter().enumerate() {
                    let enforced = o.intervention.is_some_and(|i| j >= i);
                    let _ = writeln!(text, "{}", format_outputs(&[letter & !input_mask], spec.alphabet(), enforced));
                    let _ = writeln!(text, "{}", format_inputs(&steps[j].inputs, spec.alphabet()));
                }
                let intervention = o.intervention.map_or("none".to_string(), |i| i.to_string());
                let _ = writeln!(
                    kv,
                    "session={} length={} init_s={:.6} time_s={:.6} intervention={intervention}",
                    k + 1,
                    o.trace.len(),
                    o.init.as_secs_f64(),
                    o.stats.elapsed.as_secs_f64()
                );
            }
            write(out.as_deref(), &text)?;
            if let Some(path) = stats {
                write(Some(&path), &kv)?;
            }
            if let Some(e) = run.stopped {
                return Err(e.into());
            }
        }
        Command::Bench { n, flip, len, runs, seed, out } => {
            let rows = bench_od(&n, &flip, runs, len, seed, &EnforceConfig::default())?;
            write(out.as_deref(), &format_table(&rows))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unrealizable(msg)) => {
            eprintln!("unrealizable: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
