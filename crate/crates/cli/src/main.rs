use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use tanglechain::poly::{write_export, NamedPoly, DEFAULT_TERM_CAP};
use tanglechain::verify::{run_suite, Suite, VerifyOptions};
use tanglechain::{
    build_report, canonical_state, read_state_file, write_state, ChainConfig, EvalMode, InvariantChain,
    ReducedInvariant, StateKind,
};

/// Exit codes.
const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;

#[derive(Parser)]
#[command(name = "tanglechain", version, about = "Polynomial LU invariants and tangles of 3 to 5 qubit pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ghz,
    W,
    Basis,
    Random,
    /// Random product of single-qubit states.
    Product,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state file.
    GenState {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Bitstring for `--kind basis`.
        #[arg(long)]
        bits: Option<String>,
        #[arg(long, env = "TANGLECHAIN_SEED", default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the tangle report of a state file.
    Tangles {
        state: PathBuf,
        /// Expected qubit count of the state.
        #[arg(long)]
        level: Option<usize>,
        #[command(flatten)]
        chain: ChainArgs,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run randomized verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "TANGLECHAIN_SEED", default_value_t = 0)]
        seed: u64,
        /// Overrides the per-level tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Levels to run (repeatable); the suite's defaults when absent.
        #[arg(long = "level")]
        levels: Vec<usize>,
        /// Local-unitary tuples per state in the invariance suite.
        #[arg(long, default_value_t = 20)]
        tuples: usize,
        #[command(flatten)]
        chain: ChainArgs,
        /// Print results as JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Export the symbolic family members and invariant of one level.
    ChainExport {
        #[arg(long)]
        level: usize,
        /// Allow the level-5 expansion.
        #[arg(long)]
        expand: bool,
        #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
        term_cap: usize,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct ChainArgs {
    /// Evaluation mode for all levels, or `LEVEL=MODE` (repeatable).
    #[arg(long = "mode")]
    modes: Vec<String>,
    /// `canonical` or `same-choice`.
    #[arg(long)]
    reduced_invariant: Option<ReducedInvariant>,
    /// Qubit whose partial transpose defines the fonts.
    #[arg(long)]
    anchor: Option<usize>,
    /// `LEVEL=VALUE` overriding a normalization constant (repeatable).
    #[arg(long = "normalization")]
    normalizations: Vec<String>,
}

fn parse_level_pair(s: &str) -> anyhow::Result<(usize, &str)> {
    let (l, v) = s.split_once('=').ok_or_else(|| anyhow!("expected LEVEL=VALUE, got {s:?}"))?;
    let level = l.trim().parse().with_context(|| format!("bad level in {s:?}"))?;
    Ok((level, v.trim()))
}

impl ChainArgs {
    fn config(&self) -> anyhow::Result<ChainConfig> {
        let mut cfg = ChainConfig::default();
        for m in &self.modes {
            if m.contains('=') {
                let (level, mode) = parse_level_pair(m)?;
                cfg = cfg.with_mode(level, mode.parse::<EvalMode>()?)?;
            } else {
                cfg = cfg.with_all_modes(m.parse::<EvalMode>()?);
            }
        }
        if let Some(r) = self.reduced_invariant {
            cfg.reduced_invariant = r;
        }
        if let Some(a) = self.anchor {
            cfg.anchor = a;
        }
        for n in &self.normalizations {
            let (level, value) = parse_level_pair(n)?;
            let value: f64 = value.parse().with_context(|| format!("bad value in {n:?}"))?;
            if !(3..=5).contains(&level) {
                bail!("no normalization constant at level {level}");
            }
            cfg.normalization[level - 3] = Some(value);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Input(anyhow::Error),
    Verify,
    Consistency(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen_state(kind: Kind, n: usize, bits: Option<String>, seed: u64) -> anyhow::Result<String> {
    let state = match kind {
        Kind::Ghz => canonical_state(&StateKind::Ghz, n)?,
        Kind::W => canonical_state(&StateKind::W, n)?,
        Kind::Basis => {
            let bits = bits.ok_or_else(|| anyhow!("--kind basis needs --bits"))?;
            canonical_state(&StateKind::Basis(bits), n)?
        }
        Kind::Random => canonical_state(&StateKind::Random(seed), n)?,
        Kind::Product => {
            let factors = (0..n as u64)
                .map(|q| {
                    let f = canonical_state(&StateKind::Random(seed.wrapping_mul(31).wrapping_add(q)), 1)?;
                    Ok([f.amplitude(0), f.amplitude(1)])
                })
                .collect::<tanglechain::Result<Vec<_>>>()?;
            canonical_state(&StateKind::Product(factors), n)?
        }
    };
    Ok(write_state(&state))
}

fn tangles(state: &Path, level: Option<usize>, chain: &ChainArgs, out: Option<&Path>) -> Result<(), Failure> {
    let s = read_state_file(state).with_context(|| format!("cannot read {}", state.display()))?;
    if let Some(l) = level {
        if l != s.n_qubits() {
            return Err(anyhow!("--level {l} but the state has {} qubits", s.n_qubits()).into());
        }
    }
    let chain = InvariantChain::new(chain.config()?)?;
    let label = state.file_name().map(|f| f.to_string_lossy().into_owned());
    let report = build_report(&chain, &s, label)?;
    emit(out, &(report.to_json() + "\n"))?;
    if !report.is_consistent() {
        let bad: Vec<String> = report.levels[0]
            .reduced_tangles
            .iter()
            .filter(|r| r.violation)
            .map(|r| format!("qubit {} power {:e}", r.dropped_qubit, r.raw_power))
            .collect();
        return Err(Failure::Consistency(format!(
            "negative reduced tangle power: {}",
            bad.join(", ")
        )));
    }
    Ok(())
}

fn verify(
    suite: &str,
    options: VerifyOptions,
    chain: &ChainArgs,
    json: bool,
) -> Result<(), Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    if options.trials == 0 {
        return Err(anyhow!("--trials must be at least 1").into());
    }
    let chain = InvariantChain::new(chain.config()?)?;
    let mut failed = false;
    for s in suites {
        let mut opts = options.clone();
        if suite == "all" {
            opts.levels.retain(|l| s != Suite::Concurrence || *l == 3);
        }
        for r in run_suite(&chain, s, &opts)? {
            if json {
                println!("{}", serde_json::to_string(&r)?);
            } else {
                println!("{r}");
            }
            failed |= !r.passed;
        }
    }
    if failed {
        Err(Failure::Verify)
    } else {
        Ok(())
    }
}

fn chain_export(level: usize, expand: bool, term_cap: usize) -> anyhow::Result<String> {
    match level {
        3 | 4 => {}
        5 if expand => {}
        5 => bail!("level 5 expansion is large; pass --expand to attempt it under --term-cap {term_cap}"),
        other => bail!("no chain export at level {other}; use 3, 4 or 5"),
    }
    let cfg = ChainConfig {
        term_cap,
        ..ChainConfig::default()
    };
    let chain = InvariantChain::new(cfg)?;
    let family = chain.symbolic_family(level, level)?;
    let k = family.degree();
    let mut polys: Vec<NamedPoly> = family
        .members()
        .iter()
        .enumerate()
        .map(|(m, p)| NamedPoly::new(format!("I{level}_{}_{}", k - m, m), p.clone()))
        .collect();
    polys.push(NamedPoly::new(
        format!("I{level}{}", 2 * k),
        chain.invariant_polynomial(level)?.clone(),
    ));
    Ok(write_export(&polys))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenState {
            kind,
            n,
            bits,
            seed,
            out,
        } => emit(out.as_deref(), &gen_state(kind, n, bits, seed)?)?,
        Command::Tangles {
            state,
            level,
            chain,
            out,
        } => tangles(&state, level, &chain, out.as_deref())?,
        Command::Verify {
            suite,
            trials,
            seed,
            tolerance,
            levels,
            tuples,
            chain,
            json,
        } => {
            let options = VerifyOptions {
                trials,
                seed,
                levels,
                tolerance,
                unitary_tuples: tuples,
            };
            verify(&suite, options, &chain, json)?
        }
        Command::ChainExport {
            level,
            expand,
            term_cap,
            out,
        } => emit(out.as_deref(), &chain_export(level, expand, term_cap)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Verify) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("consistency violation: {msg}");
            ExitCode::from(EXIT_CONSISTENCY)
        }
    }
}
