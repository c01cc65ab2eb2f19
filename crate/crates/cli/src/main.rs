use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wstar_cli::commands::{self, exit_code, read_json};
use wstar_cli::suites::{self, Suite};
use wstar_cli::{parse_positive, Config, DEFAULT_SEED};
use wstar_core::{Error, Q};

/// Verifier for the weak-* compactification constructions.
#[derive(Parser)]
#[command(name = "wstar", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Width bound for irrational roots, as `a/b` or `2^-k`.
    #[arg(long, global = true, default_value = "2^-40", value_parser = positive)]
    tol: Q,
    /// Largest prefix length probed by the closure oracle.
    #[arg(long = "nmax", global = true, default_value_t = 8)]
    n_max: usize,
    /// Smallest gap accepted as an Out certificate.
    #[arg(long, global = true, default_value = "2^-10", value_parser = positive)]
    delta_min: Q,
    /// Nesting depth of generated analyses and chain length bound.
    #[arg(long, global = true, default_value_t = 4)]
    depth: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for suites; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Line-delimited JSON reports instead of text.
    #[arg(long, global = true)]
    json: bool,
}

fn positive(s: &str) -> Result<Q, String> {
    parse_positive(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite.
    Verify { suite: SuiteArg },
    /// Closure membership of a point, with certificate.
    Member { set: String, point: String },
    /// Distance in l_p, or d_* with `star`.
    Dist {
        x: String,
        y: String,
        #[arg(default_value = "2")]
        metric: String,
    },
    /// Inner and outer bounds on the weak-* closure of a set.
    Closure {
        set: String,
        #[arg(default_value = "2")]
        p: String,
    },
    /// No-loss-of-precision classifier.
    NoLoss {
        set: String,
        #[arg(default_value = "2")]
        p: String,
    },
    /// States reachable from `I`.
    Reach { system: String },
    /// Safety of `I` against `E` in the two-point lattice.
    Safety { system: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lattice,
    Idempotents,
    Seqspace,
    Setrep,
    Analysis,
    PaperExamples,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Lattice => vec![Suite::Lattice],
            SuiteArg::Idempotents => vec![Suite::Idempotents],
            SuiteArg::Seqspace => vec![Suite::Seqspace],
            SuiteArg::Setrep => vec![Suite::Setrep],
            SuiteArg::Analysis => vec![Suite::Analysis],
            SuiteArg::PaperExamples => vec![Suite::PaperExamples],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn verify(suite: SuiteArg, cfg: &Config, as_json: bool) -> Result<bool, Error> {
    let checks = suites::run(&suite.suites(), cfg)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    if as_json {
        println!("{}", json!({ "config": cfg.to_json() }));
        for c in &checks {
            println!("{}", c.to_json());
        }
        println!("{}", json!({"summary": {"passed": passed, "failed": checks.len() - passed}}));
    } else {
        println!("seed: {}", cfg.seed);
        for c in &checks {
            println!("{c}");
        }
        println!("passed {passed}/{}", checks.len());
    }
    Ok(passed == checks.len())
}

fn query(cmd: &Cmd, cfg: &Config) -> Result<Value, Error> {
    match cmd {
        Cmd::Verify { .. } => unreachable!("handled by verify"),
        Cmd::Member { set, point } => commands::member(&read_json(set)?, &read_json(point)?, cfg),
        Cmd::Dist { x, y, metric } => commands::distance(&read_json(x)?, &read_json(y)?, metric, cfg),
        Cmd::Closure { set, p } => commands::closure_bracket(&read_json(set)?, p, cfg),
        Cmd::NoLoss { set, p } => commands::no_loss_verdict(&read_json(set)?, p, cfg),
        Cmd::Reach { system } => commands::reach(&read_json(system)?),
        Cmd::Safety { system } => commands::safety(&read_json(system)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.opts;
    let cfg =
        Config { tol: o.tol, n_max: o.n_max, delta_min: o.delta_min, depth: o.depth, seed: o.seed, threads: o.threads };
    let result = match &cli.cmd {
        Cmd::Verify { suite } => verify(*suite, &cfg, o.json).map(|ok| if ok { 0 } else { 1 }),
        cmd => query(cmd, &cfg).map(|v| {
            println!("{v}");
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
