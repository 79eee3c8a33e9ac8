//! `crooked`: build and verify crooked fundamental domains from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification failure, 1 anything
//! else (I/O). Every run writes `<out>/<command>.json`, including failed runs.

mod commands;
mod doc;
mod mesh;

use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use crooked::scalar::{Float, Q};
use crooked::Error;
use serde_json::{json, Value};

use commands::{Config, DomainArgs, MargulisArgs, Outcome, PairArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Parser)]
#[command(name = "crooked", version, about = "Crooked planes and proper affine deformations of three-holed spheres")]
struct Cli {
    /// Scalar field: exact rationals (with square-root extensions where needed) or tolerance-carrying floats.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    mode: ModeArg,
    /// Tolerance for float mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    eps: f64,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for tile audits.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    /// Output directory.
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a linear isometry given by an SL(2) lift or an SO(2,1) matrix.
    Classify {
        /// Rows separated by ';', e.g. "2,1;1,1".
        #[arg(long, allow_hyphen_values = true)]
        sl2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        so21: Option<String>,
    },
    /// Margulis invariant of one affine map, or the triple of a deformed group.
    Margulis {
        /// "level-two", "pants:l1,l2,l3" (c for a cusp) or a group JSON file.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sl2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        so21: Option<String>,
        /// Translational part, "x,y,z".
        #[arg(long, allow_hyphen_values = true)]
        trans: Option<String>,
    },
    /// Three disjoint crooked planes realizing a positive Margulis triple.
    Domain {
        /// "level-two", "pants:l1,l2,l3" (c for a cusp) or a group JSON file.
        #[arg(long, default_value = "level-two")]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Splitting weights p_i in (0,1); default 1/2 each.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Also complete the triple to a four-plane domain for the generators.
        #[arg(long)]
        quad: bool,
        /// Random interior points per pairing direction.
        #[arg(long, default_value_t = 50)]
        witnesses: usize,
    },
    /// Integer symplectic generators for a positive integer triple.
    Sp4 {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Use generators whose invariants are the requested triple.
        #[arg(long)]
        corrected: bool,
        /// Also render the matrices as LaTeX (written to sp4.tex).
        #[arg(long)]
        latex: bool,
    },
    /// OBJ meshes of the domain's crooked planes, clipped to a ball.
    Mesh {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// Audit translates of a four-plane domain under reduced words up to a length.
    Tile {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Decide whether two crooked planes C(v1,p1), C(v2,p2) are disjoint.
    CheckDisjoint {
        #[arg(long, allow_hyphen_values = true)]
        v1: String,
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        v2: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Margulis { .. } => "margulis",
            Command::Domain { .. } => "domain",
            Command::Sp4 { .. } => "sp4",
            Command::Mesh { .. } => "mesh",
            Command::Tile { .. } => "tile",
            Command::CheckDisjoint { .. } => "check-disjoint",
        }
    }
}

macro_rules! in_mode {
    ($mode:expr, $f:ident, $($arg:expr),*) => {
        match $mode {
            ModeArg::Exact => commands::$f::<Q>($($arg),*),
            ModeArg::Float => commands::$f::<Float>($($arg),*),
        }
    };
}

fn run(cli: &Cli, cfg: &Config) -> anyhow::Result<Outcome> {
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("--eps must be positive, got {}", cli.eps)).into());
    }
    if cli.jobs == 0 {
        return Err(Error::InvalidParameter("--jobs must be at least 1".into()).into());
    }
    match &cli.command {
        Command::Classify { sl2, so21 } => in_mode!(cli.mode, cmd_classify, cfg, sl2.as_deref(), so21.as_deref()),
        Command::Margulis { group, u1, u2, sl2, so21, trans } => {
            let a = MargulisArgs {
                group: group.as_deref(),
                u1: u1.as_deref(),
                u2: u2.as_deref(),
                sl2: sl2.as_deref(),
                so21: so21.as_deref(),
                trans: trans.as_deref(),
            };
            in_mode!(cli.mode, cmd_margulis, cfg, a)
        }
        Command::Domain { group, mu, weights, quad, witnesses } => {
            let a = DomainArgs { group, mu, weights: weights.as_deref(), quad: *quad, witnesses: *witnesses };
            in_mode!(cli.mode, cmd_domain, cfg, a)
        }
        Command::Sp4 { mu, corrected, latex } => commands::cmd_sp4(cfg, mu, *corrected, *latex),
        Command::Mesh { domain, radius } => commands::cmd_mesh(cfg, domain, *radius),
        Command::Tile { domain, depth, samples } => in_mode!(cli.mode, cmd_tile, cfg, domain, *depth, *samples),
        Command::CheckDisjoint { v1, p1, v2, p2 } => {
            in_mode!(cli.mode, cmd_check_disjoint, cfg, PairArgs { v1, p1, v2, p2 })
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::VerificationFailed(_)
            | Error::SearchExhausted { .. }
            | Error::FormulaMismatch { .. }
            | Error::Indeterminate(_),
        ) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn error_report(command: &str, code: i32, e: &anyhow::Error) -> Value {
    let kind = e.downcast_ref::<Error>().map_or_else(|| "Io".to_string(), doc::kind);
    json!({
        "schema": doc::SCHEMA,
        "command": command,
        "status": "error",
        "exit_code": code,
        "error": kind,
        "message": format!("{e:#}"),
    })
}

fn write_report(cfg: &Config, command: &str, report: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("JSON values serialize") + "\n";
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.out.join(format!("{command}.json")), &text)?;
    print!("{text}");
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            let report = json!({
                "schema": doc::SCHEMA,
                "status": "error",
                "exit_code": 2,
                "error": "Usage",
                "message": e.kind().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
            exit(2);
        }
    };
    let cfg = Config { eps: cli.eps, seed: cli.seed, jobs: cli.jobs, out: cli.out.clone() };
    let name = cli.command.name();
    let (report, code) = match run(&cli, &cfg) {
        Ok(o) => (o.report, o.code),
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            (error_report(name, code, &e), code)
        }
    };
    if let Err(e) = write_report(&cfg, name, &report) {
        eprintln!("error: cannot write report to {}: {e}", cfg.out.display());
        exit(1);
    }
    exit(code);
}
