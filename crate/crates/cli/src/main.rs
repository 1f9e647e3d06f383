use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lrbi::jets::Side;
use lrbi::specfile::EngineSpec;
use lrbi::Error;
use lrbi_cli::{exit_code, header, render_jsonl, render_summary, run_command, Command, Functor, Params};

const AXB_SPEC: &str = include_str!("../../../specs/axb.spec");

#[derive(Parser)]
#[command(name = "lrbi", version, about = "Exact checks for Lie-Rinehart bialgebras and their quantizations")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Truncation order N: series are computed modulo h^(N+1)
    #[arg(long, global = true)]
    h_order: Option<usize>,
    /// Maximal PBW degree of sampled envelope elements
    #[arg(long, global = true)]
    pbw_degree: Option<usize>,
    /// Jet degree d of the dual (functionals on PBW degree ≤ d)
    #[arg(long, global = true)]
    jet_degree: Option<usize>,
    /// Largest n tested in δ_n membership
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Seed of the sampled property checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress the human summary on standard error
    #[arg(long, global = true)]
    json_only: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorArg {
    Vee,
    Prime,
    Roundtrip,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    Axb,
}

#[derive(Subcommand)]
enum Sub {
    /// Lie-Rinehart axioms and enveloping bialgebroid properties
    Validate { spec: String },
    /// Twistor validation and the deformed bialgebroid axioms
    Twist { spec: String },
    /// Jet dual axioms and its rescaled presentation
    Dualize {
        spec: String,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// The Drinfeld functors on the twisted deformation
    Drinfeld {
        spec: String,
        #[arg(long, value_enum)]
        functor: FunctorArg,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Semiclassical limits on both sides of the duality
    Semiclassical { spec: String },
    /// Built-in examples
    Example {
        #[arg(value_enum)]
        name: ExampleArg,
    },
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn fail_usage(msg: impl std::fmt::Display, record: serde_json::Value) -> ExitCode {
    println!("{record}");
    eprintln!("lrbi: {msg}");
    ExitCode::from(3)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let (cmd, path) = match cli.command {
        Sub::Validate { spec } => (Command::Validate, Some(spec)),
        Sub::Twist { spec } => (Command::Twist, Some(spec)),
        Sub::Dualize { spec, side: s } => (Command::Dualize(side(s)), Some(spec)),
        Sub::Drinfeld { spec, functor, side: s } => {
            let f = match functor {
                FunctorArg::Vee => Functor::Vee,
                FunctorArg::Prime => Functor::Prime,
                FunctorArg::Roundtrip => Functor::Roundtrip,
            };
            (Command::Drinfeld(f, side(s)), Some(spec))
        }
        Sub::Semiclassical { spec } => (Command::Semiclassical, Some(spec)),
        Sub::Example { name: ExampleArg::Axb } => (Command::ExampleAxb, None),
    };
    let loaded = match &path {
        Some(p) => EngineSpec::load(p),
        None => EngineSpec::parse(AXB_SPEC),
    };
    let spec = match loaded {
        Ok(s) => s,
        Err(e) => {
            let mut rec = serde_json::json!({ "record": "error", "message": e.to_string() });
            if let Error::Parse { line, col, .. } = e {
                rec["line"] = line.into();
                rec["col"] = col.into();
            }
            return fail_usage(&e, rec);
        }
    };

    let f = &cli.flags;
    let mut truncation = spec.truncation;
    truncation.h_order = f.h_order.unwrap_or(truncation.h_order);
    truncation.pbw_degree = f.pbw_degree.unwrap_or(truncation.pbw_degree);
    truncation.jet_degree = f.jet_degree.unwrap_or(truncation.jet_degree);
    truncation.n_max = f.n_max.unwrap_or(truncation.n_max);
    if [truncation.h_order, truncation.pbw_degree, truncation.jet_degree, truncation.n_max].contains(&0) {
        let msg = "truncation parameters must be at least 1";
        return fail_usage(msg, serde_json::json!({ "record": "error", "message": msg }));
    }
    let params = Params { truncation, seed: f.seed.unwrap_or(spec.sample.seed) };

    let report = run_command(&spec, cmd, &params);
    let label = path.as_deref().unwrap_or("builtin:axb");
    let out = render_jsonl(&header(cmd, label, &params), &report);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    if !f.json_only {
        eprint!("{}", render_summary(cmd, &params, &report));
    }
    ExitCode::from(exit_code(report.verdict()) as u8)
}
