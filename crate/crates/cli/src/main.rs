mod commands;
mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;
use toolkit_core::heisenberg::{DeltaType, Z2Choice};

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(
    name = "toolkit",
    version,
    about = "Exact algebra, period lattices, Heisenberg groups and oracle-driven search"
)]
struct Cli {
    /// Seed for every source of randomness in the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Where to write the run manifest (default: next to --out, else stderr).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[arg(
        long,
        env = "TOOLKIT_PRECISION_BITS",
        default_value_t = 96,
        global = true,
        hide_env_values = true
    )]
    precision_bits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Semisimple algebras: orders, splittings, invariants, decompositions.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Covering points and generators of Euclidean lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Period lattice of an elliptic curve.
    Periods(CurveArgs),
    /// Endomorphism ring from the period lattice.
    Endring(CurveArgs),
    /// Frobenius traces a_p.
    Aptrace {
        #[arg(long)]
        curve: PathBuf,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
    },
    /// N-torsion points with recognized coordinates.
    Torsion {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        n: u64,
    },
    /// The finite Heisenberg group and its theta structures.
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    #[command(subcommand)]
    Shafarevich(SimulateCmd),
    #[command(subcommand)]
    Mordell(MordellCmd),
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    curve: PathBuf,
    /// Working precision in bits (default: TOOLKIT_PRECISION_BITS).
    #[arg(long)]
    prec: Option<u32>,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    ell: u64,
    /// Precision N: results are modulo ℓ^N.
    #[arg(long, default_value_t = 4)]
    prec: u32,
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    Maxorder {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: u64,
    },
    Split(LocalArgs),
    Invariant(LocalArgs),
    /// Simple factors over ℚ_ℓ, or the isotypic parts of a module with --rep.
    Decompose {
        #[command(flatten)]
        local: LocalArgs,
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    GlobalDecompose {
        #[arg(long)]
        input: PathBuf,
    },
    Invariants {
        #[arg(long)]
        input: PathBuf,
    },
    Signature {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    Cover {
        #[arg(long)]
        input: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        point: Vec<f64>,
        #[arg(long)]
        radius: f64,
    },
    Gens {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChoiceArg {
    Literal,
    TwoTorsion,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    #[arg(long, default_value = "8")]
    delta: String,
    /// Period of each factor as "re,im"; repeat once per divisor.
    #[arg(long, default_value = "0.3,1.1")]
    tau: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum HeisenbergCmd {
    Autos {
        #[arg(long, default_value = "8")]
        delta: String,
    },
    /// The matrix of t·(a, l) in the standard representation.
    Rep {
        #[arg(long, default_value = "8")]
        delta: String,
        /// Exponent k of the central scalar ζ^k.
        #[arg(long, default_value_t = 0)]
        t: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<u64>,
    },
    Relations {
        #[command(flatten)]
        fixture: FixtureArgs,
        #[arg(long, value_enum, default_value_t = ChoiceArg::Literal)]
        choice: ChoiceArg,
    },
    Orbit {
        #[command(flatten)]
        fixture: FixtureArgs,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SimulateCmd {
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        oracles: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MordellCmd {
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        oracles: PathBuf,
        /// Polarized varieties to use instead of running the Shafarevich search first.
        #[arg(long)]
        varieties: Option<PathBuf>,
    },
}

enum Output {
    Json(Value),
    Lines(Vec<Value>),
}

fn parse_tau(s: &str) -> Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .with_context(|| format!("tau {s:?} must be \"re,im\""))?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}

fn fixture_inputs(f: &FixtureArgs) -> Result<(DeltaType, Vec<Complex64>)> {
    let delta = DeltaType::parse(&f.delta)?;
    let mut taus = f
        .tau
        .iter()
        .map(|s| parse_tau(s))
        .collect::<Result<Vec<_>>>()?;
    if taus.len() == 1 && delta.genus() > 1 {
        taus = vec![taus[0]; delta.genus()];
    }
    Ok((delta, taus))
}

fn dispatch(cli: &Cli, m: &mut RunManifest) -> Result<Output> {
    let bits = cli.precision_bits;
    let prec = |c: &CurveArgs| c.prec.unwrap_or(bits);
    let json = |v: Result<Value>| v.map(Output::Json);
    match &cli.command {
        Command::Algebra(a) => json(match a {
            AlgebraCmd::Maxorder { input, ell } => commands::maxorder(m, input, *ell),
            AlgebraCmd::Split(l) => commands::split(m, &l.input, l.ell, l.prec),
            AlgebraCmd::Invariant(l) => commands::invariant(m, &l.input, l.ell, l.prec),
            AlgebraCmd::Decompose {
                local: l,
                rep: Some(rep),
            } => commands::module_decompose(m, &l.input, rep, l.ell, l.prec),
            AlgebraCmd::Decompose {
                local: l,
                rep: None,
            } => commands::invariant(m, &l.input, l.ell, l.prec),
            AlgebraCmd::GlobalDecompose { input } => commands::global_decompose(m, input),
            AlgebraCmd::Invariants { input } => commands::invariants(m, input),
            AlgebraCmd::Signature { input } => commands::signature(m, input),
        }),
        Command::Lattice(LatticeCmd::Cover {
            input,
            point,
            radius,
        }) => json(commands::lattice_cover(m, input, point, *radius)),
        Command::Lattice(LatticeCmd::Gens { input, radius }) => {
            json(commands::lattice_gens(m, input, *radius))
        }
        Command::Periods(c) => {
            m.precision_bits = prec(c);
            json(commands::periods(m, &c.curve, prec(c)))
        }
        Command::Endring(c) => {
            m.precision_bits = prec(c);
            json(commands::endring(m, &c.curve, prec(c)))
        }
        Command::Aptrace { curve, p } => json(commands::aptrace(m, curve, p)),
        Command::Torsion { curve, n } => {
            m.precision_bits = prec(curve);
            json(commands::torsion(m, &curve.curve, *n, prec(curve)))
        }
        Command::Heisenberg(h) => json(match h {
            HeisenbergCmd::Autos { delta } => commands::heisenberg_autos(&DeltaType::parse(delta)?),
            HeisenbergCmd::Rep { delta, t, a, l } => {
                commands::heisenberg_rep(&DeltaType::parse(delta)?, *t, a, l)
            }
            HeisenbergCmd::Relations { fixture, choice } => {
                let (delta, taus) = fixture_inputs(fixture)?;
                let choice = match choice {
                    ChoiceArg::Literal => Z2Choice::DivisibleByTwo,
                    ChoiceArg::TwoTorsion => Z2Choice::TwoTorsion,
                };
                commands::heisenberg_relations(&delta, &taus, choice)
            }
            HeisenbergCmd::Orbit { fixture, budget } => {
                let (delta, taus) = fixture_inputs(fixture)?;
                commands::heisenberg_orbit(&delta, &taus, *budget)
            }
        }),
        Command::Shafarevich(SimulateCmd::Simulate { config, oracles }) => {
            commands::shafarevich(m, config, oracles, cli.seed).map(Output::Lines)
        }
        Command::Mordell(MordellCmd::Simulate {
            config,
            oracles,
            varieties,
        }) => json(commands::mordell(
            m,
            config,
            oracles,
            varieties.as_deref(),
            cli.seed,
        )),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Algebra(a) => match a {
            AlgebraCmd::Maxorder { .. } => "algebra maxorder",
            AlgebraCmd::Split(_) => "algebra split",
            AlgebraCmd::Invariant(_) => "algebra invariant",
            AlgebraCmd::Decompose { .. } => "algebra decompose",
            AlgebraCmd::GlobalDecompose { .. } => "algebra global-decompose",
            AlgebraCmd::Invariants { .. } => "algebra invariants",
            AlgebraCmd::Signature { .. } => "algebra signature",
        },
        Command::Lattice(LatticeCmd::Cover { .. }) => "lattice cover",
        Command::Lattice(LatticeCmd::Gens { .. }) => "lattice gens",
        Command::Periods(_) => "periods",
        Command::Endring(_) => "endring",
        Command::Aptrace { .. } => "aptrace",
        Command::Torsion { .. } => "torsion",
        Command::Heisenberg(h) => match h {
            HeisenbergCmd::Autos { .. } => "heisenberg autos",
            HeisenbergCmd::Rep { .. } => "heisenberg rep",
            HeisenbergCmd::Relations { .. } => "heisenberg relations",
            HeisenbergCmd::Orbit { .. } => "heisenberg orbit",
        },
        Command::Shafarevich(_) => "shafarevich simulate",
        Command::Mordell(_) => "mordell simulate",
    }
}

fn render(out: &Output) -> Result<String> {
    Ok(match out {
        Output::Json(v) => serde_json::to_string_pretty(v)? + "\n",
        Output::Lines(ls) => ls
            .iter()
            .map(|l| serde_json::to_string(l).map(|s| s + "\n"))
            .collect::<std::result::Result<String, _>>()?,
    })
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut m = RunManifest::new(
        command_name(&cli.command).into(),
        args,
        cli.seed.unwrap_or(0),
        cli.precision_bits,
    );
    let result = dispatch(&cli, &mut m).and_then(|out| {
        let text = render(&out)?;
        match &cli.out {
            Some(p) => write_to(p, &text)?,
            None => print!("{text}"),
        }
        let manifest = serde_json::to_string_pretty(&m)? + "\n";
        match RunManifest::target(cli.manifest.as_ref(), cli.out.as_ref()) {
            Some(p) => write_to(&p, &manifest)?,
            None => eprint!("{manifest}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
