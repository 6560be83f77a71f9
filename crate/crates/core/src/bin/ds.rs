use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ds_core::fixtures::run_fixtures;
use ds_core::report::*;
use ds_core::{Error, Result};

#[derive(Parser)]
#[command(name = "ds", version, about = "Drinfeld-Stuhler modules: construct, verify, classify, descend")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// size of the constant field F_q
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// degree of the cyclic algebra
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// z^d = r, e.g. "T^2+2"
    #[arg(long, default_value = "T^2+2")]
    r: String,
    /// `generic` or `fq^m`
    #[arg(long)]
    field: Option<String>,
    /// image of T in the finite field (an encoding)
    #[arg(long)]
    gamma: Option<u64>,
    /// A-characteristic, a prime of A
    #[arg(long = "char")]
    char_poly: Option<String>,
    /// RNG seed; DS_SEED overrides
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// coefficient degree of random samples
    #[arg(long, default_value_t = 2)]
    deg: usize,
    /// largest extension degree searched for torsion points
    #[arg(long, default_value_t = 24)]
    max_ext: u32,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let seed = match std::env::var("DS_SEED") {
            Ok(s) => s.parse().map_err(|_| Error::Config(format!("DS_SEED = `{s}` is not an integer")))?,
            Err(_) => self.seed,
        };
        Ok(RunConfig {
            q: self.q,
            d: self.d,
            r: self.r.clone(),
            field: self.field.clone(),
            gamma: self.gamma,
            char_poly: self.char_poly.clone(),
            seed,
            samples: self.samples,
            deg: self.deg,
            max_ext: self.max_ext,
            ..RunConfig::default()
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Moduli,
    Splitting,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the module and print φ_T, φ_h, φ_z
    Construct(Common),
    /// Relations, ∂-condition and kernel orders against norms
    Verify(Common),
    /// Points of the n-torsion and their invariance
    Torsion {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value = "T")]
        n: String,
        /// element b of O_D; report a point x with φ_b(φ_h x) ≠ 0
        #[arg(long)]
        witness: Option<String>,
    },
    /// Nonreduced norm of an element and the index of b·O_D
    Norm {
        #[command(flatten)]
        c: Common,
        b: String,
    },
    /// Local invariants of D
    Invariants(Common),
    /// Discriminants and maximality of O_D
    Maximal(Common),
    /// Three supersingularity criteria at the characteristic
    Supersingular(Common),
    /// End ring, its discriminant and automorphism group
    Endring(Common),
    /// Solve Hilbert 90 for a cocycle bundle (JSON file)
    H90 {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Galois descent: from a bundle, or on the built-in conjugated fixture
    Descend {
        #[command(flatten)]
        c: Common,
        #[arg(long, value_enum, default_value = "moduli")]
        method: Method,
        /// [K : L] for the built-in fixture
        #[arg(long, default_value_t = 2)]
        rel: u32,
        /// descent bundle (JSON); overrides the instance flags
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the whole fixture suite
    Fixtures {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Config(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn run(cli: Cli) -> Result<i32> {
    let (report, out) = match cli.cmd {
        Cmd::Construct(c) => (cmd_construct(&c.config()?)?, c.out),
        Cmd::Verify(c) => (cmd_verify(&c.config()?)?, c.out),
        Cmd::Torsion { c, n, witness } => (cmd_torsion(&c.config()?, &n, witness.as_deref())?, c.out),
        Cmd::Norm { c, b } => (cmd_norm(&c.config()?, &b)?, c.out),
        Cmd::Invariants(c) => (cmd_invariants(&c.config()?)?, c.out),
        Cmd::Maximal(c) => (cmd_maximal(&c.config()?)?, c.out),
        Cmd::Supersingular(c) => (cmd_supersingular(&c.config()?)?, c.out),
        Cmd::Endring(c) => (cmd_endring(&c.config()?)?, c.out),
        Cmd::H90 { input, out } => (cmd_h90(&read_json(&input)?)?, out),
        Cmd::Descend { c, method, rel, input } => {
            let r = match input {
                Some(p) => cmd_descend(&read_json(&p)?)?,
                None => {
                    let m = match method {
                        Method::Moduli => DescentMethod::Moduli,
                        Method::Splitting => DescentMethod::Splitting,
                    };
                    cmd_descend_fixture(&c.config()?, rel, m)?
                }
            };
            (r, c.out)
        }
        Cmd::Fixtures { seed, out } => {
            let seed = std::env::var("DS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(seed);
            let run = run_fixtures(seed);
            emit(&serde_json::to_string_pretty(&run).expect("serializes"), out.as_ref())?;
            return Ok(if run.pass { 0 } else { 1 });
        }
    };
    emit(&report.to_json(), out.as_ref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            1
        }
    };
    ExitCode::from(code as u8)
}
