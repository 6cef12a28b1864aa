use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qrea::hecke;
use qrea::scalars::{parse_rational, sample_q, Field, QScalar, Rational};
use qrea_cli::report::Report;
use qrea_cli::suites::{self, Setup, Source, SuiteError, SuiteField, SuiteParams, SAMPLE_BOUND};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FILE: u8 = 3;

#[derive(Parser)]
#[command(name = "qrea", version, about = "Exact verification suites for reflection equation algebras")]
struct Cli {
    #[command(subcommand)]
    suite: Suite,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Suite {
    /// Hecke axioms, skew-invertibility and symmetry rank.
    Validate,
    /// q-symmetrizers and q-antisymmetrizers.
    Projectors,
    /// Defining relations in tensor and symmetric powers.
    Reps,
    /// Basic and higher Cayley-Hamilton identities.
    Ch,
    /// q-Newton identities and their parametric resolution.
    Newton,
    /// Root scan for rank p >= 3 (reported as findings).
    Conjecture,
    /// Multiplicities, strings, higher Newton identities, idempotents.
    Orbit,
    /// q-Euler characteristic and q-algebra relations.
    Euler,
    /// Quantum trace weights over symmetric powers.
    CalibrateTrace,
    /// Every suite.
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Projectors => "projectors",
            Suite::Reps => "reps",
            Suite::Ch => "ch",
            Suite::Newton => "newton",
            Suite::Conjecture => "conjecture",
            Suite::Orbit => "orbit",
            Suite::Euler => "euler",
            Suite::CalibrateTrace => "calibrate-trace",
            Suite::All => "all",
        }
    }
}

#[derive(Args)]
struct Common {
    /// Dimension of V for the standard symmetry.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Rank for rank-generic checks.
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Deformation parameter: a rational or `random`.
    #[arg(long, global = true, default_value = "random")]
    q: String,
    /// Seed for q and for every sampled parameter.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Degree of the symmetric power carried by the second factor.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Degree of the symmetric power (upper bound where a suite loops).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Orbit eigenvalues, comma separated.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_rational_arg, allow_hyphen_values = true)]
    mu: Option<Vec<Rational>>,
    /// Parameter of the modified algebra.
    #[arg(long, global = true, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    hbar: Option<Rational>,
    /// JSON file with the R-matrix.
    #[arg(long, global = true)]
    r_file: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Keep q symbolic instead of sampling it.
    #[arg(long, global = true)]
    symbolic: bool,
    /// Refuse runs whose tensor spaces exceed this many dimensions.
    #[arg(long, global = true)]
    max_size: Option<usize>,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    File(String),
}

fn run<F: SuiteField>(suite: Suite, common: &Common, q: F, q_label: String) -> Result<Report, Failure> {
    let source = match &common.r_file {
        Some(path) => Source::File(hecke::load_r_from_file(path).map_err(|e| Failure::File(e.to_string()))?),
        None => Source::Standard,
    };
    let mut setup = Setup {
        q,
        source,
        params: SuiteParams {
            n: common.n,
            p: common.p,
            k: common.k,
            m: common.m,
            mu: common.mu.clone(),
            hbar: common.hbar.clone(),
            max_size: common.max_size,
        },
        // Stream 1 keeps suite sampling independent of the q draw.
        rng: {
            let mut r = ChaCha8Rng::seed_from_u64(common.seed);
            r.set_stream(1);
            r
        },
        extra_q: Vec::new(),
    };
    let rec = suites::run_suite(suite.name(), &mut setup).map_err(|SuiteError::Usage(e)| Failure::Usage(e))?;
    let mut qs = vec![q_label];
    qs.extend(setup.extra_q);
    Ok(Report::new(suite.name(), common.seed, qs, rec.checks))
}

fn resolve_q(common: &Common) -> Result<Rational, Failure> {
    let q = if common.q == "random" {
        sample_q(&mut ChaCha8Rng::seed_from_u64(common.seed), SAMPLE_BOUND)
    } else {
        parse_rational(&common.q).map_err(|e| Failure::Usage(e.to_string()))?
    };
    let one = <Rational as Field>::one();
    if q.is_zero() || q == one || q == one.negated() {
        return Err(Failure::Usage(format!("q = {q} is not a generic deformation parameter")));
    }
    Ok(q)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = if c.symbolic {
        run(cli.suite, c, QScalar::q(), "q".into())
    } else {
        resolve_q(c).and_then(|q| {
            let label = q.to_string();
            run(cli.suite, c, q, label)
        })
    };
    let report = match result {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::File(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FILE);
        }
    };
    let text = report.to_json();
    match &c.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FILE);
            }
        }
        None => print!("{text}"),
    }
    if report.failed() {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}
