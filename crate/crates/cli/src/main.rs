use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use ocha_core::bv::bv_verify;
use ocha_core::cohomology::cohomology;
use ocha_core::field::{FieldKind, Fp};
use ocha_core::io::{parse_structure, peek_field, tower_block};
use ocha_core::suites::{algebraic_checks, run_checks, structure_checks, trial_rng, ClosedSampler, SuiteShape, TrialReport};
use ocha_core::{Field, Rational};
use rayon::prelude::*;

/// Verifies open-closed homotopy algebra structure files with exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "ocha", version)]
struct Cli {
    /// Worker threads for parallel trials and matrix assembly.
    #[arg(long, global = true, env = "OCHA_THREADS")]
    threads: Option<usize>,
    /// Also write a machine-readable report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Audit omega, the L-infinity and OCHA relations, the unit and cyclicity.
    Check { file: PathBuf },
    /// Randomized residual suites with shrinking of failures.
    Identities(IdentitiesArgs),
    /// Capped Hochschild cohomology table.
    Cohomology(CohomologyArgs),
    /// BV identities for two named towers of the file.
    Bv(BvArgs),
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    /// Dimension of A for the random cyclic spaces.
    #[arg(long = "dimA", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=3))]
    dim_a: u64,
    /// Dimension of Z for the random cyclic spaces.
    #[arg(long = "dimZ", default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
    dim_z: u64,
    /// Arity cap of random towers.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=5))]
    cap: u64,
    /// Field of the random cyclic spaces ("rational" or "prime <p>"); defaults to the file's field.
    #[arg(long, env = "OCHA_FIELD")]
    field: Option<FieldArg>,
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    file: PathBuf,
    #[arg(long)]
    cap: usize,
    /// Inclusive degree range such as `-4..4`.
    #[arg(long, allow_hyphen_values = true)]
    degrees: DegreeRange,
    /// Restrict to cochains vanishing when any input is the unit.
    #[arg(long)]
    normalized: bool,
    /// Print a tower block for every representative.
    #[arg(long)]
    representatives: bool,
}

#[derive(Args, Debug)]
struct BvArgs {
    file: PathBuf,
    #[arg(long = "D")]
    d: String,
    #[arg(long = "E")]
    e: String,
}

#[derive(Clone, Copy, Debug)]
struct FieldArg(FieldKind);

impl FromStr for FieldArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["rational"] => Ok(FieldArg(FieldKind::Rational)),
            ["prime", p] => p.parse().map(|p| FieldArg(FieldKind::Prime(p))).map_err(|e| format!("bad prime {p}: {e}")),
            _ => Err(format!("expected `rational` or `prime <p>`, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct DegreeRange(i64, i64);

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected d1..d2, got `{s}`"))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("bad degree `{x}`: {e}"));
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        Ok(DegreeRange(a, b))
    }
}

/// Human output, the structured report and the verdict of one command.
struct Outcome {
    text: String,
    report: String,
    passed: bool,
}

/// Calls `$body` with `$F` bound to the scalar type of `$kind`.
macro_rules! with_field {
    ($kind:expr, $F:ident => $body:expr) => {
        match $kind {
            FieldKind::Rational => {
                type $F = Rational;
                $body
            }
            FieldKind::Prime(p) => with_field!(@prime p, $F => $body; 3, 5, 7, 11, 13, 101, 1009, 32003, 65521, 1000003, 2147483647),
        }
    };
    (@prime $p:expr, $F:ident => $body:expr; $($q:literal),*) => {
        match $p {
            $($q => {
                type $F = Fp<$q>;
                $body
            })*
            other => bail!("unsupported prime {other}; available: 3 5 7 11 13 101 1009 32003 65521 1000003 2147483647"),
        }
    };
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads")?;
    }
    let file = match &cli.command {
        Command::Check { file } => file,
        Command::Identities(a) => &a.file,
        Command::Cohomology(a) => &a.file,
        Command::Bv(a) => &a.file,
    };
    let text = read(file)?;
    let kind = peek_field(&text).with_context(|| format!("parsing {}", file.display()))?;
    let out = with_field!(kind, F => dispatch::<F>(&cli.command, &text))
        .with_context(|| format!("processing {}", file.display()))?;
    print!("{}", out.text);
    if let Some(path) = &cli.report {
        let mut report = format!("file {}\nfield {kind}\n", file.display());
        report.push_str(&out.report);
        writeln!(report, "result {}", if out.passed { "pass" } else { "fail" })?;
        std::fs::write(path, report).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(out.passed)
}

fn dispatch<F: Field>(cmd: &Command, text: &str) -> anyhow::Result<Outcome> {
    let file = parse_structure::<F>(text)?;
    let s = &file.structure;
    match cmd {
        Command::Check { .. } => {
            let audit = s.audit()?;
            let report = audit
                .entries
                .iter()
                .map(|e| match &e.witness {
                    None => format!("check {} pass\n", e.name),
                    Some(w) => format!("check {} fail {w}\n", e.name),
                })
                .collect();
            Ok(Outcome { text: audit.to_string(), report, passed: audit.passed() })
        }
        Command::Bv(a) => {
            let (d, e) = (file.tower(&a.d)?, file.tower(&a.e)?);
            let unit = s.unit().context("structure has no unit")?;
            for (name, t) in [(&a.d, d), (&a.e, e)] {
                if !t.is_normalized(unit) {
                    bail!("tower {name} is not normalized");
                }
            }
            let r = bv_verify(s, d, e)?;
            let report = r
                .entries
                .iter()
                .map(|x| format!("identity {:?} {}\n", x.name, if x.passed() { "pass" } else { "fail" }))
                .collect();
            Ok(Outcome { text: r.to_string(), report, passed: r.passed() })
        }
        Command::Cohomology(a) => {
            let r = cohomology(s, a.cap, a.degrees.0..=a.degrees.1, a.normalized)?;
            let mut text = format!("{r}\n");
            let mut report = format!("cap {}\nnormalized {}\ndelta_squared_zero {}\n", r.cap, r.normalized, r.delta_squared_zero);
            for row in &r.rows {
                writeln!(
                    report,
                    "degree {} cochains {} kernel {} image {} cohomology {}",
                    row.degree,
                    row.cochains,
                    row.kernel,
                    row.image,
                    row.cohomology()
                )?;
                if a.representatives {
                    for (i, t) in row.representatives.iter().enumerate() {
                        text.push_str(&tower_block(&format!("h{}_{i}", row.degree).replace('-', "m"), t));
                    }
                }
            }
            Ok(Outcome { text, report, passed: r.delta_squared_zero })
        }
        Command::Identities(a) => {
            let alg = a.field.map_or(F::kind(), |f| f.0);
            let shape = SuiteShape {
                dim_a: a.dim_a as usize,
                dim_z: a.dim_z as usize,
                cap: a.cap as usize,
                ..SuiteShape::default()
            };
            let algebraic = with_field!(alg, G => algebraic_trials::<G>(a.seed, a.trials, &shape))?;
            s.require_cyclic_unital()?;
            let closed = ClosedSampler::new(s, shape.cap, -3..=3, true)?;
            let structural = (0..a.trials)
                .into_par_iter()
                .map(|t| {
                    let checks = structure_checks(s, Some(&closed), &mut trial_rng(a.seed, 2 * t + 1), &shape)?;
                    run_checks(t, &checks)
                })
                .collect::<ocha_core::Result<Vec<_>>>()?;
            let mut text = format!("seed {} trials {} field {alg}\n", a.seed, a.trials);
            let mut report = format!("seed {}\ntrials {}\nrandom_field {alg}\n", a.seed, a.trials);
            let mut passed = true;
            for (x, y) in algebraic.into_iter().zip(structural) {
                let merged = TrialReport {
                    trial: x.trial,
                    checks: x.checks + y.checks,
                    failures: x.failures.into_iter().chain(y.failures).collect(),
                };
                passed &= merged.passed();
                write!(text, "{merged}")?;
                writeln!(report, "trial {} checks {} failures {}", merged.trial, merged.checks, merged.failures.len())?;
                for f in &merged.failures {
                    writeln!(report, "failure {} {:?} {:?}", merged.trial, f.name, f.residual)?;
                }
            }
            if !passed {
                writeln!(text, "failures reproduce with --seed {}", a.seed)?;
            }
            Ok(Outcome { text, report, passed })
        }
    }
}

fn algebraic_trials<G: Field>(seed: u64, trials: u64, shape: &SuiteShape) -> anyhow::Result<Vec<TrialReport>> {
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let checks = algebraic_checks::<G>(&mut trial_rng(seed, 2 * t), shape)?;
            run_checks(t, &checks)
        })
        .collect::<ocha_core::Result<Vec<_>>>()?)
}
