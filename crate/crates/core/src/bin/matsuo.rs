//! Command-line front end. Every subcommand prints one JSON document (or
//! writes it to `--out`). Exit status: 0 ok, 1 error, 2 invariant violation.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use matsuo_core::algebra::{critical_values, gram_det_bareiss, radical_dim, AlgebraVector};
use matsuo_core::axial::{verify_axis, FusionLaw};
use matsuo_core::classify::{classify, ClassifyOptions, Sampling};
use matsuo_core::closure::{consistency_check, is_safe_eta, Closure, Generator, ScalarMode, Subalgebra};
use matsuo_core::flip::{flip_report, FlipInvolution, FlipKind, FlipReportOptions};
use matsuo_core::scalar::{parse_rational, EtaScalar, Rational};
use matsuo_core::space::FischerSpace;
use matsuo_core::{Error, Result};

#[derive(Parser)]
#[command(name = "matsuo", version, about = "Matsuo algebras of wreath 3-transposition groups over Q(eta)")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SpaceArg {
    /// Ambient as NAME:n, e.g. W3A:4 or C3xC3:3.
    spec: Option<String>,
    /// Base group from a Cayley-table file instead of a name.
    #[arg(long, requires = "n")]
    table: Option<PathBuf>,
    /// Number of positions, with --table.
    #[arg(long)]
    n: Option<usize>,
}

impl SpaceArg {
    fn build(&self) -> Result<Arc<FischerSpace>> {
        let s = match (&self.spec, &self.table) {
            (_, Some(path)) => FischerSpace::from_table_file(path, self.n.unwrap_or(2))?,
            (Some(spec), None) => FischerSpace::from_spec(spec)?,
            (None, None) => return Err(Error::InvalidParameters("give NAME:n or --table FILE --n N".into())),
        };
        Ok(Arc::new(s))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a Fischer space and report on it.
    Space {
        #[command(subcommand)]
        action: SpaceCmd,
    },
    /// Gram determinant and critical values.
    Gram {
        #[command(flatten)]
        space: SpaceArg,
        /// Report the rational critical values.
        #[arg(long)]
        critical: bool,
        /// Also report the radical dimension at this eta.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Close a generating set.
    Close {
        #[command(flatten)]
        space: SpaceArg,
        /// Generators separated by ';', e.g. "b_{1,2}; c_{1,3} + c_{2,4}".
        #[arg(long)]
        gens: String,
        /// symbolic | eta=R
        #[arg(long, default_value = "symbolic")]
        mode: String,
        /// Permit a critical or special eta in evaluated mode.
        #[arg(long)]
        allow_critical: bool,
        /// Compare symbolic and evaluated dimensions at this eta.
        #[arg(long)]
        check: Option<String>,
        /// Write structure constants as CSV.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Eigenspaces and fusion law of an axis.
    Fusion {
        #[command(flatten)]
        space: SpaceArg,
        /// The axis, e.g. "b_{1,2} + b_{3,4}".
        #[arg(long)]
        axis: String,
        /// J or M.
        #[arg(long, default_value = "J")]
        law: String,
        /// Subalgebra generators; default is the whole algebra.
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, default_value = "symbolic")]
        mode: String,
        #[arg(long)]
        allow_critical: bool,
    },
    /// Orbits, fixed and flip subalgebras of a standard flip.
    Flip {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        /// Evaluate at these parameters too (repeatable).
        #[arg(long)]
        eta: Vec<String>,
        /// Skip the closure over Q(eta).
        #[arg(long)]
        no_symbolic: bool,
    },
    /// Type-D configuration census.
    Classify {
        #[arg(long)]
        ambient: String,
        /// Sample this many configurations instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        no_certify: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Also write the flattened buckets as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Points and lines.
    Build(SpaceArg),
    /// Counts and degrees.
    Stats(SpaceArg),
    /// Same as build.
    Export(SpaceArg),
}

/// A report plus any invariant violations found while producing it.
struct Outcome {
    report: Value,
    violations: Vec<String>,
}

impl Outcome {
    fn ok(report: impl Serialize) -> Result<Self> {
        Ok(Outcome { report: serde_json::to_value(report)?, violations: Vec::new() })
    }
}

fn parse_eta(s: &str) -> Result<Rational> {
    parse_rational(s.trim().strip_prefix("eta=").unwrap_or(s.trim()))
}

fn check_mode(space: &FischerSpace, mode: &ScalarMode, allow: bool) -> Result<()> {
    if let ScalarMode::Evaluated(e) = mode {
        if !allow && !is_safe_eta(space, e) {
            return Err(Error::UnsafeEta(e.to_string()));
        }
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Space { action } => match action {
            SpaceCmd::Build(s) | SpaceCmd::Export(s) => Outcome::ok(s.build()?.export()),
            SpaceCmd::Stats(s) => Outcome::ok(s.build()?.stats()),
        },
        Cmd::Gram { space, critical, eta } => {
            let s = space.build()?;
            let mut out = serde_json::Map::new();
            out.insert("space".into(), json!(s.id()));
            if critical {
                out.insert("critical".into(), serde_json::to_value(critical_values(&s))?);
            } else {
                let d = gram_det_bareiss(&s);
                out.insert("det".into(), json!(d.to_string()));
            }
            if let Some(e) = eta {
                let e = parse_eta(&e)?;
                out.insert("eta".into(), json!(e.to_string()));
                out.insert("radical_dim".into(), json!(radical_dim(&s, &e)?));
            }
            Outcome::ok(Value::Object(out))
        }
        Cmd::Close { space, gens, mode, allow_critical, check, structure } => {
            let s = space.build()?;
            let mode: ScalarMode = mode.parse()?;
            check_mode(&s, &mode, allow_critical)?;
            let gens = Generator::parse_list(&s, &gens)?;
            let closure = Closure::new(s.clone(), gens);
            let a = closure.run(&mode)?;
            if let Some(path) = structure {
                a.write_structure_csv(File::create(path)?)?;
            }
            let mut report = serde_json::to_value(a.export())?;
            let mut violations = Vec::new();
            if let Some(e) = check {
                let c = consistency_check(&closure, &parse_eta(&e)?, allow_critical)?;
                if !c.agrees {
                    violations.push(format!("symbolic {} vs evaluated {} at eta={}", c.symbolic_dim, c.evaluated_dim, c.eta));
                }
                report["consistency"] = serde_json::to_value(c)?;
            }
            Ok(Outcome { report, violations })
        }
        Cmd::Fusion { space, axis, law, gens, mode, allow_critical } => {
            let s = space.build()?;
            let law: FusionLaw = law.parse()?;
            let mode: ScalarMode = mode.parse()?;
            check_mode(&s, &mode, allow_critical)?;
            let x = Generator::parse(&s, &axis)?;
            let gens = match gens {
                Some(g) => Some(Generator::parse_list(&s, &g)?),
                None => None,
            };
            let report = match &mode {
                ScalarMode::Symbolic => {
                    let a: Subalgebra<EtaScalar> = match gens {
                        Some(g) => Closure::new(s.clone(), g).symbolic()?,
                        None => Subalgebra::whole(s.clone(), EtaScalar::eta(), mode.clone())?,
                    };
                    verify_axis(&a, &lift(&x.vector), &law)?
                }
                ScalarMode::Evaluated(e) => {
                    let a: Subalgebra<Rational> = match gens {
                        Some(g) => Closure::new(s.clone(), g).evaluated(e)?,
                        None => Subalgebra::whole(s.clone(), e.clone(), mode.clone())?,
                    };
                    verify_axis(&a, &x.vector, &law)?
                }
            };
            let violations =
                report.violations.iter().map(|v| format!("{} * {} has a {} component", v.lambda, v.mu, v.offending_component)).collect();
            Ok(Outcome { report: serde_json::to_value(report)?, violations })
        }
        Cmd::Flip { family, k, eta, no_symbolic } => {
            let kind: FlipKind = family.parse()?;
            let tau = FlipInvolution::standard(kind, k)?;
            let etas = eta.iter().map(|e| parse_eta(e)).collect::<Result<Vec<_>>>()?;
            let opts = FlipReportOptions { symbolic: !no_symbolic, double_entry: !no_symbolic && !etas.is_empty(), etas };
            let r = flip_report(&tau, &opts)?;
            let violations = r.violations();
            Outcome::ok(r).map(|o| Outcome { violations, ..o })
        }
        Cmd::Classify { ambient, sample, seed, eta, no_certify, threads, csv } => {
            let s = Arc::new(FischerSpace::from_spec(&ambient)?);
            let sampling = match sample {
                Some(count) => Sampling::Random { count, seed },
                None => Sampling::Full,
            };
            let eta = eta.map(|e| parse_eta(&e)).transpose()?;
            let opts = ClassifyOptions { eta, sampling, certify: !no_certify, threads };
            let r = classify(s, &opts)?;
            if let Some(path) = csv {
                r.write_csv(File::create(path)?)?;
            }
            let violations = r.violations.clone();
            Outcome::ok(r).map(|o| Outcome { violations, ..o })
        }
    }
}

fn lift(v: &AlgebraVector<Rational>) -> AlgebraVector<EtaScalar> {
    AlgebraVector::from_entries(v.entries().iter().map(|(k, c)| (*k, EtaScalar::from_rational(c))))
}

fn emit(out: &Option<PathBuf>, value: &Value) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => {
            let mut f = File::create(p)?;
            writeln!(f, "{text}")
        }
        None => writeln!(io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(o) => {
            if let Err(e) = emit(&cli.out, &o.report) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if o.violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                for v in &o.violations {
                    eprintln!("violation: {v}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
