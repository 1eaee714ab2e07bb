//! `kacjordan`: batch access to the catalog, verifiers, gradings and twisted
//! forms. Reports are JSON on stdout with a one-line summary on stderr.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or input
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kac_jordan::algebra::{Simplicity, SimplicityOptions, SuperAlgebra};
use kac_jordan::catalog;
use kac_jordan::descent::{
    k10_twisted_basis, rigid_involutions, rigidity_witness, separate_forms, split_check, twist,
    DescentDatum, QuadraticEtale,
};
use kac_jordan::gradings::{
    classify, gamma_k10, gamma_k3k3, gradings_isomorphic, verify_grading, z2_census, GradedAlgebra,
    GradingLabel,
};
use kac_jordan::group::AbelianGroup;
use kac_jordan::json::{
    algebra_from_json, algebra_to_json, grading_from_json, grading_to_json, matrix_from_json,
    matrix_to_json,
};
use kac_jordan::morphisms::{
    check_morphism, decompose_automorphism, derivations, factor_swap, tau_auto, LinearMap,
};
use kac_jordan::scalars::ScalarDomain;

#[derive(Parser)]
#[command(name = "kacjordan", version, about = "Exact computations with Kac's superalgebra K10 and its relatives")]
struct Cli {
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArg {
    /// Base field: `rational`, `fp:<p>` or `quad:<base>:<d>`.
    #[arg(long, default_value = "rational")]
    field: String,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the structure constants of a catalog algebra.
    Table {
        algebra: String,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Check supercommutativity and the super Jordan identity.
    Verify {
        algebra: String,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Decide simplicity (over the rationals by reduction modulo a prime).
    Simple {
        algebra: String,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 5)]
        prime: u64,
    },
    /// Basis of the even or odd derivations.
    Derivations {
        algebra: String,
        #[arg(long, value_enum, default_value_t = Parity::Even)]
        parity: Parity,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Check that a matrix is an automorphism; for K10 also decompose it.
    CheckAuto {
        algebra: String,
        matrix: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Group gradings of K3×K3 and K10.
    #[command(subcommand)]
    Grading(GradingCommand),
    /// Twisted form of an algebra along F(√d).
    Twist {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Invariant table of two algebras over a prime field.
    Separate {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        census_cap: u128,
    },
    /// Count idempotents by enumeration over a prime field.
    Census {
        algebra: String,
        #[command(flatten)]
        field: FieldArg,
        /// Only count idempotents in the even part.
        #[arg(long)]
        even: bool,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u128,
    },
}

#[derive(Subcommand)]
enum GradingCommand {
    /// Build a Γ1 or Γ2 grading.
    Make {
        #[arg(long, value_enum)]
        algebra: GradedName,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        family: u8,
        /// Free rank of the grading group.
        #[arg(long, default_value_t = 0)]
        rank: usize,
        /// Torsion orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        torsion: Vec<u64>,
        /// First parameter (g1 or g), comma separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        first: Vec<i64>,
        /// Second parameter (g2 or h), comma separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        second: Vec<i64>,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Check the grading axioms.
    Verify {
        algebra: String,
        grading: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Canonical label with a witness automorphism.
    Classify {
        algebra: String,
        grading: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Decide isomorphism of two gradings.
    Compare {
        algebra: String,
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Count Z/2-gradings up to isomorphism over F_q.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = GradedName::K10)]
        algebra: GradedName,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradedName {
    K10,
    K3xk3,
}

impl From<GradedName> for GradedAlgebra {
    fn from(n: GradedName) -> Self {
        match n {
            GradedName::K10 => GradedAlgebra::K10,
            GradedName::K3xk3 => GradedAlgebra::K3Squared,
        }
    }
}

/// A report to print, or a failure classified by exit code.
enum Outcome {
    Ok(Value, String),
    Falsified(Value, String),
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<Outcome, Usage>;

fn domain(field: &FieldArg) -> Result<ScalarDomain, Usage> {
    Ok(field.field.parse()?)
}

fn read_json(path: &Path) -> Result<Value, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// An algebra file, or a report carrying one under `algebra`.
fn read_algebra(path: &Path) -> Result<SuperAlgebra, Usage> {
    let value = read_json(path)?;
    let inner = match value.get("algebra") {
        Some(v) if v.is_object() => v,
        _ => &value,
    };
    Ok(algebra_from_json(inner)?)
}

/// A catalog name, or a path to an algebra JSON file.
fn load_algebra(name: &str, field: &FieldArg) -> Result<SuperAlgebra, Usage> {
    let dom = domain(field)?;
    match catalog::by_name(name, &dom) {
        Some(a) => Ok(a?),
        None if Path::new(name).exists() => read_algebra(Path::new(name)),
        None => Err(Usage(format!(
            "unknown algebra `{name}`; expected one of {} or a JSON file",
            catalog::NAMES.join(", ")
        ))),
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Table { algebra, field } => {
            let a = load_algebra(algebra, field)?;
            let summary = format!("{algebra} over {}: dimension {}", a.domain(), a.dim());
            Ok(Outcome::Ok(algebra_to_json(&a), summary))
        }
        Command::Verify { algebra, field } => {
            let a = load_algebra(algebra, field)?;
            let commutative = a.supercommutativity_failure();
            let jordan = a.check_jordan();
            let report = json!({
                "algebra": algebra,
                "domain": a.domain().descriptor(),
                "jordan": jordan.is_ok(),
                "jordan_violation": jordan.as_ref().err().map(|v| json!({
                    "triple": v.triple,
                    "residual": matrix_to_json(&v.residual),
                })),
                "supercommutative": commutative.is_none(),
                "supercommutativity_violation": commutative,
            });
            if commutative.is_none() && jordan.is_ok() {
                Ok(Outcome::Ok(report, format!("{algebra} is a Jordan superalgebra over {}", a.domain())))
            } else {
                Ok(Outcome::Falsified(report, format!("{algebra} fails the axioms")))
            }
        }
        Command::Simple { algebra, field, prime } => {
            let a = load_algebra(algebra, field)?;
            let opts = SimplicityOptions {
                prime: *prime,
                seed: cli.seed,
                ..SimplicityOptions::default()
            };
            let (verdict, extra) = match a.is_simple(&opts)? {
                Simplicity::Simple { evidence } => ("simple", json!({ "evidence": evidence })),
                Simplicity::NotSimple { ideal } => (
                    "not simple",
                    json!({
                        "ideal": ideal.basis().iter().map(|v| catalog::describe(a.labels(), v)).collect::<Vec<_>>(),
                        "ideal_dim": ideal.dim(),
                    }),
                ),
                Simplicity::ZeroProduct => ("zero product", json!({})),
                Simplicity::Inconclusive { reason } => ("inconclusive", json!({ "reason": reason })),
            };
            let mut report = json!({
                "algebra": algebra,
                "domain": a.domain().descriptor(),
                "simple": verdict == "simple",
                "verdict": verdict,
            });
            for (k, v) in extra.as_object().expect("object") {
                report[k] = v.clone();
            }
            Ok(Outcome::Ok(report, format!("{algebra} over {}: {verdict}", a.domain())))
        }
        Command::Derivations { algebra, parity, field } => {
            let a = load_algebra(algebra, field)?;
            let p = match parity {
                Parity::Even => 0,
                Parity::Odd => 1,
            };
            let basis = derivations(&a, p);
            let report = json!({
                "algebra": algebra,
                "basis": basis.iter().map(|d| matrix_to_json(d.matrix())).collect::<Vec<_>>(),
                "dim": basis.len(),
                "domain": a.domain().descriptor(),
                "parity": if p == 0 { "even" } else { "odd" },
            });
            let summary = format!("{} derivations of {algebra}: dimension {}", report["parity"].as_str().unwrap(), basis.len());
            Ok(Outcome::Ok(report, summary))
        }
        Command::CheckAuto { algebra, matrix, field } => {
            let a = load_algebra(algebra, field)?;
            let m = matrix_from_json(&read_json(matrix)?, a.domain())?;
            let map = LinearMap::even(m);
            let check = check_morphism(&a, &a, &map).and_then(|_| {
                map.inverse()
                    .map(|_| ())
                    .ok_or(kac_jordan::morphisms::MorphismFailure::NotInvertible)
            });
            let mut report = json!({
                "algebra": algebra,
                "automorphism": check.is_ok(),
                "failure": check.as_ref().err().map(|e| e.to_string()),
            });
            if check.is_ok() && GradedAlgebra::detect(&a) == Some(GradedAlgebra::K10) {
                let d = decompose_automorphism(&a, &map);
                report["decomposition"] = match &d {
                    Ok(d) => json!({
                        "f": matrix_to_json(d.f.matrix()),
                        "g": matrix_to_json(d.g.matrix()),
                        "swap": d.swap,
                    }),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                if let Err(e) = d {
                    return Ok(Outcome::Falsified(report, format!("decomposition failed: {e}")));
                }
            }
            match check {
                Ok(()) => Ok(Outcome::Ok(report, format!("automorphism of {algebra}"))),
                Err(e) => Ok(Outcome::Falsified(report, format!("not an automorphism: {e}"))),
            }
        }
        Command::Grading(g) => run_grading(g),
        Command::Twist { algebra, d, field } => run_twist(algebra, d, field),
        Command::Separate {
            first,
            second,
            census_cap,
        } => {
            let a = read_algebra(first)?;
            let b = read_algebra(second)?;
            let opts = SimplicityOptions {
                seed: cli.seed,
                ..SimplicityOptions::default()
            };
            let report = separate_forms(&a, &b, &opts, *census_cap)?;
            let differing = report.differing();
            let verdict = if differing.is_empty() { "inconclusive" } else { "separated" };
            let out = json!({
                "differing": differing,
                "invariants": report.invariants.iter().map(|i| json!({
                    "first": i.left,
                    "name": i.name,
                    "second": i.right,
                })).collect::<Vec<_>>(),
                "verdict": verdict,
            });
            let summary = if differing.is_empty() {
                "inconclusive: all invariants agree".to_string()
            } else {
                format!("not isomorphic: {} differ", differing.join(", "))
            };
            Ok(Outcome::Ok(out, summary))
        }
        Command::Census {
            algebra,
            field,
            even,
            cap,
        } => {
            let a = load_algebra(algebra, field)?;
            let count = a.idempotent_census(*even, *cap)?;
            let out = json!({
                "algebra": algebra,
                "domain": a.domain().descriptor(),
                "even_only": even,
                "idempotents": count.to_string(),
            });
            Ok(Outcome::Ok(out, format!("{count} idempotents in {algebra}")))
        }
    }
}

fn graded(algebra: &str, field: &FieldArg) -> Result<(SuperAlgebra, GradedAlgebra), Usage> {
    let a = load_algebra(algebra, field)?;
    let kind = GradedAlgebra::detect(&a)
        .ok_or_else(|| Usage(format!("`{algebra}` is neither K10 nor K3×K3")))?;
    Ok((a, kind))
}

fn run_grading(command: &GradingCommand) -> Run {
    match command {
        GradingCommand::Make {
            algebra,
            family,
            rank,
            torsion,
            first,
            second,
            field,
        } => {
            let dom = domain(field)?;
            let group = AbelianGroup::new(*rank, torsion.clone())?;
            let x = group.element(first)?;
            let y = group.element(second)?;
            let label = if *family == 1 {
                GradingLabel::First { g1: x, g2: y }
            } else {
                GradingLabel::Second { g: x, h: y }
            };
            let grading = match algebra {
                GradedName::K10 => gamma_k10(&dom, &group, &label)?,
                GradedName::K3xk3 => gamma_k3k3(&dom, &group, &label)?,
            };
            let summary = format!("{label} over {group} with {} components", grading.components().len());
            Ok(Outcome::Ok(grading_to_json(&grading), summary))
        }
        GradingCommand::Verify { algebra, grading, field } => {
            let a = load_algebra(algebra, field)?;
            let g = grading_from_json(&read_json(grading)?, a.domain(), a.dim())?;
            match verify_grading(&a, &g) {
                Ok(()) => Ok(Outcome::Ok(
                    json!({ "error": null, "valid": true }),
                    "grading verified".into(),
                )),
                Err(e) => Ok(Outcome::Falsified(
                    json!({ "error": e.to_string(), "valid": false }),
                    format!("not a grading: {e}"),
                )),
            }
        }
        GradingCommand::Classify { algebra, grading, field } => {
            let (a, _) = graded(algebra, field)?;
            let g = grading_from_json(&read_json(grading)?, a.domain(), a.dim())?;
            if let Err(e) = verify_grading(&a, &g) {
                return Ok(Outcome::Falsified(
                    json!({ "error": e.to_string(), "valid": false }),
                    format!("not a grading: {e}"),
                ));
            }
            let c = classify(&a, &g)?;
            let (first, second) = match &c.label {
                GradingLabel::First { g1, g2 } => (g1, g2),
                GradingLabel::Second { g, h } => (g, h),
            };
            let out = json!({
                "family": c.label.family(),
                "label": c.label.to_string(),
                "normalizer": matrix_to_json(c.normalizer.matrix()),
                "parameters": [first.coords(), second.coords()],
            });
            Ok(Outcome::Ok(out, format!("classified as {}", c.label)))
        }
        GradingCommand::Compare {
            algebra,
            first,
            second,
            field,
        } => {
            let (a, _) = graded(algebra, field)?;
            let x = grading_from_json(&read_json(first)?, a.domain(), a.dim())?;
            let y = grading_from_json(&read_json(second)?, a.domain(), a.dim())?;
            for g in [&x, &y] {
                if let Err(e) = verify_grading(&a, g) {
                    return Ok(Outcome::Falsified(
                        json!({ "error": e.to_string(), "valid": false }),
                        format!("not a grading: {e}"),
                    ));
                }
            }
            let witness = gradings_isomorphic(&a, &x, &y)?;
            let out = json!({
                "isomorphic": witness.is_some(),
                "witness": witness.as_ref().map(|w| matrix_to_json(w.matrix())),
            });
            let summary = if witness.is_some() { "isomorphic" } else { "not isomorphic" };
            Ok(Outcome::Ok(out, summary.into()))
        }
        GradingCommand::Census { q, algebra, budget } => {
            let report = z2_census((*algebra).into(), *q, *budget)?;
            let summary = format!(
                "{} classes from {} involutions in a group of order {}; {} predicted from labels ({})",
                report.classes,
                report.involutions,
                report.group_order,
                report.predicted,
                report.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
            );
            let out = json!({ "classes": report.classes });
            if report.classes == report.predicted {
                Ok(Outcome::Ok(out, summary))
            } else {
                Ok(Outcome::Falsified(out, format!("census disagrees with prediction: {summary}")))
            }
        }
    }
}

/// The involution used for twisting each catalog algebra.
fn involution(name: &str, a: &SuperAlgebra) -> Result<LinearMap, Usage> {
    let dom = a.domain();
    match name {
        "k10" => Ok(tau_auto(dom)),
        "k3xk3" | "jwxjw" => Ok(factor_swap(dom)),
        "k3" | "jw" => Ok(rigid_involutions(dom).pop().expect("two involutions")),
        _ => Err(Usage(format!("no standard involution for `{name}`"))),
    }
}

fn run_twist(algebra: &str, d: &str, field: &FieldArg) -> Run {
    let dom = domain(field)?;
    let a = match catalog::by_name(algebra, &dom) {
        Some(a) => a?,
        None => return Err(Usage(format!("unknown algebra `{algebra}`"))),
    };
    let t = involution(algebra, &a)?;
    let d_value = dom.parse_scalar(d)?;
    let etale = QuadraticEtale::new(&dom, d_value.clone())?;
    let form = twist(&DescentDatum::new(&a, &t, &etale)?)?;
    let jordan = form.algebra.is_supercommutative() && form.algebra.is_jordan_super();
    let split = split_check(&form);
    let n_even = form.algebra.even_indices().len();
    let mut report = json!({
        "d": d_value.to_string(),
        "even_basis": form.algebra.labels()[..n_even],
        "extension": if etale.is_split() { "split" } else { "field" },
        "jordan": jordan,
        "odd_basis": form.algebra.labels()[n_even..],
        "split_check": split.is_ok(),
        "split_error": split.as_ref().err().map(|e| e.to_string()),
    });
    if algebra == "k10" && !etale.is_split() {
        let basis = k10_twisted_basis(&dom, &d_value)?;
        report["even_basis_matches"] = json!(basis.even_matches);
        report["odd_basis_discrepancy"] = json!({
            "corrected_basis_fixed": basis.odd_corrected_fixed,
            "expected_but_not_fixed": basis.odd_not_fixed,
        });
    }
    if matches!(algebra, "k3" | "jw") {
        report["rigid"] = json!(rigidity_witness(&form).is_ok());
    }
    let out = json!({ "algebra": algebra_to_json(&form.algebra), "report": report });
    let ok = jordan
        && split.is_ok()
        && report.get("rigid").is_none_or(|r| r == true)
        && report.get("even_basis_matches").is_none_or(|r| r == true);
    let summary = format!(
        "twist of {algebra} along {}(√{d_value}): {}",
        dom,
        if ok { "verified" } else { "verification failed" }
    );
    Ok(if ok { Outcome::Ok(out, summary) } else { Outcome::Falsified(out, summary) })
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Usage> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, summary, code) = match run(&cli) {
        Ok(Outcome::Ok(v, s)) => (v, s, 0),
        Ok(Outcome::Falsified(v, s)) => (v, s, 1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(Usage(msg)) = emit(&value, cli.out.as_deref()) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    eprintln!("{summary}");
    ExitCode::from(code)
}
