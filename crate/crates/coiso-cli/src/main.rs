//! `coiso` — obstruction theory of the coisotropic 4-manifold `Y_alpha` at
//! the command line.
//!
//! Exit codes: 0 solved/unobstructed, 2 usage, 3 obstructed (resonance or
//! zero mode), 4 precision failure, 5 divergent small divisors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use coiso_core::arith::{classify, AlphaArith, AlphaSpec, ClassTag};
use coiso_core::foliation::{gauge_normalize, Connection, FoliatedForm};
use coiso_core::fourier::RadialGrid;
use coiso_core::haefliger::{
    coboundary_test, regular_cover_reduce, CoboundaryVerdict, RegularCover,
};
use coiso_core::probes;
use coiso_core::solver::{
    first_obstruction, mc_continue, witness_liouville, witness_rational, McOutcome, SolveStatus,
    Witness, WitnessTag,
};

const SCHEMA: &str = "coiso/1";

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_OBSTRUCTED: u8 = 3;
const EXIT_PRECISION: u8 = 4;
const EXIT_DIVERGENT: u8 = 5;

#[derive(Parser)]
#[command(name = "coiso", version, about = "Small-divisor obstruction theory of Y_alpha")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the slope: Rational / Diophantine / LiouvilleLike.
    Classify(ClassifyArgs),
    /// Build a witness and test its first obstruction class.
    Obstruction(ObstructionArgs),
    /// Drive the deformation equation through orders t^2..t^K.
    Continue(ContinueArgs),
    /// Integrate a 2-form over the leaves and test coboundary membership.
    Reduce(ReduceArgs),
}

/// Slope selection: exactly one of these.
#[derive(Args)]
struct AlphaArgs {
    /// Rational slope P/Q, e.g. --rational 2/3
    #[arg(long, value_name = "P/Q")]
    rational: Option<String>,
    /// Quadratic irrational (A+√B)/C, e.g. --quadratic 1 5 2
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    quadratic: Option<Vec<i64>>,
    /// Liouville series Σ BASE^{-i!}, e.g. --liouville 10 3
    #[arg(long, num_args = 2, value_names = ["BASE", "TERMS"])]
    liouville: Option<Vec<u32>>,
    /// Plain decimal with its stated precision, e.g. --decimal 0.6180339887
    #[arg(long, value_name = "DIGITS")]
    decimal: Option<String>,
}

impl AlphaArgs {
    fn to_spec(&self) -> anyhow::Result<AlphaSpec> {
        let picks = [
            self.rational.is_some(),
            self.quadratic.is_some(),
            self.liouville.is_some(),
            self.decimal.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if picks != 1 {
            anyhow::bail!("pick exactly one of --rational, --quadratic, --liouville, --decimal");
        }
        if let Some(r) = &self.rational {
            let (p, q) = r
                .split_once('/')
                .ok_or_else(|| anyhow::anyhow!("--rational expects P/Q, got '{r}'"))?;
            return Ok(AlphaSpec::rational(p.trim().parse()?, q.trim().parse()?)?);
        }
        if let Some(v) = &self.quadratic {
            return Ok(AlphaSpec::quadratic(v[0], v[1], v[2])?);
        }
        if let Some(v) = &self.liouville {
            return Ok(coiso_core::arith::liouville_constant(v[0], v[1])?);
        }
        Ok(AlphaSpec::decimal(self.decimal.as_ref().unwrap())?)
    }
}

/// Run configuration shared by the pipelines.
#[derive(Args)]
struct CommonArgs {
    /// Output directory for JSON/CSV artifacts.
    #[arg(long, default_value = ".", env = "COISO_OUT_DIR")]
    out: PathBuf,
    /// Mode budget for random forms.
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    /// Radial grid nodes.
    #[arg(long, default_value_t = 128)]
    radial: usize,
    /// Solver tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Transverse connection: the global cutoff or the flat chart one.
    #[arg(long, default_value = "cutoff", value_parser = ["cutoff", "flat"])]
    connection: String,
    /// Half-width of the cutoff transition band around r = 1/(2√2).
    #[arg(long, value_name = "EPS")]
    epsilon_band: Option<f64>,
}

impl CommonArgs {
    fn validate(&self) -> anyhow::Result<()> {
        if self.truncation < 8 {
            anyhow::bail!("--truncation must be ≥ 8");
        }
        if self.radial < 8 {
            anyhow::bail!("--radial must be ≥ 8");
        }
        if !(self.tol > 0.0) {
            anyhow::bail!("--tol must be positive");
        }
        Ok(())
    }

    fn grid(&self) -> anyhow::Result<RadialGrid> {
        Ok(RadialGrid::new(0.05, 0.70, self.radial)?)
    }

    fn connection(&self, grid: RadialGrid) -> anyhow::Result<Connection> {
        Ok(match (self.connection.as_str(), self.epsilon_band) {
            ("flat", _) => Connection::flat(grid),
            (_, Some(eps)) => Connection::with_epsilon(grid, eps)?,
            _ => Connection::cutoff(grid),
        })
    }

    fn write(&self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn write_json(&self, name: &str, v: &Value) -> anyhow::Result<PathBuf> {
        self.write(name, &format!("{}\n", serde_json::to_string_pretty(v)?))
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Convergent depth for the exponent fit.
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Liouville threshold on the measured exponent.
    #[arg(long, default_value_t = 10.0)]
    k_max: f64,
}

#[derive(Args)]
struct ObstructionArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Witness choice: the canonical one for the slope class, or random.
    #[arg(long, default_value = "auto", value_parser = ["auto", "random"])]
    witness: String,
}

#[derive(Args)]
struct ContinueArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Truncation order K.
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Seed form: auto picks the witness for obstructed classes and a
    /// random closed form otherwise.
    #[arg(long, default_value = "auto", value_parser = ["auto", "witness", "random", "zero"])]
    gamma: String,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Path to a degree-2 foliated form JSON file.
    #[arg(long, value_name = "FILE")]
    form: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Obstruction(a) => cmd_obstruction(a),
        Cmd::Continue(a) => cmd_continue(a),
        Cmd::Reduce(a) => cmd_reduce(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}

fn exit_for_error(e: &anyhow::Error) -> u8 {
    if let Some(coiso_core::Error::Precision { .. }) = e.downcast_ref::<coiso_core::Error>() {
        EXIT_PRECISION
    } else {
        EXIT_USAGE
    }
}

fn exit_for_status(status: &SolveStatus) -> u8 {
    match status {
        SolveStatus::Solved { .. } => EXIT_OK,
        SolveStatus::ObstructedZeroMode { .. } | SolveStatus::ObstructedResonance { .. } => {
            EXIT_OBSTRUCTED
        }
        SolveStatus::DivergentSmallDivisor { .. } => EXIT_DIVERGENT,
    }
}

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<u8> {
    args.common.validate()?;
    let spec = args.alpha.to_spec()?;
    let classification = classify(&spec, args.depth, args.k_max)?;
    let label = match classification.tag {
        ClassTag::Rational => "Rational".to_string(),
        ClassTag::Diophantine => format!(
            "Diophantine k≈{:.2}",
            classification.k_est.unwrap_or(f64::NAN)
        ),
        ClassTag::LiouvilleLike => "LiouvilleLike".to_string(),
    };
    println!("{label}");
    args.common.write_json(
        "classify.json",
        &json!({
            "schema": SCHEMA,
            "alpha": spec.to_json(),
            "classification": classification.to_json(),
        }),
    )?;
    Ok(EXIT_OK)
}

/// Build the form whose obstruction is tested: the canonical witness for
/// the rational and Liouville slopes, a seeded random closed form (gauge
/// normalized when the slope is diophantine) otherwise.
fn build_witness(
    spec: &AlphaSpec,
    arith: &AlphaArith,
    grid: RadialGrid,
    mode: &str,
    truncation: usize,
    seed: u64,
    tol: f64,
) -> anyhow::Result<(FoliatedForm, Value)> {
    if mode == "auto" {
        match spec {
            AlphaSpec::Rational { p, q } => {
                let w = witness_rational(
                    i64::try_from(p).map_err(|_| anyhow::anyhow!("witness needs a small p"))?,
                    i64::try_from(q).map_err(|_| anyhow::anyhow!("witness needs a small q"))?,
                    grid,
                )?;
                return Ok((w.gamma.clone(), witness_tag_json(&w)));
            }
            AlphaSpec::Liouville { .. } => {
                let w = witness_liouville(spec, 3, grid)?;
                return Ok((w.gamma.clone(), witness_tag_json(&w)));
            }
            _ => {}
        }
    }
    let modes = truncation.min(32);
    let gamma = probes::random_closed_one_form(&mut probes::rng(seed), &grid, arith, modes)?;
    let classification = classify(spec, 12, coiso_core::arith::DEFAULT_K_MAX)?;
    let gamma = if classification.tag == ClassTag::Diophantine {
        gauge_normalize(&gamma, arith, tol)?.0
    } else {
        gamma
    };
    Ok((
        gamma,
        json!({"kind": "random-closed", "seed": seed, "modes": modes}),
    ))
}

fn witness_tag_json(w: &Witness) -> Value {
    match &w.tag {
        WitnessTag::Rational { p, q } => json!({"kind": "rational", "p": p, "q": q}),
        WitnessTag::Liouville { convergents } => json!({
            "kind": "liouville",
            "convergents": convergents.iter().map(|(p, q)| {
                json!({
                    "p": coiso_core::fourier::json::big_to_number(p),
                    "q": coiso_core::fourier::json::big_to_number(q),
                })
            }).collect::<Vec<_>>(),
        }),
    }
}

fn decay_csv(series: &coiso_core::fourier::SparseFourierSeries) -> String {
    let mut out = String::from("abs_index,coeff_abs\n");
    for (n, c) in series.axis_magnitudes(coiso_core::fourier::Axis::Theta1) {
        out.push_str(&format!("{n},{c:e}\n"));
    }
    out
}

fn cmd_obstruction(args: ObstructionArgs) -> anyhow::Result<u8> {
    args.common.validate()?;
    let spec = args.alpha.to_spec()?;
    let arith = AlphaArith::new(spec.clone())?;
    let grid = args.common.grid()?;
    let conn = args.common.connection(grid)?;
    let cover = RegularCover::three_charts();
    let (gamma, witness_json) = build_witness(
        &spec,
        &arith,
        grid,
        &args.witness,
        args.common.truncation,
        args.common.seed,
        args.common.tol,
    )?;
    let (_, cls, report) = first_obstruction(&gamma, &arith, &conn, &cover, args.common.tol)?;
    println!("first obstruction: {}", report.status.name());
    args.common.write_json(
        "obstruction.json",
        &json!({
            "schema": SCHEMA,
            "alpha": spec.to_json(),
            "witness": witness_json,
            "report": report.to_json(),
        }),
    )?;
    args.common.write("modes.csv", &report.rows_to_csv())?;
    args.common
        .write("decay.csv", &decay_csv(&cls.representative))?;
    Ok(exit_for_status(&report.status))
}

fn cmd_continue(args: ContinueArgs) -> anyhow::Result<u8> {
    args.common.validate()?;
    if args.order < 2 {
        anyhow::bail!("--order must be ≥ 2");
    }
    let spec = args.alpha.to_spec()?;
    let arith = AlphaArith::new(spec.clone())?;
    let grid = args.common.grid()?;
    let conn = args.common.connection(grid)?;
    let gamma_mode = match args.gamma.as_str() {
        "auto" => match spec {
            AlphaSpec::Rational { .. } | AlphaSpec::Liouville { .. } => "witness",
            _ => "random",
        },
        other => other,
    };
    let (gamma, gamma_json) = match gamma_mode {
        "zero" => (FoliatedForm::zero(1, grid), json!({"kind": "zero"})),
        "witness" => build_witness(
            &spec,
            &arith,
            grid,
            "auto",
            args.common.truncation,
            args.common.seed,
            args.common.tol,
        )?,
        _ => build_witness(
            &spec,
            &arith,
            grid,
            "random",
            args.common.truncation,
            args.common.seed,
            args.common.tol,
        )?,
    };
    match mc_continue(&gamma, &arith, &conn, args.order, args.common.tol)? {
        McOutcome::Solved {
            solution,
            residuals,
            ..
        } => {
            let mut csv = String::from("order,residual\n");
            for (order, r) in &residuals {
                csv.push_str(&format!("{order},{r:e}\n"));
            }
            args.common.write("residuals.csv", &csv)?;
            for (i, g) in solution.coefficients().iter().enumerate() {
                args.common
                    .write_json(&format!("gamma_{}.json", i + 1), &g.to_json())?;
            }
            args.common.write_json(
                "continue.json",
                &json!({
                    "schema": SCHEMA,
                    "alpha": spec.to_json(),
                    "gamma": gamma_json,
                    "order": args.order,
                    "status": "Continued",
                    "residuals": residuals
                        .iter()
                        .map(|(o, r)| json!({"order": o, "residual": r}))
                        .collect::<Vec<_>>(),
                }),
            )?;
            let worst = residuals.iter().map(|(_, r)| *r).fold(0.0f64, f64::max);
            println!(
                "continued to order {} (worst residual {worst:.2e})",
                args.order
            );
            Ok(EXIT_OK)
        }
        McOutcome::Obstructed(fail) => {
            args.common.write_json(
                "continue.json",
                &json!({
                    "schema": SCHEMA,
                    "alpha": spec.to_json(),
                    "gamma": gamma_json,
                    "order": args.order,
                    "status": "Obstructed",
                    "failing_order": fail.order,
                    "report": fail.report.to_json(),
                }),
            )?;
            args.common.write("modes.csv", &fail.report.rows_to_csv())?;
            println!(
                "obstructed at order {}: {}",
                fail.order,
                fail.report.status.name()
            );
            Ok(exit_for_status(&fail.report.status))
        }
    }
}

fn cmd_reduce(args: ReduceArgs) -> anyhow::Result<u8> {
    args.common.validate()?;
    let spec = args.alpha.to_spec()?;
    let text = fs::read_to_string(&args.form)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", args.form.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let form = FoliatedForm::from_json(&value)?;
    if form.form_degree() != 2 {
        anyhow::bail!("reduce expects a degree-2 form");
    }
    let cover = RegularCover::three_charts();
    let cls = regular_cover_reduce(&form, &cover, &spec)?;
    let verdict = coboundary_test(&cls, args.common.tol)?;
    let (label, code, verdict_json) = match &verdict {
        CoboundaryVerdict::InSpan(c) => (
            "InSpan".to_string(),
            EXIT_OK,
            json!({
                "tag": "InSpan",
                "solving_function": coiso_core::fourier::json::series_to_json(c),
            }),
        ),
        CoboundaryVerdict::NotInSpan(report) => (
            format!("NotInSpan ({})", report.status.name()),
            exit_for_status(&report.status),
            json!({"tag": "NotInSpan", "report": report.to_json()}),
        ),
    };
    println!("{label}");
    args.common.write_json(
        "reduce.json",
        &json!({
            "schema": SCHEMA,
            "alpha": spec.to_json(),
            "class": cls.to_json(),
            "verdict": verdict_json,
        }),
    )?;
    Ok(code)
}
