use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordermotion::aspect::{elongation_squared, subset_aspect_ratios};
use ordermotion::motion::{linear_cost, plan_even_d, plan_theorem1, OddPlanOptions};
use ordermotion::scalar::{format_scalar, parse_scalar};
use ordermotion::subsets::binomial;
use ordermotion::{
    build_blowup, discretized_cost, estimate_measure, non_elongated, order_type, theorem3_experiment, verify_blowup,
    Error, ExperimentConfig, MotionPlan, PointTuple,
};
use serde::Serialize;
use serde_json::{json, Value};

const THREADS_ENV: &str = "ORDERMOTION_THREADS";

#[derive(Parser)]
#[command(name = "ordermotion", version, about = "Order types and orientation-change counts of moving point tuples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Point tuple JSON files (`-` for stdin); repeat for pairs
    #[arg(short, long = "input", required = true)]
    inputs: Vec<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orientation of every (d+1)-subset
    Ordertype {
        #[command(flatten)]
        io: Common,
    },
    /// Orientation changes along the linear motion P -> P'
    Cost {
        #[command(flatten)]
        io: Common,
        /// Also try the target -P' behind the scaling by -I (even d)
        #[arg(long)]
        mirror_branch: bool,
        /// Use the (d/2)·C(n, d+1) planner and check its bound
        #[arg(long)]
        theorem1: bool,
        /// Write the per-subset flip ledger here as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        tries: usize,
    },
    /// Motion meeting the (d/2)·C(n, d+1) bound
    Plan {
        #[command(flatten)]
        io: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        tries: usize,
    },
    /// Cloud blow-up of a planar same-order-type pair, with verification
    Blowup {
        #[command(flatten)]
        io: Common,
        /// Points per cloud
        #[arg(short, long)]
        m: usize,
        /// Random one-point-per-cloud selections to verify
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Good-rotation measure estimate and rotation-sampling experiment
    Goodrot {
        #[command(flatten)]
        io: Common,
        /// Number of Haar rotations
        #[arg(short = 'N', long = "samples")]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Comma-separated (d+1)-subset for the measure estimate; default the first one
        #[arg(long)]
        subset: Option<String>,
        /// Aspect-ratio cut-off B; default the 75th percentile
        #[arg(short = 'B', long = "bound")]
        b: Option<f64>,
        /// Require both tuples to be alpha-non-elongated (rational, e.g. 3/2)
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Aspect ratios of all simplices and the elongation check
    Aspect {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Compare the exact linear cost with sampled orientation tracking
    Oracle {
        #[command(flatten)]
        io: Common,
        /// Initial grid cells on t in (0, 1)
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Lib(e) => match e {
                Error::Parse(_)
                | Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::ShapeMismatch { .. }
                | Error::ParityViolation(_)
                | Error::ZeroScaling(_) => 2,
                Error::InvariantBreach(_) => 4,
                _ => 3,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_tuple(path: &Path) -> CliResult<PointTuple> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_inputs(io: &Common, want: usize) -> CliResult<Vec<PointTuple>> {
    if io.inputs.len() != want {
        return Err(CliError::Input(format!("expected {want} input file(s), got {}", io.inputs.len())));
    }
    io.inputs.iter().map(|p| read_tuple(p)).collect()
}

fn write_out(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

fn envelope(command: &str, params: Value, result: impl Serialize) -> CliResult<String> {
    let v = json!({ "command": command, "params": params, "result": result });
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table<R: Serialize>(rows: impl IntoIterator<Item = R>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

fn subset_label(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

fn inputs_param(io: &Common) -> Value {
    json!(io.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>())
}

fn parse_alpha(alpha: &Option<String>) -> CliResult<Option<ordermotion::Scalar>> {
    alpha.as_deref().map(parse_scalar).transpose().map_err(CliError::from)
}

fn check_bound(plan: &MotionPlan) -> CliResult<()> {
    if plan.meets_half_bound() {
        Ok(())
    } else {
        Err(Error::InvariantBreach(format!("total {} exceeds (d/2)·C(n, d+1) = {}", plan.total, plan.bound())).into())
    }
}

fn cmd_ordertype(io: &Common) -> CliResult<String> {
    let [p] = <[PointTuple; 1]>::try_from(read_inputs(io, 1)?).unwrap();
    let ot = order_type(&p)?;
    if let Some(subset) = ot.first_degenerate() {
        return Err(Error::Degenerate { subset }.into());
    }
    match io.format {
        Format::Json => envelope("ordertype", json!({ "inputs": inputs_param(io) }), &ot),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                subset: String,
                sign: i8,
            }
            csv_table(p.subsets().zip(ot.signs()).map(|(s, o)| Row { subset: subset_label(&s), sign: o.as_i8() }))
        }
    }
}

fn emit_plan(command: &str, io: &Common, params: Value, plan: &MotionPlan) -> CliResult<String> {
    match io.format {
        Format::Json => envelope(command, params, plan),
        Format::Csv => Ok(plan.ledger_csv()),
    }
}

fn cmd_cost(
    io: &Common,
    mirror_branch: bool,
    theorem1: bool,
    csv_path: Option<&Path>,
    seed: u64,
    tries: usize,
) -> CliResult<String> {
    let [p, q] = <[PointTuple; 2]>::try_from(read_inputs(io, 2)?).unwrap();
    let plan = if theorem1 {
        let plan = plan_theorem1(&p, &q, OddPlanOptions { tries, seed })?;
        check_bound(&plan)?;
        plan
    } else if mirror_branch {
        if p.dim() % 2 == 1 {
            return Err(Error::Precondition("the -P' branch needs even d".into()).into());
        }
        plan_even_d(&p, &q)?
    } else {
        linear_cost(&p, &q)?
    };
    if let Some(path) = csv_path {
        write_out(Some(path), &plan.ledger_csv())?;
    }
    let params = json!({
        "inputs": inputs_param(io),
        "mirror_branch": mirror_branch,
        "theorem1": theorem1,
        "seed": seed,
        "tries": tries,
    });
    emit_plan("cost", io, params, &plan)
}

fn cmd_plan(io: &Common, seed: u64, tries: usize) -> CliResult<String> {
    let [p, q] = <[PointTuple; 2]>::try_from(read_inputs(io, 2)?).unwrap();
    let plan = plan_theorem1(&p, &q, OddPlanOptions { tries, seed })?;
    check_bound(&plan)?;
    emit_plan("plan", io, json!({ "inputs": inputs_param(io), "seed": seed, "tries": tries }), &plan)
}

fn cmd_blowup(io: &Common, m: usize, samples: usize, seed: u64) -> CliResult<String> {
    let [q, qp] = <[PointTuple; 2]>::try_from(read_inputs(io, 2)?).unwrap();
    let result = build_blowup(&q, &qp, m)?;
    let report = verify_blowup(&result, &q, &qp, samples, seed)?;
    if !report.all_pass {
        return Err(Error::InvariantBreach(format!("blow-up verification failed: {report:?}")).into());
    }
    let params = json!({ "inputs": inputs_param(io), "m": m, "samples": samples, "seed": seed });
    envelope("blowup", params, json!({ "blowup": result, "verification": report }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_goodrot(
    io: &Common,
    samples: usize,
    seed: u64,
    subset: Option<&str>,
    b: Option<f64>,
    alpha: &Option<String>,
) -> CliResult<String> {
    let [p, q] = <[PointTuple; 2]>::try_from(read_inputs(io, 2)?).unwrap();
    p.check_same_shape(&q)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("-N must be positive".into()).into());
    }
    let d = p.dim();
    let subset: Vec<usize> = match subset {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| CliError::Input(format!("subset entry {t:?}: {e}"))))
            .collect::<CliResult<_>>()?,
        None => (0..=d).collect(),
    };
    if subset.len() != d + 1 || subset.iter().any(|&i| i >= p.len()) {
        return Err(CliError::Input(format!("subset must list {} indices below {}", d + 1, p.len())));
    }
    let measure = estimate_measure(&p.select(&subset), &q.select(&subset), samples, seed)?;
    let experiment = if d == 2 {
        let cfg = ExperimentConfig { rotations: samples, b, seed, alpha: parse_alpha(alpha)? };
        Some(theorem3_experiment(&p, &q, &cfg)?)
    } else {
        None
    };
    let params = json!({
        "inputs": inputs_param(io),
        "samples": samples,
        "seed": seed,
        "subset": subset,
        "b": b,
        "alpha": alpha,
    });
    match io.format {
        Format::Json => envelope(
            "goodrot",
            params,
            json!({
                "estimate": measure.estimate,
                "half_width": measure.half_width,
                "measure": measure,
                "best_cost": experiment.as_ref().map(|e| e.best),
                "experiment": experiment,
            }),
        ),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                rotation: usize,
                cost: u64,
            }
            let costs = experiment.map(|e| e.costs).unwrap_or_default();
            csv_table(costs.into_iter().enumerate().map(|(rotation, cost)| Row { rotation, cost }))
        }
    }
}

fn cmd_aspect(io: &Common, alpha: &Option<String>) -> CliResult<String> {
    let [p] = <[PointTuple; 1]>::try_from(read_inputs(io, 1)?).unwrap();
    let ratios = subset_aspect_ratios(&p)?;
    let alpha_v = parse_alpha(alpha)?;
    let non_elong = alpha_v.as_ref().map(|a| non_elongated(&p, a)).transpose()?;
    match io.format {
        Format::Json => {
            let subsets: Vec<String> = p.subsets().map(|s| subset_label(&s)).collect();
            envelope(
                "aspect",
                json!({ "inputs": inputs_param(io), "alpha": alpha }),
                json!({
                    "subsets": subsets,
                    "aspect_ratios": ratios,
                    "elongation_squared": format_scalar(&elongation_squared(&p)?),
                    "non_elongated": non_elong,
                }),
            )
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                subset: String,
                aspect: f64,
                aspect_squared: String,
            }
            csv_table(p.subsets().zip(&ratios).map(|(s, a)| Row {
                subset: subset_label(&s),
                aspect: a.value,
                aspect_squared: format_scalar(&a.squared),
            }))
        }
    }
}

fn cmd_oracle(io: &Common, steps: usize) -> CliResult<String> {
    let [p, q] = <[PointTuple; 2]>::try_from(read_inputs(io, 2)?).unwrap();
    let exact = linear_cost(&p, &q)?;
    let sampled = discretized_cost(&p, &q, steps)?;
    if exact.ledger != sampled.ledger {
        return Err(Error::InvariantBreach("discretized ledger differs from the exact one".into()).into());
    }
    match io.format {
        Format::Json => envelope(
            "oracle",
            json!({ "inputs": inputs_param(io), "steps": steps }),
            json!({
                "exact_total": exact.total,
                "discretized_total": sampled.total,
                "agree": true,
                "subsets": binomial(p.len(), p.dim() + 1),
                "cells": sampled.cells,
                "ledger": exact.ledger,
            }),
        ),
        Format::Csv => Ok(exact.ledger_csv()),
    }
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::Input(format!("{THREADS_ENV} must be positive")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let (io, body) = match &cli.command {
        Command::Ordertype { io } => (io, cmd_ordertype(io)?),
        Command::Cost { io, mirror_branch, theorem1, csv, seed, tries } => {
            (io, cmd_cost(io, *mirror_branch, *theorem1, csv.as_deref(), *seed, *tries)?)
        }
        Command::Plan { io, seed, tries } => (io, cmd_plan(io, *seed, *tries)?),
        Command::Blowup { io, m, samples, seed } => (io, cmd_blowup(io, *m, *samples, *seed)?),
        Command::Goodrot { io, samples, seed, subset, b, alpha } => {
            (io, cmd_goodrot(io, *samples, *seed, subset.as_deref(), *b, alpha)?)
        }
        Command::Aspect { io, alpha } => (io, cmd_aspect(io, alpha)?),
        Command::Oracle { io, steps } => (io, cmd_oracle(io, *steps)?),
    };
    write_out(io.output.as_deref(), &body)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
