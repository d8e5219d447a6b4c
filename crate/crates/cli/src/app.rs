//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use qsigma_core::general::{sigma2_general_2d, ErrorEstimates};
use qsigma_core::params::epsilon_tr;
use qsigma_core::{ComplexValue, Error, DEFAULT_TOL};

use crate::compare::{product_grid, run_compare, DEFAULT_Q, DEFAULT_X, DEFAULT_Y};
use crate::figure::{compute, FigureSpec, DEFAULT_POINTS};
use crate::model::{degenerate_params, evaluate, general_params, Model, Point};
use crate::output::{error_code, exit_code, ErrorReport, EXIT_INVALID};
use crate::sweep::{run_sweep, sweep_csv, sweep_svg, Scale, Selector, SweepSpec, Vary};

pub const TOL_ENV: &str = "QSIGMA_TOL";

#[derive(Parser, Debug)]
#[command(name = "qsigma", version, about = "Transverse conductivity of a collisional quantum plasma")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one point and print a JSON record.
    Eval(EvalArgs),
    /// Sweep one parameter and print CSV.
    Sweep(SweepArgs),
    /// Print the data behind one of the ten figures as CSV.
    Figure(FigureArgs),
    /// Compare kinetic, corrected, classical and Lindhard values on a grid.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct ModelArg {
    /// Model, positional or via --model.
    #[arg(value_enum)]
    pub model_pos: Option<Model>,
    #[arg(long, value_enum)]
    pub model: Option<Model>,
}

impl ModelArg {
    fn resolve(&self) -> std::result::Result<Model, String> {
        match (self.model_pos, self.model) {
            (Some(a), Some(b)) if a != b => Err(format!("conflicting models {} and {}", a.name(), b.name())),
            (a, b) => Ok(a.or(b).unwrap_or(Model::Degenerate)),
        }
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    /// Degeneracy μ/(k_B T); general model only.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Adds ε_tr for this ω_p/ω.
    #[arg(long, allow_hyphen_values = true)]
    pub wp_over_omega: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, value_enum)]
    pub vary: Vary,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Quantity drawn in the SVG, `part_quantity` with part re|im|abs and
    /// quantity total|classic|quant|sigma1|sigma2.
    #[arg(long, default_value = "abs_total")]
    pub output: Selector,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub id: u8,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Comma-separated values; the grid is their product.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Failure {
    code: &'static str,
    message: String,
    exit: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: error_code(&e),
            message: e.to_string(),
            exit: exit_code(&e),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: "usage",
        message: message.into(),
        exit: EXIT_INVALID,
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: "io",
        message: e.to_string(),
        exit: 1,
    }
}

/// `--tol`, else the environment override, else the library default.
fn tolerance(flag: Option<f64>, env: Option<&str>) -> std::result::Result<f64, Failure> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("{TOL_ENV}={s:?} is not a number")))?,
        (None, None) => DEFAULT_TOL,
    };
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Failure::from(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive and finite",
        }))
    }
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(io_failure),
        None => stdout.write_all(text.as_bytes()).map_err(io_failure),
    }
}

#[derive(Serialize)]
struct EvalRecord {
    model: &'static str,
    params: Point,
    tol: f64,
    classic: ComplexValue,
    sigma1: ComplexValue,
    sigma2: ComplexValue,
    quant: ComplexValue,
    total: ComplexValue,
    method: &'static str,
    error_estimates: Option<ErrorEstimates>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma2_2d: Option<ComplexValue>,
    /// `|σ₂(1D) − σ₂(2D)|`
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma2_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon_tr: Option<ComplexValue>,
}

fn cmd_eval(a: &EvalArgs, env_tol: Option<&str>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let model = a.model.resolve().map_err(usage)?;
    let tol = tolerance(a.tol, env_tol)?;
    let pt = Point {
        x: a.x,
        y: a.y,
        q: a.q,
        alpha: a.alpha,
    };
    let r = evaluate(model, &pt, tol)?;
    let (sigma2_2d, sigma2_delta) = if model == Model::General {
        let s2 = sigma2_general_2d(&general_params(&pt)?, tol)?;
        let delta = (s2.to_complex() - r.sigma2.to_complex()).norm();
        (Some(s2), Some(delta))
    } else {
        (None, None)
    };
    let epsilon = match a.wp_over_omega {
        Some(w) if model == Model::General => Some(epsilon_tr(r.total.to_complex(), w, &general_params(&pt)?)?),
        Some(w) => Some(epsilon_tr(r.total.to_complex(), w, &degenerate_params(&pt)?)?),
        None => None,
    };
    let rec = EvalRecord {
        model: model.name(),
        params: pt,
        tol,
        classic: r.classic,
        sigma1: r.sigma1,
        sigma2: r.sigma2,
        quant: r.quant,
        total: r.total,
        method: r.method,
        error_estimates: r.error_estimates,
        sigma2_2d,
        sigma2_delta,
        epsilon_tr: epsilon,
    };
    let mut text = serde_json::to_string_pretty(&rec).map_err(|e| usage(e.to_string()))?;
    text.push('\n');
    emit(&text, &a.out, stdout)
}

fn cmd_sweep(a: &SweepArgs, env_tol: Option<&str>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let model = a.model.resolve().map_err(usage)?;
    let tol = tolerance(a.tol, env_tol)?;
    let need = |name: &'static str, v: Option<f64>, varied: bool| -> std::result::Result<f64, Failure> {
        match (v, varied) {
            (Some(_), true) => Err(usage(format!("--{name} is the swept parameter; give --from/--to instead"))),
            (None, true) => Ok(f64::NAN),
            (Some(v), false) => Ok(v),
            (None, false) => Err(usage(format!("--{name} is required when it is not swept"))),
        }
    };
    let fixed = Point {
        x: need("x", a.x, a.vary == Vary::X)?,
        y: need("y", a.y, a.vary == Vary::Y)?,
        q: need("q", a.q, a.vary == Vary::Q)?,
        alpha: match (a.vary, model) {
            (Vary::Alpha, _) => {
                need("alpha", a.alpha, true)?;
                None
            }
            (_, Model::General) => Some(need("alpha", a.alpha, false)?),
            _ => a.alpha,
        },
    };
    let spec = SweepSpec {
        model,
        vary: a.vary,
        from: a.from,
        to: a.to,
        points: a.points,
        scale: a.scale,
        fixed,
        output: a.output,
    };
    let res = run_sweep(&spec, tol)?;
    emit(&sweep_csv(&spec, tol, &res), &a.out, stdout)?;
    if let Some(path) = &a.svg {
        let label = format!("{:?}_{:?}", a.output.part, a.output.quantity).to_lowercase();
        std::fs::write(path, sweep_svg(&spec, &res, &label)).map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_figure(a: &FigureArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let data = compute(&FigureSpec::new(a.id)?, a.points)?;
    emit(&data.csv(), &a.out, stdout)?;
    if let Some(path) = &a.svg {
        std::fs::write(path, data.svg()).map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write) -> std::result::Result<bool, Failure> {
    let pick = |v: &Vec<f64>, d: &[f64]| if v.is_empty() { d.to_vec() } else { v.clone() };
    let grid = product_grid(&pick(&a.x, &DEFAULT_X), &pick(&a.y, &DEFAULT_Y), &pick(&a.q, &DEFAULT_Q))?;
    let out = run_compare(&grid)?;
    emit(&out.csv, &a.out, stdout)?;
    Ok(out.oracles_pass)
}

fn echo(cli: &Cli) -> serde_json::Value {
    match &cli.command {
        Command::Eval(a) => json!({
            "command": "eval", "model": a.model.resolve().ok().map(Model::name),
            "x": a.x, "y": a.y, "q": a.q, "alpha": a.alpha, "tol": a.tol,
        }),
        Command::Sweep(a) => json!({
            "command": "sweep", "model": a.model.resolve().ok().map(Model::name),
            "vary": format!("{:?}", a.vary).to_lowercase(), "from": a.from, "to": a.to, "points": a.points,
            "x": a.x, "y": a.y, "q": a.q, "alpha": a.alpha, "tol": a.tol,
        }),
        Command::Figure(a) => json!({"command": "figure", "id": a.id, "points": a.points}),
        Command::Compare(a) => json!({"command": "compare", "x": a.x, "y": a.y, "q": a.q}),
    }
}

fn report(f: &Failure, param_echo: serde_json::Value, stderr: &mut dyn Write) -> i32 {
    let r = ErrorReport {
        code: f.code,
        message: f.message.clone(),
        param_echo,
    };
    let _ = writeln!(stderr, "{}", serde_json::to_string(&r).unwrap_or_default());
    f.exit
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, env_tol: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
            return report(&usage(e.to_string().trim_end()), json!({ "argv": argv }), stderr);
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, env_tol, stdout).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a, env_tol, stdout).map(|_| true),
        Command::Figure(a) => cmd_figure(a, stdout).map(|_| true),
        Command::Compare(a) => cmd_compare(a, stdout),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => report(&f, echo(&cli), stderr),
    }
}
