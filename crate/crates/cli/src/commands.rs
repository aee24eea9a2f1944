use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use unruh_core::analysis::{frozen_scan, sudden_death_nu, sudden_death_q, SuddenDeathResult};

use crate::angle::parse_angle;
use crate::error::CliError;
use crate::output::{emit, render, sig10, to_json, Format};
use crate::sweep::{self, coupling_warning, theta_param, Dataset, Range};

/// Coherence and entanglement of a detector pair with one accelerated detector.
#[derive(Debug, Parser)]
#[command(name = "unruh", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the acceleration parameter q at fixed theta and nu2.
    SweepQ {
        /// Radians, or a multiple of pi such as `pi/4`.
        #[arg(long, value_parser = parse_angle)]
        theta: f64,
        #[arg(long)]
        nu2: f64,
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = 0.999)]
        max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Permit q = 1 (requires nu2 > 0).
        #[arg(long)]
        allow_q1: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep the coupling nu at fixed theta and q. Adds a `nu` column.
    SweepNu {
        #[arg(long, value_parser = parse_angle)]
        theta: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = 0.05)]
        max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        allow_q1: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Grid over theta x nu at fixed q, theta-major. Adds a `nu` column.
    Surface {
        #[arg(long, default_value_t = 0.9999)]
        q: f64,
        #[arg(long, value_parser = parse_angle, default_value = "0")]
        theta_min: f64,
        #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
        theta_max: f64,
        #[arg(long, default_value_t = 50)]
        theta_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        nu_min: f64,
        #[arg(long, default_value_t = 0.05)]
        nu_max: f64,
        #[arg(long, default_value_t = 50)]
        nu_steps: usize,
        #[arg(long)]
        allow_q1: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan theta x nu2 for points where l1 coherence does not depend on q.
    /// Exits with 4 when the frozen set is not exactly the two axes.
    FrozenScan {
        #[arg(long, value_parser = parse_angle, default_value = "0")]
        theta_min: f64,
        #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
        theta_max: f64,
        #[arg(long, default_value_t = 25)]
        theta_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        nu2_min: f64,
        #[arg(long, default_value_t = 0.1)]
        nu2_max: f64,
        #[arg(long, default_value_t = 25)]
        nu2_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        q_min: f64,
        #[arg(long, default_value_t = 0.99)]
        q_max: f64,
        #[arg(long, default_value_t = 101)]
        q_steps: usize,
        #[arg(long, default_value_t = unruh_core::analysis::FROZEN_TOLERANCE)]
        tol: f64,
        /// JSON report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold where concurrence reaches zero: q* for a given nu2, or nu* for a given q.
    SuddenDeath {
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, conflicts_with = "q", required_unless_present = "q")]
        nu2: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        /// Print a JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write the datasets behind one figure into a directory.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Figure 1 panels: `(name, θ, ν²)`, swept over `q ∈ [0, 0.999]`.
pub const FIG1_PANELS: [(&str, f64, f64); 4] = [
    ("fig1a", FRAC_PI_4, 0.01),
    ("fig1b", FRAC_PI_4, 0.0225),
    ("fig1c", FRAC_PI_4, 0.04),
    ("fig1d", FRAC_PI_6, 0.04),
];
pub const FIG1_Q: (f64, f64, usize) = (0.0, 0.999, 200);
/// Figure 2 runs at a single, extreme acceleration.
pub const FIG2_Q: f64 = 0.9999;
pub const FIG2_NU: (f64, f64) = (0.0, 0.05);

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SweepQ {
            theta,
            nu2,
            min,
            max,
            steps,
            allow_q1,
            output,
        } => {
            warn_coupling(nu2);
            let data = sweep::sweep_q(theta, nu2, Range::new(min, max, steps), allow_q1)?;
            write_dataset(&data, &output)
        }
        Command::SweepNu {
            theta,
            q,
            min,
            max,
            steps,
            allow_q1,
            output,
        } => {
            warn_coupling(max * max);
            let data = sweep::sweep_nu(theta, q, Range::new(min, max, steps), allow_q1)?;
            write_dataset(&data, &output)
        }
        Command::Surface {
            q,
            theta_min,
            theta_max,
            theta_steps,
            nu_min,
            nu_max,
            nu_steps,
            allow_q1,
            output,
        } => {
            warn_coupling(nu_max * nu_max);
            let data = sweep::surface(
                q,
                Range::new(theta_min, theta_max, theta_steps),
                Range::new(nu_min, nu_max, nu_steps),
                allow_q1,
            )?;
            write_dataset(&data, &output)
        }
        Command::FrozenScan {
            theta_min,
            theta_max,
            theta_steps,
            nu2_min,
            nu2_max,
            nu2_steps,
            q_min,
            q_max,
            q_steps,
            tol,
            out,
        } => run_frozen_scan(
            Range::new(theta_min, theta_max, theta_steps),
            Range::new(nu2_min, nu2_max, nu2_steps),
            Range::new(q_min, q_max, q_steps),
            tol,
            out.as_deref(),
        ),
        Command::SuddenDeath {
            theta,
            nu2,
            q,
            json,
        } => run_sudden_death(theta, nu2, q, json),
        Command::Reproduce {
            figure,
            out,
            format,
        } => reproduce(figure, &out, format),
    }
}

fn warn_coupling(nu2_max: f64) {
    if let Some(w) = coupling_warning(nu2_max) {
        eprintln!("warning: {w}");
    }
}

fn write_dataset(data: &Dataset, output: &OutputArgs) -> Result<(), CliError> {
    emit(&render(data, output.format)?, output.out.as_deref())
}

fn run_frozen_scan(
    thetas: Range,
    nu2s: Range,
    qs: Range,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let thetas = thetas.samples("theta")?;
    for &t in &thetas {
        theta_param(t)?;
    }
    let nu2s = nu2s.samples("nu2")?;
    let qs = qs.samples("q")?;
    for &nu2 in &nu2s {
        for &q in [qs[0], qs[qs.len() - 1]].iter() {
            if q >= 1.0 {
                return Err(CliError::Usage("frozen scan needs q < 1".into()));
            }
            sweep::channel_param(q, nu2, false)?;
        }
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tol must be positive, got {tol}")));
    }
    let scan = frozen_scan(&thetas, &nu2s, &qs, tol).map_err(CliError::Numeric)?;
    emit(&to_json(&scan)?, out)?;
    let summary = format!(
        "{} of {} grid points frozen; max |dC_l1/dq| elsewhere = {}",
        scan.frozen_points.len(),
        scan.grid.len(),
        sig10(scan.max_abs_derivative_elsewhere)
    );
    if scan.matches_boundary_prediction() {
        eprintln!("{summary}; matches the boundary prediction");
        Ok(())
    } else {
        Err(CliError::FrozenMismatch(summary))
    }
}

#[derive(Serialize)]
struct SuddenDeathReport {
    /// `q` or `nu`.
    parameter: &'static str,
    theta: f64,
    /// The fixed parameter, `nu2` or `q`.
    fixed: f64,
    threshold: Option<f64>,
    bracket: (f64, f64),
    iterations: usize,
    warning: Option<String>,
}

fn run_sudden_death(
    theta: f64,
    nu2: Option<f64>,
    q: Option<f64>,
    json: bool,
) -> Result<(), CliError> {
    let t = theta_param(theta)?;
    let (parameter, fixed, result): (_, _, SuddenDeathResult) = match (nu2, q) {
        (Some(nu2), None) => (
            "q",
            nu2,
            sudden_death_q(t, nu2).map_err(CliError::from_input)?,
        ),
        (None, Some(q)) => (
            "nu",
            q,
            sudden_death_nu(t, q).map_err(CliError::from_input)?,
        ),
        _ => return Err(CliError::Usage("give exactly one of --nu2 or --q".into())),
    };
    let warning = result.warning.map(|w| w.to_string());
    if json {
        let report = SuddenDeathReport {
            parameter,
            theta,
            fixed,
            threshold: result.threshold,
            bracket: result.bracket,
            iterations: result.iterations,
            warning,
        };
        return emit(&to_json(&report)?, None);
    }
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    let text = match (parameter, result.threshold) {
        (_, None) => format!(
            "no finite sudden death: concurrence stays positive for every q in [0, 1) at nu2 = {fixed}\n"
        ),
        ("q", Some(q_star)) => format!(
            "q* = {} at nu2 = {fixed}, bracket [{}, {}] after {} bisection steps\n",
            sig10(q_star),
            sig10(result.bracket.0),
            sig10(result.bracket.1),
            result.iterations
        ),
        (_, Some(nu_star)) => format!(
            "nu* = {} (nu*^2 = {}) at q = {fixed}, closed form\n",
            sig10(nu_star),
            sig10(nu_star * nu_star)
        ),
    };
    emit(text.as_bytes(), None)
}

fn reproduce(figure: Figure, dir: &Path, format: Format) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut jobs: Vec<(&str, Dataset)> = Vec::new();
    match figure {
        Figure::Fig1 => {
            let (lo, hi, steps) = FIG1_Q;
            for (name, theta, nu2) in FIG1_PANELS {
                jobs.push((
                    name,
                    sweep::sweep_q(theta, nu2, Range::new(lo, hi, steps), false)?,
                ));
            }
        }
        Figure::Fig2 => {
            let (lo, hi) = FIG2_NU;
            jobs.push((
                "fig2_surface",
                sweep::surface(
                    FIG2_Q,
                    Range::new(0.0, std::f64::consts::FRAC_PI_2, 50),
                    Range::new(lo, hi, 50),
                    false,
                )?,
            ));
            jobs.push((
                "fig2_nu",
                sweep::sweep_nu(FRAC_PI_4, FIG2_Q, Range::new(lo, hi, 200), false)?,
            ));
        }
    }
    for (name, data) in jobs {
        let path = dir.join(format!("{name}.{}", format.extension()));
        emit(&render(&data, format)?, Some(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}
