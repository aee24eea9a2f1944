//! Parameter grids and the records evaluated on them.

use rayon::prelude::*;
use unruh_core::analysis::{d_cl1_dq, linspace};
use unruh_core::measures::measure_all;
use unruh_core::model::{final_state_closed_form, ValidityWarning};
use unruh_core::{ChannelParams, InitialStateParams, MeasureReport};

use crate::error::CliError;

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub theta: f64,
    pub q: f64,
    pub nu2: f64,
    pub c_l1: f64,
    pub c_re: f64,
    pub c_tr: f64,
    pub concurrence: f64,
    pub d_cl1_dq: f64,
    /// The swept coupling, when the grid runs over `ν` rather than `ν²`.
    pub nu: Option<f64>,
}

impl SweepRecord {
    pub fn evaluate(point: GridPoint) -> Result<Self, CliError> {
        let GridPoint { theta, channel, nu } = point;
        let rho = final_state_closed_form(theta, channel).map_err(CliError::Numeric)?;
        let MeasureReport {
            c_l1,
            c_re,
            c_tr,
            concurrence,
        } = measure_all(&rho).map_err(CliError::Numeric)?;
        let record = Self {
            theta: theta.theta(),
            q: channel.q(),
            nu2: channel.nu2(),
            c_l1,
            c_re,
            c_tr,
            concurrence,
            d_cl1_dq: d_cl1_dq(theta, channel).map_err(CliError::Numeric)?,
            nu,
        };
        record.validate()?;
        Ok(record)
    }

    /// Values in CSV column order.
    pub fn fields(&self) -> [f64; 8] {
        [
            self.theta,
            self.q,
            self.nu2,
            self.c_l1,
            self.c_re,
            self.c_tr,
            self.concurrence,
            self.d_cl1_dq,
        ]
    }

    pub fn validate(&self) -> Result<(), CliError> {
        MeasureReport {
            c_l1: self.c_l1,
            c_re: self.c_re,
            c_tr: self.c_tr,
            concurrence: self.concurrence,
        }
        .validate()
        .map_err(CliError::Numeric)?;
        if self.fields().iter().any(|v| !v.is_finite()) {
            return Err(CliError::Numeric(unruh_core::Error::Internal(format!(
                "non-finite value in record {self:?}"
            ))));
        }
        Ok(())
    }
}

/// Rows in grid order, plus whether a `nu` column is emitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<SweepRecord>,
    pub with_nu: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub theta: InitialStateParams,
    pub channel: ChannelParams,
    pub nu: Option<f64>,
}

/// Inclusive range sampled at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn samples(&self, name: &str) -> Result<Vec<f64>, CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Usage(format!("{name} range must be finite")));
        }
        if !(self.min < self.max) {
            return Err(CliError::Usage(format!(
                "{name} range needs min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!(
                "{name} range needs at least 2 steps, got {}",
                self.steps
            )));
        }
        Ok(linspace(self.min, self.max, self.steps))
    }
}

pub fn theta_param(theta: f64) -> Result<InitialStateParams, CliError> {
    InitialStateParams::new(theta).map_err(CliError::from_input)
}

/// `q = 1` is the infinite-acceleration limit. It is only evaluated on request.
pub fn channel_param(q: f64, nu2: f64, allow_q1: bool) -> Result<ChannelParams, CliError> {
    if q == 1.0 && !allow_q1 {
        return Err(CliError::Usage(
            "q = 1 is the infinite-acceleration limit; pass --allow-q1 to include it".into(),
        ));
    }
    ChannelParams::new(q, nu2).map_err(CliError::from_input)
}

fn nu_samples(range: Range) -> Result<Vec<f64>, CliError> {
    let nus = range.samples("nu")?;
    if nus[0] < 0.0 {
        return Err(CliError::Usage(format!(
            "nu must be non-negative, got {}",
            nus[0]
        )));
    }
    Ok(nus)
}

pub fn evaluate(points: Vec<GridPoint>, with_nu: bool) -> Result<Dataset, CliError> {
    // Collecting an indexed parallel iterator keeps grid order.
    let records = points
        .into_par_iter()
        .map(SweepRecord::evaluate)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset { records, with_nu })
}

/// Warning for the strongest coupling a grid reaches, if any.
pub fn coupling_warning(nu2_max: f64) -> Option<ValidityWarning> {
    ValidityWarning::check_nu2(nu2_max)
}

pub fn sweep_q(theta: f64, nu2: f64, qs: Range, allow_q1: bool) -> Result<Dataset, CliError> {
    let theta = theta_param(theta)?;
    let points = qs
        .samples("q")?
        .into_iter()
        .map(|q| {
            Ok(GridPoint {
                theta,
                channel: channel_param(q, nu2, allow_q1)?,
                nu: None,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    evaluate(points, false)
}

pub fn sweep_nu(theta: f64, q: f64, nus: Range, allow_q1: bool) -> Result<Dataset, CliError> {
    let theta = theta_param(theta)?;
    let points = nu_samples(nus)?
        .into_iter()
        .map(|nu| {
            Ok(GridPoint {
                theta,
                channel: channel_param(q, nu * nu, allow_q1)?,
                nu: Some(nu),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    evaluate(points, true)
}

/// θ-major grid over `θ × ν` at fixed `q`.
pub fn surface(q: f64, thetas: Range, nus: Range, allow_q1: bool) -> Result<Dataset, CliError> {
    let nus = nu_samples(nus)?;
    let mut points = Vec::new();
    for t in thetas.samples("theta")? {
        let theta = theta_param(t)?;
        for &nu in &nus {
            points.push(GridPoint {
                theta,
                channel: channel_param(q, nu * nu, allow_q1)?,
                nu: Some(nu),
            });
        }
    }
    evaluate(points, true)
}
