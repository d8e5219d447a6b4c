//! Model selection and the uniform record every command prints.

use clap::ValueEnum;
use serde::Serialize;

use qsigma_core::degenerate::evaluate_safe;
use qsigma_core::general::{sigma_tr_general_with_errors, ErrorEstimates};
use qsigma_core::lindhard::{sigma2_lindhard, sigma_lindhard, sigma_tr_corrected};
use qsigma_core::{degenerate, ComplexValue, DegenerateParams, Error, GeneralParams, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Degenerate kinetic result, closed forms with series/quadrature fallbacks.
    Degenerate,
    /// Arbitrary degeneracy `alpha`, by quadrature.
    General,
    /// Lindhard's formula.
    Lindhard,
    /// Gauge term plus the kinetic quantum summand.
    Corrected,
    /// Classical (ħ-free) degenerate part only.
    Classical,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Degenerate => "degenerate",
            Model::General => "general",
            Model::Lindhard => "lindhard",
            Model::Corrected => "corrected",
            Model::Classical => "classical",
        }
    }

    /// What the classic/s1/s2 columns hold for models without the kinetic split.
    pub fn column_note(self) -> Option<&'static str> {
        match self {
            Model::Lindhard => Some("classic = gauge term i*y/x, s1 = 0, s2 = lindhard quantum summand"),
            Model::Corrected => Some("classic = gauge term i*y/x, s1 = 0, s2 = kinetic sigma2"),
            Model::Classical => Some("s1 = s2 = 0; total = classic"),
            _ => None,
        }
    }
}

/// One parameter point; `alpha` is only meaningful for the general model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub q: f64,
    pub alpha: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Record {
    pub classic: ComplexValue,
    pub sigma1: ComplexValue,
    pub sigma2: ComplexValue,
    pub quant: ComplexValue,
    pub total: ComplexValue,
    pub method: &'static str,
    pub error_estimates: Option<ErrorEstimates>,
}

fn gauge(p: &DegenerateParams) -> Result<ComplexValue> {
    ComplexValue::new(0.0, p.y() / p.x())
}

fn split(classic: ComplexValue, s2: ComplexValue, total: ComplexValue) -> Record {
    Record {
        classic,
        sigma1: ComplexValue::ZERO,
        sigma2: s2,
        quant: s2,
        total,
        method: "closed_form",
        error_estimates: None,
    }
}

pub fn degenerate_params(pt: &Point) -> Result<DegenerateParams> {
    if let Some(a) = pt.alpha {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: a,
            reason: "alpha only applies to the general model",
        });
    }
    DegenerateParams::new(pt.x, pt.y, pt.q)
}

pub fn general_params(pt: &Point) -> Result<GeneralParams> {
    let alpha = pt.alpha.ok_or(Error::InvalidParameter {
        name: "alpha",
        value: f64::NAN,
        reason: "the general model needs --alpha",
    })?;
    GeneralParams::new(alpha, pt.x, pt.y, pt.q)
}

pub fn evaluate(model: Model, pt: &Point, tol: f64) -> Result<Record> {
    if model == Model::General {
        let (b, e) = sigma_tr_general_with_errors(&general_params(pt)?, tol)?;
        return Ok(Record {
            classic: b.classic,
            sigma1: b.sigma1,
            sigma2: b.sigma2,
            quant: b.quant,
            total: b.total,
            method: "quadrature",
            error_estimates: Some(e),
        });
    }
    let p = degenerate_params(pt)?;
    Ok(match model {
        Model::Degenerate => {
            let s = evaluate_safe(&p)?;
            Record {
                classic: s.classic,
                sigma1: s.sigma1,
                sigma2: s.sigma2,
                quant: s.quant,
                total: s.total,
                method: s.method.as_str(),
                error_estimates: None,
            }
        }
        Model::Lindhard => split(gauge(&p)?, sigma2_lindhard(&p)?, sigma_lindhard(&p)?),
        Model::Corrected => split(gauge(&p)?, degenerate::sigma2_deg(&p)?, sigma_tr_corrected(&p)?),
        Model::Classical => {
            let c = degenerate::sigma_classic_deg(&p)?;
            Record {
                quant: ComplexValue::ZERO,
                ..split(c, ComplexValue::ZERO, c)
            }
        }
        Model::General => unreachable!("handled above"),
    })
}
