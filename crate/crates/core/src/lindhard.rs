//! Lindhard's transverse conductivity in `(x, y, q)` form, the assembly
//! `i·y/x + σ₂`, and row-wise comparison against the kinetic result.

use num_complex::Complex64;
use serde::Serialize;

use crate::degenerate::{evaluate_safe, in_series_regime, quartic_terms, sigma2_deg, sigma_classic_deg, TAYLOR_RADIUS};
use crate::error::Result;
use crate::params::{finite, log_pair, log_ratio, ComplexValue, DegenerateParams};

/// Relative gap below which two curves are said to coincide.
pub const COINCIDENCE_THRESHOLD: f64 = 1e-2;

fn i() -> Complex64 {
    Complex64::i()
}

/// `(3z²/q² + q²/4, log terms, i·3y/16x)` shared by the Lindhard forms.
fn lindhard_pieces(p: &DegenerateParams) -> Result<(Complex64, Complex64, Complex64)> {
    let (z, q) = (p.zc(), p.q());
    let q2 = q * q;
    let h = 0.5 * q2;
    let q5 = q2 * q2 * q;
    let side = |w: Complex64| -> Result<Complex64> {
        let f = q2 - w * w;
        Ok(f * f / q5 * log_pair(w, q)?)
    };
    let poly = 3.0 * z * z / q2 + 0.25 * q2;
    let logs = side(h - z)? + side(h + z)?;
    Ok((poly, logs, i() * (3.0 * p.y() / (16.0 * p.x()))))
}

/// Lindhard conductivity including the gauge summand.
pub fn sigma_lindhard(p: &DegenerateParams) -> Result<ComplexValue> {
    let (poly, logs, pre) = lindhard_pieces(p)?;
    finite(pre * (2.0 * (1.0 + poly) - logs), "lindhard conductivity")
}

/// Lindhard conductivity with the gauge summand `i·y/x` removed.
pub fn sigma2_lindhard(p: &DegenerateParams) -> Result<ComplexValue> {
    let (poly, logs, pre) = lindhard_pieces(p)?;
    finite(pre * (2.0 * (poly - 5.0 / 3.0) - logs), "lindhard quantum summand")
}

/// `σ_tr⁽¹⁾ = i·y/x + σ₂` written out as one bracket; in the small-`q/z`
/// regime it is assembled from the series value of `σ₂`.
pub fn sigma_tr_corrected(p: &DegenerateParams) -> Result<ComplexValue> {
    let gauge = i() * (p.y() / p.x());
    if in_series_regime(p) {
        return finite(gauge + sigma2_deg(p)?.to_complex(), "corrected conductivity");
    }
    let (z, q) = (p.zc(), p.q());
    let q2 = q * q;
    let bracket = 1.0 + 3.0 * z * z / q2 + 0.25 * q2 + quartic_terms(p)?;
    finite(i() * (3.0 * p.y() / (8.0 * p.x())) * bracket, "corrected conductivity")
}

/// `σ_tr − σ_tr⁽¹⁾ = (3y²/4x)[2z/q² + (z²−q²)/q³ · ln((z−q)/(z+q))]`.
pub fn corrected_difference(p: &DegenerateParams) -> Result<ComplexValue> {
    let (x, y, q, z) = (p.x(), p.y(), p.q(), p.zc());
    if (q / z).norm() < TAYLOR_RADIUS {
        // the bracket is the classical part over 3iy/4
        let c = sigma_classic_deg(p)?.to_complex();
        return finite(-i() * (y / x) * c, "closed-form difference");
    }
    let q2 = q * q;
    let bracket = 2.0 * z / q2 + (z * z - q2) / (q2 * q) * log_ratio(z, q)?;
    finite(3.0 * y * y / (4.0 * x) * bracket, "closed-form difference")
}

/// Everything the comparison needs at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub params: DegenerateParams,
    pub sigma_tr: ComplexValue,
    pub sigma_tr_1: ComplexValue,
    pub sigma_classic: ComplexValue,
    pub sigma_l: ComplexValue,
    pub sigma2: ComplexValue,
    pub sigma2_l: ComplexValue,
    pub diff_closed: ComplexValue,
}

impl ComparisonRow {
    pub fn at(p: &DegenerateParams) -> Result<Self> {
        let full = evaluate_safe(p)?;
        Ok(ComparisonRow {
            params: *p,
            sigma_tr: full.total,
            sigma_tr_1: sigma_tr_corrected(p)?,
            sigma_classic: full.classic,
            sigma_l: sigma_lindhard(p)?,
            sigma2: full.sigma2,
            sigma2_l: sigma2_lindhard(p)?,
            diff_closed: corrected_difference(p)?,
        })
    }

    /// `|closed-form difference − (σ_tr − σ_tr⁽¹⁾)|`.
    pub fn difference_residual(&self) -> f64 {
        let direct = self.sigma_tr.to_complex() - self.sigma_tr_1.to_complex();
        (self.diff_closed.to_complex() - direct).norm()
    }

    /// `|σ_tr⁽¹⁾ − (i·y/x + σ₂)|`.
    pub fn assembly_residual(&self) -> f64 {
        let gauge = i() * (self.params.y() / self.params.x());
        (self.sigma_tr_1.to_complex() - gauge - self.sigma2.to_complex()).norm()
    }
}

/// One row per grid point; failures stay in place so the rest continue.
pub fn compare(grid: &[DegenerateParams]) -> Vec<Result<ComparisonRow>> {
    grid.iter().map(ComparisonRow::at).collect()
}

/// `|a − b| / |a|`.
pub fn relative_gap(a: ComplexValue, b: ComplexValue) -> f64 {
    (a.to_complex() - b.to_complex()).norm() / a.abs()
}

/// A claim that curves coincide at one operating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoincidenceCheck {
    pub name: &'static str,
    pub params: DegenerateParams,
    pub gap: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(name: &'static str, x: f64, y: f64, q: f64, gap: impl Fn(&ComparisonRow) -> f64) -> Result<CoincidenceCheck> {
    let params = DegenerateParams::new(x, y, q)?;
    let g = gap(&ComparisonRow::at(&params)?);
    Ok(CoincidenceCheck {
        name,
        params,
        gap: g,
        threshold: COINCIDENCE_THRESHOLD,
        pass: g < COINCIDENCE_THRESHOLD,
    })
}

/// Kinetic vs classical at small `q`, kinetic vs corrected at large `q`,
/// and all three at high frequency.
pub fn coincidence_checks() -> Result<Vec<CoincidenceCheck>> {
    Ok(vec![
        check("small_q", 0.1, 0.01, 0.1, |r| relative_gap(r.sigma_tr, r.sigma_classic))?,
        check("large_q", 0.1, 0.01, 3.0, |r| relative_gap(r.sigma_tr, r.sigma_tr_1))?,
        check("high_frequency", 3.0, 0.01, 2.0, |r| {
            relative_gap(r.sigma_tr, r.sigma_tr_1)
                .max(relative_gap(r.sigma_tr, r.sigma_classic))
                .max(relative_gap(r.sigma_tr_1, r.sigma_classic))
        })?,
    ])
}
