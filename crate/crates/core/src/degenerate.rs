//! Degenerate (zero-temperature) plasma: closed forms in `z = x + iy` and `q`,
//! the equivalent `t ∈ [−1, 1]` quadrature form, small-`q` series and a
//! dispatching evaluator.
//!
//! The closed forms carry `1/q³` and `1/q⁵` weights on logarithms whose
//! leading terms cancel. When `|q/z|` is small the same quantities are summed
//! from their exact Taylor series in `u = q/z` (and `v = q²/(2z)` for the
//! quantum part), which keeps full precision down to `q → 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{finite, log_pair, log_ratio, ComplexValue, DegenerateParams};
use crate::quad::{integrate_with, QuadOptions};
use crate::DEFAULT_TOL;

/// Below this `|q/z|` the classical and `σ₁` parts are summed as series.
pub const TAYLOR_RADIUS: f64 = 0.1;
/// Below this `|q/z| + |q²/(2z)|` the quantum parts are summed as series.
pub const SERIES_RADIUS: f64 = 0.4;
/// Distance from a logarithmic branch point at which [`evaluate_safe`] switches to quadrature.
pub const KOHN_GUARD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Series,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
        }
    }
}

/// Conductivity ratios `σ/σ₀` with the path that produced them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegenerateSigma {
    pub classic: ComplexValue,
    pub sigma1: ComplexValue,
    pub sigma2: ComplexValue,
    pub quant: ComplexValue,
    pub total: ComplexValue,
    pub method: Method,
}

impl DegenerateSigma {
    fn assemble(classic: Complex64, sigma1: Complex64, quant: Complex64, method: Method) -> Result<Self> {
        Ok(DegenerateSigma {
            classic: finite(classic, "classical part")?,
            sigma1: finite(sigma1, "sigma1")?,
            sigma2: finite(quant - sigma1, "sigma2")?,
            quant: finite(quant, "quantum part")?,
            total: finite(classic + quant, "total")?,
            method,
        })
    }
}

fn i() -> Complex64 {
    Complex64::i()
}

struct Vars {
    x: f64,
    y: f64,
    q: f64,
    z: Complex64,
}

impl Vars {
    fn new(p: &DegenerateParams) -> Self {
        Vars {
            x: p.x(),
            y: p.y(),
            q: p.q(),
            z: p.zc(),
        }
    }

    fn u(&self) -> Complex64 {
        self.q / self.z
    }

    fn series_measure(&self) -> f64 {
        let u = self.u().norm();
        u + 0.5 * self.q * u
    }

    /// `ln((z−q)/(z+q))`
    fn l(&self) -> Result<Complex64> {
        log_ratio(self.z, self.q)
    }

    /// The two four-factor logarithms shared by σ₂, σ_quant and σ_tr, each
    /// assembled from `ln(w + q) − ln(w − q)` with `w = z ± q²/2`.
    fn quartic_logs(&self) -> Result<(Complex64, Complex64)> {
        let h = 0.5 * self.q * self.q;
        let minus = log_pair(self.z - h, self.q)?;
        let plus = log_pair(self.z + h, self.q)?;
        Ok((minus - plus, -minus - plus))
    }

    /// Log terms common to σ₂, σ_quant and σ_tr (without prefactor).
    fn quartic_terms(&self) -> Result<Complex64> {
        let (z, q) = (self.z, self.q);
        let q2 = q * q;
        let a = z * z - q2 + 0.25 * q2 * q2;
        let (l1, l2) = self.quartic_logs()?;
        Ok((a * a + z * z * (q2 * q2)) / (2.0 * q2 * q2 * q) * l1 + z / (q2 * q) * a * l2)
    }

    fn quantum_prefactor(&self) -> Complex64 {
        i() * (3.0 * self.y / (8.0 * self.x))
    }
}

fn classic_closed(v: &Vars) -> Result<Complex64> {
    let (z, q, y) = (v.z, v.q, v.y);
    let q2 = q * q;
    Ok(i() * 0.75 * y * (2.0 * z / q2 + (z * z - q2) / (q2 * q) * v.l()?))
}

fn classic_taylor(v: &Vars) -> Complex64 {
    // (iy/z) Σ 3u^{2m}/((2m+1)(2m+3))
    let u2 = v.u() * v.u();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for m in 0..200 {
        let m = m as f64;
        let term = pow * (3.0 / ((2.0 * m + 1.0) * (2.0 * m + 3.0)));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        pow *= u2;
    }
    i() * v.y / v.z * sum
}

fn sigma1_closed(v: &Vars) -> Result<Complex64> {
    let (z, q) = (v.z, v.q);
    let q2 = q * q;
    let bracket = 1.0 - 1.5 * z * z / q2 - 0.75 * z / (q2 * q) * (z * z - q2) * v.l()?;
    Ok(i() * (v.y / v.x) * bracket)
}

fn sigma1_taylor(v: &Vars) -> Complex64 {
    // −i(3y/x) Σ u^{2m+2}/((2m+3)(2m+5))
    let u2 = v.u() * v.u();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = u2;
    for m in 0..200 {
        let m = m as f64;
        let term = pow / ((2.0 * m + 3.0) * (2.0 * m + 5.0));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        pow *= u2;
    }
    -i() * (3.0 * v.y / v.x) * sum
}

/// Exact double series of the third `t`-integral in `u = q/z`, `v = q²/(2z)`:
/// `i(3y/16x) u² Σ_{n≥n0} v^{2n} Σ_j C(2n+1+2j, 2j) M_{2j} u^{2j}`,
/// `M_k = ∫(1−t²)² t^k dt`. `n0 = 0` gives σ₂, `n0 = 1` gives σ₁ + σ₂.
fn quartic_series(v: &Vars, n0: usize) -> Complex64 {
    let u = v.u();
    let w = 0.5 * v.q * u;
    let u2 = u * u;
    let w2 = w * w;
    let moment = |j: usize| {
        let j = j as f64;
        16.0 / ((2.0 * j + 1.0) * (2.0 * j + 3.0) * (2.0 * j + 5.0))
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut wpow = w2.powu(n0 as u32);
    for n in n0..400 {
        let m = (2 * n + 1) as f64;
        let mut inner = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        let mut upow = Complex64::new(1.0, 0.0);
        for j in 0..2000 {
            let term = upow * (binom * moment(j));
            inner += term;
            if j > 2 && term.norm() <= 1e-18 * inner.norm() {
                break;
            }
            let k = (2 * j) as f64;
            binom *= (m + k + 1.0) * (m + k + 2.0) / ((k + 1.0) * (k + 2.0));
            upow *= u2;
        }
        let block = wpow * inner;
        total += block;
        if n > n0 && block.norm() <= 1e-18 * total.norm() {
            break;
        }
        wpow *= w2;
    }
    i() * (3.0 * v.y / (16.0 * v.x)) * u2 * total
}

fn sigma2_closed(v: &Vars) -> Result<Complex64> {
    let (z, q) = (v.z, v.q);
    let q2 = q * q;
    let bracket = -5.0 / 3.0 + 3.0 * z * z / q2 + 0.25 * q2 + v.quartic_terms()?;
    Ok(v.quantum_prefactor() * bracket)
}

fn quant_closed(v: &Vars) -> Result<Complex64> {
    let (z, q) = (v.z, v.q);
    let q2 = q * q;
    let bracket = 1.0 - z * z / q2 + 0.25 * q2 - 2.0 * z / (q2 * q) * (z * z - q2) * v.l()?
        + v.quartic_terms()?;
    Ok(v.quantum_prefactor() * bracket)
}

fn total_closed(v: &Vars) -> Result<Complex64> {
    let (z, q, x, y) = (v.z, v.q, v.x, v.y);
    let q2 = q * q;
    let bracket = 1.0 + z * Complex64::new(3.0 * x, -y) / q2 + 0.25 * q2
        - i() * (2.0 * y) / (q2 * q) * (z * z - q2) * v.l()?
        + v.quartic_terms()?;
    Ok(v.quantum_prefactor() * bracket)
}

fn classic_accurate(v: &Vars) -> Result<Complex64> {
    if v.u().norm() < TAYLOR_RADIUS {
        Ok(classic_taylor(v))
    } else {
        classic_closed(v)
    }
}

fn sigma1_accurate(v: &Vars) -> Result<Complex64> {
    if v.u().norm() < TAYLOR_RADIUS {
        Ok(sigma1_taylor(v))
    } else {
        sigma1_closed(v)
    }
}

fn quant_accurate(v: &Vars) -> Result<Complex64> {
    if v.series_measure() < SERIES_RADIUS {
        Ok(quartic_series(v, 1))
    } else {
        quant_closed(v)
    }
}

/// Quartic log terms of σ₂ and σ_tr without prefactor.
pub(crate) fn quartic_terms(p: &DegenerateParams) -> Result<Complex64> {
    Vars::new(p).quartic_terms()
}

/// Whether the quantum parts are summed from their series at `p`.
pub(crate) fn in_series_regime(p: &DegenerateParams) -> bool {
    Vars::new(p).series_measure() < SERIES_RADIUS
}

/// Classical (ħ-free) part: `(3i/4)[2yz/q² + y(z²−q²)/q³ · ln((z−q)/(z+q))]`.
pub fn sigma_classic_deg(p: &DegenerateParams) -> Result<ComplexValue> {
    finite(classic_accurate(&Vars::new(p))?, "classical part")
}

/// First quantum summand `σ₁`.
pub fn sigma1_deg(p: &DegenerateParams) -> Result<ComplexValue> {
    finite(sigma1_accurate(&Vars::new(p))?, "sigma1")
}

/// Second quantum summand `σ₂`.
pub fn sigma2_deg(p: &DegenerateParams) -> Result<ComplexValue> {
    let v = Vars::new(p);
    let s = if v.series_measure() < SERIES_RADIUS {
        quartic_series(&v, 0)
    } else {
        sigma2_closed(&v)?
    };
    finite(s, "sigma2")
}

/// Quantum part `σ₁ + σ₂` as one closed form.
pub fn sigma_quant_deg(p: &DegenerateParams) -> Result<ComplexValue> {
    finite(quant_accurate(&Vars::new(p))?, "quantum part")
}

/// The combined closed form for `σ_tr`, evaluated literally (no series switch).
pub fn sigma_tr_closed(p: &DegenerateParams) -> Result<ComplexValue> {
    finite(total_closed(&Vars::new(p))?, "total")
}

/// Full breakdown from the closed forms.
pub fn sigma_tr_deg(p: &DegenerateParams) -> Result<DegenerateSigma> {
    let v = Vars::new(p);
    DegenerateSigma::assemble(
        classic_accurate(&v)?,
        sigma1_accurate(&v)?,
        quant_accurate(&v)?,
        Method::ClosedForm,
    )
}

/// The three `t`-integrals of the equivalent quadrature form, in order
/// classical, σ₁, σ₂.
pub fn quadrature_terms(p: &DegenerateParams, tol: f64) -> Result<[Complex64; 3]> {
    let v = Vars::new(p);
    let (x, y, q, z) = (v.x, v.y, v.q, v.z);
    let h = 0.5 * q * q;
    let pole = x / q;
    let opts = QuadOptions::relative(tol).with_hints([pole, (x - h) / q, (x + h) / q]);
    let lin = |t: f64| q * t - z;
    let c = integrate_with(|t| (1.0 - t * t) / lin(t), -1.0, 1.0, &opts)?;
    let s1 = integrate_with(|t| t * (1.0 - t * t) / lin(t), -1.0, 1.0, &opts)?;
    let s2 = integrate_with(
        |t| {
            let w = lin(t);
            let a = 1.0 - t * t;
            a * a / (w * w - h * h)
        },
        -1.0,
        1.0,
        &opts,
    )?;
    Ok([
        -i() * (0.75 * y) * c.value,
        i() * (3.0 * y * q / (4.0 * x)) * s1.value,
        i() * (3.0 * y * q * q / (16.0 * x)) * s2.value,
    ])
}

/// Breakdown from the quadrature form.
pub fn sigma_tr_deg_quadrature(p: &DegenerateParams, tol: f64) -> Result<DegenerateSigma> {
    let [c, s1, s2] = quadrature_terms(p, tol)?;
    DegenerateSigma::assemble(c, s1, s1 + s2, Method::Quadrature)
}

/// Two-term small-`q` expansion of the quantum part,
/// `i(y/x)[q⁶/(20z⁴) + q⁸/(14z⁶)]`.
pub fn sigma_quant_series(p: &DegenerateParams) -> Result<ComplexValue> {
    let v = Vars::new(p);
    let z2 = v.z * v.z;
    let q6 = v.q.powi(6);
    let s = i() * (v.y / v.x) * (q6 / (20.0 * z2 * z2) + q6 * v.q * v.q / (14.0 * z2 * z2 * z2));
    finite(s, "quantum series")
}

/// Smallest distance from `z` to a branch point of the logarithms.
pub fn kohn_distance(p: &DegenerateParams) -> f64 {
    let (z, q) = (p.zc(), p.q());
    let h = 0.5 * q * q;
    [q, q - h, q + h, h - q]
        .iter()
        .map(|s| (z - s).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Dispatching evaluator: quadrature next to Kohn points, series at small
/// `|q/z|`, closed forms elsewhere. The method tag records the path.
pub fn evaluate_safe(p: &DegenerateParams) -> Result<DegenerateSigma> {
    let v = Vars::new(p);
    if kohn_distance(p) < KOHN_GUARD {
        return sigma_tr_deg_quadrature(p, DEFAULT_TOL);
    }
    let closed = if v.series_measure() < SERIES_RADIUS {
        classic_accurate(&v).and_then(|c| {
            let s1 = sigma1_accurate(&v)?;
            DegenerateSigma::assemble(c, s1, quartic_series(&v, 1), Method::Series)
        })
    } else {
        sigma_tr_deg(p)
    };
    match closed {
        Err(Error::Pole(_)) | Err(Error::NonFinite(_)) => sigma_tr_deg_quadrature(p, DEFAULT_TOL),
        other => other,
    }
}
