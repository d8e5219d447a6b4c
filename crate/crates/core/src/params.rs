//! Parameter records, normalization conversions and branch-stable logarithms.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite complex number. Every public evaluator returns one of these.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexValue { re, im })
        } else {
            Err(Error::NonFinite(format!("({re}, {im})")))
        }
    }

    pub fn from_complex(c: Complex64) -> Result<Self> {
        Self::new(c.re, c.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(self) -> f64 {
        self.to_complex().norm()
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        v.to_complex()
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

pub(crate) fn finite(c: Complex64, what: &str) -> Result<ComplexValue> {
    ComplexValue::from_complex(c).map_err(|_| Error::NonFinite(format!("{what} at {c}")))
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(name, v, "must be finite"));
    }
    if v <= 0.0 {
        return Err(Error::invalid(name, v, "must be strictly positive"));
    }
    Ok(())
}

/// Fermi-normalized frequency, collision rate and wave number:
/// `x = ω/(k_F v_F)`, `y = ν/(k_F v_F)`, `q = k/k_F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegenerateParams {
    x: f64,
    y: f64,
    q: f64,
}

impl DegenerateParams {
    pub fn new(x: f64, y: f64, q: f64) -> Result<Self> {
        check_positive("x", x)?;
        check_positive("y", y)?;
        check_positive("q", q)?;
        Ok(DegenerateParams { x, y, q })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `z = x + iy`.
    pub fn z(&self) -> ComplexValue {
        ComplexValue {
            re: self.x,
            im: self.y,
        }
    }

    pub(crate) fn zc(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.x, self.y, q)
    }

    pub fn with_x(&self, x: f64) -> Result<Self> {
        Self::new(x, self.y, self.q)
    }
}

/// Thermal-normalized `(x, y, q)` plus the degeneracy parameter `alpha = μ/(k_B T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneralParams {
    alpha: f64,
    x: f64,
    y: f64,
    q: f64,
}

impl GeneralParams {
    pub fn new(alpha: f64, x: f64, y: f64, q: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid("alpha", alpha, "must be finite"));
        }
        check_positive("x", x)?;
        check_positive("y", y)?;
        check_positive("q", q)?;
        Ok(GeneralParams { alpha, x, y, q })
    }

    /// Build from the kinetic variables `(ωτ, k₁, d)`; inverse of [`Normalized::kinetic_aux`].
    pub fn from_kinetic(alpha: f64, omega_tau: f64, k1: f64, d: f64) -> Result<Self> {
        let (x, y, q) = KineticAux { omega_tau, k1, d }.to_ratios()?;
        Self::new(alpha, x, y, q)
    }

    /// Thermal-normalized point equivalent to a Fermi-normalized one at degeneracy `alpha > 0`.
    pub fn from_fermi(alpha: f64, p: &DegenerateParams) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::invalid("alpha", alpha, "Fermi mapping needs alpha > 0"));
        }
        let s = alpha.sqrt();
        Self::new(alpha, p.x * alpha, p.y * alpha, p.q * s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn z(&self) -> ComplexValue {
        ComplexValue {
            re: self.x,
            im: self.y,
        }
    }
}

/// Kinetic variables: `ωτ`, `k₁ = k·l` and the quantum shift `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KineticAux {
    pub omega_tau: f64,
    pub k1: f64,
    pub d: f64,
}

impl KineticAux {
    pub fn from_ratios(x: f64, y: f64, q: f64) -> Result<Self> {
        if y == 0.0 || !y.is_finite() {
            return Err(Error::invalid("y", y, "collision frequency must be nonzero"));
        }
        Ok(KineticAux {
            omega_tau: x / y,
            k1: q / y,
            d: q * q / (2.0 * y),
        })
    }

    /// Inverse map back to `(x, y, q)`.
    pub fn to_ratios(&self) -> Result<(f64, f64, f64)> {
        if !(self.k1 > 0.0) || !(self.d > 0.0) {
            return Err(Error::invalid("k1", self.k1, "k1 and d must be positive"));
        }
        let y = 2.0 * self.d / (self.k1 * self.k1);
        Ok((self.omega_tau * y, y, self.k1 * y))
    }

    /// `1 − iωτ`.
    pub fn a(&self) -> Complex64 {
        Complex64::new(1.0, -self.omega_tau)
    }
}

/// Common view of both parameter records.
pub trait Normalized {
    fn x(&self) -> f64;
    fn y(&self) -> f64;
    fn q(&self) -> f64;

    fn kinetic_aux(&self) -> KineticAux {
        KineticAux::from_ratios(self.x(), self.y(), self.q())
            .expect("validated parameters have y > 0")
    }
}

impl Normalized for DegenerateParams {
    fn x(&self) -> f64 {
        self.x
    }
    fn y(&self) -> f64 {
        self.y
    }
    fn q(&self) -> f64 {
        self.q
    }
}

impl Normalized for GeneralParams {
    fn x(&self) -> f64 {
        self.x
    }
    fn y(&self) -> f64 {
        self.y
    }
    fn q(&self) -> f64 {
        self.q
    }
}

pub fn to_kinetic_aux<P: Normalized>(p: &P) -> Result<KineticAux> {
    KineticAux::from_ratios(p.x(), p.y(), p.q())
}

/// `ln(1 + w)` accurate for small `|w|`.
pub(crate) fn ln_1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// `ln(base + s) − ln(base − s)` with principal logs, accurate when `s` is
/// small against `base`.
pub fn log_pair(base: Complex64, s: f64) -> Result<Complex64> {
    log_pair_complex(base, Complex64::new(s, 0.0))
}

/// [`log_pair`] with a complex shift.
pub(crate) fn log_pair_complex(base: Complex64, s: Complex64) -> Result<Complex64> {
    let hi = base + s;
    let lo = base - s;
    if hi.norm() == 0.0 || lo.norm() == 0.0 || !hi.is_finite() || !lo.is_finite() {
        return Err(Error::Pole(format!("log argument vanishes at base {base}, shift {s}")));
    }
    let naive = hi.ln() - lo.ln();
    let w = 2.0 * s / lo;
    if w.norm() >= 0.5 {
        return Ok(naive);
    }
    let fine = ln_1p(w);
    // keep the branch of the principal-log difference
    let turns = ((naive.im - fine.im) / std::f64::consts::TAU).round();
    Ok(fine + Complex64::new(0.0, turns * std::f64::consts::TAU))
}

/// `ln(z − q) − ln(z + q)` on the principal branch.
pub fn log_ratio(z: Complex64, q: f64) -> Result<Complex64> {
    log_pair(z, q).map(|v| -v)
}

/// `ε_tr = 1 + i (ω_p/ω)² (x/y) σ/σ₀`.
pub fn epsilon_tr<P: Normalized>(
    sigma_ratio: Complex64,
    wp_over_omega: f64,
    p: &P,
) -> Result<ComplexValue> {
    if !(wp_over_omega >= 0.0) || !wp_over_omega.is_finite() {
        return Err(Error::invalid("wp_over_omega", wp_over_omega, "must be finite and >= 0"));
    }
    let scale = wp_over_omega * wp_over_omega * p.x() / p.y();
    finite(
        Complex64::new(1.0, 0.0) + Complex64::i() * scale * sigma_ratio,
        "epsilon_tr",
    )
}
