//! Fermi–Dirac weights of the squared dimensionless momentum.
//!
//! Everything is written through `u = P² − α` and `e = exp(−|u|) ≤ 1`, so no
//! exponential ever overflows.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{try_integrate_interval, Interval, QuadOptions};

const F2_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermiKernel {
    alpha: f64,
}

/// `ln(1 + e^v)` without overflow.
pub fn softplus(v: f64) -> f64 {
    v.max(0.0) + (-v.abs()).exp().ln_1p()
}

impl FermiKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() {
            Ok(FermiKernel { alpha })
        } else {
            Err(Error::invalid("alpha", alpha, "must be finite"))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Fermi–Dirac occupation `1/(1 + e^{t2−α})`.
    pub fn f_f(&self, t2: f64) -> f64 {
        let u = t2 - self.alpha;
        let e = (-u.abs()).exp();
        if u > 0.0 {
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + e)
        }
    }

    /// `ln(1 + e^{α−t²})`.
    pub fn log_weight(&self, t: f64) -> f64 {
        softplus(self.alpha - t * t)
    }

    /// `ln(1 + e^{α−p2})` for a squared argument.
    pub fn log_weight_sq(&self, p2: f64) -> f64 {
        softplus(self.alpha - p2)
    }

    /// `g = f(1−f) = −df/d(P²)`.
    pub fn g(&self, p2: f64) -> f64 {
        let e = (-(p2 - self.alpha).abs()).exp();
        let s = 1.0 + e;
        e / (s * s)
    }

    /// `dg/d(P²)`.
    pub fn g1(&self, p2: f64) -> f64 {
        let u = p2 - self.alpha;
        -self.g(p2) * (0.5 * u).tanh()
    }

    /// `d²g/d(P²)²`.
    pub fn g2(&self, p2: f64) -> f64 {
        let th = (0.5 * (p2 - self.alpha)).tanh();
        let g = self.g(p2);
        g * (th * th - 2.0 * g)
    }

    /// Cubic-expansion kernel `Px [g''(P²) Px² + (3/2) g'(P²)]`; odd in `Px`.
    pub fn big_g(&self, px: f64, p2: f64) -> f64 {
        px * (self.g2(p2) * px * px + 1.5 * self.g1(p2))
    }

    /// Momentum beyond which every weight is below `1e-18` of its peak.
    pub fn cutoff(&self) -> f64 {
        (self.alpha.max(0.0) + 45.0).sqrt()
    }

    /// Fermi-surface split point, if any.
    pub fn surface(&self) -> Option<f64> {
        (self.alpha > 0.0).then(|| self.alpha.sqrt())
    }

    /// `f₂(α) = ∫_0^∞ x² f_F(x²) dx`, memoized per α.
    pub fn f2(&self) -> Result<f64> {
        static CACHE: OnceLock<RwLock<HashMap<u64, f64>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        let key = self.alpha.to_bits();
        if let Some(v) = cache.read().ok().and_then(|m| m.get(&key).copied()) {
            return Ok(v);
        }
        let v = self.f2_moment_form()?;
        if let Ok(mut m) = cache.write() {
            m.insert(key, v);
        }
        Ok(v)
    }

    fn semi_infinite(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let opts = QuadOptions::relative(F2_TOL).with_hints(self.surface());
        let r = try_integrate_interval(
            |t| Ok(Complex64::new(f(t), 0.0)),
            Interval::SemiInfinite(0.0),
            &opts,
        )?;
        Ok(r.value.re)
    }

    /// `∫_0^∞ x² f_F(x²) dx` (uncached).
    pub fn f2_moment_form(&self) -> Result<f64> {
        self.semi_infinite(|x| x * x * self.f_f(x * x))
    }

    /// `½ ∫_0^∞ ln(1 + e^{α−x²}) dx`, the integrated-by-parts form.
    pub fn f2_log_form(&self) -> Result<f64> {
        Ok(0.5 * self.semi_infinite(|x| self.log_weight(x))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn k(alpha: f64) -> FermiKernel {
        FermiKernel::new(alpha).unwrap()
    }

    #[test]
    fn occupation_examples() {
        let f = k(3.0);
        assert_eq!(f.f_f(3.0), 0.5);
        let hi = f.f_f(53.0);
        assert!((hi / (-50f64).exp() - 1.0).abs() < 1e-15);
        let lo = f.f_f(-47.0);
        assert!((1.0 - lo - (-50f64).exp()).abs() < 1e-16);
        assert!(k(1e300).f_f(0.0) == 1.0 && k(-1e300).f_f(0.0) == 0.0);
        assert!(FermiKernel::new(f64::NAN).is_err());
    }

    #[test]
    fn log_weight_examples() {
        assert!((k(0.0).log_weight(0.0) - 2f64.ln()).abs() < 1e-16);
        assert!((k(100.0).log_weight(0.0) - 100.0).abs() < 1e-12);
        assert!(k(800.0).log_weight(0.0).is_finite());
        assert!(k(-800.0).log_weight(3.0) >= 0.0);
    }

    #[test]
    fn log_weight_integral_is_four_f2() {
        let f = k(0.0);
        let opts = QuadOptions::relative(1e-13);
        let whole = try_integrate_interval(|t| Ok(Complex64::new(f.log_weight(t), 0.0)), Interval::Real, &opts)
            .unwrap()
            .value
            .re;
        assert!((whole - 4.0 * f.f2().unwrap()).abs() < 1e-11);
    }

    #[test]
    fn g_family_at_symmetry_point() {
        let f = k(1.3);
        assert_eq!(f.g(1.3), 0.25);
        assert_eq!(f.g1(1.3), 0.0);
        assert_eq!(f.g2(1.3), -0.125);
        for p2 in [1e3, -1e3] {
            assert!(f.g(p2).abs() < 1e-300 && f.g1(p2).abs() < 1e-300 && f.g2(p2).abs() < 1e-300);
        }
    }

    #[test]
    fn derivatives_by_finite_differences() {
        let f = k(1.0);
        let (p2, h) = (2.0, 1e-4);
        let d = |fun: &dyn Fn(f64) -> f64| (fun(p2 + h) - fun(p2 - h)) / (2.0 * h);
        assert!((f.g(p2) + d(&|t| f.f_f(t))).abs() < 1e-8);
        assert!((f.g1(p2) - d(&|t| f.g(t))).abs() < 1e-8);
        assert!((f.g2(p2) - d(&|t| f.g1(t))).abs() < 1e-8);
    }

    #[test]
    fn big_g_parity() {
        let f = k(1.0);
        assert_eq!(f.big_g(0.0, 1.2), 0.0);
        assert_eq!(f.big_g(-0.7, 1.2), -f.big_g(0.7, 1.2));
    }

    #[test]
    fn shifted_occupation_difference_matches_cubic_expansion() {
        // f(P² − qPx + q²/4) − f(P² + qPx + q²/4) = 2gPx q + G q³/3 + O(q⁵)
        let f = k(1.0);
        let resid = |q: f64, px: f64, rho2: f64| {
            let p2 = px * px + rho2;
            let exact = f.f_f(p2 - q * px + 0.25 * q * q) - f.f_f(p2 + q * px + 0.25 * q * q);
            exact - (2.0 * f.g(p2) * px * q + f.big_g(px, p2) * q * q * q / 3.0)
        };
        for (px, rho2) in [(0.4, 0.3), (1.1, 0.2), (-0.8, 1.5)] {
            let r1 = resid(0.02, px, rho2);
            let r2 = resid(0.04, px, rho2);
            assert!(r1.abs() < 1e-8);
            let ratio = r2 / r1;
            assert!((ratio - 32.0).abs() < 2.0, "ratio {ratio}");
        }
    }

    #[test]
    fn f2_reference_values() {
        // mpmath: −(√π/4) Li_{3/2}(−e^α)
        assert!((k(0.0).f2().unwrap() - 0.339_046_947_576_550_46).abs() < 1e-13);
        let m = k(-10.0).f2().unwrap();
        assert!((m - 2.011_699_718_344_697e-5).abs() < 1e-17);
        assert!((m / (PI.sqrt() / 4.0 * (-10f64).exp()) - 1.0).abs() < 1e-3);
        let d = k(400.0).f2().unwrap();
        assert!((d - 2666.687_228_453_489).abs() < 1e-8);
        assert!((d / (400f64.powf(1.5) / 3.0) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn f2_dual_forms_agree() {
        for alpha in [-5.0, 0.0, 5.0, 50.0] {
            let f = k(alpha);
            let a = f.f2_moment_form().unwrap();
            let b = f.f2_log_form().unwrap();
            assert!((a - b).abs() <= 1e-9, "alpha {alpha}");
            assert!((a - b).abs() <= 1e-9 * a, "alpha {alpha}");
        }
    }

    #[test]
    fn f2_cache_returns_identical_bits() {
        let f = k(7.25);
        assert_eq!(f.f2().unwrap().to_bits(), f.f2().unwrap().to_bits());
        assert_eq!(f.f2().unwrap().to_bits(), f.f2_moment_form().unwrap().to_bits());
    }

    proptest! {
        #[test]
        fn occupation_in_unit_interval(alpha in -50.0f64..50.0, t2 in 0.0f64..100.0) {
            let f = k(alpha);
            let v = f.f_f(t2);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(f.log_weight(t2.sqrt()) >= 0.0);
            prop_assert!(f.g(t2) >= 0.0 && f.g(t2) <= 0.25);
        }

        #[test]
        fn g_is_minus_occupation_slope(alpha in -5.0f64..5.0, p2 in 0.0f64..10.0) {
            let f = k(alpha);
            let h = 1e-4;
            let fd = -(f.f_f(p2 + h) - f.f_f(p2 - h)) / (2.0 * h);
            prop_assert!((f.g(p2) - fd).abs() <= 1e-8);
        }

        #[test]
        fn f2_increasing(alpha in -20.0f64..40.0, delta in 0.05f64..3.0) {
            prop_assert!(k(alpha + delta).f2().unwrap() > k(alpha).f2().unwrap());
        }
    }
}
