//! Transverse conductivity at arbitrary degeneracy `α`.
//!
//! Internally everything runs on the kinetic variables `a = 1 − iωτ`, `k₁`
//! and the quantum shift `d`; momentum integrals are truncated at
//! [`FermiKernel::cutoff`] and split at the Fermi surface and at the real
//! parts of the resonance poles.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermi::FermiKernel;
use crate::params::{finite, log_pair_complex, ComplexValue, GeneralParams, KineticAux, Normalized};
use crate::quad::{gauss_legendre_32, try_integrate, try_integrate_2d, Interval, QuadOptions, QuadResult};

/// Supported degeneracy range.
pub const ALPHA_MIN: f64 = -30.0;
pub const ALPHA_MAX: f64 = 500.0;
/// Largest quantum shift accepted by [`sigma_quant_smallh`].
pub const SMALLH_MAX_D: f64 = 0.1;

/// `σ/σ₀` split into classical and quantum summands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SigmaBreakdown {
    pub classic: ComplexValue,
    pub sigma1: ComplexValue,
    pub sigma2: ComplexValue,
    pub quant: ComplexValue,
    pub total: ComplexValue,
}

impl SigmaBreakdown {
    fn assemble(classic: Complex64, sigma1: Complex64, sigma2: Complex64) -> Result<Self> {
        let quant = sigma1 + sigma2;
        Ok(SigmaBreakdown {
            classic: finite(classic, "classical part")?,
            sigma1: finite(sigma1, "sigma1")?,
            sigma2: finite(sigma2, "sigma2")?,
            quant: finite(quant, "quantum part")?,
            total: finite(classic + quant, "total")?,
        })
    }
}

/// Quadrature error estimates matching a [`SigmaBreakdown`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorEstimates {
    pub classic: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

struct Setup {
    kernel: FermiKernel,
    f2: f64,
    aux: KineticAux,
    a: Complex64,
    cutoff: f64,
}

impl Setup {
    fn new(p: &GeneralParams) -> Result<Self> {
        let alpha = p.alpha();
        if !(ALPHA_MIN..=ALPHA_MAX).contains(&alpha) {
            return Err(Error::invalid("alpha", alpha, "supported range is [-30, 500]"));
        }
        let kernel = FermiKernel::new(alpha)?;
        let aux = p.kinetic_aux();
        Ok(Setup {
            f2: kernel.f2()?,
            a: aux.a(),
            cutoff: kernel.cutoff(),
            kernel,
            aux,
        })
    }

    /// Split points along a momentum projection: Fermi surface and pole real parts.
    fn projection_hints(&self) -> Vec<f64> {
        let KineticAux { omega_tau, k1, d } = self.aux;
        let mut h = vec![omega_tau / k1, (omega_tau - d) / k1, (omega_tau + d) / k1];
        if let Some(s) = self.kernel.surface() {
            h.extend([s, -s]);
        }
        h
    }

    fn opts(&self, tol: f64) -> QuadOptions {
        QuadOptions::new(tol).with_hints(self.projection_hints())
    }

    fn line(&self, f: impl Fn(f64) -> Complex64, tol: f64) -> Result<QuadResult> {
        try_integrate(|t| Ok(f(t)), -self.cutoff, self.cutoff, &self.opts(tol))
    }

    fn lorentz(&self, t: f64) -> Complex64 {
        self.a + Complex64::new(0.0, self.aux.k1 * t)
    }

    fn quantum_prefactor(&self) -> Complex64 {
        let KineticAux { omega_tau, k1, .. } = self.aux;
        Complex64::new(0.0, -k1 * k1 / (4.0 * self.f2 * omega_tau))
    }
}

fn classic_result(s: &Setup, tol: f64) -> Result<QuadResult> {
    let r = s.line(|t| s.kernel.log_weight(t) / s.lorentz(t), tol)?;
    Ok(scaled(r, Complex64::new(1.0 / (4.0 * s.f2), 0.0)))
}

fn sigma1_result(s: &Setup, tol: f64) -> Result<QuadResult> {
    let r = s.line(|t| t * s.kernel.log_weight(t) / s.lorentz(t), tol)?;
    let KineticAux { omega_tau, k1, .. } = s.aux;
    Ok(scaled(r, Complex64::new(-k1 / (4.0 * s.f2 * omega_tau), 0.0)))
}

fn sigma2_1d_result(s: &Setup, tol: f64) -> Result<QuadResult> {
    let KineticAux { omega_tau, k1, d } = s.aux;
    let mut hints = vec![(omega_tau - d).abs() / k1, (omega_tau + d) / k1];
    hints.extend(s.kernel.surface());
    let opts = QuadOptions::new(tol).with_hints(hints);
    let r = try_integrate(
        |pm| {
            let p2 = pm * pm;
            Ok(s.kernel.f_f(p2) * p2 * p2 * j_closed(pm, &s.aux)?)
        },
        0.0,
        s.cutoff,
        &opts,
    )?;
    Ok(scaled(r, s.quantum_prefactor()))
}

fn scaled(r: QuadResult, c: Complex64) -> QuadResult {
    QuadResult {
        value: r.value * c,
        abs_error_estimate: r.abs_error_estimate * c.norm(),
        ..r
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("tol", tol, "must be positive and finite"))
    }
}

/// Inner split point of a `ρ`-integral at fixed projection `px`.
fn radial_hints(kernel: FermiKernel) -> impl Fn(f64) -> Vec<f64> {
    move |px| {
        let r2 = kernel.alpha() - px * px;
        if r2 > 0.0 {
            vec![r2.sqrt()]
        } else {
            Vec::new()
        }
    }
}

/// Classical part `(1/4f₂) ∫ ln(1+e^{α−t²}) / (1 − iωτ + ik₁t) dt`.
pub fn sigma_classic_general(p: &GeneralParams, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    finite(classic_result(&s, tol)?.value, "classical part")
}

/// First quantum summand `−(k₁/4f₂ωτ) ∫ t ln(1+e^{α−t²}) / (1 − iωτ + ik₁t) dt`.
pub fn sigma1_general(p: &GeneralParams, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    finite(sigma1_result(&s, tol)?.value, "sigma1")
}

fn j_closed(pm: f64, aux: &KineticAux) -> Result<Complex64> {
    let a = aux.a();
    let b = Complex64::new(0.0, aux.k1 * pm);
    let id = Complex64::new(0.0, aux.d);
    let near = (a + id).norm().min((a - id).norm());
    if b.norm() < 0.25 * near {
        let d2 = aux.d * aux.d;
        return Ok(gauss_legendre_32(
            |mu| {
                let w = a + b * mu;
                (1.0 - mu * mu) / (w * w + d2)
            },
            -1.0,
            1.0,
        ));
    }
    let l1 = log_pair_complex(a - b, id)? - log_pair_complex(a + b, id)?;
    let l2 = log_pair_complex(a - id, b)? + log_pair_complex(a + id, b)?;
    let b3 = b * b * b;
    let d2 = Complex64::new(aux.d * aux.d, 0.0);
    let coef = if aux.d == 0.0 {
        // l1 ≈ 4idb/(a²−b²) as d → 0
        -2.0 / (b * b)
    } else {
        (d2 + b * b - a * a) / (2.0 * id * b3) * l1
    };
    Ok(-2.0 / (b * b) + coef + a / b3 * l2)
}

/// Angular integral `J(P) = ∫_{−1}^{1} (1−μ²) dμ / ((a + bμ)² + d²)` with
/// `a = 1 − iωτ`, `b = ik₁P`, in closed form (Gauss–Legendre for small `|b|`).
pub fn j_angular(pm: f64, aux: &KineticAux) -> Result<ComplexValue> {
    if !(pm > 0.0) || !pm.is_finite() {
        return Err(Error::invalid("P", pm, "must be positive and finite"));
    }
    finite(j_closed(pm, aux)?, "J")
}

/// `σ₂ = −(ik₁²/4f₂ωτ) ∫₀^∞ f_F(P²) P⁴ J(P) dP`.
pub fn sigma2_general_1d(p: &GeneralParams, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    finite(sigma2_1d_result(&s, tol)?.value, "sigma2")
}

/// `σ₂` as the two-dimensional integral over `(P_x, ρ)`:
/// `−(ik₁²/4f₂ωτ) ∬ ρ ln(1+e^{α−ρ²−P_x²}) / ((1 − iωτ + ik₁P_x)² + d²)`.
pub fn sigma2_general_2d(p: &GeneralParams, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    let d2 = s.aux.d * s.aux.d;
    let r = try_integrate_2d(
        |px, rho| {
            let w = s.lorentz(px);
            Ok(rho * s.kernel.log_weight_sq(rho * rho + px * px) / (w * w + d2))
        },
        Interval::Finite(-s.cutoff, s.cutoff),
        Interval::Finite(0.0, s.cutoff),
        &s.opts(tol),
        radial_hints(s.kernel),
    )?;
    finite(r.value * s.quantum_prefactor(), "sigma2")
}

/// Leading small-ħ quantum part, `(q³/12f₂x) ∬ G(P_x, P²) ρ³ / (1 − iωτ + ik₁P_x)`
/// with the cubic kernel `G` of [`FermiKernel::big_g`]. Valid for `d ≤ 0.1`.
pub fn sigma_quant_smallh(p: &GeneralParams, tol: f64) -> Result<ComplexValue> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    if s.aux.d > SMALLH_MAX_D {
        return Err(Error::invalid("q", p.q(), "small-h expansion needs d = q^2/(2y) <= 0.1"));
    }
    let r = try_integrate_2d(
        |px, rho| {
            let p2 = px * px + rho * rho;
            Ok(s.kernel.big_g(px, p2) * rho.powi(3) / s.lorentz(px))
        },
        Interval::Finite(-s.cutoff, s.cutoff),
        Interval::Finite(0.0, s.cutoff),
        &s.opts(tol),
        radial_hints(s.kernel),
    )?;
    let q = p.q();
    finite(r.value * (q * q * q / (12.0 * s.f2 * p.x())), "small-h quantum part")
}

/// Full breakdown with quadrature error estimates.
pub fn sigma_tr_general_with_errors(
    p: &GeneralParams,
    tol: f64,
) -> Result<(SigmaBreakdown, ErrorEstimates)> {
    check_tol(tol)?;
    let s = Setup::new(p)?;
    let c = classic_result(&s, tol)?;
    let s1 = sigma1_result(&s, tol)?;
    let s2 = sigma2_1d_result(&s, tol)?;
    Ok((
        SigmaBreakdown::assemble(c.value, s1.value, s2.value)?,
        ErrorEstimates {
            classic: c.abs_error_estimate,
            sigma1: s1.abs_error_estimate,
            sigma2: s2.abs_error_estimate,
        },
    ))
}

/// `σ_tr = σ_classic + σ₁ + σ₂`.
pub fn sigma_tr_general(p: &GeneralParams, tol: f64) -> Result<SigmaBreakdown> {
    sigma_tr_general_with_errors(p, tol).map(|(b, _)| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degenerate::{sigma_classic_deg, sigma_tr_deg};
    use crate::params::DegenerateParams;
    use proptest::prelude::*;

    const TOL: f64 = 1e-10;

    fn gp(alpha: f64, x: f64, y: f64, q: f64) -> GeneralParams {
        GeneralParams::new(alpha, x, y, q).unwrap()
    }
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }
    fn cv(v: Result<ComplexValue>) -> Complex64 {
        v.unwrap().to_complex()
    }

    /// Nested `(P_x, ρ)` integral of `h(px, ρ)` over the truncated domain.
    fn plane(p: &GeneralParams, h: impl Fn(f64, f64) -> Complex64, tol: f64) -> Complex64 {
        let s = Setup::new(p).unwrap();
        try_integrate_2d(
            |px, rho| Ok(h(px, rho)),
            Interval::Finite(-s.cutoff, s.cutoff),
            Interval::Finite(0.0, s.cutoff),
            &s.opts(tol),
            radial_hints(s.kernel),
        )
        .unwrap()
        .value
    }

    #[test]
    fn classic_long_wave_limit() {
        let v = cv(sigma_classic_general(&gp(0.0, 0.1, 0.1, 1e-6), TOL));
        assert!(rel(v, c(0.5, 0.5)) < 1e-5);
        for alpha in [-10.0, 5.0, 100.0] {
            let p = gp(alpha, 0.3, 0.1, 1e-6);
            let v = cv(sigma_classic_general(&p, TOL));
            assert!(rel(v, 1.0 / p.kinetic_aux().a()) < 1e-5, "alpha {alpha}");
        }
    }

    #[test]
    fn classic_against_occupation_slope_integral() {
        // (1/2f₂) ∬ g(P²) ρ³ / (1 − iωτ + ik₁P_x)
        let p = gp(0.0, 1.0, 0.1, 1.0);
        let s = Setup::new(&p).unwrap();
        let v = cv(sigma_classic_general(&p, TOL));
        let oracle = plane(&p, |px, rho| s.kernel.g(px * px + rho * rho) * rho.powi(3) / s.lorentz(px), 1e-11)
            / (2.0 * s.f2);
        assert!(rel(v, oracle) < 1e-7, "{v} vs {oracle}");
    }

    #[test]
    fn classic_against_pole_form() {
        // −(iy/4f₂) ∫ ln(1+e^{α−t²}) / (qt − z) dt
        let p = gp(1.5, 0.7, 0.2, 0.9);
        let s = Setup::new(&p).unwrap();
        let z = p.z().to_complex();
        let r = s.line(|t| s.kernel.log_weight(t) / (p.q() * t - z), 1e-12).unwrap().value;
        let oracle = c(0.0, -p.y() / (4.0 * s.f2)) * r;
        assert!(rel(cv(sigma_classic_general(&p, TOL)), oracle) < 1e-10);
    }

    #[test]
    fn sigma1_against_plane_integral() {
        // −(k₁/2f₂ωτ) ∬ P_x g(P²) ρ³ / (1 − iωτ + ik₁P_x)
        let p = gp(0.0, 1.0, 0.1, 1.0);
        let s = Setup::new(&p).unwrap();
        let KineticAux { omega_tau, k1, .. } = s.aux;
        let v = cv(sigma1_general(&p, TOL));
        let oracle = plane(
            &p,
            |px, rho| px * s.kernel.g(px * px + rho * rho) * rho.powi(3) / s.lorentz(px),
            1e-11,
        ) * (-k1 / (2.0 * s.f2 * omega_tau));
        assert!(rel(v, oracle) < 1e-7, "{v} vs {oracle}");
    }

    #[test]
    fn sigma1_from_even_part_of_kernel() {
        // only the odd part of 1/(A + ik₁t) survives against t·ln(…)
        let p = gp(0.0, 1.0, 0.1, 1.0);
        let s = Setup::new(&p).unwrap();
        let KineticAux { omega_tau, k1, .. } = s.aux;
        let a2 = s.a * s.a;
        let r = s
            .line(|t| t * t * s.kernel.log_weight(t) / (a2 + k1 * k1 * t * t), 1e-12)
            .unwrap()
            .value;
        let oracle = c(0.0, k1 * k1 / (4.0 * s.f2 * omega_tau)) * r;
        assert!(rel(cv(sigma1_general(&p, TOL)), oracle) < 1e-10);
    }

    #[test]
    fn sigma1_vanishes_quadratically() {
        let s1 = |q: f64| cv(sigma1_general(&gp(0.0, 0.5, 0.2, q), 1e-12)).norm();
        let ratio = s1(2e-3) / s1(1e-3);
        assert!((ratio - 4.0).abs() < 1e-3, "ratio {ratio}");
    }

    #[test]
    fn j_limits_and_quadrature() {
        let aux = KineticAux { omega_tau: 1.0, k1: 1e-4, d: 0.0 };
        let j = cv(j_angular(1.0, &aux));
        assert!((j - c(0.0, 2.0 / 3.0)).norm() < 1e-7, "{j}");

        let aux = KineticAux { omega_tau: 1.0, k1: 2.0, d: 0.3 };
        let (a, b) = (aux.a(), c(0.0, 1.6));
        let direct = try_integrate(
            |mu| {
                let w = a + b * mu;
                Ok((1.0 - mu * mu) / (w * w + 0.09))
            },
            -1.0,
            1.0,
            &QuadOptions::relative(1e-14),
        )
        .unwrap()
        .value;
        assert!(rel(cv(j_angular(0.8, &aux)), direct) < 1e-10);
    }

    #[test]
    fn j_branches_meet() {
        // closed form and Gauss–Legendre on both sides of the switch
        let aux = KineticAux { omega_tau: 0.7, k1: 1.3, d: 0.4 };
        let near = (aux.a() + c(0.0, aux.d)).norm().min((aux.a() - c(0.0, aux.d)).norm());
        let edge = 0.25 * near / aux.k1;
        for pm in [edge * 0.999, edge * 1.001, edge * 1.5] {
            let (a, b) = (aux.a(), c(0.0, aux.k1 * pm));
            let gl = gauss_legendre_32(
                |mu| {
                    let w = a + b * mu;
                    (1.0 - mu * mu) / (w * w + aux.d * aux.d)
                },
                -1.0,
                1.0,
            );
            assert!(rel(cv(j_angular(pm, &aux)), gl) < 1e-12, "P {pm}");
        }
    }

    #[test]
    fn j_without_shift() {
        let aux = KineticAux { omega_tau: 2.0, k1: 1.0, d: 0.0 };
        let (a, b) = (aux.a(), c(0.0, 1.2));
        let direct = try_integrate(
            |mu| Ok((1.0 - mu * mu) / ((a + b * mu) * (a + b * mu))),
            -1.0,
            1.0,
            &QuadOptions::relative(1e-14),
        )
        .unwrap()
        .value;
        assert!(rel(cv(j_angular(1.2, &aux)), direct) < 1e-10);
    }

    #[test]
    fn j_rejects_nonpositive_momentum() {
        let aux = KineticAux { omega_tau: 1.0, k1: 1.0, d: 0.1 };
        assert!(j_angular(0.0, &aux).is_err() && j_angular(f64::NAN, &aux).is_err());
    }

    #[test]
    fn denominator_identity() {
        let p = gp(0.0, 1.0, 0.5, 1.0);
        let s = Setup::new(&p).unwrap();
        let px = 0.3;
        let w = s.lorentz(px);
        let lhs = w * w + s.aux.d * s.aux.d;
        let zq = p.z().to_complex() - p.q() * px;
        let rhs = -(zq * zq - 0.25 * p.q().powi(4)) / (p.y() * p.y());
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn sigma2_reductions_agree() {
        let p = gp(0.0, 1.0, 0.1, 1.0);
        let a = cv(sigma2_general_1d(&p, TOL));
        let b = cv(sigma2_general_2d(&p, TOL));
        assert!((a - b).norm() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn sigma2_reductions_agree_on_grid() {
        for alpha in [-5.0, 0.0, 5.0] {
            for (x, y, q) in [(0.2, 0.1, 0.5), (1.0, 0.5, 2.0), (2.5, 1.0, 0.3)] {
                let p = gp(alpha, x, y, q);
                let a = cv(sigma2_general_1d(&p, TOL));
                let b = cv(sigma2_general_2d(&p, TOL));
                assert!((a - b).norm() <= 10.0 * TOL, "{alpha} {x} {y} {q}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn quantum_sum_against_combined_integrand() {
        // σ₁ + σ₂ = (ik₁²d²/4f₂ωτ) ∬ ρ ln(…) / (D²(D² + d²)),  D = 1 − iωτ + ik₁P_x
        let p = gp(0.0, 1.0, 0.5, 0.05);
        let s = Setup::new(&p).unwrap();
        let KineticAux { omega_tau, k1, d } = s.aux;
        let b = sigma_tr_general(&p, 1e-12).unwrap();
        let oracle = plane(
            &p,
            |px, rho| {
                let w = s.lorentz(px);
                let w2 = w * w;
                rho * s.kernel.log_weight_sq(px * px + rho * rho) / (w2 * (w2 + d * d))
            },
            1e-12,
        ) * c(0.0, k1 * k1 * d * d / (4.0 * s.f2 * omega_tau));
        assert!(rel(b.quant.to_complex(), oracle) < 1e-4, "{} vs {oracle}", b.quant);
    }

    #[test]
    fn small_h_expansion() {
        let p = gp(0.0, 1.0, 0.5, 0.05);
        let s = Setup::new(&p).unwrap();
        let KineticAux { omega_tau, k1, d } = s.aux;
        let exact = plane(
            &p,
            |px, rho| {
                let w = s.lorentz(px);
                let w2 = w * w;
                rho * s.kernel.log_weight_sq(px * px + rho * rho) / (w2 * (w2 + d * d))
            },
            1e-12,
        ) * c(0.0, k1 * k1 * d * d / (4.0 * s.f2 * omega_tau));
        let approx = cv(sigma_quant_smallh(&p, 1e-11));
        assert!(rel(approx, exact) < 0.05, "{approx} vs {exact}");
    }

    #[test]
    fn small_h_scales_as_q6() {
        let v = |q: f64| cv(sigma_quant_smallh(&gp(0.0, 1.0, 0.5, q), 1e-12));
        let ratio = v(0.04) / v(0.02);
        assert!((ratio.norm() - 64.0).abs() < 1.0, "ratio {ratio}");
        let exact = |q: f64| sigma_tr_general(&gp(0.0, 1.0, 0.5, q), 1e-13).unwrap().quant.to_complex();
        let slope = (exact(0.08) / exact(0.04)).norm().log2();
        assert!((slope - 6.0).abs() < 0.3, "slope {slope}");
    }

    #[test]
    fn small_h_parity_split() {
        // G is odd in P_x, so only the odd part −ik₁P_x/(A² + k₁²P_x²) contributes
        let p = gp(0.0, 1.0, 0.5, 0.05);
        let s = Setup::new(&p).unwrap();
        let k1 = s.aux.k1;
        let a2 = s.a * s.a;
        let half = try_integrate_2d(
            |px, rho| {
                let p2 = px * px + rho * rho;
                Ok(s.kernel.big_g(px, p2) * rho.powi(3) * c(0.0, -k1 * px) / (a2 + k1 * k1 * px * px))
            },
            Interval::Finite(0.0, s.cutoff),
            Interval::Finite(0.0, s.cutoff),
            &s.opts(1e-13),
            radial_hints(s.kernel),
        )
        .unwrap()
        .value;
        let q = p.q();
        let split = 2.0 * half * (q * q * q / (12.0 * s.f2 * p.x()));
        let full = cv(sigma_quant_smallh(&p, 1e-13));
        assert!((split - full).norm() <= 1e-10 * full.norm(), "{split} vs {full}");
    }

    #[test]
    fn small_h_rejects_large_shift() {
        let p = gp(0.0, 1.0, 0.1, 1.0);
        assert!(matches!(sigma_quant_smallh(&p, TOL), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn classical_restoration() {
        let mut last = f64::INFINITY;
        for d in [0.2, 0.1, 0.05, 0.025] {
            let p = GeneralParams::from_kinetic(0.0, 1.0, 2.0, d).unwrap();
            let b = sigma_tr_general(&p, TOL).unwrap();
            let m = b.quant.abs();
            assert!(m < last, "d {d}: {m} >= {last}");
            last = m;
        }
        let p = GeneralParams::from_kinetic(0.0, 1.0, 2.0, 1e-3).unwrap();
        let b = sigma_tr_general(&p, TOL).unwrap();
        assert!(rel(b.total.to_complex(), b.classic.to_complex()) < 1e-5);
    }

    #[test]
    fn maxwell_shape_invariance() {
        let s2 = |alpha| cv(sigma2_general_1d(&gp(alpha, 1.0, 0.3, 0.8), TOL));
        let (a, b) = (s2(-10.0), s2(-12.0));
        assert!(rel(a, b) < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn degenerate_bridge() {
        for (x, y, q) in [(1.0, 0.1, 1.0), (0.5, 0.05, 0.3), (2.0, 0.5, 1.5)] {
            let f = DegenerateParams::new(x, y, q).unwrap();
            let g = GeneralParams::from_fermi(400.0, &f).unwrap();
            let b = sigma_tr_general(&g, TOL).unwrap();
            let d = sigma_tr_deg(&f).unwrap();
            assert!(rel(b.total.to_complex(), d.total.to_complex()) < 2e-2, "({x},{y},{q})");
            let cd = cv(sigma_classic_deg(&f));
            assert!(rel(b.classic.to_complex(), cd) < 2e-2);
        }
    }

    #[test]
    fn long_wave_total() {
        for (x, y) in [(0.1, 0.1), (0.1, 1.0), (1.0, 0.1), (1.0, 1.0)] {
            let p = gp(0.0, x, y, 1e-3);
            let b = sigma_tr_general(&p, TOL).unwrap();
            let dev = (b.total.to_complex() * p.kinetic_aux().a() - 1.0).norm();
            assert!(dev <= 1e-4, "({x},{y}): {dev}");
        }
    }

    #[test]
    fn alpha_range_enforced() {
        for alpha in [-31.0, 501.0] {
            let p = gp(alpha, 1.0, 0.1, 1.0);
            assert!(matches!(sigma_tr_general(&p, TOL), Err(Error::InvalidParameter { .. })));
        }
        assert!(sigma_classic_general(&gp(0.0, 1.0, 0.1, 1.0), 0.0).is_err());
    }

    #[test]
    fn error_estimates_are_reported() {
        let (b, e) = sigma_tr_general_with_errors(&gp(0.0, 1.0, 0.1, 1.0), TOL).unwrap();
        for (v, err) in [(b.classic, e.classic), (b.sigma1, e.sigma1), (b.sigma2, e.sigma2)] {
            assert!(err >= 0.0 && err < 1e3 * TOL * v.abs().max(1.0), "{err} for {v}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn breakdown_closure(alpha in -5.0f64..20.0, x in 0.1f64..3.0, y in 0.05f64..1.0, q in 0.1f64..2.0) {
            let b = sigma_tr_general(&gp(alpha, x, y, q), 1e-8).unwrap();
            let (cl, s1, s2) = (b.classic.to_complex(), b.sigma1.to_complex(), b.sigma2.to_complex());
            let scale = cl.norm() + s1.norm() + s2.norm();
            prop_assert!((b.total.to_complex() - (cl + s1 + s2)).norm() <= 2.0 * f64::EPSILON * scale);
            prop_assert_eq!(b.quant.to_complex(), s1 + s2);
        }

        #[test]
        fn j_matches_quadrature(wt in 0.0f64..3.0, k1 in 0.1f64..5.0, d in 0.0f64..2.0, pm in 0.05f64..4.0) {
            let aux = KineticAux { omega_tau: wt, k1, d };
            let (a, b) = (aux.a(), c(0.0, k1 * pm));
            let direct = try_integrate(
                |mu| {
                    let w = a + b * mu;
                    Ok((1.0 - mu * mu) / (w * w + d * d))
                },
                -1.0,
                1.0,
                &QuadOptions::relative(1e-13).with_hints([(wt - d) / (k1 * pm), (wt + d) / (k1 * pm), -(wt - d) / (k1 * pm), -(wt + d) / (k1 * pm)]),
            )
            .unwrap()
            .value;
            let j = cv(j_angular(pm, &aux));
            prop_assert!(rel(j, direct) < 1e-9, "{} vs {}", j, direct);
        }
    }
}
