//! Adaptive Gauss–Kronrod integration of complex integrands.
//!
//! The engine is global-adaptive: it keeps every subinterval with its
//! 21-point Kronrod value and a max-norm error estimate (the larger of the
//! real and imaginary parts of `K21 − G10`), and bisects the worst one until
//! the summed error meets the target or the subdivision budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default subdivision budget.
pub const MAX_SUBDIVISIONS: usize = 10_000;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_880_970_588_093,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// 32-point Gauss–Legendre nodes (positive half) and weights.
const GL32_X: [f64; 16] = [
    0.04830766568773832,
    0.1444719615827965,
    0.23928736225213706,
    0.33186860228212767,
    0.42135127613063533,
    0.5068999089322294,
    0.5877157572407623,
    0.6630442669302152,
    0.7321821187402897,
    0.7944837959679424,
    0.84936761373257,
    0.8963211557660521,
    0.9349060759377397,
    0.9647622555875064,
    0.9856115115452684,
    0.9972638618494816,
];
const GL32_W: [f64; 16] = [
    0.0965400885147278,
    0.09563872007927486,
    0.09384439908080457,
    0.09117387869576389,
    0.08765209300440381,
    0.08331192422694675,
    0.07819389578707031,
    0.0723457941088485,
    0.06582222277636185,
    0.058684093478535544,
    0.050998059262376175,
    0.04283589802222668,
    0.03427386291302143,
    0.02539206530926206,
    0.01627439473090567,
    0.007018610009470096,
];

/// Fixed 32-point Gauss–Legendre rule on `[a, b]`, for integrands known to be smooth.
pub fn gauss_legendre_32<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in GL32_X.iter().zip(GL32_W.iter()) {
        sum += (f(c - h * x) + f(c + h * x)) * *w;
    }
    sum * h
}

/// Outcome of an integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Error control and splitting for the adaptive engine.
#[derive(Clone, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Abscissae at which the domain is split before adapting (poles, kinks).
    pub hints: Vec<f64>,
}

impl QuadOptions {
    /// `|error| ≤ max(tol, tol·|value|)`.
    pub fn new(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            rel_tol: tol,
            max_subdivisions: MAX_SUBDIVISIONS,
            hints: Vec::new(),
        }
    }

    /// Purely relative control.
    pub fn relative(tol: f64) -> Self {
        QuadOptions {
            abs_tol: 0.0,
            ..Self::new(tol)
        }
    }

    pub fn with_hints<I: IntoIterator<Item = f64>>(mut self, hints: I) -> Self {
        self.hints.extend(hints);
        self
    }

    fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t >= 0.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) || self.abs_tol + self.rel_tol == 0.0 {
            return Err(Error::invalid("tol", self.rel_tol, "tolerance must be positive"));
        }
        Ok(())
    }
}

/// Integration domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    /// `[a, ∞)`
    SemiInfinite(f64),
    /// `(−∞, ∞)`
    Real,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    // roundoff floor below which refinement is pointless
    floor: f64,
}

impl Segment {
    fn refinable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        self.err > self.floor && mid > self.a && mid < self.b
    }
}

struct ByError(Segment);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .err
            .total_cmp(&other.0.err)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

fn max_norm(c: Complex64) -> f64 {
    c.re.abs().max(c.im.abs())
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<Complex64> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("integrand at t = {t}")))
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = WGK[10] * fc.norm();
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = eval(c - dx)?;
        let f2 = eval(c + dx)?;
        let s = f1 + f2;
        kron += s * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = max_norm((kron - gauss) * h);
    let floor = 50.0 * f64::EPSILON * resabs * h.abs();
    Ok(Segment {
        a,
        b,
        value,
        err: err.max(floor),
        floor,
    })
}

/// Adaptive integration of a fallible integrand over `[a, b]`.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    opts.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid("b", b, "integration needs finite a < b"));
    }
    let mut cuts: Vec<f64> = opts
        .hints
        .iter()
        .copied()
        .filter(|h| h.is_finite() && *h > a && *h < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        if hi > lo {
            let s = gk21(&mut f, lo, hi)?;
            evaluations += 21;
            if s.refinable() {
                heap.push(ByError(s));
            } else {
                done.push(s);
            }
        }
        lo = hi;
    }

    let totals = |heap: &BinaryHeap<ByError>, done: &[Segment]| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut e = 0.0;
        for s in heap.iter().map(|s| &s.0).chain(done.iter()) {
            v += s.value;
            e += s.err;
        }
        (v, e)
    };

    let (mut value, mut err) = totals(&heap, &done);
    let mut subdivisions = 0usize;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if err <= target || heap.is_empty() {
            break;
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: value,
                abs_error: err,
                subdivisions,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap checked non-empty").0;
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        for s in [left, right] {
            if s.refinable() {
                heap.push(ByError(s));
            } else {
                done.push(s);
            }
        }
        // running sums drift; resynchronise now and then
        if subdivisions % 64 == 0 {
            (value, err) = totals(&heap, &done);
        }
    }
    let (value, err) = totals(&heap, &done);
    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations,
    })
}

/// Adaptive integration over `[a, b]` with `|error| ≤ max(tol, tol·|value|)`.
pub fn integrate_finite<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    try_integrate(|t| Ok(f(t)), a, b, &QuadOptions::new(tol))
}

/// Adaptive integration over `[a, b]` with explicit options.
pub fn integrate_with<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    try_integrate(|t| Ok(f(t)), a, b, opts)
}

/// Integrate over an arbitrary [`Interval`]. Infinite ends are mapped onto a
/// finite interval (`t = a + s/(1−s)` on `[a, ∞)`, `t = s/(1−s²)` on ℝ); hints
/// are given in the original variable and mapped along.
pub fn try_integrate_interval<F>(mut f: F, domain: Interval, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    match domain {
        Interval::Finite(a, b) => try_integrate(f, a, b, opts),
        Interval::SemiInfinite(a) => {
            if !a.is_finite() {
                return Err(Error::invalid("a", a, "lower limit must be finite"));
            }
            let mut mapped = opts.clone();
            mapped.hints = opts
                .hints
                .iter()
                .filter(|h| **h > a)
                .map(|h| {
                    let u = h - a;
                    u / (1.0 + u)
                })
                .collect();
            try_integrate(
                |s| {
                    let r = 1.0 / (1.0 - s);
                    let t = a + s * r;
                    Ok(f(t)? * (r * r))
                },
                0.0,
                1.0,
                &mapped,
            )
        }
        Interval::Real => {
            let mut mapped = opts.clone();
            mapped.hints = opts
                .hints
                .iter()
                .map(|&h| {
                    // inverse of t = s/(1−s²)
                    if h == 0.0 {
                        0.0
                    } else {
                        2.0 * h / (1.0 + (1.0 + 4.0 * h * h).sqrt())
                    }
                })
                .chain(std::iter::once(0.0))
                .collect();
            try_integrate(
                |s| {
                    let den = 1.0 - s * s;
                    let t = s / den;
                    Ok(f(t)? * ((1.0 + s * s) / (den * den)))
                },
                -1.0,
                1.0,
                &mapped,
            )
        }
    }
}

/// `∫_0^∞ f`, error contract as [`integrate_finite`].
pub fn integrate_semi_infinite<F>(mut f: F, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    try_integrate_interval(|t| Ok(f(t)), Interval::SemiInfinite(0.0), &QuadOptions::new(tol))
}

/// Nested integral `∫_outer ∫_inner f(u, v) dv du`.
///
/// The inner integrals run at a tenth of the outer tolerance. `inner_hints`
/// supplies split points for the inner variable as a function of the outer one.
pub fn try_integrate_2d<F, H>(
    mut f: F,
    outer: Interval,
    inner: Interval,
    opts: &QuadOptions,
    inner_hints: H,
) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<Complex64>,
    H: Fn(f64) -> Vec<f64>,
{
    let mut inner_opts = opts.clone();
    inner_opts.abs_tol *= 0.1;
    inner_opts.rel_tol *= 0.1;
    let mut inner_evals = 0usize;
    let res = try_integrate_interval(
        |u| {
            inner_opts.hints = inner_hints(u);
            let r = try_integrate_interval(|v| f(u, v), inner, &inner_opts).map_err(|e| {
                Error::Inner {
                    outer: u,
                    source: Box::new(e),
                }
            })?;
            inner_evals += r.evaluations;
            Ok(r.value)
        },
        outer,
        &QuadOptions {
            hints: opts.hints.clone(),
            ..opts.clone()
        },
    )?;
    Ok(QuadResult {
        evaluations: res.evaluations + inner_evals,
        ..res
    })
}

/// Nested integral with the error contract of [`integrate_finite`].
pub fn integrate_2d<F>(mut f: F, outer: Interval, inner: Interval, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Complex64,
{
    try_integrate_2d(
        |u, v| Ok(f(u, v)),
        outer,
        inner,
        &QuadOptions::new(tol),
        |_| Vec::new(),
    )
}
