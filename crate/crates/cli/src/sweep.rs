//! Parameter sweeps: grid construction and the fixed-header CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use rayon::prelude::*;

use qsigma_core::{ComplexValue, Error, Result};

use crate::model::{evaluate, Model, Point, Record};
use crate::output::{complex_cells, error_code, num, svg_chart};

pub const SWEEP_HEADER: &str = "var,re_total,im_total,re_classic,im_classic,re_s1,im_s1,re_s2,im_s2,method";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    X,
    Y,
    Q,
    Alpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
    Abs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Total,
    Classic,
    Quant,
    Sigma1,
    Sigma2,
}

/// Which scalar of a record a chart shows, written `part_quantity`, e.g. `abs_total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selector {
    pub part: Part,
    pub quantity: Quantity,
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (p, q) = s.split_once('_').ok_or_else(|| format!("expected part_quantity, got {s:?}"))?;
        let part = match p {
            "re" => Part::Re,
            "im" => Part::Im,
            "abs" => Part::Abs,
            _ => return Err(format!("part must be re, im or abs, got {p:?}")),
        };
        let quantity = match q {
            "total" => Quantity::Total,
            "classic" => Quantity::Classic,
            "quant" => Quantity::Quant,
            "sigma1" => Quantity::Sigma1,
            "sigma2" => Quantity::Sigma2,
            _ => return Err(format!("quantity must be total, classic, quant, sigma1 or sigma2, got {q:?}")),
        };
        Ok(Selector { part, quantity })
    }
}

impl Selector {
    pub fn pick(&self, r: &Record) -> f64 {
        let c = match self.quantity {
            Quantity::Total => r.total,
            Quantity::Classic => r.classic,
            Quantity::Quant => r.quant,
            Quantity::Sigma1 => r.sigma1,
            Quantity::Sigma2 => r.sigma2,
        };
        match self.part {
            Part::Re => c.re,
            Part::Im => c.im,
            Part::Abs => c.abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub vary: Vary,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
    /// Values of the parameters not being varied.
    pub fixed: Point,
    pub output: Selector,
}

fn bad(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}

/// `points` values from `from` to `to` inclusive, endpoints exact.
pub fn grid(from: f64, to: f64, points: usize, scale: Scale) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || !(from < to) {
        return Err(bad("from", from, "need finite from < to"));
    }
    if points < 2 {
        return Err(bad("points", points as f64, "need at least 2 points"));
    }
    if scale == Scale::Log && !(from > 0.0) {
        return Err(bad("from", from, "log scale needs from > 0"));
    }
    let n = points - 1;
    let mut g: Vec<f64> = (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            match scale {
                Scale::Linear => from + (to - from) * t,
                Scale::Log => (from.ln() + (to.ln() - from.ln()) * t).exp(),
            }
        })
        .collect();
    g[0] = from;
    g[n] = to;
    Ok(g)
}

impl SweepSpec {
    pub fn point_at(&self, v: f64) -> Point {
        let mut p = self.fixed;
        match self.vary {
            Vary::X => p.x = v,
            Vary::Y => p.y = v,
            Vary::Q => p.q = v,
            Vary::Alpha => p.alpha = Some(v),
        }
        p
    }

    pub fn var_name(&self) -> &'static str {
        match self.vary {
            Vary::X => "x",
            Vary::Y => "y",
            Vary::Q => "q",
            Vary::Alpha => "alpha",
        }
    }

    pub fn validate(&self) -> Result<Vec<f64>> {
        if self.vary == Vary::Alpha && self.model != Model::General {
            return Err(bad("alpha", self.from, "only the general model depends on alpha"));
        }
        grid(self.from, self.to, self.points, self.scale)
    }
}

pub struct SweepResult {
    pub grid: Vec<f64>,
    pub rows: Vec<Result<Record>>,
}

pub fn run_sweep(spec: &SweepSpec, tol: f64) -> Result<SweepResult> {
    let grid = spec.validate()?;
    let rows = grid.par_iter().map(|&v| evaluate(spec.model, &spec.point_at(v), tol)).collect();
    Ok(SweepResult { grid, rows })
}

fn fixed_desc(spec: &SweepSpec) -> String {
    let f = spec.fixed;
    let mut parts = Vec::new();
    for (name, v, skip) in [
        ("x", Some(f.x), spec.vary == Vary::X),
        ("y", Some(f.y), spec.vary == Vary::Y),
        ("q", Some(f.q), spec.vary == Vary::Q),
        ("alpha", f.alpha, spec.vary == Vary::Alpha),
    ] {
        if let (Some(v), false) = (v, skip) {
            parts.push(format!("{name}={}", num(v)));
        }
    }
    parts.join(" ")
}

pub fn sweep_csv(spec: &SweepSpec, tol: f64, res: &SweepResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# qsigma sweep model={} vary={} from={} to={} points={} scale={}",
        spec.model.name(),
        spec.var_name(),
        num(spec.from),
        num(spec.to),
        spec.points,
        if spec.scale == Scale::Log { "log" } else { "linear" }
    );
    let _ = writeln!(s, "# fixed {}", fixed_desc(spec));
    let _ = writeln!(s, "# tol={}", num(tol));
    if let Some(note) = spec.model.column_note() {
        let _ = writeln!(s, "# columns: {note}");
    }
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    let mut skipped = Vec::new();
    for (v, row) in res.grid.iter().zip(&res.rows) {
        match row {
            Ok(r) => {
                let cells: Vec<String> = [r.total, r.classic, r.sigma1, r.sigma2]
                    .into_iter()
                    .flat_map(complex_cells)
                    .collect();
                let _ = writeln!(s, "{},{},{}", num(*v), cells.join(","), r.method);
            }
            Err(e) => {
                let _ = writeln!(s, "{},,,,,,,,,skipped", num(*v));
                skipped.push(format!("# skipped {}={}: {}: {e}", spec.var_name(), num(*v), error_code(e)));
            }
        }
    }
    for line in skipped {
        s.push_str(&line);
        s.push('\n');
    }
    s
}

pub fn sweep_svg(spec: &SweepSpec, res: &SweepResult, label: &str) -> String {
    let ys = res.rows.iter().map(|r| r.as_ref().ok().map(|r| spec.output.pick(r))).collect();
    let title = format!("{} {} ({})", spec.model.name(), label, fixed_desc(spec));
    svg_chart(&title, spec.var_name(), &res.grid, &[(label.to_string(), ys)], spec.scale == Scale::Log)
}

/// Parsed CSV data row of a sweep: `(var, [total, classic, s1, s2], method)`.
pub type SweepRow = (f64, Option<[ComplexValue; 4]>, String);

/// Reads back what [`sweep_csv`] wrote.
pub fn parse_sweep_csv(text: &str) -> std::result::Result<Vec<SweepRow>, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some(SWEEP_HEADER) {
        return Err("missing header".into());
    }
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 10 {
                return Err(format!("bad row {l:?}"));
            }
            let var = f[0].parse::<f64>().map_err(|e| e.to_string())?;
            let vals = if f[9] == "skipped" {
                None
            } else {
                let mut v = [ComplexValue::ZERO; 4];
                for (k, slot) in v.iter_mut().enumerate() {
                    let re = f[1 + 2 * k].parse::<f64>().map_err(|e| e.to_string())?;
                    let im = f[2 + 2 * k].parse::<f64>().map_err(|e| e.to_string())?;
                    *slot = ComplexValue::new(re, im).map_err(|e| e.to_string())?;
                }
                Some(v)
            };
            Ok((var, vals, f[9].to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = grid(0.1, 3.0, 5, Scale::Linear).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!((g[0], g[4]), (0.1, 3.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let l = grid(0.01, 100.0, 5, Scale::Log).unwrap();
        assert!((l[2] - 1.0).abs() < 1e-14);
        assert!(grid(0.0, 1.0, 5, Scale::Log).is_err());
        assert!(grid(1.0, 1.0, 5, Scale::Linear).is_err());
        assert!(grid(0.0, 1.0, 1, Scale::Linear).is_err());
    }

    #[test]
    fn selectors() {
        let s: Selector = "im_sigma2".parse().unwrap();
        assert_eq!(s, Selector { part: Part::Im, quantity: Quantity::Sigma2 });
        assert!("abs".parse::<Selector>().is_err());
        assert!("mod_total".parse::<Selector>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let spec = SweepSpec {
            model: Model::Degenerate,
            vary: Vary::Q,
            from: 0.1,
            to: 3.0,
            points: 5,
            scale: Scale::Linear,
            fixed: Point { x: 1.0, y: 0.01, q: f64::NAN, alpha: None },
            output: "abs_total".parse().unwrap(),
        };
        let res = run_sweep(&spec, 1e-10).unwrap();
        let text = sweep_csv(&spec, 1e-10, &res);
        let rows = parse_sweep_csv(&text).unwrap();
        assert_eq!(rows.len(), 5);
        for ((v, vals, _), (g, r)) in rows.iter().zip(res.grid.iter().zip(&res.rows)) {
            assert_eq!(v.to_bits(), g.to_bits());
            assert_eq!(vals.unwrap()[0], r.as_ref().unwrap().total);
        }
    }

    #[test]
    fn alpha_sweep_needs_general_model() {
        let spec = SweepSpec {
            model: Model::Degenerate,
            vary: Vary::Alpha,
            from: 0.0,
            to: 1.0,
            points: 3,
            scale: Scale::Linear,
            fixed: Point { x: 1.0, y: 0.1, q: 1.0, alpha: None },
            output: "abs_total".parse().unwrap(),
        };
        assert!(spec.validate().is_err());
    }
}
