//! Data behind the ten reference figures.
//!
//! Abscissa ranges are not given with the figures, so each uses a uniform
//! grid merged with the operating points of the coincidence checks; both are
//! recorded in the `#` header of the CSV.

use std::fmt::Write as _;

use rayon::prelude::*;

use qsigma_core::lindhard::ComparisonRow;
use qsigma_core::{ComplexValue, DegenerateParams, Error, Result};

use crate::output::{opt_num, svg_chart};
use crate::sweep::{grid, Scale};

pub const DEFAULT_POINTS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Plotted {
    /// `|σ₂|` and `|σ̂₂^L|`.
    QuantumSummands,
    Re,
    Im,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub caption: &'static str,
    pub axis: Axis,
    pub range: (f64, f64),
    pub anchors: &'static [f64],
    /// Fixed `y`, and fixed `x` or the list of `q` values.
    pub y: f64,
    pub fixed: &'static [f64],
    plotted: Plotted,
}

impl FigureSpec {
    pub fn new(id: u8) -> Result<Self> {
        use Axis::*;
        use Plotted::*;
        let (caption, axis, range, anchors, fixed, plotted): (_, _, _, &'static [f64], &'static [f64], _) = match id {
            1 => ("q=2, y=0.01: |sigma2| vs x", X, (0.02, 3.0), &[0.05], &[2.0], QuantumSummands),
            2 => ("x=1, y=0.01: |sigma2| vs q", Q, (0.05, 3.0), &[], &[1.0], QuantumSummands),
            3 => ("x=0.001, y=0.01: Re sigma_tr vs q", Q, (0.01, 3.0), &[0.02, 0.04, 0.1], &[0.001], Re),
            4 => ("x=0.001, y=0.01: Im sigma_tr vs q", Q, (0.01, 3.0), &[0.02, 0.04, 0.1], &[0.001], Im),
            5 => ("x=0.1, y=0.01: Re sigma_tr vs q", Q, (0.05, 3.0), &[0.1], &[0.1], Re),
            6 => ("x=0.1, y=0.01: Im sigma_tr vs q", Q, (0.05, 3.0), &[0.1], &[0.1], Im),
            7 => ("y=0.01, q=0.5: Re sigma_tr vs x", X, (0.02, 3.0), &[2.0], &[0.5], Re),
            8 => ("y=0.01, q=0.5: Im sigma_tr vs x", X, (0.02, 3.0), &[2.0], &[0.5], Im),
            9 => ("y=0.01, q=0.1,1,2: Re sigma_tr vs x", X, (0.02, 3.0), &[], &[0.1, 1.0, 2.0], Re),
            10 => ("y=0.01, q=0.1,1,2: Im sigma_tr vs x", X, (0.02, 3.0), &[], &[0.1, 1.0, 2.0], Im),
            _ => {
                return Err(Error::InvalidParameter {
                    name: "id",
                    value: id as f64,
                    reason: "figure id must be 1..10",
                })
            }
        };
        Ok(FigureSpec {
            id,
            caption,
            axis,
            range,
            anchors,
            y: 0.01,
            fixed,
            plotted,
        })
    }

    pub fn var_name(&self) -> &'static str {
        match self.axis {
            Axis::X => "x",
            Axis::Q => "q",
        }
    }

    /// Uniform grid plus anchors, sorted and deduplicated.
    pub fn abscissae(&self, points: usize) -> Result<Vec<f64>> {
        let mut g = grid(self.range.0, self.range.1, points, Scale::Linear)?;
        g.extend(self.anchors.iter().copied().filter(|a| *a >= self.range.0 && *a <= self.range.1));
        g.sort_by(f64::total_cmp);
        g.dedup();
        Ok(g)
    }

    fn params(&self, v: f64, fixed: f64) -> Result<DegenerateParams> {
        match self.axis {
            Axis::X => DegenerateParams::new(v, self.y, fixed),
            Axis::Q => DegenerateParams::new(fixed, self.y, v),
        }
    }

    fn label(&self, fixed: f64) -> String {
        if self.fixed.len() > 1 {
            format!("_q{fixed}")
        } else {
            String::new()
        }
    }

    pub fn columns(&self) -> Vec<String> {
        match self.plotted {
            Plotted::QuantumSummands => vec!["abs_sigma2".into(), "abs_sigma2_l".into()],
            Plotted::Re | Plotted::Im => {
                let part = if self.plotted == Plotted::Re { "re" } else { "im" };
                let mut cols = Vec::new();
                for curve in ["tr", "tr1", "classic"] {
                    for &f in self.fixed {
                        cols.push(format!("{part}_{curve}{}", self.label(f)));
                    }
                }
                cols
            }
        }
    }

    fn cells(&self, row: &Result<ComparisonRow>) -> Vec<Option<f64>> {
        let n = if self.plotted == Plotted::QuantumSummands { 2 } else { 3 };
        let Ok(r) = row else {
            return vec![None; n];
        };
        let part = |c: ComplexValue| if self.plotted == Plotted::Re { c.re } else { c.im };
        match self.plotted {
            Plotted::QuantumSummands => vec![Some(r.sigma2.abs()), Some(r.sigma2_l.abs())],
            _ => vec![Some(part(r.sigma_tr)), Some(part(r.sigma_tr_1)), Some(part(r.sigma_classic))],
        }
    }
}

pub struct FigureData {
    pub spec: FigureSpec,
    pub points: usize,
    pub abscissae: Vec<f64>,
    pub columns: Vec<String>,
    /// `values[row][column]`
    pub values: Vec<Vec<Option<f64>>>,
}

pub fn compute(spec: &FigureSpec, points: usize) -> Result<FigureData> {
    let xs = spec.abscissae(points)?;
    let values = xs
        .par_iter()
        .map(|&v| {
            // one block of curves per fixed value; reorder to curve-major columns
            let blocks: Vec<Vec<Option<f64>>> = spec
                .fixed
                .iter()
                .map(|&f| spec.cells(&spec.params(v, f).and_then(|p| ComparisonRow::at(&p))))
                .collect();
            let n = blocks[0].len();
            (0..n).flat_map(|c| blocks.iter().map(move |b| b[c])).collect()
        })
        .collect();
    Ok(FigureData {
        columns: spec.columns(),
        spec: spec.clone(),
        points,
        abscissae: xs,
        values,
    })
}

impl FigureData {
    pub fn csv(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        let _ = writeln!(out, "# qsigma figure {}: {}", s.id, s.caption);
        let _ = writeln!(
            out,
            "# abscissa {} uniform on [{}, {}] with {} points",
            s.var_name(),
            s.range.0,
            s.range.1,
            self.points
        );
        if !s.anchors.is_empty() {
            let a: Vec<String> = s.anchors.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(out, "# merged anchor points {}={}", s.var_name(), a.join(","));
        }
        let _ = writeln!(
            out,
            "# curves: tr = kinetic sigma_tr, tr1 = gauge term + sigma2, classic = classical part, \
             abs_sigma2 = |sigma2|, abs_sigma2_l = |lindhard quantum summand|; empty cell = not evaluable"
        );
        out.push_str(s.var_name());
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (v, row) in self.abscissae.iter().zip(&self.values) {
            out.push_str(&format!("{v:?}"));
            for c in row {
                out.push(',');
                out.push_str(&opt_num(*c));
            }
            out.push('\n');
        }
        out
    }

    pub fn svg(&self) -> String {
        let curves: Vec<(String, Vec<Option<f64>>)> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, name)| (name.clone(), self.values.iter().map(|r| r[k]).collect()))
            .collect();
        svg_chart(
            &format!("Figure {}: {}", self.spec.id, self.spec.caption),
            self.spec.var_name(),
            &self.abscissae,
            &curves,
            false,
        )
    }
}

/// A figure CSV read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub var: String,
    pub columns: Vec<String>,
    pub abscissae: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl FigureTable {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header: Vec<String> = lines.next().ok_or("empty file")?.split(',').map(String::from).collect();
        let (var, columns) = header.split_first().ok_or("empty header")?;
        let mut abscissae = Vec::new();
        let mut values = Vec::new();
        for l in lines {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != header.len() {
                return Err(format!("bad row {l:?}"));
            }
            abscissae.push(f[0].parse::<f64>().map_err(|e| e.to_string())?);
            values.push(
                f[1..]
                    .iter()
                    .map(|c| if c.is_empty() { Ok(None) } else { c.parse::<f64>().map(Some) })
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?,
            );
        }
        Ok(FigureTable {
            var: var.clone(),
            columns: columns.to_vec(),
            abscissae,
            values,
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.values.iter().map(|r| r[k]).collect())
    }

    /// Values of a column at an abscissa present in the file.
    pub fn at(&self, name: &str, v: f64) -> Option<f64> {
        let k = self.columns.iter().position(|c| c == name)?;
        let row = self.abscissae.iter().position(|a| *a == v)?;
        self.values[row][k]
    }
}
