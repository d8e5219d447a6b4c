//! Side-by-side table of the kinetic, corrected, classical and Lindhard values.

use std::fmt::Write as _;

use rayon::prelude::*;

use qsigma_core::lindhard::{coincidence_checks, ComparisonRow, CoincidenceCheck};
use qsigma_core::{ComplexValue, DegenerateParams, Result};

use crate::output::{complex_cells, error_code, num};

/// Bound on `|closed-form difference − (σ_tr − σ_tr⁽¹⁾)|`.
pub const DIFFERENCE_TOL: f64 = 1e-10;
/// Relative bound on `|σ_tr⁽¹⁾ − (i·y/x + σ₂)|`.
pub const ASSEMBLY_TOL: f64 = 1e-12;

pub const DEFAULT_X: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 3.0];
pub const DEFAULT_Y: [f64; 2] = [0.01, 0.1];
pub const DEFAULT_Q: [f64; 6] = [0.1, 0.3, 0.5, 1.0, 2.0, 3.0];

pub fn product_grid(xs: &[f64], ys: &[f64], qs: &[f64]) -> Result<Vec<DegenerateParams>> {
    let mut g = Vec::new();
    for &x in xs {
        for &y in ys {
            for &q in qs {
                g.push(DegenerateParams::new(x, y, q)?);
            }
        }
    }
    Ok(g)
}

pub struct CompareOutput {
    pub csv: String,
    /// All rows evaluated and both oracle columns pass everywhere.
    pub oracles_pass: bool,
    pub checks: Vec<CoincidenceCheck>,
}

const VALUE_COLUMNS: [&str; 7] = ["sigma_tr", "sigma_tr_1", "sigma_classic", "sigma_l", "sigma2", "sigma2_l", "diff_closed"];

pub fn header() -> String {
    let mut h = vec!["x".to_string(), "y".into(), "q".into()];
    for c in VALUE_COLUMNS {
        h.push(format!("re_{c}"));
        h.push(format!("im_{c}"));
    }
    for c in [
        "difference_residual",
        "assembly_residual",
        "difference_ok",
        "assembly_ok",
        "claim",
        "claim_gap",
        "claim_pass",
        "status",
    ] {
        h.push(c.into());
    }
    h.join(",")
}

fn values(r: &ComparisonRow) -> [ComplexValue; 7] {
    [r.sigma_tr, r.sigma_tr_1, r.sigma_classic, r.sigma_l, r.sigma2, r.sigma2_l, r.diff_closed]
}

pub fn run_compare(grid: &[DegenerateParams]) -> Result<CompareOutput> {
    let checks = coincidence_checks()?;
    let rows: Vec<Result<ComparisonRow>> = grid.par_iter().map(ComparisonRow::at).collect();
    let mut csv = String::new();
    let _ = writeln!(csv, "# qsigma compare: {} points", grid.len());
    let _ = writeln!(
        csv,
        "# oracle columns: difference_ok (closed-form difference vs subtraction <= {DIFFERENCE_TOL:e}), \
         assembly_ok (sigma_tr_1 = i*y/x + sigma2 <= {ASSEMBLY_TOL:e} relative)"
    );
    let _ = writeln!(csv, "# claim columns: coincidence claims at their operating points (relative gap < 1e-2)");
    csv.push_str(&header());
    csv.push('\n');
    let mut all_ok = true;
    for (p, row) in grid.iter().zip(&rows) {
        let mut cells = vec![num(p.x()), num(p.y()), num(p.q())];
        let claim = checks.iter().find(|c| c.params == *p);
        let claim_cells = match claim {
            Some(c) => [c.name.to_string(), num(c.gap), c.pass.to_string()],
            None => Default::default(),
        };
        match row {
            Ok(r) => {
                cells.extend(values(r).into_iter().flat_map(complex_cells));
                let d = r.difference_residual();
                let a = r.assembly_residual();
                let d_ok = d <= DIFFERENCE_TOL;
                let a_ok = a <= ASSEMBLY_TOL * (1.0 + r.sigma_tr_1.abs());
                all_ok &= d_ok && a_ok;
                cells.extend([num(d), num(a), d_ok.to_string(), a_ok.to_string()]);
                cells.extend(claim_cells);
                cells.push("ok".into());
            }
            Err(e) => {
                all_ok = false;
                cells.extend(std::iter::repeat(String::new()).take(2 * VALUE_COLUMNS.len() + 4));
                cells.extend(claim_cells);
                cells.push(format!("error:{}", error_code(e)));
            }
        }
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    for c in &checks {
        let _ = writeln!(
            csv,
            "# claim {} at x={} y={} q={}: gap={} pass={}",
            c.name,
            num(c.params.x()),
            num(c.params.y()),
            num(c.params.q()),
            num(c.gap),
            c.pass
        );
    }
    Ok(CompareOutput {
        csv,
        oracles_pass: all_ok,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_contains_claim_points() {
        let g = product_grid(&DEFAULT_X, &DEFAULT_Y, &DEFAULT_Q).unwrap();
        let checks = coincidence_checks().unwrap();
        for c in &checks {
            assert!(g.contains(&c.params), "{}", c.name);
        }
    }

    #[test]
    fn table_shape() {
        let g = product_grid(&[1.0], &[0.01], &[1.0, 2.0]).unwrap();
        let out = run_compare(&g).unwrap();
        let cols = header().split(',').count();
        let data: Vec<&str> = out.csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(data.len(), 2);
        assert!(data.iter().all(|l| l.split(',').count() == cols));
        assert!(out.oracles_pass);
    }
}
