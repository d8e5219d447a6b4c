//! CSV cells, error objects and SVG polylines.

use serde::Serialize;

use qsigma_core::{ComplexValue, Error};

/// Shortest decimal that parses back to the same bits.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn complex_cells(c: ComplexValue) -> [String; 2] {
    [num(c.re), num(c.im)]
}

/// Machine-readable failure report.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub code: &'static str,
    pub message: String,
    pub param_echo: serde_json::Value,
}

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;

pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::Pole(_) => "pole",
        Error::NonFinite(_) => "non_finite",
        Error::NonConvergence { .. } | Error::Inner { .. } => "non_convergence",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_quadrature_failure() {
        EXIT_QUADRATURE
    } else {
        EXIT_INVALID
    }
}

const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f",
];

/// Line chart of several curves over a shared abscissa. Non-finite points and,
/// on a log axis, non-positive abscissae break the polyline instead of
/// distorting it.
pub fn svg_chart(title: &str, x_label: &str, xs: &[f64], curves: &[(String, Vec<Option<f64>>)], log_x: bool) -> String {
    let (w, h, m) = (800.0, 500.0, 60.0);
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let usable = |x: f64| x.is_finite() && (!log_x || x > 0.0);
    let xr = xs.iter().copied().filter(|&x| usable(x)).map(tx);
    let (x0, x1) = xr.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let ys = curves.iter().flat_map(|(_, c)| c.iter().flatten().copied()).filter(|v| v.is_finite());
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !(y0 < y1) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| m + (tx(x) - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n\
         <text x=\"10\" y=\"{}\" font-size=\"11\">{y1:.4e}</text>\n\
         <text x=\"10\" y=\"{}\" font-size=\"11\">{y0:.4e}</text>\n",
        w - 2.0 * m,
        h - 2.0 * m,
        w / 2.0,
        escape(title),
        w / 2.0,
        h - 15.0,
        escape(x_label),
        m + 4.0,
        h - m,
    );
    for (k, (name, ys)) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, out: &mut String| {
            if run.len() > 1 {
                out.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                    run.join(" ")
                ));
            }
            run.clear();
        };
        for (&x, y) in xs.iter().zip(ys) {
            match y {
                Some(y) if y.is_finite() && usable(x) => run.push(format!("{:.2},{:.2}", sx(x), sy(*y))),
                _ => flush(&mut run, &mut out),
            }
        }
        flush(&mut run, &mut out);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            w - m - 150.0,
            m + 18.0 * (k as f64 + 1.0),
            escape(name)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 5e-324, f64::MAX] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn svg_breaks_on_gaps_and_clips_log_axis() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let curve = vec![Some(1.0), Some(2.0), None, Some(f64::NAN), Some(3.0)];
        let lin = svg_chart("t", "x", &xs, &[("a".into(), curve.clone())], false);
        assert_eq!(lin.matches("<polyline").count(), 1);
        let log = svg_chart("t", "x", &xs, &[("a".into(), curve)], true);
        // x = 0 is dropped on a log axis, leaving no run of two points
        assert_eq!(log.matches("<polyline").count(), 0);
        assert!(!log.contains("NaN") && !log.contains("inf"));
    }

    #[test]
    fn error_codes() {
        let e = Error::Pole("p".into());
        assert_eq!((error_code(&e), exit_code(&e)), ("pole", 2));
        let e = Error::NonFinite("n".into());
        assert_eq!(exit_code(&e), 3);
    }
}
