//! CSV and SVG renderings of traced nodal curves.
//!
//! Output is deterministic: coordinates use fixed six-decimal formatting and
//! curves are written in the order given.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::NodalCurve;

pub const SVG_SIZE: f64 = 1000.0;
pub const CSV_HEADER: &str = "x,y,arclength,curvature";

/// `x,y,arclength,curvature` rows for one curve, with header.
pub fn curve_csv(curve: &NodalCurve) -> String {
    let mut out = String::with_capacity(64 * curve.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for ((z, s), k) in curve.points.iter().zip(&curve.arc_lengths).zip(&curve.curvatures) {
        writeln!(out, "{:.12},{:.12},{:.12},{:.12}", z.re, z.im, s, k).expect("writing to a String");
    }
    out
}

/// Disk coordinates to the viewport: `x_px = 500 + 500 x`, `y_px = 500 - 500 y`.
fn to_px(x: f64, y: f64) -> (f64, f64) {
    let half = SVG_SIZE / 2.0;
    (half + half * x, half - half * y)
}

/// `-0.000000` prints as `0.000000` so equal geometry gives equal bytes.
fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// The unit circle and one `<path>` per curve in a 1000x1000 viewport.
pub fn render_svg(curves: &[NodalCurve]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidInput("no curves to render".into()));
    }
    let mut out = String::new();
    let size = fmt6(SVG_SIZE);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .expect("writing to a String");
    let (cx, cy) = to_px(0.0, 0.0);
    writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        fmt6(cx),
        fmt6(cy),
        fmt6(SVG_SIZE / 2.0)
    )
    .expect("writing to a String");
    for curve in curves {
        let mut d = String::new();
        for (i, z) in curve.points.iter().enumerate() {
            let (x, y) = to_px(z.re, z.im);
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{}{} {} ", cmd, fmt6(x), fmt6(y)).expect("writing to a String");
        }
        if curve.closed {
            d.push('Z');
        }
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="crimson" stroke-width="2"/>"#,
            d.trim_end()
        )
        .expect("writing to a String");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace_nodal_set, TraceConfig};
    use crate::series::PowerSeries;

    fn square_curves() -> Vec<NodalCurve> {
        let s = PowerSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        trace_nodal_set(&s, &TraceConfig::default()).unwrap()
    }

    #[test]
    fn svg_has_one_path_per_curve_and_is_stable() {
        let curves = square_curves();
        let a = render_svg(&curves).unwrap();
        let b = render_svg(&square_curves()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<path").count(), 2);
        assert_eq!(a.matches("<circle").count(), 1);
        assert!(a.contains(r#"cx="500.000000""#));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(render_svg(&[]).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let curves = square_curves();
        let csv = curve_csv(&curves[0]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), curves[0].len());
    }
}
