//! Profile plot: the curve, the x-axis and marked singular points, drawn
//! with equal scale on both axes.

use std::fmt::Write as _;

use singrev::CurveSample;

const MAX_SIDE: f64 = 800.0;
const MARGIN: f64 = 20.0;

pub fn render(samples: &[CurveSample], marks: &[(f64, f64)]) -> String {
    let xs = samples.iter().map(|s| s.x);
    let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let y_hi = samples.iter().fold(0.0_f64, |m, s| m.max(s.y));
    let x_span = (x_hi - x_lo).max(1e-12);
    let y_span = y_hi.max(1e-12);
    let inner = MAX_SIDE - 2.0 * MARGIN;
    let scale = (inner / x_span).min(inner / y_span);
    let width = x_span * scale + 2.0 * MARGIN;
    let height = y_span * scale + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x_lo) * scale;
    let py = |y: f64| height - MARGIN - y * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"  <line class="x-axis" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-width="1"/>"#,
        px(x_lo),
        py(0.0),
        px(x_hi),
        py(0.0)
    );
    out.push_str(r#"  <polyline class="profile" fill="none" stroke="black" stroke-width="1.5" points=""#);
    for (i, s) in samples.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.3},{:.3}", px(s.x), py(s.y));
    }
    out.push_str("\"/>\n");
    for &(x, y) in marks {
        let _ = writeln!(
            out,
            r#"  <circle class="singular" cx="{:.3}" cy="{:.3}" r="4" fill="red"/>"#,
            px(x),
            py(y)
        );
    }
    out.push_str("</svg>\n");
    out
}
