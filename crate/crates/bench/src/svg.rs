//! Static scatter plot of labeled points.

use std::fmt::Write as _;

use hdr_core::prelude::*;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

fn span(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// 600x600 scatter, one circle per point with class `inside` or `outside`.
pub fn scatter(points: &[Point2], labels: &LabelVector, x_label: &str, y_label: &str) -> String {
    let (x0, x1) = span(points.iter().map(|p| p.x1));
    let (y0, y1) = span(points.iter().map(|p| p.x2));
    let w = SIZE - 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 600" width="600" height="600">"#);
    s.push_str("<style>.inside{fill:#1f77b4;fill-opacity:0.5}.outside{fill:#d62728}</style>\n");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="600" height="600" fill="white"/>"#);
    for (p, l) in points.iter().zip(&labels.labels) {
        let cx = MARGIN + (p.x1 - x0) / (x1 - x0) * w;
        let cy = SIZE - MARGIN - (p.x2 - y0) / (y1 - y0) * w;
        let class = if l.is_inside() { "inside" } else { "outside" };
        let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="2" class="{class}"/>"#);
    }
    let _ = writeln!(s, r#"<text x="300" y="596" text-anchor="middle" font-size="12">{}</text>"#, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="12" y="300" text-anchor="middle" font-size="12" transform="rotate(-90 12 300)">{}</text>"#,
        escape(y_label)
    );
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
