//! Minimal static SVG plots.

use std::fmt::Write;

use disco_core::benchmark::{quantile_sorted, TimingReport};
use disco_core::discrepancy::MeasureKind;

const SIZE: f64 = 400.0;
const PAD: f64 = 40.0;

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Unit-square scatter with an `s x s` grid overlay.
pub fn scatter(x: &[f64], y: &[f64], s: usize) -> String {
    let side = SIZE - 2.0 * PAD;
    let mut out = header(SIZE, SIZE);
    let _ = writeln!(out, "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{side}\" height=\"{side}\" fill=\"none\" stroke=\"black\"/>");
    for i in 1..s {
        let t = PAD + side * i as f64 / s as f64;
        let _ = writeln!(
            out,
            "<path d=\"M{t:.2} {PAD}V{:.2}M{PAD} {t:.2}H{:.2}\" stroke=\"#ccc\"/>",
            PAD + side,
            PAD + side
        );
    }
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\"/>",
            PAD + side * a,
            PAD + side * (1.0 - b)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Box plots of `r` on a fixed [-1, 1] axis; whiskers span min to max.
pub fn boxplot(groups: &[(String, Vec<f64>)]) -> String {
    let width = PAD * 2.0 + 70.0 * groups.len() as f64;
    let plot_h = SIZE - 2.0 * PAD;
    let ypos = |r: f64| PAD + plot_h * (1.0 - (r + 1.0) / 2.0);
    let mut out = header(width, SIZE);
    for tick in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = ypos(tick);
        let _ = writeln!(
            out,
            "<path d=\"M{PAD} {y:.2}H{:.2}\" stroke=\"#ddd\"/><text x=\"4\" y=\"{:.2}\">{tick}</text>",
            width - PAD,
            y + 4.0
        );
    }
    for (i, (label, values)) in groups.iter().enumerate() {
        let cx = PAD + 70.0 * i as f64 + 35.0;
        let _ = writeln!(out, "<text x=\"{cx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{label}</text>", SIZE - 12.0);
        if values.is_empty() {
            continue;
        }
        let mut v = values.clone();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| ypos(quantile_sorted(&v, p));
        let (lo, q1, med, q3, hi) = (q(0.0), q(0.25), q(0.5), q(0.75), q(1.0));
        let _ = writeln!(
            out,
            "<path d=\"M{cx:.2} {lo:.2}V{q1:.2}M{cx:.2} {q3:.2}V{hi:.2}\" stroke=\"black\"/>\n\
             <rect x=\"{:.2}\" y=\"{q3:.2}\" width=\"40\" height=\"{:.2}\" fill=\"#9cf\" stroke=\"black\"/>\n\
             <path d=\"M{:.2} {med:.2}h40\" stroke=\"black\" stroke-width=\"2\"/>",
            cx - 20.0,
            q1 - q3,
            cx - 20.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Seconds against `n` (left) and `d` (right) on log-log axes, one polyline
/// per measure.
pub fn loglog(report: &TimingReport) -> String {
    let panel = SIZE - 2.0 * PAD;
    let mut out = header(2.0 * SIZE, SIZE);
    let secs: Vec<f64> = report.rows.iter().map(|r| r.seconds.ln()).collect();
    let (smin, smax) = bounds(&secs);
    for (p, facet) in ["n", "d"].iter().enumerate() {
        let x0 = PAD + p as f64 * SIZE;
        let rows: Vec<_> = report.rows.iter().filter(|r| r.facet == *facet).collect();
        let xs: Vec<f64> = rows
            .iter()
            .map(|r| (if *facet == "n" { r.n } else { r.d } as f64).ln())
            .collect();
        let (xmin, xmax) = bounds(&xs);
        let _ = writeln!(
            out,
            "<rect x=\"{x0}\" y=\"{PAD}\" width=\"{panel}\" height=\"{panel}\" fill=\"none\" stroke=\"black\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">log {facet}</text>",
            x0 + panel / 2.0,
            SIZE - 12.0
        );
        for (m, kind) in MeasureKind::ALL.iter().enumerate() {
            let pts: Vec<String> = rows
                .iter()
                .zip(&xs)
                .filter(|(r, _)| r.measure == *kind)
                .map(|(r, &x)| {
                    format!(
                        "{:.2},{:.2}",
                        x0 + panel * (x - xmin) / (xmax - xmin),
                        PAD + panel * (1.0 - (r.seconds.ln() - smin) / (smax - smin))
                    )
                })
                .collect();
            let hue = 360 * m / MeasureKind::ALL.len();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"hsl({hue},70%,40%)\"><title>{kind}</title></polyline>",
                pts.join(" ")
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, lo + 1.0)
    }
}
