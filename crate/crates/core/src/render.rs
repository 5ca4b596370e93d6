//! Pictures of attainable sets: `χ⁻` to the right, `g` upwards, a cross
//! at every attainable point of the window.

use std::fmt::Write;

use crate::attainable::{membership, saturate_window, AttainablePoint, AttainableSetDescription};

/// Text grid, rows of decreasing genus and columns of even `χ⁻`.
/// Empty for an empty window.
pub fn render_ascii(d: &AttainableSetDescription, chi_max: i64, g_max: i64) -> String {
    if chi_max < 0 || g_max < 0 {
        return String::new();
    }
    let chis: Vec<i64> = (0..=chi_max).step_by(2).collect();
    let cell = chi_max.to_string().len() + 1;
    let margin = g_max.to_string().len().max(1);
    let mut out = String::new();
    writeln!(out, "{:>margin$}", "g").unwrap();
    for g in (0..=g_max).rev() {
        write!(out, "{g:>margin$} |").unwrap();
        for &chi in &chis {
            let mark = if membership(d, AttainablePoint::new(chi, g)) { "x" } else { "." };
            write!(out, "{mark:>cell$}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "{:>margin$} +{}", "", "-".repeat(cell * chis.len())).unwrap();
    write!(out, "{:>margin$}  ", "").unwrap();
    for &chi in &chis {
        write!(out, "{chi:>cell$}").unwrap();
    }
    out.push_str("  χ⁻\n");
    out
}

const UNIT: f64 = 30.0;
const PAD: f64 = 40.0;
const ARM: f64 = 4.0;

/// Standalone SVG with axes, the shaded region `χ ≤ 2g − 2n₀` above the
/// minima, and one `class="cross"` group per attainable point.
pub fn render_svg(d: &AttainableSetDescription, chi_max: i64, g_max: i64) -> String {
    let (cm, gm) = (chi_max.max(0) as f64, g_max.max(0) as f64);
    let width = cm * UNIT + 2.0 * PAD;
    let height = gm * UNIT + 2.0 * PAD;
    let x = |chi: f64| PAD + chi * UNIT;
    let y = |g: f64| PAD + (gm - g) * UNIT;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<defs><clipPath id="window"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        x(-0.5),
        y(gm + 0.5),
        (cm + 1.0) * UNIT,
        (gm + 1.0) * UNIT
    )
    .unwrap();
    if chi_max >= 0 && g_max >= 0 {
        let top = gm + 1.0;
        let mut poly: Vec<(f64, f64)> = Vec::new();
        let n0 = if d.sphere_case { 1 } else { d.n0 };
        let steps: Vec<AttainablePoint> = if d.sphere_case {
            vec![AttainablePoint::new(0, 1)]
        } else {
            d.minima.clone()
        };
        if let Some(first) = steps.first() {
            poly.push((first.chi_minus as f64, top));
            for (i, m) in steps.iter().enumerate() {
                poly.push((m.chi_minus as f64, m.genus as f64));
                if let Some(next) = steps.get(i + 1) {
                    poly.push((next.chi_minus as f64, m.genus as f64));
                }
            }
            let last = steps.last().expect("nonempty");
            poly.push(((2 * last.genus - 2 * n0) as f64, last.genus as f64));
            poly.push((2.0 * top - 2.0 * n0 as f64, top));
            let points: Vec<String> = poly.iter().map(|&(c, g)| format!("{},{}", x(c), y(g))).collect();
            writeln!(
                s,
                r##"<polygon class="cone" clip-path="url(#window)" fill="#cccccc" stroke="none" points="{}"/>"##,
                points.join(" ")
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        r#"<g class="axes" stroke="black" fill="none"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"#,
        x(0.0),
        y(0.0),
        x(cm + 0.8),
        y(0.0),
        x(0.0),
        y(0.0),
        x(0.0),
        y(gm + 0.8)
    )
    .unwrap();
    writeln!(
        s,
        r#"<g class="labels" font-family="sans-serif" font-size="10" text-anchor="middle">"#
    )
    .unwrap();
    for chi in (0..=chi_max).step_by(2) {
        writeln!(s, r#"<text x="{}" y="{}">{chi}</text>"#, x(chi as f64), y(0.0) + 14.0).unwrap();
    }
    for g in 0..=g_max {
        writeln!(s, r#"<text x="{}" y="{}">{g}</text>"#, x(0.0) - 12.0, y(g as f64) + 3.0).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}">χ⁻</text>"#, x(cm + 0.8), y(0.0) + 28.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}">g</text>"#, x(0.0) - 24.0, y(gm + 0.8)).unwrap();
    s.push_str("</g>\n");
    for p in saturate_window(d, chi_max, g_max) {
        let (cx, cy) = (x(p.chi_minus as f64), y(p.genus as f64));
        writeln!(
            s,
            r#"<g class="cross" stroke="black"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"#,
            cx - ARM,
            cy - ARM,
            cx + ARM,
            cy + ARM,
            cx - ARM,
            cy + ARM,
            cx + ARM,
            cy - ARM
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
