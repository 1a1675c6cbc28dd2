//! Deterministic SVG 1.1 rendering of planar point sequences.

use std::fmt::Write;

use num_traits::ToPrimitive;
use ordertype_core::PointSequence;

const CANVAS: u32 = 800;

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    // Avoid "-0.0000".
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".to_string()
    } else {
        s
    }
}

/// Points are labelled by index; `path` (possibly empty) is drawn as a
/// highlighted polyline. The y axis points up.
pub fn render(seq: &PointSequence, path: &[usize]) -> String {
    let xy: Vec<(f64, f64)> = seq
        .points()
        .iter()
        .map(|p| {
            let x = p.coord(0).to_f64().unwrap_or(0.0);
            let y = p.coord(1).to_f64().unwrap_or(0.0);
            (x, -y)
        })
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(&(x, y)) = xy.first() {
        (lo_x, hi_x, lo_y, hi_y) = (x, x, y, y);
    }
    for &(x, y) in &xy {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let extent = (hi_x - lo_x).max(hi_y - lo_y).max(1.0);
    let pad = extent * 0.08;
    let r = extent / 150.0;
    let font = extent / 40.0;

    let mut out = String::new();
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" viewBox="{} {} {} {}">"#,
        num(lo_x - pad),
        num(lo_y - pad),
        num(hi_x - lo_x + 2.0 * pad),
        num(hi_y - lo_y + 2.0 * pad)
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        num(lo_x - pad),
        num(lo_y - pad),
        num(hi_x - lo_x + 2.0 * pad),
        num(hi_y - lo_y + 2.0 * pad)
    )
    .unwrap();
    if path.len() > 1 {
        let pts: Vec<String> = path
            .iter()
            .map(|&i| format!("{},{}", num(xy[i].0), num(xy[i].1)))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="crimson" stroke-width="{}"/>"#,
            pts.join(" "),
            num(r / 2.0)
        )
        .unwrap();
    }
    for (i, &(x, y)) in xy.iter().enumerate() {
        let colour = if path.contains(&i) {
            "crimson"
        } else {
            "black"
        };
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{colour}"/>"#,
            num(x),
            num(y),
            num(r)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}">{i}</text>"#,
            num(x + 1.5 * r),
            num(y - 1.5 * r),
            num(font)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
