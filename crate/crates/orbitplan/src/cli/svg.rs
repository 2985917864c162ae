//! Minimal self-contained SVG rendering: a heatmap for field slices and a
//! polyline plot for trajectories. No drawing dependencies; output is plain
//! deterministic text.

/// Map t in [0, 1] to a blue-to-yellow ramp.
fn ramp(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t) as u8;
    let g = (32.0 + 200.0 * t) as u8;
    let b = (96.0 + 130.0 * (1.0 - t)) as u8;
    (r, g, b)
}

/// Render an nx x ny grid (row-major in y then x, matching `planar_grid`)
/// as a heatmap. `None` cells (masked, e.g. inside the Earth) are dark gray.
/// Values are normalized to the grid maximum. The y axis points up.
pub fn heatmap_svg(nx: usize, ny: usize, values: &[Option<f64>], title: &str) -> String {
    assert_eq!(values.len(), nx * ny, "value count must match grid");
    let cell = 8.0_f64;
    let margin = 24.0;
    let w = margin * 2.0 + cell * nx as f64;
    let h = margin * 2.0 + cell * ny as f64 + 16.0;
    let vmax = values
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &v| m.max(v))
        .max(1e-300);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{margin}\" y=\"16\" font-family=\"monospace\" font-size=\"12\">{title}</text>\n"
    ));
    for iy in 0..ny {
        for ix in 0..nx {
            let v = values[iy * nx + ix];
            let fill = match v {
                Some(v) => {
                    let (r, g, b) = ramp(v / vmax);
                    format!("rgb({r},{g},{b})")
                }
                None => "rgb(40,40,40)".to_string(),
            };
            let x = margin + cell * ix as f64;
            // Flip y so increasing grid y points up on the page.
            let y = margin + 16.0 + cell * (ny - 1 - iy) as f64;
            out.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell:.1}\" height=\"{cell:.1}\" fill=\"{fill}\"/>\n"
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// One labeled planar curve.
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

pub const CURVE_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Plot xy-plane curves with the Earth disk for scale. Coordinates are km.
pub fn trajectory_svg(curves: &[Curve], r_earth_km: f64, title: &str) -> String {
    let size = 560.0_f64;
    let margin = 40.0;
    let mut extent = r_earth_km;
    for c in curves {
        for &(x, y) in &c.points {
            extent = extent.max(x.abs()).max(y.abs());
        }
    }
    extent *= 1.05;
    let scale = (size / 2.0 - margin) / extent;
    let map = |x: f64, y: f64| (size / 2.0 + x * scale, size / 2.0 - y * scale);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" viewBox=\"0 0 {size:.0} {size:.0}\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"12\" y=\"18\" font-family=\"monospace\" font-size=\"12\">{title}</text>\n"
    ));
    let (cx, cy) = map(0.0, 0.0);
    out.push_str(&format!(
        "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{:.1}\" fill=\"#b0c4de\" stroke=\"#333\"/>\n",
        r_earth_km * scale
    ));
    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(x, y)| {
                let (px, py) = map(x, y);
                format!("{px:.1},{py:.1}")
            })
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            pts.join(" "),
            c.color
        ));
        out.push_str(&format!(
            "<text x=\"12\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"11\" fill=\"{}\">{}</text>\n",
            36.0 + 14.0 * i as f64,
            c.color,
            c.label
        ));
    }
    out.push_str("</svg>\n");
    out
}
