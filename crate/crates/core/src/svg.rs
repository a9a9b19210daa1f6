//! Minimal static SVG 1.1 writer for log-scale convergence plots.
//!
//! One polyline per series over a linear iteration axis and a log10 error
//! axis; no plotting dependency.

use std::io::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// One plotted series: `(iteration, value)` points; non-positive values are
/// clamped to the plot floor.
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// Writes a log-scale line plot. Returns an error only on I/O failure.
pub fn write_log_plot(
    out: &mut impl Write,
    title: &str,
    series: &[Series<'_>],
) -> std::io::Result<()> {
    let mut x_max: f64 = 1.0;
    let mut y_min: f64 = f64::INFINITY;
    let mut y_max: f64 = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_max = x_max.max(x);
            if y > 0.0 {
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
    }
    if !y_min.is_finite() {
        y_min = 1e-16;
        y_max = 1.0;
    }
    let floor = y_min.min(y_max / 10.0).max(1e-300);
    let (log_lo, log_hi) = (floor.log10().floor(), y_max.log10().ceil().max(floor.log10() + 1.0));

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |x: f64| MARGIN_LEFT + plot_w * (x - 1.0) / (x_max - 1.0).max(1.0);
    let y_of = |y: f64| {
        let ly = y.max(floor).log10();
        MARGIN_TOP + plot_h * (log_hi - ly) / (log_hi - log_lo)
    };

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    )?;

    // Axes.
    writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black"/>"#
    )?;
    // Log-axis decade ticks and gridlines.
    let mut decade = log_lo as i64;
    while decade <= log_hi as i64 {
        let y = y_of(10f64.powi(decade as i32));
        writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_w
        )?;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{decade}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0
        )?;
        decade += 1;
    }
    // Iteration ticks (at most ~10).
    let step = ((x_max - 1.0) / 10.0).ceil().max(1.0);
    let mut x = 1.0;
    while x <= x_max + 0.5 {
        let px = x_of(x);
        writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x:.0}</text>"#,
            MARGIN_TOP + plot_h + 16.0
        )?;
        x += step;
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">iteration</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    )?;

    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", x_of(x), y_of(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        )?;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            MARGIN_LEFT + 10.0,
            MARGIN_TOP + 16.0 + 16.0 * k as f64,
            escape(s.name)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_valid_looking_svg() {
        let series = [
            Series {
                name: "dirichlet",
                points: vec![(1.0, 1e-1), (2.0, 1e-3), (3.0, 1e-7), (4.0, 1e-12)],
            },
            Series {
                name: "surface",
                points: vec![(1.0, 4e-2), (2.0, 1e-4), (3.0, 1e-8), (4.0, 1e-13)],
            },
        ];
        let mut buf = Vec::new();
        write_log_plot(&mut buf, "test plot", &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<polyline").count(), 2);
        assert!(text.contains("version=\"1.1\""));
    }

    #[test]
    fn handles_empty_and_nonpositive_values() {
        let series = [Series { name: "empty", points: vec![(1.0, 0.0)] }];
        let mut buf = Vec::new();
        write_log_plot(&mut buf, "degenerate", &series).unwrap();
        assert!(!buf.is_empty());
    }
}
