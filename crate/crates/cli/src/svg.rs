//! Minimal self-contained SVG line charts.

use std::fmt::Write;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 380.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const LEGEND_H: f64 = 22.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn bounds(panel: &Panel) -> (f64, f64, f64, f64) {
    let pts = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    (x0, x1, y0 - pad, y1 + pad)
}

fn render_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let (x0, x1, y0, y1) = bounds(panel);
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| oy + MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let _ = writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
        ox + MARGIN_L,
        oy + MARGIN_T,
        plot_w,
        plot_h
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15">{}</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + MARGIN_T - 14.0,
        escape(&panel.title)
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let _ = writeln!(
            out,
            r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#ddd"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle" font-size="11">{4:.3}</text>"##,
            sx(xv),
            oy + MARGIN_T,
            oy + MARGIN_T + plot_h,
            oy + MARGIN_T + plot_h + 16.0,
            xv
        );
        let _ = writeln!(
            out,
            r##"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="#ddd"/><text x="{3:.2}" y="{4:.2}" text-anchor="end" font-size="11">{5:.3}</text>"##,
            ox + MARGIN_L,
            sy(yv),
            ox + MARGIN_L + plot_w,
            ox + MARGIN_L - 6.0,
            sy(yv) + 4.0,
            yv
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + PANEL_H - 14.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (ox + 18.0, oy + MARGIN_T + plot_h / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(&panel.y_label)
    );

    for (i, s) in panel.series.iter().enumerate() {
        let colour = if s.dashed { "#000" } else { PALETTE[i % PALETTE.len()] };
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.6"{dash} points="{}"/>"#,
            pts.join(" ")
        );
        let ly = oy + MARGIN_T + 8.0 + LEGEND_H * i as f64 * 0.8;
        let lx = ox + MARGIN_L + 10.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
}

/// Panels laid out side by side in one document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut out, p, PANEL_W * i as f64, 0.0);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel() -> Panel {
        Panel {
            title: "a < b & c".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series {
                    label: "one".into(),
                    points: vec![(0.0, 0.0), (1.0, 2.0), (2.0, f64::NAN)],
                    dashed: false,
                },
                Series {
                    label: "two".into(),
                    points: vec![(0.0, 1.0), (2.0, 1.0)],
                    dashed: true,
                },
            ],
        }
    }

    #[test]
    fn self_contained_and_escaped() {
        let svg = render(&[panel(), panel()]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(!svg.contains("href"));
        assert!(!svg.contains("NaN"));
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg, render(&[panel(), panel()]));
    }

    #[test]
    fn empty_panel_renders() {
        let svg = render(&[Panel {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            series: vec![],
        }]);
        assert!(svg.contains("</svg>"));
    }
}
