use std::fmt::Write as _;

use crate::sim::SimulationReport;

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSeries {
    pub label: String,
    pub values: Vec<f64>,
}

/// Line chart of per-place values, one polyline per series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x_labels: Vec<String>,
    pub series: Vec<ChartSeries>,
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

impl ChartSpec {
    pub fn new(title: impl Into<String>, x_labels: Vec<String>) -> Self {
        ChartSpec { title: title.into(), x_labels, series: Vec::new(), width: 1200.0, height: 500.0, margin: 60.0 }
    }

    /// Mean tokens per place, one series per firing budget.
    pub fn from_sweep(title: impl Into<String>, sweep: &[(u64, SimulationReport)]) -> Self {
        let labels = sweep.first().map(|(_, r)| r.place_names.clone()).unwrap_or_default();
        let mut spec = ChartSpec::new(title, labels);
        for (budget, report) in sweep {
            spec.series.push(ChartSeries { label: format!("N={budget}"), values: report.means() });
        }
        spec
    }

    pub fn y_max(&self) -> f64 {
        let peak = self.series.iter().flat_map(|s| s.values.iter().copied()).filter(|v| v.is_finite()).fold(0.0, f64::max);
        if peak > 0.0 {
            peak * 1.1
        } else {
            1.0
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders `spec` as a standalone SVG document. Output is deterministic.
pub fn render_chart_svg(spec: &ChartSpec) -> String {
    let (w, h, m) = (spec.width, spec.height, spec.margin);
    let plot_w = w - 2.0 * m;
    let plot_h = h - 2.0 * m;
    let y_max = spec.y_max();
    let n = spec.x_labels.len().max(spec.series.iter().map(|s| s.values.len()).max().unwrap_or(0));
    let x_at = |i: usize| if n <= 1 { m + plot_w / 2.0 } else { m + plot_w * i as f64 / (n - 1) as f64 };
    let y_at = |v: f64| m + plot_h * (1.0 - (v / y_max).clamp(0.0, 1.0));

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, m / 2.0, escape(&spec.title));

    let _ = writeln!(s, r#"<g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(s, r#"<line x1="{m}" y1="{}" x2="{}" y2="{}"/>"#, m + plot_h, m + plot_w, m + plot_h);
    let _ = writeln!(s, r#"<line x1="{m}" y1="{m}" x2="{m}" y2="{}"/>"#, m + plot_h);
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="y-ticks">"#);
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = y_at(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{m}" y2="{y:.2}" stroke="black"/>"#, m - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, m - 6.0, y + 4.0);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="x-ticks">"#);
    for (i, label) in spec.x_labels.iter().enumerate() {
        let x = x_at(i);
        let y = m + plot_h;
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y + 4.0);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="end" transform="rotate(-60 {x:.2} {:.2})">{}</text>"#,
            y + 14.0,
            y + 14.0,
            escape(label)
        );
    }
    let _ = writeln!(s, "</g>");

    for (k, series) in spec.series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> =
            series.values.iter().enumerate().map(|(i, &v)| format!("{:.2},{:.2}", x_at(i), y_at(v))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            points.join(" "),
            escape(&series.label)
        );
    }

    let _ = writeln!(s, r#"<g class="legend">"#);
    for (k, series) in spec.series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let x = w - m - 90.0;
        let y = m + 16.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{colour}" stroke-width="3"/>"#, x + 18.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, x + 24.0, y + 4.0, escape(&series.label));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
