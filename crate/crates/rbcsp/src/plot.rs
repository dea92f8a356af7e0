//! Minimal SVG line charts for sweep tables. A polyline, axis ticks, and an
//! optional vertical threshold rule; nothing more.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 52.0;

/// Chart options; `threshold` draws a labeled vertical rule at that x.
#[derive(Debug, Clone, Default)]
pub struct ChartConfig {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub threshold: Option<f64>,
    /// Provenance line embedded as a comment inside the document.
    pub metadata: String,
}

fn tick_values(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 100.0 || v.abs() < 0.01 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Render one `(x, y)` series as an SVG document string.
///
/// Points with non-finite coordinates are skipped; the threshold rule (when
/// inside the padded x-range) carries a `data-x` attribute holding the exact
/// value it marks.
pub fn line_chart(points: &[(f64, f64)], cfg: &ChartConfig) -> String {
    let finite: Vec<(f64, f64)> =
        points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();

    let mut x_lo = finite.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut x_hi = finite.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if let Some(t) = cfg.threshold {
        x_lo = x_lo.min(t);
        x_hi = x_hi.max(t);
    }
    if !x_lo.is_finite() || !x_hi.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if x_lo == x_hi {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let mut y_lo = finite.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
    let mut y_hi = finite.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).max(1.0);
    if !y_lo.is_finite() || !y_hi.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    if !cfg.metadata.is_empty() {
        svg.push_str(&format!("<!-- {} -->\n", xml_escape(&cfg.metadata).replace("--", "- -")));
    }
    svg.push_str(&format!("<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(&cfg.title)
    ));

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    svg.push_str(&format!(
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>\n",
        MARGIN_LEFT + plot_w
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.1}\" y1=\"{:.1}\" x2=\"{x0:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>\n",
        MARGIN_TOP
    ));

    for t in tick_values(x_lo, x_hi, 5) {
        let x = sx(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{y0:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            y0 + 20.0,
            fmt_tick(t)
        ));
    }
    for t in tick_values(y_lo, y_hi, 5) {
        let y = sy(t);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{x0:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            x0 - 9.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        xml_escape(&cfg.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(&cfg.y_label)
    ));

    // Threshold rule.
    if let Some(t) = cfg.threshold {
        let x = sx(t);
        svg.push_str(&format!(
            "<line class=\"threshold\" data-x=\"{t}\" x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" \
             y2=\"{y0:.1}\" stroke=\"firebrick\" stroke-dasharray=\"5,4\"/>\n",
            MARGIN_TOP
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"firebrick\">{}</text>\n",
            x + 4.0,
            MARGIN_TOP + 12.0,
            fmt_tick(t)
        ));
    }

    // The series.
    if finite.len() > 1 {
        let pts: Vec<String> =
            finite.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
    }
    for &(x, y) in &finite {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"steelblue\"/>\n",
            sx(x),
            sy(y)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_contains_series_and_rule() {
        let cfg = ChartConfig {
            title: "sweep".to_string(),
            x_label: "r".to_string(),
            y_label: "P".to_string(),
            threshold: Some(1.5),
            metadata: "run 7 <&->".to_string(),
        };
        let svg = line_chart(&[(1.0, 0.9), (2.0, 0.1)], &cfg);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("class=\"threshold\""));
        assert!(svg.contains("data-x=\"1.5\""));
        assert!(svg.contains("<!-- run 7 &lt;&amp;-&gt; -->"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn chart_survives_degenerate_input() {
        let svg = line_chart(&[], &ChartConfig::default());
        assert!(svg.starts_with("<svg"));
        let svg = line_chart(&[(1.0, f64::NAN)], &ChartConfig::default());
        assert!(!svg.contains("NaN"));
    }
}
