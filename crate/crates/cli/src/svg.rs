//! Minimal line plots as standalone SVG.

pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)]) -> String {
    let (w, h, pad) = (480.0, 320.0, 48.0);
    let lo = |f: fn(&(f64, f64)) -> f64| points.iter().map(f).fold(f64::INFINITY, f64::min);
    let hi = |f: fn(&(f64, f64)) -> f64| points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = (lo(|p| p.0), hi(|p| p.0));
    let (y0, y1) = (lo(|p| p.1), hi(|p| p.1));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let sx = |x: f64| pad + (x - x0) / span(x0, x1) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / span(y0, y1) * (h - 2.0 * pad);
    let pts: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let dots: String = points
        .iter()
        .map(|&(x, y)| format!("  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>\n", sx(x), sy(y)))
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">\n\
  <text x=\"{}\" y=\"20\" text-anchor=\"middle\">{title}</text>\n\
  <line x1=\"{pad}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
  <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{b}\" stroke=\"black\"/>\n\
  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{xlabel}</text>\n\
  <text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{ylabel}</text>\n\
  <text x=\"{pad}\" y=\"{}\" text-anchor=\"middle\">{x0}</text>\n\
  <text x=\"{r}\" y=\"{}\" text-anchor=\"middle\">{x1}</text>\n\
  <text x=\"{}\" y=\"{b}\" text-anchor=\"end\">{y0:.4}</text>\n\
  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{y1:.4}</text>\n\
  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n\
{dots}</svg>\n",
        w / 2.0,
        w / 2.0,
        h - 8.0,
        h / 2.0,
        h / 2.0,
        h - pad + 16.0,
        h - pad + 16.0,
        pad - 4.0,
        pad - 4.0,
        pad + 4.0,
        pts.join(" "),
        b = h - pad,
        r = w - pad,
    )
}

#[cfg(test)]
mod tests {
    #[test]
    fn one_circle_per_point() {
        let s = super::line_plot("t", "n", "v", &[(3.0, 0.66), (4.0, 0.75), (5.0, 0.8)]);
        assert_eq!(s.matches("<circle").count(), 3);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        // A single point must not divide by zero.
        assert!(!super::line_plot("t", "n", "v", &[(1.0, 1.0)]).contains("NaN"));
    }
}
