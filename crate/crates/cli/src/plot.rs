use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// Least-squares line `ln y = intercept + slope ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitLine {
    pub slope: f64,
    pub intercept: f64,
}

struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, from: f64, to: f64) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Self { lo: lo - pad, hi: hi + pad, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn decades(&self) -> impl Iterator<Item = i32> {
        (self.lo.ceil() as i32)..=(self.hi.floor() as i32)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect class="background" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn frame(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<path class="axes" d="M{LEFT:.2},{TOP:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        HEIGHT - BOTTOM,
        WIDTH - RIGHT
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Log-log scatter of `points` with one marker per point, the fitted line and
/// a slope annotation. `None` when fewer than two points are plottable.
pub fn rate_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    fit: Option<FitLine>,
) -> Option<String> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let (x_lo, x_hi) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let fit_ends = fit.map(|f| {
        let at = |lx: f64| f.intercept / std::f64::consts::LN_10 + f.slope * lx;
        [(x_lo, at(x_lo)), (x_hi, at(x_hi))]
    });
    let xs = Axis::new(logs.iter().map(|p| p.0), LEFT, WIDTH - RIGHT);
    let ys = Axis::new(logs.iter().map(|p| p.1).chain(fit_ends.iter().flatten().map(|p| p.1)), HEIGHT - BOTTOM, TOP);

    let mut out = String::new();
    header(&mut out, title);
    frame(&mut out);
    let mut ticks = String::new();
    for d in xs.decades() {
        let x = xs.map(d as f64);
        let _ = write!(ticks, "M{x:.2},{:.2} v6 ", HEIGHT - BOTTOM);
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - BOTTOM + 20.0
        );
    }
    for d in ys.decades() {
        let y = ys.map(d as f64);
        let _ = write!(ticks, "M{LEFT:.2},{y:.2} h-6 ");
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 10.0,
            y + 4.0
        );
    }
    if !ticks.is_empty() {
        let _ = writeln!(out, r#"<path class="ticks" d="{}" stroke="black"/>"#, ticks.trim_end());
    }
    let _ = writeln!(
        out,
        r#"<text class="label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text class="label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        escape(y_label)
    );
    for (lx, ly) in &logs {
        let _ = writeln!(
            out,
            r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            xs.map(*lx),
            ys.map(*ly)
        );
    }
    if let (Some(f), Some([a, b])) = (fit, fit_ends) {
        let _ = writeln!(
            out,
            r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson" stroke-width="1.5"/>"#,
            xs.map(a.0),
            ys.map(a.1),
            xs.map(b.0),
            ys.map(b.1)
        );
        let _ = writeln!(
            out,
            r#"<text class="annotation" x="{:.2}" y="{:.2}" fill="crimson">slope≈{}</text>"#,
            LEFT + 16.0,
            TOP + 20.0,
            slope_label(f.slope)
        );
    }
    out.push_str("</svg>\n");
    Some(out)
}

/// Two significant decimals, trailing zeros trimmed to one: `0.93`, `1.0`.
pub fn slope_label(slope: f64) -> String {
    let s = format!("{slope:.2}");
    match s.strip_suffix('0') {
        Some(t) if !t.ends_with('.') => t.to_string(),
        _ => s,
    }
}

/// The slow and critical lines `v = s u` in the `(u, v)` coefficient plane
/// for `|u| <= 1`, annotated with `eps`.
pub fn manifold_plot(slow_slope: f64, critical_slope: f64, eps: f64) -> String {
    let reach = slow_slope.abs().max(critical_slope.abs()).max(1.0);
    let xs = Axis::new([-1.0, 1.0].into_iter(), LEFT, WIDTH - RIGHT);
    let ys = Axis::new([-reach, reach].into_iter(), HEIGHT - BOTTOM, TOP);

    let mut out = String::new();
    header(&mut out, "slow manifold and critical manifold");
    frame(&mut out);
    let _ = writeln!(
        out,
        r#"<path class="origin" d="M{:.2},{:.2} H{:.2} M{:.2},{:.2} V{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        LEFT,
        ys.map(0.0),
        WIDTH - RIGHT,
        xs.map(0.0),
        HEIGHT - BOTTOM,
        TOP
    );
    for (class, slope, colour) in [("slow", slow_slope, "steelblue"), ("critical", critical_slope, "crimson")] {
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1.5"/>"#,
            xs.map(-1.0),
            ys.map(-slope),
            xs.map(1.0),
            ys.map(slope)
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="middle">u</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(out, r#"<text class="tick" x="20" y="{:.2}">v</text>"#, (TOP + HEIGHT - BOTTOM) / 2.0);
    let _ = writeln!(
        out,
        r#"<text class="legend" x="{:.2}" y="{:.2}" fill="steelblue">slow, v = {slow_slope:.6} u</text>"#,
        LEFT + 16.0,
        TOP + 20.0
    );
    let _ = writeln!(
        out,
        r#"<text class="legend" x="{:.2}" y="{:.2}" fill="crimson">critical, v = {critical_slope:.6} u</text>"#,
        LEFT + 16.0,
        TOP + 38.0
    );
    let _ =
        writeln!(out, r#"<text class="annotation" x="{:.2}" y="{:.2}">ε = {eps:.3e}</text>"#, LEFT + 16.0, TOP + 56.0);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_labels() {
        assert_eq!(slope_label(1.0), "1.0");
        assert_eq!(slope_label(0.9305), "0.93");
        assert_eq!(slope_label(1.004), "1.0");
        assert_eq!(slope_label(0.96), "0.96");
        assert_eq!(slope_label(2.0), "2.0");
    }

    #[test]
    fn rate_plot_needs_two_positive_points() {
        assert!(rate_plot("t", "x", "y", &[(0.1, 1.0)], None).is_none());
        assert!(rate_plot("t", "x", "y", &[(0.1, 1.0), (0.01, 0.0)], None).is_none());
        assert!(rate_plot("t", "x", "y", &[(0.1, 1.0), (0.01, 0.1)], None).is_some());
    }

    #[test]
    fn exact_line_passes_through_markers() {
        let points: Vec<(f64, f64)> = [1.0, 0.1, 0.01].iter().map(|&e| (e, 2.0 * e)).collect();
        let svg = rate_plot("t", "x", "y", &points, Some(FitLine { slope: 1.0, intercept: 2f64.ln() })).unwrap();
        assert!(svg.contains("slope≈1.0"));
        let first_marker = svg.lines().find(|l| l.contains("class=\"marker\"")).unwrap();
        let fit = svg.lines().find(|l| l.contains("class=\"fit\"")).unwrap();
        // Markers sort with eps = 1 first, which is the right end of the line.
        let cx = first_marker.split("cx=\"").nth(1).unwrap().split('"').next().unwrap();
        let cy = first_marker.split("cy=\"").nth(1).unwrap().split('"').next().unwrap();
        assert!(fit.contains(&format!("x2=\"{cx}\" y2=\"{cy}\"")));
    }
}
