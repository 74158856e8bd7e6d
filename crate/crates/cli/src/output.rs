//! Deterministic CSV and minimal SVG emission.
//!
//! CSV: UTF-8, comma-separated, one header row, LF line endings, floats
//! fixed at 17 significant digits so identical configs produce identical
//! bytes. Files are written to a sibling temp path and atomically renamed
//! into place.

use std::io::Write;
use std::path::Path;

/// 17 significant digits: enough to round-trip any f64, never more.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut body = String::new();
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(&row.join(","));
        body.push('\n');
    }
    atomic_write(path, body.as_bytes())
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp~");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Log-log polyline of positive (x, y) points, with axis lines and corner
/// labels. Intentionally dependency-free and minimal: a quick look, not a
/// charting surface.
pub fn write_loglog_svg(path: &Path, points: &[(f64, f64)], title: &str) -> std::io::Result<()> {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 48.0;
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{M}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n"
    ));
    if pts.len() >= 2 {
        let (xmin, xmax) = pts.iter().fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let (ymin, ymax) = pts.iter().fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.1), a.1.max(p.1)));
        let sx = |x: f64| M + (x - xmin) / (xmax - xmin).max(1e-300) * (W - 2.0 * M);
        let sy = |y: f64| H - M - (y - ymin) / (ymax - ymin).max(1e-300) * (H - 2.0 * M);
        svg.push_str(&format!(
            "<line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - M,
            W - M,
            H - M
        ));
        svg.push_str(&format!(
            "<line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - M
        ));
        let poly: Vec<String> =
            pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            poly.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{M}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">log10 x: [{:.3}, {:.3}]  log10 y: [{:.3}, {:.3}]</text>\n",
            H - 16.0,
            xmin,
            xmax,
            ymin,
            ymax
        ));
    } else {
        svg.push_str("<text x=\"48\" y=\"48\" font-size=\"12\">no positive data</text>\n");
    }
    svg.push_str("</svg>\n");
    atomic_write(path, svg.as_bytes())
}
