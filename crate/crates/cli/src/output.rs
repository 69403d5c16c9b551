//! Deterministic artifact writers: CSV and JSON with an embedded config
//! hash and tool version line, convergence tables, and static SVG plots.
//! Files are written atomically (temp file + rename).

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use diraclab::numerics::richardson_order;

pub const VERSION_LINE: &str = concat!("diraclab ", env!("CARGO_PKG_VERSION"));

/// Fixed float formatting keeps re-runs bitwise identical.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// CSV with `# diraclab <version>` and `# config=<hash>` comment lines.
pub fn write_csv(
    path: &Path,
    config_hash: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "# {VERSION_LINE}")?;
    writeln!(out, "# config={config_hash}")?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    write_atomic(path, out.as_bytes())
}

/// JSON with meta fields folded in.
pub fn write_json(path: &Path, config_hash: &str, value: serde_json::Value) -> Result<()> {
    let wrapped = serde_json::json!({
        "tool": VERSION_LINE,
        "config": config_hash,
        "data": value,
    });
    let mut text = serde_json::to_string_pretty(&wrapped)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub levels: Vec<(f64, f64)>,
    /// Per-triplet order estimates aligned with levels[2..]; None marks the
    /// converged sentinel.
    pub orders: Vec<Option<f64>>,
}

/// Convergence table with Richardson order estimates; needs at least three
/// resolution levels.
pub fn convergence_table(series: &[(f64, f64)]) -> Result<ConvergenceTable> {
    if series.len() < 3 {
        bail!(
            "convergence table needs at least 3 levels, got {}",
            series.len()
        );
    }
    let mut orders = Vec::new();
    for w in series.windows(3) {
        orders.push(richardson_order(w));
    }
    Ok(ConvergenceTable {
        levels: series.to_vec(),
        orders,
    })
}

impl ConvergenceTable {
    pub fn rows(&self) -> Vec<Vec<String>> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, (h, v))| {
                let order = if i < 2 {
                    String::new()
                } else {
                    match self.orders[i - 2] {
                        Some(p) => format!("{p:.3}"),
                        None => "converged".to_string(),
                    }
                };
                vec![fmt_f64(*h), fmt_f64(*v), order]
            })
            .collect()
    }
}

/// Minimal static log-log SVG plot of one or more series. The version and
/// config hash ride along as a comment, like every other artifact.
pub fn svg_loglog(series: &[(&str, &[(f64, f64)])], title: &str, config_hash: &str) -> String {
    let (w, h) = (640.0, 440.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, s)| s.iter())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.log10(), y.log10()))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) {
        x1 = x0 + 1.0;
    }
    if !(y0 < y1) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let sy = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns='http://www.w3.org/2000/svg' width='{w}' height='{h}' viewBox='0 0 {w} {h}'>"
    );
    let _ = writeln!(svg, "<!-- {VERSION_LINE}; config={config_hash} -->");
    let _ = writeln!(svg, "<rect width='{w}' height='{h}' fill='white'/>");
    let _ = writeln!(
        svg,
        "<text x='{}' y='24' text-anchor='middle' font-family='monospace' font-size='14'>{title}</text>",
        w / 2.0
    );
    // axes
    let _ = writeln!(
        svg,
        "<line x1='{ml}' y1='{}' x2='{}' y2='{}' stroke='black'/>",
        h - mb,
        w - mr,
        h - mb
    );
    let _ = writeln!(
        svg,
        "<line x1='{ml}' y1='{mt}' x2='{ml}' y2='{}' stroke='black'/>",
        h - mb
    );
    // decade ticks
    for d in (x0.floor() as i64)..=(x1.ceil() as i64) {
        let x = sx(d as f64);
        if x >= ml && x <= w - mr {
            let _ = writeln!(
                svg,
                "<line x1='{x}' y1='{}' x2='{x}' y2='{}' stroke='gray' stroke-dasharray='2,4'/>",
                mt,
                h - mb
            );
            let _ = writeln!(
                svg,
                "<text x='{x}' y='{}' text-anchor='middle' font-family='monospace' font-size='11'>1e{d}</text>",
                h - mb + 18.0
            );
        }
    }
    for d in (y0.floor() as i64)..=(y1.ceil() as i64) {
        let y = sy(d as f64);
        if y >= mt && y <= h - mb {
            let _ = writeln!(
                svg,
                "<line x1='{ml}' y1='{y}' x2='{}' y2='{y}' stroke='gray' stroke-dasharray='2,4'/>",
                w - mr
            );
            let _ = writeln!(
                svg,
                "<text x='{}' y='{}' text-anchor='end' font-family='monospace' font-size='11'>1e{d}</text>",
                ml - 6.0,
                y + 4.0
            );
        }
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    for (si, (label, s)) in series.iter().enumerate() {
        let color = colors[si % colors.len()];
        let mut path = String::new();
        for (i, &(x, y)) in s.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).enumerate() {
            let (px, py) = (sx(x.log10()), sy(y.log10()));
            let _ = write!(path, "{}{px:.2},{py:.2} ", if i == 0 { "M" } else { "L" });
            let _ = writeln!(
                svg,
                "<circle cx='{px:.2}' cy='{py:.2}' r='3' fill='{color}'/>"
            );
        }
        let _ = writeln!(svg, "<path d='{path}' fill='none' stroke='{color}'/>");
        let _ = writeln!(
            svg,
            "<text x='{}' y='{}' font-family='monospace' font-size='12' fill='{color}'>{label}</text>",
            w - mr - 150.0,
            mt + 16.0 * (si as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_table_needs_three_levels() {
        assert!(convergence_table(&[(1.0, 2.0), (0.5, 2.1)]).is_err());
        let t = convergence_table(&[(1.0, 2.0), (0.5, 2.0), (0.25, 2.0)]).unwrap();
        assert_eq!(t.rows()[2][2], "converged");
    }

    #[test]
    fn fourth_order_series_detected() {
        let series: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let h = 0.2 / 2f64.powi(i);
                (h, 1.0 + h.powi(4))
            })
            .collect();
        let t = convergence_table(&series).unwrap();
        let order: f64 = t.rows()[4][2].parse().unwrap();
        assert!((order - 4.0).abs() < 0.1);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let s = svg_loglog(&[("err", &[(1.0, 0.1), (0.5, 0.01)])], "test", "abc123");
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
