//! Minimal standalone SVG scatter plots of table columns.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::table::{fmt_sig6, Table};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn column(table: &Table, name: &str) -> Result<usize> {
    table.column_index(name).ok_or_else(|| Error::Usage(format!("no column named '{name}'")))
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG text of a scatter plot of `y_col` against `x_col`, one marker colour
/// per distinct value of `series_col` in order of first appearance. Rows with
/// non-numeric coordinates are skipped.
pub fn render_svg_scatter(table: &Table, x_col: &str, y_col: &str, series_col: Option<&str>) -> Result<String> {
    let xi = column(table, x_col)?;
    let yi = column(table, y_col)?;
    let si = series_col.map(|c| column(table, c)).transpose()?;

    let mut series: Vec<String> = Vec::new();
    let mut points: Vec<(f64, f64, usize)> = Vec::new();
    for row in table.rows() {
        let (Some(x), Some(y)) = (row[xi].as_f64(), row[yi].as_f64()) else { continue };
        if !x.is_finite() || !y.is_finite() {
            continue;
        }
        let label = si.map(|i| row[i].to_string()).unwrap_or_default();
        let k = match series.iter().position(|s| *s == label) {
            Some(k) => k,
            None => {
                series.push(label);
                series.len() - 1
            }
        };
        points.push((x, y, k));
    }

    let (x0, x1) = range(points.iter().map(|p| p.0));
    let (y0, y1) = range(points.iter().map(|p| p.1));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (ax0, ay0, ax1, ay1) = (LEFT, TOP + plot_h, LEFT + plot_w, TOP);
    let _ = writeln!(s, r#"<g id="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax1:.2}" y2="{ay0:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax0:.2}" y2="{ay1:.2}"/>"#);
    s.push_str("</g>\n<g id=\"ticks\">\n");
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{ay0:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ay0 + 4.0,
            ay0 + 16.0,
            fmt_sig6(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{ax0:.2}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ax0 - 4.0,
            ax0 - 6.0,
            ty + 4.0,
            fmt_sig6(yv)
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_col)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_col)
    );
    s.push_str("<g id=\"markers\">\n");
    for &(x, y, k) in &points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"/>"#,
            px(x),
            py(y),
            PALETTE[k % PALETTE.len()]
        );
    }
    s.push_str("</g>\n");
    if si.is_some() {
        s.push_str("<g id=\"legend\">\n");
        for (k, label) in series.iter().enumerate() {
            let ly = TOP + 10.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 16.0;
            let _ = writeln!(
                s,
                r#"<circle cx="{lx:.2}" cy="{ly:.2}" r="4" fill="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                PALETTE[k % PALETTE.len()],
                lx + 10.0,
                ly + 4.0,
                escape(label)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes [`render_svg_scatter`] output to `path`.
pub fn emit_svg_scatter(table: &Table, x_col: &str, y_col: &str, series_col: Option<&str>, path: &Path) -> Result<()> {
    let svg = render_svg_scatter(table, x_col, y_col, series_col)?;
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Value;

    fn markers(svg: &str) -> Vec<(f64, f64)> {
        svg.lines()
            .filter(|l| l.starts_with("<circle cx") && l.contains("r=\"3.5\""))
            .map(|l| {
                let num = |key: &str| {
                    let start = l.find(key).unwrap() + key.len();
                    l[start..].split('"').next().unwrap().parse::<f64>().unwrap()
                };
                (num("cx=\""), num("cy=\""))
            })
            .collect()
    }

    #[test]
    fn empty_table_has_axes_only() {
        let t = Table::new(["x", "y"]);
        let svg = render_svg_scatter(&t, "x", "y", None).unwrap();
        assert!(svg.contains("<g id=\"axes\""));
        assert!(markers(&svg).is_empty());
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn single_point_lands_in_the_plot_centre() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![Value::Float(1.0), Value::Float(1.0)]).unwrap();
        let m = markers(&render_svg_scatter(&t, "x", "y", None).unwrap());
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        assert_eq!(m, vec![(LEFT + plot_w / 2.0, TOP + plot_h / 2.0)]);
    }

    #[test]
    fn series_and_legend() {
        let mut t = Table::new(["s", "rate", "algo"]);
        for (s, r, a) in [(1, 1.0, "omp"), (2, 0.5, "omp"), (1, 0.9, "bp"), (2, f64::NAN, "bp")] {
            t.push(vec![Value::from(s as usize), Value::Float(r), Value::from(a)]).unwrap();
        }
        let svg = render_svg_scatter(&t, "s", "rate", Some("algo")).unwrap();
        assert_eq!(markers(&svg).len(), 3);
        assert!(svg.contains(">omp</text>") && svg.contains(">bp</text>"));
        assert_eq!(svg, render_svg_scatter(&t, "s", "rate", Some("algo")).unwrap());
    }

    #[test]
    fn larger_values_sit_higher() {
        let mut t = Table::new(["x", "y"]);
        for i in 0..5 {
            t.push(vec![Value::from(i as usize), Value::Float(i as f64 * 0.1)]).unwrap();
        }
        let m = markers(&render_svg_scatter(&t, "x", "y", None).unwrap());
        assert!(m.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1));
    }

    #[test]
    fn missing_column_is_a_usage_error() {
        let t = Table::new(["x", "y"]);
        assert!(matches!(render_svg_scatter(&t, "x", "z", None), Err(Error::Usage(_))));
        assert!(matches!(render_svg_scatter(&t, "x", "y", Some("algo")), Err(Error::Usage(_))));
    }

    #[test]
    fn writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.svg");
        emit_svg_scatter(&Table::new(["a", "b"]), "a", "b", None, &path).unwrap();
        assert!(std::fs::read_to_string(path).unwrap().starts_with("<svg"));
    }
}
