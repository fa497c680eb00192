//! Plain-text system files, CSV series and minimal SVG line plots.
//!
//! System file grammar (`#` starts a comment, blank lines ignored):
//!
//! ```text
//! p a alpha            first data line
//! lambda label         one per mode, label `acoustic:J` / `optical:J`
//! i j k value          one per coupling entry, 1-based, j <= k
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{ModeLabel, QuasiHarmonicSystem};
use crate::tensor::QuadTensor;

/// Round-trip formatting of a double (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_system(sys: &QuasiHarmonicSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# p a alpha");
    let _ = writeln!(out, "{} {} {}", sys.p, fmt_f64(sys.a), fmt_f64(sys.alpha));
    let _ = writeln!(out, "# lambda label");
    for (l, lab) in sys.lambdas.iter().zip(&sys.labels) {
        let _ = writeln!(out, "{} {lab}", fmt_f64(*l));
    }
    let _ = writeln!(out, "# i j k C");
    for (i, j, k, v) in sys.coupling.entries() {
        let _ = writeln!(out, "{} {} {} {}", i + 1, j + 1, k + 1, fmt_f64(v));
    }
    out
}

pub fn parse_system(text: &str) -> Result<QuasiHarmonicSystem> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let num = |line: usize, tok: &str| tok.parse::<f64>().map_err(|_| err(line, format!("bad number '{tok}'")));
    let idx = |line: usize, tok: &str| match tok.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(err(line, format!("bad 1-based index '{tok}'"))),
    };

    let mut header: Option<(usize, f64, f64)> = None;
    let mut lambdas = Vec::new();
    let mut labels = Vec::new();
    let mut entries = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match (header.is_some(), toks.len()) {
            (false, 3) => {
                let p = toks[0].parse::<usize>().map_err(|_| err(line, format!("bad p '{}'", toks[0])))?;
                header = Some((p, num(line, toks[1])?, num(line, toks[2])?));
            }
            (false, _) => return Err(err(line, "expected header 'p a alpha'".into())),
            (true, 2) => {
                if !entries.is_empty() {
                    return Err(err(line, "eigenvalue line after coupling entries".into()));
                }
                lambdas.push(num(line, toks[0])?);
                labels.push(toks[1].parse::<ModeLabel>().map_err(|m| err(line, m))?);
            }
            (true, 4) => {
                entries.push((line, idx(line, toks[0])?, idx(line, toks[1])?, idx(line, toks[2])?, num(line, toks[3])?));
            }
            (true, n) => return Err(err(line, format!("expected 2 or 4 fields, found {n}"))),
        }
    }
    let (p, a, alpha) = header.ok_or_else(|| err(0, "missing header".into()))?;
    let n = lambdas.len();
    if n == 0 {
        return Err(err(0, "no eigenvalue lines".into()));
    }
    let mut coupling = QuadTensor::zeros(n);
    for (line, i, j, k, v) in entries {
        if i >= n || j >= n || k >= n {
            return Err(err(line, format!("index out of range for {n} modes")));
        }
        coupling.add(i, j, k, v);
    }
    Ok(QuasiHarmonicSystem { p, a, alpha, lambdas, labels, coupling, pullback: None })
}

pub fn read_system(path: &Path) -> Result<QuasiHarmonicSystem> {
    parse_system(&fs::read_to_string(path)?)
}

pub fn write_system(path: &Path, sys: &QuasiHarmonicSystem) -> Result<()> {
    fs::write(path, format_system(sys))?;
    Ok(())
}

/// CSV text with a mandatory header row; all values at 17 significant digits.
pub fn format_csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    fs::write(path, format_csv(header, rows))?;
    Ok(())
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static line plot of one or more `(name, ys)` series over shared `xs`.
pub fn line_plot_svg(title: &str, x_label: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let (x0, x1) = xs.iter().filter(finite).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = series
        .iter()
        .flat_map(|s| s.1.iter())
        .filter(finite)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (x0, x1) = if x0 < x1 { (x0, x1) } else { (0.0, 1.0) };
    if !(y0 < y1) {
        let c = if y0.is_finite() { y0 } else { 0.0 };
        y0 = c - 1.0;
        y1 = c + 1.0;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (SVG_W - 2.0 * MARGIN);
    let py = |y: f64| SVG_H - MARGIN - (y - y0) / (y1 - y0) * (SVG_H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="25" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#, SVG_W / 2.0, escape(title));
    // axes
    let (l, r, t, b) = (MARGIN, SVG_W - MARGIN, MARGIN, SVG_H - MARGIN);
    let _ = writeln!(s, r#"<polyline points="{l},{t} {l},{b} {r},{b}" fill="none" stroke="black"/>"#);
    for (v, y) in [(y0, b), (y1, t)] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3e}</text>"#, l - 4.0, y + 4.0, v);
    }
    for (v, x) in [(x0, l), (x1, r)] {
        let _ = writeln!(s, r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, b + 16.0, v);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#, SVG_W / 2.0, SVG_H - 15.0, escape(x_label));
    for (n, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            r + 5.0,
            t + 14.0 * (n as f64 + 1.0),
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}
