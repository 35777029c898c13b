//! CSV and SVG output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const SVG_WIDTH: u32 = 800;
pub const SVG_HEIGHT: u32 = 600;

/// Plain decimal with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // round in scientific form first so carries (0.99999999999996 -> 1) settle the exponent
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// `index,fidelity` rows, fidelities at 12 significant digits.
pub fn write_sampling_csv(path: &Path, fidelities: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "fidelity"])?;
    for (i, f) in fidelities.iter().enumerate() {
        w.write_record([i.to_string(), sig12(*f)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sampling_csv(path: &Path) -> Result<Vec<f64>> {
    read_indexed_column(path, "index", "fidelity")
}

/// `iteration,best_dmax` rows at full round-trip precision.
pub fn write_convergence_csv(path: &Path, history: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iteration", "best_dmax"])?;
    for (i, v) in history.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_convergence_csv(path: &Path) -> Result<Vec<f64>> {
    read_indexed_column(path, "iteration", "best_dmax")
}

fn read_indexed_column(path: &Path, index_name: &str, value_name: &str) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.len() != 2 || &headers[0] != index_name || &headers[1] != value_name {
        return Err(Error::MalformedGate(format!("unexpected CSV header {headers:?}")));
    }
    let mut out = Vec::new();
    for (expected, rec) in r.records().enumerate() {
        let rec = rec?;
        let idx: usize = rec[0]
            .parse()
            .map_err(|_| Error::MalformedGate(format!("bad index {:?}", &rec[0])))?;
        if idx != expected {
            return Err(Error::MalformedGate(format!("row {expected} has index {idx}")));
        }
        let v: f64 = rec[1]
            .parse()
            .map_err(|_| Error::MalformedGate(format!("bad value {:?}", &rec[1])))?;
        out.push(v);
    }
    Ok(out)
}

/// Scatter of sample index against fidelity on `[0, 1]`, with a dashed rule at `bound`.
pub fn scatter_svg(fidelities: &[f64], bound: f64) -> String {
    let (w, h) = (SVG_WIDTH as f64, SVG_HEIGHT as f64);
    let (left, right, top, bottom) = (70.0, 20.0, 30.0, 60.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let n = fidelities.len().max(1) as f64;
    let x_of = |i: usize| left + plot_w * (i as f64 + 0.5) / n;
    let y_of = |f: f64| top + plot_h * (1.0 - f.clamp(0.0, 1.0));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let y = y_of(f);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="end">{f:.1}</text>"#,
            left - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">sample index</text>"#,
        left + plot_w / 2.0,
        h - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">fidelity</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    let _ = writeln!(s, r#"<g fill="steelblue">"#);
    for (i, &f) in fidelities.iter().enumerate() {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, x_of(i), y_of(f));
    }
    let _ = writeln!(s, "</g>");
    let yb = y_of(bound);
    let _ = writeln!(
        s,
        r#"<line id="bound" x1="{left}" y1="{yb:.2}" x2="{:.1}" y2="{yb:.2}" stroke="crimson" stroke-width="1.5" stroke-dasharray="6,4"/>"#,
        left + plot_w
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.2}" font-family="sans-serif" font-size="12" fill="crimson" text-anchor="end">bound {}</text>"#,
        left + plot_w - 4.0,
        yb - 6.0,
        sig12(bound)
    );
    s.push_str("</svg>\n");
    s
}

/// Inverse of the vertical mapping used by [`scatter_svg`].
pub fn svg_y_to_fidelity(y: f64) -> f64 {
    let (top, bottom) = (30.0, 60.0);
    let plot_h = SVG_HEIGHT as f64 - top - bottom;
    1.0 - (y - top) / plot_h
}
