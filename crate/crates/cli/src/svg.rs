//! Deterministic hand-written SVG scatter plots and heat maps.
//!
//! Coordinates are printed with two decimals, so identical inputs give
//! byte-identical files. Points outside the viewport are clamped onto its
//! border and counted.

use std::fmt::Write as _;

use fzspec_core::C64;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Curve,
    Cloud,
    Endpoints,
    Poles,
    Isolated,
}

impl Style {
    pub fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "curve" => Style::Curve,
            "cloud" => Style::Cloud,
            "endpoints" => Style::Endpoints,
            "poles" => Style::Poles,
            "isolated" => Style::Isolated,
            other => {
                return Err(CliError::usage(format!(
                    "unknown layer style {other:?} (expected curve, cloud, endpoints, poles or isolated)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Style::Curve => "curve",
            Style::Cloud => "cloud",
            Style::Endpoints => "endpoints",
            Style::Poles => "poles",
            Style::Isolated => "isolated",
        }
    }

    fn marker(self, x: f64, y: f64) -> String {
        match self {
            Style::Curve => format!(r##"<circle cx="{x:.2}" cy="{y:.2}" r="0.9" fill="#1f4e9c"/>"##),
            Style::Cloud => format!(r##"<circle cx="{x:.2}" cy="{y:.2}" r="0.8" fill="#555555" fill-opacity="0.6"/>"##),
            Style::Endpoints => format!(r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.6" fill="#c0392b"/>"##),
            Style::Poles => {
                format!(r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.2" fill="none" stroke="#1e8449" stroke-width="1.2"/>"##)
            }
            Style::Isolated => format!(r##"<rect x="{:.2}" y="{:.2}" width="4" height="4" fill="#d68910"/>"##, x - 2.0, y - 2.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub name: String,
    pub style: Style,
    pub points: Vec<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport { re_min: -2.2, re_max: 2.2, im_min: -2.2, im_max: 2.2 }
    }
}

impl Viewport {
    /// `re_min,re_max,im_min,im_max`.
    pub fn parse(s: &str) -> CliResult<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad viewport number {t:?}"))))
            .collect::<CliResult<_>>()?;
        let [re_min, re_max, im_min, im_max] = v[..] else {
            return Err(CliError::usage(format!("viewport needs four numbers, got {s:?}")));
        };
        let vp = Viewport { re_min, re_max, im_min, im_max };
        if !(re_min < re_max && im_min < im_max) || v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::usage(format!("viewport bounds must be finite with min < max, got {s:?}")));
        }
        Ok(vp)
    }
}

#[derive(Clone, Debug)]
pub struct PlotSpec {
    pub title: String,
    pub layers: Vec<Layer>,
    pub viewport: Viewport,
    pub width: u32,
    pub height: u32,
}

pub struct Rendered {
    pub svg: String,
    pub clamped: usize,
}

struct Frame {
    vp: Viewport,
    w: f64,
    h: f64,
}

impl Frame {
    /// Pixel position, clamped into the frame; the flag reports clamping.
    fn map(&self, z: C64) -> (f64, f64, bool) {
        let x = (z.re - self.vp.re_min) / (self.vp.re_max - self.vp.re_min) * self.w;
        let y = (self.vp.im_max - z.im) / (self.vp.im_max - self.vp.im_min) * self.h;
        let cx = x.clamp(0.0, self.w);
        let cy = y.clamp(0.0, self.h);
        (cx, cy, cx != x || cy != y)
    }
}

fn header(out: &mut String, title: &str, width: u32, height: u32) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
}

fn axes(out: &mut String, f: &Frame) {
    let (x0, y0, _) = f.map(C64::new(0.0, 0.0));
    let _ = writeln!(
        out,
        r##"<g stroke="#bbbbbb" stroke-width="0.6"><line x1="0" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="0" x2="{x0:.2}" y2="{:.2}"/></g>"##,
        f.w, f.h
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Layered scatter plot.
pub fn render_scatter(spec: &PlotSpec) -> CliResult<Rendered> {
    if spec.layers.is_empty() {
        return Err(CliError::usage("a plot needs at least one layer"));
    }
    if let Some(layer) = spec.layers.iter().find(|l| l.points.iter().any(|z| !z.is_finite())) {
        return Err(CliError::usage(format!("layer {:?} contains non-finite points", layer.name)));
    }
    let f = Frame { vp: spec.viewport, w: spec.width as f64, h: spec.height as f64 };
    let mut out = String::new();
    header(&mut out, &spec.title, spec.width, spec.height);
    axes(&mut out, &f);
    let mut clamped = 0;
    for layer in &spec.layers {
        let _ = writeln!(out, r#"<g class="{}" data-name="{}">"#, layer.style.name(), escape(&layer.name));
        for &z in &layer.points {
            let (x, y, c) = f.map(z);
            clamped += c as usize;
            out.push_str(&layer.style.marker(x, y));
            out.push('\n');
        }
        out.push_str("</g>\n");
    }
    legend(&mut out, &spec.layers);
    let _ = writeln!(out, "<desc>clamped points: {clamped}</desc>");
    out.push_str("</svg>\n");
    Ok(Rendered { svg: out, clamped })
}

fn legend(out: &mut String, layers: &[Layer]) {
    out.push_str(r#"<g font-family="sans-serif" font-size="11">"#);
    out.push('\n');
    for (i, layer) in layers.iter().enumerate() {
        let y = 14.0 + 14.0 * i as f64;
        out.push_str(&layer.style.marker(10.0, y - 4.0));
        let _ = writeln!(out, r#"<text x="18" y="{y:.2}">{} ({} points)</text>"#, escape(&layer.name), layer.points.len());
    }
    out.push_str("</g>\n");
}

/// Heat map of per-cell values in `[0, 1]` on a `width × height` grid (row 0 at the bottom).
pub fn render_heatmap(title: &str, grid_w: usize, grid_h: usize, values: &[f64], size: u32) -> CliResult<String> {
    if values.len() != grid_w * grid_h || grid_w == 0 || grid_h == 0 {
        return Err(CliError::usage("heat map values do not match the grid"));
    }
    let cw = size as f64 / grid_w as f64;
    let ch = size as f64 / grid_h as f64;
    let mut out = String::new();
    header(&mut out, title, size, size);
    for (i, &v) in values.iter().enumerate() {
        let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
        if v == 0.0 {
            continue;
        }
        let (ix, iy) = (i % grid_w, i / grid_w);
        let shade = (255.0 * (1.0 - v)).round() as u8;
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{cw:.2}" height="{ch:.2}" fill="#ff{shade:02x}{shade:02x}"/>"##,
            ix as f64 * cw,
            (grid_h - 1 - iy) as f64 * ch
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(style: Style, pts: &[(f64, f64)]) -> Layer {
        Layer { name: style.name().into(), style, points: pts.iter().map(|&(a, b)| C64::new(a, b)).collect() }
    }

    #[test]
    fn clamps_and_counts() {
        let spec = PlotSpec {
            title: "t".into(),
            layers: vec![layer(Style::Cloud, &[(0.0, 0.0), (5.0, 0.0), (0.0, -9.0)]), layer(Style::Curve, &[])],
            viewport: Viewport::default(),
            width: 100,
            height: 100,
        };
        let r = render_scatter(&spec).unwrap();
        assert_eq!(r.clamped, 2);
        assert!(r.svg.contains(r#"cx="100.00" cy="50.00""#));
        assert!(r.svg.contains(r#"cx="50.00" cy="100.00""#));
        assert_eq!(render_scatter(&spec).unwrap().svg, r.svg);
    }

    #[test]
    fn rejects_bad_input() {
        let mut spec = PlotSpec { title: "t".into(), layers: vec![], viewport: Viewport::default(), width: 10, height: 10 };
        assert!(render_scatter(&spec).is_err());
        spec.layers.push(layer(Style::Cloud, &[(f64::NAN, 0.0)]));
        assert!(render_scatter(&spec).is_err());
        assert!(Viewport::parse("1,0,0,1").is_err());
        assert!(Viewport::parse("0,1,0").is_err());
        assert_eq!(Viewport::parse("-1,1,-2,2").unwrap().im_max, 2.0);
        assert!(Style::parse("dots").is_err());
    }

    #[test]
    fn heatmap_skips_cold_cells() {
        let svg = render_heatmap("m", 2, 2, &[0.0, 1.0, 0.0, 0.5], 100).unwrap();
        assert_eq!(svg.matches("<rect").count(), 3); // background + two hot cells
        assert!(svg.contains(r##"fill="#ff0000""##));
    }
}
