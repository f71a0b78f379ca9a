//! Self-contained SVG charts: polylines, cell heatmaps and bar charts.
//!
//! All coordinates are printed with fixed precision so identical inputs
//! give byte-identical documents.

use std::fmt::Write;

use crate::classify::Label;
use crate::error::{Error, Result};
use crate::sweep::{PhaseDiagram, Region, SpectrumSweep};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 48.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `cells[ix][iy]` indexes into `palette`.
    pub cells: Vec<Vec<usize>>,
    pub palette: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Self {
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    s
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r) = (MARGIN_L, WIDTH - MARGIN_R);
    let (t, b) = (MARGIN_T, HEIGHT - MARGIN_B);
    writeln!(
        s,
        r#"<rect x="{l:.1}" y="{t:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        r - l,
        b - t
    )
    .unwrap();
    for k in 0..=4 {
        let fx = f.x0 + (f.x1 - f.x0) * k as f64 / 4.0;
        let fy = f.y0 + (f.y1 - f.y0) * k as f64 / 4.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            f.px(fx),
            b + 14.0,
            tick(fx)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            l - 4.0,
            f.py(fy) + 4.0,
            tick(fy)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        HEIGHT - 10.0,
        escape(xlabel)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(ylabel)
    )
    .unwrap();
}

fn legend(s: &mut String, entries: &[(&str, &str)]) {
    let x = WIDTH - MARGIN_R + 10.0;
    for (k, (name, color)) in entries.iter().enumerate() {
        let y = MARGIN_T + 14.0 * k as f64;
        writeln!(
            s,
            r#"<rect x="{x:.1}" y="{y:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            x + 14.0,
            y + 9.0,
            escape(name)
        )
        .unwrap();
    }
}

fn tick(v: f64) -> String {
    let t = format!("{v:.2}");
    if t == "-0.00" {
        "0.00".into()
    } else {
        t
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart; series are drawn in order so later ones sit on top.
pub fn lines(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> Result<String> {
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let all = || series.iter().flat_map(|s| s.points.iter());
    let f = Frame::new(all().map(|p| p.0), all().map(|p| p.1));
    let mut s = header(title);
    axes(&mut s, &f, xlabel, ylabel);
    for line in series.iter().filter(|l| !l.points.is_empty()) {
        let mut pts = String::new();
        for (k, &(x, y)) in line.points.iter().enumerate() {
            if k > 0 {
                pts.push(' ');
            }
            write!(pts, "{:.2},{:.2}", f.px(x), f.py(y)).unwrap();
        }
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{pts}"><title>{}</title></polyline>"#,
            line.color,
            escape(&line.name)
        )
        .unwrap();
    }
    // names starting with '#' stay out of the legend
    let mut seen: Vec<(&str, &str)> = Vec::new();
    for l in series.iter().filter(|l| !l.name.starts_with('#')) {
        if !seen.iter().any(|(n, _)| *n == l.name) {
            seen.push((&l.name, &l.color));
        }
    }
    legend(&mut s, &seen);
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn heatmap(title: &str, xlabel: &str, ylabel: &str, map: &Heatmap) -> Result<String> {
    if map.x.is_empty() || map.y.is_empty() || map.cells.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let f = Frame::new(map.x.iter().copied(), map.y.iter().copied());
    let half = |v: &[f64], i: usize| -> (f64, f64) {
        let lo = if i == 0 { v[0] } else { 0.5 * (v[i - 1] + v[i]) };
        let hi = if i + 1 == v.len() { v[i] } else { 0.5 * (v[i] + v[i + 1]) };
        (lo, hi)
    };
    let mut s = header(title);
    for (ix, col) in map.cells.iter().enumerate() {
        let (xa, xb) = half(&map.x, ix);
        for (iy, &c) in col.iter().enumerate() {
            let (ya, yb) = half(&map.y, iy);
            writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                f.px(xa),
                f.py(yb),
                (f.px(xb) - f.px(xa)).max(0.5),
                (f.py(ya) - f.py(yb)).max(0.5),
                map.palette[c].1
            )
            .unwrap();
        }
    }
    axes(&mut s, &f, xlabel, ylabel);
    let entries: Vec<(&str, &str)> = map
        .palette
        .iter()
        .map(|(n, c)| (n.as_str(), c.as_str()))
        .collect();
    legend(&mut s, &entries);
    s.push_str("</svg>\n");
    Ok(s)
}

/// Bars at positions `1..=len`.
pub fn bars(title: &str, xlabel: &str, ylabel: &str, values: &[f64], color: &str) -> Result<String> {
    if values.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = values.len() as f64;
    let f = Frame::new(
        [0.5, n + 0.5].into_iter(),
        values.iter().copied().chain(std::iter::once(0.0)),
    );
    let mut s = header(title);
    axes(&mut s, &f, xlabel, ylabel);
    let w = (f.px(1.0) - f.px(0.0)) * 0.8;
    for (k, &v) in values.iter().enumerate() {
        let x = f.px(k as f64 + 1.0) - w / 2.0;
        let (top, bottom) = (f.py(v.max(0.0)), f.py(v.min(0.0)));
        writeln!(
            s,
            r#"<rect x="{x:.2}" y="{top:.2}" width="{w:.2}" height="{:.2}" fill="{color}"/>"#,
            bottom - top
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn label_color(label: Label) -> &'static str {
    match label {
        Label::Bulk => "#9a9a9a",
        Label::TopologicalEdge => "#d62728",
        Label::NontopologicalEdge => "#1f77b4",
        Label::BoundState => "#2ca02c",
    }
}

pub fn region_color(region: Region) -> &'static str {
    match region {
        Region::RegionI => "#f4a261",
        Region::RegionII => "#e9f5db",
        Region::RegionIII => "#457b9d",
    }
}

/// One polyline per level index, colored by the label it carries at most grid points.
pub fn sweep_chart(title: &str, sweep: &SpectrumSweep) -> Result<String> {
    if sweep.points.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = sweep.points[0].report.states.len();
    let mut series = Vec::with_capacity(n + 4);
    for m in 0..n {
        let mut tally = [0usize; 4];
        let points = sweep
            .points
            .iter()
            .map(|p| {
                let st = &p.report.states[m];
                tally[st.label as usize] += 1;
                (p.value, st.energy)
            })
            .collect();
        let dominant = (0..4).max_by_key(|&k| (tally[k], 4 - k)).unwrap();
        let label = [
            Label::Bulk,
            Label::TopologicalEdge,
            Label::NontopologicalEdge,
            Label::BoundState,
        ][dominant];
        series.push(Series {
            name: format!("#{}", m + 1),
            color: label_color(label).into(),
            points,
        });
    }
    // bulk first so edge levels are drawn on top
    series.sort_by_key(|s| s.color != label_color(Label::Bulk));
    let mut chart = lines(title, &sweep.axis.name, "energy", &series)?;
    let legend_entries = [
        Label::Bulk,
        Label::TopologicalEdge,
        Label::NontopologicalEdge,
        Label::BoundState,
    ]
    .map(|l| (l.as_str(), label_color(l)));
    let tail = chart.len() - "</svg>\n".len();
    let mut extra = String::new();
    legend(&mut extra, &legend_entries);
    chart.insert_str(tail, &extra);
    Ok(chart)
}

pub fn diagram_chart(title: &str, d: &PhaseDiagram) -> Result<String> {
    let palette = Region::ALL
        .iter()
        .map(|&r| (format!("{r}: {}", d.kind.legend(r)), region_color(r).to_string()))
        .collect();
    let cells = d
        .cells
        .iter()
        .map(|col| {
            col.iter()
                .map(|r| Region::ALL.iter().position(|x| x == r).unwrap())
                .collect()
        })
        .collect();
    let map = Heatmap {
        x: d.x_axis.values.clone(),
        y: d.y_axis.values.clone(),
        cells,
        palette,
    };
    heatmap(title, &d.x_axis.name, &d.y_axis.name, &map)
}
