//! SVG rendering of planar clustering runs: data colored by cluster, one
//! polyline per datum trajectory, and a cross for every mode.

use std::fmt::Write as _;

use super::CliError;
use crate::geometry::{Dataset, Point};
use crate::meanshift::ClusteringResult;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 30.0;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a Point>) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p.coords()[k]);
                max[k] = max[k].max(p.coords()[k]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]);
        let scale = if span > 0.0 { (CANVAS - 2.0 * MARGIN) / span } else { 1.0 };
        Frame { min, scale }
    }

    /// Canvas coordinates, y pointing up.
    fn map(&self, p: &Point) -> (f64, f64) {
        let x = MARGIN + (p.coords()[0] - self.min[0]) * self.scale;
        let y = CANVAS - MARGIN - (p.coords()[1] - self.min[1]) * self.scale;
        (x, y)
    }
}

fn color(cluster: usize) -> &'static str {
    PALETTE[cluster % PALETTE.len()]
}

pub fn render_svg(data: &Dataset, result: &ClusteringResult) -> Result<String, CliError> {
    if data.dim() != 2 {
        return Err(CliError::Data(format!("plotting needs 2-D data, got {} dimensions", data.dim())));
    }
    if result.assignments.len() != data.len() {
        return Err(CliError::Data(format!(
            "result covers {} points but the dataset has {}",
            result.assignments.len(),
            data.len()
        )));
    }
    let paths = result
        .trajectories
        .as_ref()
        .ok_or_else(|| CliError::Data("result has no trajectories; re-run `cluster` with --trajectories".into()))?;
    if paths.len() != data.len() || paths.iter().flatten().any(|p| p.dim() != 2) || result.modes.iter().any(|m| m.dim() != 2) {
        return Err(CliError::Data("trajectories or modes do not match the 2-D dataset".into()));
    }

    let frame = Frame::fit(data.points().iter().chain(paths.iter().flatten()).chain(&result.modes));
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    writeln!(svg, r#"<g class="trajectories" fill="none" stroke-width="0.6" stroke-opacity="0.5">"#).unwrap();
    for (path, &cluster) in paths.iter().zip(&result.assignments) {
        let pts: Vec<String> = path
            .iter()
            .map(|p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(svg, r#"<polyline class="trajectory" stroke="{}" points="{}"/>"#, color(cluster), pts.join(" ")).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r#"<g class="data">"#).unwrap();
    for (p, &cluster) in data.points().iter().zip(&result.assignments) {
        let (x, y) = frame.map(p);
        writeln!(svg, r#"<circle class="datum" cx="{x:.2}" cy="{y:.2}" r="2" fill="{}"/>"#, color(cluster)).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r#"<g class="modes" stroke="black" stroke-width="2">"#).unwrap();
    for (cluster, m) in result.modes.iter().enumerate() {
        let (x, y) = frame.map(m);
        writeln!(
            svg,
            r#"<path class="mode" data-cluster="{cluster}" d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}"/>"#,
            x - 6.0,
            y - 6.0,
            x + 6.0,
            y + 6.0,
            x - 6.0,
            y + 6.0,
            x + 6.0,
            y - 6.0
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}
