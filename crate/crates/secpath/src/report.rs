//! Results tables and SVG figures.

use std::fmt::Write as _;

use secpath_core::{Diagram, Disk, Point, SiteKind};

use crate::pipeline::{Outcome, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
}

const COLUMNS: [&str; 7] = ["name", "points", "bfs", "alg", "rounds", "inserted", "valid"];
const TIMING_COLUMNS: [&str; 2] = ["build_ms", "wavefront_ms"];

/// Formats rows as an aligned text table or CSV with a header line.
///
/// Timing columns are optional so that tables can be compared byte for byte.
pub fn emit_table(rows: &[ResultRow], format: TableFormat, timings: bool) -> String {
    let mut header: Vec<String> = COLUMNS.iter().map(|s| s.to_string()).collect();
    if timings {
        header.extend(TIMING_COLUMNS.iter().map(|s| s.to_string()));
    }
    let mut cells = vec![header];
    for r in rows {
        let mut line = vec![
            r.name.clone(),
            r.points.to_string(),
            r.bfs.to_string(),
            r.alg.to_string(),
            r.rounds.to_string(),
            r.inserted.to_string(),
            if r.valid { "yes" } else { "no" }.to_string(),
        ];
        if timings {
            line.push(format!("{:.3}", r.build_time.as_secs_f64() * 1e3));
            line.push(format!("{:.3}", r.wavefront_time.as_secs_f64() * 1e3));
        }
        cells.push(line);
    }
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            for line in &cells {
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        TableFormat::Text => {
            let widths: Vec<usize> =
                (0..cells[0].len()).map(|c| cells.iter().map(|l| l[c].len()).max().unwrap_or(0)).collect();
            for line in &cells {
                let padded: Vec<String> = line
                    .iter()
                    .enumerate()
                    .map(|(c, v)| if c == 0 { format!("{v:<w$}", w = widths[c]) } else { format!("{v:>w$}", w = widths[c]) })
                    .collect();
                out.push_str(padded.join("  ").trim_end());
                out.push('\n');
            }
        }
    }
    out
}

/// What to draw on top of the diagram.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlays {
    /// Source, inserted points, target.
    pub path: Option<Vec<Point>>,
    /// Wavefront disks with their generations.
    pub trace: Option<Vec<(Disk, u32)>>,
    /// Centres of the baseline path's sites.
    pub baseline: Option<Vec<Point>>,
    pub endpoints: Option<(Point, Point)>,
}

impl Overlays {
    pub fn from_outcome(o: &Outcome, path: bool, trace: bool, baseline: bool) -> Overlays {
        let source = o.solution.path.source;
        let target = o.solution.path.target;
        Overlays {
            path: path.then(|| o.solution.path.chain()),
            trace: trace.then(|| {
                o.solved
                    .sites()
                    .filter_map(|(_, r)| match r.kind {
                        SiteKind::Inserted { generation, .. } => Some((r.disk, generation)),
                        _ => None,
                    })
                    .collect()
            }),
            baseline: baseline.then(|| o.baseline_points()),
            endpoints: Some((source, target)),
        }
    }
}

/// Samples per Voronoi arc, at most.
const ARC_SAMPLES: usize = 64;
const WIDTH_PX: f64 = 800.0;

/// An SVG 1.1 document: input sites as dots, Voronoi edges as polylines,
/// wavefront disks coloured by generation, and the requested paths.
///
/// The view is the bounding box of the input sites with a small margin;
/// frame sites are not drawn. Output depends only on the arguments.
pub fn render_svg(d: &Diagram, overlays: &Overlays, title: &str) -> String {
    let inputs: Vec<Point> = d.sites().filter(|(_, r)| r.kind == SiteKind::Input).map(|(_, r)| r.disk.center).collect();
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &inputs {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let diag = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let pad = 0.05 * diag;
    let (lo, hi) = (Point::new(lo.x - pad, lo.y - pad), Point::new(hi.x + pad, hi.y + pad));
    let f = Fmt::new(diag);
    let height_px = WIDTH_PX * (hi.y - lo.y) / (hi.x - lo.x);
    let inside = |p: &Point| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        WIDTH_PX,
        f.n(height_px),
        f.n(lo.x),
        f.n(lo.y),
        f.n(hi.x - lo.x),
        f.n(hi.y - lo.y)
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#, f.n(lo.x), f.n(lo.y), f.n(hi.x - lo.x), f.n(hi.y - lo.y));
    // Flip y so the figure reads with y pointing up.
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, f.n(lo.y + hi.y));

    let mut edges = String::new();
    for arc in d.voronoi_arcs(2.0 * diag, ARC_SAMPLES) {
        if !arc.points.iter().any(inside) {
            continue;
        }
        for (k, p) in arc.points.iter().enumerate() {
            let _ = write!(edges, "{}{} {} ", if k == 0 { "M" } else { "L" }, f.n(p.x), f.n(p.y));
        }
    }
    let _ = writeln!(s, r##"<path d="{}" fill="none" stroke="#9aa0a6" stroke-width="{}"/>"##, edges.trim_end(), f.n(0.0015 * diag));

    if let Some(trace) = &overlays.trace {
        let top = trace.iter().map(|t| t.1).max().unwrap_or(1);
        let _ = writeln!(s, r#"<g fill-opacity="0.25" stroke-width="{}">"#, f.n(0.001 * diag));
        for (disk, g) in trace {
            let c = generation_colour(*g, top);
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}" fill="{c}" stroke="{c}"/>"#,
                f.n(disk.center.x),
                f.n(disk.center.y),
                f.n(disk.radius)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r#"<g fill="black">"#);
    for p in &inputs {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, f.n(p.x), f.n(p.y), f.n(0.003 * diag));
    }
    let _ = writeln!(s, "</g>");

    let polyline = |s: &mut String, pts: &[Point], colour: &str, width: f64, dots: bool| {
        let list: Vec<String> = pts.iter().map(|p| format!("{},{}", f.n(p.x), f.n(p.y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="{}"/>"#,
            list.join(" "),
            f.n(width * diag)
        );
        if dots {
            for p in pts {
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="{colour}"/>"#, f.n(p.x), f.n(p.y), f.n(0.005 * diag));
            }
        }
    };
    if let Some(b) = &overlays.baseline {
        polyline(&mut s, b, "#1a73e8", 0.004, false);
    }
    if let Some(p) = &overlays.path {
        polyline(&mut s, p, "#d93025", 0.004, true);
    }
    if let Some((a, b)) = overlays.endpoints {
        for p in [a, b] {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="{}" fill="#188038" stroke="black" stroke-width="{}"/>"##,
                f.n(p.x),
                f.n(p.y),
                f.n(0.008 * diag),
                f.n(0.001 * diag)
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

/// Fixed number of decimals chosen from the drawing's scale.
struct Fmt {
    decimals: usize,
}

impl Fmt {
    fn new(scale: f64) -> Fmt {
        let decimals = (5.0 - scale.log10().floor()).clamp(0.0, 12.0) as usize;
        Fmt { decimals }
    }

    fn n(&self, v: f64) -> String {
        let s = format!("{v:.*}", self.decimals);
        // "-0.000" and "0.000" must print the same.
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

/// Blue for the first generation through to red for the last.
fn generation_colour(g: u32, top: u32) -> String {
    let t = if top > 1 { (g.saturating_sub(1)) as f64 / (top - 1) as f64 } else { 0.0 };
    let hue = 240.0 * (1.0 - t);
    let (r, g, b) = hsv(hue, 0.75, 0.9);
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn hsv(h: f64, s: f64, v: f64) -> (u8, u8, u8) {
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let (r, g, b) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let byte = |u: f64| ((u + m) * 255.0).round() as u8;
    (byte(r), byte(g), byte(b))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
