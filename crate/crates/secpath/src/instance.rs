//! Point sets: lattice and random generators, CSV ingestion and output.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secpath_core::Point;

use crate::error::{Error, Result};

/// Fewest points accepted from a file or the random generator.
pub const MIN_POINTS: usize = 10;

/// A named point set, before endpoints and frame are chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub name: String,
    pub points: Vec<Point>,
}

/// `side × side` points of a triangular lattice with unit spacing, whose
/// Voronoi cells are regular hexagons.
pub fn gen_hex(side: usize) -> Result<PointSet> {
    if side < 3 {
        return Err(Error::InvalidArgument(format!("hex side must be at least 3, got {side}")));
    }
    let h = 3f64.sqrt() / 2.0;
    let points = (0..side * side)
        .map(|k| {
            let (i, j) = (k % side, k / side);
            Point::new(i as f64 + 0.5 * (j % 2) as f64, j as f64 * h)
        })
        .collect();
    Ok(PointSet { name: format!("hex_{side:03}"), points })
}

/// `count` points uniform in the unit square.
pub fn gen_random(count: usize, seed: u64) -> Result<PointSet> {
    if count < MIN_POINTS {
        return Err(Error::TooFewPoints { found: count, min: MIN_POINTS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    Ok(PointSet { name: format!("rand_{count:05}"), points })
}

/// Reads a point file; see [`parse_points`]. The set is named after the file stem.
pub fn load_csv(path: &Path, thin: usize) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File { path: path.display().to_string(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "points".into());
    let points = parse_points(&text, thin).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse { path: path.display().to_string(), line, message },
        other => other,
    })?;
    Ok(PointSet { name, points })
}

/// Parses `x y` pairs separated by whitespace or a comma, one per line.
///
/// Blank lines and lines starting with `#` are skipped. Every `thin`-th point
/// is kept (`thin = 1` keeps all), then exact duplicates are dropped.
pub fn parse_points(text: &str, thin: usize) -> Result<Vec<Point>> {
    if thin == 0 {
        return Err(Error::InvalidArgument("--thin must be at least 1".into()));
    }
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { path: "<input>".into(), line: i + 1, message };
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        if fields.len() != 2 {
            return Err(err(format!("expected 2 fields, found {}", fields.len())));
        }
        let mut xy = [0.0; 2];
        for (v, f) in xy.iter_mut().zip(&fields) {
            *v = f.parse::<f64>().map_err(|_| err(format!("not a number: {f:?}")))?;
            if !v.is_finite() {
                return Err(err(format!("not finite: {f:?}")));
            }
        }
        raw.push(Point::new(xy[0], xy[1]));
    }
    let mut seen = HashSet::new();
    let points: Vec<Point> = raw
        .into_iter()
        .step_by(thin)
        .filter(|p| seen.insert((p.x.to_bits(), p.y.to_bits())))
        .collect();
    if points.len() < MIN_POINTS {
        return Err(Error::TooFewPoints { found: points.len(), min: MIN_POINTS });
    }
    Ok(points)
}

/// Writes points one per line as `x,y`, readable by [`parse_points`].
pub fn write_points(out: &mut impl Write, points: &[Point]) -> std::io::Result<()> {
    for p in points {
        writeln!(out, "{},{}", p.x, p.y)?;
    }
    Ok(())
}
