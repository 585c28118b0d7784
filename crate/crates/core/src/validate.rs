//! Independent checks: chain validity by rebuilding a diagram from scratch,
//! plus brute-force oracles for tests.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::apollonius::{Diagram, SiteId};
use crate::error::{DiagramError, ValidateError};
use crate::geom::{orient, Disk, Point, RobustnessConfig};

/// Perturbation used when re-checking a chain, relative to the diagonal. It
/// must stay well below the gap the radius factor leaves around each disk.
pub const VERIFY_PERTURBATION: f64 = 1e-12;

/// Configuration for [`verify_chain`] derived from the solver's: a different
/// seed and a much smaller perturbation.
pub fn verifier_config(solver: &RobustnessConfig) -> RobustnessConfig {
    RobustnessConfig {
        perturbation: VERIFY_PERTURBATION,
        seed: solver.seed ^ 0x9e37_79b9_7f4a_7c15,
        ..*solver
    }
}

/// Point count above which [`brute_delaunay_edges`] refuses to run.
pub const BRUTE_FORCE_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub valid: bool,
    /// Index of the first link whose endpoints are not neighbours. Link `i`
    /// joins chain element `i` and `i + 1`, where the chain is `s, q_1, .., q_k, t`.
    pub failed_link: Option<usize>,
    pub adjacent: Vec<bool>,
}

/// Builds a fresh point diagram over `points`, `s`, `t` and `insertions`
/// (plus `frame`) and checks that `s, q_1, .., q_k, t` is a chain of neighbours.
pub fn verify_chain(
    points: &[Point],
    frame: &[Point],
    s: Point,
    t: Point,
    insertions: &[Point],
    cfg: RobustnessConfig,
) -> Result<ChainReport, ValidateError> {
    let mut sites: Vec<Point> = Vec::with_capacity(points.len() + insertions.len() + 2);
    sites.extend_from_slice(points);
    sites.push(s);
    sites.push(t);
    sites.extend_from_slice(insertions);
    let d = Diagram::build(&sites, frame, cfg)?;
    let n = points.len() as u32;
    let mut chain = vec![SiteId(n)];
    chain.extend((0..insertions.len() as u32).map(|i| SiteId(n + 2 + i)));
    chain.push(SiteId(n + 1));
    let mut adjacent = Vec::with_capacity(chain.len() - 1);
    for w in chain.windows(2) {
        let ok = match d.are_adjacent(w[0], w[1]) {
            Ok(b) => b,
            Err(DiagramError::HiddenSite(_)) => false,
            Err(e) => return Err(e.into()),
        };
        adjacent.push(ok);
    }
    let failed_link = adjacent.iter().position(|&a| !a);
    Ok(ChainReport { valid: failed_link.is_none(), failed_link, adjacent })
}

/// For every input point, whether a single extra point can be placed so that
/// it neighbours both `points[source]` and that point.
///
/// Candidate locations form a `resolution × resolution` grid over the
/// bounding box of `points`; locations closer than the perturbation scale to
/// an existing site are skipped. The diagram over `points` and `frame` is
/// built once and each candidate is tested without modifying it.
pub fn one_hop_reachable(
    points: &[Point],
    frame: &[Point],
    source: usize,
    resolution: usize,
    cfg: RobustnessConfig,
) -> Result<Vec<bool>, ValidateError> {
    let d = Diagram::build(points, frame, cfg)?;
    let (lo, hi) = bbox(points);
    let min_gap = (cfg.perturbation * d.diagonal()).max(f64::MIN_POSITIVE);
    let mut reachable = vec![false; points.len()];
    let src = SiteId(source as u32);
    let steps = resolution.max(2) - 1;
    let mut hint = src;
    for i in 0..=steps {
        for j in 0..=steps {
            let q = Point::new(
                lo.x + (hi.x - lo.x) * i as f64 / steps as f64,
                lo.y + (hi.y - lo.y) * j as f64 / steps as f64,
            );
            let nearest = d.nearest(q, hint)?;
            hint = nearest;
            if d.site(nearest)?.disk.center.distance(q) <= min_gap {
                continue;
            }
            let nbrs = d.preview_neighbors(&Disk::point(q), hint)?;
            if !nbrs.contains(&src) {
                continue;
            }
            for p in nbrs {
                if p.index() < points.len() {
                    reachable[p.index()] = true;
                }
            }
        }
    }
    reachable[source] = false;
    Ok(reachable)
}

/// Single-probe form of [`one_hop_reachable`].
pub fn one_hop_oracle(
    points: &[Point],
    frame: &[Point],
    source: usize,
    probe: usize,
    resolution: usize,
    cfg: RobustnessConfig,
) -> Result<bool, ValidateError> {
    Ok(one_hop_reachable(points, frame, source, resolution, cfg)?[probe])
}

/// Delaunay edges by exhaustive empty-circle tests over all triples.
///
/// Assumes general position (no four cocircular points). Edges are index pairs `(i, j)` with `i < j`.
pub fn brute_delaunay_edges(points: &[Point]) -> Result<Vec<(usize, usize)>, ValidateError> {
    let n = points.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(ValidateError::TooLarge(n));
    }
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let (pa, pb, pc) = (points[a], points[b], points[c]);
                if orient(pa, pb, pc) == 0.0 {
                    continue;
                }
                let empty = (0..n)
                    .filter(|&x| x != a && x != b && x != c)
                    .all(|x| !in_circle(pa, pb, pc, points[x]));
                if empty {
                    edges.insert((a, b));
                    edges.insert((a, c));
                    edges.insert((b, c));
                }
            }
        }
    }
    if n == 2 {
        edges.insert((0, 1));
    }
    let mut out: Vec<_> = edges.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Whether `d` is strictly inside the circle through `a`, `b`, `c`.
fn in_circle(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let det = ad.dot(ad) * bd.cross(cd) - bd.dot(bd) * ad.cross(cd) + cd.dot(cd) * ad.cross(bd);
    if orient(a, b, c) > 0.0 {
        det > 0.0
    } else {
        det < 0.0
    }
}

fn bbox(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}
