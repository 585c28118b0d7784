//! Hop-count baseline: shortest path through the neighbour graph of the
//! existing sites, as if every intermediate site were secured.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::apollonius::{Diagram, SiteId, SiteKind};
use crate::error::SolveError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsResult {
    /// Sites from source to target inclusive.
    pub path: Vec<SiteId>,
}

impl BfsResult {
    /// Number of sites strictly between source and target.
    pub fn intermediates(&self) -> usize {
        self.path.len().saturating_sub(2)
    }
}

/// Breadth-first search over live non-frame sites.
///
/// Neighbours are expanded in increasing id order, so among shortest paths the
/// one found first is lexicographically smallest by discovery.
pub fn bfs_baseline(d: &Diagram, source: SiteId, target: SiteId) -> Result<BfsResult, SolveError> {
    let usable = |s: SiteId| d.site(s).is_ok_and(|r| r.is_live() && r.kind != SiteKind::Frame);
    if !usable(source) || !usable(target) {
        return Err(SolveError::InvalidEndpoints);
    }
    if source == target {
        return Ok(BfsResult { path: vec![source] });
    }
    let mut parent: Vec<u32> = vec![u32::MAX; d.site_count()];
    parent[source.index()] = source.0;
    let mut queue = VecDeque::from([source]);
    while let Some(s) = queue.pop_front() {
        let mut nbrs = d.neighbors(s)?;
        nbrs.sort_unstable();
        for n in nbrs {
            if parent[n.index()] != u32::MAX || !usable(n) {
                continue;
            }
            parent[n.index()] = s.0;
            if n == target {
                let mut path = vec![target];
                let mut cur = target;
                while cur != source {
                    cur = SiteId(parent[cur.index()]);
                    path.push(cur);
                }
                path.reverse();
                return Ok(BfsResult { path });
            }
            queue.push_back(n);
        }
    }
    Err(SolveError::NoPath { rounds: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, RobustnessConfig};

    fn row() -> Diagram {
        // A row inside a distant frame: each point only sees the next one along.
        let pts: Vec<Point> = (0..8).map(|i| Point::new(i as f64, 0.0)).collect();
        let frame = [Point::new(-20.0, -20.0), Point::new(27.0, -20.0), Point::new(27.0, 20.0), Point::new(-20.0, 20.0)];
        Diagram::build(&pts, &frame, RobustnessConfig::default()).unwrap()
    }

    #[test]
    fn adjacent_sites_have_no_intermediates() {
        let d = row();
        let r = bfs_baseline(&d, SiteId(0), SiteId(1)).unwrap();
        assert_eq!(r.path, vec![SiteId(0), SiteId(1)]);
        assert_eq!(r.intermediates(), 0);
    }

    #[test]
    fn strip_path_length() {
        let d = row();
        let r = bfs_baseline(&d, SiteId(0), SiteId(7)).unwrap();
        assert_eq!(r.intermediates(), 6);
        assert_eq!(r.path.first(), Some(&SiteId(0)));
        assert_eq!(r.path.last(), Some(&SiteId(7)));
        for w in r.path.windows(2) {
            assert!(d.are_adjacent(w[0], w[1]).unwrap());
        }
    }

    #[test]
    fn frame_sites_are_not_endpoints() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 1.0)];
        let frame = [Point::new(-9.0, -9.0), Point::new(9.0, -9.0), Point::new(0.0, 9.0)];
        let d = Diagram::build(&pts, &frame, RobustnessConfig::default()).unwrap();
        assert_eq!(bfs_baseline(&d, SiteId(0), SiteId(3)), Err(SolveError::InvalidEndpoints));
        assert_eq!(bfs_baseline(&d, SiteId(0), SiteId(0)).unwrap().intermediates(), 0);
    }
}
