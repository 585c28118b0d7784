//! Slow, independent reference implementations used by the tests.

#![allow(dead_code)]

use secpath_core::Point;
use std::collections::VecDeque;

/// Circle `(x, y, r)` externally tangent to three disks.
pub type Circle = (f64, f64, f64);

fn residuals(c: Circle, disks: &[(f64, f64, f64); 3]) -> [f64; 3] {
    disks.map(|(x, y, r)| ((c.0 - x).powi(2) + (c.1 - y).powi(2)).sqrt() - c.2 - r)
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Solves the 3x3 system `m · x = b` by Cramer's rule.
fn cramer(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(mk) / d;
    }
    Some(out)
}

fn damped_newton(mut c: Circle, disks: &[(f64, f64, f64); 3], scale: f64) -> Option<Circle> {
    let mut f = residuals(c, disks);
    for _ in 0..200 {
        if norm3(f) <= 1e-15 * scale {
            break;
        }
        let mut jac = [[0.0; 3]; 3];
        for (i, &(x, y, _)) in disks.iter().enumerate() {
            let d = ((c.0 - x).powi(2) + (c.1 - y).powi(2)).sqrt().max(1e-300);
            jac[i] = [(c.0 - x) / d, (c.1 - y) / d, -1.0];
        }
        let Some(step) = cramer(jac, f.map(|v| -v)) else { break };
        let mut t = 1.0;
        let mut improved = false;
        while t >= 1e-12 {
            let next = (c.0 + t * step[0], c.1 + t * step[1], c.2 + t * step[2]);
            let fn_ = residuals(next, disks);
            if norm3(fn_) < norm3(f) {
                c = next;
                f = fn_;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (norm3(f) <= 1e-12 * scale).then_some(c)
}

/// All circles tangent to the three disks with every disk outside, found by
/// damped Newton from a grid of starting points. `scale` is the triple's bounding-box diagonal.
pub fn newton_tritangent(disks: [(f64, f64, f64); 3], scale: f64) -> Vec<Circle> {
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (x, y, _) in disks {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let mut starts: Vec<(f64, f64)> = Vec::new();
    const STEPS: usize = 8;
    for i in 0..=STEPS {
        for j in 0..=STEPS {
            let x = lo.0 - scale + 3.0 * scale * i as f64 / STEPS as f64;
            let y = lo.1 - scale + 3.0 * scale * j as f64 / STEPS as f64;
            starts.push((x, y));
        }
    }
    // Rings far out catch the large circles of nearly collinear triples.
    let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    for ring in [3.0, 10.0, 30.0, 100.0, 1000.0] {
        for k in 0..32 {
            let a = k as f64 * std::f64::consts::TAU / 32.0;
            starts.push((mid.0 + ring * scale * a.cos(), mid.1 + ring * scale * a.sin()));
        }
    }
    let mut found: Vec<Circle> = Vec::new();
    for (x, y) in starts {
        let r = disks.iter().map(|&(a, b, r)| ((x - a).powi(2) + (y - b).powi(2)).sqrt() - r).fold(f64::INFINITY, f64::min);
        let Some(c) = damped_newton((x, y, r), &disks, scale) else { continue };
        // External tangency: the circle's radius plus each disk radius is a distance.
        if disks.iter().any(|&(_, _, ri)| c.2 + ri < 0.0) {
            continue;
        }
        let size = scale + c.2.abs();
        let dup = found.iter().any(|f| (f.0 - c.0).abs() + (f.1 - c.1).abs() + (f.2 - c.2).abs() <= 1e-7 * size);
        if !dup {
            found.push(c);
        }
    }
    found
}

/// Hop distances from `source` in the graph with the given undirected edges.
pub fn hop_distances(n: usize, edges: &[(usize, usize)], source: usize) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![None; n];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Bounding-box diagonal of a point set.
pub fn diagonal(points: &[Point]) -> f64 {
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (hi - lo).norm()
}
