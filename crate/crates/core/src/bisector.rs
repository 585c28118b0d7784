//! Parameterised bisectors and the edge-conflict tests built on them.
//!
//! The bisector of two non-nested disks `a`, `b` is one branch of a hyperbola
//! with foci at the centres (a line when the radii agree). We use the
//! parameterisation
//!
//! ```text
//! x(s) = m + h cosh(s) u + k sinh(s) n,    h = (r_a - r_b) / 2,  k = sqrt(d^2/4 - h^2)
//! ```
//!
//! where `u` points from `a` to `b` and `n` is its left normal. Along the
//! branch the clearance (weighted distance to either disk) is
//! `d/2 cosh(s) - (r_a + r_b)/2`, so it is smallest at `s = 0`.

use crate::geom::{tritangent_circles, weighted_distance, Disk, Point};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bisector {
    mid: Point,
    u: Point,
    n: Point,
    h: f64,
    k: f64,
    half_d: f64,
    mean_r: f64,
}

impl Bisector {
    /// `None` when one disk contains the other (no bisector) or the centres coincide.
    pub(crate) fn new(a: &Disk, b: &Disk) -> Option<Bisector> {
        let delta = b.center - a.center;
        let d = delta.norm();
        let dr = (a.radius - b.radius).abs();
        if !(d > 0.0) || !(d > dr) {
            return None;
        }
        let u = delta * (1.0 / d);
        let half_d = 0.5 * d;
        // Factored to avoid cancellation when the disks nearly touch internally.
        let k = libm::sqrt(0.25 * (d - dr) * (d + dr));
        if !(k > 0.0) {
            return None;
        }
        Some(Bisector {
            mid: (a.center + b.center) * 0.5,
            u,
            n: u.perp(),
            h: 0.5 * (a.radius - b.radius),
            k,
            half_d,
            mean_r: 0.5 * (a.radius + b.radius),
        })
    }

    pub(crate) fn point(&self, s: f64) -> Point {
        self.mid + self.u * (self.h * libm::cosh(s)) + self.n * (self.k * libm::sinh(s))
    }

    pub(crate) fn param(&self, x: Point) -> f64 {
        libm::asinh((x - self.mid).dot(self.n) / self.k)
    }

    /// A parameter whose point lies about `reach` from the midpoint.
    pub(crate) fn far_param(&self, reach: f64) -> f64 {
        libm::asinh(reach / self.k)
    }

    pub(crate) fn clearance(&self, s: f64) -> f64 {
        self.half_d * libm::cosh(s) - self.mean_r
    }

    /// Signed conflict measure at parameter `s`: negative when `q` intrudes into the
    /// clearance circle centred at `x(s)`.
    fn conflict_measure(&self, q: &Disk, s: f64) -> f64 {
        weighted_distance(self.point(s), q) - self.clearance(s)
    }
}

/// Conflict test over the open bisector interval `(lo, hi)` of the edge between `a` and `b`.
///
/// With `want_all` the answer is whether the whole interval is in conflict with `q`
/// (used when both endpoints already are); otherwise whether any part of it is.
pub(crate) fn finite_edge_conflict(
    a: &Disk,
    b: &Disk,
    q: &Disk,
    lo: f64,
    hi: f64,
    want_all: bool,
) -> bool {
    let Some(bis) = Bisector::new(a, b) else {
        return false;
    };
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut cuts = [lo, f64::NAN, f64::NAN, hi];
    let mut count = 1;
    for sol in tritangent_circles(a, b, q) {
        let s = bis.param(sol.center);
        if s > lo && s < hi {
            cuts[count] = s;
            count += 1;
        }
    }
    cuts[count] = hi;
    let cuts = &mut cuts[..=count];
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    let mut any = false;
    let mut all = true;
    for w in cuts.windows(2) {
        let s = representative(w[0], w[1]);
        let in_conflict = bis.conflict_measure(q, s) < 0.0;
        any |= in_conflict;
        all &= in_conflict;
    }
    if want_all {
        all
    } else {
        any
    }
}

fn representative(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Outward unit normal of the supporting line of `a` and `b` that has both disks
/// on its right when walking from `a` to `b`. This is the "vertex at infinity"
/// of the hull face `(a, b, ∞)`.
pub(crate) fn hull_normal(a: &Disk, b: &Disk) -> Option<Point> {
    let delta = b.center - a.center;
    let d = delta.norm();
    if !(d > 0.0) {
        return None;
    }
    let u = delta * (1.0 / d);
    let alpha = (a.radius - b.radius) / d;
    if !(alpha.abs() < 1.0) {
        return None;
    }
    let beta = libm::sqrt((1.0 - alpha) * (1.0 + alpha));
    Some(u * alpha + u.perp() * beta)
}

/// Whether `q` crosses the supporting line of the hull face `(a, b, ∞)`.
pub(crate) fn infinite_vertex_conflict(a: &Disk, b: &Disk, q: &Disk) -> bool {
    match hull_normal(a, b) {
        Some(n) => n.dot(q.center - a.center) + q.radius - a.radius > 0.0,
        None => false,
    }
}

/// Conflict test for the unbounded dual edge between hull site `x` and infinity.
///
/// The supporting lines of `x` sweep clockwise from normal `n_in` (incoming hull
/// edge) to `n_out` (outgoing hull edge).
pub(crate) fn infinite_edge_conflict(
    x: &Disk,
    n_in: Point,
    n_out: Point,
    q: &Disk,
    want_all: bool,
) -> bool {
    use core::f64::consts::{PI, TAU};
    let rel = q.center - x.center;
    let amp = rel.norm();
    let phi = libm::atan2(rel.y, rel.x);
    let offset = q.radius - x.radius;
    let t_in = libm::atan2(n_in.y, n_in.x);
    let t_out = libm::atan2(n_out.y, n_out.x);
    let mut span = (t_in - t_out).wrap(TAU);
    if span == 0.0 {
        span = TAU;
    }
    let value = |theta: f64| amp * libm::cos(theta - phi) + offset;
    // Does the clockwise sweep from t_in by less than `span` pass through angle `target`?
    let inside = |target: f64| {
        let t = (t_in - target).wrap(TAU);
        t > 0.0 && t < span
    };
    let ends = [value(t_in), value(t_out)];
    let mut hi = ends[0].max(ends[1]);
    let mut lo = ends[0].min(ends[1]);
    if inside(phi) {
        hi = hi.max(amp + offset);
    }
    if inside(phi + PI) {
        lo = lo.min(-amp + offset);
    }
    if want_all {
        lo > 0.0
    } else {
        hi > 0.0
    }
}

trait Wrap {
    fn wrap(self, m: f64) -> f64;
}

impl Wrap for f64 {
    fn wrap(self, m: f64) -> f64 {
        let r = libm::fmod(self, m);
        if r < 0.0 {
            r + m
        } else {
            r
        }
    }
}
