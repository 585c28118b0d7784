//! Low-level planar geometry over points and disks.
//!
//! Everything here works with the additively weighted distance
//! `|p - c| - r`, which is what the Apollonius diagram is built on.

use core::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeomError;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `abc`; positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// A weighted site: a disk with nonnegative radius. Input points are disks of radius zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub const fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub const fn point(center: Point) -> Self {
        Disk { center, radius: 0.0 }
    }

    pub fn is_valid(&self) -> bool {
        self.center.is_finite() && self.radius.is_finite() && self.radius >= 0.0
    }

    /// Whether `self` lies inside `other`, i.e. `self` owns no cell when both are present.
    pub fn is_dominated_by(&self, other: &Disk) -> bool {
        self.center.distance(other.center) + self.radius <= other.radius
    }

    pub fn scaled(&self, factor: f64) -> Disk {
        Disk::new(self.center, self.radius * factor)
    }
}

/// Additively weighted distance from `p` to `d`: negative iff `p` is strictly inside the disk.
pub fn weighted_distance(p: Point, d: &Disk) -> f64 {
    p.distance(d.center) - d.radius
}

/// Numerical knobs shared by the diagram and the wavefront.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessConfig {
    /// Maximum per-coordinate displacement of input points, relative to the bounding-box diagonal.
    pub perturbation: f64,
    /// Multiplier applied to the clearance radius of every wavefront disk.
    pub radius_factor: f64,
    /// Relative comparison epsilon; multiplied by the bounding-box diagonal.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        RobustnessConfig {
            perturbation: 1e-9,
            radius_factor: 1.0 - 1e-6,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl RobustnessConfig {
    pub fn validate(&self) -> Result<(), GeomError> {
        let ok = self.perturbation.is_finite()
            && self.perturbation >= 0.0
            && self.radius_factor > 0.0
            && self.radius_factor <= 1.0
            && self.tolerance.is_finite()
            && self.tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(GeomError::InvalidConfig)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Deterministically displaces `p` by up to `perturbation * diagonal` per coordinate.
///
/// The offset depends only on the seed and `index`, so the same point inserted
/// under the same index always lands in the same place.
pub fn perturb(p: Point, cfg: &RobustnessConfig, diagonal: f64, index: u64) -> Point {
    let magnitude = cfg.perturbation * diagonal;
    if magnitude <= 0.0 {
        return p;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let dx: f64 = rng.gen_range(-1.0..=1.0);
    let dy: f64 = rng.gen_range(-1.0..=1.0);
    Point::new(p.x + dx * magnitude, p.y + dy * magnitude)
}

/// The point where two externally tangent disks touch, taken on `a`'s boundary.
///
/// `tolerance` is an absolute length: the gap `|c_a - c_b| - (r_a + r_b)` must not exceed it.
pub fn tangency_point(a: &Disk, b: &Disk, tolerance: f64) -> Result<Point, GeomError> {
    let dist = a.center.distance(b.center);
    let gap = dist - (a.radius + b.radius);
    if !(gap.abs() <= tolerance) {
        return Err(GeomError::NotTangent { gap });
    }
    if a.radius == 0.0 || dist == 0.0 {
        return Ok(a.center);
    }
    Ok(a.center + (b.center - a.center) * (a.radius / dist))
}

/// All circles externally tangent to the three disks, as disks `(center, radius)`.
///
/// The radius may be negative when the disks overlap (the circle then lies in
/// their common intersection); solutions with `radius + r_i < 0` are discarded.
/// At most two circles exist for disks in general position.
pub fn tritangent_circles(a: &Disk, b: &Disk, c: &Disk) -> heapless_pair::Pair<Disk> {
    let mut out = heapless_pair::Pair::new();
    let sites = [a, b, c];
    // Work relative to the first disk to keep magnitudes small.
    let origin = a.center;
    let p2 = b.center - origin;
    let p3 = c.center - origin;
    let (r1, r2, r3) = (a.radius, b.radius, c.radius);
    // Differences of squared clearance equations are linear in (w, R):
    //   p_i . w + (r_i - r1) R = (|p_i|^2 - r_i^2 + r1^2) / 2
    let row2 = [p2.x, p2.y, r2 - r1];
    let row3 = [p3.x, p3.y, r3 - r1];
    let e2 = 0.5 * (p2.dot(p2) - r2 * r2 + r1 * r1);
    let e3 = 0.5 * (p3.dot(p3) - r3 * r3 + r1 * r1);
    let n = cross3(row2, row3);
    let n2 = dot3(n, n);
    let g22 = dot3(row2, row2);
    let g33 = dot3(row3, row3);
    if !(n2 > 1e-24 * g22 * g33) {
        return out;
    }
    let g23 = dot3(row2, row3);
    // Minimal-norm particular solution x0 = alpha row2 + beta row3.
    let alpha = (e2 * g33 - e3 * g23) / n2;
    let beta = (e3 * g22 - e2 * g23) / n2;
    let x0 = [
        alpha * row2[0] + beta * row3[0],
        alpha * row2[1] + beta * row3[1],
        alpha * row2[2] + beta * row3[2],
    ];
    // Remaining equation |w|^2 = (R + r1)^2 along x0 + t n.
    let qa = n[0] * n[0] + n[1] * n[1] - n[2] * n[2];
    let qb = 2.0 * (x0[0] * n[0] + x0[1] * n[1] - (x0[2] + r1) * n[2]);
    let qc = x0[0] * x0[0] + x0[1] * x0[1] - (x0[2] + r1) * (x0[2] + r1);
    let scale = libm::sqrt(n2);
    for t in solve_quadratic(qa, qb, qc, scale) {
        let w = Point::new(x0[0] + t * n[0], x0[1] + t * n[1]);
        let radius = x0[2] + t * n[2];
        let mut disk = Disk { center: origin + w, radius };
        if !disk.center.is_finite() || !disk.radius.is_finite() {
            continue;
        }
        let size = libm::fabs(disk.radius) + r1.abs() + r2.abs() + r3.abs() + p2.norm() + p3.norm();
        // Roots of the squared system with R + r_i < 0 are tangent to reflected circles.
        if sites.iter().any(|s| disk.radius + s.radius < -1e-9 * size) {
            continue;
        }
        polish(&mut disk, &sites);
        let residual = sites
            .iter()
            .map(|s| libm::fabs(disk.center.distance(s.center) - disk.radius - s.radius))
            .fold(0.0, f64::max);
        if sites.iter().any(|s| disk.radius + s.radius < -1e-12 * size) || residual > 1e-6 * size {
            continue;
        }
        out.push(disk);
    }
    out
}

/// The empty tritangent circle of `a, b, c` whose tangency points run counter-clockwise.
pub fn tritangent_circle(a: &Disk, b: &Disk, c: &Disk) -> Result<Disk, GeomError> {
    tritangent_circles(a, b, c)
        .into_iter()
        .find(|d| tangency_orientation(d.center, a, b, c) > 0.0)
        .ok_or(GeomError::NoSolution)
}

/// Sign convention for a tritangent circle centred at `v`: the orientation of the
/// directions from `v` towards the three centres.
pub fn tangency_orientation(v: Point, a: &Disk, b: &Disk, c: &Disk) -> f64 {
    let u = |d: &Disk| {
        let w = d.center - v;
        let len = w.norm();
        if len > 0.0 {
            w * (1.0 / len)
        } else {
            w
        }
    };
    orient(u(a), u(b), u(c))
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Real roots of `a t^2 + b t + c`, using the cancellation-free form.
fn solve_quadratic(a: f64, b: f64, c: f64, scale: f64) -> heapless_pair::Pair<f64> {
    let mut roots = heapless_pair::Pair::new();
    let mag = libm::fabs(a) + libm::fabs(b) / scale.max(f64::MIN_POSITIVE);
    if libm::fabs(a) <= 1e-14 * mag.max(f64::MIN_POSITIVE) {
        if b != 0.0 {
            roots.push(-c / b);
        }
        return roots;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // Near-tangent configurations can dip just below zero through rounding.
        if disc > -1e-12 * b * b {
            roots.push(-b / (2.0 * a));
        }
        return roots;
    }
    let sq = libm::sqrt(disc);
    let q = -0.5 * (b + libm::copysign(sq, b));
    let t1 = q / a;
    roots.push(t1);
    if q != 0.0 {
        let t2 = c / q;
        if t2 != t1 {
            roots.push(t2);
        }
    }
    roots
}

/// Newton refinement of `|v - c_i| - R - r_i = 0` for the three sites.
fn polish(disk: &mut Disk, sites: &[&Disk; 3]) {
    for _ in 0..3 {
        let mut jac = [[0.0f64; 3]; 3];
        let mut res = [0.0f64; 3];
        for (i, s) in sites.iter().enumerate() {
            let w = disk.center - s.center;
            let len = w.norm();
            if len == 0.0 {
                return;
            }
            jac[i] = [w.x / len, w.y / len, -1.0];
            res[i] = len - disk.radius - s.radius;
        }
        let Some(step) = solve3(jac, res) else { return };
        let cand = Disk {
            center: Point::new(disk.center.x - step[0], disk.center.y - step[1]),
            radius: disk.radius - step[2],
        };
        if !cand.center.is_finite() || !cand.radius.is_finite() {
            return;
        }
        let before = res.iter().map(|r| r.abs()).fold(0.0, f64::max);
        let after = sites
            .iter()
            .map(|s| (cand.center.distance(s.center) - cand.radius - s.radius).abs())
            .fold(0.0, f64::max);
        if after >= before {
            return;
        }
        *disk = cand;
        if after == 0.0 {
            return;
        }
    }
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if !(det.abs() > 1e-300) {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mm = m;
        for row in 0..3 {
            mm[row][col] = r[row];
        }
        let d = mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1])
            - mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0])
            + mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
        *slot = d / det;
    }
    Some(out)
}

/// A fixed-capacity container for the (at most two) solutions of a quadratic problem.
pub mod heapless_pair {
    #[derive(Debug, Clone, Copy)]
    pub struct Pair<T: Copy> {
        items: [Option<T>; 2],
    }

    impl<T: Copy> Pair<T> {
        pub fn new() -> Self {
            Pair { items: [None, None] }
        }

        pub fn push(&mut self, item: T) {
            if self.items[0].is_none() {
                self.items[0] = Some(item);
            } else {
                self.items[1] = Some(item);
            }
        }

        pub fn len(&self) -> usize {
            self.items.iter().filter(|i| i.is_some()).count()
        }

        pub fn is_empty(&self) -> bool {
            self.items[0].is_none()
        }

        pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
            self.items.iter().filter_map(|i| *i)
        }
    }

    impl<T: Copy> Default for Pair<T> {
        fn default() -> Self {
            Self::new()
        }
    }

    impl<T: Copy> IntoIterator for Pair<T> {
        type Item = T;
        type IntoIter = core::iter::Flatten<core::array::IntoIter<Option<T>, 2>>;
        fn into_iter(self) -> Self::IntoIter {
            self.items.into_iter().flatten()
        }
    }
}
