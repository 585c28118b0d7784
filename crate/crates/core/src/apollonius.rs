//! Incremental additively weighted Voronoi diagram (Apollonius graph).
//!
//! The diagram is stored as its dual: faces are triples of sites whose cells
//! meet at a Voronoi vertex, with an extra vertex at infinity closing the
//! hull. Each finite face caches its Voronoi vertex (the empty tritangent
//! circle). Curved bisector arcs are never stored.
//!
//! Weighted sites make the dual more general than a Delaunay triangulation:
//! a cell can be bounded by just two neighbours, which shows up as a site of
//! degree two and a pair of faces sharing the same vertex set with opposite
//! orientations. Insertion follows the conflict-region scheme: find the faces
//! whose vertex circle the new disk intrudes into, grow the region across
//! edges whose whole interior is in conflict, and star the boundary walk
//! around the new site.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bisector::{
    finite_edge_conflict, hull_normal, infinite_edge_conflict, infinite_vertex_conflict, Bisector,
};
use crate::error::DiagramError;
use crate::geom::{orient, perturb, tritangent_circle, weighted_distance, Disk, Point, RobustnessConfig};

const NONE: u32 = u32::MAX;
const INF: u32 = u32::MAX - 1;

/// Handle of a site. Stable for the lifetime of the diagram and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteId(pub u32);

impl SiteId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    Input,
    /// A wavefront disk; `parent` is the site whose cell vertex it was placed on.
    Inserted { generation: u32, parent: SiteId },
    /// Bounding site placed around the input so genuine cells stay bounded.
    Frame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteStatus {
    Live,
    Hidden,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteRecord {
    pub disk: Disk,
    pub kind: SiteKind,
    pub status: SiteStatus,
}

impl SiteRecord {
    pub fn is_live(&self) -> bool {
        self.status == SiteStatus::Live
    }

    pub fn generation(&self) -> Option<u32> {
        match self.kind {
            SiteKind::Inserted { generation, .. } => Some(generation),
            _ => None,
        }
    }
}

/// Identifies one face of the dual at one point in time; it goes stale once
/// the face is destroyed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    index: u32,
    stamp: u32,
}

/// A Voronoi vertex: centre and radius of the empty tritangent circle of its three sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramVertex {
    pub position: Point,
    pub clearance: f64,
    /// Defining sites in counter-clockwise order.
    pub sites: [SiteId; 3],
    pub face: FaceRef,
}

/// A Voronoi edge between two sites, as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiArc {
    /// The two sites, lower id first.
    pub sites: (SiteId, SiteId),
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Inserted(SiteId),
    /// The disk lies inside `by` and owns no cell. The site is recorded as hidden.
    Hidden { id: SiteId, by: SiteId },
}

impl Insertion {
    pub fn id(&self) -> SiteId {
        match *self {
            Insertion::Inserted(id) | Insertion::Hidden { id, .. } => id,
        }
    }

    pub fn inserted(&self) -> Option<SiteId> {
        match *self {
            Insertion::Inserted(id) => Some(id),
            Insertion::Hidden { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Face {
    v: [u32; 3],
    n: [u32; 3],
    center: Point,
    clearance: f64,
    solved: bool,
    alive: bool,
    stamp: u32,
}

impl Face {
    fn infinite_index(&self) -> Option<usize> {
        self.v.iter().position(|&v| v == INF)
    }

    fn index_of(&self, v: u32) -> usize {
        self.v.iter().position(|&x| x == v).expect("vertex not in face")
    }
}

#[derive(Debug, Clone, Copy)]
enum Outside {
    Face(u32, u8),
    /// Edge kept between two conflicting faces; links to the boundary entry on its other side.
    Twin(usize),
}

#[derive(Debug, Clone, Copy)]
struct BoundaryEdge {
    a: u32,
    b: u32,
    outside: Outside,
}

struct Region {
    faces: Vec<u32>,
    boundary: Vec<BoundaryEdge>,
    hidden: Vec<u32>,
}

enum Conflict {
    Hidden(u32),
    Region(Region),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiagramStats {
    /// Finite faces whose tritangent circle could not be computed.
    pub unsolved_faces: usize,
    pub degree_two_insertions: usize,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    sites: Vec<SiteRecord>,
    site_face: Vec<u32>,
    faces: Vec<Face>,
    free: Vec<u32>,
    cfg: RobustnessConfig,
    lower: Point,
    upper: Point,
    diagonal: f64,
    stats: DiagramStats,
}

impl Diagram {
    /// Builds the diagram of `points` (as [`SiteKind::Input`]) and `frame` (as
    /// [`SiteKind::Frame`]), all of radius zero and perturbed per `cfg`.
    ///
    /// Site ids follow the argument order: points first, then frame.
    /// Insertion itself happens in a seeded random order. Each point walks
    /// from the last site inserted into the same cell of a coarse grid.
    pub fn build(points: &[Point], frame: &[Point], cfg: RobustnessConfig) -> Result<Diagram, DiagramError> {
        cfg.validate()?;
        let all: Vec<Point> = points.iter().chain(frame.iter()).copied().collect();
        if all.iter().any(|p| !p.is_finite()) {
            return Err(DiagramError::DegenerateInput("non-finite coordinate"));
        }
        if all.len() < 3 {
            return Err(DiagramError::DegenerateInput("fewer than 3 sites"));
        }
        let (lower, upper) = bounding_box(&all);
        let diagonal = (upper - lower).norm();
        if !(diagonal > 0.0) {
            return Err(DiagramError::DegenerateInput("all sites coincide"));
        }
        let mut d = Diagram {
            sites: Vec::with_capacity(all.len() * 2),
            site_face: Vec::with_capacity(all.len() * 2),
            faces: Vec::with_capacity(all.len() * 4),
            free: Vec::new(),
            cfg,
            lower,
            upper,
            diagonal,
            stats: DiagramStats::default(),
        };
        for (i, p) in all.iter().enumerate() {
            let kind = if i < points.len() { SiteKind::Input } else { SiteKind::Frame };
            let q = perturb(*p, &cfg, diagonal, i as u64);
            d.sites.push(SiteRecord { disk: Disk::point(q), kind, status: SiteStatus::Hidden });
            d.site_face.push(NONE);
        }

        let mut order: Vec<u32> = (0..all.len() as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5e_ed0f_b11d);
        order.shuffle(&mut rng);

        // Seed triangle: the first three sites in insertion order that are not collinear.
        let a = order[0];
        let mut seed = None;
        'search: for j in 1..order.len() {
            for k in (j + 1)..order.len() {
                let (pa, pb, pc) = (d.center(a), d.center(order[j]), d.center(order[k]));
                let o = orient(pa, pb, pc);
                let scale = (pb - pa).norm() * (pc - pa).norm();
                if o.abs() > 1e-12 * scale && scale > 0.0 {
                    seed = Some((j, k));
                    break 'search;
                }
            }
        }
        let Some((j, k)) = seed else {
            return Err(DiagramError::DegenerateInput("all sites are collinear"));
        };
        let (b, c) = (order[j], order[k]);
        let (b, c) = if orient(d.center(a), d.center(b), d.center(c)) > 0.0 { (b, c) } else { (c, b) };
        d.init_triangle(a, b, c);

        // Walks start from a recently inserted site in the same grid cell.
        let side = libm::ceil(libm::sqrt(all.len() as f64 / 2.0)).max(1.0) as usize;
        let extent = upper - lower;
        let cell_of = |p: Point| {
            let fx = if extent.x > 0.0 { (p.x - lower.x) / extent.x } else { 0.0 };
            let fy = if extent.y > 0.0 { (p.y - lower.y) / extent.y } else { 0.0 };
            let ix = ((fx * side as f64) as usize).min(side - 1);
            let iy = ((fy * side as f64) as usize).min(side - 1);
            iy * side + ix
        };
        let mut grid = alloc::vec![NONE; side * side];
        for s in [a, b, c] {
            grid[cell_of(d.center(s))] = s;
        }
        let mut last = a;
        for &s in &order[1..] {
            if s == b || s == c {
                continue;
            }
            let disk = d.sites[s as usize].disk;
            let cell = cell_of(disk.center);
            let hint = if grid[cell] == NONE { last } else { grid[cell] };
            match d.conflict(&disk, hint)? {
                Conflict::Hidden(_) => {}
                Conflict::Region(region) => {
                    d.sites[s as usize].status = SiteStatus::Live;
                    d.apply(s, region);
                    grid[cell] = s;
                    last = s;
                }
            }
        }
        Ok(d)
    }

    fn init_triangle(&mut self, a: u32, b: u32, c: u32) {
        for s in [a, b, c] {
            self.sites[s as usize].status = SiteStatus::Live;
        }
        let f0 = self.new_face([a, b, c]);
        let i0 = self.new_face([b, a, INF]);
        let i1 = self.new_face([c, b, INF]);
        let i2 = self.new_face([a, c, INF]);
        self.faces[f0 as usize].n = [i1, i2, i0];
        self.faces[i0 as usize].n = [i2, i1, f0];
        self.faces[i1 as usize].n = [i0, i2, f0];
        self.faces[i2 as usize].n = [i1, i0, f0];
        self.site_face[a as usize] = f0;
        self.site_face[b as usize] = f0;
        self.site_face[c as usize] = f0;
    }

    pub fn config(&self) -> &RobustnessConfig {
        &self.cfg
    }

    /// Lower-left and upper-right corners of the sites given to [`Diagram::build`].
    pub fn bounds(&self) -> (Point, Point) {
        (self.lower, self.upper)
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    /// Absolute tolerance: the relative tolerance scaled by the bounding-box diagonal.
    pub fn tolerance(&self) -> f64 {
        self.cfg.tolerance * self.diagonal
    }

    pub fn stats(&self) -> DiagramStats {
        self.stats
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    pub fn site(&self, id: SiteId) -> Result<&SiteRecord, DiagramError> {
        self.sites.get(id.index()).ok_or(DiagramError::UnknownSite(id))
    }

    pub fn sites(&self) -> impl Iterator<Item = (SiteId, &SiteRecord)> + '_ {
        self.sites.iter().enumerate().map(|(i, s)| (SiteId(i as u32), s))
    }

    pub fn is_live(&self, id: SiteId) -> bool {
        self.sites.get(id.index()).is_some_and(|s| s.is_live())
    }

    fn center(&self, s: u32) -> Point {
        self.sites[s as usize].disk.center
    }

    fn disk(&self, s: u32) -> &Disk {
        &self.sites[s as usize].disk
    }

    fn live(&self, id: SiteId) -> Result<u32, DiagramError> {
        let rec = self.site(id)?;
        if rec.is_live() {
            Ok(id.0)
        } else {
            Err(DiagramError::HiddenSite(id))
        }
    }

    /// Inserts `disk`, starting the search for its nearest site at `hint`.
    ///
    /// Zero-radius input and frame sites are perturbed like the ones given to
    /// [`Diagram::build`]. Sites that become dominated by the new disk are
    /// marked hidden.
    ///
    /// On error the diagram is left unchanged.
    pub fn insert(&mut self, disk: Disk, kind: SiteKind, hint: SiteId) -> Result<Insertion, DiagramError> {
        if !disk.is_valid() {
            return Err(DiagramError::InvalidDisk);
        }
        let hint = self.live(hint).map_err(|_| DiagramError::InvalidHint(hint))?;
        let id = self.sites.len() as u32;
        let disk = match kind {
            SiteKind::Input | SiteKind::Frame if disk.radius == 0.0 => {
                Disk::point(perturb(disk.center, &self.cfg, self.diagonal, id as u64))
            }
            _ => disk,
        };
        match self.conflict(&disk, hint)? {
            Conflict::Hidden(by) => {
                self.sites.push(SiteRecord { disk, kind, status: SiteStatus::Hidden });
                self.site_face.push(NONE);
                Ok(Insertion::Hidden { id: SiteId(id), by: SiteId(by) })
            }
            Conflict::Region(region) => {
                self.sites.push(SiteRecord { disk, kind, status: SiteStatus::Live });
                self.site_face.push(NONE);
                self.apply(id, region);
                Ok(Insertion::Inserted(SiteId(id)))
            }
        }
    }

    /// Sites that would become neighbours of `disk` if it were inserted, without
    /// modifying the diagram. Empty when the disk would be hidden.
    pub fn preview_neighbors(&self, disk: &Disk, hint: SiteId) -> Result<Vec<SiteId>, DiagramError> {
        let hint = self.live(hint).map_err(|_| DiagramError::InvalidHint(hint))?;
        Ok(match self.conflict(disk, hint)? {
            Conflict::Hidden(_) => Vec::new(),
            Conflict::Region(region) => {
                let mut out: Vec<SiteId> = Vec::with_capacity(region.boundary.len());
                for e in &region.boundary {
                    if e.a != INF && !out.contains(&SiteId(e.a)) {
                        out.push(SiteId(e.a));
                    }
                }
                out
            }
        })
    }

    /// The live site with the smallest weighted distance to `p`, found by a greedy walk from `start`.
    pub fn nearest(&self, p: Point, start: SiteId) -> Result<SiteId, DiagramError> {
        let s = self.live(start).map_err(|_| DiagramError::InvalidHint(start))?;
        Ok(SiteId(self.nearest_site(p, s)))
    }

    fn nearest_site(&self, p: Point, start: u32) -> u32 {
        let mut cur = start;
        let mut best = weighted_distance(p, self.disk(cur));
        loop {
            let mut next = cur;
            for (f, k) in self.faces_around(cur) {
                let x = self.faces[f as usize].v[(k + 1) % 3];
                if x == INF {
                    continue;
                }
                let dx = weighted_distance(p, self.disk(x));
                if dx < best {
                    best = dx;
                    next = x;
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Faces incident to `v` in counter-clockwise order, with `v`'s index in each.
    fn faces_around(&self, v: u32) -> FacesAround<'_> {
        let start = if v == INF { self.infinite_face() } else { self.site_face[v as usize] };
        FacesAround { diagram: self, v, start, current: start, done: start == NONE, guard: 0 }
    }

    fn infinite_face(&self) -> u32 {
        // Any frame-free diagram has a hull; find an infinite face via a hull site.
        self.faces
            .iter()
            .position(|f| f.alive && f.v.contains(&INF))
            .map(|i| i as u32)
            .unwrap_or(NONE)
    }

    fn face_conflict(&self, f: u32, q: &Disk) -> bool {
        let face = &self.faces[f as usize];
        match face.infinite_index() {
            None if q.radius == 0.0 && face.v.iter().all(|&v| self.disk(v).radius == 0.0) => {
                let [a, b, c] = face.v.map(|v| self.center(v));
                in_circle(a, b, c, q.center) > 0.0
            }
            None => face.solved && weighted_distance(face.center, q) < face.clearance,
            Some(k) => {
                let a = face.v[(k + 1) % 3];
                let b = face.v[(k + 2) % 3];
                infinite_vertex_conflict(self.disk(a), self.disk(b), q)
            }
        }
    }

    /// Index of the slot in `f`'s neighbour across edge `i` that points back to `f`.
    fn mirror(&self, f: u32, i: usize) -> usize {
        let face = &self.faces[f as usize];
        let g = face.n[i];
        let a = face.v[(i + 1) % 3];
        let b = face.v[(i + 2) % 3];
        let other = &self.faces[g as usize];
        (0..3)
            .find(|&j| other.n[j] == f && other.v[(j + 1) % 3] == b && other.v[(j + 2) % 3] == a)
            .expect("inconsistent face adjacency")
    }

    /// Conflict test for the interior of the dual edge `i` of face `f`.
    fn edge_conflict(&self, f: u32, i: usize, q: &Disk, want_all: bool) -> bool {
        let face = &self.faces[f as usize];
        let a = face.v[(i + 1) % 3];
        let b = face.v[(i + 2) % 3];
        let g = face.n[i];
        let j = self.mirror(f, i);
        let other = &self.faces[g as usize];
        if a == INF || b == INF {
            let x = if a == INF { b } else { a };
            let mut n_in = None;
            let mut n_out = None;
            for fc in [face, other] {
                let k = fc.infinite_index().expect("edge to infinity between finite faces");
                let p = fc.v[(k + 1) % 3];
                let r = fc.v[(k + 2) % 3];
                let Some(n) = hull_normal(self.disk(p), self.disk(r)) else {
                    return false;
                };
                if r == x {
                    n_in = Some(n);
                } else {
                    n_out = Some(n);
                }
            }
            return match (n_in, n_out) {
                (Some(n_in), Some(n_out)) => infinite_edge_conflict(self.disk(x), n_in, n_out, q, want_all),
                _ => false,
            };
        }
        let (da, db) = (self.disk(a), self.disk(b));
        if q.radius == 0.0 && da.radius == 0.0 && db.radius == 0.0 {
            // Among points the edge conflicts exactly when a face beside it does.
            let third = |fc: &Face, k: usize| fc.v[k] == INF || self.disk(fc.v[k]).radius == 0.0;
            if third(face, i) && third(other, j) {
                return if want_all {
                    self.face_conflict(f, q) && self.face_conflict(g, q)
                } else {
                    self.face_conflict(f, q) || self.face_conflict(g, q)
                };
            }
        }
        let Some(bis) = Bisector::new(da, db) else {
            return false;
        };
        let end = |fc: &Face, third: u32, at_infinity: f64| -> Option<f64> {
            if third == INF {
                Some(at_infinity)
            } else if fc.solved {
                Some(bis.param(fc.center))
            } else {
                None
            }
        };
        let (Some(s_f), Some(s_g)) = (end(face, face.v[i], f64::INFINITY), end(other, other.v[j], f64::NEG_INFINITY))
        else {
            return false;
        };
        finite_edge_conflict(da, db, q, s_f, s_g, want_all)
    }

    fn conflict(&self, q: &Disk, hint: u32) -> Result<Conflict, DiagramError> {
        let nearest = self.nearest_site(q.center, hint);
        if q.is_dominated_by(self.disk(nearest)) {
            return Ok(Conflict::Hidden(nearest));
        }
        let start = self.faces_around(nearest).map(|(f, _)| f).find(|&f| self.face_conflict(f, q));
        let Some(start) = start else {
            // No vertex in conflict: the new cell sits inside a single edge.
            for (f, k) in self.faces_around(nearest) {
                let m = (k + 2) % 3;
                if self.edge_conflict(f, m, q, false) {
                    return Ok(Conflict::Region(self.degree_two_region(f, m)));
                }
            }
            return Err(DiagramError::InconsistentConflictRegion);
        };

        let mut in_region: HashSet<u32> = HashSet::new();
        let mut faces = Vec::new();
        let mut stack = Vec::new();
        // Canonical edge -> whether the region continues across it.
        let mut crossed: HashMap<(u32, u8), bool> = HashMap::new();
        in_region.insert(start);
        faces.push(start);
        stack.push(start);
        while let Some(f) = stack.pop() {
            for i in 0..3 {
                let key = self.edge_key(f, i);
                if crossed.contains_key(&key) {
                    continue;
                }
                let g = self.faces[f as usize].n[i];
                let cross = if in_region.contains(&g) {
                    self.edge_conflict(f, i, q, true)
                } else if self.face_conflict(g, q) {
                    let c = self.edge_conflict(f, i, q, true);
                    if c {
                        in_region.insert(g);
                        faces.push(g);
                        stack.push(g);
                    }
                    c
                } else {
                    false
                };
                crossed.insert(key, cross);
            }
        }

        // Boundary edges, indexed for the walk.
        let mut on_boundary: HashMap<(u32, u8), usize> = HashMap::new();
        let mut count = 0usize;
        for &f in &faces {
            for i in 0..3 {
                if !crossed[&self.edge_key(f, i)] {
                    on_boundary.insert((f, i as u8), count);
                    count += 1;
                }
            }
        }
        let Some((&first, _)) = on_boundary.iter().min_by_key(|(_, &idx)| idx) else {
            return Err(DiagramError::InconsistentConflictRegion);
        };
        let mut walk: Vec<(u32, usize)> = Vec::with_capacity(count);
        let (mut f, mut i) = (first.0, first.1 as usize);
        loop {
            walk.push((f, i));
            if walk.len() > count {
                return Err(DiagramError::InconsistentConflictRegion);
            }
            // Rotate around the end vertex through crossed edges to the next boundary edge.
            let w = self.faces[f as usize].v[(i + 2) % 3];
            let mut k = (i + 2) % 3;
            let mut steps = 0;
            loop {
                let m = (k + 2) % 3;
                if on_boundary.contains_key(&(f, m as u8)) {
                    i = m;
                    break;
                }
                f = self.faces[f as usize].n[m];
                k = self.faces[f as usize].index_of(w);
                steps += 1;
                if steps > faces.len() * 3 + 3 {
                    return Err(DiagramError::InconsistentConflictRegion);
                }
            }
            if (f, i as u8) == first {
                break;
            }
        }
        if walk.len() != count {
            return Err(DiagramError::InconsistentConflictRegion);
        }
        let position: HashMap<(u32, u8), usize> =
            walk.iter().enumerate().map(|(p, &(f, i))| ((f, i as u8), p)).collect();
        let mut boundary = Vec::with_capacity(count);
        for &(f, i) in &walk {
            let face = &self.faces[f as usize];
            let g = face.n[i];
            let outside = if in_region.contains(&g) {
                let j = self.mirror(f, i);
                Outside::Twin(position[&(g, j as u8)])
            } else {
                Outside::Face(g, self.mirror(f, i) as u8)
            };
            boundary.push(BoundaryEdge { a: face.v[(i + 1) % 3], b: face.v[(i + 2) % 3], outside });
        }
        let on_walk: HashSet<u32> = boundary.iter().map(|e| e.a).collect();
        let mut hidden: Vec<u32> = Vec::new();
        for &f in &faces {
            for &v in &self.faces[f as usize].v {
                if !on_walk.contains(&v) && !hidden.contains(&v) {
                    if v == INF {
                        return Err(DiagramError::InconsistentConflictRegion);
                    }
                    hidden.push(v);
                }
            }
        }
        Ok(Conflict::Region(Region { faces, boundary, hidden }))
    }

    fn degree_two_region(&self, f: u32, i: usize) -> Region {
        let face = &self.faces[f as usize];
        let a = face.v[(i + 1) % 3];
        let b = face.v[(i + 2) % 3];
        let g = face.n[i];
        let j = self.mirror(f, i);
        Region {
            faces: Vec::new(),
            boundary: alloc::vec![
                BoundaryEdge { a: b, b: a, outside: Outside::Face(f, i as u8) },
                BoundaryEdge { a, b, outside: Outside::Face(g, j as u8) },
            ],
            hidden: Vec::new(),
        }
    }

    fn edge_key(&self, f: u32, i: usize) -> (u32, u8) {
        let g = self.faces[f as usize].n[i];
        if f < g {
            (f, i as u8)
        } else {
            (g, self.mirror(f, i) as u8)
        }
    }

    fn apply(&mut self, q: u32, region: Region) {
        let m = region.boundary.len();
        if region.faces.is_empty() {
            self.stats.degree_two_insertions += 1;
        }
        let new: Vec<u32> = region.boundary.iter().map(|e| self.new_face([e.a, e.b, q])).collect();
        for (k, e) in region.boundary.iter().enumerate() {
            let fk = new[k] as usize;
            self.faces[fk].n[0] = new[(k + 1) % m];
            self.faces[fk].n[1] = new[(k + m - 1) % m];
            match e.outside {
                Outside::Face(o, j) => {
                    self.faces[fk].n[2] = o;
                    self.faces[o as usize].n[j as usize] = new[k];
                }
                Outside::Twin(t) => self.faces[fk].n[2] = new[t],
            }
        }
        for &f in &region.faces {
            let face = &mut self.faces[f as usize];
            face.alive = false;
            face.stamp = face.stamp.wrapping_add(1);
            self.free.push(f);
        }
        for (k, e) in region.boundary.iter().enumerate() {
            if e.a != INF {
                self.site_face[e.a as usize] = new[k];
            }
        }
        self.site_face[q as usize] = new[0];
        for &h in &region.hidden {
            self.sites[h as usize].status = SiteStatus::Hidden;
            self.site_face[h as usize] = NONE;
        }
    }

    fn new_face(&mut self, v: [u32; 3]) -> u32 {
        let mut face = Face {
            v,
            n: [NONE; 3],
            center: Point::default(),
            clearance: 0.0,
            solved: false,
            alive: true,
            stamp: 0,
        };
        if !v.contains(&INF) {
            match tritangent_circle(self.disk(v[0]), self.disk(v[1]), self.disk(v[2])) {
                Ok(c) => {
                    face.center = c.center;
                    face.clearance = c.radius;
                    face.solved = true;
                }
                Err(_) => self.stats.unsolved_faces += 1,
            }
        }
        match self.free.pop() {
            Some(idx) => {
                face.stamp = self.faces[idx as usize].stamp;
                self.faces[idx as usize] = face;
                idx
            }
            None => {
                self.faces.push(face);
                (self.faces.len() - 1) as u32
            }
        }
    }

    /// Sites whose cells share a boundary arc with `s`'s cell, in counter-clockwise order.
    pub fn neighbors(&self, s: SiteId) -> Result<Vec<SiteId>, DiagramError> {
        let v = self.live(s)?;
        let mut out: Vec<SiteId> = Vec::new();
        for (f, k) in self.faces_around(v) {
            let x = self.faces[f as usize].v[(k + 1) % 3];
            if x != INF && !out.contains(&SiteId(x)) {
                out.push(SiteId(x));
            }
        }
        Ok(out)
    }

    pub fn are_adjacent(&self, a: SiteId, b: SiteId) -> Result<bool, DiagramError> {
        let v = self.live(a)?;
        self.live(b)?;
        Ok(self.faces_around(v).any(|(f, k)| self.faces[f as usize].v[(k + 1) % 3] == b.0))
    }

    /// Whether `s` lies on the outer boundary (its cell is unbounded).
    pub fn on_hull(&self, s: SiteId) -> Result<bool, DiagramError> {
        let v = self.live(s)?;
        Ok(self.faces_around(v).any(|(f, _)| self.faces[f as usize].v.contains(&INF)))
    }

    /// Finite vertices of `s`'s cell in counter-clockwise order.
    pub fn cell_vertices(&self, s: SiteId) -> Result<Vec<DiagramVertex>, DiagramError> {
        let v = self.live(s)?;
        Ok(self.faces_around(v).filter_map(|(f, _)| self.vertex_of(f)).collect())
    }

    fn vertex_of(&self, f: u32) -> Option<DiagramVertex> {
        let face = &self.faces[f as usize];
        if !face.alive || !face.solved || face.v.contains(&INF) {
            return None;
        }
        Some(DiagramVertex {
            position: face.center,
            clearance: face.clearance,
            sites: [SiteId(face.v[0]), SiteId(face.v[1]), SiteId(face.v[2])],
            face: FaceRef { index: f, stamp: face.stamp },
        })
    }

    /// Whether the face that produced `v` still exists.
    pub fn is_current(&self, v: &DiagramVertex) -> bool {
        self.faces
            .get(v.face.index as usize)
            .is_some_and(|f| f.alive && f.stamp == v.face.stamp)
    }

    /// All finite Voronoi vertices.
    pub fn vertices(&self) -> impl Iterator<Item = DiagramVertex> + '_ {
        (0..self.faces.len() as u32).filter_map(|f| self.vertex_of(f))
    }

    /// Undirected adjacencies between live sites, each reported once as `(low, high)`.
    pub fn edges(&self) -> Vec<(SiteId, SiteId)> {
        let mut set: HashSet<(u32, u32)> = HashSet::new();
        for face in self.faces.iter().filter(|f| f.alive) {
            for i in 0..3 {
                let a = face.v[i];
                let b = face.v[(i + 1) % 3];
                if a != INF && b != INF {
                    set.insert((a.min(b), a.max(b)));
                }
            }
        }
        let mut out: Vec<(SiteId, SiteId)> = set.into_iter().map(|(a, b)| (SiteId(a), SiteId(b))).collect();
        out.sort_unstable();
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().filter(|f| f.alive).count()
    }

    pub fn live_count(&self) -> usize {
        self.sites.iter().filter(|s| s.is_live()).count()
    }

    /// A disk centred on the bisector arc shared by `a` and `b`, tangent to both.
    ///
    /// The centre is the point of smallest clearance on the shared arc, kept a
    /// small fraction of the arc away from its endpoints so the disk touches
    /// no third site. With several shared arcs the smallest disk wins.
    pub fn bisector_contact_disk(&self, a: SiteId, b: SiteId) -> Result<Disk, DiagramError> {
        let va = self.live(a)?;
        let vb = self.live(b)?;
        let (da, db) = (self.disk(va), self.disk(vb));
        let bis = Bisector::new(da, db).ok_or(DiagramError::NotAdjacent(a, b))?;
        let mut best: Option<(f64, f64)> = None;
        for (f, k) in self.faces_around(va) {
            let face = &self.faces[f as usize];
            if face.v[(k + 1) % 3] != vb {
                continue;
            }
            // Edge from a to b, with this face on its left.
            let m = (k + 2) % 3;
            let g = face.n[m];
            let j = self.mirror(f, m);
            let other = &self.faces[g as usize];
            let s_f = if face.v[m] == INF { f64::INFINITY } else { bis.param(face.center) };
            let s_g = if other.v[j] == INF { f64::NEG_INFINITY } else { bis.param(other.center) };
            let (lo, hi) = if s_f <= s_g { (s_f, s_g) } else { (s_g, s_f) };
            let s = min_on_arc(|s| bis.clearance(s), lo, hi);
            let c = bis.clearance(s);
            if best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, s));
            }
        }
        let (clearance, s) = best.ok_or(DiagramError::NotAdjacent(a, b))?;
        Ok(Disk::new(bis.point(s), clearance))
    }

    /// Voronoi edges as polylines sampled along their bisector arcs.
    ///
    /// Samples are added where the arc strays more than 1% of a chord's length
    /// from that chord, up to `max_samples` points per arc. Unbounded ends stop
    /// roughly `reach` away from the bisector's midpoint.
    pub fn voronoi_arcs(&self, reach: f64, max_samples: usize) -> Vec<VoronoiArc> {
        let mut out = Vec::new();
        for (f, face) in self.faces.iter().enumerate() {
            if !face.alive {
                continue;
            }
            for m in 0..3 {
                let (a, b) = (face.v[(m + 1) % 3], face.v[(m + 2) % 3]);
                let g = face.n[m];
                if a == INF || b == INF || (g as usize) < f {
                    continue;
                }
                let other = &self.faces[g as usize];
                let j = self.mirror(f as u32, m);
                let (fin_f, fin_g) = (face.v[m] != INF, other.v[j] != INF);
                if (fin_f && !face.solved) || (fin_g && !other.solved) {
                    continue;
                }
                let Some(bis) = Bisector::new(self.disk(a), self.disk(b)) else { continue };
                let far = bis.far_param(reach);
                let s_f = if fin_f { bis.param(face.center) } else { far };
                let s_g = if fin_g { bis.param(other.center) } else { -far };
                let points = sample_arc(&bis, s_f.min(s_g), s_f.max(s_g), max_samples.max(2));
                out.push(VoronoiArc { sites: (SiteId(a.min(b)), SiteId(a.max(b))), points });
            }
        }
        out.sort_by_key(|a| a.sites);
        out
    }

    /// Structural self-check used by tests: adjacency symmetry, incidence
    /// pointers and the Euler relation of the dual.
    pub fn check_topology(&self) -> Result<(), &'static str> {
        for (idx, face) in self.faces.iter().enumerate() {
            if !face.alive {
                continue;
            }
            for i in 0..3 {
                let g = face.n[i];
                if g == NONE || !self.faces[g as usize].alive {
                    return Err("dangling neighbour");
                }
                let a = face.v[(i + 1) % 3];
                let b = face.v[(i + 2) % 3];
                let other = &self.faces[g as usize];
                let ok = (0..3).any(|j| {
                    other.n[j] == idx as u32 && other.v[(j + 1) % 3] == b && other.v[(j + 2) % 3] == a
                });
                if !ok {
                    return Err("asymmetric adjacency");
                }
            }
        }
        for (s, rec) in self.sites.iter().enumerate() {
            if rec.is_live() {
                let f = self.site_face[s];
                if f == NONE || !self.faces[f as usize].alive || !self.faces[f as usize].v.contains(&(s as u32)) {
                    return Err("bad incident face");
                }
            }
        }
        // Closed planar map with a vertex at infinity: F = 2V - 4.
        let v = self.live_count() + 1;
        if self.face_count() + 4 != 2 * v {
            return Err("Euler relation violated");
        }
        Ok(())
    }

    /// Largest intrusion of any live site into any vertex circle, relative to
    /// the diagonal. Brute force; for tests.
    pub fn max_empty_circle_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for vtx in self.vertices() {
            for rec in self.sites.iter().filter(|s| s.is_live()) {
                let gap = weighted_distance(vtx.position, &rec.disk) - vtx.clearance;
                worst = worst.max(-gap);
            }
        }
        worst / self.diagonal
    }
}

/// Golden-section search for the minimum of a unimodal function on `[lo, hi]`,
/// staying off the endpoints by a small margin. Infinite ends are clamped.
fn sample_arc(bis: &Bisector, lo: f64, hi: f64, max_samples: usize) -> Vec<Point> {
    let mut params = alloc::vec![lo, hi];
    loop {
        let mut next = Vec::with_capacity(params.len() * 2);
        let mut split = false;
        for w in params.windows(2) {
            next.push(w[0]);
            let (p, q) = (bis.point(w[0]), bis.point(w[1]));
            let mid = 0.5 * (w[0] + w[1]);
            let chord = q - p;
            let len = chord.norm();
            let dev = if len > 0.0 { libm::fabs((bis.point(mid) - p).cross(chord)) / len } else { 0.0 };
            if dev > 0.01 * len && next.len() + params.len() < max_samples {
                next.push(mid);
                split = true;
            }
        }
        next.push(hi);
        params = next;
        if !split {
            break;
        }
    }
    params.into_iter().map(|s| bis.point(s)).collect()
}

fn min_on_arc(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const INSET: f64 = 1e-3;
    let (mut lo, mut hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let w = (hi - lo) * INSET;
            (lo + w, hi - w)
        }
        (true, false) => (lo + INSET, lo.max(0.0) + 2.0),
        (false, true) => (hi.min(0.0) - 2.0, hi - INSET),
        (false, false) => (-2.0, 2.0),
    };
    if !(hi > lo) {
        return 0.5 * (lo + hi);
    }
    let ratio = 0.5 * (libm::sqrt(5.0) - 1.0);
    let width0 = hi - lo;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 * width0.max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Positive when `d` is inside the circle through `a, b, c` (counter-clockwise).
fn in_circle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    ad.dot(ad) * bd.cross(cd) - bd.dot(bd) * ad.cross(cd) + cd.dot(cd) * ad.cross(bd)
}

fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

struct FacesAround<'a> {
    diagram: &'a Diagram,
    v: u32,
    start: u32,
    current: u32,
    done: bool,
    guard: usize,
}

impl Iterator for FacesAround<'_> {
    type Item = (u32, usize);

    fn next(&mut self) -> Option<(u32, usize)> {
        if self.done {
            return None;
        }
        let face = &self.diagram.faces[self.current as usize];
        let k = face.index_of(self.v);
        let out = (self.current, k);
        self.current = face.n[(k + 1) % 3];
        self.guard += 1;
        if self.current == self.start || self.guard > self.diagram.faces.len() {
            self.done = true;
        }
        Some(out)
    }
}
