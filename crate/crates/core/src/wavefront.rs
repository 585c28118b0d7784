//! Generation-by-generation disk insertion from the source cell.
//!
//! Round `g` inserts one disk per queued Voronoi vertex: centred on the
//! vertex, radius equal to its clearance (slightly shrunk). Each such disk
//! touches the disk or site it was discovered from, so the disks of rounds
//! `1..=g` form chains of touching disks rooted at the source. New vertices
//! on the cells of the fresh disks feed round `g + 1`. The search stops as
//! soon as an inserted disk's cell borders the target.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::apollonius::{Diagram, DiagramVertex, FaceRef, SiteId, SiteKind};
use crate::error::{DiagramError, SolveError};
use crate::geom::{tangency_point, weighted_distance, Disk, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateVertex {
    pub vertex: DiagramVertex,
    /// Generation the disk will get once inserted.
    pub generation: u32,
    pub parent: SiteId,
}

/// A chain of touching disks from source to target, and the points to insert.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SecurePath {
    /// Wavefront disks from generation 1 up, followed by the contact disk
    /// touching the last one and the target. Empty when no insertion is needed.
    pub disks: Vec<Disk>,
    /// Where consecutive disks touch; these are the sites to insert.
    pub tangencies: Vec<Point>,
    pub source: Point,
    pub target: Point,
}

impl SecurePath {
    pub fn cost(&self) -> usize {
        self.tangencies.len()
    }

    /// Source, inserted points, target.
    pub fn chain(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.tangencies.len() + 2);
        out.push(self.source);
        out.extend_from_slice(&self.tangencies);
        out.push(self.target);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WavefrontTrace {
    /// `generations[g - 1]` holds the sites inserted in round `g`.
    pub generations: Vec<Vec<SiteId>>,
    /// Queued candidates not inserted because an earlier disk of the same round
    /// covered them or they came out hidden.
    pub skipped: usize,
    /// Candidates dropped because the diagram could not place them consistently
    /// (heavily overlapping disks of one round).
    pub rejected: usize,
}

impl WavefrontTrace {
    pub fn rounds(&self) -> u32 {
        self.generations.len() as u32
    }

    pub fn counts(&self) -> Vec<usize> {
        self.generations.iter().map(Vec::len).collect()
    }

    pub fn inserted(&self) -> usize {
        self.generations.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub path: SecurePath,
    pub trace: WavefrontTrace,
    /// The inserted site whose cell reached the target, or the source when they were already adjacent.
    pub last: SiteId,
}

impl Solution {
    pub fn cost(&self) -> usize {
        self.path.cost()
    }
}

/// Incremental driver; [`solve`] runs it to completion.
#[derive(Debug)]
pub struct Wavefront<'a> {
    diagram: &'a mut Diagram,
    source: SiteId,
    target: Option<SiteId>,
    queue: Vec<CandidateVertex>,
    trace: WavefrontTrace,
    reached: Option<SiteId>,
}

impl<'a> Wavefront<'a> {
    pub fn new(diagram: &'a mut Diagram, source: SiteId, target: SiteId) -> Result<Self, SolveError> {
        let is_input = diagram.site(target).is_ok_and(|r| r.is_live() && r.kind == SiteKind::Input);
        if source == target || !is_input {
            return Err(SolveError::InvalidEndpoints);
        }
        let mut wf = Self::explore(diagram, source)?;
        wf.target = Some(target);
        if wf.diagram.are_adjacent(source, target)? {
            wf.reached = Some(source);
            wf.queue.clear();
        }
        Ok(wf)
    }

    /// A wavefront with no target: rounds run until stopped by the caller.
    pub fn explore(diagram: &'a mut Diagram, source: SiteId) -> Result<Self, SolveError> {
        if !diagram.site(source).is_ok_and(|r| r.is_live() && r.kind == SiteKind::Input) {
            return Err(SolveError::InvalidEndpoints);
        }
        let mut wf = Wavefront {
            diagram,
            source,
            target: None,
            queue: Vec::new(),
            trace: WavefrontTrace::default(),
            reached: None,
        };
        let mut seen = HashSet::new();
        wf.queue = wf.candidates_around(source, 1, &mut seen)?;
        Ok(wf)
    }

    /// Input sites other than the source that some queued disk would
    /// neighbour if it were inserted alone into the current diagram.
    pub fn frontier_reach(&self) -> Result<Vec<SiteId>, SolveError> {
        let factor = self.diagram.config().radius_factor;
        let mut out: Vec<SiteId> = Vec::new();
        for cand in &self.queue {
            let disk = Disk::new(cand.vertex.position, cand.vertex.clearance * factor);
            for n in self.diagram.preview_neighbors(&disk, self.hint_for(cand.parent))? {
                let input = self.diagram.site(n)?.kind == SiteKind::Input;
                if input && n != self.source && !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn diagram(&self) -> &Diagram {
        self.diagram
    }

    pub fn trace(&self) -> &WavefrontTrace {
        &self.trace
    }

    pub fn queue(&self) -> &[CandidateVertex] {
        &self.queue
    }

    /// The site whose cell touches the target, once found.
    pub fn reached(&self) -> Option<SiteId> {
        self.reached
    }

    /// Inserts the queued candidates and collects the next generation.
    /// Returns the sites inserted; does nothing once the target is reached.
    pub fn run_round(&mut self) -> Result<Vec<SiteId>, SolveError> {
        if self.reached.is_some() {
            return Ok(Vec::new());
        }
        let round = self.trace.rounds() + 1;
        if self.queue.is_empty() {
            return Err(SolveError::NoPath { rounds: round - 1 });
        }
        let factor = self.diagram.config().radius_factor;
        let queue = core::mem::take(&mut self.queue);
        let mut inserted = Vec::new();
        for cand in &queue {
            let hint = self.hint_for(cand.parent);
            let c = cand.vertex.position;
            let nearest = self.diagram.nearest(c, hint)?;
            let disk = Disk::new(c, cand.vertex.clearance * factor);
            let near = self.diagram.site(nearest)?.disk;
            let margin = self.diagram.tolerance() + ARTIFACT_SCALE * (1.0 - factor) * near.radius.max(disk.radius);
            if weighted_distance(c, &near) + disk.radius <= margin {
                self.trace.skipped += 1;
                continue;
            }
            let kind = SiteKind::Inserted { generation: round, parent: cand.parent };
            let placed = match self.diagram.insert(disk, kind, nearest) {
                Err(DiagramError::InconsistentConflictRegion) => {
                    self.trace.rejected += 1;
                    continue;
                }
                other => other?,
            };
            let Some(id) = placed.inserted() else {
                self.trace.skipped += 1;
                continue;
            };
            inserted.push(id);
            if let Some(t) = self.target {
                if self.diagram.are_adjacent(id, t)? {
                    self.reached = Some(id);
                    break;
                }
            }
        }
        self.trace.generations.push(inserted.clone());
        if self.reached.is_some() {
            return Ok(inserted);
        }
        let mut seen = HashSet::new();
        for &id in &inserted {
            if self.diagram.is_live(id) {
                let next = self.candidates_around(id, round + 1, &mut seen)?;
                self.queue.extend(next);
            }
        }
        if inserted.is_empty() {
            return Err(SolveError::NoPath { rounds: round });
        }
        Ok(inserted)
    }

    /// Runs rounds until the target is reached and reconstructs the path.
    pub fn finish(mut self) -> Result<Solution, SolveError> {
        let Some(target) = self.target else {
            return Err(SolveError::InvalidEndpoints);
        };
        let limit = self.diagram.site_count() as u32 + 1;
        while self.reached.is_none() {
            if self.trace.rounds() > limit {
                return Err(SolveError::NoPath { rounds: self.trace.rounds() });
            }
            self.run_round()?;
        }
        let last = self.reached.expect("loop exits once reached");
        let path = reconstruct(self.diagram, self.source, target, last)?;
        Ok(Solution { path, trace: self.trace, last })
    }

    fn hint_for(&self, parent: SiteId) -> SiteId {
        if self.diagram.is_live(parent) {
            parent
        } else {
            self.source
        }
    }

    fn candidates_around(
        &self,
        site: SiteId,
        generation: u32,
        seen: &mut HashSet<FaceRef>,
    ) -> Result<Vec<CandidateVertex>, SolveError> {
        let mut out = Vec::new();
        for v in self.diagram.cell_vertices(site)? {
            if admissible(self.diagram, &v, generation - 1, self.source) && seen.insert(v.face) {
                out.push(CandidateVertex { vertex: v, generation, parent: site });
            }
        }
        Ok(out)
    }
}

/// Vertices with clearance below this multiple of the shrink gap are ignored.
const ARTIFACT_SCALE: f64 = 1e3;

/// Whether a vertex found on the cell of a round-`round` disk may seed round `round + 1`.
///
/// Rejected are vertices that touch a frame site, touch the source or a disk
/// older than `round` (which would grow the wavefront backwards), touch no
/// input site at all (a pocket between disks), or have no positive clearance.
pub fn admissible(d: &Diagram, v: &DiagramVertex, round: u32, source: SiteId) -> bool {
    // Disks touching a common site leave gaps of the order of the shrink
    // margin; vertices that small are artifacts of the margin, not room for a disk.
    let slack = 1.0 - d.config().radius_factor;
    let largest = v.sites.iter().filter_map(|&s| d.site(s).ok()).map(|r| r.disk.radius).fold(0.0, f64::max);
    if !(v.clearance > d.tolerance() + ARTIFACT_SCALE * slack * largest) {
        return false;
    }
    let mut has_input = false;
    for &s in &v.sites {
        if s == source {
            if round >= 1 {
                return false;
            }
            continue;
        }
        let Ok(rec) = d.site(s) else { return false };
        match rec.kind {
            SiteKind::Frame => return false,
            SiteKind::Input => has_input = true,
            SiteKind::Inserted { generation, .. } => {
                if generation < round {
                    return false;
                }
            }
        }
    }
    has_input || round == 0
}

/// Rebuilds the chain of disks ending at `last` and the points to insert.
pub fn reconstruct(d: &Diagram, source: SiteId, target: SiteId, last: SiteId) -> Result<SecurePath, SolveError> {
    let s = d.site(source)?.disk.center;
    let t = d.site(target)?.disk.center;
    if last == source {
        if !d.are_adjacent(source, target)? {
            return Err(DiagramError::NotAdjacent(source, target).into());
        }
        return Ok(SecurePath { disks: Vec::new(), tangencies: Vec::new(), source: s, target: t });
    }
    if !d.are_adjacent(last, target)? {
        return Err(DiagramError::NotAdjacent(last, target).into());
    }
    let mut disks = vec![d.site(last)?.disk];
    let mut cur = last;
    loop {
        match d.site(cur)?.kind {
            SiteKind::Inserted { generation: 1, .. } => break,
            SiteKind::Inserted { parent, .. } => {
                disks.push(d.site(parent)?.disk);
                cur = parent;
            }
            _ => return Err(SolveError::InvalidEndpoints),
        }
    }
    disks.reverse();
    disks.push(d.bisector_contact_disk(last, target)?);
    // Disks are shrunk by the radius factor, so neighbours sit a hair apart.
    let slack = 1.0 - d.config().radius_factor;
    let mut tangencies = Vec::with_capacity(disks.len() - 1);
    for w in disks.windows(2) {
        let tol = d.tolerance() + 4.0 * slack * (w[0].radius + w[1].radius);
        tangencies.push(tangency_point(&w[0], &w[1], tol).map_err(DiagramError::from)?);
    }
    Ok(SecurePath { disks, tangencies, source: s, target: t })
}

/// Runs the wavefront from `source` until it reaches `target`.
pub fn solve(d: &mut Diagram, source: SiteId, target: SiteId) -> Result<Solution, SolveError> {
    Wavefront::new(d, source, target)?.finish()
}
