//! Origami templates: connected multigraphs whose vertices carry Delzant
//! polytopes and whose edges carry shared fold facets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::polytope::DelzantPolytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEnd {
    pub vertex: usize,
    pub facet: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldEdge {
    pub ends: [EdgeEnd; 2],
}

#[derive(Clone, Debug)]
pub struct OrigamiTemplate {
    pub dim: usize,
    pub polytopes: Vec<DelzantPolytope>,
    pub edges: Vec<FoldEdge>,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Result of removing one fold edge: the smaller template plus the
/// h-vector of the removed fold facet (a rank dim-1 polytope).
#[derive(Clone, Debug)]
pub struct CutResult {
    pub template: OrigamiTemplate,
    pub folded_facet_h: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    /// Only edges lying on a cycle may be cut; the result stays connected.
    CycleOnly,
    /// Any edge, including bridges; the result may be disconnected.
    AnyEdge,
}

impl OrigamiTemplate {
    pub fn vertex_count(&self) -> usize {
        self.polytopes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge_ends_valid(&self, e: &FoldEdge) -> bool {
        e.ends.iter().all(|end| {
            end.vertex < self.polytopes.len()
                && end.facet < self.polytopes[end.vertex].facets.len()
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.polytopes.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if !self.edge_ends_valid(e) {
                    continue;
                }
                let (a, b) = (e.ends[0].vertex, e.ends[1].vertex);
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// b1 of the template graph: |E| - |V| + 1.
    pub fn cycle_rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Precondition(
                "cycle rank needs a connected template graph".into(),
            ));
        }
        Ok(self.edges.len() + 1 - self.polytopes.len())
    }

    /// Cooriented iff the graph has no loop edges.
    pub fn is_coorientable(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.ends[0].vertex != e.ends[1].vertex)
    }

    /// Heuristic criterion: coorientable and the multigraph is bipartite
    /// (gluing across a fold reverses the ambient orientation, so a
    /// consistent orientation needs every closed walk to be even).
    pub fn is_orientable(&self) -> bool {
        self.is_coorientable() && self.bipartite_colors().is_some()
    }

    /// The 2-coloring of the template graph with polytope 0 colored
    /// false, or None when some closed walk is odd. Color parity tracks
    /// which polytopes carry the ambient orientation of the glued orbit
    /// space and which the reversed one.
    pub fn bipartite_colors(&self) -> Option<Vec<bool>> {
        let n = self.polytopes.len();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let cv = color[v].unwrap();
                for e in &self.edges {
                    if !self.edge_ends_valid(e) {
                        continue;
                    }
                    let (a, b) = (e.ends[0].vertex, e.ends[1].vertex);
                    for (x, y) in [(a, b), (b, a)] {
                        if x != v {
                            continue;
                        }
                        match color[y] {
                            None => {
                                color[y] = Some(!cv);
                                stack.push(y);
                            }
                            Some(cy) if cy == cv => return None,
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// An edge is a bridge iff its endpoints are disconnected without it.
    pub fn is_bridge(&self, edge: usize) -> Result<bool> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::Index(format!("edge {edge} of {}", self.edges.len())))?;
        let (a, b) = (e.ends[0].vertex, e.ends[1].vertex);
        if a == b {
            return Ok(false); // a loop is never a bridge
        }
        let n = self.polytopes.len();
        let mut seen = vec![false; n];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for (i, other) in self.edges.iter().enumerate() {
                if i == edge || !self.edge_ends_valid(other) {
                    continue;
                }
                let (x, y) = (other.ends[0].vertex, other.ends[1].vertex);
                for (s, t) in [(x, y), (y, x)] {
                    if s == v && !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        Ok(!seen[b])
    }

    /// Remove one edge; the fold facet becomes an ordinary facet of both
    /// endpoint polytopes. Edge indices above the cut one shift down.
    pub fn cut(&self, edge: usize, mode: CutMode) -> Result<CutResult> {
        let e = self
            .edges
            .get(edge)
            .copied()
            .ok_or_else(|| Error::Index(format!("edge {edge} of {}", self.edges.len())))?;
        if mode == CutMode::CycleOnly && self.is_bridge(edge)? {
            return Err(Error::Precondition(format!(
                "edge {edge} is a bridge; cutting it disconnects the template"
            )));
        }
        let folded_facet_h =
            self.polytopes[e.ends[0].vertex].facet_h_vector(e.ends[0].facet)?;
        let mut edges = self.edges.clone();
        edges.remove(edge);
        Ok(CutResult {
            template: OrigamiTemplate {
                dim: self.dim,
                polytopes: self.polytopes.clone(),
                edges,
            },
            folded_facet_h,
        })
    }

    /// Edges off the deterministic spanning tree (grown lowest edge id
    /// first); their count is the graph cycle rank, and their dual
    /// degree-1 classes generate with all products trivial.
    pub fn cycle_edge_basis(&self) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::Precondition(
                "cycle edge basis needs a connected template graph".into(),
            ));
        }
        let mut dsu = Dsu::new(self.polytopes.len());
        let mut basis = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !dsu.union(e.ends[0].vertex, e.ends[1].vertex) {
                basis.push(i);
            }
        }
        Ok(basis)
    }

    /// The smallest edge index lying on a cycle, for deterministic cuts.
    pub fn lowest_non_bridge_edge(&self) -> Result<Option<usize>> {
        for i in 0..self.edges.len() {
            if !self.is_bridge(i)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Check every template axiom; violations are reported, not thrown.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.polytopes.is_empty() {
            report.violations.push("template has no polytopes".into());
            return report;
        }
        for p in &self.polytopes {
            if p.dim != self.dim {
                report.violations.push(format!(
                    "polytope {} has dimension {}, template says {}",
                    p.label, p.dim, self.dim
                ));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            for end in &e.ends {
                if end.vertex >= self.polytopes.len() {
                    report
                        .violations
                        .push(format!("edge {i}: vertex {} out of range", end.vertex));
                } else if end.facet >= self.polytopes[end.vertex].facets.len() {
                    report.violations.push(format!(
                        "edge {i}: facet {} out of range for polytope {}",
                        end.facet, self.polytopes[end.vertex].label
                    ));
                }
            }
        }
        if !report.violations.is_empty() {
            return report; // indices unusable, nothing else is checkable
        }

        if !self.is_connected() {
            report
                .violations
                .push("template graph is not connected".into());
        }

        for (pi, p) in self.polytopes.iter().enumerate() {
            let check = p.check_delzant();
            for v in check.violations {
                report.violations.push(format!("polytope {pi}: {v}"));
            }
        }

        // vertex coordinate sets per facet, where computable
        let facet_verts: Vec<Option<Vec<BTreeSet<Vec<Rational>>>>> = self
            .polytopes
            .iter()
            .map(|p| {
                let verts = p.vertices().ok()?;
                let mut per_facet = vec![BTreeSet::new(); p.facets.len()];
                for v in &verts {
                    for fi in p.active_facets(v) {
                        per_facet[fi].insert(v.clone());
                    }
                }
                Some(per_facet)
            })
            .collect();

        for (i, e) in self.edges.iter().enumerate() {
            self.validate_edge(i, e, &facet_verts, &mut report);
        }

        // fold facets incident to one graph vertex must be pairwise disjoint
        for v in 0..self.polytopes.len() {
            let mut incident: Vec<(usize, usize)> = Vec::new(); // (edge, facet)
            for (i, e) in self.edges.iter().enumerate() {
                for end in &e.ends {
                    if end.vertex == v {
                        incident.push((i, end.facet));
                    }
                }
            }
            let Some(per_facet) = &facet_verts[v] else { continue };
            for a in 0..incident.len() {
                for b in a + 1..incident.len() {
                    let (ea, fa) = incident[a];
                    let (eb, fb) = incident[b];
                    if ea == eb {
                        continue; // both ends of a loop edge reference one fold
                    }
                    if per_facet[fa].intersection(&per_facet[fb]).next().is_some() {
                        report.violations.push(format!(
                            "fold facets at a vertex not disjoint: polytope {v}, edges {ea} and {eb} (facets {fa}, {fb})"
                        ));
                    }
                }
            }
        }
        report
    }

    fn validate_edge(
        &self,
        i: usize,
        e: &FoldEdge,
        facet_verts: &[Option<Vec<BTreeSet<Vec<Rational>>>>],
        report: &mut ValidationReport,
    ) {
        let [a, b] = e.ends;
        let pa = &self.polytopes[a.vertex];
        let pb = &self.polytopes[b.vertex];
        let fa = &pa.facets[a.facet];
        let fb = &pb.facets[b.facet];
        if !fa.same_hyperplane(fb) {
            report.violations.push(format!(
                "edge {i}: fold facets have different supporting hyperplanes"
            ));
            return;
        }
        let (Some(va), Some(vb)) = (&facet_verts[a.vertex], &facet_verts[b.vertex]) else {
            return; // polytope-level violation already recorded
        };
        if va[a.facet] != vb[b.facet] {
            report.violations.push(format!(
                "edge {i}: fold facets have different vertex sets"
            ));
            return;
        }

        // neighborhood agreement in both directions
        for (side, (pv, pv_facet, pw, wverts, vverts)) in [
            (0, (pa, a.facet, pb, vb, va)),
            (1, (pb, b.facet, pa, va, vb)),
        ] {
            let fold_verts = &vverts[pv_facet];
            for (gi, g) in pv.facets.iter().enumerate() {
                if gi == pv_facet {
                    continue;
                }
                let trace: BTreeSet<Vec<Rational>> = vverts[gi]
                    .intersection(fold_verts)
                    .cloned()
                    .collect();
                if trace.is_empty() {
                    continue;
                }
                let matched = pw
                    .facets
                    .iter()
                    .enumerate()
                    .find(|(_, h)| h.same_hyperplane(g));
                match matched {
                    None => report.violations.push(format!(
                        "edge {i} (side {side}): no facet of {} matches the hyperplane of facet {gi} of {} near the fold",
                        pw.label, pv.label
                    )),
                    Some((hi, _)) => {
                        let other_trace: BTreeSet<Vec<Rational>> = wverts[hi]
                            .intersection(fold_verts)
                            .cloned()
                            .collect();
                        if other_trace != trace {
                            report.violations.push(format!(
                                "edge {i} (side {side}): facet {gi} of {} and facet {hi} of {} meet the fold differently",
                                pv.label, pw.label
                            ));
                        }
                    }
                }
            }
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two sets were distinct and got merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
