//! The glued face structure of the orbit space: polytope faces merged
//! across folds into face classes, the face poset, boundary components,
//! and the order complex of the dual simplicial poset.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::polytope::{Facet, FaceLattice};
use crate::template::OrigamiTemplate;

/// One polytope face inside a face class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constituent {
    pub polytope: usize,
    /// Index into the polytope's face lattice.
    pub face: usize,
}

/// A class of polytope faces identified across folds. The gluing graph
/// records one edge per identification event; the class is connected by
/// construction, so it is acyclic iff the cycle rank is zero.
#[derive(Clone, Debug)]
pub struct FaceClass {
    pub dim: usize,
    pub constituents: Vec<Constituent>,
    /// Edges of the gluing multigraph, as indices into `constituents`.
    pub gluing_edges: Vec<(usize, usize)>,
}

impl FaceClass {
    pub fn cycle_rank(&self) -> usize {
        self.gluing_edges.len() + 1 - self.constituents.len()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_rank() == 0
    }
}

/// The face poset of the orbit space. Classes are sorted by (codimension,
/// smallest constituent), so ids are deterministic. There is exactly one
/// class of dimension n, the orbit space itself.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub n: usize,
    pub classes: Vec<FaceClass>,
    pub lattices: Vec<FaceLattice>,
    pub polytope_facets: Vec<Vec<Facet>>,
    /// strictly_above[x] = ids of classes properly containing class x.
    strictly_above: Vec<BTreeSet<usize>>,
    class_of: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
pub struct AcyclicityReport {
    /// (class id, cycle rank) for every non-acyclic proper class.
    pub non_acyclic: Vec<(usize, usize)>,
    /// Smallest r such that every proper class of codim >= r is acyclic.
    pub r_min: usize,
}

#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    /// Facet class ids in the component, ascending.
    pub facet_classes: Vec<usize>,
    /// For n = 2: the component as an oriented cycle, starting at the
    /// lowest class id, lowest-id neighbor first.
    pub cycle: Option<Vec<usize>>,
    /// For n = 2: vertex class ids along the cycle; entry `i` sits
    /// between `cycle[i]` and `cycle[(i+1) % m]`.
    pub cycle_vertices: Option<Vec<usize>>,
}

/// All chains of proper face classes; the barycentric subdivision of the
/// realization of the dual simplicial poset.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    /// Proper class ids, ascending; simplex entries index into this list.
    pub vertex_classes: Vec<usize>,
    /// `simplices[k]` = k-simplices as sorted vertex index lists.
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl OrderComplex {
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }
}

/// Glue polytope faces across all folds. Faces contained in a fold facet
/// are dropped (they become interior); for every face K of a fold F the
/// unique transverse faces G1, G2 with Gi ∩ F = K, Gi ⊄ F on the two
/// sides are identified.
pub fn build_face_classes(t: &OrigamiTemplate) -> Result<FacePoset> {
    let validation = t.validate();
    if !validation.is_ok() {
        return Err(Error::Precondition(format!(
            "template is not valid: {}",
            validation.violations.join("; ")
        )));
    }
    let n = t.dim;
    let lattices: Vec<FaceLattice> = t
        .polytopes
        .iter()
        .map(|p| p.face_lattice())
        .collect::<Result<_>>()?;

    let mut folds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); t.polytopes.len()];
    for e in &t.edges {
        for end in &e.ends {
            folds[end.vertex].insert(end.facet);
        }
    }

    // universe of constituents: faces not contained in any fold facet
    let mut universe: Vec<Constituent> = Vec::new();
    let mut universe_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pi, lattice) in lattices.iter().enumerate() {
        for (fi, face) in lattice.faces.iter().enumerate() {
            if face.active.intersection(&folds[pi]).next().is_some() {
                continue;
            }
            universe_index.insert((pi, fi), universe.len());
            universe.push(Constituent {
                polytope: pi,
                face: fi,
            });
        }
    }

    let mut dsu = Dsu::new(universe.len());
    let mut events: Vec<(usize, usize)> = Vec::new();
    for e in &t.edges {
        let [a, b] = e.ends;
        let la = &lattices[a.vertex];
        let lb = &lattices[b.vertex];

        // faces of the fold facet on side b, looked up by vertex coordinates
        let mut by_coords: BTreeMap<BTreeSet<Vec<Rational>>, usize> = BTreeMap::new();
        for (fi, face) in lb.faces.iter().enumerate() {
            if face.active.contains(&b.facet) {
                by_coords.insert(lb.face_vertex_coords(fi), fi);
            }
        }

        for (ka, face_a) in la.faces.iter().enumerate() {
            if !face_a.active.contains(&a.facet) {
                continue;
            }
            let mut ga_active = face_a.active.clone();
            ga_active.remove(&a.facet);
            let ga = la.face_by_active(&ga_active).ok_or_else(|| {
                Error::Internal("transverse face missing on side 1 of a fold".into())
            })?;
            let kb = *by_coords.get(&la.face_vertex_coords(ka)).ok_or_else(|| {
                Error::Inconsistency(
                    "fold facet faces do not match across an edge (validation gap)".into(),
                )
            })?;
            let mut gb_active = lb.faces[kb].active.clone();
            gb_active.remove(&b.facet);
            let gb = lb.face_by_active(&gb_active).ok_or_else(|| {
                Error::Internal("transverse face missing on side 2 of a fold".into())
            })?;
            if la.faces[ga].dim != lb.faces[gb].dim {
                return Err(Error::Internal(
                    "merge partners have different dimensions".into(),
                ));
            }
            let ua = *universe_index.get(&(a.vertex, ga)).ok_or_else(|| {
                Error::Internal("merge partner was dropped as fold-contained".into())
            })?;
            let ub = *universe_index.get(&(b.vertex, gb)).ok_or_else(|| {
                Error::Internal("merge partner was dropped as fold-contained".into())
            })?;
            dsu.union(ua, ub);
            events.push((ua, ub));
        }
    }

    // group components into classes, deterministically ordered
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for u in 0..universe.len() {
        groups.entry(dsu.find(u)).or_default().push(u);
    }
    let mut raw: Vec<Vec<usize>> = groups.into_values().collect();
    for members in raw.iter_mut() {
        members.sort_by_key(|&u| universe[u]);
    }
    raw.sort_by_key(|members| {
        let dim = lattices[universe[members[0]].polytope].faces[universe[members[0]].face].dim;
        (n - dim, universe[members[0]])
    });

    let mut classes = Vec::with_capacity(raw.len());
    let mut class_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut member_pos: BTreeMap<usize, (usize, usize)> = BTreeMap::new(); // universe -> (class, slot)
    for (cid, members) in raw.iter().enumerate() {
        let dims: BTreeSet<usize> = members
            .iter()
            .map(|&u| lattices[universe[u].polytope].faces[universe[u].face].dim)
            .collect();
        if dims.len() != 1 {
            return Err(Error::Internal(
                "face class mixes dimensions (validation gap)".into(),
            ));
        }
        let constituents: Vec<Constituent> = members.iter().map(|&u| universe[u]).collect();
        for (slot, &u) in members.iter().enumerate() {
            member_pos.insert(u, (cid, slot));
            class_of.insert((universe[u].polytope, universe[u].face), cid);
        }
        classes.push(FaceClass {
            dim: dims.into_iter().next().unwrap(),
            constituents,
            gluing_edges: Vec::new(),
        });
    }
    for (ua, ub) in events {
        let (ca, sa) = member_pos[&ua];
        let (cb, sb) = member_pos[&ub];
        if ca != cb {
            return Err(Error::Internal("gluing event across classes".into()));
        }
        classes[ca].gluing_edges.push((sa, sb));
    }

    if classes.iter().filter(|c| c.dim == n).count() != 1 {
        return Err(Error::Structural(
            "expected exactly one top-dimensional face class".into(),
        ));
    }

    // containment: X <= Y iff every constituent of X lies in some
    // constituent of Y (active-set inclusion within the same polytope)
    let mut strictly_above = vec![BTreeSet::new(); classes.len()];
    for (x, cx) in classes.iter().enumerate() {
        for (y, cy) in classes.iter().enumerate() {
            if cx.dim >= cy.dim {
                continue;
            }
            let contained = cx.constituents.iter().all(|cons| {
                let ax = &lattices[cons.polytope].faces[cons.face].active;
                cy.constituents.iter().any(|other| {
                    other.polytope == cons.polytope
                        && lattices[other.polytope].faces[other.face]
                            .active
                            .is_subset(ax)
                })
            });
            if contained {
                strictly_above[x].insert(y);
            }
        }
    }

    let poset = FacePoset {
        n,
        classes,
        lattices,
        polytope_facets: t.polytopes.iter().map(|p| p.facets.clone()).collect(),
        strictly_above,
        class_of,
    };
    poset.check_local_standardness()?;
    Ok(poset)
}

impl FacePoset {
    pub fn class_of(&self, polytope: usize, face: usize) -> Option<usize> {
        self.class_of.get(&(polytope, face)).copied()
    }

    pub fn top_class(&self) -> usize {
        self.classes
            .iter()
            .position(|c| c.dim == self.n)
            .expect("checked at construction")
    }

    pub fn proper_class_ids(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| self.classes[c].dim < self.n)
            .collect()
    }

    /// Reflexive containment.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.strictly_above[x].contains(&y)
    }

    /// f_i = number of classes of dimension n-1-i.
    pub fn f_vector(&self) -> Vec<i64> {
        let mut f = vec![0i64; self.n];
        for c in &self.classes {
            if c.dim < self.n {
                f[self.n - 1 - c.dim] += 1;
            }
        }
        f
    }

    /// Every codim-k class must lie in exactly k facet classes; this is
    /// the Boolean-interval condition making the dual poset simplicial.
    pub fn check_local_standardness(&self) -> Result<()> {
        let facet_ids: Vec<usize> = (0..self.classes.len())
            .filter(|&c| self.classes[c].dim + 1 == self.n)
            .collect();
        for (x, cx) in self.classes.iter().enumerate() {
            if cx.dim == self.n {
                continue;
            }
            let k = self.n - cx.dim;
            let count = facet_ids.iter().filter(|&&y| self.leq(x, y)).count();
            if count != k {
                return Err(Error::Structural(format!(
                    "class {x} (codim {k}) lies in {count} facet classes, expected {k}"
                )));
            }
        }
        Ok(())
    }

    /// Per-class gluing-graph cycle ranks and the smallest r such that
    /// every proper class of codim >= r is acyclic.
    pub fn acyclicity(&self) -> AcyclicityReport {
        let mut non_acyclic = Vec::new();
        let mut r_min = 1;
        for (cid, c) in self.classes.iter().enumerate() {
            if c.dim == self.n {
                continue;
            }
            let rank = c.cycle_rank();
            if rank > 0 {
                non_acyclic.push((cid, rank));
                r_min = r_min.max(self.n - c.dim + 1);
            }
        }
        AcyclicityReport { non_acyclic, r_min }
    }

    /// Supporting hyperplane shared by every constituent of a facet class.
    pub fn facet_class_hyperplane(&self, class: usize) -> Result<Facet> {
        let c = &self.classes[class];
        if c.dim + 1 != self.n {
            return Err(Error::Index(format!("class {class} is not a facet class")));
        }
        let mut result: Option<Facet> = None;
        for cons in &c.constituents {
            let active = &self.lattices[cons.polytope].faces[cons.face].active;
            if active.len() != 1 {
                return Err(Error::Internal("facet class constituent not a facet".into()));
            }
            let fi = *active.iter().next().unwrap();
            let facet = self.polytope_facets[cons.polytope][fi].clone();
            match &result {
                None => result = Some(facet),
                Some(r) if r.same_hyperplane(&facet) => {}
                Some(_) => {
                    return Err(Error::Structural(format!(
                        "facet class {class} mixes supporting hyperplanes"
                    )))
                }
            }
        }
        result.ok_or_else(|| Error::Internal("empty face class".into()))
    }

    /// Connected components of the proper-face complex, as components of
    /// the facet-class adjacency graph (adjacent iff they share a codim-2
    /// class). For n = 2 each component is returned as an oriented cycle.
    pub fn boundary_components(&self) -> Result<Vec<BoundaryComponent>> {
        let facet_ids: Vec<usize> = (0..self.classes.len())
            .filter(|&c| self.classes[c].dim + 1 == self.n)
            .collect();
        let pos: BTreeMap<usize, usize> = facet_ids
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let ridge_ids: Vec<usize> = (0..self.classes.len())
            .filter(|&c| self.n >= 2 && self.classes[c].dim + 2 == self.n)
            .collect();

        let mut dsu = Dsu::new(facet_ids.len());
        let mut ridge_facets: Vec<(usize, [usize; 2])> = Vec::new();
        for &r in &ridge_ids {
            let above: Vec<usize> = facet_ids
                .iter()
                .copied()
                .filter(|&f| self.leq(r, f))
                .collect();
            if above.len() != 2 {
                return Err(Error::Structural(format!(
                    "codim-2 class {r} lies in {} facet classes",
                    above.len()
                )));
            }
            dsu.union(pos[&above[0]], pos[&above[1]]);
            ridge_facets.push((r, [above[0], above[1]]));
        }

        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &f) in facet_ids.iter().enumerate() {
            groups.entry(dsu.find(i)).or_default().push(f);
        }
        let mut components: Vec<Vec<usize>> = groups.into_values().collect();
        components.sort_by_key(|c| c[0]);

        let mut out = Vec::new();
        for comp in components {
            let (cycle, cycle_vertices) = if self.n == 2 {
                let (c, v) = self.order_component_cycle(&comp, &ridge_facets)?;
                (Some(c), Some(v))
            } else {
                (None, None)
            };
            out.push(BoundaryComponent {
                facet_classes: comp,
                cycle,
                cycle_vertices,
            });
        }
        Ok(out)
    }

    /// Walk one n=2 boundary component as a simple cycle of facet classes,
    /// also returning the vertex classes traversed between them.
    fn order_component_cycle(
        &self,
        comp: &[usize],
        ridge_facets: &[(usize, [usize; 2])],
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        let in_comp: BTreeSet<usize> = comp.iter().copied().collect();
        // vertex classes incident to each facet class of the component
        let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut vertex_count = 0;
        for &(r, [f1, f2]) in ridge_facets {
            if in_comp.contains(&f1) || in_comp.contains(&f2) {
                if !(in_comp.contains(&f1) && in_comp.contains(&f2)) {
                    return Err(Error::Structural(
                        "boundary vertex joins different components".into(),
                    ));
                }
                incident.entry(f1).or_default().push(r);
                incident.entry(f2).or_default().push(r);
                vertex_count += 1;
            }
        }
        for &f in comp {
            let count = incident.get(&f).map_or(0, Vec::len);
            if count != 2 {
                return Err(Error::Structural(format!(
                    "facet class {f} meets {count} vertex classes, boundary is not a closed curve"
                )));
            }
        }
        if vertex_count != comp.len() {
            return Err(Error::Structural(
                "boundary component is not a simple closed curve".into(),
            ));
        }
        let other_facet = |r: usize, f: usize| -> usize {
            let [a, b] = ridge_facets.iter().find(|&&(rr, _)| rr == r).unwrap().1;
            if a == f {
                b
            } else {
                a
            }
        };
        let start = comp[0];
        // lowest-id neighbor first; among equal neighbors, lowest vertex class
        let mut first_steps: Vec<(usize, usize)> = incident[&start]
            .iter()
            .map(|&r| (other_facet(r, start), r))
            .collect();
        first_steps.sort();
        let (mut cur, mut via) = first_steps[0];
        let mut cycle = vec![start];
        let mut vertices = vec![via];
        while cur != start {
            cycle.push(cur);
            if cycle.len() > comp.len() {
                return Err(Error::Structural(
                    "boundary walk does not close up".into(),
                ));
            }
            let vs = &incident[&cur];
            let next_v = if vs[0] == via { vs[1] } else { vs[0] };
            via = next_v;
            vertices.push(next_v);
            cur = other_facet(next_v, cur);
        }
        if cycle.len() != comp.len() {
            return Err(Error::Structural(
                "boundary component is not a simple cycle".into(),
            ));
        }
        Ok((cycle, vertices))
    }

    /// All chains of proper classes, with deterministic vertex order.
    pub fn order_complex(&self) -> Result<OrderComplex> {
        self.check_local_standardness()?;
        let vertex_classes = self.proper_class_ids();
        let pos: BTreeMap<usize, usize> = vertex_classes
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut chain: Vec<usize> = Vec::new();

        fn extend(
            poset: &FacePoset,
            pos: &BTreeMap<usize, usize>,
            chain: &mut Vec<usize>,
            simplices: &mut Vec<Vec<Vec<usize>>>,
        ) {
            let mut verts: Vec<usize> = chain.iter().map(|c| pos[c]).collect();
            verts.sort_unstable();
            let k = verts.len() - 1;
            if simplices.len() <= k {
                simplices.resize(k + 1, Vec::new());
            }
            simplices[k].push(verts);
            let last = *chain.last().unwrap();
            for &next in &poset.strictly_above[last] {
                if poset.classes[next].dim == poset.n {
                    continue;
                }
                chain.push(next);
                extend(poset, pos, chain, simplices);
                chain.pop();
            }
        }

        for &c in &vertex_classes {
            chain.push(c);
            extend(self, &pos, &mut chain, &mut simplices);
            chain.pop();
        }
        for level in simplices.iter_mut() {
            level.sort();
        }
        Ok(OrderComplex {
            vertex_classes,
            simplices,
        })
    }

    /// Euler characteristic of the boundary from face-class counts.
    pub fn boundary_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &fi)| if i % 2 == 0 { fi } else { -fi })
            .sum()
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

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Normal of a facet class as small integers, for the 2d multi-fan.
pub fn facet_class_normal_i64(poset: &FacePoset, class: usize) -> Result<Vec<i64>> {
    let hyperplane = poset.facet_class_hyperplane(class)?;
    hyperplane
        .normal
        .iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::Internal("facet normal exceeds i64".into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn poset(name: &str) -> FacePoset {
        build_face_classes(&fixtures::template(name).unwrap()).unwrap()
    }

    #[test]
    fn f_vectors() {
        assert_eq!(poset("t_square").f_vector(), vec![4, 4]);
        assert_eq!(poset("t_fold2").f_vector(), vec![4, 4]);
        assert_eq!(poset("t_ring4").f_vector(), vec![8, 8]);
        assert_eq!(poset("t_chain4").f_vector(), vec![12, 12]);
        assert_eq!(poset("t_cube2").f_vector(), vec![6, 12, 8]);
        assert_eq!(poset("t_fig1").f_vector(), vec![8, 8]);
        assert_eq!(poset("t_prismring").f_vector(), vec![10, 24, 16]);
    }

    #[test]
    fn fold2_classes_by_hand() {
        let fp = poset("t_fold2");
        // facet classes: two merged pairs (y=0, y=1) and two x=0 singletons
        let facet_sizes: Vec<usize> = fp
            .classes
            .iter()
            .filter(|c| c.dim == 1)
            .map(|c| c.constituents.len())
            .collect();
        let mut sorted = facet_sizes.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 1, 2, 2]);
        // 4 vertex classes, all singletons
        assert_eq!(
            fp.classes.iter().filter(|c| c.dim == 0).count(),
            4
        );
        assert!(fp
            .classes
            .iter()
            .filter(|c| c.dim == 0)
            .all(|c| c.constituents.len() == 1));
    }

    #[test]
    fn acyclicity_r_min() {
        for name in ["t_square", "t_fold2", "t_ring4", "t_chain4", "t_cube2", "t_fig1"] {
            let report = poset(name).acyclicity();
            assert_eq!(report.r_min, 1, "{name}");
            assert!(report.non_acyclic.is_empty(), "{name}");
        }
        let fp = poset("t_prismring");
        let report = fp.acyclicity();
        assert_eq!(report.r_min, 2);
        // exactly the top and bottom prism facet classes have cycle rank 1
        assert_eq!(report.non_acyclic.len(), 2);
        for &(cid, rank) in &report.non_acyclic {
            assert_eq!(rank, 1);
            assert_eq!(fp.classes[cid].dim, 2);
            assert_eq!(fp.classes[cid].constituents.len(), 4);
        }
    }

    #[test]
    fn boundary_components() {
        let ring = poset("t_ring4");
        let comps = ring.boundary_components().unwrap();
        assert_eq!(comps.len(), 2);
        for comp in &comps {
            assert_eq!(comp.facet_classes.len(), 4);
            let cycle = comp.cycle.as_ref().unwrap();
            assert_eq!(cycle.len(), 4);
            assert_eq!(cycle[0], comp.facet_classes[0]);
        }

        assert_eq!(poset("t_square").boundary_components().unwrap().len(), 1);
        let fold2 = poset("t_fold2").boundary_components().unwrap();
        assert_eq!(fold2.len(), 1);
        assert_eq!(fold2[0].facet_classes.len(), 4);

        let cube2 = poset("t_cube2").boundary_components().unwrap();
        assert_eq!(cube2.len(), 1);
        assert_eq!(cube2[0].facet_classes.len(), 6);
        assert!(cube2[0].cycle.is_none());
    }

    #[test]
    fn boundary_component_count_is_b1_plus_1_for_acyclic_2d() {
        for name in ["t_square", "t_fold2", "t_ring4", "t_chain4", "t_fig1"] {
            let t = fixtures::template(name).unwrap();
            let fp = build_face_classes(&t).unwrap();
            assert_eq!(fp.acyclicity().r_min, 1);
            assert_eq!(
                fp.boundary_components().unwrap().len(),
                t.cycle_rank().unwrap() + 1,
                "{name}"
            );
        }
    }

    #[test]
    fn order_complex_sizes() {
        let sq = poset("t_square").order_complex().unwrap();
        assert_eq!(sq.vertex_classes.len(), 8);
        assert_eq!(sq.simplices[1].len(), 8);
        assert_eq!(sq.dim(), 1);

        let ring = poset("t_ring4").order_complex().unwrap();
        assert_eq!(ring.vertex_classes.len(), 16);
        assert_eq!(ring.simplices[1].len(), 16);

        let cube2 = poset("t_cube2").order_complex().unwrap();
        assert_eq!(cube2.vertex_classes.len(), 26);
        assert_eq!(cube2.dim(), 2);
        // subdivided boundary 2-sphere: V - E + F = 2
        let v = cube2.simplices[0].len() as i64;
        let e = cube2.simplices[1].len() as i64;
        let f = cube2.simplices[2].len() as i64;
        assert_eq!(v - e + f, 2);
    }

    #[test]
    fn local_standardness_holds() {
        for name in fixtures::FIXTURE_NAMES {
            poset(name).check_local_standardness().unwrap();
        }
    }

    #[test]
    fn cut_f_vector_identity() {
        // f_i(M'/T) = f_i(M/T) + 2 f_{i-1}(F) + f_i(F), with F counting
        // once in its own top slot and f_{n-1}(F) = 0. The identity needs
        // acyclic proper faces: a class glued in a cycle does not split
        // when one gluing event is removed.
        for name in fixtures::FIXTURE_NAMES {
            let t = fixtures::template(name).unwrap();
            let n = t.dim;
            let fp = build_face_classes(&t).unwrap();
            if fp.acyclicity().r_min > 1 {
                continue;
            }
            let before = fp.f_vector();
            for e in 0..t.edge_count() {
                if t.is_bridge(e).unwrap() {
                    continue;
                }
                let end = t.edges[e].ends[0];
                let f_fold = t.polytopes[end.vertex].facet_f_vector(end.facet).unwrap();
                let cut = t.cut(e, crate::template::CutMode::CycleOnly).unwrap();
                let after = build_face_classes(&cut.template).unwrap().f_vector();
                for i in 0..n {
                    // fold-facet face counts in the M/T indexing:
                    // f_{i-1}(F) shifts, with f_{-1}(F) = 1 for F itself
                    let f_prev = if i == 0 { 1 } else { f_fold[i - 1] };
                    let f_cur = if i < n - 1 { f_fold[i] } else { 0 };
                    assert_eq!(
                        after[i],
                        before[i] + 2 * f_prev + f_cur,
                        "{name} edge {e} slot {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn prismring_cut_keeps_vertex_slot_identity() {
        // with non-acyclic facet classes only the unconditional parts of
        // the cut bookkeeping survive: the vertex-class slot (the Euler
        // count) and the b1 drop
        let t = fixtures::template("t_prismring").unwrap();
        let before = build_face_classes(&t).unwrap().f_vector();
        let n = t.dim;
        for e in 0..t.edge_count() {
            let end = t.edges[e].ends[0];
            let f_fold = t.polytopes[end.vertex].facet_f_vector(end.facet).unwrap();
            let cut = t.cut(e, crate::template::CutMode::CycleOnly).unwrap();
            let after = build_face_classes(&cut.template).unwrap().f_vector();
            assert_eq!(after[n - 1], before[n - 1] + 2 * f_fold[n - 2]);
            // the facet slot genuinely breaks: the top and bottom classes
            // were glued in a cycle and do not split
            assert_eq!(after[0], before[0] + 2 + f_fold[0] - 2);
        }
    }

    #[test]
    fn cut_sides_do_not_meet() {
        // after a cut no facet class contains faces of both fold copies;
        // the disjointness argument needs acyclic proper faces
        for name in fixtures::FIXTURE_NAMES {
            let t = fixtures::template(name).unwrap();
            if build_face_classes(&t).unwrap().acyclicity().r_min > 1 {
                continue;
            }
            for e in 0..t.edge_count() {
                if t.is_bridge(e).unwrap() {
                    continue;
                }
                let [a, b] = t.edges[e].ends;
                let cut = t.cut(e, crate::template::CutMode::CycleOnly).unwrap();
                let fp = build_face_classes(&cut.template).unwrap();
                // vertex-index sets of the two fold copies in their polytopes
                let copy_vertices = |end: crate::template::EdgeEnd| {
                    let lattice = &fp.lattices[end.vertex];
                    let face = lattice
                        .face_by_active(&BTreeSet::from([end.facet]))
                        .unwrap();
                    lattice.faces[face].vertices.clone()
                };
                let plus = copy_vertices(a);
                let minus = copy_vertices(b);
                for c in &fp.classes {
                    if c.dim + 1 != fp.n {
                        continue;
                    }
                    let meets = |vertex: usize, copy: &BTreeSet<usize>| {
                        c.constituents.iter().any(|cons| {
                            cons.polytope == vertex
                                && fp.lattices[vertex].faces[cons.face]
                                    .vertices
                                    .intersection(copy)
                                    .next()
                                    .is_some()
                        })
                    };
                    assert!(
                        !(meets(a.vertex, &plus) && meets(b.vertex, &minus)),
                        "{name} edge {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn facet_class_hyperplanes_well_defined() {
        for name in fixtures::FIXTURE_NAMES {
            let fp = poset(name);
            for (cid, c) in fp.classes.iter().enumerate() {
                if c.dim + 1 == fp.n {
                    fp.facet_class_hyperplane(cid).unwrap();
                }
            }
        }
    }
}
