//! Delzant polytopes in H-representation.
//!
//! A polytope is the set { x : <normal_i, x> + offset_i >= 0 }. Normals
//! are primitive integer vectors pointing inward; offsets are rational.
//! Vertices and the face lattice are derived data, never input.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::h_from_f;
use crate::linalg::{positively_spans, solve_rational, vec_gcd, IntMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl Facet {
    /// Same supporting hyperplane, inward side included.
    pub fn same_hyperplane(&self, other: &Facet) -> bool {
        self.normal == other.normal && self.offset == other.offset
    }
}

#[derive(Clone, Debug)]
pub struct DelzantPolytope {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub label: String,
}

/// Outcome of the Delzant condition check. Violations are data, not errors.
#[derive(Clone, Debug, Default)]
pub struct DelzantReport {
    pub violations: Vec<String>,
}

impl DelzantReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One face of a simple polytope, identified with its active-facet set.
#[derive(Clone, Debug)]
pub struct Face {
    /// Facet indices whose hyperplanes contain this face.
    pub active: BTreeSet<usize>,
    pub dim: usize,
    /// Indices into the polytope's sorted vertex list.
    pub vertices: BTreeSet<usize>,
}

/// Full face lattice, including the polytope itself (empty active set).
/// Faces are ordered by (codimension, active set), so the index order is
/// deterministic for a given facet list.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub dim: usize,
    pub faces: Vec<Face>,
    pub vertex_coords: Vec<Vec<Rational>>,
    by_active: BTreeMap<BTreeSet<usize>, usize>,
}

impl FaceLattice {
    pub fn face_by_active(&self, active: &BTreeSet<usize>) -> Option<usize> {
        self.by_active.get(active).copied()
    }

    pub fn face(&self, idx: usize) -> &Face {
        &self.faces[idx]
    }

    /// Coordinates of a face's vertices, as a sorted set.
    pub fn face_vertex_coords(&self, idx: usize) -> BTreeSet<Vec<Rational>> {
        self.faces[idx]
            .vertices
            .iter()
            .map(|&v| self.vertex_coords[v].clone())
            .collect()
    }

    /// f-vector of the polytope: f_i = number of (dim-1-i)-faces,
    /// i = 0..dim-1. The top face is not counted.
    pub fn f_vector(&self) -> Vec<i64> {
        let mut f = vec![0i64; self.dim];
        for face in &self.faces {
            if face.dim < self.dim {
                f[self.dim - 1 - face.dim] += 1;
            }
        }
        f
    }

    /// Euler relation: alternating face count over proper faces plus the
    /// polytope itself equals... for a polytope, sum over ALL faces of
    /// (-1)^dim equals 1 (no empty face counted).
    pub fn euler_alternating_sum(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

impl DelzantPolytope {
    /// Build a polytope, normalizing each normal to its primitive vector.
    /// Returns normalization warnings; a zero normal is an error.
    pub fn new(dim: usize, facets: Vec<Facet>, label: impl Into<String>) -> Result<(Self, Vec<String>)> {
        let label = label.into();
        let mut warnings = Vec::new();
        let mut out = Vec::with_capacity(facets.len());
        for (i, mut facet) in facets.into_iter().enumerate() {
            if facet.normal.len() != dim {
                return Err(Error::Dimension(format!(
                    "polytope {label}: facet {i} normal has length {}, expected {dim}",
                    facet.normal.len()
                )));
            }
            let g = vec_gcd(&facet.normal);
            if g.is_zero() {
                return Err(Error::NotAPolytope(format!(
                    "polytope {label}: facet {i} has zero normal"
                )));
            }
            if !g.is_one() {
                warnings.push(format!(
                    "polytope {label}: facet {i} normal divided by gcd {g} to make it primitive"
                ));
                for c in facet.normal.iter_mut() {
                    *c = &*c / &g;
                }
                let gr = Rational::from(g);
                facet.offset /= gr;
            }
            out.push(facet);
        }
        Ok((
            Self {
                dim,
                facets: out,
                label,
            },
            warnings,
        ))
    }

    /// Enumerate vertices by brute force over dim-subsets of facets:
    /// each vertex is the unique solution of dim active facet equalities
    /// satisfying every other inequality. Sorted lexicographically,
    /// duplicate-free.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        if self.facets.is_empty() {
            return Err(Error::NotAPolytope(format!(
                "polytope {}: no facets",
                self.label
            )));
        }
        let normals: Vec<Vec<BigInt>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        if !positively_spans(&normals, self.dim)? {
            return Err(Error::NotAPolytope(format!(
                "polytope {}: unbounded (normals do not positively span)",
                self.label
            )));
        }
        let m = self.facets.len();
        let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
        let mut subset = Vec::new();
        self.vertex_search(0, m, &mut subset, &mut found)?;
        if found.is_empty() {
            return Err(Error::NotAPolytope(format!(
                "polytope {}: empty (no vertex satisfies all inequalities)",
                self.label
            )));
        }
        Ok(found.into_iter().collect())
    }

    fn vertex_search(
        &self,
        start: usize,
        m: usize,
        subset: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<Rational>>,
    ) -> Result<()> {
        if subset.len() == self.dim {
            let a: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| {
                    self.facets[i]
                        .normal
                        .iter()
                        .map(|c| Rational::from(c.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<Rational> = subset
                .iter()
                .map(|&i| -self.facets[i].offset.clone())
                .collect();
            if let Some(x) = solve_rational(&a, &b)? {
                if self.contains(&x) {
                    found.insert(x);
                }
            }
            return Ok(());
        }
        for i in start..m {
            subset.push(i);
            self.vertex_search(i + 1, m, subset, found)?;
            subset.pop();
        }
        Ok(())
    }

    fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| !self.eval(f, x).is_negative())
    }

    fn eval(&self, facet: &Facet, x: &[Rational]) -> Rational {
        let mut acc = facet.offset.clone();
        for (c, xi) in facet.normal.iter().zip(x) {
            acc += Rational::from(c.clone()) * xi;
        }
        acc
    }

    /// Facet indices tight at a point.
    pub fn active_facets(&self, x: &[Rational]) -> BTreeSet<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| self.eval(f, x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Verify the Delzant condition: bounded, full-dimensional, simple,
    /// and the active normals at every vertex form a lattice basis.
    pub fn check_delzant(&self) -> DelzantReport {
        let mut report = DelzantReport::default();
        let normals: Vec<Vec<BigInt>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        match positively_spans(&normals, self.dim) {
            Ok(true) => {}
            Ok(false) => {
                report.violations.push(format!(
                    "polytope {}: unbounded (normals do not positively span)",
                    self.label
                ));
                return report;
            }
            Err(e) => {
                report
                    .violations
                    .push(format!("polytope {}: {e}", self.label));
                return report;
            }
        }
        let verts = match self.vertices() {
            Ok(v) => v,
            Err(e) => {
                report.violations.push(e.to_string());
                return report;
            }
        };

        // full dimension: affine rank of the vertex set is dim
        if verts.len() < self.dim + 1 {
            report.violations.push(format!(
                "polytope {}: not full-dimensional ({} vertices in dimension {})",
                self.label,
                verts.len(),
                self.dim
            ));
        } else {
            let v0 = &verts[0];
            let rows: Vec<Vec<BigInt>> = verts[1..]
                .iter()
                .map(|v| {
                    let diffs: Vec<Rational> =
                        v.iter().zip(v0).map(|(a, b)| a - b).collect();
                    scale_to_integers(&diffs)
                })
                .collect();
            let m = IntMatrix::from_rows(rows).expect("equal-length rows");
            if m.rank() != self.dim {
                report.violations.push(format!(
                    "polytope {}: not full-dimensional (affine rank {})",
                    self.label,
                    m.rank()
                ));
            }
        }

        // every inequality must support a genuine facet
        let mut touched = vec![false; self.facets.len()];
        for v in &verts {
            for fi in self.active_facets(v) {
                touched[fi] = true;
            }
        }
        for (fi, seen) in touched.iter().enumerate() {
            if !seen {
                report.violations.push(format!(
                    "polytope {}: facet {fi} supports no vertex (redundant inequality)",
                    self.label
                ));
            }
        }

        for (vi, v) in verts.iter().enumerate() {
            let active = self.active_facets(v);
            if active.len() != self.dim {
                report.violations.push(format!(
                    "polytope {}: vertex {vi} lies on {} facets, expected {} (not simple)",
                    self.label,
                    active.len(),
                    self.dim
                ));
                continue;
            }
            let rows: Vec<Vec<BigInt>> = active
                .iter()
                .map(|&i| self.facets[i].normal.clone())
                .collect();
            let det = IntMatrix::from_rows(rows)
                .expect("equal-length rows")
                .determinant()
                .expect("square by construction");
            if !det.abs().is_one() {
                let facets: Vec<String> = active.iter().map(|i| i.to_string()).collect();
                report.violations.push(format!(
                    "polytope {}: vertex {vi} on facets {{{}}} has normal determinant {det}, expected +-1",
                    self.label,
                    facets.join(",")
                ));
            }
        }
        report
    }

    /// Build the full face lattice. Requires the Delzant check to pass.
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        let report = self.check_delzant();
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "face lattice needs a Delzant polytope: {}",
                report.violations.join("; ")
            )));
        }
        let verts = self.vertices()?;
        let actives: Vec<BTreeSet<usize>> = verts.iter().map(|v| self.active_facets(v)).collect();

        // every subset of a vertex's active set spans a face (simpleness)
        let mut by_active: BTreeMap<BTreeSet<usize>, BTreeSet<usize>> = BTreeMap::new();
        for (vi, act) in actives.iter().enumerate() {
            let facets: Vec<usize> = act.iter().copied().collect();
            for mask in 0..(1usize << facets.len()) {
                let subset: BTreeSet<usize> = facets
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &f)| f)
                    .collect();
                by_active.entry(subset).or_default().insert(vi);
            }
        }

        // canonical active set of each face must be the defining subset
        for (active, vset) in &by_active {
            let mut common: Option<BTreeSet<usize>> = None;
            for &v in vset {
                common = Some(match common {
                    None => actives[v].clone(),
                    Some(c) => c.intersection(&actives[v]).copied().collect(),
                });
            }
            if common.as_ref() != Some(active) {
                return Err(Error::Internal(format!(
                    "polytope {}: active set {:?} is not canonical for its vertex set",
                    self.label, active
                )));
            }
        }

        let mut faces = Vec::new();
        let mut index = BTreeMap::new();
        let mut entries: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = by_active.into_iter().collect();
        entries.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        for (active, vertices) in entries {
            let dim = self.dim - active.len();
            index.insert(active.clone(), faces.len());
            faces.push(Face {
                active,
                dim,
                vertices,
            });
        }
        Ok(FaceLattice {
            dim: self.dim,
            faces,
            vertex_coords: verts,
            by_active: index,
        })
    }

    /// f-vector of one facet as a polytope of rank dim-1:
    /// f_j = number of (dim-2-j)-dimensional faces of the facet.
    pub fn facet_f_vector(&self, facet_index: usize) -> Result<Vec<i64>> {
        if facet_index >= self.facets.len() {
            return Err(Error::Index(format!(
                "polytope {}: facet {facet_index} of {}",
                self.label,
                self.facets.len()
            )));
        }
        let lattice = self.face_lattice()?;
        let rank = self.dim - 1;
        let mut f = vec![0i64; rank];
        for face in &lattice.faces {
            if face.active.contains(&facet_index) && face.dim < rank {
                f[rank - 1 - face.dim] += 1;
            }
        }
        Ok(f)
    }

    /// h-vector of one facet as a polytope of rank dim-1.
    pub fn facet_h_vector(&self, facet_index: usize) -> Result<Vec<i64>> {
        let f = self.facet_f_vector(facet_index)?;
        h_from_f(&f, self.dim - 1)
    }
}

/// Clear denominators: scale a rational vector to a primitive-free
/// integer vector (common denominator times the entries).
pub fn scale_to_integers(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    v.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}
