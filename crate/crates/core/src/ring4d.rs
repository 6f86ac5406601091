//! Degree-2 and degree-4 presentation of the quotient of equivariant
//! cohomology by the ideal of the base classes, for 4-dimensional
//! manifolds (n = 2): boundary multi-fans, tau generators, the mu class
//! of each boundary circle, and the degree-4 kernel basis of mu
//! differences.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::binomial;
use crate::linalg::IntMatrix;
use crate::orbit::{build_face_classes, facet_class_normal_i64, FacePoset};
use crate::template::OrigamiTemplate;

/// One boundary circle with its primitive inward normals in cyclic order.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCycle {
    pub component: usize,
    /// Facet class ids in cyclic order.
    pub classes: Vec<usize>,
    pub normals: Vec<[i64; 2]>,
}

impl BoundaryCycle {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn det2(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Boundary circles of a 4-dimensional orbit space, oriented by the
/// orientation of the glued orbit space: gluing across a fold reverses
/// the ambient plane orientation, so polytopes carry it or its reverse
/// according to the bipartite color, and a circle's induced traversal
/// has corner determinant +1 in even-colored polytopes and -1 in odd
/// ones. The overall sign is normalized so the first circle starts with
/// determinant +1. Consecutive determinants are asserted to be +-1.
pub fn multifan_2d(t: &OrigamiTemplate) -> Result<Vec<BoundaryCycle>> {
    let fp = build_face_classes(t)?;
    multifan_from_poset(t, &fp)
}

pub fn multifan_from_poset(t: &OrigamiTemplate, fp: &FacePoset) -> Result<Vec<BoundaryCycle>> {
    if t.dim != 2 {
        return Err(Error::Capability(format!(
            "the ring presentation is implemented for n = 2 only, got n = {}",
            t.dim
        )));
    }
    let ac = fp.acyclicity();
    if ac.r_min > 1 {
        return Err(Error::Precondition(
            "multi-fan extraction needs all proper faces acyclic".into(),
        ));
    }
    let colors = t.bipartite_colors().filter(|_| t.is_coorientable()).ok_or_else(|| {
        Error::Precondition("multi-fan extraction needs an orientable template".into())
    })?;

    let mut out = Vec::new();
    for (k, comp) in fp.boundary_components()?.iter().enumerate() {
        let mut classes = comp
            .cycle
            .clone()
            .ok_or_else(|| Error::Internal("n = 2 component without a cycle".into()))?;
        let mut vertices = comp
            .cycle_vertices
            .clone()
            .ok_or_else(|| Error::Internal("n = 2 component without corner data".into()))?;
        let mut normals: Vec<[i64; 2]> = classes
            .iter()
            .map(|&c| {
                let v = facet_class_normal_i64(fp, c)?;
                Ok([v[0], v[1]])
            })
            .collect::<Result<_>>()?;
        let m = classes.len();

        // required determinant at each corner, from the polytope color
        let mut matches = 0;
        let mut anti = 0;
        for i in 0..m {
            let det = det2(normals[i], normals[(i + 1) % m]);
            if det.abs() != 1 {
                return Err(Error::Structural(format!(
                    "boundary circle {k}: consecutive normals with determinant {det} \
                     (a non-Delzant corner survived validation)"
                )));
            }
            let corner = &fp.classes[vertices[i]];
            if corner.constituents.len() != 1 {
                return Err(Error::Internal("n = 2 vertex class is not a singleton".into()));
            }
            let required = if colors[corner.constituents[0].polytope] { -1 } else { 1 };
            if det == required {
                matches += 1;
            } else {
                anti += 1;
            }
        }
        if matches != 0 && anti != 0 {
            return Err(Error::Structural(format!(
                "boundary circle {k}: corner determinants are inconsistent with \
                 the glued orientation"
            )));
        }
        if anti != 0 {
            classes[1..].reverse();
            normals[1..].reverse();
            vertices.reverse();
        }
        out.push(BoundaryCycle {
            component: k,
            classes,
            normals,
        });
    }
    // the global orientation is free: normalize so circle 0 opens with +1
    if let Some(first) = out.first() {
        if det2(first.normals[0], first.normals[1 % first.len()]) == -1 {
            for cycle in out.iter_mut() {
                cycle.classes[1..].reverse();
                cycle.normals[1..].reverse();
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TauGenerator {
    /// Global generator index.
    pub index: usize,
    pub class_id: usize,
    pub normal: [i64; 2],
    pub cycle: usize,
    pub position: usize,
}

/// Degree-2 part: generators tau_i modulo the two linear relations
/// sum_i <u, v_i> tau_i = 0 for the basis covectors u.
#[derive(Clone, Debug, Serialize)]
pub struct Degree2Presentation {
    pub generators: Vec<TauGenerator>,
    /// Rows <e1*, v_i> and <e2*, v_i> over all generators.
    pub relation_rows: Vec<Vec<i64>>,
    pub relation_rank: usize,
    pub rank: usize,
}

pub fn degree2_presentation(
    cycles: &[BoundaryCycle],
    betti: &[i64],
) -> Result<Degree2Presentation> {
    let generators = flatten_generators(cycles);
    let rows: Vec<Vec<i64>> = (0..2)
        .map(|coord| generators.iter().map(|g| g.normal[coord]).collect())
        .collect();
    let matrix = IntMatrix::from_i64(
        2,
        generators.len(),
        &rows.iter().flatten().copied().collect::<Vec<_>>(),
    );
    let relation_rank = matrix.rank();
    let rank = generators.len() - relation_rank;
    let (b1, b2) = (betti[1], betti[2]);
    if rank as i64 + 2 * b1 != b2 {
        return Err(Error::Inconsistency(format!(
            "degree-2 rank {rank} plus n*b1 = {} does not match b2 = {b2}",
            2 * b1
        )));
    }
    Ok(Degree2Presentation {
        generators,
        relation_rows: rows,
        relation_rank,
        rank,
    })
}

fn flatten_generators(cycles: &[BoundaryCycle]) -> Vec<TauGenerator> {
    let mut generators = Vec::new();
    for (k, cycle) in cycles.iter().enumerate() {
        for (pos, (&class_id, &normal)) in
            cycle.classes.iter().zip(&cycle.normals).enumerate()
        {
            generators.push(TauGenerator {
                index: generators.len(),
                class_id,
                normal,
                cycle: k,
                position: pos,
            });
        }
    }
    generators
}

/// Basis monomial of the degree-4 module: a square tau_i^2 or an
/// adjacent product tau_i tau_j. Non-adjacent products are zero and are
/// not part of the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Monomial {
    Square(usize),
    Product(usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Degree4Structure {
    pub monomials: Vec<Monomial>,
    pub relation_rank: usize,
    /// Rank of the degree-4 part: #monomials - relation rank = 1 + b1.
    pub rank: usize,
    /// Invariant factors > 1 of the relation lattice.
    pub torsion: Vec<String>,
    /// mu per boundary cycle, as coefficient vectors over `monomials`.
    pub mu: Vec<Vec<i64>>,
    /// Kernel basis mu_1 - mu_k, k = 2.., as coefficient vectors.
    pub kernel_basis: Vec<Vec<i64>>,
}

struct Degree4Module {
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    relations: Vec<Vec<i64>>,
    offsets: Vec<usize>,
}

fn degree4_module(cycles: &[BoundaryCycle]) -> Degree4Module {
    let mut offsets = Vec::with_capacity(cycles.len());
    let mut total = 0;
    for cycle in cycles {
        offsets.push(total);
        total += cycle.len();
    }
    let mut monomials = Vec::new();
    let mut index = BTreeMap::new();
    let mut intern = |m: Monomial, monomials: &mut Vec<Monomial>| -> usize {
        *index.entry(m).or_insert_with(|| {
            monomials.push(m);
            monomials.len() - 1
        })
    };
    for (k, cycle) in cycles.iter().enumerate() {
        let m = cycle.len();
        for pos in 0..m {
            let g = offsets[k] + pos;
            let g_next = offsets[k] + (pos + 1) % m;
            intern(Monomial::Square(g), &mut monomials);
            let (a, b) = (g.min(g_next), g.max(g_next));
            if a != b {
                intern(Monomial::Product(a, b), &mut monomials);
            }
        }
    }
    // relations: 0 = <u,v_{i-1}> t_{i-1} t_i + <u,v_i> t_i^2 + <u,v_{i+1}> t_i t_{i+1}
    let mut relations = Vec::new();
    for (k, cycle) in cycles.iter().enumerate() {
        let m = cycle.len();
        for pos in 0..m {
            let prev = (pos + m - 1) % m;
            let next = (pos + 1) % m;
            for u in [[1i64, 0], [0, 1]] {
                let mut row = vec![0i64; monomials.len()];
                let mut bump = |mono: Monomial, c: i64| {
                    row[index[&mono]] += c;
                };
                let g = offsets[k] + pos;
                let g_prev = offsets[k] + prev;
                let g_next = offsets[k] + next;
                bump(pair_monomial(g_prev, g), dot(u, cycle.normals[prev]));
                bump(Monomial::Square(g), dot(u, cycle.normals[pos]));
                bump(pair_monomial(g, g_next), dot(u, cycle.normals[next]));
                relations.push(row);
            }
        }
    }
    Degree4Module {
        monomials,
        index,
        relations,
        offsets,
    }
}

fn pair_monomial(a: usize, b: usize) -> Monomial {
    if a == b {
        Monomial::Square(a)
    } else {
        Monomial::Product(a.min(b), a.max(b))
    }
}

fn relation_matrix(relations: &[Vec<i64>], width: usize) -> IntMatrix {
    let flat: Vec<i64> = relations.iter().flatten().copied().collect();
    IntMatrix::from_i64(relations.len(), width, &flat)
}

/// True iff `vector` lies in the rational row space of `matrix`.
fn in_row_space(matrix: &IntMatrix, base_rank: usize, vector: &[i64]) -> Result<bool> {
    let extra: Vec<Vec<num_bigint::BigInt>> =
        vec![vector.iter().map(|&c| num_bigint::BigInt::from(c)).collect()];
    Ok(matrix.stack_rows(&extra)?.rank() == base_rank)
}

pub fn degree4_structure(cycles: &[BoundaryCycle], b1: usize) -> Result<Degree4Structure> {
    if cycles.len() != b1 + 1 {
        return Err(Error::Inconsistency(format!(
            "{} boundary circles but b1 = {b1}; expected b1 + 1",
            cycles.len()
        )));
    }
    let module = degree4_module(cycles);
    let width = module.monomials.len();
    let matrix = relation_matrix(&module.relations, width);
    let relation_rank = matrix.rank();
    let rank = width - relation_rank;
    if rank != 1 + b1 {
        return Err(Error::Inconsistency(format!(
            "degree-4 rank {rank} does not match 1 + b1 = {}",
            1 + b1
        )));
    }
    let torsion: Vec<String> = matrix
        .smith_normal_form()
        .into_iter()
        .filter(|d| d > &num_bigint::BigInt::from(1))
        .map(|d| d.to_string())
        .collect();

    // mu per cycle from position 0, well-definedness checked at every
    // position via the determinant identity
    let mut mu = Vec::with_capacity(cycles.len());
    for (k, cycle) in cycles.iter().enumerate() {
        let m = cycle.len();
        let candidate = |pos: usize| -> Vec<i64> {
            let g = module.offsets[k] + pos;
            let g_next = module.offsets[k] + (pos + 1) % m;
            let mut v = vec![0i64; width];
            v[module.index[&pair_monomial(g, g_next)]] +=
                det2(cycle.normals[pos], cycle.normals[(pos + 1) % m]);
            v
        };
        let mu_k = candidate(0);
        for pos in 1..m {
            let diff: Vec<i64> = candidate(pos)
                .iter()
                .zip(&mu_k)
                .map(|(a, b)| a - b)
                .collect();
            if !in_row_space(&matrix, relation_rank, &diff)? {
                return Err(Error::Structural(format!(
                    "mu of boundary circle {k} is not well-defined at position {pos}"
                )));
            }
        }
        mu.push(mu_k);
    }

    // the mu classes span the degree-4 part over Q
    let mu_rows: Vec<Vec<num_bigint::BigInt>> = mu
        .iter()
        .map(|v| v.iter().map(|&c| num_bigint::BigInt::from(c)).collect())
        .collect();
    if matrix.stack_rows(&mu_rows)?.rank() != relation_rank + b1 + 1 {
        return Err(Error::Inconsistency(
            "mu classes do not span the degree-4 part".into(),
        ));
    }

    let kernel_basis: Vec<Vec<i64>> = mu[1..]
        .iter()
        .map(|mk| mu[0].iter().zip(mk).map(|(a, b)| a - b).collect())
        .collect();
    let kernel_rows: Vec<Vec<num_bigint::BigInt>> = kernel_basis
        .iter()
        .map(|v| v.iter().map(|&c| num_bigint::BigInt::from(c)).collect())
        .collect();
    if matrix.stack_rows(&kernel_rows)?.rank() != relation_rank + b1 {
        return Err(Error::Inconsistency(format!(
            "kernel basis rank does not match C(n,2) b1 = {}",
            binomial(2, 2) * b1 as i64
        )));
    }
    Ok(Degree4Structure {
        monomials: module.monomials,
        relation_rank,
        rank,
        torsion,
        mu,
        kernel_basis,
    })
}

/// tau_i^2 expressed in the adjacent products, via the relation with a
/// deterministically chosen covector u with <u, v_i> = 1.
#[derive(Clone, Debug, Serialize)]
pub struct TauSquareExpansion {
    pub generator: usize,
    pub covector: [i64; 2],
    pub prev_product: (usize, usize),
    pub prev_coeff: i64,
    pub next_product: (usize, usize),
    pub next_coeff: i64,
}

pub fn tau_square_expansion(
    cycles: &[BoundaryCycle],
    generator: usize,
) -> Result<TauSquareExpansion> {
    let mut offset = 0;
    for cycle in cycles {
        if generator < offset + cycle.len() {
            let pos = generator - offset;
            let m = cycle.len();
            let prev = (pos + m - 1) % m;
            let next = (pos + 1) % m;
            let u = pairing_one_covector(cycle.normals[pos])?;
            return Ok(TauSquareExpansion {
                generator,
                covector: u,
                prev_product: (offset + prev, offset + pos),
                prev_coeff: -dot(u, cycle.normals[prev]),
                next_product: (offset + pos, offset + next),
                next_coeff: -dot(u, cycle.normals[next]),
            });
        }
        offset += cycle.len();
    }
    Err(Error::Index(format!(
        "generator {generator} of {offset}"
    )))
}

/// The canonical integer covector u with <u, v> = 1 for primitive v:
/// the second coordinate is reduced to the least nonnegative residue
/// modulo |v_1| (taking u = (0, sign(v_2)) when v_1 = 0).
fn pairing_one_covector(v: [i64; 2]) -> Result<[i64; 2]> {
    let [a, b] = v;
    if a == 0 {
        if b.abs() != 1 {
            return Err(Error::Internal(format!("normal {v:?} is not primitive")));
        }
        return Ok([0, b.signum()]);
    }
    let (g, _, y) = ext_gcd(a, b);
    if g.abs() != 1 {
        return Err(Error::Internal(format!("normal {v:?} is not primitive")));
    }
    let mut y = y * g.signum();
    y -= y.div_euclid(a.abs()) * a.abs();
    let x = (1 - b * y) / a;
    Ok([x, y])
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
