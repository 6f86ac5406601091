//! Integer simplicial homology of the order complex via boundary
//! matrices and Smith normal form.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::orbit::OrderComplex;

/// Boundary matrices of a simplicial complex. `boundaries[k]` maps
/// k-chains to (k-1)-chains; index 0 holds the augmentation when the
/// complex is reduced, otherwise an empty `0 x dims[0]` matrix.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
    pub reduced: bool,
}

/// Free rank and torsion coefficients per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub betti: Vec<i64>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    pub fn torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    pub fn betti_at(&self, degree: usize) -> i64 {
        self.betti.get(degree).copied().unwrap_or(0)
    }

    /// Equal free ranks (padded with zeros) and equal torsion.
    pub fn matches(&self, other: &HomologyProfile) -> bool {
        let degrees = self.betti.len().max(other.betti.len());
        for d in 0..degrees {
            if self.betti_at(d) != other.betti_at(d) {
                return false;
            }
            let ta = self.torsion.get(d).map_or(&[] as &[BigInt], Vec::as_slice);
            let tb = other.torsion.get(d).map_or(&[] as &[BigInt], Vec::as_slice);
            if ta != tb {
                return false;
            }
        }
        true
    }

    /// Alternating sum of free ranks; reduced Euler characteristic for
    /// reduced input.
    pub fn euler(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b } else { -b })
            .sum()
    }
}

/// Boundary matrices of the order complex, simplices oriented by the
/// global class-id order with alternating deleted-position signs.
pub fn chain_complex(oc: &OrderComplex, reduced: bool) -> Result<ChainComplex> {
    let dims: Vec<usize> = oc.simplices.iter().map(Vec::len).collect();
    let mut boundaries = Vec::with_capacity(dims.len());
    if dims.is_empty() {
        return Ok(ChainComplex {
            dims,
            boundaries,
            reduced,
        });
    }
    if reduced {
        let ones = vec![BigInt::one(); dims[0]];
        boundaries.push(IntMatrix::new(1, dims[0], ones)?);
    } else {
        boundaries.push(IntMatrix::zeros(0, dims[0]));
    }
    for k in 1..dims.len() {
        let lower = &oc.simplices[k - 1];
        let index_of = |simplex: &[usize]| -> Result<usize> {
            lower
                .binary_search_by(|probe| probe.as_slice().cmp(simplex))
                .map_err(|_| Error::Internal("boundary face missing from complex".into()))
        };
        let mut matrix = IntMatrix::zeros(dims[k - 1], dims[k]);
        for (col, simplex) in oc.simplices[k].iter().enumerate() {
            for drop in 0..simplex.len() {
                let mut face: Vec<usize> = simplex.clone();
                face.remove(drop);
                let row = index_of(&face)?;
                let sign = if drop % 2 == 0 { 1i64 } else { -1 };
                matrix.set(row, col, BigInt::from(sign));
            }
        }
        boundaries.push(matrix);
    }
    for k in 1..boundaries.len() {
        if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
            return Err(Error::Internal(format!(
                "boundary composition nonzero in degree {k}"
            )));
        }
    }
    Ok(ChainComplex {
        dims,
        boundaries,
        reduced,
    })
}

/// Betti numbers and torsion via Smith normal form. Each boundary's
/// normal form is computed once and provides both the rank it consumes
/// below and the torsion it leaves above. (Smith reduction also keeps
/// entries small on these near-unimodular matrices, where fraction-free
/// rank elimination would blow coefficients up to minor size.)
pub fn homology(cc: &ChainComplex) -> Result<HomologyProfile> {
    let degrees = cc.dims.len();
    let snfs: Vec<Vec<BigInt>> = cc
        .boundaries
        .iter()
        .map(IntMatrix::smith_normal_form)
        .collect();
    let mut betti = Vec::with_capacity(degrees);
    let mut torsion = Vec::with_capacity(degrees);
    for i in 0..degrees {
        let rank_in = snfs[i].len();
        let rank_out = if i + 1 < degrees { snfs[i + 1].len() } else { 0 };
        let b = cc.dims[i] as i64 - rank_in as i64 - rank_out as i64;
        if b < 0 {
            return Err(Error::Internal(format!(
                "negative Betti number in degree {i}"
            )));
        }
        betti.push(b);
        let factors = if i + 1 < degrees {
            snfs[i + 1]
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        torsion.push(factors);
    }
    Ok(HomologyProfile { betti, torsion })
}

/// The reduced homology of the dual poset realization when every proper
/// face is acyclic: a sphere connect-summed with b1 copies of S^1 x
/// S^(n-2), split by dimension.
pub fn expected_dual_homology(n: usize, b1: usize) -> Result<HomologyProfile> {
    if n < 2 {
        return Err(Error::Dimension(format!(
            "expected dual homology needs n >= 2, got {n}"
        )));
    }
    let b1 = b1 as i64;
    let mut betti = vec![0i64; n];
    match n {
        2 => {
            betti[0] = b1;
            betti[1] = b1 + 1;
        }
        3 => {
            betti[1] = 2 * b1;
            betti[2] = 1;
        }
        _ => {
            betti[1] = b1;
            betti[n - 2] = b1;
            betti[n - 1] = 1;
        }
    }
    Ok(HomologyProfile {
        betti,
        torsion: vec![Vec::new(); n],
    })
}
