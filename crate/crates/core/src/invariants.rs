//! Numeric invariants of an origami template: f/h/h'/h'' vectors, Betti
//! numbers by the closed form and by the cut recursion, Euler and
//! Dehn-Sommerville checks, the equivariant Poincare series, restriction
//! rank bookkeeping, and the relaxed report for non-acyclic faces.
//!
//! Every generating-function identity is evaluated as exact integer
//! polynomial arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{chain_complex, homology, HomologyProfile};
use crate::orbit::{build_face_classes, FacePoset};
use crate::template::{CutMode, OrigamiTemplate};

/// Integer polynomials as ascending coefficient vectors.
pub(crate) mod poly {
    pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] += c;
        }
        out
    }

    #[cfg(test)]
    pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
        add(a, &b.iter().map(|&c| -c).collect::<Vec<_>>())
    }

    pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn scale(a: &[i64], k: i64) -> Vec<i64> {
        a.iter().map(|&c| c * k).collect()
    }

    pub fn pow(base: &[i64], mut k: usize) -> Vec<i64> {
        let mut out = vec![1];
        while k > 0 {
            out = mul(&out, base);
            k -= 1;
        }
        out
    }

    pub fn coeff(a: &[i64], i: usize) -> i64 {
        a.get(i).copied().unwrap_or(0)
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out = 1i64;
    for i in 0..k {
        out = out * (n - i) as i64 / (i + 1) as i64;
    }
    out
}

/// The h-vector of an f-vector at the given rank:
/// sum_i h_i t^(rank-i) = (t-1)^rank + sum_i f_i (t-1)^(rank-1-i).
pub fn h_from_f(f: &[i64], rank: usize) -> Result<Vec<i64>> {
    if f.len() != rank {
        return Err(Error::Dimension(format!(
            "f-vector has {} entries, rank {rank} needs exactly {rank}",
            f.len()
        )));
    }
    let t_minus_1 = [-1i64, 1];
    let mut p = poly::pow(&t_minus_1, rank);
    for (i, &fi) in f.iter().enumerate() {
        p = poly::add(&p, &poly::scale(&poly::pow(&t_minus_1, rank - 1 - i), fi));
    }
    Ok((0..=rank).map(|i| poly::coeff(&p, rank - i)).collect())
}

/// h-polynomial coefficients ascending in t: h_Q(t) = sum h_i t^(rank-i).
pub fn h_polynomial(h: &[i64]) -> Vec<i64> {
    h.iter().rev().copied().collect()
}

/// Closed-form Betti numbers: even part b_{2i} = h_i - (-1)^i C(n,i) b1
/// for 0 < i < n and b_{2n} = h_n + (1 - (-1)^n) b1; odd part b1 in
/// degrees 1 and 2n-1 only.
pub fn betti_closed_form(h: &[i64], b1: usize, n: usize) -> Result<Vec<i64>> {
    if n < 2 || h.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "h-vector of length {} with n = {n}",
            h.len()
        )));
    }
    let b1 = b1 as i64;
    let mut b = vec![0i64; 2 * n + 1];
    b[0] = h[0];
    for i in 1..n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        b[2 * i] = h[i] - sign * binomial(n, i) * b1;
    }
    let parity = if n % 2 == 0 { 1 } else { -1 };
    b[2 * n] = h[n] + (1 - parity) * b1;
    b[1] = b1;
    b[2 * n - 1] = b1;
    if let Some(bad) = b.iter().position(|&x| x < 0) {
        return Err(Error::Inconsistency(format!(
            "closed-form Betti number b_{bad} is negative; the input is not \
             a valid acyclic-faces template"
        )));
    }
    Ok(b)
}

/// Betti numbers by the cut recursion: cut the lowest-id non-bridge edge,
/// compute the smaller manifold, and invert
/// b_{2i}(M') = b_{2i}(M) + h_i(F) + h_{i-1}(F). Tree templates seed the
/// recursion with b_{2i} = h_i of the glued orbit space.
pub fn betti_inductive(t: &OrigamiTemplate) -> Result<Vec<i64>> {
    let fp = build_face_classes(t)?;
    betti_inductive_with(t, &fp)
}

fn betti_inductive_with(t: &OrigamiTemplate, fp: &FacePoset) -> Result<Vec<i64>> {
    let ac = fp.acyclicity();
    if ac.r_min > 1 {
        return Err(Error::Precondition(format!(
            "proper faces of codimension < {} are not acyclic; only the relaxed \
             report applies",
            ac.r_min
        )));
    }
    if !t.is_coorientable() || !t.is_orientable() {
        return Err(Error::Precondition(
            "Betti computation needs a coorientable, orientable template".into(),
        ));
    }
    let n = t.dim;
    let b1 = t.cycle_rank()?;
    if b1 == 0 {
        let h = h_from_f(&fp.f_vector(), n)?;
        let mut b = vec![0i64; 2 * n + 1];
        for (i, &hi) in h.iter().enumerate() {
            b[2 * i] = hi;
        }
        return Ok(b);
    }
    let edge = t
        .lowest_non_bridge_edge()?
        .ok_or_else(|| Error::Internal("positive cycle rank but no cycle edge".into()))?;
    let cut = t.cut(edge, CutMode::CycleOnly)?;
    let sub_fp = build_face_classes(&cut.template)?;
    let sub = betti_inductive_with(&cut.template, &sub_fp)?;
    let hf = &cut.folded_facet_h;
    let mut b = vec![0i64; 2 * n + 1];
    b[0] = 1;
    b[2 * n] = 1;
    b[1] = b1 as i64;
    b[2 * n - 1] = b1 as i64;
    for i in 1..n {
        b[2 * i] = sub[2 * i] - hf[i] - hf[i - 1];
        if b[2 * i] < 0 {
            return Err(Error::Inconsistency(format!(
                "inductive Betti number b_{} is negative",
                2 * i
            )));
        }
    }
    Ok(b)
}

/// Schenzel correction: h'_j = h_j + C(n,j) sum_{i=-1}^{j-2} (-1)^{j-i}
/// dim H~_i(Delta), with H~_{-1} = 0 for nonempty complexes.
pub fn schenzel_h_prime(
    h: &[i64],
    dual_homology: &HomologyProfile,
    n: usize,
) -> Result<(Vec<i64>, Vec<String>)> {
    if h.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "h-vector of length {} with n = {n}",
            h.len()
        )));
    }
    let mut warnings = Vec::new();
    if !dual_homology.torsion_free() {
        warnings.push(
            "dual homology has torsion; the Schenzel correction used free ranks \
             only and is field-dependent"
                .into(),
        );
    }
    let reduced = |i: isize| -> i64 {
        if i < 0 {
            0
        } else {
            dual_homology.betti_at(i as usize)
        }
    };
    let mut h_prime = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut correction = 0i64;
        for i in -1..=(j as isize - 2) {
            let sign = if (j as isize - i) % 2 == 0 { 1 } else { -1 };
            correction += sign * reduced(i);
        }
        h_prime.push(h[j] + binomial(n, j) * correction);
    }
    Ok((h_prime, warnings))
}

/// h''_j = h'_j - C(n,j) dim H~_{j-1}(Delta) for 1 <= j <= n-1; the
/// result must be nonnegative and symmetric. Index k holds j = k+1.
pub fn h_double_prime(
    h_prime: &[i64],
    dual_homology: &HomologyProfile,
    n: usize,
) -> Result<Vec<i64>> {
    if n < 2 || h_prime.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "h'-vector of length {} with n = {n}",
            h_prime.len()
        )));
    }
    let mut out = Vec::with_capacity(n - 1);
    for j in 1..n {
        let v = h_prime[j] - binomial(n, j) * dual_homology.betti_at(j - 1);
        if v < 0 {
            return Err(Error::Inconsistency(format!("h''_{j} = {v} is negative")));
        }
        out.push(v);
    }
    for j in 1..n {
        if out[j - 1] != out[n - j - 1] {
            return Err(Error::Inconsistency(format!(
                "h'' is not symmetric: h''_{j} = {} but h''_{} = {}",
                out[j - 1],
                n - j,
                out[n - j - 1]
            )));
        }
    }
    Ok(out)
}

/// Residuals of the generalized Dehn-Sommerville relations:
/// h_{n-i} - h_i - (-1)^i (chi(boundary) - chi(S^{n-1})) C(n,i).
pub fn dehn_sommerville_residuals(h: &[i64], chi_boundary: i64, n: usize) -> Vec<i64> {
    let chi_sphere = if (n - 1) % 2 == 0 { 2 } else { 0 };
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            h[n - i] - h[i] - sign * (chi_boundary - chi_sphere) * binomial(n, i)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerCutCheck {
    pub edge: usize,
    pub chi_m_prime: i64,
    pub chi_fold_manifold: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub chi_m: i64,
    pub chi_boundary: i64,
    pub vertex_classes: i64,
    pub cuts: Vec<EulerCutCheck>,
}

/// Euler characteristic bookkeeping. chi(M) is the fixed-point count,
/// i.e. the number of vertex classes; the h-sum must reproduce it, the
/// Betti alternating sum must as well whenever the Betti vector exists,
/// and every non-bridge cut must satisfy chi(M') = chi(M) + 2 chi(B)
/// with chi(B) the folded facet's h-sum. The cut identity holds without
/// any acyclicity assumption.
pub fn euler_checks(t: &OrigamiTemplate) -> Result<EulerReport> {
    let fp = build_face_classes(t)?;
    let n = t.dim;
    let b1 = t.cycle_rank()?;
    let f = fp.f_vector();
    let h = h_from_f(&f, n)?;
    let vertex_classes = f[n - 1];
    let chi_m: i64 = h.iter().sum();
    if chi_m != vertex_classes {
        return Err(Error::Inconsistency(format!(
            "sum of h = {chi_m} but the orbit space has {vertex_classes} vertex classes"
        )));
    }
    if fp.acyclicity().r_min == 1 && t.is_coorientable() && t.is_orientable() {
        let betti = betti_closed_form(&h, b1, n)?;
        let alternating: i64 = betti
            .iter()
            .enumerate()
            .map(|(j, &b)| if j % 2 == 0 { b } else { -b })
            .sum();
        if alternating != chi_m {
            return Err(Error::Inconsistency(format!(
                "chi(M) from Betti numbers is {alternating}, fixed points give {chi_m}"
            )));
        }
    }
    let mut cuts = Vec::new();
    for e in 0..t.edge_count() {
        if t.is_bridge(e)? {
            continue;
        }
        let cut = t.cut(e, CutMode::CycleOnly)?;
        let sub_fp = build_face_classes(&cut.template)?;
        let sub_f = sub_fp.f_vector();
        let chi_m_prime = sub_f[n - 1];
        let chi_fold: i64 = cut.folded_facet_h.iter().sum();
        if chi_m_prime != chi_m + 2 * chi_fold {
            return Err(Error::Inconsistency(format!(
                "cut of edge {e}: chi(M') = {chi_m_prime} but chi(M) + 2 chi(B) = {}",
                chi_m + 2 * chi_fold
            )));
        }
        cuts.push(EulerCutCheck {
            edge: e,
            chi_m_prime,
            chi_fold_manifold: chi_fold,
        });
    }
    Ok(EulerReport {
        chi_m,
        chi_boundary: fp.boundary_euler_characteristic(),
        vertex_classes,
        cuts,
    })
}

/// Rank of the degree-d equivariant cohomology: even degrees 2i carry the
/// coefficient of t^i in (sum_j h_j t^j) / (1-t)^n, degree 1 carries b1,
/// all other odd degrees vanish.
pub fn equivariant_poincare_series(h: &[i64], b1: usize, n: usize, degree_cap: usize) -> Vec<i64> {
    (0..=degree_cap)
        .map(|d| {
            if d == 1 {
                b1 as i64
            } else if d % 2 == 1 {
                0
            } else {
                let i = d / 2;
                (0..=i.min(n))
                    .map(|j| h[j] * binomial(n - 1 + i - j, n - 1))
                    .sum()
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionRanks {
    /// Rank of the cokernel of the restriction in degree 2: n * b1.
    pub coker_degree2: i64,
    /// Rank of the kernel in degree 4: C(n,2) * b1.
    pub ker_degree4: i64,
    pub iso_note: String,
}

pub fn restriction_rank_report(b1: usize, n: usize) -> RestrictionRanks {
    RestrictionRanks {
        coker_degree2: (n * b1) as i64,
        ker_degree4: binomial(n, 2) * b1 as i64,
        iso_note: format!(
            "restriction map is an isomorphism except in degrees 2, 4 and {}; \
             injective in degrees 2 and {}; surjective in degree 4",
            2 * n - 1,
            2 * n - 1
        ),
    }
}

/// Residual of sum h'_i t^i = sum b_{2i} t^i - n b1 t + C(n,2) b1 t^2;
/// identically zero ties the Schenzel formula, the homology engine and
/// the closed-form Betti numbers together.
pub fn h_prime_betti_residual(h_prime: &[i64], betti: &[i64], b1: usize, n: usize) -> Vec<i64> {
    let b1 = b1 as i64;
    (0..=n)
        .map(|i| {
            let mut rhs = betti[2 * i];
            if i == 1 {
                rhs -= (n as i64) * b1;
            }
            if i == 2 {
                rhs += binomial(n, 2) * b1;
            }
            h_prime[i] - rhs
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CutRelation {
    pub edge: usize,
    /// Degree index i of the relation b_{2i}(M') = b_{2i}(M) + h_i(F) + h_{i-1}(F).
    pub degree: usize,
    pub fold_h_sum: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelaxedReport {
    pub r_min: usize,
    /// (class id, gluing cycle rank) of every non-acyclic proper class.
    pub non_acyclic_classes: Vec<(usize, usize)>,
    /// i values with b_{2i+1}(M) = 0 guaranteed: r <= i <= n-r-1.
    pub odd_vanishing: Vec<usize>,
    /// Cut relations valid for r <= i <= n-r, one per non-bridge edge.
    pub cut_relations: Vec<CutRelation>,
}

/// The partial information available when some proper face of codim
/// < r_min fails acyclicity: the odd-vanishing window and the cut
/// relations, nothing more.
pub fn relaxed_report(t: &OrigamiTemplate) -> Result<RelaxedReport> {
    let fp = build_face_classes(t)?;
    let ac = fp.acyclicity();
    let n = t.dim;
    let r = ac.r_min;
    let odd_vanishing: Vec<usize> =
        if n > 2 * r { (r..=n - r - 1).collect() } else { Vec::new() };
    let mut cut_relations = Vec::new();
    if n >= 2 * r {
        for e in 0..t.edge_count() {
            if t.is_bridge(e)? {
                continue;
            }
            let end = t.edges[e].ends[0];
            let hf = t.polytopes[end.vertex].facet_h_vector(end.facet)?;
            for i in r..=n - r {
                cut_relations.push(CutRelation {
                    edge: e,
                    degree: i,
                    fold_h_sum: hf[i] + hf[i - 1],
                });
            }
        }
    }
    Ok(RelaxedReport {
        r_min: r,
        non_acyclic_classes: ac.non_acyclic,
        odd_vanishing,
        cut_relations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BettiMode {
    Closed,
    Inductive,
    Both,
}

/// Everything the invariants command reports.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub b1: usize,
    pub coorientable: bool,
    pub orientable: bool,
    pub r_min: usize,
    pub f: Vec<i64>,
    pub h: Vec<i64>,
    /// Alternating face-class count; equals chi of the boundary exactly
    /// when all proper face classes are acyclic, so it is omitted in
    /// relaxed mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_boundary: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti_closed: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti_inductive: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub methods_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_homology: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_prime: Option<Vec<i64>>,
    /// h''_j for j = 1..n-1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_double_prime: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dehn_sommerville_residuals: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction_ranks: Option<RestrictionRanks>,
    /// Ranks of H^d_T(M) for d = 0..2n.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivariant_series: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_prime_betti_residual: Option<Vec<i64>>,
    /// Edges off the deterministic spanning tree; their dual classes
    /// freely generate degree-1 cohomology with all products trivial.
    pub degree1_generator_edges: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relaxed: Option<RelaxedReport>,
    pub warnings: Vec<String>,
}

/// Assemble the full report. With `allow_relaxed` unset, templates whose
/// r_min exceeds 1 are rejected with guidance; set, they get the partial
/// relaxed report instead of Betti data.
pub fn invariant_report(
    t: &OrigamiTemplate,
    mode: BettiMode,
    allow_relaxed: bool,
) -> Result<InvariantReport> {
    let fp = build_face_classes(t)?;
    let n = t.dim;
    let b1 = t.cycle_rank()?;
    let ac = fp.acyclicity();
    let f = fp.f_vector();
    let h = h_from_f(&f, n)?;
    let chi_boundary = fp.boundary_euler_characteristic();
    let mut report = InvariantReport {
        n,
        b1,
        coorientable: t.is_coorientable(),
        orientable: t.is_orientable(),
        r_min: ac.r_min,
        f,
        h: h.clone(),
        chi_boundary: None,
        betti_closed: None,
        betti_inductive: None,
        methods_agree: None,
        dual_homology: None,
        h_prime: None,
        h_double_prime: None,
        dehn_sommerville_residuals: None,
        chi_m: None,
        restriction_ranks: None,
        equivariant_series: None,
        h_prime_betti_residual: None,
        degree1_generator_edges: t.cycle_edge_basis()?,
        relaxed: None,
        warnings: Vec::new(),
    };

    if ac.r_min > 1 {
        if !allow_relaxed {
            return Err(Error::Precondition(format!(
                "proper faces of codimension < {} are not acyclic, so the Betti \
                 numbers are not determined; re-run with --relaxed for the \
                 partial report",
                ac.r_min
            )));
        }
        report.relaxed = Some(relaxed_report(t)?);
        return Ok(report);
    }
    if !report.coorientable || !report.orientable {
        return Err(Error::Precondition(
            "invariant computation needs a coorientable, orientable template".into(),
        ));
    }

    report.chi_boundary = Some(chi_boundary);
    let closed = betti_closed_form(&h, b1, n)?;
    let betti = closed.clone();
    match mode {
        BettiMode::Closed => report.betti_closed = Some(closed),
        BettiMode::Inductive => report.betti_inductive = Some(betti_inductive(t)?),
        BettiMode::Both => {
            let inductive = betti_inductive(t)?;
            report.methods_agree = Some(closed == inductive);
            report.betti_closed = Some(closed);
            report.betti_inductive = Some(inductive);
        }
    }

    let oc = fp.order_complex()?;
    let dual = homology(&chain_complex(&oc, true)?)?;
    if !dual.torsion_free() {
        report
            .warnings
            .push("dual poset homology has torsion".into());
    }
    let (h_prime, mut warnings) = schenzel_h_prime(&h, &dual, n)?;
    report.warnings.append(&mut warnings);
    report.h_double_prime = Some(h_double_prime(&h_prime, &dual, n)?);
    report.dual_homology = Some(dual.betti.clone());
    report.dehn_sommerville_residuals = Some(dehn_sommerville_residuals(&h, chi_boundary, n));
    let euler = euler_checks(t)?;
    report.chi_m = Some(euler.chi_m);
    report.restriction_ranks = Some(restriction_rank_report(b1, n));
    report.equivariant_series = Some(equivariant_poincare_series(&h, b1, n, 2 * n));
    report.h_prime_betti_residual = Some(h_prime_betti_residual(&h_prime, &betti, b1, n));
    report.h_prime = Some(h_prime);
    Ok(report)
}
