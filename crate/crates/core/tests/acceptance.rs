//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the values it checked. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use origami_core::commands::{cmd_homology, cmd_invariants, cmd_ring4d, OutputFormat};
use origami_core::fixtures;
use origami_core::format::{parse_template, serialize_template};
use origami_core::homology::{chain_complex, expected_dual_homology, homology};
use origami_core::invariants::{
    betti_closed_form, betti_inductive, euler_checks, h_from_f, invariant_report,
    h_prime_betti_residual, BettiMode,
};
use origami_core::linalg::IntMatrix;
use origami_core::orbit::build_face_classes;
use origami_core::ring4d::{degree2_presentation, degree4_structure, multifan_2d};
use origami_core::template::{CutMode, OrigamiTemplate};

fn fixture(name: &str) -> OrigamiTemplate {
    fixtures::template(name).unwrap()
}

fn json(cmd: &origami_core::commands::CmdOutput) -> serde_json::Value {
    serde_json::from_str(&cmd.text).unwrap()
}

fn as_i64_vec(v: &serde_json::Value) -> Vec<i64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect()
}

const ACYCLIC_FIXTURES: [&str; 6] = [
    "t_square",
    "t_fold2",
    "t_ring4",
    "t_chain4",
    "t_cube2",
    "t_fig1",
];

const PLANAR_FIXTURES: [&str; 5] = ["t_square", "t_fold2", "t_ring4", "t_chain4", "t_fig1"];

/// Fixture end-to-end on t_ring4: f, h, both Betti vectors, h', h''_1,
/// Dehn-Sommerville residuals, and the restriction ranks, all exact.
#[test]
fn criterion_1_ring4_end_to_end() {
    let out = cmd_invariants("t_ring4", BettiMode::Both, false, OutputFormat::Json);
    assert_eq!(out.exit_code, 0, "{}", out.text);
    let doc = json(&out);
    assert_eq!(as_i64_vec(&doc["f"]), vec![8, 8]);
    assert_eq!(as_i64_vec(&doc["h"]), vec![1, 6, 1]);
    assert_eq!(as_i64_vec(&doc["betti_closed"]), vec![1, 1, 8, 1, 1]);
    assert_eq!(as_i64_vec(&doc["betti_inductive"]), vec![1, 1, 8, 1, 1]);
    assert_eq!(doc["methods_agree"], serde_json::json!(true));
    assert_eq!(as_i64_vec(&doc["h_prime"]), vec![1, 6, 2]);
    assert_eq!(as_i64_vec(&doc["h_double_prime"]), vec![4]);
    assert_eq!(
        as_i64_vec(&doc["dehn_sommerville_residuals"]),
        vec![0, 0, 0]
    );
    assert_eq!(doc["restriction_ranks"]["coker_degree2"], 2);
    assert_eq!(doc["restriction_ranks"]["ker_degree4"], 1);
    println!(
        "criterion 1: PASS - t_ring4 f=(8,8), h=(1,6,1), betti=(1,1,8,1,1) both \
         methods, h'=(1,6,2), h''_1=4, DS residuals 0, coker2=2, ker4=1"
    );
}

/// Homology match against the expected dual profile on the five acyclic
/// fixtures of the criterion, including torsion-freeness.
#[test]
fn criterion_2_homology_match() {
    for name in ["t_square", "t_fold2", "t_ring4", "t_cube2", "t_chain4"] {
        let out = cmd_homology(name, OutputFormat::Json);
        assert_eq!(out.exit_code, 0, "{name}: {}", out.text);
        let doc = json(&out);
        assert_eq!(doc["matches"], serde_json::json!(true), "{name}");
        for degree in doc["computed_torsion"].as_array().unwrap() {
            assert!(degree.as_array().unwrap().is_empty(), "{name} has torsion");
        }
        // the library-level profiles agree degree by degree
        let t = fixture(name);
        let fp = build_face_classes(&t).unwrap();
        let computed = homology(&chain_complex(&fp.order_complex().unwrap(), true).unwrap()).unwrap();
        let expected = expected_dual_homology(t.dim, t.cycle_rank().unwrap()).unwrap();
        assert!(computed.matches(&expected), "{name}");
    }
    println!(
        "criterion 2: PASS - homology matches the expected dual profile with no \
         torsion on t_square, t_fold2, t_ring4, t_cube2, t_chain4"
    );
}

/// Cut coherence on every non-bridge edge of every fixture: the Euler
/// identity and the b1 drop unconditionally, the h-polynomial identity
/// and the Betti recursion relations under the acyclicity hypothesis
/// they carry.
#[test]
fn criterion_3_cut_coherence() {
    let mut cuts_checked = 0;
    for name in fixtures::FIXTURE_NAMES {
        let t = fixture(name);
        let n = t.dim;
        let fp = build_face_classes(&t).unwrap();
        let acyclic = fp.acyclicity().r_min == 1;
        let b1 = t.cycle_rank().unwrap();
        let h = h_from_f(&fp.f_vector(), n).unwrap();

        // chi(M') = chi(M) + 2 chi(B) for every non-bridge edge; this
        // holds without the acyclicity assumption
        let euler = euler_checks(&t).unwrap();
        for cut in &euler.cuts {
            assert_eq!(
                cut.chi_m_prime,
                euler.chi_m + 2 * cut.chi_fold_manifold,
                "{name} edge {}",
                cut.edge
            );
        }

        for e in 0..t.edge_count() {
            if t.is_bridge(e).unwrap() {
                continue;
            }
            cuts_checked += 1;
            let cut = t.cut(e, CutMode::CycleOnly).unwrap();
            assert_eq!(
                cut.template.cycle_rank().unwrap(),
                b1 - 1,
                "{name} edge {e}: b1 must drop by exactly 1"
            );
            if !acyclic {
                continue;
            }
            let sub_fp = build_face_classes(&cut.template).unwrap();
            let sub_h = h_from_f(&sub_fp.f_vector(), n).unwrap();

            // cut identity: h_{M'/T}(t) = h_{M/T}(t) + (t+1) h_F(t) - (t-1)^n
            let hf = &cut.folded_facet_h;
            for degree in 0..=n {
                // coefficient of t^(n-degree) on both sides, i.e. index
                // `degree` of the h-vectors
                let mut rhs = h[degree];
                // (t+1) h_F(t): h_F(t) = sum hf_i t^(n-1-i)
                // t * h_F contributes hf_i at power n-i  -> index degree
                // 1 * h_F contributes hf_i at power n-1-i -> index degree-1
                if degree < n {
                    rhs += hf[degree];
                }
                if degree >= 1 {
                    rhs += hf[degree - 1];
                }
                // -(t-1)^n: coefficient of t^(n-degree) is -C(n,degree)(-1)^degree
                let sign = if degree % 2 == 0 { 1 } else { -1 };
                rhs -= sign * origami_core::invariants::binomial(n, degree);
                assert_eq!(sub_h[degree], rhs, "{name} edge {e} h-identity at {degree}");
            }

            // recursion relations: b_{2i}(M') = b_{2i}(M) + h_i(F) + h_{i-1}(F)
            let b = betti_closed_form(&h, b1, n).unwrap();
            let sub_b = betti_closed_form(&sub_h, b1 - 1, n).unwrap();
            for i in 1..n {
                assert_eq!(
                    sub_b[2 * i],
                    b[2 * i] + hf[i] + hf[i - 1],
                    "{name} edge {e} Betti relation at 2i={}",
                    2 * i
                );
            }
            for i in 1..n.saturating_sub(1) {
                assert_eq!(sub_b[2 * i + 1], 0, "{name} edge {e} odd vanishing");
            }
        }
    }
    assert!(cuts_checked >= 12);
    println!(
        "criterion 3: PASS - Euler identity and b1 drop on all {cuts_checked} \
         non-bridge cuts; the h-polynomial identity and the Betti recursion \
         relations exact on every acyclic-faces cut"
    );
}

/// Ring presentation: ranks and kernel on t_ring4 and t_square, and the
/// product-fan ring template's relations and vanishing squares.
#[test]
fn criterion_4_ring_presentation() {
    let ring = json(&{
        let out = cmd_ring4d("t_ring4", OutputFormat::Json);
        assert_eq!(out.exit_code, 0, "{}", out.text);
        out
    });
    assert_eq!(ring["degree2_rank"], 6);
    assert_eq!(ring["degree4_rank"], 2);
    assert_eq!(ring["kernel_rank"], 1);
    assert_eq!(ring["kernel_basis"].as_array().unwrap().len(), 1);
    assert_eq!(ring["mu"].as_array().unwrap().len(), 2);

    let square = json(&{
        let out = cmd_ring4d("t_square", OutputFormat::Json);
        assert_eq!(out.exit_code, 0, "{}", out.text);
        out
    });
    assert_eq!(square["degree2_rank"], 2);
    assert_eq!(square["degree4_rank"], 1);
    assert_eq!(square["kernel_rank"], 0);

    // the seventh fixture carries the product-fan normals v, w, -v, -w
    // on each circle; relations say tau_a + tau_c = tau_b + tau_d pairing
    // the two circles, and every tau_i^2 vanishes
    let cycles = multifan_2d(&fixture("t_fig1")).unwrap();
    assert_eq!(cycles.len(), 2);
    for cycle in &cycles {
        let set: std::collections::BTreeSet<[i64; 2]> = cycle.normals.iter().copied().collect();
        assert_eq!(
            set,
            [[1, 0], [0, 1], [-1, 0], [0, -1]].into_iter().collect()
        );
    }
    let fig1 = json(&{
        let out = cmd_ring4d("t_fig1", OutputFormat::Json);
        assert_eq!(out.exit_code, 0, "{}", out.text);
        out
    });
    for row in fig1["degree2_relations"].as_array().unwrap() {
        let row = as_i64_vec(row);
        // one +1 and one -1 among generators 0..4, same among 4..8
        let (first, second) = row.split_at(4);
        for half in [first, second] {
            let mut nonzero: Vec<i64> = half.iter().copied().filter(|&c| c != 0).collect();
            nonzero.sort_unstable();
            assert_eq!(nonzero, vec![-1, 1]);
        }
    }
    for tau in fig1["tau_squares"].as_array().unwrap() {
        assert_eq!(tau["expression"], "0");
    }
    assert_eq!(fig1["degree2_rank"], 6);
    assert_eq!(fig1["degree4_rank"], 2);
    assert_eq!(fig1["kernel_rank"], 1);
    println!(
        "criterion 4: PASS - t_ring4 ranks (6, 2) with kernel basis mu_1 - mu_2; \
         t_square ranks (2, 1) with empty kernel; t_fig1 reproduces \
         the paired degree-2 relations and tau_i^2 = 0 verbatim"
    );
}

/// Relaxed mode: t_prismring reports r_min = 2 and refuses the full
/// Betti computation without --relaxed.
#[test]
fn criterion_5_relaxed_mode() {
    let refused = cmd_invariants("t_prismring", BettiMode::Both, false, OutputFormat::Text);
    assert_eq!(refused.exit_code, 1);
    assert!(refused.text.contains("--relaxed"), "{}", refused.text);

    let relaxed = cmd_invariants("t_prismring", BettiMode::Both, true, OutputFormat::Json);
    assert_eq!(relaxed.exit_code, 0, "{}", relaxed.text);
    let doc = json(&relaxed);
    assert_eq!(doc["r_min"], 2);
    assert_eq!(doc["relaxed"]["r_min"], 2);
    assert!(doc.get("betti_closed").is_none());
    assert!(doc.get("betti_inductive").is_none());
    assert!(doc["relaxed"]["odd_vanishing"].as_array().unwrap().is_empty());
    assert!(doc["relaxed"]["cut_relations"].as_array().unwrap().is_empty());
    println!(
        "criterion 5: PASS - t_prismring refused without --relaxed (exit 1) and \
         reports r_min=2 with empty constraint ranges under --relaxed"
    );
}

/// Property suites: method agreement, duality and odd vanishing, the
/// h'-vs-Betti residual, the SNF oracle on 1000 random matrices, and the
/// parse/serialize round trip.
#[test]
fn criterion_6_property_suites() {
    // (a) closed form vs inductive on all acyclic fixtures
    for name in ACYCLIC_FIXTURES {
        let t = fixture(name);
        let fp = build_face_classes(&t).unwrap();
        let h = h_from_f(&fp.f_vector(), t.dim).unwrap();
        let closed = betti_closed_form(&h, t.cycle_rank().unwrap(), t.dim).unwrap();
        let inductive = betti_inductive(&t).unwrap();
        assert_eq!(closed, inductive, "{name}");

        // (b) Poincare duality and odd vanishing on every Betti output
        let n = t.dim;
        for b in [&closed, &inductive] {
            for j in 0..=2 * n {
                assert_eq!(b[j], b[2 * n - j], "{name} duality at {j}");
            }
            for i in 1..n.saturating_sub(1) {
                assert_eq!(b[2 * i + 1], 0, "{name} odd vanishing at {i}");
            }
        }

        // (c) h'-vs-Betti residual identically zero
        let report = invariant_report(&t, BettiMode::Closed, false).unwrap();
        let residual = h_prime_betti_residual(
            report.h_prime.as_ref().unwrap(),
            &closed,
            t.cycle_rank().unwrap(),
            n,
        );
        assert!(residual.iter().all(|&r| r == 0), "{name}: {residual:?}");
    }

    // (d) SNF divisibility chain and the minor-gcd oracle, 1000 cases
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                subsets(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        fn det(m: &[Vec<BigInt>]) -> BigInt {
            let n = m.len();
            if n == 0 {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<BigInt>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[i][c].clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * det(&sub);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        subsets(m.rows(), k, 0, &mut Vec::new(), &mut rows);
        subsets(m.cols(), k, 0, &mut Vec::new(), &mut cols);
        let mut g = BigInt::zero();
        for rs in &rows {
            for cs in &cols {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m.at(r, c).clone()).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        g
    }
    let mut rng = StdRng::seed_from_u64(2026);
    for _ in 0..1000 {
        let r = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=3);
        let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-9..=9)).collect();
        let m = IntMatrix::from_i64(r, c, &entries);
        let factors = m.smith_normal_form();
        for w in factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "not a divisibility chain");
        }
        let mut prod = BigInt::one();
        for (k, d) in factors.iter().enumerate() {
            prod *= d;
            assert_eq!(prod, minor_gcd(&m, k + 1), "minor gcd mismatch");
        }
        assert_eq!(factors.len(), m.rank());
    }

    // (e) parse -> serialize -> parse identity on every fixture
    for name in fixtures::FIXTURE_NAMES {
        let source = fixtures::fixture_source(name).unwrap();
        let (a, _) = parse_template(source).unwrap();
        let text = serialize_template(&a).unwrap();
        let (b, _) = parse_template(&text).unwrap();
        assert_eq!(a.dim, b.dim, "{name}");
        assert_eq!(a.edges, b.edges, "{name}");
        assert_eq!(a.polytopes.len(), b.polytopes.len(), "{name}");
        for (p, q) in a.polytopes.iter().zip(&b.polytopes) {
            assert_eq!(p.label, q.label, "{name}");
            assert_eq!(p.facets, q.facets, "{name}");
        }
        assert_eq!(text, serialize_template(&b).unwrap(), "{name}");
    }
    println!(
        "criterion 6: PASS - (a) method agreement, (b) duality and odd vanishing, \
         (c) h'-vs-Betti residual zero, (d) SNF divisibility + minor-gcd oracle on \
         1000 random matrices, (e) round-trip identity on all fixtures"
    );
}

/// Internal consistency: degree-2 rank + n*b1 = b2 and degree-4 rank =
/// h'_2 on every planar fixture.
#[test]
fn criterion_7_rank_accounting() {
    for name in PLANAR_FIXTURES {
        let t = fixture(name);
        let b1 = t.cycle_rank().unwrap();
        let fp = build_face_classes(&t).unwrap();
        let h = h_from_f(&fp.f_vector(), 2).unwrap();
        let betti = betti_closed_form(&h, b1, 2).unwrap();
        let cycles = multifan_2d(&t).unwrap();
        let d2 = degree2_presentation(&cycles, &betti).unwrap();
        assert_eq!(
            d2.rank as i64 + 2 * b1 as i64,
            betti[2],
            "{name}: degree-2 accounting"
        );
        let d4 = degree4_structure(&cycles, b1).unwrap();
        let report = invariant_report(&t, BettiMode::Closed, false).unwrap();
        assert_eq!(
            d4.rank as i64,
            report.h_prime.unwrap()[2],
            "{name}: degree-4 rank vs h'_2"
        );
    }
    println!(
        "criterion 7: PASS - degree-2 rank + n*b1 = b2 and degree-4 rank = h'_2 \
         on t_square, t_fold2, t_ring4, t_chain4, t_fig1"
    );
}
