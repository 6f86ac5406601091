//! Command implementations behind the CLI binary. Each command returns
//! its exit code and rendered output; rendering is byte-deterministic
//! for a given input file and flag set.
//!
//! Exit codes: 0 ok, 1 domain failure, 2 unreadable/unparseable input,
//! 3 capability (operation not available in this dimension).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::format::{parse_template, serialize_template};
use crate::homology::{chain_complex, expected_dual_homology, homology};
use crate::invariants::{self, BettiMode, InvariantReport};
use crate::orbit::build_face_classes;
use crate::ring4d::{
    degree2_presentation, degree4_structure, multifan_from_poset, tau_square_expansion, Monomial,
};
use crate::template::{CutMode, OrigamiTemplate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug)]
pub struct CmdOutput {
    pub exit_code: i32,
    pub text: String,
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Capability(_) => 3,
        _ => 1,
    }
}

fn failure(e: &Error, format: OutputFormat) -> CmdOutput {
    let text = match format {
        OutputFormat::Text => format!("error: {e}\n"),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ErrorDoc {
                error: String,
            }
            render_json(&ErrorDoc {
                error: e.to_string(),
            })
        }
    };
    CmdOutput {
        exit_code: exit_code_for(e),
        text,
    }
}

fn render_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serialization");
    out.push('\n');
    out
}

fn vec_text(v: &[i64]) -> String {
    let items: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", items.join(", "))
}

/// Resolve a command-line input: an existing path, a file under
/// ORIGAMI_FIXTURE_DIR, or a built-in fixture name.
pub fn resolve_input(path: &str) -> Result<String> {
    if Path::new(path).is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")));
    }
    let name = path.strip_suffix(".json").unwrap_or(path);
    if let Ok(dir) = std::env::var("ORIGAMI_FIXTURE_DIR") {
        for candidate in [
            PathBuf::from(&dir).join(path),
            PathBuf::from(&dir).join(format!("{name}.json")),
        ] {
            if candidate.is_file() {
                return std::fs::read_to_string(&candidate).map_err(|e| {
                    Error::Parse(format!("cannot read {}: {e}", candidate.display()))
                });
            }
        }
    }
    if let Some(source) = fixtures::fixture_source(name) {
        return Ok(source.to_string());
    }
    Err(Error::Parse(format!(
        "no such file or built-in fixture: {path}"
    )))
}

fn load(path: &str) -> Result<(OrigamiTemplate, Vec<String>)> {
    let source = resolve_input(path)?;
    parse_template(&source)
}

/// Parse and validate; exit 0 iff every check passes.
pub fn cmd_validate(path: &str, format: OutputFormat) -> CmdOutput {
    let (template, warnings) = match load(path) {
        Ok(v) => v,
        Err(e) => return failure(&e, format),
    };
    let report = template.validate();

    #[derive(Serialize)]
    struct ValidateDoc {
        ok: bool,
        n: usize,
        polytopes: usize,
        edges: usize,
        violations: Vec<String>,
        warnings: Vec<String>,
    }
    let doc = ValidateDoc {
        ok: report.is_ok(),
        n: template.dim,
        polytopes: template.vertex_count(),
        edges: template.edge_count(),
        violations: report.violations.clone(),
        warnings: warnings.clone(),
    };
    let text = match format {
        OutputFormat::Json => render_json(&doc),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "template: n={}, {} polytopes, {} edges",
                doc.n, doc.polytopes, doc.edges
            );
            for w in &doc.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            if doc.ok {
                let _ = writeln!(out, "validation: ok");
            } else {
                let _ = writeln!(out, "validation: {} violation(s)", doc.violations.len());
                for v in &doc.violations {
                    let _ = writeln!(out, "  - {v}");
                }
            }
            out
        }
    };
    CmdOutput {
        exit_code: if doc.ok { 0 } else { 1 },
        text,
    }
}

fn validated(path: &str) -> Result<OrigamiTemplate> {
    let (template, _) = load(path)?;
    let report = template.validate();
    if !report.is_ok() {
        return Err(Error::Precondition(format!(
            "template is not valid: {}",
            report.violations.join("; ")
        )));
    }
    Ok(template)
}

fn invariants_text(r: &InvariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "template: n={}, b1={}, coorientable={}, orientable={} (heuristic bipartite criterion), r_min={}",
        r.n, r.b1, r.coorientable, r.orientable, r.r_min
    );
    let _ = writeln!(out, "f = {}", vec_text(&r.f));
    let _ = writeln!(out, "h = {}", vec_text(&r.h));
    if let Some(chi) = r.chi_boundary {
        let _ = writeln!(out, "chi(boundary) = {chi}");
    }
    if let Some(b) = &r.betti_closed {
        let _ = writeln!(out, "betti (closed form) = {}", vec_text(b));
    }
    if let Some(b) = &r.betti_inductive {
        let _ = writeln!(out, "betti (inductive)   = {}", vec_text(b));
    }
    if let Some(agree) = r.methods_agree {
        let _ = writeln!(out, "methods agree: {agree}");
    }
    if let Some(d) = &r.dual_homology {
        let _ = writeln!(out, "dual poset reduced homology ranks = {}", vec_text(d));
    }
    if let Some(hp) = &r.h_prime {
        let _ = writeln!(out, "h' = {}", vec_text(hp));
    }
    if let Some(hpp) = &r.h_double_prime {
        let _ = writeln!(out, "h'' (degrees 1..n-1) = {}", vec_text(hpp));
    }
    if let Some(ds) = &r.dehn_sommerville_residuals {
        let _ = writeln!(out, "dehn-sommerville residuals = {}", vec_text(ds));
    }
    if let Some(chi) = r.chi_m {
        let _ = writeln!(out, "chi(M) = {chi}");
    }
    if let Some(ranks) = &r.restriction_ranks {
        let _ = writeln!(
            out,
            "restriction coker rank (degree 2) = {}",
            ranks.coker_degree2
        );
        let _ = writeln!(
            out,
            "restriction ker rank (degree 4) = {}",
            ranks.ker_degree4
        );
        let _ = writeln!(out, "{}", ranks.iso_note);
    }
    if let Some(eq) = &r.equivariant_series {
        let _ = writeln!(out, "equivariant ranks (degrees 0..{}) = {}", 2 * r.n, vec_text(eq));
    }
    if let Some(res) = &r.h_prime_betti_residual {
        let _ = writeln!(out, "h' vs betti residual = {}", vec_text(res));
    }
    if r.degree1_generator_edges.is_empty() {
        let _ = writeln!(out, "degree-1 generators: none (tree template)");
    } else {
        let edges: Vec<String> = r
            .degree1_generator_edges
            .iter()
            .map(usize::to_string)
            .collect();
        let _ = writeln!(
            out,
            "degree-1 generators: fold classes of edges {{{}}}; all products trivial",
            edges.join(", ")
        );
    }
    if let Some(relaxed) = &r.relaxed {
        let _ = writeln!(out, "relaxed mode: r_min = {}", relaxed.r_min);
        for (class, rank) in &relaxed.non_acyclic_classes {
            let _ = writeln!(out, "  non-acyclic class {class}: gluing cycle rank {rank}");
        }
        if relaxed.odd_vanishing.is_empty() {
            let _ = writeln!(out, "  guaranteed odd vanishing range: empty");
        } else {
            let degrees: Vec<String> = relaxed
                .odd_vanishing
                .iter()
                .map(|i| (2 * i + 1).to_string())
                .collect();
            let _ = writeln!(out, "  b_d = 0 for d in {{{}}}", degrees.join(", "));
        }
        if relaxed.cut_relations.is_empty() {
            let _ = writeln!(out, "  cut relations available: none");
        } else {
            for rel in &relaxed.cut_relations {
                let _ = writeln!(
                    out,
                    "  cut edge {}: b_{}(M') = b_{}(M) + {}",
                    rel.edge,
                    2 * rel.degree,
                    2 * rel.degree,
                    rel.fold_h_sum
                );
            }
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn cmd_invariants(
    path: &str,
    mode: BettiMode,
    relaxed: bool,
    format: OutputFormat,
) -> CmdOutput {
    let run = || -> Result<InvariantReport> {
        let template = validated(path)?;
        invariants::invariant_report(&template, mode, relaxed)
    };
    match run() {
        Err(e) => failure(&e, format),
        Ok(report) => CmdOutput {
            exit_code: 0,
            text: match format {
                OutputFormat::Json => render_json(&report),
                OutputFormat::Text => invariants_text(&report),
            },
        },
    }
}

pub fn cmd_homology(path: &str, format: OutputFormat) -> CmdOutput {
    #[derive(Serialize)]
    struct HomologyDoc {
        computed_betti: Vec<i64>,
        computed_torsion: Vec<Vec<String>>,
        expected_betti: Vec<i64>,
        matches: bool,
        r_min: usize,
        note: Option<String>,
    }
    let run = || -> Result<HomologyDoc> {
        let template = validated(path)?;
        let poset = build_face_classes(&template)?;
        let b1 = template.cycle_rank()?;
        let oc = poset.order_complex()?;
        let computed = homology(&chain_complex(&oc, true)?)?;
        let expected = expected_dual_homology(template.dim, b1)?;
        let r_min = poset.acyclicity().r_min;
        let note = (r_min > 1).then(|| {
            format!(
                "r_min = {r_min} > 1: the expected profile assumes all proper \
                 faces acyclic and need not apply"
            )
        });
        Ok(HomologyDoc {
            computed_betti: computed.betti.clone(),
            computed_torsion: computed
                .torsion
                .iter()
                .map(|ds| ds.iter().map(|d| d.to_string()).collect())
                .collect(),
            matches: computed.matches(&expected),
            expected_betti: expected.betti,
            r_min,
            note,
        })
    };
    match run() {
        Err(e) => failure(&e, format),
        Ok(doc) => {
            let exit_code = if doc.matches { 0 } else { 1 };
            let text = match format {
                OutputFormat::Json => render_json(&doc),
                OutputFormat::Text => {
                    let mut out = String::new();
                    let _ = writeln!(
                        out,
                        "computed reduced homology ranks = {}",
                        vec_text(&doc.computed_betti)
                    );
                    let torsion_free = doc.computed_torsion.iter().all(Vec::is_empty);
                    if torsion_free {
                        let _ = writeln!(out, "torsion: none");
                    } else {
                        let _ = writeln!(out, "torsion: {:?}", doc.computed_torsion);
                    }
                    let _ = writeln!(
                        out,
                        "expected reduced homology ranks = {}",
                        vec_text(&doc.expected_betti)
                    );
                    if let Some(note) = &doc.note {
                        let _ = writeln!(out, "note: {note}");
                    }
                    let _ = writeln!(
                        out,
                        "verdict: {}",
                        if doc.matches { "match" } else { "MISMATCH" }
                    );
                    out
                }
            };
            CmdOutput { exit_code, text }
        }
    }
}

pub fn cmd_cut(
    path: &str,
    edge: usize,
    out_path: Option<&str>,
    allow_bridge: bool,
    format: OutputFormat,
) -> CmdOutput {
    #[derive(Serialize)]
    struct CutDoc {
        edge: usize,
        was_bridge: bool,
        folded_facet_h: Vec<i64>,
        /// The cut recursion only predicts deltas for cycle edges.
        #[serde(skip_serializing_if = "Option::is_none")]
        b1_delta: Option<i64>,
        /// (degree 2i, predicted b_{2i} increase) for 1 <= i <= n-1.
        #[serde(skip_serializing_if = "Option::is_none")]
        predicted_even_deltas: Option<Vec<(usize, i64)>>,
        connected_after: bool,
        written_to: Option<String>,
    }
    let run = || -> Result<CutDoc> {
        let template = validated(path)?;
        let was_bridge = template.is_bridge(edge)?;
        let mode = if allow_bridge {
            CutMode::AnyEdge
        } else {
            CutMode::CycleOnly
        };
        let cut = template.cut(edge, mode)?;
        let n = template.dim;
        let hf = &cut.folded_facet_h;
        let predicted: Option<Vec<(usize, i64)>> = (!was_bridge)
            .then(|| (1..n).map(|i| (2 * i, hf[i] + hf[i - 1])).collect());
        let serialized = serialize_template(&cut.template)?;
        // the output must round-trip through the parser
        let (reparsed, _) = parse_template(&serialized)?;
        if reparsed.edge_count() != cut.template.edge_count() {
            return Err(Error::Internal("cut output does not round-trip".into()));
        }
        let written_to = match out_path {
            Some(p) => {
                std::fs::write(p, &serialized)
                    .map_err(|e| Error::Parse(format!("cannot write {p}: {e}")))?;
                Some(p.to_string())
            }
            None => None,
        };
        Ok(CutDoc {
            edge,
            was_bridge,
            folded_facet_h: cut.folded_facet_h.clone(),
            b1_delta: (!was_bridge).then_some(-1),
            predicted_even_deltas: predicted,
            connected_after: cut.template.is_connected(),
            written_to,
        })
    };
    match run() {
        Err(e) => failure(&e, format),
        Ok(doc) => CmdOutput {
            exit_code: 0,
            text: match format {
                OutputFormat::Json => render_json(&doc),
                OutputFormat::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "cut edge {}", doc.edge);
                    let _ = writeln!(out, "folded facet h-vector = {}", vec_text(&doc.folded_facet_h));
                    if doc.was_bridge {
                        let _ = writeln!(out, "edge was a bridge; result is disconnected");
                    }
                    if let Some(delta) = doc.b1_delta {
                        let _ = writeln!(out, "predicted b1 delta = {delta}");
                    }
                    if let Some(deltas) = &doc.predicted_even_deltas {
                        for (degree, delta) in deltas {
                            let _ = writeln!(out, "predicted b_{degree} delta = +{delta}");
                        }
                    }
                    if let Some(p) = &doc.written_to {
                        let _ = writeln!(out, "wrote {p}");
                    }
                    out
                }
            },
        },
    }
}

pub fn cmd_ring4d(path: &str, format: OutputFormat) -> CmdOutput {
    #[derive(Serialize)]
    struct GeneratorDoc {
        index: usize,
        class_id: usize,
        cycle: usize,
        normal: [i64; 2],
    }
    #[derive(Serialize)]
    struct TauSquareDoc {
        generator: usize,
        covector: [i64; 2],
        expression: String,
    }
    #[derive(Serialize)]
    struct Ring4dDoc {
        b1: usize,
        cycles: Vec<Vec<usize>>,
        generators: Vec<GeneratorDoc>,
        degree2_relations: Vec<Vec<i64>>,
        degree2_rank: usize,
        degree4_rank: usize,
        degree4_torsion: Vec<String>,
        mu: Vec<String>,
        kernel_rank: usize,
        kernel_basis: Vec<String>,
        tau_squares: Vec<TauSquareDoc>,
    }

    let run = || -> Result<Ring4dDoc> {
        let template = validated(path)?;
        let poset = build_face_classes(&template)?;
        let cycles = multifan_from_poset(&template, &poset)?;
        let b1 = template.cycle_rank()?;
        let f = poset.f_vector();
        let h = invariants::h_from_f(&f, template.dim)?;
        let betti = invariants::betti_closed_form(&h, b1, template.dim)?;
        let d2 = degree2_presentation(&cycles, &betti)?;
        let d4 = degree4_structure(&cycles, b1)?;

        let monomial_name = |m: &Monomial| match *m {
            Monomial::Square(g) => format!("t{g}^2"),
            Monomial::Product(a, b) => format!("t{a}*t{b}"),
        };
        let combo = |v: &[i64]| -> String {
            let mut terms = Vec::new();
            for (j, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let name = monomial_name(&d4.monomials[j]);
                terms.push(match c {
                    1 => name,
                    -1 => format!("-{name}"),
                    c => format!("{c}*{name}"),
                });
            }
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        let tau_squares = (0..d2.generators.len())
            .map(|g| {
                let exp = tau_square_expansion(&cycles, g)?;
                let mut terms = Vec::new();
                if exp.prev_coeff != 0 {
                    terms.push(format!(
                        "{}*t{}*t{}",
                        exp.prev_coeff, exp.prev_product.0, exp.prev_product.1
                    ));
                }
                if exp.next_coeff != 0 {
                    terms.push(format!(
                        "{}*t{}*t{}",
                        exp.next_coeff, exp.next_product.0, exp.next_product.1
                    ));
                }
                Ok(TauSquareDoc {
                    generator: g,
                    covector: exp.covector,
                    expression: if terms.is_empty() {
                        "0".into()
                    } else {
                        terms.join(" + ")
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ring4dDoc {
            b1,
            cycles: cycles.iter().map(|c| c.classes.clone()).collect(),
            generators: d2
                .generators
                .iter()
                .map(|g| GeneratorDoc {
                    index: g.index,
                    class_id: g.class_id,
                    cycle: g.cycle,
                    normal: g.normal,
                })
                .collect(),
            degree2_relations: d2.relation_rows.clone(),
            degree2_rank: d2.rank,
            degree4_rank: d4.rank,
            degree4_torsion: d4.torsion.clone(),
            mu: d4.mu.iter().map(|v| combo(v)).collect(),
            kernel_rank: d4.kernel_basis.len(),
            kernel_basis: d4.kernel_basis.iter().map(|v| combo(v)).collect(),
            tau_squares,
        })
    };
    match run() {
        Err(e) => failure(&e, format),
        Ok(doc) => CmdOutput {
            exit_code: 0,
            text: match format {
                OutputFormat::Json => render_json(&doc),
                OutputFormat::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "b1 = {}", doc.b1);
                    for (k, cycle) in doc.cycles.iter().enumerate() {
                        let ids: Vec<String> = cycle.iter().map(usize::to_string).collect();
                        let _ = writeln!(out, "boundary circle {k}: classes ({})", ids.join(", "));
                    }
                    let _ = writeln!(out, "generators:");
                    for g in &doc.generators {
                        let _ = writeln!(
                            out,
                            "  t{} = class {} (circle {}), normal ({}, {})",
                            g.index, g.class_id, g.cycle, g.normal[0], g.normal[1]
                        );
                    }
                    let _ = writeln!(out, "degree-2 relations:");
                    for row in &doc.degree2_relations {
                        let terms: Vec<String> = row
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(g, &c)| match c {
                                1 => format!("t{g}"),
                                -1 => format!("-t{g}"),
                                c => format!("{c}*t{g}"),
                            })
                            .collect();
                        let _ = writeln!(out, "  0 = {}", terms.join(" + ").replace("+ -", "- "));
                    }
                    let _ = writeln!(out, "degree-2 rank = {}", doc.degree2_rank);
                    let _ = writeln!(out, "degree-4 rank = {}", doc.degree4_rank);
                    if !doc.degree4_torsion.is_empty() {
                        let _ = writeln!(out, "degree-4 torsion = {:?}", doc.degree4_torsion);
                    }
                    for (k, mu) in doc.mu.iter().enumerate() {
                        let _ = writeln!(out, "mu_{} = {}", k + 1, mu);
                    }
                    let _ = writeln!(out, "kernel rank (degree 4) = {}", doc.kernel_rank);
                    for (k, v) in doc.kernel_basis.iter().enumerate() {
                        let _ = writeln!(out, "kernel basis: mu_1 - mu_{} = {}", k + 2, v);
                    }
                    let _ = writeln!(out, "tau squares:");
                    for t in &doc.tau_squares {
                        let _ = writeln!(
                            out,
                            "  t{}^2 = {} (u = ({}, {}))",
                            t.generator, t.expression, t.covector[0], t.covector[1]
                        );
                    }
                    out
                }
            },
        },
    }
}
