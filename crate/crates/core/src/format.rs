//! The template file format: a JSON document with the dimension, the
//! polytopes in H-representation, and the fold edges. Offsets are exact
//! rationals, written as "p" or "p/q" strings; plain JSON integers are
//! accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::polytope::{DelzantPolytope, Facet};
use crate::template::{EdgeEnd, FoldEdge, OrigamiTemplate};

#[derive(Debug, Serialize, Deserialize)]
struct TemplateDoc {
    n: usize,
    polytopes: Vec<PolytopeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PolytopeDoc {
    label: String,
    facets: Vec<FacetDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FacetDoc {
    normal: Vec<i64>,
    offset: OffsetDoc,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    ends: [EndDoc; 2],
}

#[derive(Debug, Serialize, Deserialize)]
struct EndDoc {
    vertex: usize,
    facet: usize,
}

/// Rational offset, serialized as "p" or "p/q".
#[derive(Debug)]
struct OffsetDoc(Rational);

impl Serialize for OffsetDoc {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for OffsetDoc {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(OffsetDoc(Rational::from(BigInt::from(v)))),
            Raw::Str(s) => parse_rational(&s)
                .map(OffsetDoc)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Parse a template document. Returns the template plus ingestion
/// warnings (non-primitive normals are normalized, not rejected).
pub fn parse_template(text: &str) -> Result<(OrigamiTemplate, Vec<String>)> {
    let doc: TemplateDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut warnings = Vec::new();
    let mut polytopes = Vec::with_capacity(doc.polytopes.len());
    for p in doc.polytopes {
        let facets: Vec<Facet> = p
            .facets
            .into_iter()
            .map(|f| Facet {
                normal: f.normal.into_iter().map(BigInt::from).collect(),
                offset: f.offset.0,
            })
            .collect();
        let (polytope, mut w) = DelzantPolytope::new(doc.n, facets, p.label)?;
        warnings.append(&mut w);
        polytopes.push(polytope);
    }
    let edges = doc
        .edges
        .into_iter()
        .map(|e| FoldEdge {
            ends: [
                EdgeEnd {
                    vertex: e.ends[0].vertex,
                    facet: e.ends[0].facet,
                },
                EdgeEnd {
                    vertex: e.ends[1].vertex,
                    facet: e.ends[1].facet,
                },
            ],
        })
        .collect();
    Ok((
        OrigamiTemplate {
            dim: doc.n,
            polytopes,
            edges,
        },
        warnings,
    ))
}

/// Canonical serialization; parse(serialize(t)) reproduces t exactly.
pub fn serialize_template(t: &OrigamiTemplate) -> Result<String> {
    let polytopes = t
        .polytopes
        .iter()
        .map(|p| {
            let facets = p
                .facets
                .iter()
                .map(|f| {
                    let normal = f
                        .normal
                        .iter()
                        .map(|c| {
                            i64::try_from(c).map_err(|_| {
                                Error::Capability(
                                    "normal entry exceeds the file format's integer range".into(),
                                )
                            })
                        })
                        .collect::<Result<Vec<i64>>>()?;
                    Ok(FacetDoc {
                        normal,
                        offset: OffsetDoc(f.offset.clone()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PolytopeDoc {
                label: p.label.clone(),
                facets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = TemplateDoc {
        n: t.dim,
        polytopes,
        edges: t
            .edges
            .iter()
            .map(|e| EdgeDoc {
                ends: [
                    EndDoc {
                        vertex: e.ends[0].vertex,
                        facet: e.ends[0].facet,
                    },
                    EndDoc {
                        vertex: e.ends[1].vertex,
                        facet: e.ends[1].facet,
                    },
                ],
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    out.push('\n');
    Ok(out)
}
