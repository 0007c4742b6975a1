//! The interchange format: JSON documents with a top-level `kind`
//! discriminator and explicit integer carriers and tuple lists.
//!
//! Canonical form sorts and deduplicates every tuple list, so that
//! `serialize(parse(t))` is the canonical rendering of `t` and documents
//! round-trip losslessly.

use serde::{Deserialize, Serialize};

use polarity_core::bits::BitMatrix;
use polarity_core::morphism::BoundedMorphism;
use polarity_core::nlo::{canonical_structure, FiniteLattice, Homomorphism, OmegaNlo, OpTable};
use polarity_core::omega::{OmegaPolarity, RelS, RelT};
use polarity_core::Polarity;

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Document {
    Polarity(PolarityDoc),
    OmegaPolarity(OmegaPolarityDoc),
    Lattice(LatticeDoc),
    Nlo(NloDoc),
    Morphism(MorphismDoc),
    Hom(HomDoc),
    SumSpec(SumSpecDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PolarityDoc {
    pub version: u32,
    pub x_size: usize,
    pub y_size: usize,
    pub r: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelDoc {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OmegaPolarityDoc {
    pub version: u32,
    pub x_size: usize,
    pub y_size: usize,
    pub r: Vec<Vec<usize>>,
    pub s: RelDoc,
    pub t: RelDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub version: u32,
    pub size: usize,
    /// strict order pairs `[a, b]` with `a < b` in the lattice order;
    /// exactly one of `leq` / `covers` must be present
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<Vec<usize>>>,
    /// Hasse cover pairs; the transitive closure is taken
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub arity: usize,
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NloDoc {
    pub version: u32,
    pub lattice: LatticeDoc,
    pub f: TableDoc,
    pub g: TableDoc,
}

/// Morphism endpoints embed a document of kind `omega_polarity`, or of kind
/// `nlo` whose canonical structure is meant.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub version: u32,
    pub source: Box<Document>,
    pub target: Box<Document>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub version: u32,
    pub source: NloDoc,
    pub target: NloDoc,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SumSpecDoc {
    pub version: u32,
    pub summands: Vec<OmegaPolarityDoc>,
}

pub fn parse(text: &str) -> Result<Document, CliError> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    check_versions(&doc)?;
    Ok(doc)
}

pub fn serialize(doc: &Document) -> String {
    let mut doc = doc.clone();
    canonicalize(&mut doc);
    let pretty = serde_json::to_string_pretty(&doc).expect("serializable");
    let mut out = crate::output::inline_scalar_arrays(&pretty);
    out.push('\n');
    out
}

fn check_versions(doc: &Document) -> Result<(), CliError> {
    let version = match doc {
        Document::Polarity(d) => d.version,
        Document::OmegaPolarity(d) => d.version,
        Document::Lattice(d) => d.version,
        Document::Nlo(d) => d.version,
        Document::Morphism(d) => {
            check_versions(&d.source)?;
            check_versions(&d.target)?;
            d.version
        }
        Document::Hom(d) => d.version,
        Document::SumSpec(d) => d.version,
    };
    if version != FORMAT_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn sort_tuples(tuples: &mut Vec<Vec<usize>>) {
    tuples.sort();
    tuples.dedup();
}

fn canonicalize_omega(d: &mut OmegaPolarityDoc) {
    sort_tuples(&mut d.r);
    sort_tuples(&mut d.s.tuples);
    sort_tuples(&mut d.t.tuples);
}

fn canonicalize_lattice(d: &mut LatticeDoc) {
    if let Some(leq) = &mut d.leq {
        sort_tuples(leq);
    }
    if let Some(covers) = &mut d.covers {
        sort_tuples(covers);
    }
}

pub fn canonicalize(doc: &mut Document) {
    match doc {
        Document::Polarity(d) => sort_tuples(&mut d.r),
        Document::OmegaPolarity(d) => canonicalize_omega(d),
        Document::Lattice(d) => canonicalize_lattice(d),
        Document::Nlo(d) => canonicalize_lattice(&mut d.lattice),
        Document::Morphism(d) => {
            canonicalize(&mut d.source);
            canonicalize(&mut d.target);
        }
        Document::Hom(d) => {
            canonicalize_lattice(&mut d.source.lattice);
            canonicalize_lattice(&mut d.target.lattice);
        }
        Document::SumSpec(d) => {
            for s in &mut d.summands {
                canonicalize_omega(s);
            }
        }
    }
}

fn pair(tuple: &[usize], what: &str) -> Result<(usize, usize), CliError> {
    if tuple.len() != 2 {
        return Err(CliError::Semantic(format!(
            "{what}: tuple {tuple:?} does not have exactly two entries"
        )));
    }
    Ok((tuple[0], tuple[1]))
}

fn fmt_tuple(tuple: &[usize]) -> String {
    let inner: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

// ---------------------------------------------------------------------------
// document → core

pub fn polarity_from_doc(d: &PolarityDoc) -> Result<Polarity, CliError> {
    let mut pairs = Vec::new();
    for t in &d.r {
        let (x, y) = pair(t, "relation r")?;
        if x >= d.x_size || y >= d.y_size {
            return Err(CliError::Semantic(format!(
                "relation r: tuple {} out of range for {}x{} carriers",
                fmt_tuple(t),
                d.x_size,
                d.y_size
            )));
        }
        pairs.push((x, y));
    }
    Polarity::from_pairs(d.x_size, d.y_size, &pairs).map_err(|e| CliError::Semantic(e.to_string()))
}

/// Builds the raw parts without requiring section stability; the `validate`
/// command reports on stability separately.
pub fn omega_parts_from_doc(d: &OmegaPolarityDoc) -> Result<(Polarity, RelS, RelT), CliError> {
    let base = polarity_from_doc(&PolarityDoc {
        version: d.version,
        x_size: d.x_size,
        y_size: d.y_size,
        r: d.r.clone(),
    })?;
    let mut s_tuples = Vec::new();
    for t in &d.s.tuples {
        if t.len() != d.s.arity + 1 {
            return Err(CliError::Semantic(format!(
                "relation s: tuple {} does not match arity {}",
                fmt_tuple(t),
                d.s.arity
            )));
        }
        let (xs, y) = t.split_at(d.s.arity);
        if xs.iter().any(|&x| x >= d.x_size) || y[0] >= d.y_size {
            return Err(CliError::Semantic(format!(
                "relation s: tuple {} out of range",
                fmt_tuple(t)
            )));
        }
        s_tuples.push((xs.to_vec(), y[0]));
    }
    let s = RelS::from_tuples(d.s.arity, d.x_size, d.y_size, &s_tuples)
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    let mut t_tuples = Vec::new();
    for t in &d.t.tuples {
        if t.len() != d.t.arity + 1 {
            return Err(CliError::Semantic(format!(
                "relation t: tuple {} does not match arity {}",
                fmt_tuple(t),
                d.t.arity
            )));
        }
        let (x, ys) = (t[0], &t[1..]);
        if x >= d.x_size || ys.iter().any(|&y| y >= d.y_size) {
            return Err(CliError::Semantic(format!(
                "relation t: tuple {} out of range",
                fmt_tuple(t)
            )));
        }
        t_tuples.push((x, ys.to_vec()));
    }
    let t = RelT::from_tuples(d.t.arity, d.x_size, d.y_size, &t_tuples)
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    Ok((base, s, t))
}

pub fn omega_from_doc(d: &OmegaPolarityDoc) -> Result<OmegaPolarity, CliError> {
    let (base, s, t) = omega_parts_from_doc(d)?;
    OmegaPolarity::new(base, s, t).map_err(|e| {
        CliError::Validation(format!(
            "not an omega polarity: {e}; run `validate` for details"
        ))
    })
}

pub fn lattice_from_doc(d: &LatticeDoc) -> Result<FiniteLattice, CliError> {
    let pairs = match (&d.leq, &d.covers) {
        (Some(_), Some(_)) => {
            return Err(CliError::Semantic(String::from(
                "lattice: give exactly one of leq / covers",
            )))
        }
        (None, None) => {
            return Err(CliError::Semantic(String::from(
                "lattice: give one of leq / covers",
            )))
        }
        (Some(leq), None) => (leq, false),
        (None, Some(covers)) => (covers, true),
    };
    let (list, is_covers) = pairs;
    let mut strict: Vec<(usize, usize)> = Vec::new();
    for t in list {
        let (a, b) = pair(t, "lattice order")?;
        if a >= d.size || b >= d.size {
            return Err(CliError::Semantic(format!(
                "lattice order: tuple {} out of range for size {}",
                fmt_tuple(t),
                d.size
            )));
        }
        strict.push((a, b));
    }
    let mut matrix = vec![vec![false; d.size]; d.size];
    for i in 0..d.size {
        matrix[i][i] = true;
    }
    for (a, b) in strict {
        matrix[a][b] = true;
    }
    if is_covers {
        // reflexive-transitive closure of the cover relation
        for _ in 0..d.size {
            for a in 0..d.size {
                for b in 0..d.size {
                    if matrix[a][b] {
                        for c in 0..d.size {
                            if matrix[b][c] {
                                matrix[a][c] = true;
                            }
                        }
                    }
                }
            }
        }
    }
    let leq = BitMatrix::from_fn(d.size, d.size, |a, b| matrix[a][b]);
    FiniteLattice::from_leq(leq).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn nlo_from_doc(d: &NloDoc) -> Result<OmegaNlo, CliError> {
    let lattice = lattice_from_doc(&d.lattice)?;
    let f = OpTable::new(d.f.arity, lattice.size(), d.f.table.clone())
        .map_err(|e| CliError::Semantic(format!("table f: {e}")))?;
    let g = OpTable::new(d.g.arity, lattice.size(), d.g.table.clone())
        .map_err(|e| CliError::Semantic(format!("table g: {e}")))?;
    OmegaNlo::new(lattice, f, g).map_err(|e| CliError::Validation(e.to_string()))
}

/// A morphism endpoint: an Ω-polarity directly, or the canonical structure
/// of an embedded NLO.
pub fn endpoint_from_doc(d: &Document) -> Result<(OmegaPolarity, Option<OmegaNlo>), CliError> {
    match d {
        Document::OmegaPolarity(op) => Ok((omega_from_doc(op)?, None)),
        Document::Nlo(nd) => {
            let nlo = nlo_from_doc(nd)?;
            let cs = canonical_structure(&nlo).map_err(|e| CliError::Validation(e.to_string()))?;
            Ok((cs, Some(nlo)))
        }
        _ => Err(CliError::Semantic(String::from(
            "morphism endpoints must be omega_polarity or nlo documents",
        ))),
    }
}

pub fn morphism_from_doc(d: &MorphismDoc) -> Result<(BoundedMorphism, Option<OmegaNlo>), CliError> {
    let (source, _) = endpoint_from_doc(&d.source)?;
    let (target, target_nlo) = endpoint_from_doc(&d.target)?;
    let m = BoundedMorphism::new(source, target, d.alpha.clone(), d.beta.clone())
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    Ok((m, target_nlo))
}

pub fn hom_from_doc(d: &HomDoc) -> Result<Homomorphism, CliError> {
    let source = nlo_from_doc(&d.source)?;
    let target = nlo_from_doc(&d.target)?;
    if d.map.len() != source.lattice().size() {
        return Err(CliError::Semantic(format!(
            "hom map has {} entries for a source of size {}",
            d.map.len(),
            source.lattice().size()
        )));
    }
    if let Some(&v) = d.map.iter().find(|&&v| v >= target.lattice().size()) {
        return Err(CliError::Semantic(format!(
            "hom map value {v} out of range for target of size {}",
            target.lattice().size()
        )));
    }
    Ok(Homomorphism {
        source,
        target,
        map: d.map.clone(),
    })
}

// ---------------------------------------------------------------------------
// core → document

pub fn polarity_to_doc(p: &Polarity) -> PolarityDoc {
    PolarityDoc {
        version: FORMAT_VERSION,
        x_size: p.x_size(),
        y_size: p.y_size(),
        r: p.pairs().iter().map(|&(x, y)| vec![x, y]).collect(),
    }
}

pub fn omega_to_doc(op: &OmegaPolarity) -> OmegaPolarityDoc {
    let base = polarity_to_doc(op.base());
    OmegaPolarityDoc {
        version: FORMAT_VERSION,
        x_size: base.x_size,
        y_size: base.y_size,
        r: base.r,
        s: RelDoc {
            arity: op.s().arity(),
            tuples: op
                .s()
                .tuple_list()
                .into_iter()
                .map(|(mut xs, y)| {
                    xs.push(y);
                    xs
                })
                .collect(),
        },
        t: RelDoc {
            arity: op.t().arity(),
            tuples: op
                .t()
                .tuple_list()
                .into_iter()
                .map(|(x, ys)| {
                    let mut t = vec![x];
                    t.extend(ys);
                    t
                })
                .collect(),
        },
    }
}

pub fn lattice_to_doc(l: &FiniteLattice) -> LatticeDoc {
    let mut leq = Vec::new();
    for a in 0..l.size() {
        for b in 0..l.size() {
            if a != b && l.leq(a, b) {
                leq.push(vec![a, b]);
            }
        }
    }
    LatticeDoc {
        version: FORMAT_VERSION,
        size: l.size(),
        leq: Some(leq),
        covers: None,
    }
}

pub fn nlo_to_doc(n: &OmegaNlo) -> NloDoc {
    NloDoc {
        version: FORMAT_VERSION,
        lattice: lattice_to_doc(n.lattice()),
        f: TableDoc {
            arity: n.f().arity(),
            table: n.f().values().to_vec(),
        },
        g: TableDoc {
            arity: n.g().arity(),
            table: n.g().values().to_vec(),
        },
    }
}

pub fn hom_to_doc(h: &Homomorphism) -> HomDoc {
    HomDoc {
        version: FORMAT_VERSION,
        source: nlo_to_doc(&h.source),
        target: nlo_to_doc(&h.target),
        map: h.map.clone(),
    }
}

pub fn morphism_to_doc(m: &BoundedMorphism) -> MorphismDoc {
    MorphismDoc {
        version: FORMAT_VERSION,
        source: Box::new(Document::OmegaPolarity(omega_to_doc(&m.source))),
        target: Box::new(Document::OmegaPolarity(omega_to_doc(&m.target))),
        alpha: m.alpha.clone(),
        beta: m.beta.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn le2_roundtrip_is_canonical() {
        let text = r#"{
            "kind": "polarity", "version": 1,
            "x_size": 2, "y_size": 2,
            "r": [[1,1],[0,1],[0,0],[0,1]]
        }"#;
        let doc = parse(text).unwrap();
        let out = serialize(&doc);
        let reparsed = parse(&out).unwrap();
        assert_eq!(serialize(&reparsed), out);
        let Document::Polarity(p) = reparsed else {
            panic!()
        };
        assert_eq!(p.r, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn range_violation_names_the_tuple() {
        let text = r#"{
            "kind": "polarity", "version": 1,
            "x_size": 2, "y_size": 2,
            "r": [[2,0]]
        }"#;
        let doc = parse(text).unwrap();
        let Document::Polarity(p) = &doc else {
            panic!()
        };
        let err = polarity_from_doc(p).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("(2,0)"), "{msg}");
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse("{ \"kind\": ").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn covers_and_leq_agree() {
        let covers = LatticeDoc {
            version: 1,
            size: 3,
            leq: None,
            covers: Some(vec![vec![0, 1], vec![1, 2]]),
        };
        let full = LatticeDoc {
            version: 1,
            size: 3,
            leq: Some(vec![vec![0, 1], vec![0, 2], vec![1, 2]]),
            covers: None,
        };
        let a = lattice_from_doc(&covers).unwrap();
        let b = lattice_from_doc(&full).unwrap();
        assert_eq!(a.order_matrix(), b.order_matrix());
    }
}
