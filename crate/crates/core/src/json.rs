//! JSON schemas for every artifact, with canonical byte-stable
//! serialization.
//!
//! Schema conventions:
//!
//! * tessellations: `{"p", "darts", "next", "twin", "labels"}` with
//!   `labels` a dart-indexed map;
//! * finite abelian groups: `{"cyclic": [n1, n2, ...]}`;
//! * subgroups: generator tuples; monomorphisms: generator-image tuples;
//! * indexings: entries keyed by `(kind, source, target, corner)`;
//! * verdicts: outcome, primary reason tag, and notes.
//!
//! Serialization is canonical: struct fields in fixed order, maps sorted
//! (`BTreeMap`), arbitrary-precision integers as decimal strings, pretty
//! printing with a trailing newline.  `save(load(save(x)))` is
//! byte-identical to `save(x)`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::abelian::{FiniteAbelianGroup, Monomorphism, Subgroup};
use crate::cog::ComplexOfGroups;
use crate::decide::{Outcome, Verdict};
use crate::homology::{CertKind, CoefficientCertificate, LayeredCertificate};
use crate::indexing::Indexing;
use crate::surface::{BKind, TiledSurface};

/// Serialize with canonical formatting (pretty, trailing newline).
pub fn to_canonical_string<T: Serialize>(x: &T) -> Result<String, String> {
    let mut s = serde_json::to_string_pretty(x).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s)
}

pub fn save<T: Serialize>(path: &Path, x: &T) -> Result<(), String> {
    let s = to_canonical_string(x)?;
    std::fs::write(path, s).map_err(|e| format!("writing {}: {}", path.display(), e))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {}", path.display(), e))?;
    serde_json::from_str(&s).map_err(|e| format!("parsing {}: {}", path.display(), e))
}

// ---------------------------------------------------------------- surfaces

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TessellationJson {
    pub p: usize,
    pub darts: usize,
    pub next: Vec<usize>,
    pub twin: Vec<usize>,
    pub labels: BTreeMap<usize, String>,
}

pub fn tessellation_to_json(ts: &TiledSurface) -> TessellationJson {
    TessellationJson {
        p: ts.p(),
        darts: ts.n_darts(),
        next: ts.next_table().to_vec(),
        twin: ts.twin_table().to_vec(),
        labels: ts.labels().clone(),
    }
}

pub fn tessellation_from_json(j: &TessellationJson) -> Result<TiledSurface, String> {
    if j.next.len() != j.darts || j.twin.len() != j.darts {
        return Err(format!(
            "dart count {} does not match table lengths {} / {}",
            j.darts,
            j.next.len(),
            j.twin.len()
        ));
    }
    for (d, &t) in j.twin.iter().enumerate() {
        if t == d {
            return Err(format!("twin[{}] = {} is a fixed point", d, d));
        }
        if j.twin.get(t) != Some(&d) {
            return Err(format!("twin is not an involution at dart {}", d));
        }
    }
    TiledSurface::from_parts(j.p, j.next.clone(), j.twin.clone(), j.labels.clone())
}

// ------------------------------------------------------------------ groups

/// `{"cyclic": [n1, ...]}` — the group `ℤ/n1 × ℤ/n2 × ...`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub cyclic: Vec<u64>,
}

pub fn group_to_json(g: &FiniteAbelianGroup) -> GroupJson {
    GroupJson { cyclic: g.orders.clone() }
}

pub fn group_from_json(j: &GroupJson) -> Result<FiniteAbelianGroup, String> {
    if j.cyclic.iter().any(|&n| n == 0) {
        return Err("cyclic factor of order 0".into());
    }
    Ok(FiniteAbelianGroup::new(j.cyclic.clone()))
}

/// A subgroup as generator tuples inside an ambient group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubgroupJson {
    pub ambient: GroupJson,
    pub generators: Vec<Vec<u64>>,
}

pub fn subgroup_to_json(s: &Subgroup) -> SubgroupJson {
    SubgroupJson {
        ambient: group_to_json(&s.ambient),
        generators: s.elements.iter().cloned().collect(),
    }
}

pub fn subgroup_from_json(j: &SubgroupJson) -> Result<Subgroup, String> {
    let ambient = group_from_json(&j.ambient)?;
    for g in &j.generators {
        if !ambient.is_valid_element(g) {
            return Err(format!("generator {:?} is not an element of the ambient group", g));
        }
    }
    Ok(Subgroup::generated(&ambient, &j.generators))
}

/// A monomorphism as generator-image tuples.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonoJson {
    pub images: Vec<Vec<u64>>,
}

pub fn mono_to_json(m: &Monomorphism) -> MonoJson {
    MonoJson { images: m.images.clone() }
}

pub fn mono_from_json(
    j: &MonoJson,
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
) -> Result<Monomorphism, String> {
    Monomorphism::new(source, target, j.images.clone())
}

// ------------------------------------------------------------- complexes

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub tessellation: TessellationJson,
    pub face_groups: Vec<GroupJson>,
    pub edge_groups: Vec<GroupJson>,
    pub vertex_groups: Vec<GroupJson>,
    /// Per dart, in dart order.
    pub fe: Vec<MonoJson>,
    pub ev: Vec<MonoJson>,
    pub fv: Vec<MonoJson>,
}

pub fn complex_to_json(c: &ComplexOfGroups) -> ComplexJson {
    ComplexJson {
        tessellation: tessellation_to_json(&c.ts),
        face_groups: c.face_groups.iter().map(group_to_json).collect(),
        edge_groups: c.edge_groups.iter().map(group_to_json).collect(),
        vertex_groups: c.vertex_groups.iter().map(group_to_json).collect(),
        fe: c.fe.iter().map(mono_to_json).collect(),
        ev: c.ev.iter().map(mono_to_json).collect(),
        fv: c.fv.iter().map(mono_to_json).collect(),
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<ComplexOfGroups, String> {
    let ts = tessellation_from_json(&j.tessellation)?;
    let report = ts.validate();
    if !report.valid {
        return Err(format!("invalid tessellation: {:?}", report.errors));
    }
    let cells = ts.cells();
    if j.face_groups.len() != cells.faces.len()
        || j.edge_groups.len() != cells.edges.len()
        || j.vertex_groups.len() != cells.vertices.len()
    {
        return Err("cell group counts do not match the tessellation".into());
    }
    let n = ts.n_darts();
    if j.fe.len() != n || j.ev.len() != n || j.fv.len() != n {
        return Err("monomorphism tables must have one entry per dart".into());
    }
    let face_groups: Vec<FiniteAbelianGroup> =
        j.face_groups.iter().map(group_from_json).collect::<Result<_, _>>()?;
    let edge_groups: Vec<FiniteAbelianGroup> =
        j.edge_groups.iter().map(group_from_json).collect::<Result<_, _>>()?;
    let vertex_groups: Vec<FiniteAbelianGroup> =
        j.vertex_groups.iter().map(group_from_json).collect::<Result<_, _>>()?;
    let mut fe = Vec::with_capacity(n);
    let mut ev = Vec::with_capacity(n);
    let mut fv = Vec::with_capacity(n);
    for d in 0..n {
        let f = &face_groups[cells.face_of[d]];
        let e = &edge_groups[cells.edge_of[d]];
        let v = &vertex_groups[cells.vertex_of[d]];
        fe.push(mono_from_json(&j.fe[d], f.clone(), e.clone()).map_err(|m| format!("FE {}: {}", d, m))?);
        ev.push(mono_from_json(&j.ev[d], e.clone(), v.clone()).map_err(|m| format!("EV {}: {}", d, m))?);
        fv.push(mono_from_json(&j.fv[d], f.clone(), v.clone()).map_err(|m| format!("FV {}: {}", d, m))?);
    }
    let cog = ComplexOfGroups { ts, face_groups, edge_groups, vertex_groups, fe, ev, fv };
    cog.verify_simple()?;
    Ok(cog)
}

// ------------------------------------------------------------- indexings

/// One indexing entry, keyed by its barycentric edge.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IndexingEntryJson {
    /// `"fe"`, `"ev"`, or `"fv"`.
    pub kind: String,
    /// Source cell id (face id for fe/fv, edge id for ev).
    pub source: usize,
    /// Target cell id (edge id for fe, vertex id for ev/fv).
    pub target: usize,
    /// The dart whose corner carries this barycentric edge.
    pub corner: usize,
    pub index: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IndexingJson {
    pub entries: Vec<IndexingEntryJson>,
}

fn kind_str(k: BKind) -> &'static str {
    match k {
        BKind::FE => "fe",
        BKind::EV => "ev",
        BKind::FV => "fv",
    }
}

pub fn indexing_to_json(ind: &Indexing, ts: &TiledSurface) -> IndexingJson {
    let cells = ts.cells();
    let mut entries = Vec::new();
    for (kind, table) in [(BKind::FE, &ind.fe), (BKind::EV, &ind.ev), (BKind::FV, &ind.fv)] {
        for (d, &index) in table.iter().enumerate() {
            let (source, target) = match kind {
                BKind::FE => (cells.face_of[d], cells.edge_of[d]),
                BKind::EV => (cells.edge_of[d], cells.vertex_of[d]),
                BKind::FV => (cells.face_of[d], cells.vertex_of[d]),
            };
            entries.push(IndexingEntryJson {
                kind: kind_str(kind).to_string(),
                source,
                target,
                corner: d,
                index,
            });
        }
    }
    IndexingJson { entries }
}

pub fn indexing_from_json(j: &IndexingJson, ts: &TiledSurface) -> Result<Indexing, String> {
    let cells = ts.cells();
    let n = ts.n_darts();
    let mut fe: Vec<Option<u64>> = vec![None; n];
    let mut ev: Vec<Option<u64>> = vec![None; n];
    let mut fv: Vec<Option<u64>> = vec![None; n];
    for entry in &j.entries {
        let d = entry.corner;
        if d >= n {
            return Err(format!("corner {} out of range", d));
        }
        let (table, source, target) = match entry.kind.as_str() {
            "fe" => (&mut fe, cells.face_of[d], cells.edge_of[d]),
            "ev" => (&mut ev, cells.edge_of[d], cells.vertex_of[d]),
            "fv" => (&mut fv, cells.face_of[d], cells.vertex_of[d]),
            other => return Err(format!("unknown kind {:?}", other)),
        };
        if entry.source != source || entry.target != target {
            return Err(format!(
                "entry ({}, corner {}) claims cells ({}, {}), tessellation has ({}, {})",
                entry.kind, d, entry.source, entry.target, source, target
            ));
        }
        if table[d].replace(entry.index).is_some() {
            return Err(format!("duplicate entry for ({}, corner {})", entry.kind, d));
        }
    }
    let unwrap_table = |t: Vec<Option<u64>>, name: &str| -> Result<Vec<u64>, String> {
        t.into_iter()
            .enumerate()
            .map(|(d, x)| x.ok_or_else(|| format!("missing {} entry at corner {}", name, d)))
            .collect()
    };
    Ok(Indexing {
        fe: unwrap_table(fe, "fe")?,
        ev: unwrap_table(ev, "ev")?,
        fv: unwrap_table(fv, "fv")?,
    })
}

// ----------------------------------------------------------- certificates

/// A plain coefficient certificate; coefficients are decimal strings so
/// arbitrary precision survives the round trip.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlainCertificateJson {
    pub kind: String,
    pub coefficients: Vec<String>,
    pub delta: Vec<String>,
}

pub fn plain_certificate_to_json(c: &CoefficientCertificate) -> PlainCertificateJson {
    PlainCertificateJson {
        kind: c.kind.as_str().to_string(),
        coefficients: c.coefficients.iter().map(|x| x.to_string()).collect(),
        delta: c.delta.iter().map(|x| x.to_string()).collect(),
    }
}

fn parse_bigints(xs: &[String], what: &str) -> Result<Vec<BigInt>, String> {
    xs.iter()
        .map(|s| BigInt::from_str(s).map_err(|e| format!("bad {} {:?}: {}", what, s, e)))
        .collect()
}

pub fn plain_certificate_from_json(j: &PlainCertificateJson) -> Result<CoefficientCertificate, String> {
    Ok(CoefficientCertificate {
        kind: CertKind::from_str(&j.kind)?,
        coefficients: parse_bigints(&j.coefficients, "coefficient")?,
        delta: parse_bigints(&j.delta, "delta entry")?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LayeredCertificateJson {
    pub kind: String,
    pub orientations: Vec<i8>,
    pub coefficients: Vec<u64>,
    pub delta: Vec<u64>,
    pub layers: Vec<Vec<bool>>,
}

pub fn layered_certificate_to_json(c: &LayeredCertificate) -> LayeredCertificateJson {
    LayeredCertificateJson {
        kind: c.kind.as_str().to_string(),
        orientations: c.orientations.clone(),
        coefficients: c.coefficients.clone(),
        delta: c.delta.clone(),
        layers: c.layers.clone(),
    }
}

pub fn layered_certificate_from_json(
    j: &LayeredCertificateJson,
) -> Result<LayeredCertificate, String> {
    if j.orientations.iter().any(|&s| s != 1 && s != -1) {
        return Err("orientations must be ±1".into());
    }
    Ok(LayeredCertificate {
        kind: CertKind::from_str(&j.kind)?,
        orientations: j.orientations.clone(),
        coefficients: j.coefficients.clone(),
        delta: j.delta.clone(),
        layers: j.layers.clone(),
    })
}

// --------------------------------------------------------------- verdicts

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictJson {
    pub outcome: String,
    pub reason: String,
    pub notes: Vec<String>,
    pub v: u64,
    pub p: Option<u64>,
    pub genus: Option<u64>,
    pub faces: Option<u64>,
}

pub fn verdict_to_json(v: &Verdict) -> VerdictJson {
    VerdictJson {
        outcome: v.outcome.as_str().to_string(),
        reason: v.reason.clone(),
        notes: v.notes.clone(),
        v: v.v,
        p: v.p,
        genus: v.genus,
        faces: v.faces,
    }
}

pub fn verdict_from_json(j: &VerdictJson) -> Result<Verdict, String> {
    let outcome = match j.outcome.as_str() {
        "exists" => Outcome::Exists,
        "not-exists" => Outcome::NotExists,
        "unknown" => Outcome::Unknown,
        other => return Err(format!("unknown outcome {:?}", other)),
    };
    Ok(Verdict {
        outcome,
        reason: j.reason.clone(),
        notes: j.notes.clone(),
        v: j.v,
        p: j.p,
        genus: j.genus,
        faces: j.faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cog;
    use crate::decide;
    use crate::tess;

    fn roundtrip_bytes<T, F, G>(x: &T, to: F, from: G)
    where
        T: PartialEq + std::fmt::Debug,
        F: Fn(&T) -> String,
        G: Fn(&str) -> T,
    {
        let s1 = to(x);
        let back = from(&s1);
        assert_eq!(&back, x);
        let s2 = to(&back);
        assert_eq!(s1, s2, "serialization is not byte-stable");
    }

    #[test]
    fn tessellation_roundtrip_is_byte_identical() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        roundtrip_bytes(
            &tessellation_to_json(&ts),
            |j| to_canonical_string(j).unwrap(),
            |s| serde_json::from_str(s).unwrap(),
        );
        // And through the domain type.
        let j = tessellation_to_json(&ts);
        let ts2 = tessellation_from_json(&j).unwrap();
        assert_eq!(
            to_canonical_string(&tessellation_to_json(&ts2)).unwrap(),
            to_canonical_string(&j).unwrap()
        );
    }

    #[test]
    fn complex_roundtrip_is_byte_identical() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let cog = cog::build_even_v(&ts, 4).unwrap();
        let j = complex_to_json(&cog);
        let s1 = to_canonical_string(&j).unwrap();
        let cog2 = complex_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        let s2 = to_canonical_string(&complex_to_json(&cog2)).unwrap();
        assert_eq!(s1, s2);
        assert!(cog2.verify(4).unwrap().ok());
    }

    #[test]
    fn indexing_and_certificates_roundtrip() {
        let (ts, cert) = tess::build_f_div4(5, 8).unwrap();
        let cog = cog::build_from_certificate(&ts, &cert, 2, 3).unwrap();
        let ind = cog.induced_indexing();
        let j = indexing_to_json(&ind, &ts);
        let s1 = to_canonical_string(&j).unwrap();
        let ind2 = indexing_from_json(&serde_json::from_str(&s1).unwrap(), &ts).unwrap();
        assert_eq!(ind2, ind);
        assert_eq!(to_canonical_string(&indexing_to_json(&ind2, &ts)).unwrap(), s1);

        let j = layered_certificate_to_json(&cert);
        let s1 = to_canonical_string(&j).unwrap();
        let cert2 = layered_certificate_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        assert_eq!(cert2, cert);

        let plain = cert.to_coefficient_certificate();
        let pj = plain_certificate_to_json(&plain);
        let s1 = to_canonical_string(&pj).unwrap();
        let plain2 = plain_certificate_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        assert_eq!(plain2, plain);
    }

    #[test]
    fn verdict_roundtrip() {
        let v = decide::decide(12, 33, 4).unwrap();
        let j = verdict_to_json(&v);
        let s1 = to_canonical_string(&j).unwrap();
        let v2 = verdict_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        assert_eq!(to_canonical_string(&verdict_to_json(&v2)).unwrap(), s1);
        assert_eq!(v2.outcome, Outcome::NotExists);
    }

    #[test]
    fn malformed_inputs_are_rejected()  {
        let j = TessellationJson {
            p: 5,
            darts: 3,
            next: vec![1, 2, 0],
            twin: vec![0, 1, 2], // fixed points: not a valid twin table
            labels: BTreeMap::new(),
        };
        assert!(tessellation_from_json(&j).is_err());
        let j = LayeredCertificateJson {
            kind: "PlusMinusOne".into(),
            orientations: vec![2],
            coefficients: vec![1],
            delta: vec![0],
            layers: vec![vec![true]],
        };
        assert!(layered_certificate_from_json(&j).is_err());
        let j = LayeredCertificateJson {
            kind: "no-such-kind".into(),
            orientations: vec![1],
            coefficients: vec![1],
            delta: vec![0],
            layers: vec![vec![true]],
        };
        assert!(layered_certificate_from_json(&j).is_err());
    }
}
