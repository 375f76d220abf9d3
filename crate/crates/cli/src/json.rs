//! JSON forms of multi-segments, L-data and segment lists.
//!
//! Half-integers are strings (`"3"`, `"-1/2"`) so they round-trip exactly.

use std::collections::BTreeMap;

use arthurlab::ldata::TemperedEntry;
use arthurlab::{Ems, ExtSegment, GroupSpec, HalfInt, LanglandsData, Rho, Segment, SelfDualType};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RhoJson {
    pub name: String,
    pub dim: u32,
    #[serde(rename = "type")]
    pub kind: String,
}

#[allow(non_snake_case)]
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RowJson {
    pub A: String,
    pub B: String,
    pub l: i64,
    pub eta: i8,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BlockJson {
    pub rho: RhoJson,
    pub rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EmsJson {
    pub group: String,
    pub blocks: Vec<BlockJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SegmentJson {
    pub rho: RhoJson,
    pub x: String,
    pub y: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TemperedJson {
    pub rho: RhoJson,
    pub a: u32,
    pub sign: i8,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct LDataJson {
    pub segments: Vec<SegmentJson>,
    pub tempered: Vec<TemperedJson>,
}

fn invalid(msg: impl Into<String>) -> JsonError {
    JsonError::Invalid(msg.into())
}

fn half(s: &str) -> Result<HalfInt, JsonError> {
    s.parse().map_err(|_| invalid(format!("bad half-integer {s:?}")))
}

pub fn rho_to_json(r: &Rho) -> RhoJson {
    RhoJson { name: r.name.clone(), dim: r.dim, kind: r.kind.letter().to_string() }
}

pub fn rho_from_json(r: &RhoJson) -> Result<Rho, JsonError> {
    let mut k = r.kind.chars();
    let kind = match (k.next().and_then(SelfDualType::from_letter), k.next()) {
        (Some(t), None) => t,
        _ => return Err(invalid(format!("rho type must be \"O\" or \"S\", got {:?}", r.kind))),
    };
    let name_ok = r.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && r.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !name_ok || r.dim == 0 {
        return Err(invalid(format!("bad rho {:?}({})", r.name, r.dim)));
    }
    Ok(Rho::new(r.name.clone(), r.dim, kind))
}

pub fn ems_to_json(e: &Ems) -> EmsJson {
    EmsJson {
        group: e.group.to_string(),
        blocks: e
            .blocks
            .iter()
            .map(|(rho, rows)| BlockJson {
                rho: rho_to_json(rho),
                rows: rows
                    .iter()
                    .map(|r| RowJson { A: r.A.to_string(), B: r.B.to_string(), l: r.l, eta: r.eta })
                    .collect(),
            })
            .collect(),
    }
}

pub fn ems_from_json(j: &EmsJson) -> Result<Ems, JsonError> {
    let group: GroupSpec = j.group.parse().map_err(|e| invalid(format!("{e}")))?;
    let mut blocks = BTreeMap::new();
    for b in &j.blocks {
        let rho = rho_from_json(&b.rho)?;
        let mut rows = Vec::new();
        for r in &b.rows {
            if r.eta != 1 && r.eta != -1 {
                return Err(invalid(format!("eta must be 1 or -1, got {}", r.eta)));
            }
            rows.push(ExtSegment::new(half(&r.A)?, half(&r.B)?, r.l, r.eta));
        }
        if blocks.insert(rho.clone(), rows).is_some() {
            return Err(invalid(format!("label {rho} appears in two blocks")));
        }
    }
    Ok(Ems::new(group, blocks))
}

pub fn segment_to_json(s: &Segment) -> SegmentJson {
    SegmentJson { rho: rho_to_json(&s.rho), x: s.x.to_string(), y: s.y.to_string() }
}

pub fn segment_from_json(s: &SegmentJson) -> Result<Segment, JsonError> {
    let seg = Segment::new(rho_from_json(&s.rho)?, half(&s.x)?, half(&s.y)?);
    seg.check().map_err(invalid)?;
    Ok(seg)
}

pub fn ldata_to_json(pi: &LanglandsData) -> LDataJson {
    LDataJson {
        segments: pi.segments().iter().map(segment_to_json).collect(),
        tempered: pi
            .tempered()
            .iter()
            .map(|t| TemperedJson { rho: rho_to_json(&t.rho), a: t.a, sign: t.sign })
            .collect(),
    }
}

pub fn ldata_from_json(j: &LDataJson) -> Result<LanglandsData, JsonError> {
    let segs = j.segments.iter().map(segment_from_json).collect::<Result<Vec<_>, _>>()?;
    let temp = j
        .tempered
        .iter()
        .map(|t| Ok(TemperedEntry { rho: rho_from_json(&t.rho)?, a: t.a, sign: t.sign }))
        .collect::<Result<Vec<_>, JsonError>>()?;
    LanglandsData::new(segs, temp).map_err(|e| invalid(e.to_string()))
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

pub fn ems_to_value(e: &Ems) -> Value {
    to_value(&ems_to_json(e))
}

pub fn ems_from_value(v: &Value) -> Result<Ems, JsonError> {
    ems_from_json(&EmsJson::deserialize(v)?)
}

pub fn ldata_to_value(pi: &LanglandsData) -> Value {
    to_value(&ldata_to_json(pi))
}

pub fn ldata_from_value(v: &Value) -> Result<LanglandsData, JsonError> {
    ldata_from_json(&LDataJson::deserialize(v)?)
}

pub fn segments_to_value(segs: &[Segment]) -> Value {
    to_value(&segs.iter().map(segment_to_json).collect::<Vec<_>>())
}

pub fn segments_from_value(v: &Value) -> Result<Vec<Segment>, JsonError> {
    Vec::<SegmentJson>::deserialize(v)?.iter().map(segment_from_json).collect()
}

/// Compact one-line text.
pub fn print_ems(e: &Ems) -> String {
    serde_json::to_string(&ems_to_json(e)).expect("plain data serializes")
}

pub fn parse_ems(text: &str) -> Result<Ems, JsonError> {
    ems_from_json(&serde_json::from_str(text)?)
}

pub fn print_ldata(pi: &LanglandsData) -> String {
    serde_json::to_string(&ldata_to_json(pi)).expect("plain data serializes")
}

pub fn parse_ldata(text: &str) -> Result<LanglandsData, JsonError> {
    ldata_from_json(&serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ems_format() {
        let text = r#"{"group":"Sp:10","blocks":[{"rho":{"name":"tr","dim":1,"type":"O"},"rows":[{"A":"3","B":"-3","l":3,"eta":1}]}]}"#;
        let e = parse_ems(text).unwrap();
        assert_eq!(e.group, GroupSpec::sp(5));
        assert_eq!(print_ems(&e), text);
    }

    #[test]
    fn ldata_format() {
        let text = r#"{"segments":[{"rho":{"name":"tr","dim":1,"type":"O"},"x":"-1/2","y":"5/2"}],"tempered":[{"rho":{"name":"tr","dim":1,"type":"O"},"a":2,"sign":-1}]}"#;
        let pi = parse_ldata(text).unwrap();
        assert_eq!(pi.to_string(), "L(D(tr)[-1/2,-5/2]; pi(tr:1/2-))");
        assert_eq!(print_ldata(&pi), text);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_ems(r#"{"group":"Sp:9","blocks":[]}"#).is_err());
        let bad_eta = r#"{"group":"Sp:2","blocks":[{"rho":{"name":"tr","dim":1,"type":"O"},"rows":[{"A":"1","B":"1","l":0,"eta":2}]}]}"#;
        assert!(parse_ems(bad_eta).is_err());
        let bad_seg = r#"{"segments":[{"rho":{"name":"tr","dim":1,"type":"O"},"x":"1","y":"1"}],"tempered":[]}"#;
        assert!(parse_ldata(bad_seg).is_err());
        assert!(parse_ldata("{").is_err());
    }
}
