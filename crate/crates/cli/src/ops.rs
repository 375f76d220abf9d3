//! Every operation as `name + JSON input -> JSON output`.
//!
//! Subcommands build an input object from their arguments and fixtures carry
//! one directly, so both go through [`run_op`].

use std::fmt;

use arthurlab::geometry::{
    cancel_common, closure_compare, m_matrix, partition_from_triangle, rank_entry_closed_form, rank_triangles,
    unramified_reduction,
};
use arthurlab::ldata::{
    insert_segments, max_b_check, predicate_lower, predicate_upper, reduce_lower, reduce_upper, PredicateOutcome,
};
use arthurlab::multisegments::{
    dual_tempered_ems, e_minus, e_plus_lower, e_plus_upper, e_rho_minus, psi_of_ems, render_symbol, shift_add,
    validate_ems, Mode,
};
use arthurlab::operators::{apply, dual_transport, enumerate_lowering, enumerate_raising, ui_applicable};
use arthurlab::orders::{dominance_compare, extremal, poset_edges, OrderKind, OrderResult};
use arthurlab::params::{
    dual_psi, extremal_parameters_of_lambda, good_parity_split, infinitesimal_of, partitions_of, phi_of,
    validate_parameter,
};
use arthurlab::{ArthurParam, Ems, GroupSpec, HalfInt, LParam, LanglandsData, OperatorDescriptor, RankTriangle, Rho, Segment};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dsl::{self, ParseError, Parsed};
use crate::json::{self as js, JsonError};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing input.
    #[error("{0}")]
    Usage(String),
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] JsonError),
    /// The operation rejected a well-formed input.
    #[error("{kind}: {message}")]
    Failed { kind: String, message: String },
}

impl CliError {
    /// 1 for a rejected operation, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed { .. } => 1,
            _ => 2,
        }
    }
}

/// Variant name from the `Debug` form.
fn failed<E: fmt::Debug + fmt::Display>(e: E) -> CliError {
    let dbg = format!("{e:?}");
    let kind: String = dbg.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
    CliError::Failed { kind, message: e.to_string() }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Field access on an input object.
pub struct Input<'a>(&'a Value);

impl<'a> Input<'a> {
    fn get(&self, key: &str) -> Result<&'a Value, CliError> {
        self.0.get(key).filter(|v| !v.is_null()).ok_or_else(|| usage(format!("missing field {key:?}")))
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.0.get(key).filter(|v| !v.is_null())
    }

    fn str(&self, key: &str) -> Result<&'a str, CliError> {
        self.get(key)?.as_str().ok_or_else(|| usage(format!("field {key:?} must be a string")))
    }

    fn uint(&self, key: &str) -> Result<u64, CliError> {
        self.get(key)?.as_u64().ok_or_else(|| usage(format!("field {key:?} must be a nonnegative integer")))
    }

    fn int(&self, key: &str) -> Result<i64, CliError> {
        self.get(key)?.as_i64().ok_or_else(|| usage(format!("field {key:?} must be an integer")))
    }

    fn half(&self, key: &str) -> Result<HalfInt, CliError> {
        half_of(self.get(key)?, key)
    }

    fn group(&self) -> Result<GroupSpec, CliError> {
        self.str("group")?.parse().map_err(|e| usage(format!("{e}")))
    }

    fn rho(&self, key: &str) -> Result<Rho, CliError> {
        match self.get(key)? {
            Value::String(s) => Ok(dsl::parse_rho(s)?),
            v => Ok(js::rho_from_json(&serde_json::from_value(v.clone()).map_err(JsonError::from)?)?),
        }
    }

    fn opt_rho(&self, key: &str) -> Result<Option<Rho>, CliError> {
        self.opt(key).map(|_| self.rho(key)).transpose()
    }

    fn psi(&self, key: &str) -> Result<ArthurParam, CliError> {
        Ok(dsl::parse_arthur(self.str(key)?, self.group()?)?)
    }

    fn psis(&self, key: &str) -> Result<Vec<ArthurParam>, CliError> {
        let g = self.group()?;
        let arr = self.get(key)?.as_array().ok_or_else(|| usage(format!("field {key:?} must be a list")))?;
        arr.iter()
            .map(|v| {
                let s = v.as_str().ok_or_else(|| usage(format!("entries of {key:?} must be strings")))?;
                Ok(dsl::parse_arthur(s, g)?)
            })
            .collect()
    }

    /// An L-parameter, or the L-parameter of an Arthur parameter.
    fn phi(&self, key: &str) -> Result<LParam, CliError> {
        Ok(match dsl::parse_dsl(self.str(key)?, self.group()?)? {
            Parsed::Arthur(p) => phi_of(&p),
            Parsed::L(p) => p,
        })
    }

    fn order(&self) -> Result<OrderKind, CliError> {
        self.str("order")?.parse::<OrderKind>().map_err(usage)
    }

    fn ems(&self) -> Result<Ems, CliError> {
        Ok(js::ems_from_value(self.get("ems")?)?)
    }

    fn ldata(&self) -> Result<LanglandsData, CliError> {
        Ok(js::ldata_from_value(self.get("ldata")?)?)
    }

    fn segments(&self, key: &str) -> Result<Vec<Segment>, CliError> {
        Ok(js::segments_from_value(self.get(key)?)?)
    }

    fn op(&self) -> Result<OperatorDescriptor, CliError> {
        self.str("op")?.parse().map_err(|e| usage(format!("{e}")))
    }
}

fn half_of(v: &Value, key: &str) -> Result<HalfInt, CliError> {
    match v {
        Value::String(s) => Ok(dsl::parse_half(s)?),
        Value::Number(n) => n.as_i64().map(HalfInt::int).ok_or_else(|| usage(format!("field {key:?} must be a half-integer"))),
        _ => Err(usage(format!("field {key:?} must be a half-integer"))),
    }
}

fn ab_of(s: &arthurlab::ArthurSummand) -> (HalfInt, HalfInt) {
    (s.A(), s.B())
}

fn psi_value(p: &ArthurParam) -> Value {
    json!({ "group": p.group().to_string(), "psi": p.to_string() })
}

fn result_value(r: OrderResult) -> Value {
    Value::String(r.to_string())
}

fn outcome_value(o: &PredicateOutcome) -> Value {
    json!({ "ok": o.ok, "failures": o.failures, "psi_plus": o.psi_plus.as_ref().map(psi_value) })
}

fn halves(v: &[HalfInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Label of a single raising step from `lower` to `upper`, if there is one.
pub fn step_label(lower: &ArthurParam, upper: &ArthurParam) -> Option<&'static str> {
    enumerate_raising(lower).into_iter().find(|(_, r)| r == upper).map(|(op, _)| op.kind.label())
}

/// Names accepted by [`run_op`].
pub const OPS: &[&str] = &[
    "parse",
    "validate",
    "split",
    "dual",
    "phi",
    "lambda",
    "partitions",
    "extremal-params",
    "dominance",
    "compare",
    "extremal",
    "poset",
    "ui-applicable",
    "apply",
    "raising",
    "lowering",
    "transport",
    "cancel",
    "unramified",
    "m-matrix",
    "rank-triangles",
    "closed-form",
    "closure",
    "triangle-partition",
    "validate-ems",
    "psi-of-ems",
    "shift-add",
    "e-minus",
    "e-rho-minus",
    "e-plus-upper",
    "e-plus-lower",
    "dual-tempered",
    "show-ldata",
    "reduce-upper",
    "reduce-lower",
    "max-b",
    "predicate-upper",
    "predicate-lower",
    "insert",
];

pub fn run_op(op: &str, input: &Value) -> Result<Value, CliError> {
    let i = Input(input);
    Ok(match op {
        "parse" => {
            let p = dsl::parse_dsl(i.str("text")?, i.group()?)?;
            let kind = if matches!(p, Parsed::Arthur(_)) { "arthur" } else { "l" };
            json!({ "kind": kind, "text": p.to_string() })
        }
        "validate" => {
            let r = validate_parameter(&i.psi("psi")?);
            json!({
                "dimension": r.dimension,
                "expected_dimension": r.expected_dimension,
                "dimension_ok": r.dimension_ok,
                "good_parity": r.good_parity,
                "summand_good_parity": r.summand_good_parity,
            })
        }
        "split" => {
            let (psi1, psi0) = good_parity_split(&i.psi("psi")?).map_err(failed)?;
            let psi1: Vec<String> = psi1.iter().map(ToString::to_string).collect();
            json!({ "psi1": psi1, "psi0": psi_value(&psi0) })
        }
        "dual" => json!({ "psi": dual_psi(&i.psi("psi")?).to_string() }),
        "phi" => json!({ "phi": phi_of(&i.psi("psi")?).to_string() }),
        "lambda" => json!({ "lambda": infinitesimal_of(&i.phi("param")?).to_string() }),
        "partitions" => {
            let (a, d) = partitions_of(&i.psi("psi")?);
            json!({ "pA": a.to_string(), "pD": d.to_string() })
        }
        "extremal-params" => {
            let (open, zero) = extremal_parameters_of_lambda(&i.psi("psi")?);
            json!({ "open": open.to_string(), "zero": zero.to_string() })
        }
        "dominance" => {
            let p = dsl::parse_partition(i.str("p")?)?;
            let q = dsl::parse_partition(i.str("q")?)?;
            json!({ "result": result_value(dominance_compare(&p, &q).map_err(failed)?) })
        }
        "compare" => {
            let (l, r) = (i.psi("left")?, i.psi("right")?);
            let res = arthurlab::compare(&l, &r, i.order()?).map_err(failed)?;
            let mut out = Map::new();
            out.insert("result".into(), result_value(res));
            if res == OrderResult::Equal && l != r {
                out.insert("note".into(), "preorder-equal, parameters differ".into());
            }
            Value::Object(out)
        }
        "extremal" => {
            let e = extremal(&i.psis("params")?, i.order()?).map_err(failed)?;
            json!({ "maxima": e.maxima, "minima": e.minima, "unique_max": e.unique_max, "unique_min": e.unique_min })
        }
        "poset" => {
            let ps = i.psis("params")?;
            let kind = i.order()?;
            let edges: Vec<Value> = poset_edges(&ps, kind)
                .map_err(failed)?
                .iter()
                .map(|c| {
                    let label = (kind == OrderKind::O).then(|| step_label(&ps[c.lower], &ps[c.upper])).flatten();
                    let mut m = Map::new();
                    m.insert("upper".into(), c.upper.into());
                    m.insert("lower".into(), c.lower.into());
                    if let Some(l) = label {
                        m.insert("label".into(), l.into());
                    }
                    Value::Object(m)
                })
                .collect();
            let nodes: Vec<String> = ps.iter().map(ToString::to_string).collect();
            json!({ "nodes": nodes, "edges": edges })
        }
        "ui-applicable" => {
            let psi = i.psi("psi")?;
            let (si, sj) = (dsl::parse_summand(i.str("i")?)?, dsl::parse_summand(i.str("j")?)?);
            if si.rho != sj.rho {
                return Err(usage("i and j must share a label"));
            }
            json!({ "applicable": ui_applicable(&psi, &si.rho, ab_of(&si), ab_of(&sj)) })
        }
        "apply" => {
            let out = apply(&i.psi("psi")?, &i.op()?);
            json!({ "psi": out.result.to_string(), "identity": out.identity })
        }
        "raising" | "lowering" => {
            let psi = i.psi("psi")?;
            let moves = if op == "raising" { enumerate_raising(&psi) } else { enumerate_lowering(&psi) };
            let moves: Vec<Value> =
                moves.iter().map(|(o, r)| json!({ "op": o.to_string(), "psi": r.to_string() })).collect();
            json!({ "moves": moves })
        }
        "transport" => json!({ "op": dual_transport(&i.op()?).map_err(failed)?.to_string() }),
        "cancel" => {
            let (l, r) = cancel_common(&i.phi("left")?, &i.phi("right")?).map_err(failed)?;
            json!({ "left": l.to_string(), "right": r.to_string() })
        }
        "unramified" => {
            let blocks: Vec<Value> = unramified_reduction(&i.phi("param")?)
                .map_err(failed)?
                .iter()
                .map(|(rho, u)| {
                    let summands: Vec<Value> =
                        u.summands.iter().map(|(x, a)| json!({ "x": x.to_string(), "a": a })).collect();
                    json!({ "rho": rho.to_string(), "summands": summands, "grid": halves(&u.grid) })
                })
                .collect();
            json!({ "blocks": blocks })
        }
        "m-matrix" => {
            let grid = i
                .get("grid")?
                .as_array()
                .ok_or_else(|| usage("field \"grid\" must be a list"))?
                .iter()
                .map(|v| half_of(v, "grid"))
                .collect::<Result<Vec<_>, _>>()?;
            let a = u32::try_from(i.uint("a")?).map_err(|_| usage("a out of range"))?;
            if a == 0 {
                return Err(usage("a must be positive"));
            }
            json!({ "matrix": m_matrix(i.half("x")?, a, &grid).to_string() })
        }
        "rank-triangles" => {
            let blocks: Vec<Value> = rank_triangles(&i.phi("param")?)
                .map_err(failed)?
                .iter()
                .map(|(rho, (grid, t))| json!({ "rho": rho.to_string(), "grid": halves(grid), "triangle": t.to_string() }))
                .collect();
            json!({ "blocks": blocks })
        }
        "closed-form" => {
            let (a, b, x, y) = (i.half("A")?, i.half("B")?, i.half("x")?, i.half("y")?);
            if x < y {
                return Err(usage("closed-form needs x >= y"));
            }
            json!({ "value": rank_entry_closed_form(a, b, x, y) })
        }
        "closure" => {
            json!({ "result": result_value(closure_compare(&i.phi("left")?, &i.phi("right")?).map_err(failed)?) })
        }
        "triangle-partition" => {
            let t: RankTriangle = i.str("triangle")?.parse().map_err(|e| usage(format!("{e}")))?;
            json!({ "partition": partition_from_triangle(&t, i.uint("n")?).map_err(failed)?.to_string() })
        }
        "validate-ems" => {
            let e = i.ems()?;
            let r = validate_ems(&e);
            let faults: Vec<Value> = r
                .rows
                .iter()
                .filter(|f| !f.faults.is_empty())
                .map(|f| json!({ "rho": f.rho.to_string(), "index": f.index, "faults": format!("{:?}", f.faults) }))
                .collect();
            let inadmissible: Vec<String> = r.inadmissible.iter().map(ToString::to_string).collect();
            json!({
                "valid": r.valid,
                "rows_ok": r.rows_ok,
                "row_faults": faults,
                "inadmissible": inadmissible,
                "p_prime": r.p_prime,
                "sign_product": r.sign_product,
                "sign_ok": r.sign_ok,
                "good_parity": r.good_parity,
                "dimension_ok": r.dimension_ok,
                "symbol": render_symbol(&e),
            })
        }
        "psi-of-ems" => psi_value(&psi_of_ems(&i.ems()?)),
        "shift-add" => {
            let mode = match i.str("mode")? {
                "shift" => Mode::Shift,
                "add" => Mode::Add,
                m => return Err(usage(format!("mode must be \"shift\" or \"add\", got {m:?}"))),
            };
            let j = i.uint("j")? as usize;
            let e = shift_add(&i.ems()?, &i.rho("rho")?, j, i.int("d")?, mode).map_err(failed)?;
            json!({ "ems": js::ems_to_value(&e) })
        }
        "e-minus" => {
            let out = e_minus(&i.ems()?, &i.rho("rho")?).map_err(failed)?;
            json!({ "ems": js::ems_to_value(&out.ems), "removed": js::to_value(&js::segment_to_json(&out.removed)), "r": out.r })
        }
        "e-rho-minus" => {
            let (e, gone) = e_rho_minus(&i.ems()?, &i.rho("rho")?).map_err(failed)?;
            json!({ "ems": js::ems_to_value(&e), "removed": js::segments_to_value(&gone) })
        }
        "e-plus-upper" => {
            let r = i.uint("r")? as usize;
            let (e, br) = e_plus_upper(&i.ems()?, &i.rho("rho")?, i.half("x")?, i.half("y")?, r).map_err(failed)?;
            json!({ "ems": js::ems_to_value(&e), "branch": format!("{br:?}") })
        }
        "e-plus-lower" => {
            let e = e_plus_lower(&i.ems()?, &i.rho("rho")?, &i.segments("removed")?).map_err(failed)?;
            json!({ "ems": js::ems_to_value(&e) })
        }
        "dual-tempered" => json!({ "ems": js::ems_to_value(&dual_tempered_ems(&i.ems()?).map_err(failed)?) }),
        "show-ldata" => {
            let pi = i.ldata()?;
            json!({ "text": pi.to_string(), "standard_dim": pi.standard_dim(), "tempered": pi.is_tempered() })
        }
        "reduce-upper" => {
            let red = reduce_upper(&i.ldata()?, i.opt_rho("rho")?.as_ref()).map_err(failed)?;
            json!({
                "ldata": js::ldata_to_value(&red.pi_minus),
                "text": red.pi_minus.to_string(),
                "rho": red.rho.to_string(),
                "x": red.x.to_string(),
                "y": red.y.to_string(),
                "r": red.r,
            })
        }
        "reduce-lower" => {
            let red = reduce_lower(&i.ldata()?, i.opt_rho("rho")?.as_ref()).map_err(failed)?;
            json!({
                "ldata": js::ldata_to_value(&red.pi_minus),
                "text": red.pi_minus.to_string(),
                "rho": red.rho.to_string(),
                "removed": js::segments_to_value(&red.removed),
                "x_min": red.x_min.to_string(),
            })
        }
        "max-b" => {
            let m = max_b_check(&i.ldata()?, &i.psi("psi")?);
            json!({ "holds": m.holds, "equality": m.equality })
        }
        "predicate-upper" => {
            let r = i.uint("r")? as usize;
            outcome_value(&predicate_upper(&i.psi("psi")?, &i.rho("rho")?, i.half("x")?, i.half("y")?, r))
        }
        "predicate-lower" => outcome_value(&predicate_lower(&i.psi("psi")?, &i.segments("removed")?, i.half("x_min")?)),
        "insert" => {
            let pi = insert_segments(&i.ldata()?, &i.segments("segments")?).map_err(failed)?;
            json!({ "ldata": js::ldata_to_value(&pi), "text": pi.to_string() })
        }
        other => return Err(usage(format!("unknown operation {other:?}"))),
    })
}

/// `{"error": kind}` for a rejected operation, the output otherwise.
pub fn run_op_or_error(op: &str, input: &Value) -> Result<Value, CliError> {
    match run_op(op, input) {
        Err(CliError::Failed { kind, .. }) => Ok(json!({ "error": kind })),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_reports_preorder_note() {
        let v = run_op(
            "compare",
            &json!({ "group": "SO:5", "left": "tr(1,O).S1.S2 + tr(1,O).S2.S1", "right": "tr(1,O).S2.S1 + tr(1,O).S1.S2", "order": "A" }),
        )
        .unwrap();
        assert_eq!(v["result"], "Equal");
        assert!(v.get("note").is_none());
    }

    #[test]
    fn unknown_op_is_usage() {
        assert_eq!(run_op("nope", &json!({})).unwrap_err().exit_code(), 2);
        assert_eq!(run_op("dual", &json!({ "group": "SO:5" })).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn failures_carry_variant_name() {
        let e = json!({ "group": "Sp:2", "blocks": [{ "rho": { "name": "tr", "dim": 1, "type": "O" }, "rows": [{ "A": "1", "B": "1", "l": 0, "eta": 1 }] }] });
        let out = run_op_or_error("e-minus", &json!({ "ems": e, "rho": "tr(1,O)" })).unwrap();
        assert_eq!(out, json!({ "error": "NoWideRow" }));
    }

    #[test]
    fn every_listed_op_dispatches() {
        for op in OPS {
            match run_op(op, &json!({})) {
                Err(CliError::Usage(m)) => assert!(!m.starts_with("unknown operation"), "{op}"),
                Err(CliError::Parse(_)) | Err(CliError::Json(_)) => {}
                other => panic!("{op}: {other:?}"),
            }
        }
    }
}
