//! The operators `ui`, `dual ∘ ui ∘ dual`, `dual^±` and their inverses.
//!
//! Summands are addressed by value: a label together with `(A, B)`.
//! Each descriptor names the pair in the coordinates the elementary `ui`
//! acts on, so an operator and its inverse carry the same payload.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::params::{dual_psi, ArthurParam, ArthurSummand, Rho, SelfDualType};

/// `(A, B)` of a summand.
pub type Ab = (HalfInt, HalfInt);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    UiInverse,
    DualUiDual,
    DualMinus,
    Ui,
    DualUiDualInverse,
    DualPlus,
}

impl OpKind {
    pub const ALL: [OpKind; 6] = [
        OpKind::UiInverse,
        OpKind::DualUiDual,
        OpKind::DualMinus,
        OpKind::Ui,
        OpKind::DualUiDualInverse,
        OpKind::DualPlus,
    ];

    pub fn is_raising(self) -> bool {
        matches!(self, OpKind::UiInverse | OpKind::DualUiDual | OpKind::DualMinus)
    }

    pub fn inverse(self) -> OpKind {
        match self {
            OpKind::UiInverse => OpKind::Ui,
            OpKind::Ui => OpKind::UiInverse,
            OpKind::DualUiDual => OpKind::DualUiDualInverse,
            OpKind::DualUiDualInverse => OpKind::DualUiDual,
            OpKind::DualMinus => OpKind::DualPlus,
            OpKind::DualPlus => OpKind::DualMinus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OpKind::UiInverse => "ui^-1",
            OpKind::DualUiDual => "dual.ui.dual",
            OpKind::DualMinus => "dual-",
            OpKind::Ui => "ui",
            OpKind::DualUiDualInverse => "dual.ui^-1.dual",
            OpKind::DualPlus => "dual+",
        }
    }

    pub fn from_label(s: &str) -> Option<OpKind> {
        OpKind::ALL.into_iter().find(|k| k.label() == s)
    }

    fn takes_pair(self) -> bool {
        !matches!(self, OpKind::DualMinus | OpKind::DualPlus)
    }
}

/// One operator application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperatorDescriptor {
    pub kind: OpKind,
    pub rho: Rho,
    pub first: Ab,
    /// Present for every kind except `dual±`.
    pub second: Option<Ab>,
}

impl OperatorDescriptor {
    pub fn pair(kind: OpKind, rho: Rho, i: Ab, j: Ab) -> Self {
        OperatorDescriptor { kind, rho, first: i, second: Some(j) }
    }

    pub fn single(kind: OpKind, rho: Rho, s: Ab) -> Self {
        OperatorDescriptor { kind, rho, first: s, second: None }
    }

    /// The inverse operator; it undoes `self` wherever `self` acts.
    pub fn inverse(&self) -> Self {
        let kind = self.kind.inverse();
        match kind {
            OpKind::DualMinus => OperatorDescriptor::single(kind, self.rho.clone(), (self.first.0, -HalfInt::HALF)),
            OpKind::DualPlus => OperatorDescriptor::single(kind, self.rho.clone(), (self.first.0, HalfInt::HALF)),
            _ => OperatorDescriptor { kind, ..self.clone() },
        }
    }
}

impl fmt::Display for OperatorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]({},{})", self.kind.label(), self.rho, self.first.0, self.first.1)?;
        if let Some((a, b)) = self.second {
            write!(f, "({},{})", a, b)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("operator {} is not a raising operator", .0.label())]
    BadKind(OpKind),
    #[error("malformed operator {0:?}")]
    Parse(String),
}

impl FromStr for OperatorDescriptor {
    type Err = OpError;

    /// `KIND[name(dim,T)](A,B)` or `KIND[name(dim,T)](A,B)(A,B)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OpError::Parse(s.to_string());
        let s = s.trim();
        let open = s.find('[').ok_or_else(err)?;
        let kind = OpKind::from_label(&s[..open]).ok_or_else(err)?;
        let close = s.find(']').ok_or_else(err)?;
        let rho = parse_rho(&s[open + 1..close]).ok_or_else(err)?;
        let mut rest = &s[close + 1..];
        let mut pairs = Vec::new();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let end = body.find(')').ok_or_else(err)?;
            let (a, b) = body[..end].split_once(',').ok_or_else(err)?;
            let a: HalfInt = a.parse().map_err(|_| err())?;
            let b: HalfInt = b.parse().map_err(|_| err())?;
            pairs.push((a, b));
            rest = &body[end + 1..];
        }
        match (kind.takes_pair(), pairs.as_slice()) {
            (true, [i, j]) => Ok(OperatorDescriptor::pair(kind, rho, *i, *j)),
            (false, [i]) => Ok(OperatorDescriptor::single(kind, rho, *i)),
            _ => Err(err()),
        }
    }
}

/// Parses `name(dim,T)`.
pub fn parse_rho(s: &str) -> Option<Rho> {
    let s = s.trim();
    let open = s.find('(')?;
    let body = s[open + 1..].strip_suffix(')')?;
    let (dim, kind) = body.split_once(',')?;
    let name = &s[..open];
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    let dim: u32 = dim.trim().parse().ok().filter(|&d| d >= 1)?;
    let mut k = kind.trim().chars();
    let kind = SelfDualType::from_letter(k.next()?)?;
    if k.next().is_some() {
        return None;
    }
    Some(Rho::new(name, dim, kind))
}

fn summand(rho: &Rho, ab: Ab) -> Option<ArthurSummand> {
    ArthurSummand::from_ab(rho.clone(), ab.0, ab.1)
}

/// Whether `ui_{i,j}` applies to `psi`, both summands given by value.
pub fn ui_applicable(psi: &ArthurParam, rho: &Rho, i: Ab, j: Ab) -> bool {
    let (ai, bi) = i;
    let (aj, bj) = j;
    if !(aj > ai && ai + 1 >= bj && bj > bi) {
        return false;
    }
    let (Some(si), Some(sj)) = (summand(rho, i), summand(rho, j)) else {
        return false;
    };
    if psi.count(&si) == 0 || psi.count(&sj) == 0 {
        return false;
    }
    // no other summand (any copy) with B strictly between may nest strictly inside [A_i, A_j]
    psi.block(rho).all(|r| {
        let (ar, br) = (r.A(), r.B());
        !(bi < br && br < bj) || ar <= ai || ar >= aj
    })
}

/// `ui_{i,j}(psi)`, or `None` when it does not apply.
pub fn ui_apply(psi: &ArthurParam, rho: &Rho, i: Ab, j: Ab) -> Option<ArthurParam> {
    if !ui_applicable(psi, rho, i, j) {
        return None;
    }
    let mut add = vec![summand(rho, (j.0, i.1))?];
    if i.0 + 1 != j.1 {
        add.push(summand(rho, (i.0, j.1))?);
    }
    psi.replace(&[summand(rho, i)?, summand(rho, j)?], &add)
}

/// All applicable `ui` pairs of `psi`, in canonical order.
pub fn ui_moves(psi: &ArthurParam) -> Vec<(Rho, Ab, Ab, ArthurParam)> {
    let mut out = Vec::new();
    for rho in psi.rhos() {
        let vals = distinct_ab(psi, &rho);
        for &i in &vals {
            for &j in &vals {
                if let Some(r) = ui_apply(psi, &rho, i, j) {
                    out.push((rho.clone(), i, j, r));
                }
            }
        }
    }
    out
}

/// All `(i, j, psi')` with `ui_{i,j}(psi') = psi`.
pub fn ui_preimages(psi: &ArthurParam) -> Vec<(Rho, Ab, Ab, ArthurParam)> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for rho in psi.rhos() {
        let vals = distinct_ab(psi, &rho);
        let mut cands: Vec<(Ab, Ab)> = Vec::new();
        for &(ap, bp) in &vals {
            // image of a type 3' move: a single summand (A_j, B_i)
            let mut t = bp;
            while t < ap {
                cands.push(((t, bp), (ap, t + 1)));
                t = t + 1;
            }
            for &(aq, bq) in &vals {
                if ap > aq && aq + 1 > bq && bq > bp {
                    cands.push(((aq, bp), (ap, bq)));
                }
            }
        }
        for (i, j) in cands {
            if !seen.insert((rho.clone(), i, j)) {
                continue;
            }
            if let Some(pre) = ui_preimage(psi, &rho, i, j) {
                out.push((rho.clone(), i, j, pre));
            }
        }
    }
    out
}

/// The `psi'` containing `i, j` with `ui_{i,j}(psi') = psi`, if any.
pub fn ui_preimage(psi: &ArthurParam, rho: &Rho, i: Ab, j: Ab) -> Option<ArthurParam> {
    let mut image = vec![summand(rho, (j.0, i.1))?];
    if i.0 + 1 != j.1 {
        image.push(summand(rho, (i.0, j.1))?);
    }
    let pre = psi.replace(&image, &[summand(rho, i)?, summand(rho, j)?])?;
    (ui_apply(&pre, rho, i, j).as_ref() == Some(psi)).then_some(pre)
}

fn distinct_ab(psi: &ArthurParam, rho: &Rho) -> Vec<Ab> {
    let mut v: Vec<Ab> = psi.block(rho).map(|s| (s.A(), s.B())).collect();
    v.sort();
    v.dedup();
    v
}

/// Outcome of [`apply`]: `identity` is set when the operator does not act.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub result: ArthurParam,
    pub identity: bool,
}

/// Applies `op`; operators that do not act return `psi` unchanged.
pub fn apply(psi: &ArthurParam, op: &OperatorDescriptor) -> Applied {
    let rho = &op.rho;
    let got = match (op.kind, op.second) {
        (OpKind::Ui, Some(j)) => ui_apply(psi, rho, op.first, j),
        (OpKind::UiInverse, Some(j)) => ui_preimage(psi, rho, op.first, j),
        (OpKind::DualUiDual, Some(j)) => ui_apply(&dual_psi(psi), rho, op.first, j).map(|r| dual_psi(&r)),
        (OpKind::DualUiDualInverse, Some(j)) => {
            ui_preimage(&dual_psi(psi), rho, op.first, j).map(|r| dual_psi(&r))
        }
        (OpKind::DualMinus, None) => dual_flip(psi, rho, op.first, false),
        (OpKind::DualPlus, None) => dual_flip(psi, rho, op.first, true),
        _ => None,
    };
    match got {
        Some(result) => Applied { result, identity: false },
        None => Applied { result: psi.clone(), identity: true },
    }
}

/// `dual^-` turns the summand `(A, -1/2)` into its dual `(A, 1/2)`; `dual^+` reverses that.
fn dual_flip(psi: &ArthurParam, rho: &Rho, s: Ab, plus: bool) -> Option<ArthurParam> {
    let want = if plus { HalfInt::HALF } else { -HalfInt::HALF };
    if s.1 != want {
        return None;
    }
    let from = summand(rho, s)?;
    psi.replace(std::slice::from_ref(&from), &[from.dual()])
}

/// Every raising move out of `psi`, deduplicated by result.
pub fn enumerate_raising(psi: &ArthurParam) -> Vec<(OperatorDescriptor, ArthurParam)> {
    let mut moves = Vec::new();
    for (rho, i, j, r) in ui_preimages(psi) {
        moves.push((OperatorDescriptor::pair(OpKind::UiInverse, rho, i, j), r));
    }
    for (rho, i, j, r) in ui_moves(&dual_psi(psi)) {
        moves.push((OperatorDescriptor::pair(OpKind::DualUiDual, rho, i, j), dual_psi(&r)));
    }
    moves.extend(dual_moves(psi, false));
    dedup_by_result(moves)
}

/// Every lowering move out of `psi`, deduplicated by result.
pub fn enumerate_lowering(psi: &ArthurParam) -> Vec<(OperatorDescriptor, ArthurParam)> {
    let mut moves = Vec::new();
    for (rho, i, j, r) in ui_moves(psi) {
        moves.push((OperatorDescriptor::pair(OpKind::Ui, rho, i, j), r));
    }
    for (rho, i, j, r) in ui_preimages(&dual_psi(psi)) {
        moves.push((OperatorDescriptor::pair(OpKind::DualUiDualInverse, rho, i, j), dual_psi(&r)));
    }
    moves.extend(dual_moves(psi, true));
    dedup_by_result(moves)
}

fn dual_moves(psi: &ArthurParam, plus: bool) -> Vec<(OperatorDescriptor, ArthurParam)> {
    let (kind, want) = if plus { (OpKind::DualPlus, HalfInt::HALF) } else { (OpKind::DualMinus, -HalfInt::HALF) };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for s in psi.summands() {
        if s.B() == want && seen.insert(s.clone()) {
            let op = OperatorDescriptor::single(kind, s.rho.clone(), (s.A(), s.B()));
            let r = psi.replace(std::slice::from_ref(s), &[s.dual()]).expect("summand is present");
            out.push((op, r));
        }
    }
    out
}

fn dedup_by_result(moves: Vec<(OperatorDescriptor, ArthurParam)>) -> Vec<(OperatorDescriptor, ArthurParam)> {
    let mut seen = HashSet::new();
    moves.into_iter().filter(|(_, r)| seen.insert(r.clone())).collect()
}

/// The operator `T^` with `dual(T(psi)) = T^(dual(psi))`.
/// `ui^-1` and `dual∘ui∘dual` trade places with the same payload.
pub fn dual_transport(op: &OperatorDescriptor) -> Result<OperatorDescriptor, OpError> {
    let kind = match op.kind {
        OpKind::UiInverse => OpKind::DualUiDual,
        OpKind::DualUiDual => OpKind::UiInverse,
        OpKind::DualMinus => OpKind::DualMinus,
        k => return Err(OpError::BadKind(k)),
    };
    Ok(OperatorDescriptor { kind, ..op.clone() })
}
