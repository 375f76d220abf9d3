//! Extended multi-segments `E = ∪_ρ {([A_i,B_i]_ρ, l_i, η_i)}`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::ldata::Segment;
use crate::params::{validate_parameter, ArthurParam, ArthurSummand, GroupSpec, Rho};

/// `([A, B], l, η)`.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtSegment {
    pub A: HalfInt,
    pub B: HalfInt,
    pub l: i64,
    pub eta: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowFault {
    /// `l` outside `0..=b/2`.
    LRange,
    /// `A - B` not a nonnegative integer.
    Width,
    /// `A + B < 0`.
    APlusB,
    /// `η` not `±1`.
    Eta,
}

#[allow(non_snake_case)]
impl ExtSegment {
    /// Builds a row, storing `η = +1` when `2l = b`.
    pub fn new(A: HalfInt, B: HalfInt, l: i64, eta: i8) -> Self {
        ExtSegment { A, B, l, eta }.normalized()
    }

    pub fn normalized(mut self) -> Self {
        if 2 * self.l == self.width() {
            self.eta = 1;
        }
        self
    }

    /// `b = A - B + 1`.
    pub fn width(&self) -> i64 {
        (self.A - self.B + 1).floor()
    }

    pub fn faults(&self) -> Vec<RowFault> {
        let mut f = Vec::new();
        let d = self.A - self.B;
        if !d.is_integer() || d < HalfInt::ZERO {
            f.push(RowFault::Width);
        }
        if self.l < 0 || 2 * self.l > self.width() {
            f.push(RowFault::LRange);
        }
        if self.A + self.B < HalfInt::ZERO {
            f.push(RowFault::APlusB);
        }
        if self.eta != 1 && self.eta != -1 {
            f.push(RowFault::Eta);
        }
        f
    }

    /// `(-1)^{⌊b/2⌋ + l} η^b`.
    pub fn sign_factor(&self) -> i8 {
        let b = self.width();
        let mut s: i8 = if (b / 2 + self.l) % 2 == 0 { 1 } else { -1 };
        if b % 2 == 1 {
            s *= self.eta;
        }
        s
    }

    pub fn summand(&self, rho: &Rho) -> Option<ArthurSummand> {
        ArthurSummand::from_ab(rho.clone(), self.A, self.B)
    }

    /// One cell per exponent `B..=A`: `<` and `>` for the `l` outer pairs,
    /// alternating `+`/`-` in between starting from `η`.
    pub fn symbol(&self) -> String {
        let b = self.width().max(0);
        let mut out = String::new();
        let mut sign = self.eta;
        for k in 0..b {
            if k < self.l {
                out.push('<');
            } else if k >= b - self.l {
                out.push('>');
            } else {
                out.push(if sign > 0 { '+' } else { '-' });
                sign = -sign;
            }
        }
        out
    }
}

impl fmt::Display for ExtSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "([{},{}],{},{})", self.A, self.B, self.l, self.eta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ems {
    pub group: GroupSpec,
    pub blocks: BTreeMap<Rho, Vec<ExtSegment>>,
}

impl Ems {
    pub fn new(group: GroupSpec, blocks: BTreeMap<Rho, Vec<ExtSegment>>) -> Self {
        let blocks = blocks
            .into_iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| (k, v.into_iter().map(ExtSegment::normalized).collect()))
            .collect();
        Ems { group, blocks }
    }

    /// A single-label multi-segment.
    pub fn single(group: GroupSpec, rho: Rho, rows: Vec<ExtSegment>) -> Self {
        Ems::new(group, BTreeMap::from([(rho, rows)]))
    }

    pub fn block(&self, rho: &Rho) -> &[ExtSegment] {
        self.blocks.get(rho).map(Vec::as_slice).unwrap_or(&[])
    }

    fn with_block(&self, rho: &Rho, rows: Vec<ExtSegment>) -> Ems {
        let mut blocks = self.blocks.clone();
        blocks.insert(rho.clone(), rows);
        let group = self.group;
        let mut e = Ems::new(group, blocks);
        e.group = group_for(&e).unwrap_or(group);
        e
    }

    pub fn is_tempered(&self) -> bool {
        self.blocks.values().flatten().all(|r| r.A == r.B)
    }
}

/// The group matching the dimension of `ψ_E`, same family.
fn group_for(e: &Ems) -> Option<GroupSpec> {
    let dim: u64 = e
        .blocks
        .iter()
        .flat_map(|(rho, rows)| rows.iter().map(move |r| rho.dim as u64 * (r.A + r.B + 1).floor().max(0) as u64 * r.width().max(0) as u64))
        .sum();
    e.group.with_standard_dim(dim)
}

impl fmt::Display for Ems {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group)?;
        for (rho, rows) in &self.blocks {
            write!(f, " {}:", rho)?;
            for r in rows {
                write!(f, " {}", r)?;
            }
        }
        Ok(())
    }
}

/// Rows drawn on a common column grid, one block after another.
pub fn render_symbol(e: &Ems) -> String {
    let mut out = String::new();
    for (rho, rows) in &e.blocks {
        out.push_str(&format!("{}\n", rho));
        let Some(lo) = rows.iter().map(|r| r.B).min() else { continue };
        for r in rows {
            let pad = (r.B - lo).floor() as usize;
            let cells: String = r.symbol().chars().map(|c| format!("{c} ")).collect();
            out.push_str(&format!("  {}{}  [{},{}]\n", "  ".repeat(pad), cells.trim_end(), r.A, r.B));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub rho: Rho,
    pub index: usize,
    pub faults: Vec<RowFault>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmsReport {
    pub rows: Vec<RowReport>,
    pub rows_ok: bool,
    /// Labels whose order is not admissible.
    pub inadmissible: Vec<Rho>,
    pub p_prime: bool,
    pub sign_product: i8,
    pub sign_ok: bool,
    pub good_parity: bool,
    pub dimension_ok: bool,
    /// Everything but `(P')`.
    pub valid: bool,
}

pub fn validate_ems(e: &Ems) -> EmsReport {
    let mut rows = Vec::new();
    let mut inadmissible = Vec::new();
    let mut p_prime = true;
    let mut sign = 1i8;
    for (rho, block) in &e.blocks {
        for (i, r) in block.iter().enumerate() {
            rows.push(RowReport { rho: rho.clone(), index: i, faults: r.faults() });
            sign *= r.sign_factor();
        }
        if !admissible(block) {
            inadmissible.push(rho.clone());
        }
        p_prime &= satisfies_p_prime(block);
    }
    let rows_ok = rows.iter().all(|r| r.faults.is_empty());
    let (good_parity, dimension_ok) = if rows_ok {
        let rep = validate_parameter(&psi_of_ems(e));
        (rep.good_parity, rep.dimension_ok)
    } else {
        (false, false)
    };
    let sign_ok = sign == 1;
    EmsReport {
        valid: rows_ok && inadmissible.is_empty() && sign_ok && good_parity && dimension_ok,
        rows,
        rows_ok,
        inadmissible,
        p_prime,
        sign_product: sign,
        sign_ok,
        good_parity,
        dimension_ok,
    }
}

/// No later row lies strictly below-left of an earlier one.
pub fn admissible(block: &[ExtSegment]) -> bool {
    block
        .iter()
        .enumerate()
        .all(|(i, r)| block[i + 1..].iter().all(|s| !(s.A < r.A && s.B < r.B)))
}

/// `B` is non-decreasing along the order.
pub fn satisfies_p_prime(block: &[ExtSegment]) -> bool {
    block.windows(2).all(|w| w[0].B <= w[1].B)
}

/// `ψ_E`: `(a, b) = (A + B + 1, A - B + 1)` for every row.
///
/// Panics on rows whose `(a, b)` are not positive integers; validate first.
pub fn psi_of_ems(e: &Ems) -> ArthurParam {
    let mut out = Vec::new();
    for (rho, rows) in &e.blocks {
        for r in rows {
            out.push(r.summand(rho).unwrap_or_else(|| panic!("row {r} has no summand")));
        }
    }
    ArthurParam::new(e.group, out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmsError {
    #[error("invariant broken: {0}")]
    InvariantBroken(String),
    #[error("no row of width greater than one")]
    NoWideRow,
    #[error("block order does not satisfy (P')")]
    PPrimeViolated,
    #[error("a row exchange would be needed: {0}")]
    RowExchangeRequired(String),
    #[error("a row to shrink has l = 0")]
    LZero,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("multi-segment is not tempered with all signs +1")]
    NotTemperedAllPlus,
    #[error("no row {index} in block {rho}")]
    NoSuchRow { rho: Rho, index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Shift,
    Add,
}

/// `sh^d` or `add^d` on one row; `None` when the row disappears.
pub fn move_row(r: &ExtSegment, d: i64, mode: Mode) -> Result<Option<ExtSegment>, EmsError> {
    let out = match mode {
        Mode::Shift => ExtSegment { A: r.A + d, B: r.B + d, ..r.clone() },
        Mode::Add => ExtSegment { A: r.A + d, B: r.B - d, l: r.l + d, eta: r.eta },
    };
    if mode == Mode::Add && out.width() == 0 && out.l == 0 {
        return Ok(None);
    }
    let faults = out.faults();
    if !faults.is_empty() {
        return Err(EmsError::InvariantBroken(format!("{r} becomes {out}: {faults:?}")));
    }
    Ok(Some(out.normalized()))
}

/// Applies `sh^d`/`add^d` to row `j` of the `rho` block.
pub fn shift_add(e: &Ems, rho: &Rho, j: usize, d: i64, mode: Mode) -> Result<Ems, EmsError> {
    let block = e.block(rho);
    if j >= block.len() {
        return Err(EmsError::NoSuchRow { rho: rho.clone(), index: j });
    }
    apply_rows(e, rho, &[j], d, mode)
}

/// `sh_ρ^d`/`add_ρ^d` on every row of the block.
pub fn shift_add_block(e: &Ems, rho: &Rho, d: i64, mode: Mode) -> Result<Ems, EmsError> {
    let all: Vec<usize> = (0..e.block(rho).len()).collect();
    apply_rows(e, rho, &all, d, mode)
}

fn apply_rows(e: &Ems, rho: &Rho, idx: &[usize], d: i64, mode: Mode) -> Result<Ems, EmsError> {
    let mut rows = Vec::new();
    for (i, r) in e.block(rho).iter().enumerate() {
        if idx.contains(&i) {
            rows.extend(move_row(r, d, mode)?);
        } else {
            rows.push(r.clone());
        }
    }
    Ok(e.with_block(rho, rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMinus {
    pub ems: Ems,
    pub removed: Segment,
    pub r: usize,
}

/// Shrinks every copy of the first widest row of the block by `add^{-1}`.
pub fn e_minus(e: &Ems, rho: &Rho) -> Result<EMinus, EmsError> {
    let block = e.block(rho);
    if !satisfies_p_prime(block) {
        return Err(EmsError::PPrimeViolated);
    }
    let widest = block.iter().map(ExtSegment::width).max().unwrap_or(0);
    if widest <= 1 {
        return Err(EmsError::NoWideRow);
    }
    let j1 = block.iter().position(|r| r.width() == widest).expect("max exists");
    let (a, b) = (block[j1].A, block[j1].B);
    let same_b: Vec<usize> = (j1..block.len()).filter(|&i| block[i].B == b).collect();
    if let Some(&i) = same_b.iter().find(|&&i| block[i].A != a) {
        return Err(EmsError::RowExchangeRequired(format!(
            "row {} follows the widest row {} with the same B",
            block[i], block[j1]
        )));
    }
    let ems = apply_rows(e, rho, &same_b, -1, Mode::Add)?;
    Ok(EMinus { ems, removed: Segment::new(rho.clone(), b, a), r: same_b.len() })
}

/// Shrinks the rows `[A, B*]` with `A > B*`, `B*` least among non-singleton rows.
pub fn e_rho_minus(e: &Ems, rho: &Rho) -> Result<(Ems, Vec<Segment>), EmsError> {
    let block = e.block(rho);
    if !satisfies_p_prime(block) {
        return Err(EmsError::PPrimeViolated);
    }
    let b_star = block.iter().filter(|r| r.A != r.B).map(|r| r.B).min().ok_or(EmsError::NoWideRow)?;
    let class = |r: &ExtSegment| {
        if r.B > b_star {
            3
        } else if r.A == r.B {
            1
        } else {
            2
        }
    };
    if block.windows(2).any(|w| class(&w[0]) > class(&w[1])) {
        return Err(EmsError::RowExchangeRequired(format!("rows are not grouped around B = {b_star}")));
    }
    let middle: Vec<usize> = (0..block.len()).filter(|&i| class(&block[i]) == 2).collect();
    if middle.iter().any(|&i| block[i].l == 0) {
        return Err(EmsError::LZero);
    }
    let removed = middle.iter().map(|&i| Segment::new(rho.clone(), block[i].B, block[i].A)).collect();
    Ok((apply_rows(e, rho, &middle, -1, Mode::Add)?, removed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlusBranch {
    Identity,
    /// `r` copies of `([y, x], 1, 1)` were inserted.
    Insert,
    /// `add^1` on `r` rows `[y-1, x+1]`.
    Add,
}

/// Builds `E⁺` lifting `r` copies of `Δ_ρ[x, -y]`.
pub fn e_plus_upper(e: &Ems, rho: &Rho, x: HalfInt, y: HalfInt, r: usize) -> Result<(Ems, PlusBranch), EmsError> {
    if r == 0 {
        return Ok((e.clone(), PlusBranch::Identity));
    }
    let block = e.block(rho);
    if !satisfies_p_prime(block) {
        return Err(EmsError::PPrimeViolated);
    }
    let fail = |m: String| Err(EmsError::HypothesisFailed(m));
    let gap = y - x - 1;
    if gap < HalfInt::ZERO || !gap.is_integer() {
        return fail(format!("y - x - 1 = {gap} is not a nonnegative integer"));
    }
    if gap == HalfInt::ZERO {
        if block.iter().any(|s| s.width() > 2) {
            return fail("some row is wider than 2".into());
        }
        if y < HalfInt::ZERO {
            return fail(format!("y = {y} is negative"));
        }
        if block.iter().any(|s| !s.A.same_coset(y)) {
            return fail(format!("y = {y} is in the wrong coset"));
        }
        if block.iter().any(|s| s.width() == 2 && s.A + s.B + 1 == y + y) {
            return fail(format!("psi_E contains S{}.S2", y + y));
        }
        if block.iter().any(|s| s.B <= x && s.A != s.B) {
            return fail(format!("a row with B <= {x} has A != B"));
        }
        let cut = block.iter().take_while(|s| s.B <= x).count();
        if block[cut..].iter().any(|s| s.B <= x) {
            return fail("rows with B <= x are not an initial run".into());
        }
        let mut rows = block[..cut].to_vec();
        rows.extend(std::iter::repeat_n(ExtSegment::new(y, x, 1, 1), r));
        rows.extend_from_slice(&block[cut..]);
        check_rows(&rows)?;
        return Ok((e.with_block(rho, rows), PlusBranch::Insert));
    }
    let (ta, tb) = (y - 1, x + 1);
    let Some(j1) = block.iter().position(|s| s.A == ta && s.B == tb) else {
        return fail(format!("no row [{ta},{tb}]"));
    };
    if j1 + r > block.len() || block[j1..j1 + r].iter().any(|s| s.A != ta || s.B != tb) {
        return fail(format!("fewer than {r} adjacent rows [{ta},{tb}]"));
    }
    if block[..j1].iter().any(|s| s.B == tb) {
        return fail(format!("an earlier row has B = {tb}"));
    }
    let w = block[j1].width() + 2;
    if block.iter().any(|s| s.width() > w) {
        return fail(format!("some row is wider than {w}"));
    }
    if block[..j1].iter().any(|s| s.width() == w) {
        return fail(format!("an earlier row has width {w}"));
    }
    let idx: Vec<usize> = (j1..j1 + r).collect();
    Ok((apply_rows(e, rho, &idx, 1, Mode::Add)?, PlusBranch::Add))
}

fn check_rows(rows: &[ExtSegment]) -> Result<(), EmsError> {
    match rows.iter().find(|r| !r.faults().is_empty()) {
        Some(r) => Err(EmsError::InvariantBroken(format!("{r}: {:?}", r.faults()))),
        None => Ok(()),
    }
}

/// Builds `E_+` from `E` and the removed least-`x` segments.
pub fn e_plus_lower(e: &Ems, rho: &Rho, removed: &[Segment]) -> Result<Ems, EmsError> {
    let fail = |m: String| Err(EmsError::DecompositionFailed(m));
    let Some(x) = removed.iter().map(|s| s.x).min() else {
        return Ok(e.clone());
    };
    if removed.iter().any(|s| &s.rho != rho || s.x != x) {
        return fail("removed segments must share the label and the least x".into());
    }
    let block = e.block(rho);
    if !satisfies_p_prime(block) {
        return Err(EmsError::PPrimeViolated);
    }
    let m = removed.iter().filter(|s| s.y == x + 1).count();
    let mut targets: Vec<HalfInt> = removed.iter().filter(|s| s.y > x + 1).map(|s| s.y - 1).collect();
    targets.sort();
    let low: Vec<&ExtSegment> = block.iter().filter(|s| s.B <= x).collect();
    if low.iter().any(|s| s.A != s.B) {
        return fail(format!("a row with B <= {x} has A != B"));
    }
    let n1 = low.len();
    let mid_all: Vec<usize> = (n1..block.len()).filter(|&i| block[i].B == x + 1).collect();
    if mid_all.len() < targets.len() {
        return fail(format!("too few rows with B = {}", x + 1));
    }
    let mid = &mid_all[..targets.len()];
    let mut got: Vec<HalfInt> = mid.iter().map(|&i| block[i].A).collect();
    got.sort();
    if got != targets {
        return fail(format!("the first rows with B = {} do not match the removed segments", x + 1));
    }
    let mut rows: Vec<ExtSegment> = block[..n1].to_vec();
    rows.extend(std::iter::repeat_n(ExtSegment::new(x + 1, x, 1, 1), m));
    for &i in mid {
        rows.extend(move_row(&block[i], 1, Mode::Add)?);
    }
    rows.extend((n1..block.len()).filter(|i| !mid.contains(i)).map(|i| block[i].clone()));
    check_rows(&rows)?;
    Ok(e.with_block(rho, rows))
}

/// `dual` of a tempered multi-segment with all signs `+1`.
pub fn dual_tempered_ems(e: &Ems) -> Result<Ems, EmsError> {
    let mut blocks = BTreeMap::new();
    for (rho, rows) in &e.blocks {
        if rows.iter().any(|r| r.A != r.B || r.l != 0 || r.eta != 1) {
            return Err(EmsError::NotTemperedAllPlus);
        }
        let out: Vec<ExtSegment> = rows.iter().rev().map(|r| ExtSegment::new(r.A, -r.A, r.A.ceil(), 1)).collect();
        blocks.insert(rho.clone(), out);
    }
    Ok(Ems::new(e.group, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: i64) -> HalfInt {
        HalfInt::half(d)
    }

    fn row(a: i64, b: i64, l: i64, eta: i8) -> ExtSegment {
        ExtSegment::new(h(a), h(b), l, eta)
    }

    fn tr() -> Rho {
        Rho::trivial()
    }

    fn chain_e() -> Ems {
        Ems::single(GroupSpec::sp(5), tr(), vec![row(6, -6, 3, 1), row(2, -2, 1, -1), row(0, 0, 0, -1)])
    }

    #[test]
    fn chain_fixture_is_valid() {
        let rep = validate_ems(&chain_e());
        assert!(rep.valid, "{rep:?}");
        assert_eq!(rep.sign_product, 1);
        assert!(rep.p_prime);
        assert_eq!(chain_e().block(&tr())[0].symbol(), "<<<+>>>");
        assert_eq!(row(5, -1, 1, -1).symbol(), "<-+>");
    }

    #[test]
    fn l_range_is_flagged() {
        let e = Ems::single(GroupSpec::sp(1), tr(), vec![row(2, 0, 2, 1)]);
        let rep = validate_ems(&e);
        assert!(!rep.valid);
        assert_eq!(rep.rows[0].faults, vec![RowFault::LRange]);
    }

    #[test]
    fn add_minus_one_on_top_row() {
        let out = shift_add(&chain_e(), &tr(), 0, -1, Mode::Add).unwrap();
        assert_eq!(out.block(&tr())[0], row(4, -4, 2, 1));
        assert_eq!(out.group, GroupSpec::sp(4));
        assert_eq!(shift_add(&chain_e(), &tr(), 1, 0, Mode::Shift).unwrap(), chain_e());
    }

    #[test]
    fn add_removes_empty_rows() {
        let e = Ems::single(GroupSpec::sp(2), tr(), vec![row(2, 0, 1, 1)]);
        let out = shift_add(&e, &tr(), 0, -1, Mode::Add).unwrap();
        assert!(out.blocks.is_empty());
    }

    #[test]
    fn e_minus_reports_all_copies() {
        let e = Ems::single(GroupSpec::sp(11), tr(), vec![row(4, 0, 1, 1), row(4, 0, 1, 1), row(4, 4, 0, 1)]);
        assert!(validate_ems(&e).valid);
        let out = e_minus(&e, &tr()).unwrap();
        assert_eq!(out.r, 2);
        assert_eq!(out.removed, Segment::new(tr(), h(0), h(4)));
        assert_eq!(out.ems.block(&tr()), &[row(2, 2, 0, 1), row(2, 2, 0, 1), row(4, 4, 0, 1)]);
        assert_eq!(out.ems.group, GroupSpec::sp(5));
        let flat = Ems::single(GroupSpec::sp(0), tr(), vec![row(0, 0, 0, 1)]);
        assert_eq!(e_minus(&flat, &tr()), Err(EmsError::NoWideRow));
        assert_eq!(e_rho_minus(&flat, &tr()), Err(EmsError::NoWideRow));
    }

    #[test]
    fn dual_of_tempered() {
        let e = Ems::single(GroupSpec::so(3), tr(), vec![row(1, 1, 0, 1), row(3, 3, 0, 1)]);
        let d = dual_tempered_ems(&e).unwrap();
        assert_eq!(d.block(&tr()), &[row(3, -3, 2, 1), row(1, -1, 1, 1)]);
        assert_eq!(psi_of_ems(&d), crate::params::dual_psi(&psi_of_ems(&e)));
        let bad = Ems::single(GroupSpec::so(3), tr(), vec![row(1, 1, 0, -1), row(3, 3, 0, 1)]);
        assert_eq!(dual_tempered_ems(&bad), Err(EmsError::NotTemperedAllPlus));
    }

    #[test]
    fn upper_insert_between_rows() {
        let e = Ems::single(GroupSpec::so(6), tr(), vec![row(1, 1, 0, 1), row(3, 3, 0, 1), row(5, 5, 0, 1)]);
        let (out, br) = e_plus_upper(&e, &tr(), h(3), h(5), 1).unwrap();
        assert_eq!(br, PlusBranch::Insert);
        assert_eq!(out.block(&tr()), &[row(1, 1, 0, 1), row(3, 3, 0, 1), row(5, 3, 1, 1), row(5, 5, 0, 1)]);
        assert_eq!(out.group, GroupSpec::so(11));
        let (same, br) = e_plus_upper(&e, &tr(), h(3), h(5), 0).unwrap();
        assert_eq!((same, br), (e, PlusBranch::Identity));
    }
}
