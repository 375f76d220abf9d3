//! Langlands data and the parameter-level tests behind the two Arthur-type
//! reductions: peel off the shortest segments, or the segments of least `x`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::params::{multiset_remove, summand_type, ArthurParam, ArthurSummand, GroupSpec, Rho};

/// `Δ_ρ[x, -y]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub rho: Rho,
    pub x: HalfInt,
    pub y: HalfInt,
}

impl Segment {
    pub fn new(rho: Rho, x: HalfInt, y: HalfInt) -> Self {
        Segment { rho, x, y }
    }

    /// Number of cuspidal exponents, `x + y + 1`.
    pub fn len(&self) -> i64 {
        (self.x + self.y + 1).floor()
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0
    }

    /// `x + y ∈ ℤ≥0` and `x < y`.
    pub fn check(&self) -> Result<(), String> {
        let s = self.x + self.y;
        if !s.is_integer() || s < HalfInt::ZERO {
            return Err(format!("{self}: x + y must be a nonnegative integer"));
        }
        if self.x >= self.y {
            return Err(format!("{self}: x - y must be negative"));
        }
        Ok(())
    }

    fn key(&self) -> (HalfInt, &Rho, HalfInt) {
        (self.x - self.y, &self.rho, self.x)
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Langlands order: `x - y` first.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key()).then(self.y.cmp(&other.y))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({})[{},{}]", self.rho.name, self.x, -self.y)
    }
}

/// `ρ ⊗ S_a` with a sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemperedEntry {
    pub rho: Rho,
    pub a: u32,
    pub sign: i8,
}

impl fmt::Display for TemperedEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{}:{}{}", self.rho.name, HalfInt::half(self.a as i64 - 1), s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LDataError {
    #[error("representation is tempered: no segment to remove")]
    Tempered,
    #[error("invariant broken: {0}")]
    InvariantBroken(String),
    #[error("segment {0} is not in the L-data")]
    MissingSegment(Segment),
}

/// `L(Δ_1, ..., Δ_f; π(φ, ε))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LanglandsData {
    segments: Vec<Segment>,
    tempered: Vec<TemperedEntry>,
}

impl LanglandsData {
    pub fn new(mut segments: Vec<Segment>, mut tempered: Vec<TemperedEntry>) -> Result<Self, LDataError> {
        for s in &segments {
            s.check().map_err(LDataError::InvariantBroken)?;
        }
        for t in &tempered {
            if t.a == 0 || !(t.sign == 1 || t.sign == -1) {
                return Err(LDataError::InvariantBroken(format!("bad tempered entry {t}")));
            }
        }
        segments.sort();
        tempered.sort_by(|p, q| (&p.rho, p.a).cmp(&(&q.rho, q.a)));
        Ok(LanglandsData { segments, tempered })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn tempered(&self) -> &[TemperedEntry] {
        &self.tempered
    }

    pub fn is_tempered(&self) -> bool {
        self.segments.is_empty()
    }

    /// Standard dimension of the L-parameter.
    pub fn standard_dim(&self) -> u64 {
        let seg: u64 = self.segments.iter().map(|s| 2 * s.rho.dim as u64 * s.len() as u64).sum();
        let tmp: u64 = self.tempered.iter().map(|t| t.rho.dim as u64 * t.a as u64).sum();
        seg + tmp
    }

    /// Per-entry good-parity flags: segments first, then tempered entries.
    /// A segment is judged by the summand `ρ ⊗ S_{2|x|+1}` it is built on.
    pub fn good_parity_flags(&self, group: GroupSpec) -> Vec<bool> {
        let want = group.dual_type();
        let seg = self.segments.iter().map(|s| {
            let a = s.x.abs().doubled() as u32 + 1;
            summand_type(s.rho.kind, a, 1) == want
        });
        let tmp = self.tempered.iter().map(|t| summand_type(t.rho.kind, t.a, 1) == want);
        seg.chain(tmp).collect()
    }

    fn default_rho(&self, rho: Option<&Rho>) -> Result<Rho, LDataError> {
        match rho {
            Some(r) if self.segments.iter().any(|s| &s.rho == r) => Ok(r.clone()),
            Some(_) => Err(LDataError::Tempered),
            None => self.segments.first().map(|s| s.rho.clone()).ok_or(LDataError::Tempered),
        }
    }
}

impl fmt::Display for LanglandsData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tmp: Vec<String> = self.tempered.iter().map(ToString::to_string).collect();
        let tmp = format!("pi({})", tmp.join(", "));
        if self.segments.is_empty() {
            return f.write_str(&tmp);
        }
        let segs: Vec<String> = self.segments.iter().map(ToString::to_string).collect();
        write!(f, "L({}; {})", segs.join(", "), tmp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperReduction {
    pub pi_minus: LanglandsData,
    pub rho: Rho,
    pub x: HalfInt,
    pub y: HalfInt,
    pub r: usize,
}

/// Removes every copy of the `ρ`-segment with least `x - y`, ties broken by least `x`.
/// Without `rho`, the label of the first segment is used.
pub fn reduce_upper(pi: &LanglandsData, rho: Option<&Rho>) -> Result<UpperReduction, LDataError> {
    let rho = pi.default_rho(rho)?;
    let target = pi
        .segments
        .iter()
        .filter(|s| s.rho == rho)
        .min_by_key(|s| (s.x - s.y, s.x))
        .expect("label has a segment")
        .clone();
    let (keep, gone): (Vec<Segment>, Vec<Segment>) = pi.segments.iter().cloned().partition(|s| *s != target);
    Ok(UpperReduction {
        pi_minus: LanglandsData { segments: keep, tempered: pi.tempered.clone() },
        rho,
        x: target.x,
        y: target.y,
        r: gone.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerReduction {
    pub pi_minus: LanglandsData,
    pub rho: Rho,
    pub removed: Vec<Segment>,
    pub x_min: HalfInt,
}

/// Removes every `ρ`-segment whose `x` is least.
pub fn reduce_lower(pi: &LanglandsData, rho: Option<&Rho>) -> Result<LowerReduction, LDataError> {
    let rho = pi.default_rho(rho)?;
    let x_min = pi.segments.iter().filter(|s| s.rho == rho).map(|s| s.x).min().expect("label has a segment");
    let (gone, keep): (Vec<Segment>, Vec<Segment>) =
        pi.segments.iter().cloned().partition(|s| s.rho == rho && s.x == x_min);
    Ok(LowerReduction {
        pi_minus: LanglandsData { segments: keep, tempered: pi.tempered.clone() },
        rho,
        removed: gone,
        x_min,
    })
}

pub fn insert_segments(pi: &LanglandsData, segs: &[Segment]) -> Result<LanglandsData, LDataError> {
    let mut all = pi.segments.clone();
    all.extend(segs.iter().cloned());
    LanglandsData::new(all, pi.tempered.clone())
}

pub fn remove_segments(pi: &LanglandsData, segs: &[Segment]) -> Result<LanglandsData, LDataError> {
    let mut rest = pi.segments.clone();
    for s in segs {
        let pos = rest.iter().position(|t| t == s).ok_or_else(|| LDataError::MissingSegment(s.clone()))?;
        rest.remove(pos);
    }
    Ok(LanglandsData { segments: rest, tempered: pi.tempered.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxB {
    /// `-b_ρ + 1 <= min({x - y} ∪ {0})` for every label.
    pub holds: bool,
    /// Equality for every label.
    pub equality: bool,
}

pub fn max_b_check(pi: &LanglandsData, psi: &ArthurParam) -> MaxB {
    let labels: BTreeSet<Rho> =
        pi.segments.iter().map(|s| s.rho.clone()).chain(psi.summands().iter().map(|s| s.rho.clone())).collect();
    let (mut holds, mut equality) = (true, true);
    for rho in labels {
        let b = psi.block(&rho).map(|s| s.b as i64).max().unwrap_or(0);
        let lhs = HalfInt::int(1 - b);
        let rhs = pi.segments.iter().filter(|s| s.rho == rho).map(|s| s.x - s.y).fold(HalfInt::ZERO, HalfInt::min);
        holds &= lhs <= rhs;
        equality &= lhs == rhs;
    }
    MaxB { holds, equality }
}

/// Which bullets held, and the enlarged parameter when all did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateOutcome {
    pub ok: bool,
    pub failures: Vec<String>,
    pub psi_plus: Option<ArthurParam>,
}

fn abs_summand(rho: &Rho, a: HalfInt, b: HalfInt) -> Option<ArthurSummand> {
    let (a, b) = (a.to_int()?, b.to_int()?);
    (a >= 1 && b >= 1).then(|| ArthurSummand::new(rho.clone(), a as u32, b as u32))
}

fn finish(psi: &ArthurParam, failures: Vec<String>, minus: &[ArthurSummand], plus: &[ArthurSummand]) -> PredicateOutcome {
    if !failures.is_empty() {
        return PredicateOutcome { ok: false, failures, psi_plus: None };
    }
    let n = psi.group().standard_dim() + plus.iter().map(ArthurSummand::dim).sum::<u64>()
        - minus.iter().map(ArthurSummand::dim).sum::<u64>();
    let group = psi.group().with_standard_dim(n).expect("each added pair has even dimension");
    let mut rest = multiset_remove(psi.summands(), minus).expect("containment checked");
    rest.extend(plus.iter().cloned());
    PredicateOutcome { ok: true, failures, psi_plus: Some(ArthurParam::new(group, rest)) }
}

/// Parameter-level conditions for lifting along `r` copies of `Δ_ρ[x, -y]`.
pub fn predicate_upper(psi: &ArthurParam, rho: &Rho, x: HalfInt, y: HalfInt, r: usize) -> PredicateOutcome {
    let mut failures = Vec::new();
    let a = x + y + 1;
    let gap = y - x - 1;
    let minus: Vec<ArthurSummand> = match abs_summand(rho, a, gap) {
        Some(s) => vec![s; r],
        None => Vec::new(),
    };
    if !minus.is_empty() && !psi.contains_all(&minus) {
        failures.push(format!("psi lacks {r} copies of {}", minus[0]));
    }
    let top = (y - x + 1).floor();
    for s in psi.block(rho) {
        if s.b as i64 > top {
            failures.push(format!("{s} has b > {top}"));
        } else if s.b as i64 == top && HalfInt::int(s.a as i64) <= a {
            failures.push(format!("{s} has b = {top} but a <= {a}"));
        }
    }
    let plus: Vec<ArthurSummand> = match abs_summand(rho, a, y - x + 1) {
        Some(s) => vec![s; r],
        None => Vec::new(),
    };
    finish(psi, failures, &minus, &plus)
}

/// Parameter-level conditions for lifting along the removed multiset of least-`x` segments.
pub fn predicate_lower(psi: &ArthurParam, removed: &[Segment], x_min: HalfInt) -> PredicateOutcome {
    let mut failures = Vec::new();
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for s in removed {
        let a = s.x + s.y + 1;
        // a zero-width S_0 term contributes nothing
        minus.extend(abs_summand(&s.rho, a, s.y - s.x - 1));
        plus.extend(abs_summand(&s.rho, a, s.y - s.x + 1));
    }
    if !psi.contains_all(&minus) {
        failures.push("psi does not contain psi_{rho,-}".to_string());
    }
    let labels: BTreeSet<&Rho> = removed.iter().map(|s| &s.rho).collect();
    for rho in labels {
        for s in psi.block(rho) {
            if HalfInt::int(s.a as i64 - s.b as i64) <= x_min + x_min && s.b != 1 {
                failures.push(format!("{s} has a - b <= {} but b != 1", x_min + x_min));
            }
        }
    }
    finish(psi, failures, &minus, &plus)
}
