//! Partitions under dominance and the four orders on Arthur parameters.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{closure_compare, GeometryError};
use crate::operators::enumerate_raising;
use crate::params::{infinitesimal_of, partitions_of, phi_of, ArthurParam};

/// A partition, parts non-increasing and positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Builds from multiplicities: `mult[s-1]` copies of `s`.
    pub fn from_multiplicities(mult: &[u64]) -> Self {
        let mut parts = Vec::new();
        for (i, &m) in mult.iter().enumerate() {
            parts.extend(std::iter::repeat_n(i as u32 + 1, m as usize));
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }
}

/// Prints `[4,2^2]`-style exponent notation.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut i = 0;
        let mut first = true;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}^{}", self.parts[i], j - i)?;
            } else {
                write!(f, "{}", self.parts[i])?;
            }
            i = j;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderResult {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> Self {
        match self {
            OrderResult::Greater => OrderResult::Less,
            OrderResult::Less => OrderResult::Greater,
            other => other,
        }
    }

    /// `Greater` or `Equal`.
    pub fn is_ge(self) -> bool {
        matches!(self, OrderResult::Greater | OrderResult::Equal)
    }
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderResult::Greater => "Greater",
            OrderResult::Less => "Less",
            OrderResult::Equal => "Equal",
            OrderResult::Incomparable => "Incomparable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Reversed dominance on `p^A`.
    A,
    /// Dominance on `p^D`.
    D,
    /// Reachability by raising operators.
    O,
    /// Orbit closure of the L-parameters.
    C,
}

impl FromStr for OrderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(OrderKind::A),
            "D" => Ok(OrderKind::D),
            "O" => Ok(OrderKind::O),
            "C" => Ok(OrderKind::C),
            _ => Err(format!("unknown order {s:?}, expected one of O, A, D, C")),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderKind::A => "A",
            OrderKind::D => "D",
            OrderKind::O => "O",
            OrderKind::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("partitions of different totals {0} and {1}")]
    TotalMismatch(u64, u64),
    #[error("parameters live on different groups")]
    GroupMismatch,
    #[error("parameters have different infinitesimal parameters")]
    InfinitesimalMismatch,
    #[error("raising-operator search exceeded its bound ({0})")]
    SearchLimit(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn dominance_compare(p: &Partition, q: &Partition) -> Result<OrderResult, OrderError> {
    if p.total() != q.total() {
        return Err(OrderError::TotalMismatch(p.total(), q.total()));
    }
    if p == q {
        return Ok(OrderResult::Equal);
    }
    let n = p.parts.len().max(q.parts.len());
    let (mut sp, mut sq) = (0u64, 0u64);
    let (mut ge, mut le) = (true, true);
    for i in 0..n {
        sp += p.parts.get(i).copied().unwrap_or(0) as u64;
        sq += q.parts.get(i).copied().unwrap_or(0) as u64;
        ge &= sp >= sq;
        le &= sp <= sq;
    }
    Ok(match (ge, le) {
        (true, false) => OrderResult::Greater,
        (false, true) => OrderResult::Less,
        (true, true) => OrderResult::Equal,
        (false, false) => OrderResult::Incomparable,
    })
}

/// Bounds for the raising-operator search behind the `O` order.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_depth: 64, max_states: 1_000_000 }
    }
}

pub fn compare(psi1: &ArthurParam, psi2: &ArthurParam, kind: OrderKind) -> Result<OrderResult, OrderError> {
    compare_with(psi1, psi2, kind, &SearchConfig::default())
}

pub fn compare_with(
    psi1: &ArthurParam,
    psi2: &ArthurParam,
    kind: OrderKind,
    cfg: &SearchConfig,
) -> Result<OrderResult, OrderError> {
    if psi1.group() != psi2.group() {
        return Err(OrderError::GroupMismatch);
    }
    match kind {
        OrderKind::A => {
            let (a1, _) = partitions_of(psi1);
            let (a2, _) = partitions_of(psi2);
            Ok(dominance_compare(&a1, &a2)?.reverse())
        }
        OrderKind::D => {
            let (_, d1) = partitions_of(psi1);
            let (_, d2) = partitions_of(psi2);
            dominance_compare(&d1, &d2)
        }
        OrderKind::O => {
            if infinitesimal_of(&phi_of(psi1)) != infinitesimal_of(&phi_of(psi2)) {
                return Err(OrderError::InfinitesimalMismatch);
            }
            if psi1 == psi2 {
                return Ok(OrderResult::Equal);
            }
            if raises_to(psi2, psi1, cfg)? {
                Ok(OrderResult::Greater)
            } else if raises_to(psi1, psi2, cfg)? {
                Ok(OrderResult::Less)
            } else {
                Ok(OrderResult::Incomparable)
            }
        }
        OrderKind::C => closure_compare(&phi_of(psi1), &phi_of(psi2)).map_err(|e| match e {
            GeometryError::InfinitesimalMismatch => OrderError::InfinitesimalMismatch,
            other => OrderError::Geometry(other),
        }),
    }
}

/// True when a sequence of raising operators carries `from` to `to`.
pub fn raises_to(from: &ArthurParam, to: &ArthurParam, cfg: &SearchConfig) -> Result<bool, OrderError> {
    // raising lowers p^A, so only states whose p^A dominates the target's can lead there
    let target_pa = partitions_of(to).0;
    let mut seen: HashSet<ArthurParam> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(from.clone());
    queue.push_back((from.clone(), 0usize));
    while let Some((cur, depth)) = queue.pop_front() {
        if &cur == to {
            return Ok(true);
        }
        if depth == cfg.max_depth {
            return Err(OrderError::SearchLimit(format!("depth {}", cfg.max_depth)));
        }
        for (_, next) in enumerate_raising(&cur) {
            if seen.contains(&next) {
                continue;
            }
            if !dominance_compare(&partitions_of(&next).0, &target_pa)?.is_ge() {
                continue;
            }
            seen.insert(next.clone());
            if seen.len() > cfg.max_states {
                return Err(OrderError::SearchLimit(format!("{} states", cfg.max_states)));
            }
            queue.push_back((next, depth + 1));
        }
    }
    Ok(false)
}

/// `m[i][j] = compare(c_i, c_j)`.
pub fn relation_matrix(candidates: &[ArthurParam], kind: OrderKind) -> Result<Vec<Vec<OrderResult>>, OrderError> {
    let n = candidates.len();
    let mut m = vec![vec![OrderResult::Equal; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = compare(&candidates[i], &candidates[j], kind)?;
            m[i][j] = r;
            m[j][i] = r.reverse();
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremes {
    /// Indices of elements strictly below no other candidate.
    pub maxima: Vec<usize>,
    pub minima: Vec<usize>,
    /// Set when there is a single maximum and it is `>=` every candidate.
    pub unique_max: Option<usize>,
    pub unique_min: Option<usize>,
}

pub fn extremal(candidates: &[ArthurParam], kind: OrderKind) -> Result<Extremes, OrderError> {
    let m = relation_matrix(candidates, kind)?;
    let n = candidates.len();
    let maxima: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| m[j][i] != OrderResult::Greater)).collect();
    let minima: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| m[j][i] != OrderResult::Less)).collect();
    let unique = |v: &[usize], want: OrderResult| -> Option<usize> {
        match v {
            [i] if (0..n).all(|j| j == *i || m[*i][j] == want || m[*i][j] == OrderResult::Equal) => Some(*i),
            _ => None,
        }
    };
    Ok(Extremes {
        unique_max: unique(&maxima, OrderResult::Greater),
        unique_min: unique(&minima, OrderResult::Less),
        maxima,
        minima,
    })
}

/// A covering pair: `upper` covers `lower`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cover {
    pub upper: usize,
    pub lower: usize,
}

/// Transitive reduction of the strict relation, sorted.
pub fn poset_edges(candidates: &[ArthurParam], kind: OrderKind) -> Result<Vec<Cover>, OrderError> {
    let m = relation_matrix(candidates, kind)?;
    Ok(covers_from_matrix(&m))
}

pub fn covers_from_matrix(m: &[Vec<OrderResult>]) -> Vec<Cover> {
    let n = m.len();
    let gt = |i: usize, j: usize| m[i][j] == OrderResult::Greater;
    let mut out = Vec::new();
    for upper in 0..n {
        for lower in 0..n {
            if gt(upper, lower) && !(0..n).any(|z| gt(upper, z) && gt(z, lower)) {
                out.push(Cover { upper, lower });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ArthurSummand, GroupSpec, Rho};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance_compare(&p(&[4, 2, 2]), &p(&[4, 2, 1, 1])).unwrap(), OrderResult::Greater);
        assert_eq!(dominance_compare(&p(&[4, 2, 1, 1]), &p(&[4, 2, 2])).unwrap(), OrderResult::Less);
        assert_eq!(dominance_compare(&p(&[3, 1]), &p(&[3, 1])).unwrap(), OrderResult::Equal);
        assert_eq!(
            dominance_compare(&p(&[3, 3, 1, 1]), &p(&[4, 1, 1, 1, 1])).unwrap(),
            OrderResult::Incomparable
        );
        assert!(matches!(dominance_compare(&p(&[2]), &p(&[1])), Err(OrderError::TotalMismatch(2, 1))));
    }

    #[test]
    fn partition_display_and_multiplicities() {
        assert_eq!(p(&[4, 2, 2]).to_string(), "[4,2^2]");
        assert_eq!(p(&[1, 1, 1]).to_string(), "[1^3]");
        assert_eq!(Partition::from_multiplicities(&[0, 2, 0, 1]), p(&[4, 2, 2]));
    }

    fn psi(v: &[(u32, u32)]) -> ArthurParam {
        ArthurParam::new(GroupSpec::so(4), v.iter().map(|&(a, b)| ArthurSummand::new(Rho::trivial(), a, b)).collect())
    }

    #[test]
    fn a_order_is_reversed_dominance() {
        let tempered = psi(&[(2, 1), (2, 1), (4, 1)]);
        let other = psi(&[(1, 2), (3, 2)]);
        assert_eq!(compare(&tempered, &other, OrderKind::A).unwrap(), OrderResult::Greater);
        assert_eq!(compare(&tempered, &tempered, OrderKind::O).unwrap(), OrderResult::Equal);
    }

    #[test]
    fn chain_has_one_cover() {
        let hi = psi(&[(2, 1), (2, 1), (4, 1)]);
        let lo = psi(&[(1, 2), (2, 1), (4, 1)]);
        let edges = poset_edges(&[hi, lo], OrderKind::O).unwrap();
        assert_eq!(edges, vec![Cover { upper: 0, lower: 1 }]);
    }

    #[test]
    fn mismatched_lambda_is_an_error() {
        let a = psi(&[(8, 1)]);
        let b = psi(&[(2, 1), (2, 1), (4, 1)]);
        assert!(matches!(compare(&a, &b, OrderKind::O), Err(OrderError::InfinitesimalMismatch)));
        assert!(matches!(compare(&a, &b, OrderKind::C), Err(OrderError::InfinitesimalMismatch)));
    }
}
