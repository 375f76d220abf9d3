//! Rank triangles of unramified L-parameters and the closure order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::orders::{OrderResult, Partition};
use crate::params::{infinitesimal_of, LParam, LSummand, Rho};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("L-parameters have different infinitesimal parameters")]
    InfinitesimalMismatch,
    #[error("L-parameters live on different groups")]
    GroupMismatch,
    #[error("eigenvalue grid of {rho} rejected: {reason}")]
    AssumptionViolated { rho: String, reason: String },
    #[error("triangle is not realizable: multiplicity of parts {part} would be {value}")]
    NegativeMultiplicity { part: usize, value: i64 },
    #[error("malformed rank triangle {0:?}")]
    Parse(String),
}

/// The block of one label with the label stripped: summands `|.|^x ⊗ S_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedLParam {
    pub summands: Vec<(HalfInt, u32)>,
    /// Sorted distinct exponents.
    pub grid: Vec<HalfInt>,
}

impl UnramifiedLParam {
    pub fn new(mut summands: Vec<(HalfInt, u32)>) -> Result<Self, String> {
        summands.sort();
        let grid = grid_of(&summands);
        check_grid(&grid)?;
        Ok(UnramifiedLParam { summands, grid })
    }

    pub fn dim(&self) -> u64 {
        self.summands.iter().map(|&(_, a)| a as u64).sum()
    }
}

fn exponents(x: HalfInt, a: u32) -> impl Iterator<Item = HalfInt> {
    let top = x + HalfInt::half(a as i64 - 1);
    (0..a as i64).map(move |k| top - k)
}

pub fn grid_of(summands: &[(HalfInt, u32)]) -> Vec<HalfInt> {
    let mut g: Vec<HalfInt> = summands.iter().flat_map(|&(x, a)| exponents(x, a)).collect();
    g.sort();
    g.dedup();
    g
}

/// Integral spacing and symmetry about zero.
pub fn check_grid(grid: &[HalfInt]) -> Result<(), String> {
    if let Some(w) = grid.windows(2).find(|w| !w[0].same_coset(w[1])) {
        return Err(format!("{} - {} is not an integer", w[1], w[0]));
    }
    let r = grid.len();
    for (k, &v) in grid.iter().enumerate() {
        if grid[r - 1 - k] != -v {
            return Err(format!("grid is not symmetric: {} has no partner {}", v, -v));
        }
    }
    Ok(())
}

/// Upper triangle `r_{αβ}`, `1 <= α <= β <= size`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RankTriangle {
    rows: Vec<Vec<u32>>,
}

impl RankTriangle {
    pub fn zero(size: usize) -> Self {
        RankTriangle { rows: (0..size).map(|k| vec![0; size - k]).collect() }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, alpha: usize, beta: usize) -> u32 {
        self.rows[alpha - 1][beta - alpha]
    }

    pub fn set(&mut self, alpha: usize, beta: usize, v: u32) {
        self.rows[alpha - 1][beta - alpha] = v;
    }

    /// Rows of the upper triangle, row `α` holding `β = α..=size`.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Option<Self> {
        let n = rows.len();
        rows.iter().enumerate().all(|(k, r)| r.len() == n - k).then_some(RankTriangle { rows })
    }

    fn add_assign(&mut self, other: &RankTriangle) {
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            for (v, w) in r.iter_mut().zip(o) {
                *v += w;
            }
        }
    }

    /// Entrywise comparison of equal-size triangles.
    pub fn compare(&self, other: &RankTriangle) -> OrderResult {
        let (mut ge, mut le) = (true, true);
        for (r, o) in self.rows.iter().zip(&other.rows) {
            for (v, w) in r.iter().zip(o) {
                ge &= v >= w;
                le &= v <= w;
            }
        }
        combine(ge, le)
    }
}

fn combine(ge: bool, le: bool) -> OrderResult {
    match (ge, le) {
        (true, true) => OrderResult::Equal,
        (true, false) => OrderResult::Greater,
        (false, true) => OrderResult::Less,
        (false, false) => OrderResult::Incomparable,
    }
}

/// `1 1 0 / 3 1 / 1`; the empty triangle prints as the empty string.
impl fmt::Display for RankTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&rows.join(" / "))
    }
}

impl FromStr for RankTriangle {
    type Err = GeometryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GeometryError::Parse(s.to_string());
        if s.trim().is_empty() {
            return Ok(RankTriangle::default());
        }
        let rows = s
            .split('/')
            .map(|r| r.split_whitespace().map(|t| t.parse::<u32>().map_err(|_| err())).collect())
            .collect::<Result<Vec<Vec<u32>>, _>>()?;
        RankTriangle::from_rows(rows).ok_or_else(err)
    }
}

/// `M_{|.|^x ⊗ S_a}` on `grid`.
pub fn m_matrix(x: HalfInt, a: u32, grid: &[HalfInt]) -> RankTriangle {
    let r = grid.len().saturating_sub(1);
    let mut m = RankTriangle::zero(r);
    if a == 1 {
        return m;
    }
    let half = HalfInt::half(a as i64 - 1);
    let (lo, hi) = (x - half, x + half);
    for alpha in 1..=r {
        for beta in alpha..=r {
            // Q is an unbroken string, so the two ends decide containment
            let (y, z) = (grid[alpha - 1], grid[beta]);
            if y.same_coset(lo) && lo <= y && z <= hi {
                m.set(alpha, beta, 1);
            }
        }
    }
    m
}

pub fn rank_triangle(phi: &UnramifiedLParam) -> RankTriangle {
    rank_triangle_on(&phi.summands, &phi.grid)
}

/// Sum of `M` over `summands`, on a caller-chosen grid.
pub fn rank_triangle_on(summands: &[(HalfInt, u32)], grid: &[HalfInt]) -> RankTriangle {
    let mut r = RankTriangle::zero(grid.len().saturating_sub(1));
    for &(x, a) in summands {
        r.add_assign(&m_matrix(x, a, grid));
    }
    r
}

/// Entry `(x, y)`, `x >= y`, of the triangle of the single summand `S_{A+B+1} ⊗ S_{A-B+1}`.
#[allow(non_snake_case)]
pub fn rank_entry_closed_form(A: HalfInt, B: HalfInt, x: HalfInt, y: HalfInt) -> u64 {
    let v = (A + B - x.max(B) - (-y).max(B) + 1).floor();
    v.max(0) as u64
}

/// Removes the largest self-dual sub-multiset common to both.
pub fn cancel_common(phi1: &LParam, phi2: &LParam) -> Result<(LParam, LParam), GeometryError> {
    if phi1.group() != phi2.group() {
        return Err(GeometryError::GroupMismatch);
    }
    if infinitesimal_of(phi1) != infinitesimal_of(phi2) {
        return Err(GeometryError::InfinitesimalMismatch);
    }
    let count = |phi: &LParam, s: &LSummand| phi.summands().iter().filter(|t| *t == s).count();
    let mut r1 = phi1.summands().to_vec();
    let mut r2 = phi2.summands().to_vec();
    let mut keys = r1.clone();
    keys.dedup();
    for s in keys.into_iter().filter(|s| s.x >= HalfInt::ZERO) {
        let k = if s.x == HalfInt::ZERO {
            count(phi1, &s).min(count(phi2, &s))
        } else {
            let m = LSummand { x: -s.x, ..s.clone() };
            count(phi1, &s).min(count(phi1, &m)).min(count(phi2, &s)).min(count(phi2, &m))
        };
        let mut drop = vec![s.clone(); k];
        if s.x != HalfInt::ZERO {
            drop.extend(std::iter::repeat_n(LSummand { x: -s.x, ..s.clone() }, k));
        }
        for d in &drop {
            remove_one(&mut r1, d);
            remove_one(&mut r2, d);
        }
    }
    Ok((LParam::new(phi1.group(), r1), LParam::new(phi2.group(), r2)))
}

fn remove_one(v: &mut Vec<LSummand>, s: &LSummand) {
    let pos = v.iter().position(|t| t == s).expect("counted above");
    v.remove(pos);
}

/// Splits `phi` by label and strips the label.
pub fn unramified_reduction(phi: &LParam) -> Result<BTreeMap<Rho, UnramifiedLParam>, GeometryError> {
    let mut blocks: BTreeMap<Rho, Vec<(HalfInt, u32)>> = BTreeMap::new();
    for s in phi.summands() {
        blocks.entry(s.rho.clone()).or_default().push((s.x, s.a));
    }
    blocks
        .into_iter()
        .map(|(rho, v)| {
            let u = UnramifiedLParam::new(v)
                .map_err(|reason| GeometryError::AssumptionViolated { rho: rho.to_string(), reason })?;
            Ok((rho, u))
        })
        .collect()
}

/// Per label: grid and rank triangle.
pub fn rank_triangles(phi: &LParam) -> Result<BTreeMap<Rho, (Vec<HalfInt>, RankTriangle)>, GeometryError> {
    Ok(unramified_reduction(phi)?
        .into_iter()
        .map(|(rho, u)| {
            let r = rank_triangle(&u);
            (rho, (u.grid, r))
        })
        .collect())
}

/// Blockwise comparison of rank triangles after cancelling the common part.
pub fn closure_compare(phi1: &LParam, phi2: &LParam) -> Result<OrderResult, GeometryError> {
    let (c1, c2) = cancel_common(phi1, phi2)?;
    let t1 = rank_triangles(&c1)?;
    let t2 = rank_triangles(&c2)?;
    let (mut ge, mut le) = (true, true);
    for (rho, (g1, r1)) in &t1 {
        let (g2, r2) = &t2[rho];
        debug_assert_eq!(g1, g2, "equal infinitesimal parameters give equal grids");
        match r1.compare(r2) {
            OrderResult::Greater => le = false,
            OrderResult::Less => ge = false,
            OrderResult::Incomparable => return Ok(OrderResult::Incomparable),
            OrderResult::Equal => {}
        }
    }
    Ok(combine(ge, le))
}

/// Recovers `[a_i]` from the triangle and the total dimension `n`.
pub fn partition_from_triangle(r: &RankTriangle, n: u64) -> Result<Partition, GeometryError> {
    let size = r.size();
    // d[s] = sum of the (s-1)-th off-diagonal
    let mut d = vec![0i64; size + 1];
    for (s, ds) in d.iter_mut().enumerate().skip(1) {
        *ds = (1..=size + 1 - s).map(|t| r.get(t, t + s - 1) as i64).sum();
    }
    let mut m = vec![0i64; size + 2];
    if size >= 1 {
        m[size + 1] = d[size];
    }
    for s in (2..=size).rev() {
        m[s] = d[s - 1] - ((s + 1)..=(size + 1)).map(|t| (t - s + 1) as i64 * m[t]).sum::<i64>();
    }
    m[1] = n as i64 - (2..=size + 1).map(|s| s as i64 * m[s]).sum::<i64>();
    if let Some((part, &value)) = m.iter().enumerate().skip(1).find(|(_, &v)| v < 0) {
        return Err(GeometryError::NegativeMultiplicity { part, value });
    }
    let mult: Vec<u64> = m[1..].iter().map(|&v| v as u64).collect();
    Ok(Partition::from_multiplicities(&mult))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: i64) -> HalfInt {
        HalfInt::half(d)
    }

    fn grid4() -> Vec<HalfInt> {
        [-3, -1, 1, 3].map(h).to_vec()
    }

    #[test]
    fn m_matrices_on_four_point_grid() {
        assert_eq!(m_matrix(h(0), 2, &grid4()).to_string(), "0 0 0 / 1 0 / 0");
        assert_eq!(m_matrix(h(1), 3, &grid4()).to_string(), "0 0 0 / 1 1 / 1");
        assert_eq!(m_matrix(h(-1), 3, &grid4()).to_string(), "1 1 0 / 1 0 / 0");
        assert_eq!(m_matrix(h(1), 1, &grid4()), RankTriangle::zero(3));
    }

    #[test]
    fn triangle_text_round_trip() {
        let t: RankTriangle = "1 1 0 / 3 1 / 1".parse().unwrap();
        assert_eq!(t.get(2, 2), 3);
        assert_eq!(t.get(1, 3), 0);
        assert_eq!(t.to_string(), "1 1 0 / 3 1 / 1");
        assert!("1 1 / 1 / 1".parse::<RankTriangle>().is_err());
        assert_eq!("".parse::<RankTriangle>().unwrap().size(), 0);
    }

    #[test]
    fn grid_rules() {
        assert!(check_grid(&[h(-2), h(2)]).is_ok());
        assert!(check_grid(&[h(-1), h(0)]).is_err());
        assert!(check_grid(&[h(-1), h(1), h(3)]).is_err());
        assert!(check_grid(&[]).is_ok());
    }

    #[test]
    fn closed_form_small_case() {
        assert_eq!(rank_entry_closed_form(h(2), h(0), h(2), h(0)), 1);
        assert_eq!(rank_entry_closed_form(h(2), h(0), h(6), h(0)), 0);
    }

    #[test]
    fn partition_recursion() {
        let t: RankTriangle = "1 1 1 / 3 1 / 1".parse().unwrap();
        assert_eq!(partition_from_triangle(&t, 8).unwrap().parts(), &[4, 2, 2]);
        let z: RankTriangle = "1 1 0 / 2 1 / 1".parse().unwrap();
        assert_eq!(partition_from_triangle(&z, 8).unwrap().parts(), &[3, 3, 1, 1]);
        assert_eq!(partition_from_triangle(&RankTriangle::zero(2), 5).unwrap().parts(), &[1, 1, 1, 1, 1]);
        let bad: RankTriangle = "0 0 5 / 0 0 / 0".parse().unwrap();
        assert!(matches!(partition_from_triangle(&bad, 4), Err(GeometryError::NegativeMultiplicity { .. })));
    }
}
