//! Supercuspidal labels, groups, Arthur parameters, L-parameters and the
//! basic maps between them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::halfint::HalfInt;
use crate::orders::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SelfDualType {
    Orthogonal,
    Symplectic,
}

impl SelfDualType {
    pub fn letter(self) -> char {
        match self {
            SelfDualType::Orthogonal => 'O',
            SelfDualType::Symplectic => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'O' => Some(SelfDualType::Orthogonal),
            'S' => Some(SelfDualType::Symplectic),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            SelfDualType::Orthogonal => SelfDualType::Symplectic,
            SelfDualType::Symplectic => SelfDualType::Orthogonal,
        }
    }
}

/// A self-dual supercuspidal label `name(dim,type)`. The name is opaque.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rho {
    pub name: String,
    pub dim: u32,
    pub kind: SelfDualType,
}

impl Rho {
    pub fn new(name: impl Into<String>, dim: u32, kind: SelfDualType) -> Self {
        Rho { name: name.into(), dim, kind }
    }

    /// The trivial character, `tr(1,O)`.
    pub fn trivial() -> Self {
        Rho::new("tr", 1, SelfDualType::Orthogonal)
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.name, self.dim, self.kind.letter())
    }
}

/// Type of `rho ⊗ S_a ⊗ S_b`: `S_a ⊗ S_b` is orthogonal iff `a + b` is even.
pub fn summand_type(kind: SelfDualType, a: u32, b: u32) -> SelfDualType {
    if (a + b).is_multiple_of(2) {
        kind
    } else {
        kind.flip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Sp,
    SoOdd,
}

/// `Sp(2n)` or split `SO(2n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: u32,
}

impl GroupSpec {
    pub fn sp(rank: u32) -> Self {
        GroupSpec { family: Family::Sp, rank }
    }

    pub fn so(rank: u32) -> Self {
        GroupSpec { family: Family::SoOdd, rank }
    }

    /// Dimension of the standard representation of the dual group.
    pub fn standard_dim(self) -> u64 {
        match self.family {
            Family::Sp => 2 * self.rank as u64 + 1,
            Family::SoOdd => 2 * self.rank as u64,
        }
    }

    /// Type every good-parity summand must have.
    pub fn dual_type(self) -> SelfDualType {
        match self.family {
            Family::Sp => SelfDualType::Orthogonal,
            Family::SoOdd => SelfDualType::Symplectic,
        }
    }

    /// The group of the same family whose dual has standard dimension `n`.
    pub fn with_standard_dim(self, n: u64) -> Option<Self> {
        match self.family {
            Family::Sp if n % 2 == 1 => Some(GroupSpec::sp(((n - 1) / 2) as u32)),
            Family::SoOdd if n.is_multiple_of(2) => Some(GroupSpec::so((n / 2) as u32)),
            _ => None,
        }
    }

    /// Size of the matrices of the group itself, as written in `Sp:10`.
    pub fn matrix_size(self) -> u64 {
        match self.family {
            Family::Sp => 2 * self.rank as u64,
            Family::SoOdd => 2 * self.rank as u64 + 1,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Sp => "Sp",
            Family::SoOdd => "SO",
        };
        write!(f, "{}:{}", fam, self.matrix_size())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid group {0:?}: expected Sp:<even> or SO:<odd>")]
pub struct GroupParseError(pub String);

impl FromStr for GroupSpec {
    type Err = GroupParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupParseError(s.to_string());
        let (fam, size) = s.trim().split_once(':').ok_or_else(err)?;
        if size.is_empty() || !size.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let m: u64 = size.parse().map_err(|_| err())?;
        match fam {
            "Sp" if m.is_multiple_of(2) => Ok(GroupSpec::sp((m / 2) as u32)),
            "SO" if m % 2 == 1 => Ok(GroupSpec::so((m / 2) as u32)),
            _ => Err(err()),
        }
    }
}

/// `rho ⊗ S_a ⊗ S_b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArthurSummand {
    pub rho: Rho,
    pub a: u32,
    pub b: u32,
}

#[allow(non_snake_case)]
impl ArthurSummand {
    pub fn new(rho: Rho, a: u32, b: u32) -> Self {
        assert!(a >= 1 && b >= 1, "S_0 is not a summand");
        ArthurSummand { rho, a, b }
    }

    /// Builds from `(A, B)`; `None` unless `a, b` come out as positive integers.
    pub fn from_ab(rho: Rho, A: HalfInt, B: HalfInt) -> Option<Self> {
        let a = (A + B + 1).to_int()?;
        let b = (A - B + 1).to_int()?;
        (a >= 1 && b >= 1).then_some(ArthurSummand { rho, a: a as u32, b: b as u32 })
    }

    /// `A = (a+b)/2 - 1`.
    pub fn A(&self) -> HalfInt {
        HalfInt::half(self.a as i64 + self.b as i64) - 1
    }

    /// `B = (a-b)/2`.
    pub fn B(&self) -> HalfInt {
        HalfInt::half(self.a as i64 - self.b as i64)
    }

    pub fn dim(&self) -> u64 {
        self.rho.dim as u64 * self.a as u64 * self.b as u64
    }

    pub fn dual(&self) -> Self {
        ArthurSummand { rho: self.rho.clone(), a: self.b, b: self.a }
    }

    pub fn self_dual_type(&self) -> SelfDualType {
        summand_type(self.rho.kind, self.a, self.b)
    }
}

impl fmt::Display for ArthurSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.S{}.S{}", self.rho, self.a, self.b)
    }
}

/// A local Arthur parameter: a multiset of summands, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArthurParam {
    group: GroupSpec,
    summands: Vec<ArthurSummand>,
}

impl ArthurParam {
    pub fn new(group: GroupSpec, mut summands: Vec<ArthurSummand>) -> Self {
        summands.sort();
        ArthurParam { group, summands }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn summands(&self) -> &[ArthurSummand] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn dim(&self) -> u64 {
        self.summands.iter().map(ArthurSummand::dim).sum()
    }

    pub fn is_tempered(&self) -> bool {
        self.summands.iter().all(|s| s.b == 1)
    }

    /// Distinct labels, in canonical order.
    pub fn rhos(&self) -> Vec<Rho> {
        let mut out: Vec<Rho> = Vec::new();
        for s in &self.summands {
            if out.last() != Some(&s.rho) {
                out.push(s.rho.clone());
            }
        }
        out
    }

    pub fn block<'a>(&'a self, rho: &'a Rho) -> impl Iterator<Item = &'a ArthurSummand> + 'a {
        self.summands.iter().filter(move |s| &s.rho == rho)
    }

    /// Number of copies of `s`.
    pub fn count(&self, s: &ArthurSummand) -> usize {
        self.summands.iter().filter(|t| *t == s).count()
    }

    /// True when `other` is a sub-multiset of `self`.
    pub fn contains_all(&self, other: &[ArthurSummand]) -> bool {
        multiset_remove(&self.summands, other).is_some()
    }

    /// Removes `remove` (as a multiset) and adds `add`; `None` if some
    /// summand to remove is missing.
    pub fn replace(&self, remove: &[ArthurSummand], add: &[ArthurSummand]) -> Option<Self> {
        let mut rest = multiset_remove(&self.summands, remove)?;
        rest.extend(add.iter().cloned());
        Some(ArthurParam::new(self.group, rest))
    }

    pub fn with_group(&self, group: GroupSpec) -> Self {
        ArthurParam { group, summands: self.summands.clone() }
    }
}

pub(crate) fn multiset_remove<T: PartialEq + Clone>(from: &[T], remove: &[T]) -> Option<Vec<T>> {
    let mut rest = from.to_vec();
    for r in remove {
        let pos = rest.iter().position(|t| t == r)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn write_grouped<T: PartialEq + fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    if items.is_empty() {
        return write!(f, "0");
    }
    let mut i = 0;
    let mut first = true;
    while i < items.len() {
        let mut j = i + 1;
        while j < items.len() && items[j] == items[i] {
            j += 1;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if j - i > 1 {
            write!(f, "{}*", j - i)?;
        }
        write!(f, "{}", items[i])?;
        i = j;
    }
    Ok(())
}

impl fmt::Display for ArthurParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grouped(f, &self.summands)
    }
}

/// `rho |.|^x ⊗ S_a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LSummand {
    pub rho: Rho,
    pub x: HalfInt,
    pub a: u32,
}

impl LSummand {
    pub fn new(rho: Rho, x: HalfInt, a: u32) -> Self {
        assert!(a >= 1, "S_0 is not a summand");
        LSummand { rho, x, a }
    }

    /// The exponents `x+(a-1)/2, ..., x-(a-1)/2`, highest first.
    pub fn exponents(&self) -> impl Iterator<Item = HalfInt> {
        let top = self.x + HalfInt::half(self.a as i64 - 1);
        (0..self.a as i64).map(move |k| top - k)
    }
}

impl fmt::Display for LSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}].S{}", self.rho, self.x, self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LParam {
    group: GroupSpec,
    summands: Vec<LSummand>,
}

impl LParam {
    pub fn new(group: GroupSpec, mut summands: Vec<LSummand>) -> Self {
        summands.sort();
        LParam { group, summands }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn summands(&self) -> &[LSummand] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn dim(&self) -> u64 {
        self.summands.iter().map(|s| s.rho.dim as u64 * s.a as u64).sum()
    }

    pub fn rhos(&self) -> Vec<Rho> {
        let mut out: Vec<Rho> = Vec::new();
        for s in &self.summands {
            if out.last() != Some(&s.rho) {
                out.push(s.rho.clone());
            }
        }
        out
    }
}

impl fmt::Display for LParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grouped(f, &self.summands)
    }
}

/// Exponent multisets per label.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Infinitesimal {
    pub blocks: BTreeMap<Rho, BTreeMap<HalfInt, u32>>,
}

impl Infinitesimal {
    pub fn multiplicity(&self, rho: &Rho, x: HalfInt) -> u32 {
        self.blocks.get(rho).and_then(|m| m.get(&x)).copied().unwrap_or(0)
    }
}

impl fmt::Display for Infinitesimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (rho, m) in &self.blocks {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{}: {{", rho)?;
            let mut inner = true;
            for (x, k) in m.iter().rev() {
                if !inner {
                    write!(f, ", ")?;
                }
                inner = false;
                if *k > 1 {
                    write!(f, "{}x{}", x, k)?;
                } else {
                    write!(f, "{}", x)?;
                }
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("dimension {found} does not match the standard dimension {expected} of {group}")]
    DimensionMismatch { group: GroupSpec, found: u64, expected: u64 },
    #[error("bad-parity part is not of the form psi1 + dual(psi1): {0} occurs an odd number of times")]
    UnpairableBadParity(ArthurSummand),
}

/// Result of [`validate_parameter`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamReport {
    pub dimension: u64,
    pub expected_dimension: u64,
    pub dimension_ok: bool,
    /// One flag per summand, in canonical order.
    pub summand_good_parity: Vec<bool>,
    pub good_parity: bool,
}

pub fn validate_parameter(psi: &ArthurParam) -> ParamReport {
    let expected = psi.group.standard_dim();
    let dim = psi.dim();
    let want = psi.group.dual_type();
    let flags: Vec<bool> = psi.summands.iter().map(|s| s.self_dual_type() == want).collect();
    ParamReport {
        dimension: dim,
        expected_dimension: expected,
        dimension_ok: dim == expected,
        good_parity: flags.iter().all(|&f| f),
        summand_good_parity: flags,
    }
}

/// Splits `psi = psi1 + psi0 + dual(psi1)` with `psi0` of good parity.
/// Returns `(psi1, psi0)`; `psi0` lives on the smaller group of the same family.
pub fn good_parity_split(psi: &ArthurParam) -> Result<(Vec<ArthurSummand>, ArthurParam), ParamError> {
    let report = validate_parameter(psi);
    if !report.dimension_ok {
        return Err(ParamError::DimensionMismatch {
            group: psi.group,
            found: report.dimension,
            expected: report.expected_dimension,
        });
    }
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (s, ok) in psi.summands.iter().zip(&report.summand_good_parity) {
        if *ok {
            good.push(s.clone());
        } else {
            bad.push(s.clone());
        }
    }
    // labels are self-dual, so the dual of a summand is the summand itself
    let mut psi1 = Vec::new();
    let mut i = 0;
    while i < bad.len() {
        let mut j = i;
        while j < bad.len() && bad[j] == bad[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            return Err(ParamError::UnpairableBadParity(bad[i].clone()));
        }
        psi1.extend(std::iter::repeat_n(bad[i].clone(), (j - i) / 2));
        i = j;
    }
    let dim1: u64 = psi1.iter().map(ArthurSummand::dim).sum();
    let group0 = psi
        .group
        .with_standard_dim(psi.group.standard_dim() - 2 * dim1)
        .expect("removing an even dimension keeps the parity");
    Ok((psi1, ArthurParam::new(group0, good)))
}

/// Swaps the two `SL_2` factors.
pub fn dual_psi(psi: &ArthurParam) -> ArthurParam {
    ArthurParam::new(psi.group, psi.summands.iter().map(ArthurSummand::dual).collect())
}

/// The L-parameter of `psi`.
pub fn phi_of(psi: &ArthurParam) -> LParam {
    let mut out = Vec::new();
    for s in &psi.summands {
        let a = s.a;
        let b = s.b as i64;
        for t in 0..b {
            out.push(LSummand::new(s.rho.clone(), HalfInt::half(b - 1) - t, a));
        }
    }
    LParam::new(psi.group, out)
}

pub fn infinitesimal_of(phi: &LParam) -> Infinitesimal {
    let mut inf = Infinitesimal::default();
    for s in &phi.summands {
        let block = inf.blocks.entry(s.rho.clone()).or_default();
        for e in s.exponents() {
            *block.entry(e).or_insert(0) += 1;
        }
    }
    inf
}

/// `(p^A, p^D)` with `p^A = [b^{d a}]` and `p^D = [a^{d b}]`.
pub fn partitions_of(psi: &ArthurParam) -> (Partition, Partition) {
    let mut pa = Vec::new();
    let mut pd = Vec::new();
    for s in &psi.summands {
        for _ in 0..s.rho.dim * s.a {
            pa.push(s.b);
        }
        for _ in 0..s.rho.dim * s.b {
            pd.push(s.a);
        }
    }
    (Partition::new(pa), Partition::new(pd))
}

/// `(psi_open, psi_zero)`: the tempered parameter obtained by restricting
/// to the diagonal `SL_2`, and its dual.
pub fn extremal_parameters_of_lambda(psi: &ArthurParam) -> (ArthurParam, ArthurParam) {
    let mut out = Vec::new();
    for s in &psi.summands {
        for k in 0..s.a.min(s.b) {
            out.push(ArthurSummand::new(s.rho.clone(), s.a + s.b - 1 - 2 * k, 1));
        }
    }
    let open = ArthurParam::new(psi.group, out);
    let zero = dual_psi(&open);
    (open, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr() -> Rho {
        Rho::trivial()
    }

    fn psi(group: GroupSpec, v: &[(u32, u32)]) -> ArthurParam {
        ArthurParam::new(group, v.iter().map(|&(a, b)| ArthurSummand::new(tr(), a, b)).collect())
    }

    #[test]
    fn group_strings() {
        let g: GroupSpec = "Sp:10".parse().unwrap();
        assert_eq!(g, GroupSpec::sp(5));
        assert_eq!(g.standard_dim(), 11);
        let h: GroupSpec = "SO:9".parse().unwrap();
        assert_eq!(h, GroupSpec::so(4));
        assert_eq!(h.standard_dim(), 8);
        assert_eq!(h.to_string(), "SO:9");
        assert!("Sp:9".parse::<GroupSpec>().is_err());
        assert!("SO:8".parse::<GroupSpec>().is_err());
        assert!("GL:3".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn ab_round_trip() {
        for a in 1..8 {
            for b in 1..8 {
                let s = ArthurSummand::new(tr(), a, b);
                assert_eq!(ArthurSummand::from_ab(tr(), s.A(), s.B()), Some(s));
            }
        }
        assert_eq!(ArthurSummand::from_ab(tr(), HalfInt::ZERO, HalfInt::ONE), None);
    }

    #[test]
    fn validate_sp10_chain_parameter() {
        let p = psi(GroupSpec::sp(5), &[(1, 7), (1, 3), (1, 1)]);
        let r = validate_parameter(&p);
        assert_eq!(r.dimension, 11);
        assert!(r.dimension_ok && r.good_parity);
    }

    #[test]
    fn validate_flags_bad_parity() {
        let ok = psi(GroupSpec::so(4), &[(2, 1), (2, 1), (4, 1)]);
        assert!(validate_parameter(&ok).good_parity);
        let bad = psi(GroupSpec::so(4), &[(4, 2)]);
        let r = validate_parameter(&bad);
        assert!(r.dimension_ok);
        assert!(!r.good_parity);
    }

    #[test]
    fn split_pairs_bad_summands() {
        let sp2 = Rho::new("sp", 2, SelfDualType::Symplectic);
        // sp ⊗ S2 ⊗ S2 is symplectic, so of bad parity for Sp
        let p = ArthurParam::new(
            GroupSpec::sp(9),
            vec![
                ArthurSummand::new(sp2.clone(), 2, 2),
                ArthurSummand::new(sp2.clone(), 2, 2),
                ArthurSummand::new(tr(), 3, 1),
            ],
        );
        let (psi1, psi0) = good_parity_split(&p).unwrap();
        assert_eq!(psi1, vec![ArthurSummand::new(sp2.clone(), 2, 2)]);
        assert_eq!(psi0, psi(GroupSpec::sp(1), &[(3, 1)]));

        let odd = ArthurParam::new(
            GroupSpec::sp(4),
            vec![ArthurSummand::new(sp2.clone(), 2, 2), ArthurSummand::new(tr(), 1, 1)],
        );
        assert!(matches!(good_parity_split(&odd), Err(ParamError::UnpairableBadParity(_))));

        let all_good = psi(GroupSpec::sp(5), &[(1, 11)]);
        let (psi1, psi0) = good_parity_split(&all_good).unwrap();
        assert!(psi1.is_empty());
        assert_eq!(psi0, all_good);
    }

    #[test]
    fn phi_expansions() {
        let p = psi(GroupSpec::so(3), &[(3, 2)]);
        let phi = phi_of(&p);
        assert_eq!(
            phi.summands(),
            &[LSummand::new(tr(), HalfInt::half(-1), 3), LSummand::new(tr(), HalfInt::half(1), 3)]
        );
        let q = psi(GroupSpec::so(2), &[(1, 4)]);
        let xs: Vec<HalfInt> = phi_of(&q).summands().iter().map(|s| s.x).collect();
        assert_eq!(xs, [-3, -1, 1, 3].map(HalfInt::half).to_vec());
    }

    #[test]
    fn infinitesimal_of_s6() {
        let phi = LParam::new(GroupSpec::so(3), vec![LSummand::new(tr(), HalfInt::ZERO, 6)]);
        let inf = infinitesimal_of(&phi);
        let got: Vec<HalfInt> = inf.blocks[&tr()].keys().copied().collect();
        assert_eq!(got, [-5, -3, -1, 1, 3, 5].map(HalfInt::half).to_vec());
    }

    #[test]
    fn partitions_swap_under_dual() {
        let p = psi(GroupSpec::so(4), &[(1, 2), (3, 2)]);
        let (pa, pd) = partitions_of(&p);
        assert_eq!(pa.parts(), &[2, 2, 2, 2]);
        assert_eq!(pd.parts(), &[3, 3, 1, 1]);
        let (qa, qd) = partitions_of(&dual_psi(&p));
        assert_eq!((qa, qd), (pd, pa));
    }

    #[test]
    fn clebsch_gordan_restriction() {
        let p = psi(GroupSpec::so(3), &[(3, 2)]);
        let (open, zero) = extremal_parameters_of_lambda(&p);
        assert_eq!(open, psi(GroupSpec::so(3), &[(4, 1), (2, 1)]));
        assert_eq!(zero, psi(GroupSpec::so(3), &[(1, 4), (1, 2)]));
        assert_eq!(infinitesimal_of(&phi_of(&open)), infinitesimal_of(&phi_of(&p)));
        let one = psi(GroupSpec::sp(0), &[(1, 1)]);
        let (o, z) = extremal_parameters_of_lambda(&one);
        assert_eq!((o.clone(), z), (one.clone(), one));
    }

    #[test]
    fn display_groups_multiplicities() {
        let p = psi(GroupSpec::so(4), &[(2, 1), (4, 1), (2, 1)]);
        assert_eq!(p.to_string(), "2*tr(1,O).S2.S1 + tr(1,O).S4.S1");
        assert_eq!(ArthurParam::new(GroupSpec::so(0), vec![]).to_string(), "0");
    }
}
