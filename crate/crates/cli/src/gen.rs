//! Random inputs for the check suites.

use std::collections::BTreeMap;

use arthurlab::ldata::TemperedEntry;
use arthurlab::operators::{enumerate_lowering, enumerate_raising};
use arthurlab::{
    ArthurParam, ArthurSummand, Ems, ExtSegment, GroupSpec, HalfInt, LParam, LSummand, LanglandsData, Rho, Segment,
    SelfDualType,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub const MAX_DIM: u64 = 30;
pub const MAX_SUMMANDS: usize = 6;
pub const MAX_LABELS: usize = 3;

pub fn label_pool() -> Vec<Rho> {
    vec![
        Rho::trivial(),
        Rho::new("sgn", 1, SelfDualType::Orthogonal),
        Rho::new("sp", 2, SelfDualType::Symplectic),
        Rho::new("ot", 3, SelfDualType::Orthogonal),
    ]
}

fn labels<R: Rng>(rng: &mut R, max: usize) -> Vec<Rho> {
    let mut pool = label_pool();
    pool.shuffle(rng);
    pool.truncate(rng.random_range(1..=max));
    pool
}

/// A good-parity parameter with at most [`MAX_SUMMANDS`] summands,
/// [`MAX_LABELS`] labels and standard dimension at most [`MAX_DIM`].
pub fn random_psi<R: Rng>(rng: &mut R) -> ArthurParam {
    loop {
        let sp = rng.random_bool(0.5);
        let want = if sp { SelfDualType::Orthogonal } else { SelfDualType::Symplectic };
        let labels = labels(rng, MAX_LABELS);
        let count = rng.random_range(1..=MAX_SUMMANDS);
        let mut out: Vec<ArthurSummand> = (0..count)
            .map(|_| {
                let rho = labels.choose(rng).expect("nonempty").clone();
                let (a, b) = (rng.random_range(1..=7u32), rng.random_range(1..=7u32));
                let mut s = ArthurSummand::new(rho, a, b);
                if s.self_dual_type() != want {
                    if s.b > 1 && rng.random_bool(0.5) {
                        s.b -= 1;
                    } else {
                        s.b += 1;
                    }
                }
                s
            })
            .collect();
        let mut dim: u64 = out.iter().map(ArthurSummand::dim).sum();
        if sp && dim.is_multiple_of(2) {
            // only an odd-dimensional orthogonal label fixes the parity
            let Some(odd) = labels.iter().find(|r| r.dim % 2 == 1 && r.kind == SelfDualType::Orthogonal) else {
                continue;
            };
            if out.len() == MAX_SUMMANDS {
                continue;
            }
            out.push(ArthurSummand::new(odd.clone(), 1, 1));
            dim += odd.dim as u64;
        }
        if dim > MAX_DIM {
            continue;
        }
        let group = if sp { GroupSpec::sp(((dim - 1) / 2) as u32) } else { GroupSpec::so((dim / 2) as u32) };
        return ArthurParam::new(group, out);
    }
}

/// A parameter sharing the infinitesimal parameter of `psi`, reached by a
/// short random walk of raising and lowering steps.
pub fn random_neighbor<R: Rng>(rng: &mut R, psi: &ArthurParam) -> ArthurParam {
    let mut cur = psi.clone();
    for _ in 0..rng.random_range(0..=4) {
        let mut moves = enumerate_raising(&cur);
        moves.extend(enumerate_lowering(&cur));
        match moves.choose(rng) {
            Some((_, next)) => cur = next.clone(),
            None => break,
        }
    }
    cur
}

/// A self-dual unramified L-parameter: summands `|.|^{±x} ⊗ S_a` on one
/// coset, so its exponent grid is symmetric.
pub fn random_unramified<R: Rng>(rng: &mut R) -> LParam {
    let coset = rng.random_range(0..2i64);
    let mut out = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let a = rng.random_range(1..=6i64);
        // 2x + a - 1 has the parity of the coset
        let parity = (coset + 1 - a).rem_euclid(2);
        let x2 = 2 * rng.random_range(0..=3i64) + parity;
        let x = HalfInt::half(x2);
        out.push(LSummand::new(Rho::trivial(), x, a as u32));
        if x2 != 0 {
            out.push(LSummand::new(Rho::trivial(), -x, a as u32));
        }
    }
    let dim: u64 = out.iter().map(|s| s.a as u64).sum();
    LParam::new(GroupSpec::sp(dim as u32), out)
}

fn random_group<R: Rng>(rng: &mut R) -> GroupSpec {
    let n = rng.random_range(0..=20);
    if rng.random_bool(0.5) {
        GroupSpec::sp(n)
    } else {
        GroupSpec::so(n)
    }
}

/// Any L-parameter, good parity or not.
pub fn random_lparam<R: Rng>(rng: &mut R) -> LParam {
    let labels = labels(rng, MAX_LABELS);
    let out = (0..rng.random_range(1..=MAX_SUMMANDS))
        .map(|_| {
            let rho = labels.choose(rng).expect("nonempty").clone();
            LSummand::new(rho, HalfInt::half(rng.random_range(-9..=9)), rng.random_range(1..=7))
        })
        .collect();
    LParam::new(random_group(rng), out)
}

/// Rows satisfying the per-row bounds; the block order is random.
pub fn random_ems<R: Rng>(rng: &mut R) -> Ems {
    let mut blocks = BTreeMap::new();
    for rho in labels(rng, MAX_LABELS) {
        let off = rng.random_range(0..2i64);
        let rows = (0..rng.random_range(1..=5))
            .map(|_| {
                let a2 = 2 * rng.random_range(0..=6i64) + off;
                let b2 = (a2 - 2 * rng.random_range(0..=5i64)).max(-a2);
                let width = (a2 - b2) / 2 + 1;
                let l = rng.random_range(0..=width / 2);
                let eta = if rng.random_bool(0.5) { 1 } else { -1 };
                ExtSegment::new(HalfInt::half(a2), HalfInt::half(b2), l, eta)
            })
            .collect();
        blocks.insert(rho, rows);
    }
    Ems::new(random_group(rng), blocks)
}

pub fn random_segment<R: Rng>(rng: &mut R, rho: Rho) -> Segment {
    let x2 = rng.random_range(-6..=6i64);
    let lo = (x2 + 2).max(1);
    // x + y + 1 = k and x < y
    let k = rng.random_range(lo..=lo + 5);
    Segment::new(rho, HalfInt::half(x2), HalfInt::half(2 * (k - 1) - x2))
}

pub fn random_ldata<R: Rng>(rng: &mut R) -> LanglandsData {
    let labels = labels(rng, MAX_LABELS);
    let segs = (0..rng.random_range(0..=4))
        .map(|_| {
            let rho = labels.choose(rng).expect("nonempty").clone();
            random_segment(rng, rho)
        })
        .collect();
    let temp = (0..rng.random_range(0..=3))
        .map(|_| TemperedEntry {
            rho: labels.choose(rng).expect("nonempty").clone(),
            a: rng.random_range(1..=6),
            sign: if rng.random_bool(0.5) { 1 } else { -1 },
        })
        .collect();
    LanglandsData::new(segs, temp).expect("generated segments are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use arthurlab::params::{infinitesimal_of, phi_of, validate_parameter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameters_meet_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let p = random_psi(&mut rng);
            let r = validate_parameter(&p);
            assert!(r.good_parity && r.dimension_ok, "{p}");
            assert!(p.dim() <= MAX_DIM && p.len() <= MAX_SUMMANDS && p.rhos().len() <= MAX_LABELS);
            let q = random_neighbor(&mut rng, &p);
            assert_eq!(infinitesimal_of(&phi_of(&q)), infinitesimal_of(&phi_of(&p)));
        }
    }

    #[test]
    fn unramified_grids_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let phi = random_unramified(&mut rng);
            assert!(arthurlab::geometry::rank_triangles(&phi).is_ok(), "{phi}");
        }
    }
}
