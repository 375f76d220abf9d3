//! Shared inputs for the benchmarks.

use arthurlab::ArthurParam;
use arthurlab_cli::gen::{random_neighbor, random_psi};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SO9: [&str; 4] = [
    "2*tr(1,O).S2.S1 + tr(1,O).S4.S1",
    "tr(1,O).S1.S2 + tr(1,O).S2.S1 + tr(1,O).S4.S1",
    "tr(1,O).S2.S1 + tr(1,O).S3.S2",
    "tr(1,O).S1.S2 + tr(1,O).S3.S2",
];

pub fn so9_params() -> Vec<ArthurParam> {
    let g = "SO:9".parse().expect("valid group");
    SO9.iter().map(|p| arthurlab_cli::dsl::parse_arthur(p, g).expect("valid parameter")).collect()
}

/// `count` random parameters, each with `width` neighbors sharing its infinitesimal parameter.
pub fn random_families(seed: u64, count: usize, width: usize) -> Vec<Vec<ArthurParam>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = random_psi(&mut rng);
            let mut fam: Vec<ArthurParam> = (0..width).map(|_| random_neighbor(&mut rng, &p)).collect();
            fam.push(p);
            fam.sort();
            fam.dedup();
            fam
        })
        .collect()
}
