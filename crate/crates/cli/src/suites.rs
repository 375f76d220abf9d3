//! Randomized and fixture-driven check suites.
//!
//! Trial `i` draws from its own ChaCha stream `(seed, i)`, trials run in
//! parallel, and the reported counterexample is the one of least index, so
//! reports depend only on `(seed, trials)`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use arthurlab::geometry::{closure_compare, partition_from_triangle, rank_entry_closed_form, rank_triangles};
use arthurlab::operators::{apply, dual_transport, enumerate_raising};
use arthurlab::orders::{compare, OrderKind, OrderResult, Partition};
use arthurlab::params::{dual_psi, extremal_parameters_of_lambda, infinitesimal_of, partitions_of, phi_of};
use arthurlab::{ArthurParam, ArthurSummand, GroupSpec, OperatorDescriptor, Rho};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsl;
use crate::fixtures::{check, Corpus};
use crate::gen;
use crate::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Monotonicity,
    Duality,
    PartitionTriangle,
    Sandwich,
    RoundTrip,
    Examples,
    EmsChain,
    ArthurSteps,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Monotonicity,
        Suite::Duality,
        Suite::PartitionTriangle,
        Suite::Sandwich,
        Suite::RoundTrip,
        Suite::Examples,
        Suite::EmsChain,
        Suite::ArthurSteps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monotonicity => "monotonicity",
            Suite::Duality => "duality",
            Suite::PartitionTriangle => "partition-triangle",
            Suite::Sandwich => "sandwich",
            Suite::RoundTrip => "round-trip",
            Suite::Examples => "examples",
            Suite::EmsChain => "ems-chain",
            Suite::ArthurSteps => "arthur-steps",
        }
    }

    pub fn uses_fixtures(self) -> bool {
        matches!(self, Suite::Examples | Suite::EmsChain | Suite::ArthurSteps)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|k| k.name()).collect();
            format!("unknown suite {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    /// The failing input in printable form.
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "passed: {}", self.passed)?;
        writeln!(f, "failed: {}", self.failed)?;
        if let Some(x) = &self.first_failure {
            writeln!(f, "first failure (trial {}): {}", x.trial, x.detail)?;
            writeln!(f, "input: {}", x.input)?;
        }
        Ok(())
    }
}

type TrialResult = Result<(), (String, String)>;

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn collect(suite: Suite, seed: u64, results: Vec<TrialResult>, start: Instant) -> SuiteReport {
    let trials = results.len();
    let first_failure = results
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.as_ref().err().map(|(input, detail)| Failure { trial: i, input: input.clone(), detail: detail.clone() }));
    let failed = results.iter().filter(|r| r.is_err()).count();
    SuiteReport {
        suite: suite.name().to_string(),
        seed,
        trials,
        passed: trials - failed,
        failed,
        first_failure,
        elapsed: start.elapsed(),
    }
}

/// Runs `trials` random trials, or the first `trials` fixtures of a fixture suite.
pub fn run_suite(suite: Suite, seed: u64, trials: usize, corpus: &Corpus) -> SuiteReport {
    let start = Instant::now();
    let results: Vec<TrialResult> = if suite.uses_fixtures() {
        let cases = corpus.suite(suite.name());
        cases
            .par_iter()
            .take(trials)
            .map(|c| check(c).map_err(|d| (c.id.clone(), d)))
            .collect()
    } else {
        let f: fn(&mut ChaCha8Rng) -> TrialResult = match suite {
            Suite::Monotonicity => monotonicity_trial,
            Suite::Duality => duality_trial,
            Suite::PartitionTriangle => partition_triangle_trial,
            Suite::Sandwich => sandwich_trial,
            Suite::RoundTrip => round_trip_trial,
            _ => unreachable!("fixture suites handled above"),
        };
        (0..trials).into_par_iter().map(|i| f(&mut trial_rng(seed, i))).collect()
    };
    collect(suite, seed, results, start)
}

fn show(p: &ArthurParam) -> String {
    format!("{} | {}", p.group(), p)
}

fn ensure(cond: bool, input: impl FnOnce() -> String, detail: impl FnOnce() -> String) -> TrialResult {
    if cond {
        Ok(())
    } else {
        Err((input(), detail()))
    }
}

/// Every raising move goes up in `A` (strictly), `D` and `C`.
pub fn monotonicity_trial(rng: &mut ChaCha8Rng) -> TrialResult {
    let psi = gen::random_psi(rng);
    for (op, r) in enumerate_raising(&psi) {
        for kind in [OrderKind::A, OrderKind::D, OrderKind::C] {
            let res = compare(&r, &psi, kind).map_err(|e| (show(&psi), format!("{op}: {e}")))?;
            let ok = if kind == OrderKind::A { res == OrderResult::Greater } else { res.is_ge() };
            ensure(ok, || show(&psi), || format!("{op} gives {r}, which is {res} under {kind}"))?;
        }
    }
    Ok(())
}

/// Duality swaps the partitions, keeps `λ`, and carries raising moves to
/// raising moves on the dual side.
pub fn duality_trial(rng: &mut ChaCha8Rng) -> TrialResult {
    let psi = gen::random_psi(rng);
    let d = dual_psi(&psi);
    ensure(dual_psi(&d) == psi, || show(&psi), || "dual is not an involution".into())?;
    let (pa, pd) = partitions_of(&psi);
    ensure(partitions_of(&d) == (pd, pa), || show(&psi), || "partitions not swapped".into())?;
    ensure(
        infinitesimal_of(&phi_of(&d)) == infinitesimal_of(&phi_of(&psi)),
        || show(&psi),
        || "dual changes the infinitesimal parameter".into(),
    )?;
    for (op, r) in enumerate_raising(&psi) {
        let t = dual_transport(&op).map_err(|e| (show(&psi), e.to_string()))?;
        ensure(t.kind.is_raising(), || show(&psi), || format!("{op} transports to non-raising {t}"))?;
        let out = apply(&dual_psi(&r), &t);
        ensure(
            !out.identity && out.result == d,
            || show(&psi),
            || format!("{op} then {t} on the dual gives {} instead of {d}", out.result),
        )?;
    }
    Ok(())
}

/// Closed form, triangle entry and direct count agree on one summand; the
/// triangle gives back the partition; `C` implies `D` on a related pair.
pub fn partition_triangle_trial(rng: &mut ChaCha8Rng) -> TrialResult {
    let (a, b) = (rng.random_range(1..=9u32), rng.random_range(1..=9u32));
    let s = ArthurSummand::new(Rho::trivial(), a, b);
    let single = ArthurParam::new(GroupSpec::so(0), vec![s.clone()]);
    let tris = rank_triangles(&phi_of(&single)).map_err(|e| (s.to_string(), e.to_string()))?;
    let (grid, tri) = &tris[&Rho::trivial()];
    let (big_a, big_b) = (s.A(), s.B());
    for alpha in 1..grid.len() {
        for beta in alpha..grid.len() {
            let (y, x) = (grid[alpha - 1], grid[beta]);
            let count = (0..=(big_a - big_b).floor()).filter(|&t| big_a - t >= x && y >= -big_b - t).count() as u64;
            let closed = rank_entry_closed_form(big_a, big_b, x, y);
            let entry = tri.get(alpha, beta) as u64;
            ensure(
                count == closed && closed == entry,
                || s.to_string(),
                || format!("entry ({alpha},{beta}): count {count}, closed form {closed}, triangle {entry}"),
            )?;
        }
    }

    let phi = gen::random_unramified(rng);
    let n: u64 = phi.summands().iter().map(|s| s.a as u64).sum();
    let tris = rank_triangles(&phi).map_err(|e| (phi.to_string(), e.to_string()))?;
    let (_, tri) = &tris[&Rho::trivial()];
    let got = partition_from_triangle(tri, n).map_err(|e| (phi.to_string(), e.to_string()))?;
    let want = Partition::new(phi.summands().iter().map(|s| s.a).collect());
    ensure(got == want, || phi.to_string(), || format!("triangle {tri} gives {got}, expected {want}"))?;

    let p = gen::random_psi(rng);
    let q = gen::random_neighbor(rng, &p);
    let c = closure_compare(&phi_of(&p), &phi_of(&q)).map_err(|e| (show(&p), e.to_string()))?;
    if c == OrderResult::Greater {
        let d = compare(&p, &q, OrderKind::D).map_err(|e| (show(&p), e.to_string()))?;
        ensure(d.is_ge(), || format!("{} vs {}", show(&p), q), || format!("closure Greater but D gives {d}"))?;
    }
    Ok(())
}

/// The open parameter lies above `ψ` and the zero parameter below.
pub fn sandwich_trial(rng: &mut ChaCha8Rng) -> TrialResult {
    let psi = gen::random_psi(rng);
    let (open, zero) = extremal_parameters_of_lambda(&psi);
    let lam = infinitesimal_of(&phi_of(&psi));
    ensure(
        infinitesimal_of(&phi_of(&open)) == lam && infinitesimal_of(&phi_of(&zero)) == lam,
        || show(&psi),
        || "infinitesimal parameter changed".into(),
    )?;
    ensure(open.is_tempered(), || show(&psi), || format!("{open} is not tempered"))?;
    ensure(phi_of(&zero).summands().iter().all(|s| s.a == 1), || show(&psi), || format!("{zero} is not on the zero orbit"))?;
    let up = closure_compare(&phi_of(&open), &phi_of(&psi)).map_err(|e| (show(&psi), e.to_string()))?;
    let down = closure_compare(&phi_of(&psi), &phi_of(&zero)).map_err(|e| (show(&psi), e.to_string()))?;
    ensure(up.is_ge() && down.is_ge(), || show(&psi), || format!("open vs psi: {up}, psi vs zero: {down}"))
}

fn same_text(kind: &str, first: &str, second: Result<String, String>) -> TrialResult {
    match second {
        Ok(s) if s == first => Ok(()),
        Ok(s) => Err((first.to_string(), format!("{kind} reprinted as {s}"))),
        Err(e) => Err((first.to_string(), format!("{kind} failed to parse: {e}"))),
    }
}

/// Print, parse, print: Arthur and L-parameters in the DSL, operator
/// descriptors, multi-segments and L-data in JSON.
pub fn round_trip_trial(rng: &mut ChaCha8Rng) -> TrialResult {
    let psi = gen::random_psi(rng);
    let text = psi.to_string();
    same_text("parameter", &text, dsl::parse_arthur(&text, psi.group()).map(|p| p.to_string()).map_err(|e| e.to_string()))?;

    let phi = gen::random_lparam(rng);
    let text = phi.to_string();
    same_text("L-parameter", &text, dsl::parse_lparam(&text, phi.group()).map(|p| p.to_string()).map_err(|e| e.to_string()))?;

    for (op, _) in enumerate_raising(&psi) {
        let text = op.to_string();
        same_text("operator", &text, text.parse::<OperatorDescriptor>().map(|o| o.to_string()).map_err(|e| e.to_string()))?;
    }

    let e = gen::random_ems(rng);
    let text = json::print_ems(&e);
    same_text("multi-segment", &text, json::parse_ems(&text).map(|x| json::print_ems(&x)).map_err(|e| e.to_string()))?;

    let pi = gen::random_ldata(rng);
    let text = json::print_ldata(&pi);
    same_text("L-data", &text, json::parse_ldata(&text).map(|x| json::print_ldata(&x)).map_err(|e| e.to_string()))
}
