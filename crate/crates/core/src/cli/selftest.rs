//! Random comparison of the block method against the cyclotomic oracle.

use super::ProblemFile;
use crate::eqsheaf::CohomologyTable;
use crate::oracle::{nonzero_block_cohomology, oracle_cohomology};
use crate::random::{random_action, random_complex};
use crate::action::sample_points;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Points sampled per stratum in each trial.
const POINTS_PER_STRATUM: usize = 2;

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub degree: i64,
    pub character_values: Vec<u64>,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub point: String,
    pub detail: String,
    pub block: Vec<TableEntry>,
    pub oracle: Vec<TableEntry>,
    /// A problem file holding the complex (as `c`) and the point, for replay.
    pub replay: ProblemFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestSummary {
    pub trials: usize,
    pub seed: u64,
    pub points_compared: usize,
    pub complexes_with_differentials: usize,
    pub mismatches: Vec<Mismatch>,
}

fn entries(t: &CohomologyTable) -> Vec<TableEntry> {
    t.iter()
        .map(|((j, phi), &d)| TableEntry { degree: *j, character_values: phi.values().to_vec(), dimension: d })
        .collect()
}

pub fn selftest_oracle(trials: usize, seed: u64) -> SelftestSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points_compared = 0;
    let mut with_diffs = 0;
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let act = random_action(&mut rng);
        let c = random_complex(&act, &mut rng);
        with_diffs += usize::from(c.has_differentials());
        let point_seed: u64 = rng.gen();
        for stratum in act.strata().strata {
            for x in sample_points(&act, &stratum, POINTS_PER_STRATUM, point_seed) {
                points_compared += 1;
                let oracle = oracle_cohomology(&c, &x);
                let (block, detail) = match nonzero_block_cohomology(&c, &x) {
                    Ok(b) if b == oracle => continue,
                    Ok(b) => (b, "isotypic cohomology dimensions differ".to_string()),
                    Err(e) => (CohomologyTable::new(), e.to_string()),
                };
                mismatches.push(Mismatch {
                    trial,
                    point: x.to_string(),
                    detail,
                    block: entries(&block),
                    oracle: entries(&oracle),
                    replay: ProblemFile::from_parts(&act, &[("c", &c)], std::slice::from_ref(&x)),
                });
            }
        }
    }
    SelftestSummary { trials, seed, points_compared, complexes_with_differentials: with_diffs, mismatches }
}
