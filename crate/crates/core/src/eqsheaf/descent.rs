use super::fiber::{block_cohomology, fiber_restrict_unchecked};
use super::{EqSheafError, EquivariantComplex, TwistedSummand};
use crate::action::{sample_points, ProjectiveAction, RationalPoint, Stratum};
use crate::group::{Character, Subgroup, SubgroupCharacter};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// How many points to look at when the criterion quantifies over a whole stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub samples_per_stratum: usize,
    pub seed: u64,
    /// Skip strata sampling and check only user-supplied points.
    pub points_only: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples_per_stratum: 5, seed: 0, points_only: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A nonzero cohomology group on which the stabilizer acts nontrivially.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: RationalPoint,
    pub support: Vec<usize>,
    pub degree: i64,
    /// Least character of the whole group restricting to the fiber character.
    pub character: Character,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub degree: i64,
    pub character: Character,
    pub trivial: bool,
    pub dimension: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSource {
    User,
    Sample,
    UserAndSample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointTable {
    pub point: RationalPoint,
    pub support: Vec<usize>,
    pub stabilizer_order: usize,
    pub source: PointSource,
    pub entries: Vec<CohomologyEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageStatus {
    /// The verdict on this stratum does not depend on which points were looked at.
    Exact,
    /// Only finitely many points of the stratum were checked.
    Sampled,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumCoverage {
    pub support: Vec<usize>,
    pub stabilizer_order: usize,
    pub status: CoverageStatus,
    pub reason: String,
    pub points_checked: usize,
}

/// Outcome of the descent criterion for one complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub coverage: Vec<StratumCoverage>,
    pub tables: Vec<PointTable>,
    pub caveats: Vec<String>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// True when every stratum was decided without relying on sampling.
    pub fn is_exact(&self) -> bool {
        self.coverage.iter().all(|c| c.status == CoverageStatus::Exact)
    }
}

pub(crate) fn support_label(support: &[usize]) -> String {
    let parts: Vec<String> = support.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Memoized canonical lifts of stabilizer characters.
#[derive(Default)]
pub(crate) struct LiftCache {
    cache: HashMap<(Vec<u64>, SubgroupCharacter), Character>,
}

impl LiftCache {
    pub(crate) fn lift(&mut self, stab: &Subgroup, phi: &SubgroupCharacter) -> Character {
        let key: Vec<u64> = stab.elements().iter().flat_map(|g| g.coords().iter().copied()).collect();
        self.cache
            .entry((key, phi.clone()))
            .or_insert_with(|| phi.canonical_lift(stab))
            .clone()
    }
}

/// Why a stratum's verdict is independent of the chosen points, if it is.
fn exactness_reason(c: &EquivariantComplex, stratum: &Stratum) -> Option<&'static str> {
    if stratum.stabilizer.is_trivial() {
        Some("trivial stabilizer")
    } else if stratum.is_single_point() {
        Some("single point")
    } else if !c.has_differentials() {
        Some("zero differentials: fiber cohomology is constant on the stratum")
    } else {
        None
    }
}

/// Decides whether every stabilizer acts trivially on every cohomology of the
/// derived fiber, at all strata (sampled) and all supplied points.
///
/// A failure is an exact disproof of descent. A pass is exact on strata
/// flagged [`CoverageStatus::Exact`] and sampled elsewhere.
pub fn check_star(
    c: &EquivariantComplex,
    points: &[RationalPoint],
    config: &CheckConfig,
) -> Result<DescentReport, EqSheafError> {
    c.ensure_valid()?;
    let act = c.action();
    for x in points {
        if x.coords().len() != act.dim() + 1 {
            return Err(EqSheafError::Structure(format!("point {x} does not live in P^{}", act.dim())));
        }
    }
    let strata = act.strata();

    let mut to_check: BTreeMap<RationalPoint, PointSource> = BTreeMap::new();
    for x in points {
        to_check.insert(x.canonical(), PointSource::User);
    }
    let mut planned: Vec<(usize, Option<&'static str>)> = Vec::new();
    for stratum in &strata.strata {
        let reason = exactness_reason(c, stratum);
        let count = if config.points_only || stratum.stabilizer.is_trivial() {
            0
        } else if reason.is_some() {
            1
        } else {
            config.samples_per_stratum
        };
        let samples = if count > 0 { sample_points(act, stratum, count, config.seed) } else { Vec::new() };
        planned.push((samples.len(), reason));
        for x in samples {
            to_check
                .entry(x)
                .and_modify(|s| *s = PointSource::UserAndSample)
                .or_insert(PointSource::Sample);
        }
    }

    let mut lifts = LiftCache::default();
    let mut witnesses = Vec::new();
    let mut tables = Vec::new();
    for (x, source) in to_check {
        let fiber = fiber_restrict_unchecked(c, &x)?;
        let mut entries = Vec::new();
        for ((j, phi), dim) in block_cohomology(&fiber) {
            let character = lifts.lift(&fiber.stabilizer, &phi);
            let trivial = phi.is_trivial();
            if !trivial && dim > 0 {
                witnesses.push(Witness {
                    point: x.clone(),
                    support: x.support().to_vec(),
                    degree: j,
                    character: character.clone(),
                    dimension: dim,
                });
            }
            entries.push(CohomologyEntry { degree: j, character, trivial, dimension: dim });
        }
        tables.push(PointTable {
            point: x.clone(),
            support: x.support().to_vec(),
            stabilizer_order: fiber.stabilizer.order(),
            source,
            entries,
        });
    }

    let mut coverage = Vec::new();
    let mut caveats = Vec::new();
    for (stratum, (sampled, reason)) in strata.strata.iter().zip(planned) {
        let user = points.iter().filter(|x| x.support() == stratum.support.as_slice()).count();
        let label = support_label(&stratum.support);
        let (status, why) = match reason {
            Some(r) if stratum.stabilizer.is_trivial() || sampled + user > 0 => (CoverageStatus::Exact, r.to_string()),
            _ if sampled + user > 0 => {
                let n = sampled + user;
                caveats.push(format!(
                    "stratum {label}: checked at {n} point(s) only; cohomology ranks may jump on a proper closed subset"
                ));
                (CoverageStatus::Sampled, format!("{sampled} sampled, {user} user point(s)"))
            }
            _ => {
                caveats.push(format!("stratum {label}: not checked"));
                (CoverageStatus::Unchecked, "no points checked".to_string())
            }
        };
        coverage.push(StratumCoverage {
            support: stratum.support.clone(),
            stabilizer_order: stratum.stabilizer.order(),
            status,
            reason: why,
            points_checked: sampled + user,
        });
    }

    let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(DescentReport { verdict, witnesses, coverage, tables, caveats })
}

/// Descent of a single twisted line bundle; exact, since fiber characters are
/// constant on strata.
pub fn check_bundle_descent(s: &TwistedSummand, act: &ProjectiveAction) -> Result<DescentReport, EqSheafError> {
    let c = EquivariantComplex::one_term(act.clone(), vec![s.clone()])?;
    check_star(&c, &[], &CheckConfig { samples_per_stratum: 1, seed: 0, points_only: false })
}
