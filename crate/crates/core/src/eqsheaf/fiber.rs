use super::{EqSheafError, EquivariantComplex, TwistedSummand};
use crate::action::{ProjectiveAction, RationalPoint, Stratum};
use crate::group::{restrict_character, Restriction, Subgroup, SubgroupCharacter};
use crate::linalg::{kernel_dim, rank, QMatrix, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Character by which the stabilizer of a stratum acts on the fiber of a summand.
///
/// The fiber of `O(-1)` at `[x]` is the line `k x`, on which a stabilizer
/// element acts by the scalar character `c`. Hence `O(d)` carries `-d c`,
/// and the twist adds `psi`: the fiber character is `psi - d c`.
pub fn fiber_character(act: &ProjectiveAction, s: &TwistedSummand, stratum: &Stratum) -> Restriction {
    let m = act.group().exponent();
    let psi = restrict_character(act.group(), &s.twist, &stratum.stabilizer).values;
    let values = psi.combine(&stratum.scalar_char, -s.degree, m);
    let is_trivial = values.is_trivial();
    Restriction { values, is_trivial }
}

/// One isotypic piece of a fiber complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberBlock {
    /// Summand indices (into the source complex) landing in this block, per degree.
    pub members: BTreeMap<i64, Vec<usize>>,
    /// `maps[j]`: block part of `d^j`, rows = members of degree `j + 1`.
    pub maps: BTreeMap<i64, QMatrix>,
}

impl FiberBlock {
    pub fn dim(&self, j: i64) -> usize {
        self.members.get(&j).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.members.values().all(Vec::is_empty)
    }

    pub fn map(&self, j: i64) -> QMatrix {
        self.maps
            .get(&j)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim(j + 1), self.dim(j)))
    }

    /// `dim H^j = dim ker d^j - rank d^(j-1)`.
    pub fn cohomology_dim(&self, j: i64) -> usize {
        let n = self.dim(j);
        if n == 0 {
            return 0;
        }
        let ker = if self.dim(j + 1) == 0 { n } else { kernel_dim(&self.map(j)) };
        let im = if self.dim(j - 1) == 0 { 0 } else { rank(&self.map(j - 1)) };
        ker - im
    }
}

/// The derived fiber of a complex at a point, split by stabilizer character.
#[derive(Clone, Debug)]
pub struct FiberComplex {
    pub point: RationalPoint,
    pub stabilizer: Subgroup,
    pub blocks: BTreeMap<SubgroupCharacter, FiberBlock>,
}

/// Restricts every term to the fiber at `x` and splits by fiber character.
///
/// Summands are trivialized by `x_i0^d` with `i0` the least index in the
/// support, so an entry `p` from `O(ds)` to `O(dt)` evaluates to
/// `p(x) / x_i0^(dt - ds)`.
pub fn fiber_restrict(c: &EquivariantComplex, x: &RationalPoint) -> Result<FiberComplex, EqSheafError> {
    c.ensure_valid()?;
    fiber_restrict_unchecked(c, x)
}

pub(crate) fn fiber_restrict_unchecked(
    c: &EquivariantComplex,
    x: &RationalPoint,
) -> Result<FiberComplex, EqSheafError> {
    let act = c.action();
    if x.coords().len() != act.dim() + 1 {
        return Err(EqSheafError::Structure(format!(
            "point {x} does not live in P^{}",
            act.dim()
        )));
    }
    let stratum = act.stratum_of(x);
    let lead = &x.coords()[x.support()[0]];

    // block key and position inside the block, per summand
    let mut placement: BTreeMap<i64, Vec<(SubgroupCharacter, usize)>> = BTreeMap::new();
    let mut blocks: BTreeMap<SubgroupCharacter, FiberBlock> = BTreeMap::new();
    for (&j, summands) in c.terms() {
        let mut here = Vec::with_capacity(summands.len());
        for (k, s) in summands.iter().enumerate() {
            let phi = fiber_character(act, s, &stratum).values;
            let block = blocks.entry(phi.clone()).or_default();
            let members = block.members.entry(j).or_default();
            members.push(k);
            here.push((phi, members.len() - 1));
        }
        placement.insert(j, here);
    }

    for (&j, d) in c.differentials() {
        let src = &placement[&j];
        let tgt = &placement[&(j + 1)];
        for block in blocks.values_mut() {
            let (rows, cols) = (block.dim(j + 1), block.dim(j));
            if rows > 0 && cols > 0 {
                block.maps.insert(j, QMatrix::zeros(rows, cols));
            }
        }
        for (t, s, p) in d.nonzero_entries() {
            let ds = c.summands(j)[s].degree;
            let dt = c.summands(j + 1)[t].degree;
            let value = p.eval(x.coords()) * pow_signed(lead, ds - dt);
            if value.is_zero() {
                continue;
            }
            let (ks, is) = &src[s];
            let (kt, it) = &tgt[t];
            if ks != kt {
                return Err(EqSheafError::CrossBlock {
                    point: x.to_string(),
                    degree: j,
                    from_summand: s,
                    to_summand: t,
                });
            }
            let block = blocks.get_mut(ks).expect("placed summand has a block");
            block.maps.get_mut(&j).expect("block map allocated")[(*it, *is)] = value;
        }
    }
    for block in blocks.values_mut() {
        block.maps.retain(|_, m| !m.is_zero());
    }

    Ok(FiberComplex { point: x.clone(), stabilizer: stratum.stabilizer, blocks })
}

fn pow_signed(x: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        num_traits::Inv::inv(p)
    }
}

/// Cohomology dimensions keyed by `(degree, fiber character)`.
pub type CohomologyTable = BTreeMap<(i64, SubgroupCharacter), usize>;

/// Dimension of every `H^j` of every block; degrees where a block has terms
/// are always listed, even when the cohomology vanishes.
pub fn block_cohomology(f: &FiberComplex) -> CohomologyTable {
    let mut out = CohomologyTable::new();
    for (phi, block) in &f.blocks {
        for &j in block.members.keys() {
            out.insert((j, phi.clone()), block.cohomology_dim(j));
        }
    }
    out
}

/// The block on which the stabilizer acts trivially (empty if none).
pub fn invariant_part(f: &FiberComplex) -> FiberBlock {
    f.blocks.get(&SubgroupCharacter::trivial(&f.stabilizer)).cloned().unwrap_or_default()
}

/// Alternating sums of term dimensions and of cohomology dimensions of a block.
pub fn euler_characteristics(block: &FiberBlock) -> (i64, i64) {
    let sign = |j: i64| if j.rem_euclid(2) == 0 { 1 } else { -1 };
    let terms: i64 = block.members.iter().map(|(&j, m)| sign(j) * m.len() as i64).sum();
    let coh: i64 = block.members.keys().map(|&j| sign(j) * block.cohomology_dim(j) as i64).sum();
    (terms, coh)
}
