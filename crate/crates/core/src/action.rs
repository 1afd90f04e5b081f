//! Diagonal actions of a finite abelian group on projective space.
//!
//! `g . [x0 : ... : xn] = [chi_0(g) x0 : ... : chi_n(g) xn]`. For such an
//! action the stabilizer of a point depends only on which coordinates are
//! nonzero, so projective space splits into `2^(n+1) - 1` strata indexed by
//! coordinate support. The quotient itself is never built.

use crate::group::{
    char_combine, equalizer_subgroup, restrict_character, AbelianGroup, Character, GroupError,
    Subgroup, SubgroupCharacter,
};
use crate::linalg::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_MAX_DIM: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("projective dimension {dim} exceeds the bound {bound}")]
    DimTooLarge { dim: usize, bound: usize },
    #[error("expected {expected} coordinate characters, got {got}")]
    CharacterCount { expected: usize, got: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("a projective point needs a nonzero coordinate")]
    ZeroPoint,
    #[error("support must be a nonempty set of indices in 0..={max}")]
    BadSupport { max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveAction {
    group: AbelianGroup,
    dim: usize,
    coord_chars: Vec<Character>,
}

impl ProjectiveAction {
    pub fn new(group: AbelianGroup, coord_chars: Vec<Character>) -> Result<Self, ActionError> {
        Self::with_bound(group, coord_chars, DEFAULT_MAX_DIM)
    }

    pub fn with_bound(
        group: AbelianGroup,
        coord_chars: Vec<Character>,
        max_dim: usize,
    ) -> Result<Self, ActionError> {
        if coord_chars.is_empty() {
            return Err(ActionError::CharacterCount { expected: 1, got: 0 });
        }
        let dim = coord_chars.len() - 1;
        if dim > max_dim {
            return Err(ActionError::DimTooLarge { dim, bound: max_dim });
        }
        for chi in &coord_chars {
            if chi.coords().len() != group.rank() {
                return Err(GroupError::Mismatch {
                    what: "coordinate character",
                    got: chi.coords().len(),
                    expected: group.rank(),
                }
                .into());
            }
        }
        Ok(ProjectiveAction { group, dim, coord_chars })
    }

    /// Builds an action from raw integer character vectors.
    pub fn from_raw(orders: &[i64], chars: &[&[i64]]) -> Result<Self, ActionError> {
        let group = AbelianGroup::new(orders)?;
        let chars = chars.iter().map(|c| group.character(c)).collect::<Result<Vec<_>, _>>()?;
        Self::new(group, chars)
    }

    /// The sign action of `Z/2` on the last coordinate of the plane.
    pub fn z2_sign_on_plane() -> Self {
        Self::from_raw(&[2], &[&[0], &[0], &[1]]).expect("valid action")
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord_chars(&self) -> &[Character] {
        &self.coord_chars
    }

    pub fn coord_char(&self, i: usize) -> &Character {
        &self.coord_chars[i]
    }

    pub fn point(&self, coords: Vec<Rational>) -> Result<RationalPoint, ActionError> {
        if coords.len() != self.dim + 1 {
            return Err(ActionError::PointLength { expected: self.dim + 1, got: coords.len() });
        }
        RationalPoint::new(coords)
    }

    pub fn point_i64(&self, coords: &[i64]) -> Result<RationalPoint, ActionError> {
        self.point(coords.iter().map(|&c| rat(c)).collect())
    }

    /// Stratum of all points with the given coordinate support.
    pub fn stratum(&self, support: &[usize]) -> Result<Stratum, ActionError> {
        let support: BTreeSet<usize> = support.iter().copied().collect();
        if support.is_empty() || support.iter().any(|&i| i > self.dim) {
            return Err(ActionError::BadSupport { max: self.dim });
        }
        let support: Vec<usize> = support.into_iter().collect();
        let chars: Vec<Character> = support.iter().map(|&i| self.coord_chars[i].clone()).collect();
        let stabilizer = equalizer_subgroup(&self.group, &chars)?;
        let scalar = restrict_character(&self.group, &chars[0], &stabilizer).values;
        for chi in &chars[1..] {
            assert_eq!(
                restrict_character(&self.group, chi, &stabilizer).values,
                scalar,
                "coordinate characters must agree on the equalizer"
            );
        }
        Ok(Stratum { support, stabilizer, scalar_char: scalar })
    }

    pub fn stratum_of(&self, x: &RationalPoint) -> Stratum {
        self.stratum(x.support()).expect("point support is a valid stratum")
    }

    pub fn is_free(&self) -> bool {
        self.strata().strata.iter().all(|s| s.stabilizer.is_trivial())
    }

    pub fn strata(&self) -> StrataTable {
        let n = self.dim + 1;
        let mut strata: Vec<Stratum> = (1u32..(1u32 << n))
            .map(|mask| {
                let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                self.stratum(&support).expect("enumerated supports are valid")
            })
            .collect();
        strata.sort_by(|a, b| {
            b.stabilizer
                .order()
                .cmp(&a.stabilizer.order())
                .then_with(|| a.stabilizer.elements().cmp(b.stabilizer.elements()))
                .then_with(|| a.support.len().cmp(&b.support.len()))
                .then_with(|| a.support.cmp(&b.support))
        });
        StrataTable { strata }
    }
}

pub fn stabilizer(act: &ProjectiveAction, x: &RationalPoint) -> Subgroup {
    act.stratum_of(x).stabilizer
}

/// A point of projective space with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    coords: Vec<Rational>,
    support: Vec<usize>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, ActionError> {
        let support: Vec<usize> = (0..coords.len()).filter(|&i| !coords[i].is_zero()).collect();
        if support.is_empty() {
            return Err(ActionError::ZeroPoint);
        }
        Ok(RationalPoint { coords, support })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Rescaled so that the first nonzero coordinate is 1.
    pub fn canonical(&self) -> RationalPoint {
        let lead = self.coords[self.support[0]].clone();
        RationalPoint {
            coords: self.coords.iter().map(|c| c / &lead).collect(),
            support: self.support.clone(),
        }
    }

    pub fn same_projective_point(&self, other: &RationalPoint) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        parts.serialize(s)
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.support.cmp(&other.support).then_with(|| self.coords.cmp(&other.coords))
    }
}

/// Locus of points with a fixed coordinate support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub support: Vec<usize>,
    pub stabilizer: Subgroup,
    /// Exponent of the scalar by which each stabilizer element multiplies the
    /// coordinate line of a point in the stratum.
    pub scalar_char: SubgroupCharacter,
}

impl Stratum {
    pub fn is_single_point(&self) -> bool {
        self.support.len() == 1
    }
}

#[derive(Clone, Debug)]
pub struct StrataTable {
    pub strata: Vec<Stratum>,
}

impl StrataTable {
    /// Supports whose stabilizer is nontrivial: the fixed locus.
    pub fn fixed_supports(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .strata
            .iter()
            .filter(|s| !s.stabilizer.is_trivial())
            .map(|s| s.support.clone())
            .collect();
        out.sort();
        out
    }

    pub fn by_support(&self, support: &[usize]) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.support == support)
    }

    /// Supports grouped by their (equal) stabilizer subgroup.
    pub fn groups(&self) -> Vec<(&Subgroup, Vec<Vec<usize>>)> {
        let mut map: BTreeMap<Vec<_>, (&Subgroup, Vec<Vec<usize>>)> = BTreeMap::new();
        for s in &self.strata {
            map.entry(s.stabilizer.elements().to_vec())
                .or_insert_with(|| (&s.stabilizer, Vec::new()))
                .1
                .push(s.support.clone());
        }
        let mut groups: Vec<_> = map.into_values().collect();
        groups.sort_by(|a, b| b.0.order().cmp(&a.0.order()).then_with(|| a.1.cmp(&b.1)));
        groups
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub size: usize,
    /// `None` when some orbit point has irrational coordinates.
    pub points: Option<Vec<RationalPoint>>,
}

pub fn orbit(act: &ProjectiveAction, x: &RationalPoint) -> Orbit {
    let group = act.group();
    let m = group.exponent();
    let stab = stabilizer(act, x);
    let size = (group.order() as usize) / stab.order();
    let lead = x.support()[0];

    let mut points: BTreeSet<RationalPoint> = BTreeSet::new();
    for g in group.elements() {
        let mut coords = Vec::with_capacity(x.coords().len());
        for (i, c) in x.coords().iter().enumerate() {
            if c.is_zero() {
                coords.push(Rational::zero());
                continue;
            }
            // relative exponent against the leading coordinate
            let rel = char_combine(group, act.coord_char(i), act.coord_char(lead), -1);
            let e = crate::group::char_eval(group, &rel, &g).expect("same group");
            if e == 0 {
                coords.push(c.clone());
            } else if 2 * e == m {
                coords.push(-c.clone());
            } else {
                return Orbit { size, points: None };
            }
        }
        points.insert(RationalPoint::new(coords).expect("nonzero").canonical());
    }
    let points: Vec<RationalPoint> = points.into_iter().collect();
    assert_eq!(points.len(), size, "orbit-stabilizer mismatch");
    Orbit { size, points: Some(points) }
}

/// Deterministic pseudo-random points with support exactly `stratum.support`.
///
/// Coordinates are `p/q` with `p` a nonzero integer in `[-9, 9]` and `q` in
/// `[1, 9]`; points are canonicalized and deduplicated, so fewer than `count`
/// may come back when the stratum has few such points.
pub fn sample_points(act: &ProjectiveAction, stratum: &Stratum, count: usize, seed: u64) -> Vec<RationalPoint> {
    let n = act.dim() + 1;
    if stratum.is_single_point() {
        let mut coords = vec![Rational::zero(); n];
        coords[stratum.support[0]] = Rational::one();
        return vec![RationalPoint::new(coords).expect("nonzero")];
    }
    let mask: u64 = stratum.support.iter().map(|&i| 1u64 << i).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ mask.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 64 * count.max(1) {
        attempts += 1;
        let mut coords = vec![Rational::zero(); n];
        for &i in &stratum.support {
            let mut p: i64 = rng.gen_range(1..=9);
            if rng.gen_bool(0.5) {
                p = -p;
            }
            let q: i64 = rng.gen_range(1..=9);
            coords[i] = Rational::new(BigInt::from(p), BigInt::from(q));
        }
        let pt = RationalPoint::new(coords).expect("nonzero").canonical();
        if seen.insert(pt.clone()) {
            out.push(pt);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::char_eval;

    fn sign_action() -> ProjectiveAction {
        ProjectiveAction::z2_sign_on_plane()
    }

    #[test]
    fn stabilizer_examples() {
        let act = sign_action();
        assert_eq!(stabilizer(&act, &act.point_i64(&[1, 5, 0]).unwrap()).order(), 2);
        assert_eq!(stabilizer(&act, &act.point_i64(&[0, 0, 1]).unwrap()).order(), 2);
        assert!(stabilizer(&act, &act.point_i64(&[1, 0, 1]).unwrap()).is_trivial());
    }

    #[test]
    fn orbit_examples() {
        let act = sign_action();
        let o = orbit(&act, &act.point_i64(&[1, 1, 1]).unwrap());
        assert_eq!(o.size, 2);
        let pts = o.points.unwrap();
        assert!(pts.contains(&act.point_i64(&[1, 1, 1]).unwrap()));
        assert!(pts.contains(&act.point_i64(&[1, 1, -1]).unwrap()));

        let o = orbit(&act, &act.point_i64(&[1, 1, 0]).unwrap());
        assert_eq!(o.points.unwrap(), vec![act.point_i64(&[1, 1, 0]).unwrap()]);

        let triv = ProjectiveAction::from_raw(&[1], &[&[0], &[0]]).unwrap();
        let o = orbit(&triv, &triv.point_i64(&[3, 7]).unwrap());
        assert_eq!(o.size, 1);
    }

    #[test]
    fn orbit_size_only_for_irrational_points() {
        let act = ProjectiveAction::from_raw(&[3], &[&[0], &[1]]).unwrap();
        let o = orbit(&act, &act.point_i64(&[1, 1]).unwrap());
        assert_eq!(o.size, 3);
        assert!(o.points.is_none());
    }

    #[test]
    fn strata_of_sign_action() {
        let table = sign_action().strata();
        assert_eq!(table.strata.len(), 7);
        assert_eq!(table.fixed_supports(), vec![vec![0], vec![0, 1], vec![1], vec![2]]);
        for s in &table.strata {
            let fixed = s.support.iter().all(|&i| i < 2) || s.support == vec![2];
            assert_eq!(!s.stabilizer.is_trivial(), fixed, "{:?}", s.support);
        }
        // the point (0:0:1) is scaled by -1
        let top = table.by_support(&[2]).unwrap();
        let g = top.stabilizer.index_of(&sign_action().group().element(&[1]).unwrap()).unwrap();
        assert_eq!(top.scalar_char.values()[g], 1);
    }

    #[test]
    fn strata_of_trivial_and_cyclic_actions() {
        let triv = ProjectiveAction::from_raw(&[1], &[&[0], &[0]]).unwrap();
        let table = triv.strata();
        assert_eq!(table.strata.len(), 3);
        assert!(table.strata.iter().all(|s| s.stabilizer.order() == 1));
        assert!(triv.is_free());

        let act = ProjectiveAction::from_raw(&[3], &[&[0], &[1]]).unwrap();
        let table = act.strata();
        let g = act.group();
        for s in &table.strata {
            let brute = g
                .elements()
                .into_iter()
                .filter(|x| {
                    let v: Vec<u64> =
                        s.support.iter().map(|&i| char_eval(g, act.coord_char(i), x).unwrap()).collect();
                    v.iter().all(|&e| e == v[0])
                })
                .count();
            assert_eq!(s.stabilizer.order(), brute);
        }
        assert_eq!(table.by_support(&[0]).unwrap().stabilizer.order(), 3);
        assert_eq!(table.by_support(&[1]).unwrap().stabilizer.order(), 3);
        assert_eq!(table.by_support(&[0, 1]).unwrap().stabilizer.order(), 1);
        assert!(!act.is_free());
    }

    #[test]
    fn free_action() {
        // Z/2 acting by -1 on one coordinate of P^0 is trivial projectively; on
        // P^1 with chi = (0), (1) the two poles are fixed, so not free
        let act = ProjectiveAction::from_raw(&[2], &[&[0], &[1]]).unwrap();
        assert!(!act.is_free());
        let single = ProjectiveAction::from_raw(&[1], &[&[0]]).unwrap();
        assert!(single.is_free());
    }

    #[test]
    fn dim_bound() {
        let g = AbelianGroup::trivial();
        let chars = vec![g.trivial_character(); 12];
        assert!(matches!(ProjectiveAction::new(g, chars), Err(ActionError::DimTooLarge { .. })));
    }

    #[test]
    fn sampler_contract() {
        let act = sign_action();
        let top = act.stratum(&[2]).unwrap();
        assert_eq!(sample_points(&act, &top, 1, 0), vec![act.point_i64(&[0, 0, 1]).unwrap()]);

        let open = act.stratum(&[0, 1, 2]).unwrap();
        let a = sample_points(&act, &open, 3, 42);
        let b = sample_points(&act, &open, 3, 42);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for p in &a {
            assert_eq!(p.support(), &[0, 1, 2]);
        }
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                assert!(!a[i].same_projective_point(&a[j]));
            }
        }
        assert_ne!(sample_points(&act, &open, 3, 43), a);
    }

    #[test]
    fn orbit_stabilizer_and_support_invariance() {
        let act = ProjectiveAction::from_raw(&[2, 2], &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        for s in act.strata().strata {
            let pts = sample_points(&act, &s, 4, 7);
            for p in &pts {
                let st = stabilizer(&act, p);
                assert_eq!(st, s.stabilizer);
                let o = orbit(&act, p);
                assert_eq!(o.size * st.order(), act.group().order() as usize);
            }
            // scalar character is a homomorphism on the stabilizer
            let m = act.group().exponent();
            let el = s.stabilizer.elements();
            for a in el {
                for b in el {
                    let ab = act.group().add(a, b);
                    let (ia, ib) = (s.stabilizer.index_of(a).unwrap(), s.stabilizer.index_of(b).unwrap());
                    let iab = s.stabilizer.index_of(&ab).unwrap();
                    let v = &s.scalar_char.values();
                    assert_eq!(v[iab], (v[ia] + v[ib]) % m);
                }
            }
        }
    }
}
