//! Finite abelian groups `Z/n1 x ... x Z/nr`, their characters and subgroups.
//!
//! Character values are never complex numbers. A character `chi` sends `g` to
//! `zeta^e` where `zeta` is a fixed primitive `m`-th root of unity, `m` the
//! exponent of the group, and `e = sum_i chi_i * g_i * (m / n_i) mod m`. Only
//! the exponent `e` is ever stored.

use crate::linalg::{smith_normal_form, ZMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Upper bound on `|G|` so that subgroups can always be enumerated.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one cyclic factor")]
    NoFactors,
    #[error("cyclic factor orders must be at least 1 (got {0})")]
    BadOrder(i64),
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("{what} has {got} coordinates but the group has {expected} factors")]
    Mismatch { what: &'static str, got: usize, expected: usize },
    #[error("equalizer of an empty character list is undefined")]
    EmptyCharacterList,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u64>")]
pub struct AbelianGroup {
    orders: Vec<u64>,
    exponent: u64,
}

impl AbelianGroup {
    pub fn new(orders: &[i64]) -> Result<Self, GroupError> {
        Self::with_bound(orders, DEFAULT_MAX_GROUP_ORDER)
    }

    pub fn with_bound(orders: &[i64], bound: u64) -> Result<Self, GroupError> {
        if orders.is_empty() {
            return Err(GroupError::NoFactors);
        }
        let mut out = Vec::with_capacity(orders.len());
        let mut size: u64 = 1;
        for &n in orders {
            if n < 1 {
                return Err(GroupError::BadOrder(n));
            }
            let n = n as u64;
            size = size.saturating_mul(n);
            if size > bound {
                return Err(GroupError::TooLarge { order: size, bound });
            }
            out.push(n);
        }
        let exponent = out.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(AbelianGroup { orders: out, exponent })
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: vec![1], exponent: 1 }
    }

    pub fn cyclic(n: u64) -> Self {
        AbelianGroup::new(&[n as i64]).expect("valid cyclic order")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    pub fn trivial_character(&self) -> Character {
        Character { coords: vec![0; self.rank()] }
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        Ok(GroupElement { coords: self.reduce(coords, "group element")? })
    }

    pub fn character(&self, coords: &[i64]) -> Result<Character, GroupError> {
        Ok(Character { coords: self.reduce(coords, "character")? })
    }

    fn reduce(&self, coords: &[i64], what: &'static str) -> Result<Vec<u64>, GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::Mismatch { what, got: coords.len(), expected: self.rank() });
        }
        Ok(coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect())
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|k| GroupElement { coords: self.mixed_radix(k) }).collect()
    }

    /// All characters, in the same coordinate order as [`elements`](Self::elements).
    pub fn characters(&self) -> Vec<Character> {
        (0..self.order()).map(|k| Character { coords: self.mixed_radix(k) }).collect()
    }

    fn mixed_radix(&self, mut k: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&n| {
                let c = k % n;
                k /= n;
                c
            })
            .collect()
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        }
    }

    fn check_len(&self, what: &'static str, len: usize) -> Result<(), GroupError> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(GroupError::Mismatch { what, got: len, expected: self.rank() })
        }
    }
}

impl TryFrom<Vec<i64>> for AbelianGroup {
    type Error = GroupError;
    fn try_from(v: Vec<i64>) -> Result<Self, GroupError> {
        AbelianGroup::new(&v)
    }
}

impl From<AbelianGroup> for Vec<u64> {
    fn from(g: AbelianGroup) -> Vec<u64> {
        g.orders
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    coords: Vec<u64>,
}

impl Character {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Value exponent of `chi` at `g`, in `Z/exponent`.
pub fn char_eval(group: &AbelianGroup, chi: &Character, g: &GroupElement) -> Result<u64, GroupError> {
    group.check_len("character", chi.coords.len())?;
    group.check_len("group element", g.coords.len())?;
    Ok(eval_unchecked(group, chi, g))
}

fn eval_unchecked(group: &AbelianGroup, chi: &Character, g: &GroupElement) -> u64 {
    let m = group.exponent;
    let mut acc: u64 = 0;
    for ((&c, &x), &n) in chi.coords.iter().zip(&g.coords).zip(&group.orders) {
        acc = (acc + (c * x % n) * (m / n)) % m;
    }
    acc
}

/// `a + k * b`, coordinatewise modulo the factor orders.
pub fn char_combine(group: &AbelianGroup, a: &Character, b: &Character, k: i64) -> Character {
    Character {
        coords: a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&group.orders)
            .map(|((&x, &y), &n)| {
                let n = n as i128;
                ((x as i128 + k as i128 * y as i128).rem_euclid(n)) as u64
            })
            .collect(),
    }
}

pub fn char_scale(group: &AbelianGroup, a: &Character, k: i64) -> Character {
    char_combine(group, &group.trivial_character(), a, k)
}

/// A subgroup with its elements enumerated and sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: AbelianGroup,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    /// Closure of `generators` under the group law.
    pub fn generated_by(parent: &AbelianGroup, generators: Vec<GroupElement>) -> Self {
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        let id = parent.identity();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = parent.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Subgroup { parent: parent.clone(), generators, elements: seen.into_iter().collect() }
    }

    pub fn whole(parent: &AbelianGroup) -> Self {
        let generators = (0..parent.rank())
            .filter(|&i| parent.orders[i] > 1)
            .map(|i| {
                let mut coords = vec![0; parent.rank()];
                coords[i] = 1;
                GroupElement { coords }
            })
            .collect();
        Subgroup::generated_by(parent, generators)
    }

    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {:?}, gens {:?})", self.order(), self.parent, self.generators)
    }
}

/// The subgroup on which every listed character takes the same value.
///
/// Solves `(chi_i - chi_0)(g) = 0 mod m` for all `i` through the Smith form of
/// the integer system `[A | m I]`, where row `i` of `A` holds the scaled
/// coefficients `(chi_i - chi_0)_k * (m / n_k)`.
pub fn equalizer_subgroup(group: &AbelianGroup, chars: &[Character]) -> Result<Subgroup, GroupError> {
    let (first, rest) = chars.split_first().ok_or(GroupError::EmptyCharacterList)?;
    for chi in chars {
        group.check_len("character", chi.coords.len())?;
    }
    let r = group.rank();
    let m = group.exponent as i64;
    let conditions: Vec<Character> = rest
        .iter()
        .map(|chi| char_combine(group, chi, first, -1))
        .filter(|d| !d.is_trivial())
        .collect();
    if conditions.is_empty() {
        return Ok(Subgroup::whole(group));
    }

    let rows = conditions.len();
    let mut system = ZMatrix::zeros(rows, r + rows);
    for (i, d) in conditions.iter().enumerate() {
        for k in 0..r {
            let scale = m / group.orders[k] as i64;
            system[(i, k)] = BigInt::from(d.coords[k] as i64 * scale);
        }
        system[(i, r + i)] = BigInt::from(m);
    }
    let snf = smith_normal_form(&system);
    let generators = snf
        .kernel_basis()
        .into_iter()
        .map(|v| GroupElement {
            coords: (0..r)
                .map(|k| {
                    let n = BigInt::from(group.orders[k]);
                    v[k].mod_floor(&n).to_u64().expect("reduced coordinate fits")
                })
                .collect(),
        })
        .collect();
    Ok(Subgroup::generated_by(group, generators))
}

/// Values of a character on the elements of a subgroup, aligned with
/// [`Subgroup::elements`].
///
/// Two restrictions to the same subgroup are the same character of that
/// subgroup exactly when the value tables agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubgroupCharacter {
    values: Vec<u64>,
}

impl SubgroupCharacter {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn trivial(s: &Subgroup) -> Self {
        SubgroupCharacter { values: vec![0; s.order()] }
    }

    pub fn from_values(values: Vec<u64>) -> Self {
        SubgroupCharacter { values }
    }

    /// `self + k * other`, valuewise in `Z/m`.
    pub fn combine(&self, other: &SubgroupCharacter, k: i64, m: u64) -> SubgroupCharacter {
        let m = m as i128;
        SubgroupCharacter {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| (a as i128 + k as i128 * b as i128).rem_euclid(m) as u64)
                .collect(),
        }
    }

    /// Lexicographically least character of the parent group with this restriction.
    pub fn canonical_lift(&self, s: &Subgroup) -> Character {
        let g = s.parent();
        g.characters()
            .into_iter()
            .filter(|chi| restrict_character(g, chi, s).values == *self)
            .min()
            .expect("every character of a subgroup extends to the whole group")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub values: SubgroupCharacter,
    pub is_trivial: bool,
}

pub fn restrict_character(group: &AbelianGroup, chi: &Character, s: &Subgroup) -> Restriction {
    let values: Vec<u64> = s.elements.iter().map(|g| eval_unchecked(group, chi, g)).collect();
    let is_trivial = values.iter().all(|&v| v == 0);
    Restriction { values: SubgroupCharacter { values }, is_trivial }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2() -> AbelianGroup {
        AbelianGroup::cyclic(2)
    }

    #[test]
    fn construction_errors() {
        assert_eq!(AbelianGroup::new(&[]), Err(GroupError::NoFactors));
        assert_eq!(AbelianGroup::new(&[2, 0]), Err(GroupError::BadOrder(0)));
        assert!(matches!(AbelianGroup::new(&[100, 101]), Err(GroupError::TooLarge { .. })));
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.order(), 6);
        assert!(g.character(&[1]).is_err());
    }

    #[test]
    fn char_eval_examples() {
        let g = z2();
        let chi = g.character(&[1]).unwrap();
        assert_eq!(char_eval(&g, &chi, &g.element(&[1]).unwrap()).unwrap(), 1);
        assert_eq!(char_eval(&g, &chi, &g.identity()).unwrap(), 0);

        let g = AbelianGroup::new(&[2, 3]).unwrap();
        let chi = g.character(&[1, 1]).unwrap();
        let x = g.element(&[1, 2]).unwrap();
        assert_eq!(char_eval(&g, &chi, &x).unwrap(), 1);
        let wrong = AbelianGroup::cyclic(5).character(&[1]).unwrap();
        assert!(char_eval(&g, &wrong, &x).is_err());
    }

    #[test]
    fn char_eval_matches_complex_roots() {
        // chi(g) = prod_i exp(2 pi i chi_i g_i / n_i), compared numerically
        let g = AbelianGroup::new(&[2, 3, 4]).unwrap();
        let m = g.exponent() as f64;
        for chi in g.characters() {
            for x in g.elements() {
                let (mut re, mut im) = (1.0f64, 0.0f64);
                for i in 0..3 {
                    let n = g.orders()[i] as f64;
                    let theta = 2.0 * std::f64::consts::PI * (chi.coords()[i] * x.coords()[i]) as f64 / n;
                    let (c, s) = (theta.cos(), theta.sin());
                    (re, im) = (re * c - im * s, re * s + im * c);
                }
                let e = char_eval(&g, &chi, &x).unwrap() as f64;
                let theta = 2.0 * std::f64::consts::PI * e / m;
                assert!((re - theta.cos()).abs() < 1e-9 && (im - theta.sin()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn char_combine_examples() {
        let g = z2();
        let a = g.character(&[1]).unwrap();
        assert_eq!(char_combine(&g, &a, &a, 0), a);
        assert!(char_combine(&g, &a, &a, 1).is_trivial());

        let g = AbelianGroup::cyclic(4);
        let a = g.character(&[1]).unwrap();
        let b = g.character(&[2]).unwrap();
        let c = char_combine(&g, &a, &b, 3);
        assert_eq!(c, g.character(&[3]).unwrap());
        for x in g.elements() {
            let lhs = char_eval(&g, &c, &x).unwrap();
            let rhs = (char_eval(&g, &a, &x).unwrap() + 3 * char_eval(&g, &b, &x).unwrap()) % 4;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn equalizer_examples() {
        let g = z2();
        let c0 = g.character(&[0]).unwrap();
        let c2 = g.character(&[1]).unwrap();
        assert_eq!(equalizer_subgroup(&g, &[c0.clone(), c0.clone()]).unwrap().order(), 2);
        assert!(equalizer_subgroup(&g, &[c0.clone(), c2.clone()]).unwrap().is_trivial());
        assert_eq!(equalizer_subgroup(&g, &[c2]).unwrap().order(), 2);
        assert_eq!(equalizer_subgroup(&g, &[]), Err(GroupError::EmptyCharacterList));
    }

    #[test]
    fn restriction_examples() {
        let g = z2();
        let whole = Subgroup::whole(&g);
        assert!(restrict_character(&g, &g.trivial_character(), &whole).is_trivial);
        assert!(!restrict_character(&g, &g.character(&[1]).unwrap(), &whole).is_trivial);

        let g = AbelianGroup::cyclic(4);
        let s = Subgroup::generated_by(&g, vec![g.element(&[2]).unwrap()]);
        let r = restrict_character(&g, &g.character(&[2]).unwrap(), &s);
        assert_eq!(r.values.values(), &[0, 0]);
        assert!(r.is_trivial);
    }

    #[test]
    fn canonical_lift_roundtrip() {
        let g = AbelianGroup::new(&[2, 4]).unwrap();
        let s = Subgroup::generated_by(&g, vec![g.element(&[1, 2]).unwrap()]);
        for chi in g.characters() {
            let r = restrict_character(&g, &chi, &s).values;
            let lift = r.canonical_lift(&s);
            assert!(lift <= chi);
            assert_eq!(restrict_character(&g, &lift, &s).values, r);
        }
    }

    fn brute_equalizer(g: &AbelianGroup, chars: &[Character]) -> Vec<GroupElement> {
        g.elements()
            .into_iter()
            .filter(|x| {
                let v0 = char_eval(g, &chars[0], x).unwrap();
                chars.iter().all(|c| char_eval(g, c, x).unwrap() == v0)
            })
            .collect()
    }

    fn arb_group() -> impl Strategy<Value = AbelianGroup> {
        prop::collection::vec(1i64..=8, 1..=3)
            .prop_filter("order at most 64", |o| o.iter().product::<i64>() <= 64)
            .prop_map(|o| AbelianGroup::new(&o).unwrap())
    }

    fn arb_chars(g: AbelianGroup, max: usize) -> impl Strategy<Value = (AbelianGroup, Vec<Character>)> {
        let rank = g.rank();
        prop::collection::vec(prop::collection::vec(0i64..64, rank), 1..=max).prop_map(move |cs| {
            let chars = cs.iter().map(|c| g.character(c).unwrap()).collect();
            (g.clone(), chars)
        })
    }

    proptest! {
        #[test]
        fn equalizer_agrees_with_enumeration((g, chars) in arb_group().prop_flat_map(|g| arb_chars(g, 4))) {
            let s = equalizer_subgroup(&g, &chars).unwrap();
            let mut brute = brute_equalizer(&g, &chars);
            brute.sort();
            prop_assert_eq!(s.elements(), &brute[..]);
            prop_assert!(s.contains(&g.identity()));
            for a in s.elements() {
                for b in s.elements() {
                    prop_assert!(s.contains(&g.add(a, b)));
                }
            }
        }

        #[test]
        fn single_character_equalizer_is_whole((g, chars) in arb_group().prop_flat_map(|g| arb_chars(g, 1))) {
            let s = equalizer_subgroup(&g, &chars).unwrap();
            prop_assert_eq!(s.order() as u64, g.order());
        }

        #[test]
        fn order_multiple_restricts_trivially(
            (g, chars) in arb_group().prop_flat_map(|g| arb_chars(g, 3)),
            k in -5i64..5,
        ) {
            let s = equalizer_subgroup(&g, &chars).unwrap();
            let chi = &chars[0];
            let powered = char_scale(&g, chi, g.order() as i64);
            prop_assert!(restrict_character(&g, &powered, &s).is_trivial);
            // a character trivial on s stays trivial under all multiples
            let triv = restrict_character(&g, &powered, &s).is_trivial;
            if triv {
                let multiple = char_scale(&g, &powered, k);
                for x in s.elements() {
                    prop_assert_eq!(char_eval(&g, &multiple, x).unwrap(), 0);
                }
            }
        }
    }
}
