use super::EqSheafError;
use crate::action::ProjectiveAction;
use crate::group::{char_combine, Character};
use crate::poly::{PolyMatrix, Polynomial, DEFAULT_MAX_TOTAL_DEGREE};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// The line bundle `O(degree)` with its canonical linearization twisted by a character.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TwistedSummand {
    pub degree: i64,
    pub twist: Character,
}

impl TwistedSummand {
    pub fn new(degree: i64, twist: Character) -> Self {
        TwistedSummand { degree, twist }
    }

    pub fn untwisted(act: &ProjectiveAction, degree: i64) -> Self {
        TwistedSummand { degree, twist: act.group().trivial_character() }
    }
}

impl fmt::Display for TwistedSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist.is_trivial() {
            write!(f, "O({})", self.degree)
        } else {
            write!(f, "O({})<{}>", self.degree, self.twist)
        }
    }
}

/// A single way in which a complex fails to be an equivariant cochain complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Homogeneity {
        degree: i64,
        source: usize,
        target: usize,
        monomial: Vec<u32>,
        expected_degree: i64,
    },
    Equivariance {
        degree: i64,
        source: usize,
        target: usize,
        monomial: Vec<u32>,
        monomial_character: Character,
        expected_character: Character,
    },
    SquareNonzero {
        degree: i64,
        source: usize,
        target: usize,
        residue: String,
    },
    DegreeBound {
        degree: i64,
        source: usize,
        target: usize,
        total_degree: u32,
        bound: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Homogeneity { degree, source, target, monomial, expected_degree } => write!(
                f,
                "d^{degree}[{source}->{target}]: monomial {monomial:?} is not of degree {expected_degree}"
            ),
            Violation::Equivariance {
                degree,
                source,
                target,
                monomial,
                monomial_character,
                expected_character,
            } => write!(
                f,
                "d^{degree}[{source}->{target}]: monomial {monomial:?} has character {monomial_character}, expected {expected_character}"
            ),
            Violation::SquareNonzero { degree, source, target, residue } => write!(
                f,
                "d^{}*d^{degree}[{source}->{target}] = {residue} is not zero",
                degree + 1
            ),
            Violation::DegreeBound { degree, source, target, total_degree, bound } => write!(
                f,
                "d^{degree}[{source}->{target}]: total degree {total_degree} exceeds {bound}"
            ),
        }
    }
}

/// Bounded cochain complex of direct sums of twisted line bundles.
///
/// `terms[j]` lists the summands in cohomological degree `j`. The differential
/// `d^j` is a polynomial matrix with one row per summand of degree `j + 1` and
/// one column per summand of degree `j`; absent differentials are zero. Empty
/// degrees and all-zero differentials are dropped on construction, so two
/// complexes that differ only in such padding compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComplex {
    action: ProjectiveAction,
    terms: BTreeMap<i64, Vec<TwistedSummand>>,
    differentials: BTreeMap<i64, PolyMatrix>,
}

impl EquivariantComplex {
    pub fn new(
        action: ProjectiveAction,
        terms: BTreeMap<i64, Vec<TwistedSummand>>,
        differentials: BTreeMap<i64, PolyMatrix>,
    ) -> Result<Self, EqSheafError> {
        let nvars = action.dim() + 1;
        let rank = action.group().rank();
        let terms: BTreeMap<i64, Vec<TwistedSummand>> =
            terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for (j, summands) in &terms {
            for s in summands {
                if s.twist.coords().len() != rank {
                    return Err(EqSheafError::Structure(format!(
                        "summand {s} in degree {j} has a twist on the wrong group"
                    )));
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for (j, m) in differentials {
            if m.is_zero() {
                continue;
            }
            let src = terms.get(&j).map_or(0, Vec::len);
            let tgt = terms.get(&(j + 1)).map_or(0, Vec::len);
            if m.cols() != src || m.rows() != tgt {
                return Err(EqSheafError::Structure(format!(
                    "d^{j} is {}x{} but degrees {j} -> {} have {src} -> {tgt} summands",
                    m.rows(),
                    m.cols(),
                    j + 1
                )));
            }
            if m.nvars() != nvars {
                return Err(EqSheafError::Structure(format!(
                    "d^{j} uses {} variables, the action has {nvars}",
                    m.nvars()
                )));
            }
            diffs.insert(j, m);
        }
        Ok(EquivariantComplex { action, terms, differentials: diffs })
    }

    /// Complex concentrated in degree 0 with zero differential.
    pub fn one_term(action: ProjectiveAction, summands: Vec<TwistedSummand>) -> Result<Self, EqSheafError> {
        Self::new(action, BTreeMap::from([(0, summands)]), BTreeMap::new())
    }

    pub fn zero(action: ProjectiveAction) -> Self {
        EquivariantComplex { action, terms: BTreeMap::new(), differentials: BTreeMap::new() }
    }

    pub fn action(&self) -> &ProjectiveAction {
        &self.action
    }

    pub fn nvars(&self) -> usize {
        self.action.dim() + 1
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vec<TwistedSummand>> {
        &self.terms
    }

    pub fn summands(&self, j: i64) -> &[TwistedSummand] {
        self.terms.get(&j).map_or(&[], Vec::as_slice)
    }

    pub fn differentials(&self) -> &BTreeMap<i64, PolyMatrix> {
        &self.differentials
    }

    /// `d^j`, materialized as a zero matrix when absent.
    pub fn differential(&self, j: i64) -> PolyMatrix {
        self.differentials.get(&j).cloned().unwrap_or_else(|| {
            PolyMatrix::zeros(self.summands(j + 1).len(), self.summands(j).len(), self.nvars())
        })
    }

    pub fn has_differentials(&self) -> bool {
        !self.differentials.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    /// Same terms and differentials, viewed on another action of the same group.
    pub fn with_action(&self, action: ProjectiveAction) -> Result<Self, EqSheafError> {
        Self::new(action, self.terms.clone(), self.differentials.clone())
    }

    pub(crate) fn into_parts(self) -> (ProjectiveAction, BTreeMap<i64, Vec<TwistedSummand>>, BTreeMap<i64, PolyMatrix>) {
        (self.action, self.terms, self.differentials)
    }

    /// Checks homogeneity, equivariance and `d o d = 0`, each reported independently.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        self.validate_with_bound(DEFAULT_MAX_TOTAL_DEGREE)
    }

    pub fn validate_with_bound(&self, max_total_degree: u32) -> Result<(), Vec<Violation>> {
        let group = self.action.group();
        let mut violations = Vec::new();

        for (&j, d) in &self.differentials {
            let src = self.summands(j);
            let tgt = self.summands(j + 1);
            for (t, s, p) in d.nonzero_entries() {
                let expected_degree = tgt[t].degree - src[s].degree;
                let expected_character = char_combine(group, &tgt[t].twist, &src[s].twist, -1);
                for (mono, _) in p.terms() {
                    let total: u32 = mono.iter().sum();
                    if total > max_total_degree {
                        violations.push(Violation::DegreeBound {
                            degree: j,
                            source: s,
                            target: t,
                            total_degree: total,
                            bound: max_total_degree,
                        });
                    }
                    if i64::from(total) != expected_degree {
                        violations.push(Violation::Homogeneity {
                            degree: j,
                            source: s,
                            target: t,
                            monomial: mono.clone(),
                            expected_degree,
                        });
                    }
                    let monomial_character = monomial_character(&self.action, mono);
                    if monomial_character != expected_character {
                        violations.push(Violation::Equivariance {
                            degree: j,
                            source: s,
                            target: t,
                            monomial: mono.clone(),
                            monomial_character,
                            expected_character: expected_character.clone(),
                        });
                    }
                }
            }
        }

        for (&j, d) in &self.differentials {
            let Some(next) = self.differentials.get(&(j + 1)) else { continue };
            let sq = next.mul(d);
            for (t, s, p) in sq.nonzero_entries() {
                violations.push(Violation::SquareNonzero {
                    degree: j,
                    source: s,
                    target: t,
                    residue: p.to_string(),
                });
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn ensure_valid(&self) -> Result<(), EqSheafError> {
        self.validate().map_err(EqSheafError::Invalid)
    }

    /// Reorders summands within each degree into sorted order, permuting the
    /// differentials to match. Two complexes that differ by a within-degree
    /// permutation of summands normalize to the same complex when their
    /// summands are pairwise distinct.
    pub fn normalized(&self) -> EquivariantComplex {
        let perms: BTreeMap<i64, Vec<usize>> = self
            .terms
            .iter()
            .map(|(&j, summands)| {
                let mut order: Vec<usize> = (0..summands.len()).collect();
                order.sort_by(|&a, &b| summands[a].cmp(&summands[b]).then(a.cmp(&b)));
                // position[old] = new
                let mut position = vec![0; summands.len()];
                for (new, &old) in order.iter().enumerate() {
                    position[old] = new;
                }
                (j, position)
            })
            .collect();
        self.permuted(&perms)
    }

    /// Applies `position[j][old] = new` to the summands of each degree.
    pub fn permuted(&self, position: &BTreeMap<i64, Vec<usize>>) -> EquivariantComplex {
        let terms = self
            .terms
            .iter()
            .map(|(&j, summands)| {
                let pos = &position[&j];
                let mut out = summands.clone();
                for (old, s) in summands.iter().enumerate() {
                    out[pos[old]] = s.clone();
                }
                (j, out)
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .map(|(&j, d)| (j, d.permuted(&position[&(j + 1)], &position[&j])))
            .collect();
        EquivariantComplex { action: self.action.clone(), terms, differentials }
    }
}

/// `sum_i a_i * chi_i`, the character by which the group scales `x^a`.
pub fn monomial_character(act: &ProjectiveAction, mono: &[u32]) -> Character {
    let group = act.group();
    let mut acc = group.trivial_character();
    for (i, &a) in mono.iter().enumerate() {
        if a > 0 {
            acc = char_combine(group, &acc, act.coord_char(i), i64::from(a));
        }
    }
    acc
}

/// The monomials of total degree `degree` whose character is `chi`, in lexicographic order.
pub fn monomials_with_character(act: &ProjectiveAction, degree: u32, chi: &Character) -> Vec<Vec<u32>> {
    let n = act.dim() + 1;
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(
        act: &ProjectiveAction,
        chi: &Character,
        idx: usize,
        left: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx + 1 == current.len() {
            current[idx] = left;
            if monomial_character(act, current) == *chi {
                out.push(current.clone());
            }
            current[idx] = 0;
            return;
        }
        for k in (0..=left).rev() {
            current[idx] = k;
            rec(act, chi, idx + 1, left - k, current, out);
        }
        current[idx] = 0;
    }
    rec(act, chi, 0, degree, &mut current, &mut out);
    out
}

/// Convenience constructor for a polynomial matrix entry from `(exponents, coefficient)` pairs.
pub fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> Polynomial {
    Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), crate::linalg::rat(*c))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign() -> ProjectiveAction {
        ProjectiveAction::z2_sign_on_plane()
    }

    fn two_term(source_twist: i64) -> EquivariantComplex {
        let act = sign();
        let g = act.group().clone();
        let terms = BTreeMap::from([
            (0, vec![TwistedSummand::new(0, g.character(&[source_twist]).unwrap())]),
            (1, vec![TwistedSummand::new(1, g.character(&[0]).unwrap())]),
        ]);
        let mut d = PolyMatrix::zeros(1, 1, 3);
        d.set(0, 0, Polynomial::var(3, 2));
        EquivariantComplex::new(act, terms, BTreeMap::from([(0, d)])).unwrap()
    }

    #[test]
    fn single_summand_is_valid() {
        let act = sign();
        let c = EquivariantComplex::one_term(act.clone(), vec![TwistedSummand::untwisted(&act, 3)]).unwrap();
        assert_eq!(c.validate(), Ok(()));
    }

    #[test]
    fn equivariant_entry_validates() {
        assert_eq!(two_term(1).validate(), Ok(()));
    }

    #[test]
    fn wrong_source_twist_is_reported() {
        let errs = two_term(0).validate().unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(matches!(&errs[0], Violation::Equivariance { monomial, .. } if monomial == &vec![0, 0, 1]));
    }

    #[test]
    fn homogeneity_and_square_violations() {
        let act = sign();
        let t = |d| TwistedSummand::untwisted(&act, d);
        let terms = BTreeMap::from([(0, vec![t(0)]), (1, vec![t(1)]), (2, vec![t(2)])]);
        let mut d0 = PolyMatrix::zeros(1, 1, 3);
        d0.set(0, 0, Polynomial::var(3, 0));
        let mut d1 = PolyMatrix::zeros(1, 1, 3);
        d1.set(0, 0, poly(3, &[(&[0, 1, 0], 1), (&[2, 0, 0], 1)]));
        let c = EquivariantComplex::new(act.clone(), terms, BTreeMap::from([(0, d0), (1, d1)])).unwrap();
        let errs = c.validate().unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::Homogeneity { degree: 1, .. })));
        assert!(errs.iter().any(|v| matches!(v, Violation::SquareNonzero { degree: 0, .. })));
        assert!(!errs.iter().any(|v| matches!(v, Violation::Equivariance { .. })));
    }

    #[test]
    fn shape_mismatch_is_structural() {
        let act = sign();
        let terms = BTreeMap::from([(0, vec![TwistedSummand::untwisted(&act, 0)])]);
        let mut d = PolyMatrix::zeros(2, 1, 3);
        d.set(0, 0, Polynomial::var(3, 0));
        assert!(matches!(
            EquivariantComplex::new(act, terms, BTreeMap::from([(0, d)])),
            Err(EqSheafError::Structure(_))
        ));
    }

    #[test]
    fn monomial_enumeration() {
        let act = sign();
        let even = monomials_with_character(&act, 2, &act.group().character(&[0]).unwrap());
        assert_eq!(even, vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        let odd = monomials_with_character(&act, 2, &act.group().character(&[1]).unwrap());
        assert_eq!(odd, vec![vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn normalization_undoes_permutation() {
        let act = sign();
        let g = act.group().clone();
        let a = TwistedSummand::new(0, g.character(&[1]).unwrap());
        let b = TwistedSummand::new(0, g.character(&[0]).unwrap());
        let tgt = TwistedSummand::new(1, g.character(&[0]).unwrap());
        let mut d = PolyMatrix::zeros(1, 2, 3);
        d.set(0, 0, Polynomial::var(3, 2));
        d.set(0, 1, Polynomial::var(3, 0));
        let c = EquivariantComplex::new(
            act,
            BTreeMap::from([(0, vec![a, b]), (1, vec![tgt])]),
            BTreeMap::from([(0, d)]),
        )
        .unwrap();
        assert_eq!(c.validate(), Ok(()));
        let swapped = c.permuted(&BTreeMap::from([(0, vec![1, 0]), (1, vec![0])]));
        assert_ne!(swapped, c);
        assert_eq!(swapped.validate(), Ok(()));
        assert_eq!(swapped.normalized(), c.normalized());
    }
}
