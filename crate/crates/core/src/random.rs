//! Random instances for self-tests: small diagonal actions, valid equivariant
//! complexes, functor words and exact triples.
//!
//! Complexes are direct sums of one-term, two-term and Koszul pieces, mixed
//! by unipotent equivariant changes of basis so that blocks are not aligned
//! with the pieces.

use crate::action::ProjectiveAction;
use crate::eqsheaf::{monomials_with_character, EquivariantComplex, GradedSpace, TwistedSummand};
use crate::fm::{EquivariantAutomorphism, FunctorWord, Generator};
use crate::group::{char_combine, AbelianGroup, Character, SubgroupCharacter};
use crate::linalg::{QMatrix, Rational};
use crate::poly::{PolyMatrix, Polynomial};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// Groups of order at most 12.
const GROUPS: &[&[i64]] = &[
    &[1], &[2], &[3], &[4], &[5], &[6], &[7], &[8], &[9], &[10], &[11], &[12],
    &[2, 2], &[2, 4], &[2, 6], &[3, 3], &[2, 2, 2],
];

/// Degrees a random complex may occupy.
const DEGREE_WINDOW: std::ops::RangeInclusive<i64> = -2..=1;
const MAX_TERMS_PER_DEGREE: usize = 4;

pub fn random_group<R: Rng>(rng: &mut R) -> AbelianGroup {
    AbelianGroup::new(GROUPS.choose(rng).unwrap()).expect("listed orders are valid")
}

pub fn random_character<R: Rng>(group: &AbelianGroup, rng: &mut R) -> Character {
    let coords: Vec<i64> = group.orders().iter().map(|&n| rng.gen_range(0..n as i64)).collect();
    group.character(&coords).expect("in range")
}

/// A random action on `P^n` with `1 <= n <= 3` and `|G| <= 12`.
pub fn random_action<R: Rng>(rng: &mut R) -> ProjectiveAction {
    let group = random_group(rng);
    let n = rng.gen_range(1..=3);
    let chars = (0..=n).map(|_| random_character(&group, rng)).collect();
    ProjectiveAction::new(group, chars).expect("small action")
}

pub fn random_summand<R: Rng>(act: &ProjectiveAction, rng: &mut R) -> TwistedSummand {
    TwistedSummand::new(rng.gen_range(-3..=3), random_character(act.group(), rng))
}

/// A small nonzero rational, mostly integral.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut p: i64 = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        p = -p;
    }
    let q: i64 = if rng.gen_bool(0.25) { rng.gen_range(2..=3) } else { 1 };
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A nonzero polynomial of the given degree and character, if one exists.
fn random_equivariant_poly<R: Rng>(act: &ProjectiveAction, degree: i64, chi: &Character, rng: &mut R) -> Option<Polynomial> {
    if degree < 0 {
        return None;
    }
    let monos = monomials_with_character(act, degree as u32, chi);
    if monos.is_empty() {
        return None;
    }
    let k = rng.gen_range(1..=monos.len().min(2));
    let terms = monos.choose_multiple(rng, k).map(|m| (m.clone(), random_rational(rng)));
    Some(Polynomial::from_terms(act.dim() + 1, terms))
}

/// A random monomial of the given total degree.
fn random_monomial<R: Rng>(act: &ProjectiveAction, degree: u32, rng: &mut R) -> Vec<u32> {
    let mut mono = vec![0u32; act.dim() + 1];
    for _ in 0..degree {
        mono[rng.gen_range(0..=act.dim())] += 1;
    }
    mono
}

fn equivariant_poly_through<R: Rng>(act: &ProjectiveAction, degree: u32, rng: &mut R) -> (Polynomial, Character) {
    let mono = random_monomial(act, degree, rng);
    let chi = crate::eqsheaf::monomial_character(act, &mono);
    let p = random_equivariant_poly(act, degree as i64, &chi, rng).expect("the chosen monomial qualifies");
    (p, chi)
}

struct Piece {
    terms: BTreeMap<i64, Vec<TwistedSummand>>,
    diffs: BTreeMap<i64, PolyMatrix>,
}

fn piece<R: Rng>(act: &ProjectiveAction, rng: &mut R) -> Piece {
    let group = act.group();
    let nv = act.dim() + 1;
    let top = random_summand(act, rng);
    match rng.gen_range(0..3) {
        0 => Piece { terms: BTreeMap::from([(0, vec![top])]), diffs: BTreeMap::new() },
        1 => {
            let e = rng.gen_range(0..=2);
            let (f, chi) = equivariant_poly_through(act, e, rng);
            let src = TwistedSummand::new(top.degree - i64::from(e), char_combine(group, &top.twist, &chi, -1));
            let mut d = PolyMatrix::zeros(1, 1, nv);
            d.set(0, 0, f);
            Piece { terms: BTreeMap::from([(0, vec![src]), (1, vec![top])]), diffs: BTreeMap::from([(0, d)]) }
        }
        _ => {
            // O(-a-b) -[-g; f]-> O(-a) + O(-b) -[f, g]-> O
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (f, chi_f) = equivariant_poly_through(act, a, rng);
            let (g, chi_g) = equivariant_poly_through(act, b, rng);
            let tw = |k_f: i64, k_g: i64| {
                let t = char_combine(group, &top.twist, &chi_f, -k_f);
                char_combine(group, &t, &chi_g, -k_g)
            };
            let (a, b) = (i64::from(a), i64::from(b));
            let first = TwistedSummand::new(top.degree - a - b, tw(1, 1));
            let mid = vec![TwistedSummand::new(top.degree - a, tw(1, 0)), TwistedSummand::new(top.degree - b, tw(0, 1))];
            let mut d0 = PolyMatrix::zeros(2, 1, nv);
            d0.set(0, 0, g.scale(&-Rational::one()));
            d0.set(1, 0, f.clone());
            let mut d1 = PolyMatrix::zeros(1, 2, nv);
            d1.set(0, 0, f);
            d1.set(0, 1, g);
            Piece {
                terms: BTreeMap::from([(0, vec![first]), (1, mid), (2, vec![top])]),
                diffs: BTreeMap::from([(0, d0), (1, d1)]),
            }
        }
    }
}

fn direct_sum(nv: usize, pieces: Vec<(i64, Piece)>) -> (BTreeMap<i64, Vec<TwistedSummand>>, BTreeMap<i64, PolyMatrix>) {
    let mut terms: BTreeMap<i64, Vec<TwistedSummand>> = BTreeMap::new();
    // (piece, degree) -> offset of the piece's summands in the sum
    let mut offsets: Vec<BTreeMap<i64, usize>> = Vec::new();
    for (shift, p) in &pieces {
        let mut off = BTreeMap::new();
        for (&j, v) in &p.terms {
            let slot = terms.entry(j + shift).or_default();
            off.insert(j + shift, slot.len());
            slot.extend(v.iter().cloned());
        }
        offsets.push(off);
    }
    let mut diffs: BTreeMap<i64, PolyMatrix> = BTreeMap::new();
    for ((shift, p), off) in pieces.iter().zip(&offsets) {
        for (&j, d) in &p.diffs {
            let j = j + shift;
            let m = diffs.entry(j).or_insert_with(|| {
                let rows = terms.get(&(j + 1)).map_or(0, Vec::len);
                let cols = terms.get(&j).map_or(0, Vec::len);
                PolyMatrix::zeros(rows, cols, nv)
            });
            for (r, c, poly) in d.nonzero_entries() {
                m.set(off[&(j + 1)] + r, off[&j] + c, poly.clone());
            }
        }
    }
    (terms, diffs)
}

/// A random valid complex on `act`, with at most four degrees and at most
/// four summands in each.
pub fn random_complex<R: Rng>(act: &ProjectiveAction, rng: &mut R) -> EquivariantComplex {
    let nv = act.dim() + 1;
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut pieces = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let p = piece(act, rng);
        let span = *p.terms.keys().last().unwrap();
        let shift = rng.gen_range(*DEGREE_WINDOW.start()..=*DEGREE_WINDOW.end() - span);
        let fits = p.terms.iter().all(|(j, v)| counts.get(&(j + shift)).copied().unwrap_or(0) + v.len() <= MAX_TERMS_PER_DEGREE);
        if !fits {
            continue;
        }
        for (j, v) in &p.terms {
            *counts.entry(j + shift).or_default() += v.len();
        }
        pieces.push((shift, p));
    }
    let (terms, mut diffs) = direct_sum(nv, pieces);

    for _ in 0..rng.gen_range(0..=3) {
        basis_change(act, &terms, &mut diffs, rng);
    }
    EquivariantComplex::new(act.clone(), terms, diffs).expect("pieces are well formed")
}

/// Replaces `C^j` by its image under `P = I + q E_ab`:
/// `d^j -> d^j P^-1` and `d^(j-1) -> P d^(j-1)`.
fn basis_change<R: Rng>(
    act: &ProjectiveAction,
    terms: &BTreeMap<i64, Vec<TwistedSummand>>,
    diffs: &mut BTreeMap<i64, PolyMatrix>,
    rng: &mut R,
) {
    let candidates: Vec<i64> = terms.iter().filter(|(_, v)| v.len() >= 2).map(|(&j, _)| j).collect();
    let Some(&j) = candidates.choose(rng) else { return };
    let v = &terms[&j];
    let a = rng.gen_range(0..v.len());
    let b = (a + rng.gen_range(1..v.len())) % v.len();
    let chi = char_combine(act.group(), &v[a].twist, &v[b].twist, -1);
    let Some(q) = random_equivariant_poly(act, v[a].degree - v[b].degree, &chi, rng) else { return };
    if let Some(d) = diffs.get_mut(&j) {
        // column b -= q * column a
        for r in 0..d.rows() {
            let extra = d.get(r, a).mul(&q);
            let updated = d.get(r, b).sub(&extra);
            d.set(r, b, updated);
        }
    }
    if let Some(d) = diffs.get_mut(&(j - 1)) {
        // row a += q * row b
        for c in 0..d.cols() {
            let extra = q.mul(d.get(b, c));
            let updated = d.get(a, c).add(&extra);
            d.set(a, c, updated);
        }
    }
}

/// An automorphism of `act` or onto a relabelled copy of it.
pub fn random_automorphism<R: Rng>(act: &ProjectiveAction, rng: &mut R) -> EquivariantAutomorphism {
    let n = act.dim() + 1;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut target_chars = vec![act.group().trivial_character(); n];
    for (i, &p) in perm.iter().enumerate() {
        target_chars[p] = act.coord_char(i).clone();
    }
    let target = ProjectiveAction::new(act.group().clone(), target_chars).expect("same shape");
    let scalars = (0..n).map(|_| random_rational(rng)).collect();
    EquivariantAutomorphism::new(perm, scalars, act.clone(), target).expect("equivariant by construction")
}

/// A random word of length at most `max_len` starting from `act`, and the action it ends on.
pub fn random_word<R: Rng>(act: &ProjectiveAction, max_len: usize, rng: &mut R) -> (FunctorWord, ProjectiveAction) {
    let mut current = act.clone();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=max_len) {
        let g = match rng.gen_range(0..3) {
            0 => Generator::Shift(rng.gen_range(-3..=3)),
            1 => Generator::Twist(random_summand(&current, rng)),
            _ => {
                let f = random_automorphism(&current, rng);
                current = f.target().clone();
                Generator::Push(f)
            }
        };
        gens.push(g);
    }
    (FunctorWord::new(act.group().clone(), gens).expect("chained by construction"), current)
}

/// A graded-space triple with maps `a: V1 -> V2`, `b: V2 -> V3`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub v1: GradedSpace,
    pub v2: GradedSpace,
    pub v3: GradedSpace,
    pub a: QMatrix,
    pub b: QMatrix,
}

fn cyclic_character(order: u64, k: u64) -> SubgroupCharacter {
    SubgroupCharacter::from_values((0..order).map(|g| g * k % order).collect())
}

fn small_int<R: Rng>(rng: &mut R) -> Rational {
    Rational::from_integer(BigInt::from(rng.gen_range(-3..=3)))
}

/// Random invertible matrix: a product of elementary unipotents and a diagonal.
fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> QMatrix {
    let mut m = QMatrix::identity(n);
    if n >= 2 {
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let mut e = QMatrix::identity(n);
            e[(i, j)] = small_int(rng);
            m = e.mul(&m);
        }
    }
    let mut d = QMatrix::identity(n);
    for i in 0..n {
        d[(i, i)] = random_rational(rng);
    }
    d.mul(&m)
}

/// An exact `0 -> V1 -> V2 -> V3 -> 0` with every space carrying the trivial
/// character of a cyclic stabilizer.
pub fn random_exact_trivial_triple<R: Rng>(rng: &mut R) -> Triple {
    let order = rng.gen_range(1..=12);
    let triv = cyclic_character(order, 0);
    let (p, q) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let n = p + q;
    let u = random_invertible(n, rng);
    let w = random_invertible(q, rng);
    // a = U [I; 0], b = W [0 I] U^-1; U^-1 is recovered column by column
    let mut a = QMatrix::zeros(n, p);
    for r in 0..n {
        for c in 0..p {
            a[(r, c)] = u[(r, c)].clone();
        }
    }
    let uinv = inverse(&u);
    let mut proj = QMatrix::zeros(q, n);
    for r in 0..q {
        for c in 0..n {
            proj[(r, c)] = uinv[(p + r, c)].clone();
        }
    }
    let b = w.mul(&proj);
    Triple {
        v1: GradedSpace::new(vec![triv.clone(); p]),
        v2: GradedSpace::new(vec![triv.clone(); n]),
        v3: GradedSpace::new(vec![triv; q]),
        a,
        b,
    }
}

/// Outer terms trivial, middle term with a nontrivial block that both maps
/// miss, so the sequence cannot be exact.
pub fn random_nonexact_triple<R: Rng>(rng: &mut R) -> Triple {
    let order = rng.gen_range(2..=12);
    let triv = cyclic_character(order, 0);
    let nontriv = cyclic_character(order, rng.gen_range(1..order));
    let (p, t, s, q) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(1..=2), rng.gen_range(0..=2));
    let mut basis = vec![triv.clone(); t];
    basis.extend(vec![nontriv; s]);
    let order_mix: Vec<usize> = {
        let mut v: Vec<usize> = (0..t + s).collect();
        v.shuffle(rng);
        v
    };
    let v2 = GradedSpace::new(order_mix.iter().map(|&i| basis[i].clone()).collect());
    let mut a = QMatrix::zeros(t + s, p);
    let mut b = QMatrix::zeros(q, t + s);
    for (pos, &i) in order_mix.iter().enumerate() {
        if i < t {
            for c in 0..p {
                a[(pos, c)] = small_int(rng);
            }
            for r in 0..q {
                b[(r, pos)] = small_int(rng);
            }
        }
    }
    Triple {
        v1: GradedSpace::new(vec![triv.clone(); p]),
        v2,
        v3: GradedSpace::new(vec![triv; q]),
        a,
        b,
    }
}

fn inverse(m: &QMatrix) -> QMatrix {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = (0..n).map(|c| m[(r, c)].clone()).collect();
            row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, p);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    let mut out = QMatrix::zeros(n, n);
    for (r, row) in a.iter().enumerate() {
        for c in 0..n {
            out[(r, c)] = row[n + c].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqsheaf::{sandwich_check, SandwichError, SandwichVerdict};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_validate_and_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut with_diffs = 0;
        for _ in 0..200 {
            let act = random_action(&mut rng);
            assert!(act.group().order() <= 12 && act.dim() <= 3);
            let c = random_complex(&act, &mut rng);
            assert_eq!(c.validate(), Ok(()));
            assert!(c.terms().len() <= 4);
            assert!(c.terms().values().all(|v| v.len() <= 4));
            with_diffs += usize::from(c.has_differentials());
        }
        assert!(with_diffs > 50);
    }

    #[test]
    fn random_words_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let act = random_action(&mut rng);
            let (w, target) = random_word(&act, 5, &mut rng);
            assert!(w.generators().len() <= 5);
            assert_eq!(w.target().unwrap_or(&act), &target);
        }
    }

    #[test]
    fn inverse_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            let m = random_invertible(n, &mut rng);
            assert_eq!(m.mul(&inverse(&m)), QMatrix::identity(n));
        }
    }

    #[test]
    fn triples_behave() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let t = random_exact_trivial_triple(&mut rng);
            assert_eq!(sandwich_check(&t.v1, &t.v2, &t.v3, &t.a, &t.b), Ok(SandwichVerdict::Pass));
            let t = random_nonexact_triple(&mut rng);
            assert!(matches!(
                sandwich_check(&t.v1, &t.v2, &t.v3, &t.a, &t.b),
                Err(SandwichError::NotExact { .. })
            ));
        }
    }
}
