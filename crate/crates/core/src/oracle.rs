//! Reference computation of isotypic fiber cohomology over a cyclotomic field.
//!
//! Works with the undecomposed fiber complex: the stabilizer is found by
//! enumerating the group, acts on each term by powers of `zeta_m`, and the
//! `phi`-isotypic part is cut out by the averaging projector
//! `e_phi = (1/|S|) sum_g zeta^(-phi(g)) rho(g)`. Ranks are taken over
//! `Q(zeta_m) = Q[x]/Phi_m`. Nothing here goes through the block
//! decomposition, so agreement with it is a meaningful check.

use crate::action::RationalPoint;
use crate::eqsheaf::{block_cohomology, fiber_restrict, CohomologyTable, EqSheafError, EquivariantComplex};
use crate::group::{AbelianGroup, SubgroupCharacter};
use crate::linalg::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

type Poly = Vec<Rational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// The `m`-th cyclotomic polynomial, as integer coefficients from the constant term up.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut p: Poly = vec![Rational::zero(); m as usize + 1];
    p[0] = -Rational::one();
    p[m as usize] = Rational::one();
    for d in (1..m).filter(|&d| m.is_multiple_of(d)) {
        let phi_d: Poly = cyclotomic_polynomial(d).into_iter().map(Rational::from_integer).collect();
        let (q, r) = poly_divrem(&p, &phi_d);
        debug_assert!(r.is_empty());
        p = q;
    }
    p.into_iter().map(|c| c.to_integer()).collect()
}

/// `Q(zeta_m)` as `Q[x]/Phi_m`, with `x` standing for a primitive `m`-th root of unity.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    m: u64,
    modulus: Poly,
}

/// Field element as a reduced polynomial (trimmed, degree below `phi(m)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElem(Poly);

impl CycElem {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl CyclotomicField {
    pub fn new(m: u64) -> Self {
        let modulus = cyclotomic_polynomial(m).into_iter().map(Rational::from_integer).collect();
        CyclotomicField { m, modulus }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, p: Poly) -> CycElem {
        CycElem(poly_divrem(&p, &self.modulus).1)
    }

    pub fn zero(&self) -> CycElem {
        CycElem(Vec::new())
    }

    pub fn rational(&self, q: Rational) -> CycElem {
        self.reduce(vec![q])
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycElem {
        let e = k.rem_euclid(self.m as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        self.reduce(p)
    }

    pub fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        let neg: Poly = b.0.iter().map(|c| -c).collect();
        CycElem(poly_sub(&a.0, &neg))
    }

    pub fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem(poly_sub(&a.0, &b.0))
    }

    pub fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.reduce(poly_mul(&a.0, &b.0))
    }

    /// Inverse by the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self, a: &CycElem) -> Option<CycElem> {
        if a.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus.clone(), a.0.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Phi_m is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        Some(self.reduce(s0.into_iter().map(|x| x / &c).collect()))
    }

    /// Rank of a matrix with entries in the field, by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<CycElem>]) -> usize {
        let mut a: Vec<Vec<CycElem>> = rows.to_vec();
        let ncols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for col in 0..ncols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(r, p);
            let inv = self.inv(&a[r][col]).expect("nonzero pivot");
            for i in r + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = self.mul(&a[i][col], &inv);
                for k in col..ncols {
                    let t = self.mul(&f, &a[r][k]);
                    a[i][k] = self.sub(&a[i][k], &t);
                }
            }
            r += 1;
            if r == a.len() {
                break;
            }
        }
        r
    }

    fn matmul(&self, a: &[Vec<CycElem>], b: &[Vec<CycElem>], inner: usize, cols: usize) -> Vec<Vec<CycElem>> {
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        let mut acc = self.zero();
                        for k in 0..inner {
                            if !row[k].is_zero() && !b[k][j].is_zero() {
                                acc = self.add(&acc, &self.mul(&row[k], &b[k][j]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// `chi(g)` in `Z/m`, straight from the defining formula.
fn eval(orders: &[u64], m: u64, chi: &[u64], g: &[u64]) -> u64 {
    orders
        .iter()
        .zip(chi.iter().zip(g))
        .map(|(&n, (&c, &x))| (c * x % n) * (m / n))
        .sum::<u64>()
        % m
}

fn all_tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

/// Nonzero isotypic cohomology dimensions of the fiber at `x`, keyed like
/// [`block_cohomology`] by `(degree, character values on the sorted stabilizer)`.
pub fn oracle_cohomology(c: &EquivariantComplex, x: &RationalPoint) -> CohomologyTable {
    let act = c.action();
    let group: &AbelianGroup = act.group();
    let orders = group.orders();
    let m = group.exponent();
    let chars: Vec<&[u64]> = act.coord_chars().iter().map(|c| c.coords()).collect();
    let support: Vec<usize> = (0..x.coords().len()).filter(|&i| !x.coords()[i].is_zero()).collect();
    let last = *support.last().expect("nonzero point");

    let mut stab: Vec<Vec<u64>> = all_tuples(orders)
        .into_iter()
        .filter(|g| {
            let v = eval(orders, m, chars[last], g);
            support.iter().all(|&i| eval(orders, m, chars[i], g) == v)
        })
        .collect();
    stab.sort();

    let restrictions: BTreeSet<Vec<u64>> = all_tuples(orders)
        .into_iter()
        .map(|chi| stab.iter().map(|g| eval(orders, m, &chi, g)).collect())
        .collect();

    let field = CyclotomicField::new(m);
    let size = Rational::from_integer(BigInt::from(stab.len()));

    // exponent of zeta by which g acts on each summand's fiber, trivialized by x_last^d
    let exponents = |j: i64| -> Vec<Vec<i64>> {
        c.summands(j)
            .iter()
            .map(|s| {
                stab.iter()
                    .map(|g| {
                        eval(orders, m, s.twist.coords(), g) as i64
                            - s.degree * eval(orders, m, chars[last], g) as i64
                    })
                    .collect()
            })
            .collect()
    };
    let xl = &x.coords()[last];
    let fiber_map = |j: i64| -> Vec<Vec<CycElem>> {
        let d = c.differential(j);
        let (src, tgt) = (c.summands(j), c.summands(j + 1));
        (0..tgt.len())
            .map(|t| {
                (0..src.len())
                    .map(|s| {
                        let e = src[s].degree - tgt[t].degree;
                        let mut v = d.get(t, s).eval(x.coords());
                        let p = num_traits::pow(xl.clone(), e.unsigned_abs() as usize);
                        if e >= 0 {
                            v *= p;
                        } else {
                            v /= p;
                        }
                        field.rational(v)
                    })
                    .collect()
            })
            .collect()
    };
    let degrees: Vec<i64> = c.degrees().collect();
    let reps: BTreeMap<i64, Vec<Vec<i64>>> = degrees.iter().map(|&j| (j, exponents(j))).collect();
    let maps: BTreeMap<i64, Vec<Vec<CycElem>>> = degrees.iter().map(|&j| (j, fiber_map(j))).collect();

    let projector = |j: i64, phi: &[u64]| -> Vec<Vec<CycElem>> {
        let exps = &reps[&j];
        let n = exps.len();
        let mut e = vec![vec![field.zero(); n]; n];
        for (k, g_exps) in exps.iter().enumerate() {
            // rho(g) is diagonal in the summand basis, so only e[k][k] collects terms
            let mut acc = field.zero();
            for (gi, &a) in g_exps.iter().enumerate() {
                acc = field.add(&acc, &field.zeta_pow(a - phi[gi] as i64));
            }
            e[k][k] = field.mul(&acc, &field.rational(Rational::one() / &size));
        }
        e
    };

    let mut out = CohomologyTable::new();
    for phi in &restrictions {
        let mut rank_e = BTreeMap::new();
        let mut rank_de = BTreeMap::new();
        for &j in &degrees {
            let n = c.summands(j).len();
            let e = projector(j, phi);
            rank_e.insert(j, field.rank(&e));
            let next = c.summands(j + 1).len();
            let r = if next == 0 { 0 } else { field.rank(&field.matmul(&maps[&j], &e, n, n)) };
            rank_de.insert(j, r);
        }
        for &j in &degrees {
            let h = rank_e[&j] - rank_de[&j] - rank_de.get(&(j - 1)).copied().unwrap_or(0);
            if h > 0 {
                out.insert((j, SubgroupCharacter::from_values(phi.clone())), h);
            }
        }
    }
    out
}

/// Block cohomology with zero entries dropped, for comparison with the oracle.
pub fn nonzero_block_cohomology(c: &EquivariantComplex, x: &RationalPoint) -> Result<CohomologyTable, EqSheafError> {
    let mut t = block_cohomology(&fiber_restrict(c, x)?);
    t.retain(|_, d| *d > 0);
    Ok(t)
}
