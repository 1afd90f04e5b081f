//! Exact triples `V1 -a-> V2 -b-> V3` of representations of a stabilizer.
//!
//! If the stabilizer acts trivially on the outer terms of an exact sequence
//! of equivariant maps, it acts trivially on the middle term. This module
//! checks that statement on concrete data; it is used by the property suite.

use crate::group::SubgroupCharacter;
use crate::linalg::{rank, QMatrix};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// A vector space with a basis of character eigenvectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    pub basis: Vec<SubgroupCharacter>,
}

impl GradedSpace {
    pub fn new(basis: Vec<SubgroupCharacter>) -> Self {
        GradedSpace { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of each isotypic component.
    pub fn components(&self) -> BTreeMap<&SubgroupCharacter, usize> {
        let mut out = BTreeMap::new();
        for phi in &self.basis {
            *out.entry(phi).or_insert(0) += 1;
        }
        out
    }

    fn first_nontrivial(&self) -> Option<(SubgroupCharacter, usize)> {
        self.components()
            .into_iter()
            .find(|(phi, _)| !phi.is_trivial())
            .map(|(phi, n)| (phi.clone(), n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichVerdict {
    /// Outer terms trivial, middle term trivial.
    Pass,
    /// An outer term carries a nontrivial character, so nothing is claimed.
    OutsidePattern { space: u8, character: SubgroupCharacter },
    /// Outer terms trivial yet the middle has a nontrivial component.
    Violated { character: SubgroupCharacter, dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SandwichError {
    #[error("map {map} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { map: char, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("map {map} is not equivariant: entry ({row}, {col}) joins distinct characters")]
    NotEquivariant { map: char, row: usize, col: usize },
    #[error(
        "hypothesis failure: image(a) != kernel(b) (b*a zero: {composite_zero}, rank a = {rank_a}, rank b = {rank_b}, dim V2 = {middle_dim})"
    )]
    NotExact { composite_zero: bool, rank_a: usize, rank_b: usize, middle_dim: usize },
}

pub fn sandwich_check(
    v1: &GradedSpace,
    v2: &GradedSpace,
    v3: &GradedSpace,
    a: &QMatrix,
    b: &QMatrix,
) -> Result<SandwichVerdict, SandwichError> {
    check_shape('a', a, v2.dim(), v1.dim())?;
    check_shape('b', b, v3.dim(), v2.dim())?;
    check_equivariant('a', a, v1, v2)?;
    check_equivariant('b', b, v2, v3)?;

    let composite_zero = b.mul(a).is_zero();
    let (rank_a, rank_b) = (rank(a), rank(b));
    if !composite_zero || rank_a + rank_b != v2.dim() {
        return Err(SandwichError::NotExact { composite_zero, rank_a, rank_b, middle_dim: v2.dim() });
    }

    if let Some((character, _)) = v1.first_nontrivial() {
        return Ok(SandwichVerdict::OutsidePattern { space: 1, character });
    }
    if let Some((character, _)) = v3.first_nontrivial() {
        return Ok(SandwichVerdict::OutsidePattern { space: 3, character });
    }
    match v2.first_nontrivial() {
        Some((character, dimension)) => Ok(SandwichVerdict::Violated { character, dimension }),
        None => Ok(SandwichVerdict::Pass),
    }
}

fn check_shape(map: char, m: &QMatrix, rows: usize, cols: usize) -> Result<(), SandwichError> {
    if m.rows() == rows && m.cols() == cols {
        Ok(())
    } else {
        Err(SandwichError::Shape { map, rows: m.rows(), cols: m.cols(), expected_rows: rows, expected_cols: cols })
    }
}

fn check_equivariant(map: char, m: &QMatrix, src: &GradedSpace, tgt: &GradedSpace) -> Result<(), SandwichError> {
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            if !m[(row, col)].is_zero() && tgt.basis[row] != src.basis[col] {
                return Err(SandwichError::NotEquivariant { map, row, col });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triv() -> SubgroupCharacter {
        SubgroupCharacter::from_values(vec![0, 0])
    }

    fn sgn() -> SubgroupCharacter {
        SubgroupCharacter::from_values(vec![0, 1])
    }

    #[test]
    fn zero_outer_terms() {
        let empty = GradedSpace::default();
        let r = sandwich_check(&empty, &empty, &empty, &QMatrix::zeros(0, 0), &QMatrix::zeros(0, 0));
        assert_eq!(r, Ok(SandwichVerdict::Pass));
    }

    #[test]
    fn short_exact_trivial_sequence_passes() {
        // 0 -> k -> k^2 -> k -> 0
        let v1 = GradedSpace::new(vec![triv()]);
        let v2 = GradedSpace::new(vec![triv(), triv()]);
        let v3 = GradedSpace::new(vec![triv()]);
        let a = QMatrix::from_i64(&[&[1], &[1]]);
        let b = QMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(sandwich_check(&v1, &v2, &v3, &a, &b), Ok(SandwichVerdict::Pass));
    }

    #[test]
    fn nontrivial_middle_with_zero_maps_is_not_exact() {
        let v1 = GradedSpace::new(vec![triv()]);
        let v2 = GradedSpace::new(vec![triv(), sgn()]);
        let v3 = GradedSpace::new(vec![triv()]);
        let r = sandwich_check(&v1, &v2, &v3, &QMatrix::zeros(2, 1), &QMatrix::zeros(1, 2));
        assert!(matches!(r, Err(SandwichError::NotExact { .. })));
    }

    #[test]
    fn non_equivariant_map_is_rejected() {
        let v1 = GradedSpace::new(vec![triv()]);
        let v2 = GradedSpace::new(vec![sgn()]);
        let v3 = GradedSpace::default();
        let r = sandwich_check(&v1, &v2, &v3, &QMatrix::from_i64(&[&[1]]), &QMatrix::zeros(0, 1));
        assert_eq!(r, Err(SandwichError::NotEquivariant { map: 'a', row: 0, col: 0 }));
    }

    #[test]
    fn nontrivial_outer_term_is_outside_pattern() {
        let v1 = GradedSpace::new(vec![sgn()]);
        let v2 = GradedSpace::new(vec![sgn()]);
        let v3 = GradedSpace::default();
        let r = sandwich_check(&v1, &v2, &v3, &QMatrix::from_i64(&[&[2]]), &QMatrix::zeros(0, 1));
        assert_eq!(r, Ok(SandwichVerdict::OutsidePattern { space: 1, character: sgn() }));
    }

    #[test]
    fn shape_errors() {
        let v = GradedSpace::new(vec![triv()]);
        let r = sandwich_check(&v, &v, &v, &QMatrix::zeros(2, 1), &QMatrix::zeros(1, 1));
        assert!(matches!(r, Err(SandwichError::Shape { map: 'a', .. })));
    }
}
