use super::ZMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Result of a Smith normal form reduction: `left * m * right == diagonal`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Invariant factors `d1 | d2 | ...`, nonnegative, length `min(rows, cols)`.
    pub diag: Vec<BigInt>,
    pub left: ZMatrix,
    pub right: ZMatrix,
}

impl SmithForm {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> ZMatrix {
        let mut d = ZMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, v) in self.diag.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }

    /// Columns of `right` past the rank: a basis of the integer kernel of `m`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let r = self.rank();
        (r..self.right.cols())
            .map(|j| (0..self.right.rows()).map(|i| self.right[(i, j)].clone()).collect())
            .collect()
    }
}

pub fn smith_normal_form(m: &ZMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = ZMatrix::identity(rows);
    let mut right = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut dirty = false;

            for i in (t + 1)..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_row(i, t, &neg);
                left.add_row(i, t, &neg);
                if !a[(i, t)].is_zero() {
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                }
            }

            for j in (t + 1)..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_col(j, t, &neg);
                right.add_col(j, t, &neg);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                }
            }

            if dirty {
                continue;
            }

            // pivot row and column are clear; enforce divisibility of the rest
            let pivot = a[(t, t)].clone();
            let offender = ((t + 1)..rows)
                .find(|&i| ((t + 1)..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row(t, i, &one);
                    left.add_row(t, i, &one);
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diag = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SmithForm { diag, left, right }
}
