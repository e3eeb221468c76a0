//! Dense exact linear algebra: deterministic reduced row echelon form and
//! kernel bases over a single scalar domain.

use crate::scalar::{Domain, DomainError, Scalar};

/// A dense matrix of exact scalars sharing one domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of [`ExactMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: ExactMatrix,
    pub rank: usize,
    /// Zero-based pivot columns in increasing order.
    pub pivot_cols: Vec<usize>,
    /// Basis of the right kernel, one vector per free column in increasing
    /// column order; the free coordinate of each vector is 1.
    pub kernel_basis: Vec<Vec<Scalar>>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, DomainError> {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        let domain = entries[0].domain();
        for e in &entries {
            if e.domain() != domain {
                return Err(DomainError::Mixed(domain, e.domain()));
            }
        }
        Ok(Self {
            rows: entries.len() / cols,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], domain: Domain) -> Self {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_i64(v, domain)).collect())
            .collect();
        Self::from_rows(converted).expect("uniform domain by construction")
    }

    pub fn identity(n: usize, domain: Domain) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Scalar::from_i64(i64::from(i == j), domain))
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("uniform domain by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Domain {
        self.entries[0].domain()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    fn entry_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Deterministic reduced row echelon form with kernel basis.
    ///
    /// Pivots are chosen left to right, taking the topmost unused row with a
    /// nonzero entry, then scaled to 1 and eliminated from every other row.
    /// The output is the unique RREF of the row space, so it is stable under
    /// row scaling and row permutation of the input.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.entry(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m
                .entry(r, c)
                .inverse()
                .expect("pivot is nonzero by choice");
            for j in c..m.cols {
                *m.entry_mut(r, j) = m.entry(r, j).mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m.entry(i, c).is_zero() {
                    let f = m.entry(i, c).clone();
                    for j in c..m.cols {
                        let v = m.entry(i, j).sub(&f.mul(m.entry(r, j)));
                        *m.entry_mut(i, j) = v;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        let rank = pivot_cols.len();
        let domain = m.domain();
        let free_cols: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut kernel_basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![Scalar::zero(domain); m.cols];
            v[f] = Scalar::one(domain);
            for (row_idx, &p) in pivot_cols.iter().enumerate() {
                v[p] = m.entry(row_idx, f).neg();
            }
            kernel_basis.push(v);
        }
        Rref {
            reduced: m,
            rank,
            pivot_cols,
            kernel_basis,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.entries.swap(lo * self.cols + j, hi * self.cols + j);
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.domain());
                for j in 0..self.cols {
                    acc = acc.add(&self.entry(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let domain = self.domain();
        let mut aug_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = self.row(i).to_vec();
            for j in 0..n {
                row.push(Scalar::from_i64(i64::from(i == j), domain));
            }
            aug_rows.push(row);
        }
        let aug = ExactMatrix::from_rows(aug_rows).expect("uniform domain");
        let red = aug.rref();
        if red.pivot_cols != (0..n).collect::<Vec<_>>() {
            return None;
        }
        let inv_rows = (0..n)
            .map(|i| red.reduced.row(i)[n..].to_vec())
            .collect();
        Some(ExactMatrix::from_rows(inv_rows).expect("uniform domain"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::LINEAR_FORMS;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(v, Domain::Rational)
    }

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let m = ExactMatrix::identity(5, Domain::Rational);
        let r = m.rref();
        assert_eq!(r.rank, 5);
        assert!(r.kernel_basis.is_empty());
        assert_eq!(r.reduced, m);
    }

    #[test]
    fn defining_linear_system_has_rank_five_over_q() {
        let rows: Vec<Vec<i64>> = LINEAR_FORMS.iter().map(|r| r.to_vec()).collect();
        let m = ExactMatrix::from_i64_rows(&rows, Domain::Rational);
        let r = m.rref();
        assert_eq!(r.rank, 5);
        assert_eq!(r.kernel_basis.len(), 5);
    }

    #[test]
    fn rank_over_q_matches_rank_mod_good_primes() {
        let rows: Vec<Vec<i64>> = LINEAR_FORMS.iter().map(|r| r.to_vec()).collect();
        for p in [5u64, 7] {
            let m = ExactMatrix::from_i64_rows(&rows, Domain::Prime(p));
            assert_eq!(m.rref().rank, 5, "rank drop mod {p}");
        }
        // mod 2 the five forms become dependent (their sum vanishes)
        let m2 = ExactMatrix::from_i64_rows(&rows, Domain::Prime(2));
        assert_eq!(m2.rref().rank, 4);
    }

    #[test]
    fn dependent_row_instance_matches_hand_reduction() {
        // [[1,2,3],[2,4,6]]: rank 1, kernel spanned by (-2,1,0) and (-3,0,1)
        let m = ExactMatrix::from_i64_rows(
            &[vec![1, 2, 3], vec![2, 4, 6]],
            Domain::Rational,
        );
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis.len(), 2);
        assert_eq!(r.kernel_basis[0], vec![q(-2), q(1), q(0)]);
        assert_eq!(r.kernel_basis[1], vec![q(-3), q(0), q(1)]);
        assert_eq!(r.reduced.row(0), &[q(1), q(2), q(3)]);
        assert!(r.reduced.row(1).iter().all(Scalar::is_zero));
    }

    #[test]
    fn rref_is_invariant_under_row_scaling() {
        let base = ExactMatrix::from_i64_rows(
            &[vec![2, 4, -2, 0], vec![1, 1, 1, 1], vec![3, 5, 0, 1]],
            Domain::Rational,
        );
        let scaled = ExactMatrix::from_i64_rows(
            &[vec![-14, -28, 14, 0], vec![5, 5, 5, 5], vec![3, 5, 0, 1]],
            Domain::Rational,
        );
        let (a, b) = (base.rref(), scaled.rref());
        assert_eq!(a.reduced, b.reduced);
        assert_eq!(a.kernel_basis, b.kernel_basis);
    }

    #[test]
    fn mixed_domains_rejected() {
        let rows = vec![vec![Scalar::one(Domain::Rational), Scalar::one(Domain::Prime(5))]];
        assert!(ExactMatrix::from_rows(rows).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let m = ExactMatrix::from_i64_rows(
            &[vec![2, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
            Domain::Rational,
        );
        let inv = m.inverse().unwrap();
        let mut prod_rows = Vec::new();
        for i in 0..3 {
            prod_rows.push(inv.mul_vec(m.row(i)));
        }
        // m applied rowwise to inv columns: check via identity action on basis
        let id = ExactMatrix::identity(3, Domain::Rational);
        for i in 0..3 {
            let e: Vec<Scalar> = id.row(i).to_vec();
            let back = inv.mul_vec(&m.mul_vec(&e));
            assert_eq!(back, e);
        }
        let _ = prod_rows;
        let singular =
            ExactMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]], Domain::Rational);
        assert!(singular.inverse().is_none());
    }
}
