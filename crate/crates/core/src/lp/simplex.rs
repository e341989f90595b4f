//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `max cᵀx` subject to `Ax = b`, `x ≥ 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` rows of `n + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Reduced cost `c_j − c_Bᵀ A_j` of column `j`.
    fn reduced(&self, c: &[BigRational], j: usize) -> BigRational {
        let mut rc = c[j].clone();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if !c[bv].is_zero() && !row[j].is_zero() {
                rc -= &c[bv] * &row[j];
            }
        }
        rc
    }

    /// Runs Bland's rule on columns `allowed`. Returns false when unbounded.
    fn optimize(&mut self, c: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| !self.basis.contains(&j) && self.reduced(c, j).is_positive());
            let Some(col) = entering else { return true };
            let mut best: Option<(BigRational, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.n] / &row[col];
                let better = match &best {
                    None => true,
                    Some((r, bi)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((ratio, i));
                }
            }
            let Some((_, r)) = best else { return false };
            self.pivot(r, col);
        }
    }

    fn solution(&self, n: usize) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); n];
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if bv < n {
                x[bv] = row[self.n].clone();
            }
        }
        x
    }
}

pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Outcome {
    let m = a.len();
    let n = c.len();
    let total = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(ai.len(), n, "row {i} has the wrong width");
        let flip = bi.is_negative();
        let mut row: Vec<BigRational> = ai.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..total).collect(), n: total };

    let mut phase1 = vec![BigRational::zero(); total];
    for v in &mut phase1[n..] {
        *v = -BigRational::one();
    }
    t.optimize(&phase1, n);
    let infeasibility: BigRational = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(row, _)| row[total].clone())
        .sum();
    if infeasibility.is_positive() {
        return Outcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut full_c = c.to_vec();
    full_c.resize(total, BigRational::zero());
    if !t.optimize(&full_c, n) {
        return Outcome::Unbounded;
    }
    let x = t.solution(n);
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Outcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_lp() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let out = maximize(&a, &[q(4), q(6)], &[q(1), q(1), q(0), q(0)]);
        let Outcome::Optimal { x, value } = out else { panic!("{out:?}") };
        assert_eq!(value, BigRational::new(14.into(), 5.into()));
        assert_eq!(x[0], BigRational::new(8.into(), 5.into()));
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x = -1 with x ≥ 0
        assert_eq!(maximize(&[vec![q(1)]], &[q(-1)], &[q(0)]), Outcome::Infeasible);
        // max x, x − y = 0
        assert_eq!(maximize(&[vec![q(1), q(-1)]], &[q(0)], &[q(1), q(0)]), Outcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let out = maximize(&a, &[q(1), q(2)], &[q(1), q(0)]);
        assert_eq!(out, Outcome::Optimal { x: vec![q(1), q(0)], value: q(1) });
    }
}
