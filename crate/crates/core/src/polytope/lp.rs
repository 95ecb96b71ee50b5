//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x >= 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // each row: coefficients then rhs
    basis: Vec<usize>,
    width: usize, // number of columns excluding rhs
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                r -= cb * &row[j];
            }
        }
        r
    }

    /// Runs simplex iterations over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(c) = entering else { return true };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.width] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub fn minimize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(ai.len(), n);
        let flip = bi.is_negative();
        let mut row: Vec<Rational> = ai.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };

    let mut phase1 = vec![Rational::zero(); width];
    for x in phase1.iter_mut().skip(n) {
        *x = Rational::one();
    }
    t.optimize(&phase1, width);
    let infeasibility: Rational = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(row, _)| row[width].clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificial variables out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| Rational::zero()));
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[width].clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + s1 = 1, y + s2 = 1/2
        let c = vec![int(-1), int(-1), int(0), int(0)];
        let a = vec![
            vec![int(1), int(0), int(1), int(0)],
            vec![int(0), int(1), int(0), int(1)],
        ];
        let b = vec![int(1), rat(1, 2)];
        match minimize(&c, &a, &b) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(-3, 2));
                assert_eq!(&x[..2], &[int(1), rat(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(minimize(&[int(0), int(0)], &a, &[int(-1)]), LpOutcome::Infeasible);
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(minimize(&[int(0), int(-1)], &a, &[int(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        match minimize(&[int(1), int(0)], &a, &[int(1), int(2)]) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, int(0));
                assert_eq!(x, vec![int(0), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
