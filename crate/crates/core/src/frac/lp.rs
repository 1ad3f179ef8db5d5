//! Exact two-phase primal simplex over the rationals.
//!
//! Problems have the form `min c·x` subject to `A x = b`, `x >= 0`, with `A`
//! given by sparse columns. Every row gets an artificial column that stays in
//! the tableau for the whole run, so the inverse basis (and with it the duals)
//! can be read off at the end. Bland's rule keeps the method finite.

use crate::Rational;
use num_traits::{One, Signed, Zero};

/// Sparse column: `(row, coefficient)` pairs.
pub type Column = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// Optimal primal `x` and dual `y` with `y·A <= c` and `y·b = value`.
    Optimal { x: Vec<Rational>, y: Vec<Rational>, value: Rational },
    /// `y` with `y·A <= 0` and `y·b > 0`.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs, with `-objective` in `obj`.
    red: Vec<Rational>,
    obj: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for a in self.rows[r].iter_mut().filter(|a| !a.is_zero()) {
                *a /= &p;
            }
            self.rhs[r] /= &p;
        }
        let support: Vec<(usize, Rational)> =
            self.rows[r].iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| (j, a.clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (j, a) in &support {
                self.rows[i][*j] -= &f * a;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.red[col].is_zero() {
            let f = self.red[col].clone();
            for (j, a) in &support {
                self.red[*j] -= &f * a;
            }
            self.obj -= &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule over the columns `< limit`; false when unbounded.
    fn optimise(&mut self, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| self.red[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        let width = cost.len();
        self.red = cost.to_vec();
        self.obj = Rational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !self.rows[i][j].is_zero() {
                    self.red[j] -= cb * &self.rows[i][j];
                }
            }
            self.obj -= cb * &self.rhs[i];
        }
    }

    /// `y_i = c_{a_i} - d_{a_i}` for the artificial column `a_i` of row `i`.
    fn duals(&self, n: usize, art_cost: &Rational) -> Vec<Rational> {
        (0..self.rows.len()).map(|i| art_cost - &self.red[n + i]).collect()
    }
}

/// Minimises `c·x` subject to `A x = b`, `x >= 0`; `columns[j]` is column `j` of `A`.
pub fn solve(columns: &[Column], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = b.len();
    let n = columns.len();
    assert_eq!(c.len(), n);
    let width = n + m;
    let flip: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut rows = vec![vec![Rational::zero(); width]; m];
    for (j, col) in columns.iter().enumerate() {
        for (i, a) in col {
            rows[*i][j] += if flip[*i] { -a.clone() } else { a.clone() };
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[n + i] = Rational::one();
    }
    let rhs: Vec<Rational> = b.iter().map(|v| v.abs()).collect();
    let mut t = Tableau { rows, rhs, red: Vec::new(), obj: Rational::zero(), basis: (n..width).collect() };
    let unflip = |y: Vec<Rational>| -> Vec<Rational> {
        y.into_iter().zip(&flip).map(|(v, &f)| if f { -v } else { v }).collect()
    };

    // Phase 1: minimise the sum of the artificials.
    let mut cost1 = vec![Rational::zero(); n];
    cost1.extend(std::iter::repeat(Rational::one()).take(m));
    t.set_costs(&cost1);
    t.optimise(n);
    if t.obj.is_negative() {
        return LpOutcome::Infeasible { farkas: unflip(t.duals(n, &Rational::one())) };
    }

    // Drive zero-level artificials out of the basis where possible. Rows where
    // this fails are redundant and never change again.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
    }

    // Phase 2 with the artificials barred from entering.
    let mut cost2 = c.to_vec();
    cost2.extend(std::iter::repeat(Rational::zero()).take(m));
    t.set_costs(&cost2);
    if !t.optimise(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs[i].clone();
        }
    }
    let value = -t.obj.clone();
    LpOutcome::Optimal { x, y: unflip(t.duals(n, &Rational::zero())), value }
}

/// A point of `{x >= 0 : A x = b}`, or a Farkas vector when it is empty.
pub fn feasible_point(columns: &[Column], b: &[Rational]) -> Result<Vec<Rational>, Vec<Rational>> {
    match solve(columns, b, &vec![Rational::zero(); columns.len()]) {
        LpOutcome::Optimal { x, .. } => Ok(x),
        LpOutcome::Infeasible { farkas } => Err(farkas),
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    }
}

/// `A^T y` for sparse columns.
pub fn transpose_times(columns: &[Column], y: &[Rational]) -> Vec<Rational> {
    columns.iter().map(|col| col.iter().fold(Rational::zero(), |s, (i, a)| s + a * &y[*i])).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn cols(dense: &[&[i64]]) -> Vec<Column> {
        let m = dense.len();
        let n = dense[0].len();
        (0..n).map(|j| (0..m).filter(|&i| dense[i][j] != 0).map(|i| (i, r(dense[i][j], 1))).collect()).collect()
    }

    #[test]
    fn small_optimum_with_duals() {
        // min -x1 - x2 s.t. x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6.
        let a = cols(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let b = [r(4, 1), r(6, 1)];
        let c = [r(-1, 1), r(-1, 1), r(0, 1), r(0, 1)];
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { x, y, value } => {
                assert_eq!(value, r(-14, 5));
                assert_eq!(x[0], r(8, 5));
                assert_eq!(x[1], r(6, 5));
                assert_eq!(dot(&y, &b), value);
                assert!(transpose_times(&a, &y).iter().zip(&c).all(|(l, c)| l <= c));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_gives_farkas() {
        // x1 + x2 = 1, x1 + x2 = 2.
        let a = cols(&[&[1, 1], &[1, 1]]);
        let b = [r(1, 1), r(2, 1)];
        let y = feasible_point(&a, &b).unwrap_err();
        assert!(transpose_times(&a, &y).iter().all(|v| !v.is_positive()));
        assert!(dot(&y, &b).is_positive());
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x1 = -1, x1 + x2 = 3, 2x1 + 2x2 = 6.
        let a = cols(&[&[-1, 0], &[1, 1], &[2, 2]]);
        let b = [r(-1, 1), r(3, 1), r(6, 1)];
        let x = feasible_point(&a, &b).unwrap();
        assert_eq!(x, vec![r(1, 1), r(2, 1)]);
        // -x1 = 1 has no solution with x1 >= 0.
        let y = feasible_point(&cols(&[&[-1]]), &[r(1, 1)]).unwrap_err();
        assert!(!transpose_times(&cols(&[&[-1]]), &y)[0].is_positive() && y[0].is_positive());
    }

    #[test]
    fn unbounded() {
        let a = cols(&[&[1, -1]]);
        assert_eq!(solve(&a, &[r(1, 1)], &[r(0, 1), r(-1, 1)]), LpOutcome::Unbounded);
    }
}
