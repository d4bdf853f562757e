//! A small exact simplex over checked `Ratio<i128>`.
//!
//! Used only to tighten variable ranges during enumeration, so an arithmetic
//! overflow is reported rather than propagated: callers fall back to the
//! weaker combinatorial bounds.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

pub type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal(Q),
    Infeasible,
    Unbounded,
    /// Intermediate values left the `i128` range.
    Overflow,
}

/// `{ z ≥ 0 : a_i · z (cmp_i) b_i }`.
#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub nvars: usize,
    pub rows: Vec<(Vec<i64>, Cmp, i64)>,
}

struct Overflow;

fn add(a: &Q, b: &Q) -> Result<Q, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}
fn sub(a: &Q, b: &Q) -> Result<Q, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}
fn mul(a: &Q, b: &Q) -> Result<Q, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}
fn div(a: &Q, b: &Q) -> Result<Q, Overflow> {
    a.checked_div(b).ok_or(Overflow)
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    /// Reduced-cost row; last entry is minus the objective value.
    z: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Overflow> {
        let piv = self.rows[r][c];
        if piv != Q::from_integer(1) {
            for v in self.rows[r].iter_mut() {
                *v = div(v, &piv)?;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = sub(v, &mul(&f, p)?)?;
                }
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c];
            for (v, p) in self.z.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = sub(v, &mul(&f, p)?)?;
                }
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes with Bland's rule; `allowed` masks columns that may enter.
    fn run(&mut self, allowed: &[bool]) -> Result<bool, Overflow> {
        let rhs = self.ncols;
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed[j] && self.z[j].is_positive()) else {
                return Ok(true);
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = div(&row[rhs], &row[c])?;
                    let better = match &best {
                        None => true,
                        Some((b, _, bv)) => ratio < *b || (ratio == *b && self.basis[i] < *bv),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return Ok(false);
            };
            self.pivot(r, c)?;
        }
    }
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<i64>, cmp: Cmp, rhs: i64) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Optimizes `objective · z`.
    pub fn optimize(&self, objective: &[i64], maximize: bool) -> LpResult {
        match self.solve(objective, maximize) {
            Ok(r) => r,
            Err(Overflow) => LpResult::Overflow,
        }
    }

    /// Minimum and maximum of `objective · z`, sharing the phase-one work.
    pub fn range(&self, objective: &[i64]) -> (LpResult, LpResult) {
        (
            self.optimize(objective, false),
            self.optimize(objective, true),
        )
    }

    fn solve(&self, objective: &[i64], maximize: bool) -> Result<LpResult, Overflow> {
        let n = self.nvars;
        let m = self.rows.len();
        let nslack = self.rows.iter().filter(|(_, c, _)| *c != Cmp::Eq).count();
        let art0 = n + nslack;
        let ncols = art0 + m;
        let q = |v: i64| Q::from_integer(v as i128);

        let mut rows = Vec::with_capacity(m);
        let mut slack = n;
        for (i, (coeffs, cmp, b)) in self.rows.iter().enumerate() {
            let mut row = vec![Q::zero(); ncols + 1];
            for (j, &a) in coeffs.iter().enumerate() {
                row[j] = q(a);
            }
            match cmp {
                Cmp::Ge => {
                    row[slack] = q(-1);
                    slack += 1;
                }
                Cmp::Le => {
                    row[slack] = q(1);
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            row[ncols] = q(*b);
            if *b < 0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
            row[art0 + i] = q(1);
            rows.push(row);
        }

        // phase one: maximize −Σ artificials
        let mut z = vec![Q::zero(); ncols + 1];
        for row in &rows {
            for j in 0..art0 {
                z[j] = add(&z[j], &row[j])?;
            }
            z[ncols] = add(&z[ncols], &row[ncols])?;
        }
        let mut t = Tableau {
            rows,
            z,
            basis: (art0..ncols).collect(),
            ncols,
        };
        let mut allowed = vec![true; ncols];
        for a in allowed.iter_mut().skip(art0) {
            *a = false;
        }
        t.run(&allowed)?;
        if !t.z[ncols].is_zero() {
            return Ok(LpResult::Infeasible);
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if t.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, c)?;
                }
            }
        }

        // phase two
        let sign: i64 = if maximize { 1 } else { -1 };
        let cost = |j: usize| -> Q {
            if j < n {
                q(sign * objective[j])
            } else {
                Q::zero()
            }
        };
        let mut z = vec![Q::zero(); ncols + 1];
        for (j, zj) in z.iter_mut().enumerate().take(ncols) {
            *zj = cost(j);
        }
        for (r, row) in t.rows.iter().enumerate() {
            let cb = cost(t.basis[r]);
            if cb.is_zero() {
                continue;
            }
            for j in 0..=ncols {
                if !row[j].is_zero() {
                    z[j] = sub(&z[j], &mul(&cb, &row[j])?)?;
                }
            }
        }
        t.z = z;
        if !t.run(&allowed)? {
            return Ok(LpResult::Unbounded);
        }
        let value = -t.z[ncols];
        Ok(LpResult::Optimal(if maximize { value } else { -value }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounded_lp() {
        // x + y = 4, x - y >= 1, x <= 3
        let mut lp = Lp::new(2);
        lp.push(vec![1, 1], Cmp::Eq, 4);
        lp.push(vec![1, -1], Cmp::Ge, 1);
        lp.push(vec![1, 0], Cmp::Le, 3);
        assert_eq!(lp.optimize(&[1, 0], true), LpResult::Optimal(Q::from_integer(3)));
        assert_eq!(
            lp.optimize(&[1, 0], false),
            LpResult::Optimal(Q::new(5, 2))
        );
        assert_eq!(lp.optimize(&[0, 1], true), LpResult::Optimal(Q::new(3, 2)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1);
        lp.push(vec![1], Cmp::Ge, 3);
        lp.push(vec![1], Cmp::Le, 2);
        assert_eq!(lp.optimize(&[1], true), LpResult::Infeasible);
        let mut lp = Lp::new(2);
        lp.push(vec![1, -1], Cmp::Eq, 0);
        assert_eq!(lp.optimize(&[1, 0], true), LpResult::Unbounded);
        assert_eq!(lp.optimize(&[1, 0], false), LpResult::Optimal(Q::zero()));
    }

    #[test]
    fn negative_rhs_rows() {
        // -x - y >= -5 with x >= 2 gives max y = 3
        let mut lp = Lp::new(2);
        lp.push(vec![-1, -1], Cmp::Ge, -5);
        lp.push(vec![1, 0], Cmp::Ge, 2);
        assert_eq!(lp.optimize(&[0, 1], true), LpResult::Optimal(Q::from_integer(3)));
    }
}
