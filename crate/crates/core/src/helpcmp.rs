//! HeLP restrictions for groups of type `G_d(p,q)`:
//! `N = F_{p²} × F_{q²}` acted on by `a = (α^d, 1)`, `b = (1, β^d)` and
//! `c = (α, β)`.
//!
//! Roots of unity `ζ_p^r ζ_q^s` are carried as the index pair `(r, s)`;
//! only multiplicities are ever computed.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::esolve::{EnumOptions, LinearSystem};
use crate::lp::{Cmp, Lp, LpResult};
use crate::quadfield::QuadField;

#[derive(Clone, Debug, Serialize)]
pub struct GdGroup {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub fp: QuadField,
    pub fq: QuadField,
}

impl GdGroup {
    /// With the default fields of [`QuadField::new`].
    pub fn new(p: u64, q: u64, d: u64) -> Result<Self> {
        GdGroup::with_fields(d, QuadField::new(p)?, QuadField::new(q)?)
    }

    pub fn with_fields(d: u64, fp: QuadField, fq: QuadField) -> Result<Self> {
        let (p, q) = (fp.p, fq.p);
        if p == q || !is_prime(p) || !is_prime(q) {
            return Err(Error::InvalidGroup(format!("need two different primes, got {p} and {q}")));
        }
        if d == 0 || gcd(p * p - 1, q * q - 1) % d != 0 {
            return Err(Error::InvalidGroup(format!(
                "d = {d} does not divide gcd({}, {})",
                p * p - 1,
                q * q - 1
            )));
        }
        if !fp.is_primitive(fp.alpha()) || !fq.is_primitive(fq.alpha()) {
            return Err(Error::InvalidGroup("the field generators must be primitive".into()));
        }
        Ok(GdGroup { p, q, d, fp, fq })
    }

    /// `|G : N| = (p²−1)(q²−1)/d`.
    pub fn index(&self) -> u64 {
        (self.p * self.p - 1) * (self.q * self.q - 1) / self.d
    }
}

/// `counts[r][k]` = number of `x < p²−1` with `x ≡ k mod d` and the
/// `α`-coefficient of `α^x` equal to `r`.
fn residue_counts(f: &QuadField, d: u64) -> Vec<Vec<u64>> {
    let p = f.p;
    let mut counts = vec![vec![0u64; d as usize]; p as usize];
    for (x, e) in f.powers().into_iter().enumerate() {
        counts[e.1 as usize][x % d as usize] += 1;
    }
    counts
}

/// `μ(χ₀, m_i, ζ_p^r ζ_q^s)`: pairs `(x, y)` with `α^x − rα ∈ F_p`,
/// `β^y − sβ ∈ F_q` and `x ≡ y + i mod d`.
pub fn mu(g: &GdGroup, i: u64, r: u64, s: u64) -> Result<u64> {
    if i >= g.d || r >= g.p || s >= g.q {
        return Err(Error::InvalidGroup(format!("index out of range: i={i}, r={r}, s={s}")));
    }
    let cp = residue_counts(&g.fp, g.d);
    let cq = residue_counts(&g.fq, g.d);
    Ok(mu_from_counts(&cp[r as usize], &cq[s as usize], i, g.d))
}

fn mu_from_counts(cp: &[u64], cq: &[u64], i: u64, d: u64) -> u64 {
    (0..d)
        .map(|j| cp[((j + i) % d) as usize] * cq[j as usize])
        .sum()
}

/// Direct count over all pairs; the oracle for [`mu`].
pub fn mu_brute(g: &GdGroup, i: u64, r: u64, s: u64) -> u64 {
    let px = g.fp.powers();
    let qy = g.fq.powers();
    let mut n = 0;
    for (x, ex) in px.iter().enumerate() {
        if ex.1 != r {
            continue;
        }
        for (y, ey) in qy.iter().enumerate() {
            if ey.1 == s && (x as u64 % g.d + 2 * g.d - i - y as u64 % g.d) % g.d == 0 {
                n += 1;
            }
        }
    }
    n
}

/// `d` coprime to `gcd(p+1, q+1)`.
pub fn transitivity_check(p: u64, q: u64, d: u64) -> bool {
    gcd(d, gcd(p + 1, q + 1)) == 1
}

/// Number of `H`-orbits on the cyclic subgroups of order `pq` in `N`,
/// computed by acting on pairs of `F_p`-lines and `F_q`-lines.
pub fn pq_subgroup_orbits(g: &GdGroup) -> usize {
    let norm = |f: &QuadField, v: (u64, u64)| -> (u64, u64) {
        // scale so the last non-zero coordinate is 1
        let p = f.p;
        let lead = if v.1 != 0 { v.1 } else { v.0 };
        let inv = crate::arith::mod_inv(lead, p).expect("non-zero");
        (v.0 * inv % p, v.1 * inv % p)
    };
    let (fp, fq) = (&g.fp, &g.fq);
    let ad = fp.pow(fp.alpha(), g.d);
    let bd = fq.pow(fq.alpha(), g.d);
    let one_p = fp.one();
    let one_q = fq.one();
    let gens = [(ad, one_q), (one_p, bd), (fp.alpha(), fq.alpha())];
    let mut all: BTreeSet<((u64, u64), (u64, u64))> = BTreeSet::new();
    for x in fp.powers() {
        for y in fq.powers() {
            all.insert((norm(fp, x), norm(fq, y)));
        }
    }
    let mut orbits = 0;
    let mut left = all;
    while let Some(&start) = left.iter().next() {
        orbits += 1;
        let mut stack = vec![start];
        left.remove(&start);
        while let Some((x, y)) = stack.pop() {
            for (gp, gq) in gens {
                let z = (norm(fp, fp.mul(x, gp)), norm(fq, fq.mul(y, gq)));
                if left.remove(&z) {
                    stack.push(z);
                }
            }
        }
    }
    orbits
}

#[derive(Clone, Debug, Serialize)]
pub struct MuRow {
    pub r: u64,
    pub s: u64,
    pub mu: Vec<u64>,
}

/// `x_0 + … + x_{d−1} = 1` and `Σ_i μ_i x_i ≥ 0` for every row.
#[derive(Clone, Debug, Serialize)]
pub struct HelpSystem {
    pub p: u64,
    pub q: u64,
    pub d: u64,
    pub rows: Vec<MuRow>,
}

impl HelpSystem {
    pub fn satisfies(&self, x: &[i64]) -> bool {
        x.len() == self.d as usize
            && x.iter().sum::<i64>() == 1
            && self
                .rows
                .iter()
                .all(|row| row.mu.iter().zip(x).map(|(&m, &v)| m as i64 * v).sum::<i64>() >= 0)
    }

    /// The distinct `μ`-vectors with their multiplicities.
    pub fn distinct_rows(&self) -> BTreeMap<Vec<u64>, usize> {
        let mut m = BTreeMap::new();
        for row in &self.rows {
            *m.entry(row.mu.clone()).or_insert(0) += 1;
        }
        m
    }

    /// `Σ_{(r,s)} μ_i` for each `i`.
    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.d as usize)
            .map(|i| self.rows.iter().map(|r| r.mu[i]).sum())
            .collect()
    }
}

/// The full `μ`-table, `(r, s)` in lexicographic order. No hypothesis is
/// checked here.
pub fn mu_table(g: &GdGroup) -> HelpSystem {
    let cp = residue_counts(&g.fp, g.d);
    let cq = residue_counts(&g.fq, g.d);
    let rows = (0..g.p)
        .flat_map(|r| (0..g.q).map(move |s| (r, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(r, s)| MuRow {
            r,
            s,
            mu: (0..g.d)
                .map(|i| mu_from_counts(&cp[r as usize], &cq[s as usize], i, g.d))
                .collect(),
        })
        .collect();
    HelpSystem {
        p: g.p,
        q: g.q,
        d: g.d,
        rows,
    }
}

/// The HeLP system; refused when `d` is not coprime to `gcd(p+1, q+1)`.
pub fn help_system(g: &GdGroup) -> Result<HelpSystem> {
    if !transitivity_check(g.p, g.q, g.d) {
        return Err(Error::Hypothesis(format!(
            "d = {} is not coprime to gcd({}, {})",
            g.d,
            g.p + 1,
            g.q + 1
        )));
    }
    Ok(mu_table(g))
}

/// All integer solutions of the system, sorted.
///
/// Variable ranges come from the exact LP with each `x_i` split as
/// `x_i⁺ − x_i⁻`; an unbounded range is reported as an error.
pub fn help_solutions(sys: &HelpSystem) -> Result<Vec<Vec<i64>>> {
    let d = sys.d as usize;
    let rows: Vec<Vec<i64>> = sys
        .distinct_rows()
        .into_keys()
        .map(|m| m.into_iter().map(|v| v as i64).collect())
        .collect();
    let split = |c: &[i64]| -> Vec<i64> { c.iter().copied().chain(c.iter().map(|v| -v)).collect() };
    let mut lp = Lp::new(2 * d);
    lp.push(split(&vec![1; d]), Cmp::Eq, 1);
    for r in &rows {
        lp.push(split(r), Cmp::Ge, 0);
    }
    let mut lower = Vec::with_capacity(d);
    let mut upper = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![0i64; d];
        e[i] = 1;
        let (lo, hi) = lp.range(&split(&e));
        match (lo, hi) {
            (LpResult::Optimal(a), LpResult::Optimal(b)) => {
                lower.push(a.ceil().to_integer() as i64);
                upper.push(b.floor().to_integer() as i64);
            }
            (LpResult::Infeasible, _) | (_, LpResult::Infeasible) => return Ok(Vec::new()),
            (LpResult::Overflow, _) | (_, LpResult::Overflow) => {
                return Err(Error::Unsupported("exact LP left the i128 range".into()));
            }
            _ => return Err(Error::Unbounded(format!("x_{i} has no finite range"))),
        }
    }
    let ls = LinearSystem {
        sum: 1,
        rows,
        lower,
        upper: Some(upper),
    };
    Ok(ls.enumerate(EnumOptions::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitivity_arithmetic() {
        assert!(transitivity_check(5, 7, 3));
        assert!(transitivity_check(7, 19, 3));
        assert!(!transitivity_check(3, 7, 4));
    }

    #[test]
    fn d_one_ignores_i() {
        let g = GdGroup::new(5, 7, 1).unwrap();
        let t = mu_table(&g);
        assert!(t.rows.iter().all(|r| r.mu.len() == 1));
        assert_eq!(t.column_sums(), vec![24 * 48]);
    }

    #[test]
    fn counting_matches_direct_scan() {
        let g = GdGroup::new(5, 7, 3).unwrap();
        for (i, r, s) in [(0, 0, 0), (1, 2, 3), (2, 4, 6), (0, 1, 5)] {
            assert_eq!(mu(&g, i, r, s).unwrap(), mu_brute(&g, i, r, s));
        }
    }
}
