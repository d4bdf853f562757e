//! Tables of `E(Aut(A), K, A)` for `A = C_q × C_q` over the abelian
//! candidates, and the assembly of metabelian groups `N ⋊ Γ` on
//! `N = C_pq × C_pq` from two matching table entries.
//!
//! Table tuples are read along [`quotient_walk`]; the reported set is
//! canonical up to rotation and to replacing the walk generator by a power
//! prime to the walk length.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::abgroup::{AbElem, FinAbGroup};
use crate::arith::{gcd, is_prime, units};
use crate::autenum::{
    abelian_candidates, abelian_overgroups, quotient_generator, quotient_walk, tuple_along, vec_elem, Gl2Subgroup,
    Mat2, SubgroupKind,
};
use crate::error::{Error, Result};
use crate::cache::{e_set_cached, ESetCache};
use crate::esolve::{canonical_cyclic, ClassFunction, SolveOptions};
use crate::matact::{AutElem, AutGroup};
use crate::sehgal::{algorithm2, MetabelianGroup, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub k: Gl2Subgroup,
    pub iso: String,
    /// `|M/K|`, the walk length.
    pub quotient: u64,
    /// Canonical set of tuples, sorted.
    pub tuples: Vec<Vec<i64>>,
    #[serde(skip)]
    pub solutions: Vec<ClassFunction>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tables {
    pub qmax: u64,
    /// `K` inside the Singer cycle.
    pub cyclic: Vec<TableRow>,
    /// `K` inside the diagonal torus.
    pub diagonal: Vec<TableRow>,
}

/// Least representative of a tuple set under rotation and unit multipliers.
pub fn canonical_tuple_set(tuples: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(r) = tuples.first().map(Vec::len) else {
        return Vec::new();
    };
    let us = if r <= 1 { vec![1] } else { units(r as u64) };
    us.into_iter()
        .map(|u| {
            let mut set: Vec<Vec<i64>> = tuples
                .iter()
                .map(|t| {
                    let s: Vec<i64> = (0..r).map(|i| t[(u as usize * i) % r]).collect();
                    canonical_cyclic(&s)
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            set.sort();
            set
        })
        .min()
        .unwrap()
}

/// Rows with a non-empty set for one prime.
pub fn table_rows(p: u64, opts: SolveOptions) -> Result<Vec<TableRow>> {
    table_rows_cached(p, opts, None)
}

pub fn table_rows_cached(p: u64, opts: SolveOptions, cache: Option<&ESetCache>) -> Result<Vec<TableRow>> {
    let a = FinAbGroup::elementary_rank2(p)?;
    let s = AutGroup::full(a)?;
    let ks = abelian_candidates(p)?;
    let rows = ks
        .par_iter()
        .map(|k| -> Result<Option<TableRow>> {
            let sols = e_set_cached(cache, &s, k, opts)?;
            if sols.is_empty() {
                return Ok(None);
            }
            let walk = quotient_walk(k)
                .ok_or_else(|| Error::Hypothesis(format!("{}: quotient is not cyclic", k.label)))?;
            let raw = sols
                .iter()
                .map(|sol| {
                    tuple_along(k, sol).ok_or_else(|| {
                        Error::Verification(format!("{}: a solution is nonzero off the walk", k.label))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(TableRow {
                p,
                k: k.clone(),
                iso: k.iso_type(),
                quotient: walk.len() as u64,
                tuples: canonical_tuple_set(&raw),
                solutions: sols,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Both tables for the odd primes `5 ≤ p ≤ qmax`.
pub fn tables(qmax: u64, opts: SolveOptions, cache: Option<&ESetCache>) -> Result<Tables> {
    let mut cyclic = Vec::new();
    let mut diagonal = Vec::new();
    for p in (5..=qmax).filter(|&p| is_prime(p)) {
        for row in table_rows_cached(p, opts, cache)? {
            if row.k.kind == SubgroupKind::SingerCyclic {
                cyclic.push(row);
            } else {
                diagonal.push(row);
            }
        }
    }
    Ok(Tables { qmax, cyclic, diagonal })
}

/// Formats a tuple as `(-1,0,2)`.
pub fn format_tuple(t: &[i64]) -> String {
    let parts: Vec<String> = t.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Two table entries glued along `α: T_p/K_p → T_q/K_q`,
/// `c_p K_p ↦ c_q^u K_q`, at the point `n = (n_p, n_q)`.
#[derive(Clone, Debug, Serialize)]
pub struct MatchedPair {
    pub p: u64,
    pub q: u64,
    pub kp: Gl2Subgroup,
    pub kq: Gl2Subgroup,
    pub tp: Gl2Subgroup,
    pub tq: Gl2Subgroup,
    pub fp: ClassFunction,
    pub fq: ClassFunction,
    pub cp: Mat2,
    pub cq: Mat2,
    pub u: u64,
    /// `|T_p/K_p| = |T_q/K_q|`.
    pub r: u64,
    pub np: (u64, u64),
    pub nq: (u64, u64),
}

impl MatchedPair {
    /// `(d, p, q)` when both `K` are Singer subgroups and both `T` are the
    /// full Singer cycle, so the group is of type `G_d(p,q)`.
    pub fn gd_type(&self) -> Option<(u64, u64, u64)> {
        let full = |t: &Gl2Subgroup| t.kind == SubgroupKind::SingerCyclic && t.order == t.q * t.q - 1;
        (full(&self.tp) && full(&self.tq) && is_singer(&self.kp) && is_singer(&self.kq))
            .then_some((self.r, self.p, self.q))
    }

    /// Conditions (1), (2a), (2b) of the gluing, checked directly.
    pub fn check_values(&self) -> Result<()> {
        let v0 = self.fp.eval(&vec_elem(self.np));
        if v0 == 0 || v0 != self.fq.eval(&vec_elem(self.nq)) {
            return Err(Error::Verification("f_p(n_p) and f_q(n_q) differ or vanish".into()));
        }
        if !support_in_orbit(&self.fp, &self.tp, self.np) || !support_in_orbit(&self.fq, &self.tq, self.nq) {
            return Err(Error::Verification("support leaves the T-orbit of n".into()));
        }
        if !values_agree(&self.fp, self.cp, self.np, &self.fq, self.cq, self.nq, self.u, self.r) {
            return Err(Error::Verification(format!(
                "f_p(c_p^i n_p) != f_q(c_q^(-{}i) n_q) for some i",
                self.u
            )));
        }
        Ok(())
    }
}

fn is_singer(k: &Gl2Subgroup) -> bool {
    k.kind == SubgroupKind::SingerCyclic
}

fn mat_pow(m: Mat2, e: u64) -> Mat2 {
    let mut x = Mat2::identity(m.q);
    for _ in 0..e {
        x = x.mul(&m);
    }
    x
}

fn support_in_orbit(f: &ClassFunction, t: &Gl2Subgroup, n: (u64, u64)) -> bool {
    let orbit: Vec<AbElem> = t.elements().iter().map(|g| vec_elem(g.apply(n))).collect();
    f.support().iter().all(|c| orbit.iter().any(|x| c.contains(x)))
}

#[allow(clippy::too_many_arguments)]
fn values_agree(
    fp: &ClassFunction,
    cp: Mat2,
    np: (u64, u64),
    fq: &ClassFunction,
    cq: Mat2,
    nq: (u64, u64),
    u: u64,
    r: u64,
) -> bool {
    // a = c_p^i  ↦  α(a^{-1}) = c_q^{-ui}
    let cq_inv = cq.inverse().expect("invertible");
    let step_q = mat_pow(cq_inv, u);
    let (mut xp, mut xq) = (np, nq);
    for _ in 0..r {
        if fp.eval(&vec_elem(xp)) != fq.eval(&vec_elem(xq)) {
            return false;
        }
        xp = cp.apply(xp);
        xq = step_q.apply(xq);
    }
    true
}

/// The `K`-class representatives of one `T`-orbit through a support point,
/// `c^i · n0` for `i < r`.
fn orbit_walk(c: Mat2, n0: (u64, u64), r: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(r as usize);
    let mut x = n0;
    for _ in 0..r {
        out.push(x);
        x = c.apply(x);
    }
    out
}

fn least_support_point(f: &ClassFunction) -> Option<(u64, u64)> {
    f.support()
        .iter()
        .map(|c| (c.rep.0[0], c.rep.0[1]))
        .min()
}

struct Side<'a> {
    row: &'a TableRow,
    f: &'a ClassFunction,
    t: Gl2Subgroup,
    c: Mat2,
    r: u64,
}

fn sides<'a>(row: &'a TableRow) -> Result<Vec<Side<'a>>> {
    let mut out = Vec::new();
    for t in abelian_overgroups(&row.k)? {
        let Some(c) = quotient_generator(&t, &row.k) else {
            continue;
        };
        let r = t.order / row.k.order;
        for f in &row.solutions {
            let Some(n0) = least_support_point(f) else { continue };
            if support_in_orbit(f, &t, n0) {
                out.push(Side { row, f, t: t.clone(), c, r });
            }
        }
    }
    Ok(out)
}

/// Every matched pair between the table rows of `p` and of `q`.
///
/// `n_p` is the least support point of `f_p`; `n_q` runs over the walk of
/// `T_q/K_q` through the least support point of `f_q`, and `u` over the
/// units modulo `r`.
pub fn match_rows(prows: &[TableRow], qrows: &[TableRow]) -> Result<Vec<MatchedPair>> {
    let mut ps = Vec::new();
    for row in prows {
        ps.extend(sides(row)?);
    }
    let mut qs = Vec::new();
    for row in qrows {
        qs.extend(sides(row)?);
    }
    let mut out = Vec::new();
    for a in &ps {
        let np = least_support_point(a.f).expect("non-zero solution");
        let v0 = a.f.eval(&vec_elem(np));
        for b in qs.iter().filter(|b| b.r == a.r) {
            let n0 = least_support_point(b.f).expect("non-zero solution");
            for nq in orbit_walk(b.c, n0, b.r) {
                if b.f.eval(&vec_elem(nq)) != v0 {
                    continue;
                }
                for u in units_or_one(a.r) {
                    if values_agree(a.f, a.c, np, b.f, b.c, nq, u, a.r) {
                        out.push(MatchedPair {
                            p: a.row.p,
                            q: b.row.p,
                            kp: a.row.k.clone(),
                            kq: b.row.k.clone(),
                            tp: a.t.clone(),
                            tq: b.t.clone(),
                            fp: a.f.clone(),
                            fq: b.f.clone(),
                            cp: a.c,
                            cq: b.c,
                            u,
                            r: a.r,
                            np,
                            nq,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn units_or_one(r: u64) -> Vec<u64> {
    if r <= 1 {
        vec![1]
    } else {
        units(r)
    }
}

/// [`match_rows`] on freshly computed tables for `p` and `q`.
pub fn match_pairs(p: u64, q: u64, opts: SolveOptions) -> Result<Vec<MatchedPair>> {
    if p == q {
        return Err(Error::InvalidGroup("the two primes must differ".into()));
    }
    match_rows(&table_rows(p, opts)?, &table_rows(q, opts)?)
}

/// The distinct `G_d(p,q)` types among cyclic–cyclic matches.
pub fn gd_types(pairs: &[MatchedPair]) -> BTreeSet<(u64, u64, u64)> {
    pairs.iter().filter_map(MatchedPair::gd_type).collect()
}

/// `N ⋊ Γ` with `Γ` the pullback of `α` and the assembled `ε`.
#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub pair: MatchedPair,
    #[serde(skip)]
    pub group: MetabelianGroup,
    pub n: FinAbGroup,
    pub gamma_order: u64,
    pub gamma_generators: Vec<AutElem>,
    pub epsilon: ClassFunction,
    pub gd_type: Option<(u64, u64, u64)>,
}

fn lift(n: &FinAbGroup, p: u64, mp: &Mat2, q: u64, mq: &Mat2) -> Result<AutElem> {
    let ap = mp.to_aut(&FinAbGroup::elementary_rank2(p)?)?;
    let aq = mq.to_aut(&FinAbGroup::elementary_rank2(q)?)?;
    AutElem::direct_sum(n, &[(&[p], &ap), (&[q], &aq)])
}

/// The pullback `Γ = {σ ∈ T_p × T_q : α(σ_p K_p) = σ_q K_q}` acting on
/// `N = C_pq × C_pq`.
pub fn pullback(pair: &MatchedPair) -> Result<(FinAbGroup, AutGroup)> {
    let (p, q) = (pair.p, pair.q);
    let n = FinAbGroup::new(&[(p, vec![1, 1]), (q, vec![1, 1])])?;
    let idp = Mat2::identity(p);
    let idq = Mat2::identity(q);
    let mut gens = Vec::new();
    for g in &pair.kp.generators {
        gens.push(lift(&n, p, g, q, &idq)?);
    }
    for g in &pair.kq.generators {
        gens.push(lift(&n, p, &idp, q, g)?);
    }
    gens.push(lift(&n, p, &pair.cp, q, &mat_pow(pair.cq, pair.u))?);
    let gamma = AutGroup::new(n.clone(), gens)?;
    Ok((n, gamma))
}

/// `ε(x) = f_p(x_p^g)` where `x_q^g = n_q`, and 0 when `x_q ∉ n_q^Γ`; with
/// `swap` the roles of the primes are exchanged.
fn epsilon_formula(g: &MetabelianGroup, pair: &MatchedPair, swap: bool) -> Result<ClassFunction> {
    let n = &g.n;
    let (p, q, f, target) = if swap {
        (pair.q, pair.p, &pair.fq, pair.np)
    } else {
        (pair.p, pair.q, &pair.fp, pair.nq)
    };
    let target = vec_elem(target);
    let els = g.gamma.elements()?;
    let classes = g.classes()?;
    let mut values = Vec::with_capacity(classes.len());
    for c in classes.iter() {
        let x = &c.rep;
        let v = els
            .iter()
            .map(|s| s.apply(x))
            .find(|y| n.project(y, &[q]) == target)
            .map_or(0, |y| f.eval(&n.project(&y, &[p])));
        values.push(v);
    }
    Ok(ClassFunction {
        domain: n.clone(),
        classes,
        values,
    })
}

pub fn build_candidate(pair: &MatchedPair) -> Result<Candidate> {
    let (n, gamma) = pullback(pair)?;
    let gamma_order = gamma.order()?;
    let gamma_generators = gamma.generators().to_vec();
    let group = MetabelianGroup::new(n.clone(), gamma)?;
    let epsilon = epsilon_formula(&group, pair, false)?;
    Ok(Candidate {
        pair: pair.clone(),
        group,
        n,
        gamma_order,
        gamma_generators,
        epsilon,
        gd_type: pair.gd_type(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Matrices of a group acting on `C_p × C_p` (e.g. an [`AutGroup::inn_image`]).
fn mats_of(g: &AutGroup) -> Result<BTreeSet<Vec<Vec<i64>>>> {
    let mut out = BTreeSet::new();
    for s in g.elements()? {
        let c0 = s.apply(&vec_elem((1, 0)));
        let c1 = s.apply(&vec_elem((0, 1)));
        out.insert(vec![vec![c0.0[0] as i64, c1.0[0] as i64], vec![c0.0[1] as i64, c1.0[1] as i64]]);
    }
    Ok(out)
}

fn k_mats(k: &Gl2Subgroup) -> BTreeSet<Vec<Vec<i64>>> {
    k.elements().iter().map(Mat2::rows).collect()
}

/// Re-derives every property of the construction. With `run_algorithm2`
/// the group is also fed back to Algorithm 2, which must report `ε`.
pub fn verify_candidate(c: &Candidate, run_algorithm2: bool, opts: SolveOptions) -> Result<VerifyReport> {
    let pair = &c.pair;
    let (p, q) = (pair.p, pair.q);
    let n = &c.n;
    let gamma = &c.group.gamma;
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });

    match pair.check_values() {
        Ok(()) => push("value-condition", true, String::new()),
        Err(e) => push("value-condition", false, e.to_string()),
    }

    let expected = pair.kp.order * pair.kq.order * pair.r;
    push(
        "gamma-order",
        c.gamma_order == expected,
        format!("|Γ| = {}, expected {expected}", c.gamma_order),
    );

    let img_p = mats_of(&gamma.inn_image(&[p])?)?;
    let img_q = mats_of(&gamma.inn_image(&[q])?)?;
    let onto = img_p == k_mats(&pair.tp) && img_q == k_mats(&pair.tq);
    push(
        "restrictions-onto-T",
        onto,
        format!("|r_p(Γ)| = {}, |r_q(Γ)| = {}", img_p.len(), img_q.len()),
    );

    let np_in = n.embed(&vec_elem(pair.np), &[p]);
    let nq_in = n.embed(&vec_elem(pair.nq), &[q]);
    let basis = |pr: u64| -> Vec<AbElem> { [(1, 0), (0, 1)].iter().map(|&b| n.embed(&vec_elem(b), &[pr])).collect() };
    let cq_point = gamma.stabilizer(&nq_in)?;
    let cq_all = gamma.pointwise_stabilizer(&basis(q))?;
    let cp_point = gamma.stabilizer(&np_in)?;
    let cp_all = gamma.pointwise_stabilizer(&basis(p))?;
    let (a, b, x, y) = (cq_point.order()?, cq_all.order()?, cp_point.order()?, cp_all.order()?);
    push(
        "centralizer-of-point",
        a == b && x == y,
        format!("|C(n_q)| = {a}, |C(N_q)| = {b}, |C(n_p)| = {x}, |C(N_p)| = {y}"),
    );

    let pi_p = mats_of(&cq_all.inn_image(&[p])?)?;
    let pi_q = mats_of(&cp_all.inn_image(&[q])?)?;
    push(
        "kernel-images",
        pi_p == k_mats(&pair.kp) && pi_q == k_mats(&pair.kq),
        format!("|π_p C(N_q)| = {}, |π_q C(N_p)| = {}", pi_p.len(), pi_q.len()),
    );

    let other = epsilon_formula(&c.group, pair, true)?;
    push(
        "symmetric-formula",
        other.values == c.epsilon.values,
        String::new(),
    );

    let e = &c.epsilon;
    push(
        "epsilon-shape",
        e.total() == 1 && e.min_value() < 0,
        format!("sum {}, min {}", e.total(), e.min_value()),
    );

    if run_algorithm2 {
        let out = algorithm2(&c.group, opts)?;
        let key = e.key();
        let found = out.witnesses.iter().any(|w| w.epsilon.key() == key);
        push(
            "algorithm2-reports-epsilon",
            out.verdict == Verdict::Open && found,
            format!("{} common witness(es)", out.witnesses.len()),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { passed, checks })
}

/// A copy of the pair with `α` replaced by the first unit that breaks the
/// value condition, if any.
pub fn corrupt_alpha(pair: &MatchedPair) -> Option<MatchedPair> {
    units_or_one(pair.r).into_iter().find_map(|u| {
        let mut bad = pair.clone();
        bad.u = u;
        bad.check_values().is_err().then_some(bad)
    })
}

/// Every `Γ` obtained by gluing two table rows along some isomorphism of
/// cyclic quotients, ignoring the value condition.
pub fn assembled_gammas(prows: &[TableRow], qrows: &[TableRow]) -> Result<Vec<(String, FinAbGroup, AutGroup)>> {
    let mut out = Vec::new();
    let over = |row: &TableRow| -> Result<Vec<(Gl2Subgroup, Mat2, u64)>> {
        Ok(abelian_overgroups(&row.k)?
            .into_iter()
            .filter_map(|t| {
                let c = quotient_generator(&t, &row.k)?;
                let r = t.order / row.k.order;
                Some((t, c, r))
            })
            .collect())
    };
    for a in prows {
        for b in qrows {
            for (tp, cp, r) in over(a)? {
                for (tq, cq, s) in over(b)? {
                    if r != s {
                        continue;
                    }
                    for u in units_or_one(r) {
                        let pair = MatchedPair {
                            p: a.p,
                            q: b.p,
                            kp: a.k.clone(),
                            kq: b.k.clone(),
                            tp: tp.clone(),
                            tq: tq.clone(),
                            fp: a.solutions[0].clone(),
                            fq: b.solutions[0].clone(),
                            cp,
                            cq,
                            u,
                            r,
                            np: (1, 0),
                            nq: (1, 0),
                        };
                        let (n, g) = pullback(&pair)?;
                        let label = format!("{} < {} | {} < {} | u={u}", a.k.label, tp.label, b.k.label, tq.label);
                        debug_assert_eq!(gcd(u, r.max(1)), 1);
                        out.push((label, n, g));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_set_rotation_and_units() {
        let a = canonical_tuple_set(&[vec![2, -1, 0], vec![0, 2, -1]]);
        let b = canonical_tuple_set(&[vec![-1, 0, 2]]);
        assert_eq!(a, b);
        assert_eq!(b, vec![vec![-1, 0, 2]]);
        let c = canonical_tuple_set(&[vec![-1, 2, 0]]);
        assert_eq!(c, b);
    }

    #[test]
    fn seven_has_one_row() {
        let rows = table_rows(7, SolveOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].k.label, "C16");
        assert_eq!(rows[0].tuples, vec![vec![-1, 0, 2]]);
        assert_eq!(rows[0].quotient, 3);
    }
}
