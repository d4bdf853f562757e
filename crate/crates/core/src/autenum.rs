//! Subgroups of `GL(2,q) = Aut(C_q × C_q)`.
//!
//! For `q ≤ 5` every conjugacy class is enumerated. For larger `q` only the
//! abelian candidates are produced: subgroups of a Singer cycle and of the
//! diagonal torus that are large enough, prime to `q`, centre-free and not
//! transitive on nonzero vectors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abgroup::{AbElem, FinAbGroup};
use crate::arith::{divisors, gcd, is_prime, mod_inv, mod_mul, mod_pow, mult_order, primitive_root, units};
use crate::error::{Error, Result};
use crate::fingroup::{FiniteGroup, SubgroupRec, TableFactor};
use crate::matact::{AutElem, AutGroup};
use crate::quadfield::QuadField;

/// Largest `q` for which full subgroup enumeration is offered.
pub const FULL_ENUM_CAP: u64 = 5;
/// Default cap for the abelian candidate search.
pub const DEFAULT_QMAX: u64 = 19;

/// A 2×2 matrix over `F_q`, row-major, acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub q: u64,
    pub m: [u64; 4],
}

impl Mat2 {
    pub fn new(q: u64, m: [i64; 4]) -> Self {
        let r = |x: i64| x.rem_euclid(q as i64) as u64;
        Mat2 {
            q,
            m: [r(m[0]), r(m[1]), r(m[2]), r(m[3])],
        }
    }

    pub fn identity(q: u64) -> Self {
        Mat2::new(q, [1, 0, 0, 1])
    }

    pub fn diag(q: u64, a: u64, b: u64) -> Self {
        Mat2 {
            q,
            m: [a % q, 0, 0, b % q],
        }
    }

    pub fn scalar(q: u64, a: u64) -> Self {
        Mat2::diag(q, a, a)
    }

    pub fn from_rows(q: u64, rows: [[u64; 2]; 2]) -> Self {
        Mat2 {
            q,
            m: [rows[0][0] % q, rows[0][1] % q, rows[1][0] % q, rows[1][1] % q],
        }
    }

    pub fn det(&self) -> u64 {
        let q = self.q;
        (mod_mul(self.m[0], self.m[3], q) + q - mod_mul(self.m[1], self.m[2], q)) % q
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let q = self.q;
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Mat2 {
            q,
            m: [
                (a * e + b * g) % q,
                (a * f + b * h) % q,
                (c * e + d * g) % q,
                (c * f + d * h) % q,
            ],
        }
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let q = self.q;
        let di = mod_inv(self.det(), q)
            .ok_or_else(|| Error::NotInvertible(format!("{self} is singular mod {q}")))?;
        let [a, b, c, d] = self.m;
        Ok(Mat2 {
            q,
            m: [
                mod_mul(d, di, q),
                mod_mul((q - b) % q, di, q),
                mod_mul((q - c) % q, di, q),
                mod_mul(a, di, q),
            ],
        })
    }

    pub fn apply(&self, v: (u64, u64)) -> (u64, u64) {
        let q = self.q;
        (
            (self.m[0] * v.0 + self.m[1] * v.1) % q,
            (self.m[2] * v.0 + self.m[3] * v.1) % q,
        )
    }

    pub fn is_scalar(&self) -> bool {
        self.m[1] == 0 && self.m[2] == 0 && self.m[0] == self.m[3]
    }

    pub fn index(&self) -> usize {
        let q = self.q as usize;
        self.m.iter().fold(0, |acc, &x| acc * q + x as usize)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        vec![
            vec![self.m[0] as i64, self.m[1] as i64],
            vec![self.m[2] as i64, self.m[3] as i64],
        ]
    }

    pub fn to_aut(&self, a: &FinAbGroup) -> Result<AutElem> {
        AutElem::from_matrices(a, &[self.rows()])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    SingerCyclic,
    Diagonalizable,
    General,
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgroupKind::SingerCyclic => "singer-cyclic",
            SubgroupKind::Diagonalizable => "diagonalizable",
            SubgroupKind::General => "general",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2Subgroup {
    pub q: u64,
    pub generators: Vec<Mat2>,
    pub order: u64,
    pub kind: SubgroupKind,
    pub label: String,
}

/// All elements of the group generated by `gens`, sorted.
pub fn closure(q: u64, gens: &[Mat2]) -> Vec<Mat2> {
    let mut seen: BTreeSet<Mat2> = BTreeSet::new();
    let id = Mat2::identity(q);
    seen.insert(id);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

impl Gl2Subgroup {
    fn build(q: u64, generators: Vec<Mat2>, kind: SubgroupKind, label: String) -> Self {
        let order = closure(q, &generators).len() as u64;
        Gl2Subgroup {
            q,
            generators,
            order,
            kind,
            label,
        }
    }

    pub fn elements(&self) -> Vec<Mat2> {
        closure(self.q, &self.generators)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].mul(&g[j]) == g[j].mul(&g[i])))
    }

    /// Whether every scalar matrix lies in the group.
    pub fn contains_center(&self) -> bool {
        let els = self.elements();
        let r = primitive_root(self.q);
        els.binary_search(&Mat2::scalar(self.q, r)).is_ok()
    }

    /// Orbit sizes on nonzero vectors, ascending.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let q = self.q;
        let els = self.elements();
        let mut seen = vec![false; (q * q) as usize];
        let mut sizes = Vec::new();
        for v in 1..q * q {
            if seen[v as usize] {
                continue;
            }
            let v2 = (v / q, v % q);
            let mut orb = BTreeSet::new();
            for g in &els {
                let w = g.apply(v2);
                orb.insert(w.0 * q + w.1);
            }
            for &w in &orb {
                seen[w as usize] = true;
            }
            sizes.push(orb.len());
        }
        sizes.sort_unstable();
        sizes
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_sizes().len() == 1
    }

    /// The group acting on `C_q × C_q`.
    pub fn to_aut_group(&self) -> Result<AutGroup> {
        let a = FinAbGroup::elementary_rank2(self.q)?;
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_aut(&a))
            .collect::<Result<Vec<_>>>()?;
        Ok(AutGroup::new(a, gens)?.with_label(self.label.clone()))
    }

    /// Isomorphism type of the group.
    pub fn iso_type(&self) -> String {
        let els = self.elements();
        let ord = |x: &Mat2| {
            let mut y = *x;
            let mut k = 1u64;
            while y != Mat2::identity(self.q) {
                y = y.mul(x);
                k += 1;
            }
            k
        };
        let orders: Vec<u64> = els.iter().map(ord).collect();
        identify(self.order, self.is_abelian(), &orders)
    }

    /// The four candidate predicates: `|K| > q`, `q ∤ |K|`, centre-free,
    /// non-transitive.
    pub fn is_candidate_shape(&self) -> bool {
        self.order > self.q
            && self.order % self.q != 0
            && !self.contains_center()
            && !self.is_transitive()
    }
}

/// Names a small group from its order, commutativity and element orders.
/// Abelian groups get invariant factors; a few small nonabelian groups get
/// their usual names; anything else a generic tag.
pub fn identify(order: u64, abelian: bool, element_orders: &[u64]) -> String {
    if abelian {
        let f = abelian_invariants(order, element_orders);
        if f.is_empty() {
            return "C1".into();
        }
        return f.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("×");
    }
    let count = |k: u64| element_orders.iter().filter(|&&o| o == k).count();
    let inv = count(2);
    let max = element_orders.iter().copied().max().unwrap_or(1);
    let half = order / 2;
    match order {
        8 if inv == 1 => return "Q8".into(),
        8 if inv == 5 => return "D8".into(),
        12 if inv == 1 && count(4) == 6 => return "C3⋊C4".into(),
        12 if count(3) == 8 => return "A4".into(),
        24 if count(3) == 8 && inv == 1 => return "SL(2,3)".into(),
        _ => {}
    }
    // dihedral: a cyclic subgroup of index 2 and every element outside it an involution
    if max == half && inv as u64 == half + if half % 2 == 0 { 1 } else { 0 } {
        return format!("D{order}");
    }
    let mut hist: Vec<(u64, usize)> = Vec::new();
    for &o in element_orders {
        match hist.iter_mut().find(|(k, _)| *k == o) {
            Some(e) => e.1 += 1,
            None => hist.push((o, 1)),
        }
    }
    hist.sort_unstable();
    let h: Vec<String> = hist.iter().map(|(k, c)| format!("{k}:{c}")).collect();
    format!("G{order}[{}]", h.join(","))
}

/// Invariant factors `d_1 | d_2 | …` (listed largest first) of an abelian
/// group from its element-order statistics.
fn abelian_invariants(order: u64, element_orders: &[u64]) -> Vec<u64> {
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in crate::arith::factorize(order) {
        // r_k = log_p #{x : x^{p^k} = 1}; partition conjugate read off from r_k − r_{k−1}
        let mut r = vec![0u32];
        for k in 1..=e {
            let pk = p.pow(k);
            let n = element_orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let mut l = 0;
            let mut t = n;
            while t > 1 {
                t /= p;
                l += 1;
            }
            r.push(l);
        }
        let mut parts = Vec::new();
        // number of cyclic factors of order ≥ p^k is r_k − r_{k−1}
        let ge: Vec<u32> = (1..r.len()).map(|k| r[k] - r[k - 1]).collect();
        for k in (0..ge.len()).rev() {
            let above = if k + 1 < ge.len() { ge[k + 1] } else { 0 };
            for _ in 0..(ge[k] - above) {
                parts.push(k as u32 + 1);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push((p, parts));
    }
    let len = per_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            per_prime
                .iter()
                .map(|(p, v)| v.get(i).map_or(1, |&e| p.pow(e)))
                .product()
        })
        .collect()
}

/// The subgroup of order `m` in the Singer cycle `⟨α⟩`.
pub fn singer_subgroup(q: u64, m: u64) -> Result<Gl2Subgroup> {
    let n = q * q - 1;
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidGroup(format!("{m} does not divide {q}^2-1 = {n}")));
    }
    let f = QuadField::new(q)?;
    let beta = f.pow(f.alpha(), n / m);
    let g = Mat2::from_rows(q, f.mult_matrix(beta));
    let gens = if m == 1 { vec![] } else { vec![g] };
    Ok(Gl2Subgroup::build(q, gens, SubgroupKind::SingerCyclic, format!("C{m}")))
}

/// The group generated by `diag(a, b)` over the given pairs.
pub fn diagonal_subgroup(q: u64, pairs: &[(u64, u64)]) -> Result<Gl2Subgroup> {
    if !is_prime(q) {
        return Err(Error::InvalidGroup(format!("{q} is not prime")));
    }
    for &(a, b) in pairs {
        if a % q == 0 || b % q == 0 {
            return Err(Error::InvalidGroup(format!("({a},{b}) has a non-unit entry mod {q}")));
        }
    }
    let gens: Vec<Mat2> = pairs
        .iter()
        .map(|&(a, b)| Mat2::diag(q, a, b))
        .filter(|m| *m != Mat2::identity(q))
        .collect();
    Ok(Gl2Subgroup::build(q, gens, SubgroupKind::Diagonalizable, format_pairs(pairs)))
}

pub fn format_pairs(pairs: &[(u64, u64)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("({a},{b})"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `"(a,b),(c,d)"`.
pub fn parse_pairs(s: &str) -> Result<Vec<(u64, u64)>> {
    let bad = || Error::Parse(format!("expected pairs like (6,3),(1,5), got {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut rest = t.as_str();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = rest.find(')').ok_or_else(bad)?;
        let (a, b) = rest[..close].split_once(',').ok_or_else(bad)?;
        out.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
        rest = &rest[close + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// `GL(2,q)` as a table group, identity first, with its element list.
pub fn gl2_table(q: u64) -> (FiniteGroup, Vec<Mat2>) {
    let els = gl2_elements(q);
    (FiniteGroup::new(vec![gl2_factor(&els)]), els)
}

fn gl2_elements(q: u64) -> Vec<Mat2> {
    let id = Mat2::identity(q);
    let mut els = vec![id];
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = Mat2 { q, m: [a, b, c, d] };
                    if m.is_invertible() && m != id {
                        els.push(m);
                    }
                }
            }
        }
    }
    els
}

fn check_full_cap(q: u64) -> Result<()> {
    if !is_prime(q) || q > FULL_ENUM_CAP {
        return Err(Error::Unsupported(format!(
            "full subgroup enumeration of GL(2,q) is limited to q in {{2,3,5}}, got {q}"
        )));
    }
    Ok(())
}

/// One representative per conjugacy class of subgroups of `GL(2,q)`.
pub fn subgroup_class_reps(q: u64) -> Result<Vec<Gl2Subgroup>> {
    check_full_cap(q)?;
    let (g, els) = gl2_table(q);
    Ok(g.subgroup_classes()
        .into_iter()
        .enumerate()
        .map(|(i, c)| rec_to_subgroup(q, &els, &c.rep, i))
        .collect())
}

/// Brute-force oracle for [`subgroup_class_reps`]: all subgroups by
/// unrestricted joins, classified by pairwise conjugacy tests.
pub fn subgroup_class_reps_oracle(q: u64) -> Result<Vec<Gl2Subgroup>> {
    check_full_cap(q)?;
    let (g, els) = gl2_table(q);
    Ok(g.brute_force_classes()
        .iter()
        .enumerate()
        .map(|(i, r)| rec_to_subgroup(q, &els, r, i))
        .collect())
}

fn rec_to_subgroup(q: u64, els: &[Mat2], rec: &SubgroupRec, i: usize) -> Gl2Subgroup {
    let gens: Vec<Mat2> = rec.gens.iter().map(|&x| els[x as usize]).collect();
    let mut s = Gl2Subgroup {
        q,
        generators: gens,
        order: rec.order as u64,
        kind: SubgroupKind::General,
        label: String::new(),
    };
    if s.is_abelian() {
        if let Ok(k) = dichotomy_classify(&s) {
            s.kind = k;
        }
    }
    s.label = format!("K{}[{}]", i, s.iso_type());
    s
}

/// Classes of subgroups of `GL(2,q) × U(r)` as groups acting on
/// `C_q × C_q × C_r`, for `q ≤ 5` and `r` prime to `q`.
pub fn product_class_reps(q: u64, r: u64) -> Result<(FinAbGroup, Vec<AutGroup>)> {
    check_full_cap(q)?;
    if gcd(q, r) != 1 || r < 2 {
        return Err(Error::InvalidGroup(format!("cyclic factor {r} must be > 1 and prime to {q}")));
    }
    let mut comps: Vec<(u64, Vec<u32>)> = vec![(q, vec![1, 1])];
    for (p, e) in crate::arith::factorize(r) {
        comps.push((p, vec![e]));
    }
    comps.sort();
    let a = FinAbGroup::new(&comps)?;
    let els = gl2_elements(q);
    let us = units(r);
    let u_index: HashMap<u64, usize> = us.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let us2 = us.clone();
    let ufactor = TableFactor::new(us.len(), move |i, j| u_index[&mod_mul(us2[i], us2[j], r)]);
    // units(r) is ascending so 1 sits at index 0, as TableFactor requires
    debug_assert_eq!(us[0], 1);
    let glf = gl2_factor(&els);
    let g = FiniteGroup::new(vec![glf, ufactor]);
    let classes = g.subgroup_classes();
    let mut out = Vec::with_capacity(classes.len());
    for c in classes {
        let mut gens = Vec::new();
        for &x in &c.rep.gens {
            let d = g.split(x);
            let (m, u) = (els[d[0]], us[d[1]]);
            let mats: Vec<Vec<Vec<i64>>> = a
                .components()
                .iter()
                .map(|(p, e)| {
                    if *p == q {
                        m.rows()
                    } else {
                        vec![vec![(u % p.pow(e[0])) as i64]]
                    }
                })
                .collect();
            gens.push(AutElem::from_matrices(&a, &mats)?);
        }
        out.push(AutGroup::new(a.clone(), gens)?);
    }
    Ok((a, out))
}

fn gl2_factor(els: &[Mat2]) -> TableFactor {
    let index: HashMap<Mat2, usize> = els.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let e2 = els.to_vec();
    TableFactor::new(els.len(), move |i, j| index[&e2[i].mul(&e2[j])])
}

/// Lines through the origin fixed by every generator.
fn invariant_lines(t: &Gl2Subgroup) -> Vec<(u64, u64)> {
    let q = t.q;
    let mut lines: Vec<(u64, u64)> = vec![(1, 0)];
    lines.extend((0..q).map(|s| (s, 1)));
    lines
        .into_iter()
        .filter(|&v| {
            t.generators.iter().all(|g| {
                let w = g.apply(v);
                // w parallel to v
                (w.0 * v.1 + q * q - w.1 * v.0) % q == 0
            })
        })
        .collect()
}

/// Which of the two maximal abelian families `T` belongs to.
pub fn dichotomy_classify(t: &Gl2Subgroup) -> Result<SubgroupKind> {
    let q = t.q;
    if !t.is_abelian() {
        return Err(Error::Hypothesis(format!("{} is not abelian", t.label)));
    }
    if pp_free(t.order, q) <= q {
        return Err(Error::Hypothesis(format!(
            "{} has no subgroup of order > {q} prime to {q}",
            t.label
        )));
    }
    match invariant_lines(t).len() {
        0 => {
            if (q * q - 1) % t.order != 0 {
                return Err(Error::Hypothesis(format!("{} has no invariant line but order {}", t.label, t.order)));
            }
            Ok(SubgroupKind::SingerCyclic)
        }
        1 => Err(Error::Hypothesis(format!("{} fixes exactly one line", t.label))),
        _ => Ok(SubgroupKind::Diagonalizable),
    }
}

fn pp_free(mut n: u64, q: u64) -> u64 {
    while n % q == 0 {
        n /= q;
    }
    n
}

/// Up to conjugacy, the abelian `K ≤ GL(2,q)` with `|K| > q`, `q ∤ |K|`,
/// centre-free and non-transitive: Singer subgroups first (by order), then
/// diagonal ones (by order, label).
pub fn abelian_candidates(q: u64) -> Result<Vec<Gl2Subgroup>> {
    if !is_prime(q) {
        return Err(Error::InvalidGroup(format!("{q} is not prime")));
    }
    let n = q * q - 1;
    let mut out: Vec<Gl2Subgroup> = divisors(n)
        .into_par_iter()
        .filter(|&m| m > q && m % (q - 1) != 0 && m < n)
        .map(|m| singer_subgroup(q, m))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|k| k.order);
    let mut diag = diagonal_candidates(q);
    diag.sort_by(|a, b| (a.order, &a.label).cmp(&(b.order, &b.label)));
    out.extend(diag);
    Ok(out)
}

/// Subgroups of the diagonal torus `F_q^* × F_q^*` in exponent coordinates.
/// Returned as sorted element lists of `(i, j)` meaning `diag(g^i, g^j)`.
fn torus_subgroups(q: u64) -> Vec<Vec<(u64, u64)>> {
    let n = q - 1;
    let mut all: BTreeSet<Vec<(u64, u64)>> = BTreeSet::new();
    let elems: Vec<(u64, u64)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let gen = |gs: &[(u64, u64)]| -> Vec<(u64, u64)> {
        let mut set = BTreeSet::new();
        set.insert((0, 0));
        let mut stack = vec![(0, 0)];
        while let Some(x) = stack.pop() {
            for g in gs {
                let y = ((x.0 + g.0) % n, (x.1 + g.1) % n);
                if set.insert(y) {
                    stack.push(y);
                }
            }
        }
        set.into_iter().collect()
    };
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i..] {
            all.insert(gen(&[a, b]));
        }
    }
    all.into_iter().collect()
}

fn diagonal_candidates(q: u64) -> Vec<Gl2Subgroup> {
    let n = q - 1;
    let g = primitive_root(q);
    let swap = |s: &[(u64, u64)]| {
        let mut t: Vec<(u64, u64)> = s.iter().map(|&(a, b)| (b, a)).collect();
        t.sort_unstable();
        t
    };
    let mut out = Vec::new();
    for s in torus_subgroups(q) {
        let order = s.len() as u64;
        if order <= q || order % q == 0 {
            continue;
        }
        // the centre is generated by diag(g, g)
        if s.binary_search(&(1 % n, 1 % n)).is_ok() {
            continue;
        }
        let t = swap(&s);
        if t < s {
            continue;
        }
        let to_mat = |e: (u64, u64)| (mod_pow(g, e.0, q), mod_pow(g, e.1, q));
        let pairs = torus_label(q, &s.iter().map(|&e| to_mat(e)).collect::<Vec<_>>());
        let mut k = diagonal_subgroup(q, &pairs).expect("units");
        debug_assert_eq!(k.order, order);
        k.kind = SubgroupKind::Diagonalizable;
        out.push(k);
    }
    out
}

/// A canonical two-pair label `(a,b),(1,c)` for a diagonal group given by
/// its `(x, y)` eigenvalue pairs: `a` is the least generator of the first
/// projection, `b` least with `(a,b)` in the group, and `c` the least
/// generator of the kernel of the first projection.
pub fn torus_label(q: u64, elems: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let first: BTreeSet<u64> = elems.iter().map(|e| e.0).collect();
    let m1 = first.len() as u64;
    let a = *first
        .iter()
        .find(|&&x| mult_order(x, q) == Some(m1))
        .expect("cyclic projection");
    let b = elems.iter().filter(|e| e.0 == a).map(|e| e.1).min().unwrap();
    let kernel: Vec<u64> = elems.iter().filter(|e| e.0 == 1).map(|e| e.1).collect();
    let kn = kernel.len() as u64;
    let mut pairs = vec![(a, b)];
    if kn > 1 {
        let c = *kernel
            .iter()
            .filter(|&&x| mult_order(x, q) == Some(kn))
            .min()
            .unwrap();
        pairs.push((1, c));
    }
    pairs
}

/// Elements of a diagonal group as eigenvalue pairs, sorted.
pub fn torus_elements(k: &Gl2Subgroup) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = k.elements().iter().map(|m| (m.m[0], m.m[3])).collect();
    v.sort_unstable();
    v
}

/// Whether two diagonal groups agree up to swapping the eigenlines.
pub fn same_torus_up_to_swap(a: &Gl2Subgroup, b: &Gl2Subgroup) -> bool {
    let (x, y) = (torus_elements(a), torus_elements(b));
    if x == y {
        return true;
    }
    let mut s: Vec<(u64, u64)> = y.iter().map(|&(u, v)| (v, u)).collect();
    s.sort_unstable();
    x == s
}

/// A vector of the module as an element of `C_q × C_q`.
pub fn vec_elem(v: (u64, u64)) -> AbElem {
    AbElem(vec![v.0, v.1])
}

/// Abelian overgroups of `K` inside the same maximal abelian group: all
/// Singer subgroups whose order is a multiple of `|K|`, or all diagonal
/// groups containing `K`. Ordered by order.
pub fn abelian_overgroups(k: &Gl2Subgroup) -> Result<Vec<Gl2Subgroup>> {
    let q = k.q;
    if inside_singer(k) {
        let n = q * q - 1;
        return divisors(n)
            .into_iter()
            .filter(|t| t % k.order == 0)
            .map(|t| singer_subgroup(q, t))
            .collect();
    }
    if !inside_torus(k) {
        return Err(Error::Hypothesis(format!(
            "{} lies in neither the Singer cycle nor the diagonal torus",
            k.label
        )));
    }
    let kel = torus_elements(k);
    let g = primitive_root(q);
    let mut out = Vec::new();
    for s in torus_subgroups(q) {
        let els: Vec<(u64, u64)> = s.iter().map(|&(i, j)| (mod_pow(g, i, q), mod_pow(g, j, q))).collect();
        if kel.iter().all(|x| els.contains(x)) {
            out.push(diagonal_subgroup(q, &torus_label(q, &els))?);
        }
    }
    out.sort_by(|a, b| (a.order, &a.label).cmp(&(b.order, &b.label)));
    Ok(out)
}

/// An element `c ∈ T` with `⟨c⟩K = T`, the least such matrix; `None` when
/// `T/K` is not cyclic or `K ⊄ T`.
pub fn quotient_generator(t: &Gl2Subgroup, k: &Gl2Subgroup) -> Option<Mat2> {
    let tel = t.elements();
    let kel = k.elements();
    if !kel.iter().all(|x| tel.binary_search(x).is_ok()) {
        return None;
    }
    let r = t.order / k.order;
    tel.into_iter().find(|c| {
        let mut x = *c;
        let mut i = 1;
        while kel.binary_search(&x).is_err() {
            x = x.mul(c);
            i += 1;
        }
        i == r
    })
}

/// Whether every generator commutes with the Singer matrix, i.e. `K` lies
/// in the fixed Singer cycle.
pub fn inside_singer(k: &Gl2Subgroup) -> bool {
    let Ok(f) = QuadField::new(k.q) else {
        return false;
    };
    let s = Mat2::from_rows(k.q, f.singer_matrix());
    k.generators.iter().all(|g| g.mul(&s) == s.mul(g))
}

pub fn inside_torus(k: &Gl2Subgroup) -> bool {
    k.generators.iter().all(|g| g.m[1] == 0 && g.m[2] == 0)
}

/// Representatives `c^i · base`, `0 ≤ i < |M/K|`, of the `K`-classes met by
/// one `M`-orbit, where `M` is the Singer cycle (base `(1,0)`, `c = α`) or
/// the diagonal torus (base `(1,1)`, `c` the least generator of `M/K`).
/// `None` when `K` lies in neither or `M/K` is not cyclic.
pub fn quotient_walk(k: &Gl2Subgroup) -> Option<Vec<(u64, u64)>> {
    let q = k.q;
    let n = q * q - 1;
    if inside_singer(k) {
        let f = QuadField::new(q).ok()?;
        let len = n / k.order;
        return Some((0..len).map(|i| f.pow(f.alpha(), i)).collect());
    }
    if !inside_torus(k) {
        return None;
    }
    let kel = torus_elements(k);
    let len = (q - 1) * (q - 1) / k.order;
    let in_k = |x: (u64, u64)| kel.binary_search(&x).is_ok();
    let order_mod_k = |c: (u64, u64)| {
        let mut x = c;
        let mut i = 1;
        while !in_k(x) {
            x = (mod_mul(x.0, c.0, q), mod_mul(x.1, c.1, q));
            i += 1;
        }
        i
    };
    let c = (1..q)
        .flat_map(|a| (1..q).map(move |b| (a, b)))
        .find(|&c| order_mod_k(c) == len)?;
    let mut pts = Vec::with_capacity(len as usize);
    let mut x = (1, 1);
    for _ in 0..len {
        pts.push(x);
        x = (mod_mul(x.0, c.0, q), mod_mul(x.1, c.1, q));
    }
    Some(pts)
}

/// Values of a class function along [`quotient_walk`]; `None` if the
/// function is nonzero somewhere off the walk.
pub fn tuple_along(k: &Gl2Subgroup, f: &crate::esolve::ClassFunction) -> Option<Vec<i64>> {
    let pts: Vec<AbElem> = quotient_walk(k)?.into_iter().map(vec_elem).collect();
    for c in f.support() {
        if !pts.iter().any(|p| c.contains(p)) {
            return None;
        }
    }
    Some(pts.iter().map(|p| f.eval(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singer_orders_and_orbits() {
        let k = singer_subgroup(7, 16).unwrap();
        assert_eq!(k.order, 16);
        assert_eq!(k.orbit_sizes(), vec![16, 16, 16]);
        let full = singer_subgroup(5, 24).unwrap();
        assert!(full.is_transitive());
        assert_eq!(singer_subgroup(13, 56).unwrap().orbit_sizes().len(), 3);
        assert!(singer_subgroup(7, 5).is_err());
    }

    #[test]
    fn diagonal_groups_from_labels() {
        let k = diagonal_subgroup(13, &parse_pairs("(6,3),(1,5)").unwrap()).unwrap();
        assert_eq!(k.order, 48);
        assert_eq!(k.iso_type(), "C12×C4");
        let k = diagonal_subgroup(17, &[(3, 9), (1, 16)]).unwrap();
        assert_eq!(k.iso_type(), "C16×C2");
        assert_eq!(diagonal_subgroup(5, &[(1, 1)]).unwrap().order, 1);
        assert!(diagonal_subgroup(5, &[(0, 1)]).is_err());
        assert_eq!(format_pairs(&parse_pairs(" (3,10), (1,13)").unwrap()), "(3,10),(1,13)");
        assert!(parse_pairs("3,10").is_err());
    }

    #[test]
    fn identify_small_types() {
        let t = |gens: Vec<Mat2>| Gl2Subgroup::build(5, gens, SubgroupKind::General, String::new()).iso_type();
        assert_eq!(t(vec![Mat2::new(5, [-1, 1, 0, 1]), Mat2::new(5, [-1, 1, -1, 0])]), "D6");
        assert_eq!(t(vec![Mat2::new(5, [1, -1, 0, -1]), Mat2::new(5, [0, 1, -1, 1])]), "D12");
        assert_eq!(t(vec![Mat2::diag(5, 2, 1), Mat2::diag(5, 1, 4)]), "C4×C2");
    }

    #[test]
    fn gl22_and_gl23_classes() {
        let c2 = subgroup_class_reps(2).unwrap();
        assert_eq!(c2.len(), 4);
        let c3 = subgroup_class_reps(3).unwrap();
        let oracle = subgroup_class_reps_oracle(3).unwrap();
        assert_eq!(c3.len(), oracle.len());
        let mut a: Vec<u64> = c3.iter().map(|k| k.order).collect();
        let mut b: Vec<u64> = oracle.iter().map(|k| k.order).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        assert!(subgroup_class_reps(7).is_err());
    }

    #[test]
    fn dichotomy() {
        let s = singer_subgroup(7, 16).unwrap();
        assert_eq!(dichotomy_classify(&s).unwrap(), SubgroupKind::SingerCyclic);
        assert_eq!(
            dichotomy_classify(&singer_subgroup(5, 24).unwrap()).unwrap(),
            SubgroupKind::SingerCyclic
        );
        let d = diagonal_subgroup(13, &[(6, 3), (1, 5)]).unwrap();
        assert_eq!(dichotomy_classify(&d).unwrap(), SubgroupKind::Diagonalizable);
        // unipotent: order q, no subgroup prime to q
        let u = Gl2Subgroup::build(7, vec![Mat2::new(7, [1, 1, 0, 1])], SubgroupKind::General, "U".into());
        assert!(dichotomy_classify(&u).is_err());
    }

    #[test]
    fn candidates_q7() {
        let c = abelian_candidates(7).unwrap();
        let labels: Vec<&str> = c.iter().map(|k| k.label.as_str()).collect();
        assert!(labels.contains(&"C16"));
        assert!(!labels.contains(&"C48"));
        for k in &c {
            assert!(k.is_candidate_shape(), "{}", k.label);
            assert!(dichotomy_classify(k).is_ok());
        }
    }
}
