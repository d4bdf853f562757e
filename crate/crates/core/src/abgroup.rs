//! Finite abelian groups in primary decomposition.
//!
//! A group `A ≅ ∏_p ∏_i C_{p^{e_i}}` is stored as an ordered list of prime
//! components. Elements are coordinate vectors with one entry per cyclic
//! factor, so taking a π-part is a coordinate projection.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, lcm};
use crate::error::{Error, Result};

/// Largest Sylow component on which subgroup lattices are brute-forced.
pub const BRUTE_FORCE_SYLOW_CAP: u64 = 10_000;

/// An element of a [`FinAbGroup`]: coordinates reduced modulo each factor order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbElem(pub Vec<u64>);

impl AbElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for AbElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    components: Vec<(u64, Vec<u32>)>,
}

/// A finite abelian group `∏_p ∏_i C_{p^{e_i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FinAbGroup {
    components: Vec<(u64, Vec<u32>)>,
    moduli: Vec<u64>,
    factor_component: Vec<usize>,
    order: u64,
}

impl TryFrom<GroupJson> for FinAbGroup {
    type Error = Error;
    fn try_from(j: GroupJson) -> Result<Self> {
        FinAbGroup::new(&j.components)
    }
}

impl From<FinAbGroup> for GroupJson {
    fn from(g: FinAbGroup) -> Self {
        GroupJson {
            components: g.components,
        }
    }
}

impl FinAbGroup {
    /// Builds a group from `(prime, exponents)` pairs. Exponent lists are
    /// sorted into non-increasing order and components by prime.
    pub fn new(spec: &[(u64, Vec<u32>)]) -> Result<Self> {
        let mut components: Vec<(u64, Vec<u32>)> = Vec::with_capacity(spec.len());
        for (p, exps) in spec {
            if !is_prime(*p) {
                return Err(Error::InvalidGroup(format!("{p} is not prime")));
            }
            if exps.is_empty() {
                return Err(Error::InvalidGroup(format!("empty exponent list for prime {p}")));
            }
            if exps.iter().any(|&e| e == 0) {
                return Err(Error::InvalidGroup(format!(
                    "non-positive exponent for prime {p}"
                )));
            }
            if components.iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidGroup(format!("duplicate prime {p}")));
            }
            let mut e = exps.clone();
            e.sort_unstable_by(|a, b| b.cmp(a));
            components.push((*p, e));
        }
        components.sort_by_key(|(p, _)| *p);

        let mut moduli = Vec::new();
        let mut factor_component = Vec::new();
        let mut order: u64 = 1;
        for (ci, (p, exps)) in components.iter().enumerate() {
            for &e in exps {
                let m = p
                    .checked_pow(e)
                    .ok_or_else(|| Error::InvalidGroup("factor order overflows".into()))?;
                order = order
                    .checked_mul(m)
                    .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
                moduli.push(m);
                factor_component.push(ci);
            }
        }
        Ok(FinAbGroup {
            components,
            moduli,
            factor_component,
            order,
        })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FinAbGroup::new(&[]).expect("empty spec is valid")
    }

    /// `C_q × C_q`.
    pub fn elementary_rank2(q: u64) -> Result<Self> {
        FinAbGroup::new(&[(q, vec![1, 1])])
    }

    /// Parses the `7^[1,1]x13^[1,1]` format. The empty string and `1` give the
    /// trivial group.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FinAbGroup::trivial());
        }
        let mut spec = Vec::new();
        for part in s.split(['x', 'X', '*']) {
            let part = part.trim();
            let (p, rest) = part
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected p^[e,...] in {part:?}")))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in {part:?}")))?;
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected [..] exponent list in {part:?}")))?;
            let mut exps = Vec::new();
            for e in inner.split(',') {
                let e = e.trim();
                if e.is_empty() {
                    continue;
                }
                let v: i64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                if v <= 0 {
                    return Err(Error::InvalidGroup(format!(
                        "non-positive exponent {v} for prime {p}"
                    )));
                }
                exps.push(v as u32);
            }
            spec.push((p, exps));
        }
        FinAbGroup::new(&spec)
    }

    pub fn components(&self) -> &[(u64, Vec<u32>)] {
        &self.components
    }

    pub fn primes(&self) -> Vec<u64> {
        self.components.iter().map(|(p, _)| *p).collect()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Orders of the cyclic factors, in coordinate order.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn num_factors(&self) -> usize {
        self.moduli.len()
    }

    /// Prime of the cyclic factor at coordinate `i`.
    pub fn factor_prime(&self, i: usize) -> u64 {
        self.components[self.factor_component[i]].0
    }

    /// `k_p`: number of cyclic factors of the Sylow `p`-subgroup.
    pub fn rank_at(&self, p: u64) -> usize {
        self.components
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, e)| e.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_cyclic(&self) -> bool {
        self.components.iter().all(|(_, e)| e.len() == 1)
    }

    pub fn sylow_is_cyclic(&self, p: u64) -> bool {
        self.rank_at(p) <= 1
    }

    /// Primes whose Sylow subgroup is non-trivial and cyclic.
    pub fn cyclic_primes(&self) -> Vec<u64> {
        self.components
            .iter()
            .filter(|(_, e)| e.len() == 1)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &m| lcm(acc, m))
    }

    pub fn identity(&self) -> AbElem {
        AbElem(vec![0; self.moduli.len()])
    }

    pub fn contains(&self, a: &AbElem) -> bool {
        a.0.len() == self.moduli.len() && a.0.iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    /// Builds an element from signed coordinates, reducing each entry.
    pub fn elem(&self, coords: &[i64]) -> Result<AbElem> {
        if coords.len() != self.moduli.len() {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        Ok(AbElem(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| crate::arith::reduce(c, m))
                .collect(),
        ))
    }

    /// Mixed-radix index; coincides with the position in [`Self::elements`].
    pub fn index_of(&self, a: &AbElem) -> usize {
        let mut idx: usize = 0;
        for (c, m) in a.0.iter().zip(&self.moduli) {
            idx = idx * (*m as usize) + *c as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> AbElem {
        let mut coords = vec![0u64; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let m = self.moduli[i] as usize;
            coords[i] = (idx % m) as u64;
            idx /= m;
        }
        AbElem(coords)
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<AbElem> {
        (0..self.order as usize).map(|i| self.element_at(i)).collect()
    }

    pub fn multiply(&self, a: &AbElem, b: &AbElem) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn inverse(&self, a: &AbElem) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        )
    }

    /// `a^k` in multiplicative notation.
    pub fn power(&self, a: &AbElem, k: i64) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| {
                    let k = k.rem_euclid(m as i64) as u128;
                    ((x as u128 * k) % m as u128) as u64
                })
                .collect(),
        )
    }

    pub fn element_order(&self, a: &AbElem) -> u64 {
        a.0.iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&x, &m)| lcm(acc, m / gcd(x, m)))
    }

    fn in_pi(&self, i: usize, pi: &[u64]) -> bool {
        pi.contains(&self.factor_prime(i))
    }

    /// The π-part of `a`: coordinates at primes outside `pi` are zeroed.
    pub fn part(&self, a: &AbElem, pi: &[u64]) -> AbElem {
        AbElem(
            a.0.iter()
                .enumerate()
                .map(|(i, &x)| if self.in_pi(i, pi) { x } else { 0 })
                .collect(),
        )
    }

    /// The π'-part of `a`.
    pub fn complement_part(&self, a: &AbElem, pi: &[u64]) -> AbElem {
        AbElem(
            a.0.iter()
                .enumerate()
                .map(|(i, &x)| if self.in_pi(i, pi) { 0 } else { x })
                .collect(),
        )
    }

    /// Primes of this group not in `pi`.
    pub fn complement_primes(&self, pi: &[u64]) -> Vec<u64> {
        self.primes().into_iter().filter(|p| !pi.contains(p)).collect()
    }

    /// The Hall π-subgroup `A_π` as a group in its own right.
    pub fn hall(&self, pi: &[u64]) -> FinAbGroup {
        let spec: Vec<_> = self
            .components
            .iter()
            .filter(|(p, _)| pi.contains(p))
            .cloned()
            .collect();
        FinAbGroup::new(&spec).expect("sub-spec of a valid spec")
    }

    /// Coordinates of `a` restricted to the factors at primes in `pi`,
    /// i.e. `a_π` as an element of [`Self::hall`].
    pub fn project(&self, a: &AbElem, pi: &[u64]) -> AbElem {
        AbElem(
            a.0.iter()
                .enumerate()
                .filter(|(i, _)| self.in_pi(*i, pi))
                .map(|(_, &x)| x)
                .collect(),
        )
    }

    /// Inverse of [`Self::project`]: places an element of `A_π` into `A`.
    pub fn embed(&self, b: &AbElem, pi: &[u64]) -> AbElem {
        let mut it = b.0.iter();
        AbElem(
            (0..self.moduli.len())
                .map(|i| {
                    if self.in_pi(i, pi) {
                        *it.next().expect("coordinate count matches Hall subgroup")
                    } else {
                        0
                    }
                })
                .collect(),
        )
    }

    /// Combines a π-element and a π'-element given in Hall coordinates.
    pub fn combine(&self, pi_part: &AbElem, rest: &AbElem, pi: &[u64]) -> AbElem {
        let comp = self.complement_primes(pi);
        self.multiply(&self.embed(pi_part, pi), &self.embed(rest, &comp))
    }

    /// The rational invariant `h_A`, zero exactly when `A` is cyclic.
    pub fn h_invariant(&self) -> Result<Ratio<i64>> {
        if self.is_trivial() {
            return Err(Error::InvalidGroup("h_A is undefined for the trivial group".into()));
        }
        let primes: Vec<(i64, u32)> = self
            .components
            .iter()
            .map(|(p, e)| (*p as i64, e.len() as u32))
            .collect();
        let n = primes.len();
        let mut numerator: i64 = 0;
        for mask in 1u32..(1 << n) {
            if mask.count_ones() % 2 == 0 {
                continue;
            }
            let mut term = 1i64;
            for (j, (p, k)) in primes.iter().enumerate() {
                let delta = (mask >> j) & 1;
                term *= p.pow(k - delta) - 1;
            }
            numerator += term;
        }
        let denominator: i64 = primes.iter().map(|(p, k)| (p - 1) * p.pow(k - 1)).product();
        Ok(Ratio::new(numerator, denominator))
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[AbElem]) -> Subgroup {
        let mut seen = vec![false; self.order as usize];
        let id = self.identity();
        seen[self.index_of(&id)] = true;
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let x = self.multiply(&elements[i], g);
                let ix = self.index_of(&x);
                if !seen[ix] {
                    seen[ix] = true;
                    elements.push(x);
                }
            }
            i += 1;
        }
        elements.sort();
        Subgroup {
            gens: gens.iter().filter(|g| !g.is_identity()).cloned().collect(),
            elements,
        }
    }

    /// True when `A/K` is cyclic.
    pub fn quotient_is_cyclic(&self, k: &Subgroup) -> bool {
        let index = self.order / k.order();
        if index == 1 {
            return true;
        }
        self.elements().iter().any(|g| {
            // order of gK in A/K
            let mut x = g.clone();
            let mut n = 1;
            while !k.contains(&x) {
                x = self.multiply(&x, g);
                n += 1;
            }
            n == index
        })
    }

    /// Cocyclic subgroups of a single Sylow component, by brute force over
    /// subgroups generated by at most two elements.
    fn sylow_cocyclic(&self, p: u64) -> Result<Vec<Subgroup>> {
        let ap = self.hall(&[p]);
        if ap.num_factors() > 2 {
            return Err(Error::Unsupported(format!(
                "Sylow {p}-subgroup of rank {} (cocyclic enumeration supports rank <= 2)",
                ap.num_factors()
            )));
        }
        if ap.order() > BRUTE_FORCE_SYLOW_CAP {
            return Err(Error::Unsupported(format!(
                "Sylow {p}-subgroup of order {} exceeds the brute-force cap",
                ap.order()
            )));
        }
        let elems = ap.elements();
        let mut found: BTreeSet<Vec<AbElem>> = BTreeSet::new();
        let mut out = Vec::new();
        for (i, g) in elems.iter().enumerate() {
            for h in &elems[i..] {
                let k = ap.subgroup(&[g.clone(), h.clone()]);
                if found.insert(k.elements.clone()) && ap.quotient_is_cyclic(&k) {
                    out.push(k);
                }
            }
        }
        Ok(out)
    }

    /// Lifts per-Sylow subgroups (in Hall coordinates) to their product in `A`.
    fn product_subgroup(&self, parts: &[(u64, &Subgroup)]) -> Subgroup {
        let mut elements = vec![self.identity()];
        let mut gens = Vec::new();
        for (p, sub) in parts {
            let lifted: Vec<AbElem> = sub.elements.iter().map(|x| self.embed(x, &[*p])).collect();
            gens.extend(sub.gens.iter().map(|g| self.embed(g, &[*p])));
            elements = elements
                .iter()
                .flat_map(|a| lifted.iter().map(move |b| (a, b)))
                .map(|(a, b)| self.multiply(a, b))
                .collect();
        }
        elements.sort();
        Subgroup { gens, elements }
    }

    fn cocyclic_by_prime(&self, minimal_only: bool) -> Result<Vec<Subgroup>> {
        let mut per_prime: Vec<(u64, Vec<Subgroup>)> = Vec::new();
        for p in self.primes() {
            let mut subs = self.sylow_cocyclic(p)?;
            if minimal_only {
                let all = subs.clone();
                subs.retain(|k| {
                    !all.iter()
                        .any(|l| l.order() < k.order() && l.elements.iter().all(|x| k.contains(x)))
                });
            }
            per_prime.push((p, subs));
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; per_prime.len()];
        loop {
            let parts: Vec<(u64, &Subgroup)> = per_prime
                .iter()
                .zip(&choice)
                .map(|((p, subs), &c)| (*p, &subs[c]))
                .collect();
            out.push(self.product_subgroup(&parts));
            // odometer over the per-prime choices
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort_by(|a, b| a.elements.cmp(&b.elements));
                    return Ok(out);
                }
                choice[i] += 1;
                if choice[i] < per_prime[i].1.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// All cocyclic subgroups (cyclic quotient).
    pub fn cocyclic_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.cocyclic_by_prime(false)
    }

    /// Cocyclic subgroups not properly containing another cocyclic subgroup.
    pub fn minimal_cocyclic_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.cocyclic_by_prime(true)
    }

    /// Lexicographically least element of `a·K`.
    pub fn coset_rep(&self, a: &AbElem, k: &Subgroup) -> AbElem {
        k.elements
            .iter()
            .map(|x| self.multiply(a, x))
            .min()
            .expect("subgroups are non-empty")
    }

    /// All cosets of `k`, each with its canonical representative, in order of
    /// representative.
    pub fn cosets(&self, k: &Subgroup) -> Vec<AbElem> {
        let mut seen = vec![false; self.order as usize];
        let mut reps = Vec::new();
        for idx in 0..self.order as usize {
            if seen[idx] {
                continue;
            }
            let a = self.element_at(idx);
            for x in &k.elements {
                seen[self.index_of(&self.multiply(&a, x))] = true;
            }
            reps.push(a);
        }
        reps
    }

    /// Every coset of every minimal cocyclic subgroup, each listed once.
    pub fn minimal_cocyclic_cosets(&self) -> Result<Vec<CocyclicCoset>> {
        let mut out = Vec::new();
        for k in self.minimal_cocyclic_subgroups()? {
            let k = std::sync::Arc::new(k);
            for rep in self.cosets(&k) {
                out.push(CocyclicCoset {
                    subgroup: k.clone(),
                    rep,
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, exps)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            let e: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
            write!(f, "{p}^[{}]", e.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FinAbGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FinAbGroup::parse(s)
    }
}

/// A subgroup given by generators and its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub gens: Vec<AbElem>,
    pub elements: Vec<AbElem>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, a: &AbElem) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }
}

/// A coset of a cocyclic subgroup, identified by its least element.
#[derive(Clone, Debug)]
pub struct CocyclicCoset {
    pub subgroup: std::sync::Arc<Subgroup>,
    pub rep: AbElem,
}

impl CocyclicCoset {
    pub fn contains(&self, group: &FinAbGroup, a: &AbElem) -> bool {
        let diff = group.multiply(a, &group.inverse(&self.rep));
        self.subgroup.contains(&diff)
    }

    pub fn elements(&self, group: &FinAbGroup) -> Vec<AbElem> {
        let mut v: Vec<AbElem> = self
            .subgroup
            .elements
            .iter()
            .map(|x| group.multiply(&self.rep, x))
            .collect();
        v.sort();
        v
    }
}

impl PartialEq for CocyclicCoset {
    fn eq(&self, other: &Self) -> bool {
        self.subgroup.elements == other.subgroup.elements && self.rep == other.rep
    }
}

impl Eq for CocyclicCoset {}
