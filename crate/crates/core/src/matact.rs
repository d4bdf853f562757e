//! Automorphisms of finite abelian groups as per-prime matrices, and the
//! groups they generate.
//!
//! Actions are on column vectors: `a^σ = M·a` in each Sylow block. With
//! exponential (right) notation `a^{στ} = (a^σ)^τ`, so [`AutElem::then`]
//! multiplies matrices in the order `M_τ·M_σ`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::abgroup::{AbElem, FinAbGroup};
use crate::arith::{mod_inv, mod_mul, reduce};
use crate::error::{Error, Result};

/// Largest acting group that will be materialized.
pub const MATERIALIZE_CAP: usize = 1_000_000;

/// One square matrix acting on a homocyclic Sylow component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatBlock {
    pub modulus: u64,
    pub dim: usize,
    /// Row-major entries, each in `[0, modulus)`.
    pub entries: Vec<u64>,
}

impl MatBlock {
    pub fn identity(modulus: u64, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % modulus;
        }
        MatBlock {
            modulus,
            dim,
            entries,
        }
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("matrix block is not square".into()));
        }
        Ok(MatBlock {
            modulus,
            dim,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| reduce(x, modulus)))
                .collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    /// Determinant (dimensions 1 and 2 only).
    pub fn det(&self) -> u64 {
        let m = self.modulus;
        match self.dim {
            0 => 1 % m,
            1 => self.entries[0],
            2 => {
                let ad = mod_mul(self.get(0, 0), self.get(1, 1), m);
                let bc = mod_mul(self.get(0, 1), self.get(1, 0), m);
                (ad + m - bc) % m
            }
            _ => unreachable!("blocks of dimension > 2 are rejected on construction"),
        }
    }

    pub fn is_invertible(&self) -> bool {
        mod_inv(self.det(), self.modulus).is_some()
    }

    /// `self · other`.
    pub fn mul(&self, other: &MatBlock) -> MatBlock {
        let n = self.dim;
        let m = self.modulus;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u64;
                for k in 0..n {
                    s = (s + mod_mul(self.get(i, k), other.get(k, j), m)) % m;
                }
                entries[i * n + j] = s;
            }
        }
        MatBlock {
            modulus: m,
            dim: n,
            entries,
        }
    }

    pub fn inverse(&self) -> Result<MatBlock> {
        let m = self.modulus;
        let dinv = mod_inv(self.det(), m)
            .ok_or_else(|| Error::NotInvertible(format!("determinant not a unit mod {m}")))?;
        let entries = match self.dim {
            0 => vec![],
            1 => vec![dinv],
            2 => {
                let (a, b, c, d) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
                vec![
                    mod_mul(d, dinv, m),
                    mod_mul((m - b) % m, dinv, m),
                    mod_mul((m - c) % m, dinv, m),
                    mod_mul(a, dinv, m),
                ]
            }
            _ => unreachable!(),
        };
        Ok(MatBlock {
            modulus: m,
            dim: self.dim,
            entries,
        })
    }

    fn apply_slice(&self, v: &[u64], out: &mut [u64]) {
        let m = self.modulus;
        for i in 0..self.dim {
            let mut s = 0u64;
            for j in 0..self.dim {
                s = (s + mod_mul(self.get(i, j), v[j], m)) % m;
            }
            out[i] = s;
        }
    }
}

/// An automorphism of a [`FinAbGroup`]: one matrix per Sylow component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutElem {
    pub blocks: Vec<MatBlock>,
}

fn check_supported(group: &FinAbGroup) -> Result<()> {
    for (p, exps) in group.components() {
        if exps.len() > 2 {
            return Err(Error::Unsupported(format!(
                "automorphisms of a Sylow {p}-subgroup of rank {}",
                exps.len()
            )));
        }
        if exps.iter().any(|&e| e != exps[0]) {
            return Err(Error::Unsupported(format!(
                "automorphisms of the mixed-exponent Sylow {p}-subgroup"
            )));
        }
    }
    Ok(())
}

impl AutElem {
    pub fn identity(group: &FinAbGroup) -> Self {
        AutElem {
            blocks: group
                .components()
                .iter()
                .map(|(p, e)| MatBlock::identity(p.pow(e[0]), e.len()))
                .collect(),
        }
    }

    /// Validates `blocks` against `group`.
    pub fn new(group: &FinAbGroup, blocks: Vec<MatBlock>) -> Result<Self> {
        check_supported(group)?;
        if blocks.len() != group.components().len() {
            return Err(Error::Dimension(format!(
                "{} blocks for {} Sylow components",
                blocks.len(),
                group.components().len()
            )));
        }
        for (b, (p, e)) in blocks.iter().zip(group.components()) {
            if b.dim != e.len() || b.modulus != p.pow(e[0]) || b.entries.len() != b.dim * b.dim {
                return Err(Error::Dimension(format!(
                    "block for prime {p} has the wrong shape or modulus"
                )));
            }
            if !b.is_invertible() {
                return Err(Error::NotInvertible(format!("block for prime {p}")));
            }
        }
        Ok(AutElem { blocks })
    }

    /// Builds an automorphism from signed row-major matrices, one per component.
    pub fn from_matrices(group: &FinAbGroup, mats: &[Vec<Vec<i64>>]) -> Result<Self> {
        let blocks = mats
            .iter()
            .zip(group.components())
            .map(|(rows, (p, e))| MatBlock::from_rows(p.pow(e[0]), rows))
            .collect::<Result<Vec<_>>>()?;
        if mats.len() != group.components().len() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} Sylow components",
                mats.len(),
                group.components().len()
            )));
        }
        AutElem::new(group, blocks)
    }

    pub fn is_identity(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| *b == MatBlock::identity(b.modulus, b.dim))
    }

    /// `a^σ`, panicking on a coordinate-count mismatch.
    pub fn apply(&self, a: &AbElem) -> AbElem {
        let mut out = vec![0u64; a.0.len()];
        let mut off = 0;
        for b in &self.blocks {
            b.apply_slice(&a.0[off..off + b.dim], &mut out[off..off + b.dim]);
            off += b.dim;
        }
        AbElem(out)
    }

    pub fn try_apply(&self, a: &AbElem) -> Result<AbElem> {
        let dim: usize = self.blocks.iter().map(|b| b.dim).sum();
        if a.0.len() != dim {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, automorphism acts on {dim}",
                a.0.len()
            )));
        }
        Ok(self.apply(a))
    }

    /// `στ`: first `self`, then `other`.
    pub fn then(&self, other: &AutElem) -> AutElem {
        AutElem {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(s, t)| t.mul(s))
                .collect(),
        }
    }

    pub fn inverse(&self) -> AutElem {
        AutElem {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.inverse().expect("automorphism blocks are invertible"))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> AutElem {
        let mut base = self.clone();
        let mut acc = AutElem {
            blocks: self
                .blocks
                .iter()
                .map(|b| MatBlock::identity(b.modulus, b.dim))
                .collect(),
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut n = 1;
        while !x.is_identity() {
            x = x.then(self);
            n += 1;
        }
        n
    }

    /// The block-projection onto the Hall π-subgroup.
    pub fn restrict(&self, group: &FinAbGroup, pi: &[u64]) -> AutElem {
        AutElem {
            blocks: self
                .blocks
                .iter()
                .zip(group.components())
                .filter(|(_, (p, _))| pi.contains(p))
                .map(|(b, _)| b.clone())
                .collect(),
        }
    }

    /// Places per-Hall-subgroup automorphisms side by side.
    pub fn direct_sum(group: &FinAbGroup, parts: &[(&[u64], &AutElem)]) -> Result<AutElem> {
        let mut blocks = Vec::new();
        for (p, _) in group.components() {
            let (pi, sigma) = parts
                .iter()
                .find(|(pi, _)| pi.contains(p))
                .ok_or_else(|| Error::Dimension(format!("no block supplied for prime {p}")))?;
            let mut present: Vec<u64> =
                group.primes().into_iter().filter(|q| pi.contains(q)).collect();
            present.sort_unstable();
            let idx = present.iter().position(|q| q == p).expect("prime present");
            blocks.push(sigma.blocks[idx].clone());
        }
        AutElem::new(group, blocks)
    }
}

impl fmt::Display for AutElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "[")?;
            for r in 0..b.dim {
                if r > 0 {
                    write!(f, ";")?;
                }
                let row: Vec<String> = (0..b.dim).map(|c| b.get(r, c).to_string()).collect();
                write!(f, "{}", row.join(","))?;
            }
            write!(f, "]_{}", b.modulus)?;
        }
        Ok(())
    }
}

/// An orbit of an acting group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionClass {
    pub rep: AbElem,
    pub members: Vec<AbElem>,
    pub stabilizer_order: u64,
}

impl ActionClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: &AbElem) -> bool {
        self.members.binary_search(a).is_ok()
    }
}

#[derive(Serialize, Deserialize)]
struct AutGroupJson {
    ambient: FinAbGroup,
    generators: Vec<AutElem>,
    label: Option<String>,
}

struct Materialized {
    elements: Vec<AutElem>,
    index: HashMap<AutElem, usize>,
}

/// A finite group of automorphisms given by generators.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "AutGroupJson", into = "AutGroupJson")]
pub struct AutGroup {
    ambient: FinAbGroup,
    generators: Vec<AutElem>,
    label: Option<String>,
    elements: Arc<OnceLock<std::result::Result<Arc<Materialized>, usize>>>,
    perms: Arc<OnceLock<Vec<Vec<u32>>>>,
}

impl fmt::Debug for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AutGroup")
            .field("ambient", &self.ambient.to_string())
            .field("generators", &self.generators.len())
            .field("label", &self.label)
            .finish()
    }
}

impl TryFrom<AutGroupJson> for AutGroup {
    type Error = Error;
    fn try_from(j: AutGroupJson) -> Result<Self> {
        for g in &j.generators {
            AutElem::new(&j.ambient, g.blocks.clone())?;
        }
        let mut g = AutGroup::new(j.ambient, j.generators)?;
        g.label = j.label;
        Ok(g)
    }
}

impl From<AutGroup> for AutGroupJson {
    fn from(g: AutGroup) -> Self {
        AutGroupJson {
            ambient: g.ambient,
            generators: g.generators,
            label: g.label,
        }
    }
}

impl AutGroup {
    pub fn new(ambient: FinAbGroup, generators: Vec<AutElem>) -> Result<Self> {
        check_supported(&ambient)?;
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(AutGroup {
            ambient,
            generators,
            label: None,
            elements: Arc::new(OnceLock::new()),
            perms: Arc::new(OnceLock::new()),
        })
    }

    pub fn trivial(ambient: FinAbGroup) -> Result<Self> {
        AutGroup::new(ambient, vec![])
    }

    /// `Aut(A)`, generated per Sylow block by transvections and `diag(u, 1)`
    /// for unit generators `u`.
    pub fn full(ambient: FinAbGroup) -> Result<Self> {
        check_supported(&ambient)?;
        let comps = ambient.components().to_vec();
        let mut gens = Vec::new();
        for (ci, (p, exps)) in comps.iter().enumerate() {
            let m = p.pow(exps[0]);
            let dim = exps.len();
            let mut local: Vec<MatBlock> = Vec::new();
            for u in unit_group_generators(*p, exps[0]) {
                let mut b = MatBlock::identity(m, dim);
                b.entries[0] = u;
                local.push(b);
            }
            if dim == 2 {
                local.push(MatBlock {
                    modulus: m,
                    dim,
                    entries: vec![1, 1, 0, 1],
                });
                local.push(MatBlock {
                    modulus: m,
                    dim,
                    entries: vec![1, 0, 1, 1],
                });
            }
            for b in local {
                let mut blocks = AutElem::identity(&ambient).blocks;
                blocks[ci] = b;
                gens.push(AutElem { blocks });
            }
        }
        Ok(AutGroup::new(ambient, gens)?.with_label("Aut"))
    }

    /// Builds a group whose element list is already known (and closed).
    pub fn from_elements(ambient: FinAbGroup, mut elements: Vec<AutElem>) -> Result<Self> {
        check_supported(&ambient)?;
        elements.sort();
        elements.dedup();
        let index: HashMap<AutElem, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let generators = greedy_generators(&elements, &index);
        let g = AutGroup {
            ambient,
            generators,
            label: None,
            elements: Arc::new(OnceLock::new()),
            perms: Arc::new(OnceLock::new()),
        };
        let _ = g.elements.set(Ok(Arc::new(Materialized { elements, index })));
        Ok(g)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[AutElem] {
        &self.generators
    }

    fn materialized(&self) -> Result<Arc<Materialized>> {
        let r = self.elements.get_or_init(|| {
            let id = AutElem::identity(&self.ambient);
            let mut index = HashMap::new();
            index.insert(id.clone(), 0usize);
            let mut elements = vec![id];
            let mut i = 0;
            while i < elements.len() {
                for g in &self.generators {
                    let x = elements[i].then(g);
                    if !index.contains_key(&x) {
                        if elements.len() >= MATERIALIZE_CAP {
                            return Err(MATERIALIZE_CAP);
                        }
                        index.insert(x.clone(), elements.len());
                        elements.push(x);
                    }
                }
                i += 1;
            }
            elements.sort();
            let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            Ok(Arc::new(Materialized { elements, index }))
        });
        r.clone().map_err(Error::TooLarge)
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Result<Vec<AutElem>> {
        Ok(self.materialized()?.elements.clone())
    }

    pub fn for_each_element(&self, mut f: impl FnMut(&AutElem)) -> Result<()> {
        for e in &self.materialized()?.elements {
            f(e);
        }
        Ok(())
    }

    pub fn order(&self) -> Result<u64> {
        Ok(self.materialized()?.elements.len() as u64)
    }

    pub fn contains(&self, sigma: &AutElem) -> Result<bool> {
        Ok(self.materialized()?.index.contains_key(sigma))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.then(b) == b.then(a))
        })
    }

    /// Permutation images of each generator on the element indices of `A`.
    fn generator_perms(&self) -> &Vec<Vec<u32>> {
        self.perms.get_or_init(|| {
            let n = self.ambient.order() as usize;
            self.generators
                .iter()
                .map(|g| {
                    (0..n)
                        .map(|i| {
                            let a = self.ambient.element_at(i);
                            self.ambient.index_of(&g.apply(&a)) as u32
                        })
                        .collect()
                })
                .collect()
        })
    }

    fn orbit_indices(&self, start: usize, seen: &mut [bool]) -> Vec<usize> {
        let perms = self.generator_perms();
        let mut orbit = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for p in perms {
                let j = p[i] as usize;
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    queue.push_back(j);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// The orbit `a^H`, sorted.
    pub fn orbit(&self, a: &AbElem) -> Vec<AbElem> {
        let mut seen = vec![false; self.ambient.order() as usize];
        self.orbit_indices(self.ambient.index_of(a), &mut seen)
            .into_iter()
            .map(|i| self.ambient.element_at(i))
            .collect()
    }

    /// Partition of the orbits meeting `subset` (all of `A` when `None`),
    /// ordered by least member.
    pub fn orbits(&self, subset: Option<&[AbElem]>) -> Result<Vec<ActionClass>> {
        let order = self.order()?;
        let n = self.ambient.order() as usize;
        let mut seen = vec![false; n];
        let starts: Vec<usize> = match subset {
            Some(s) => {
                let mut v: Vec<usize> = s.iter().map(|a| self.ambient.index_of(a)).collect();
                v.sort_unstable();
                v
            }
            None => (0..n).collect(),
        };
        let mut out = Vec::new();
        for i in starts {
            if seen[i] {
                continue;
            }
            let orbit = self.orbit_indices(i, &mut seen);
            let members: Vec<AbElem> = orbit.iter().map(|&j| self.ambient.element_at(j)).collect();
            out.push(ActionClass {
                rep: members[0].clone(),
                stabilizer_order: order / members.len() as u64,
                members,
            });
        }
        Ok(out)
    }

    /// `|C_H(a)|`, via orbit-stabilizer.
    pub fn stabilizer_order(&self, a: &AbElem) -> Result<u64> {
        Ok(self.order()? / self.orbit(a).len() as u64)
    }

    /// `C_H(a)`.
    pub fn stabilizer(&self, a: &AbElem) -> Result<AutGroup> {
        self.pointwise_stabilizer(std::slice::from_ref(a))
    }

    /// Elements fixing every member of `set`.
    pub fn pointwise_stabilizer(&self, set: &[AbElem]) -> Result<AutGroup> {
        let els: Vec<AutElem> = self
            .materialized()?
            .elements
            .iter()
            .filter(|s| set.iter().all(|a| s.apply(a) == *a))
            .cloned()
            .collect();
        AutGroup::from_elements(self.ambient.clone(), els)
    }

    /// Elements mapping `set` onto itself.
    pub fn setwise_stabilizer(&self, set: &[AbElem]) -> Result<AutGroup> {
        let members: HashSet<&AbElem> = set.iter().collect();
        let els: Vec<AutElem> = self
            .materialized()?
            .elements
            .iter()
            .filter(|s| set.iter().all(|a| members.contains(&s.apply(a))))
            .cloned()
            .collect();
        AutGroup::from_elements(self.ambient.clone(), els)
    }

    /// The subgroup generated by `gens` (each assumed to lie in this group).
    pub fn subgroup(&self, gens: Vec<AutElem>) -> Result<AutGroup> {
        AutGroup::new(self.ambient.clone(), gens)
    }

    /// The restriction image on `A_π`.
    pub fn inn_image(&self, pi: &[u64]) -> Result<AutGroup> {
        let hall = self.ambient.hall(pi);
        let gens = self
            .generators
            .iter()
            .map(|g| g.restrict(&self.ambient, pi))
            .collect();
        let mut g = AutGroup::new(hall, gens)?;
        g.label = self.label.as_ref().map(|l| format!("{l}|{pi:?}"));
        Ok(g)
    }

    /// The local class `ℓ_H(a)`, sorted.
    pub fn local_class(&self, a: &AbElem) -> Vec<AbElem> {
        let mut acc: Vec<AbElem> = vec![self.ambient.identity()];
        for p in self.ambient.primes() {
            let ap = self.ambient.part(a, &[p]);
            let orb = self.orbit(&ap);
            acc = acc
                .iter()
                .flat_map(|x| orb.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.ambient.multiply(x, y))
                .collect();
        }
        acc.sort();
        acc
    }

    /// All local classes of `A`, ordered by least member.
    pub fn local_classes(&self) -> Vec<Vec<AbElem>> {
        let n = self.ambient.order() as usize;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let cls = self.local_class(&self.ambient.element_at(i));
            for x in &cls {
                seen[self.ambient.index_of(x)] = true;
            }
            out.push(cls);
        }
        out
    }
}

/// Generators of the unit group mod `p^e`.
pub fn unit_group_generators(p: u64, e: u32) -> Vec<u64> {
    let m = p.pow(e);
    if p == 2 {
        return match e {
            1 => vec![],
            2 => vec![3],
            _ => vec![m - 1, 5],
        };
    }
    let g = crate::arith::primitive_root(p);
    // a primitive root mod p lifts to one mod p^e unless g^{p-1} ≡ 1 mod p²
    let g = if e > 1 && crate::arith::mod_pow(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    };
    vec![g % m]
}

/// A small generating set: scan elements in order, keep those outside the
/// subgroup generated so far.
fn greedy_generators(elements: &[AutElem], index: &HashMap<AutElem, usize>) -> Vec<AutElem> {
    let n = elements.len();
    let mut in_closure = vec![false; n];
    let mut closure: Vec<usize> = Vec::new();
    if let Some(id) = elements.iter().position(|e| e.is_identity()) {
        in_closure[id] = true;
        closure.push(id);
    }
    let mut gens: Vec<AutElem> = Vec::new();
    for cand in 0..n {
        if in_closure[cand] {
            continue;
        }
        gens.push(elements[cand].clone());
        in_closure[cand] = true;
        closure.push(cand);
        let mut queue: VecDeque<usize> = closure.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let iy = index[&elements[x].then(g)];
                if !in_closure[iy] {
                    in_closure[iy] = true;
                    closure.push(iy);
                    queue.push_back(iy);
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(q: u64) -> FinAbGroup {
        FinAbGroup::elementary_rank2(q).unwrap()
    }

    fn mat(g: &FinAbGroup, rows: [[i64; 2]; 2]) -> AutElem {
        AutElem::from_matrices(g, &[vec![rows[0].to_vec(), rows[1].to_vec()]]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let a = f2(7);
        let x = AbElem(vec![1, 0]);
        assert_eq!(AutElem::identity(&a).apply(&x), x);
        let s = mat(&a, [[0, 1], [-1, 1]]);
        assert_eq!(s.apply(&x), AbElem(vec![0, 6]));
        assert!(s.try_apply(&AbElem(vec![1])).is_err());
    }

    #[test]
    fn composition_is_a_right_action() {
        let a = f2(5);
        let s = mat(&a, [[1, 2], [0, 1]]);
        let t = mat(&a, [[0, 1], [1, 3]]);
        for x in a.elements() {
            assert_eq!(s.then(&t).apply(&x), t.apply(&s.apply(&x)));
            assert_eq!(s.then(&s.inverse()).apply(&x), x);
        }
    }

    #[test]
    fn singer_sixteen_orbits() {
        // multiplication by -2α-3 where α² = α - 3 over F_7
        let a = f2(7);
        let beta = mat(&a, [[4, 6], [5, 2]]);
        assert_eq!(beta.order(), 16);
        let x = AbElem(vec![1, 0]);
        assert_eq!(beta.pow(16).apply(&x), x);
        let h = AutGroup::new(a.clone(), vec![beta]).unwrap();
        let nonzero: Vec<AbElem> = a.elements().into_iter().skip(1).collect();
        let orbs = h.orbits(Some(&nonzero)).unwrap();
        assert_eq!(orbs.len(), 3);
        assert!(orbs.iter().all(|o| o.size() == 16 && o.stabilizer_order == 1));
    }

    #[test]
    fn k1_orbits_on_f5() {
        let a = f2(5);
        let h = AutGroup::new(a.clone(), vec![mat(&a, [[0, 1], [-1, 1]])]).unwrap();
        assert_eq!(h.order().unwrap(), 6);
        let nonzero: Vec<AbElem> = a.elements().into_iter().skip(1).collect();
        let orbs = h.orbits(Some(&nonzero)).unwrap();
        assert_eq!(orbs.len(), 4);
        assert_eq!(orbs.iter().map(|o| o.size()).sum::<usize>(), 24);
    }

    #[test]
    fn trivial_group_orbits_are_points() {
        let a = f2(3);
        let h = AutGroup::trivial(a.clone()).unwrap();
        let orbs = h.orbits(None).unwrap();
        assert_eq!(orbs.len(), 9);
        assert_eq!(h.local_class(&AbElem(vec![1, 2])), vec![AbElem(vec![1, 2])]);
    }

    fn full_gl2(a: &FinAbGroup, q: i64) -> AutGroup {
        let g = AutGroup::new(
            a.clone(),
            vec![mat(a, [[1, 1], [0, 1]]), mat(a, [[0, 1], [1, 0]]), {
                let r = crate::arith::primitive_root(q as u64) as i64;
                mat(a, [[r, 0], [0, 1]])
            }],
        )
        .unwrap();
        g
    }

    #[test]
    fn local_class_under_full_gl2() {
        let a = f2(7);
        let g = full_gl2(&a, 7);
        assert_eq!(g.order().unwrap(), 48 * 42);
        assert_eq!(g.local_class(&AbElem(vec![3, 5])).len(), 48);
        assert_eq!(g.local_classes().len(), 2);
    }

    #[test]
    fn local_class_on_c91_squared() {
        let n = FinAbGroup::parse("7^[1,1]x13^[1,1]").unwrap();
        let g7 = full_gl2(&f2(7), 7);
        let g13 = full_gl2(&f2(13), 13);
        let id7 = AutElem::identity(&f2(7));
        let id13 = AutElem::identity(&f2(13));
        let mut gens = Vec::new();
        for s in g7.generators() {
            gens.push(AutElem::direct_sum(&n, &[(&[7], s), (&[13], &id13)]).unwrap());
        }
        for t in g13.generators() {
            gens.push(AutElem::direct_sum(&n, &[(&[7], &id7), (&[13], t)]).unwrap());
        }
        let g = AutGroup::new(n.clone(), gens).unwrap();
        let a = AbElem(vec![1, 0, 1, 0]);
        assert_eq!(n.element_order(&a), 91);
        let cls = g.local_class(&a);
        let oracle: Vec<AbElem> = n
            .elements()
            .into_iter()
            .filter(|x| n.element_order(x) == 91)
            .collect();
        assert_eq!(cls, oracle);
    }

    #[test]
    fn stabilizers_and_restriction() {
        let a = f2(5);
        let g = full_gl2(&a, 5);
        let id = a.identity();
        assert_eq!(g.stabilizer(&id).unwrap().order().unwrap(), 480);
        let x = AbElem(vec![1, 2]);
        let st = g.stabilizer(&x).unwrap();
        assert_eq!(st.order().unwrap() * g.orbit(&x).len() as u64, 480);
        for s in st.elements().unwrap() {
            assert_eq!(s.apply(&x), x);
        }

        let n = FinAbGroup::parse("7^[1,1]x13^[1,1]").unwrap();
        let m7 = mat(&f2(7), [[0, 1], [-1, 1]]);
        let m13 = mat(&f2(13), [[2, 0], [0, 5]]);
        let s = AutElem::direct_sum(&n, &[(&[7], &m7), (&[13], &m13)]).unwrap();
        assert_eq!(s.restrict(&n, &[7]), m7);
        assert_eq!(s.restrict(&n, &[13]), m13);
        let t = s.pow(5).then(&s.inverse());
        assert_eq!(
            s.then(&t).restrict(&n, &[7]),
            s.restrict(&n, &[7]).then(&t.restrict(&n, &[7]))
        );
    }

    #[test]
    fn from_elements_regenerates() {
        let a = f2(5);
        let g = full_gl2(&a, 5);
        let els = g.elements().unwrap();
        let h = AutGroup::from_elements(a.clone(), els.clone()).unwrap();
        let h2 = AutGroup::new(a, h.generators().to_vec()).unwrap();
        assert_eq!(h2.elements().unwrap(), els);
    }

    #[test]
    fn json_round_trip() {
        let a = f2(7);
        let g = AutGroup::new(a.clone(), vec![mat(&a, [[4, 6], [5, 2]])])
            .unwrap()
            .with_label("C16");
        let s = serde_json::to_string(&g).unwrap();
        let back: AutGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back.order().unwrap(), 16);
        assert_eq!(back.label(), Some("C16"));
    }

    #[test]
    fn full_automorphism_groups() {
        let order = |s: &str| AutGroup::full(FinAbGroup::parse(s).unwrap()).unwrap().order().unwrap();
        assert_eq!(order("2^[1,1]"), 6);
        assert_eq!(order("3^[1,1]"), 48);
        assert_eq!(order("5^[1,1]"), 480);
        assert_eq!(order("2^[3]"), 4);
        assert_eq!(order("3^[2]"), 6);
        assert_eq!(order("5^[1,1]x3^[1]"), 960);
        // |GL(2, Z/4)| = 96
        assert_eq!(order("2^[2,2]"), 96);
    }

    #[test]
    fn rejects_mixed_exponents() {
        let a = FinAbGroup::parse("2^[2,1]").unwrap();
        assert!(matches!(AutGroup::trivial(a), Err(Error::Unsupported(_))));
    }
}
