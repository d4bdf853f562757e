//! Small finite groups given by multiplication tables, and enumeration of
//! their subgroups up to conjugacy.
//!
//! A group is a direct product of table factors, so `GL(2,q) × U(r)` never
//! needs a full `n × n` table. Subgroup classes are found by repeatedly
//! joining a class representative with one more element; joins that are
//! provably equal or conjugate to one already tried are skipped.

use std::collections::HashMap;

/// One factor: `n` elements with identity 0.
#[derive(Clone, Debug)]
pub struct TableFactor {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl TableFactor {
    /// `mul(i, j)` must be a group law on `0..n` with identity 0.
    pub fn new(n: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = mul(i, j) as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = (0..n).find(|&j| table[i * n + j] == 0).expect("group law") as u32;
        }
        TableFactor { n, table, inv }
    }
}

/// A direct product of table factors; element `x` has mixed-radix digits,
/// first factor most significant.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    factors: Vec<TableFactor>,
    n: usize,
}

/// A subgroup as a bitset plus a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRec {
    pub bits: Vec<u64>,
    pub gens: Vec<u32>,
    pub order: usize,
}

impl SubgroupRec {
    pub fn contains(&self, x: u32) -> bool {
        self.bits[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.order);
        for (w, &word) in self.bits.iter().enumerate() {
            let mut b = word;
            while b != 0 {
                let t = b.trailing_zeros();
                out.push((w * 64) as u32 + t);
                b &= b - 1;
            }
        }
        out
    }
}

/// A conjugacy class of subgroups: a representative and the class size.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: SubgroupRec,
    pub class_size: usize,
}

impl FiniteGroup {
    pub fn new(factors: Vec<TableFactor>) -> Self {
        let n = factors.iter().map(|f| f.n).product();
        FiniteGroup { factors, n }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> u32 {
        0
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            d[k] = x % f.n;
            x /= f.n;
        }
        d
    }

    pub fn split(&self, x: u32) -> Vec<usize> {
        self.digits(x as usize)
    }

    pub fn join_digits(&self, d: &[usize]) -> u32 {
        let mut x = 0usize;
        for (k, f) in self.factors.iter().enumerate() {
            x = x * f.n + d[k];
        }
        x as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.factors.len() == 1 {
            let f = &self.factors[0];
            return f.table[a as usize * f.n + b as usize];
        }
        let (mut a, mut b) = (a as usize, b as usize);
        let mut out = 0usize;
        let mut scale = 1usize;
        for f in self.factors.iter().rev() {
            let (da, db) = (a % f.n, b % f.n);
            a /= f.n;
            b /= f.n;
            out += f.table[da * f.n + db] as usize * scale;
            scale *= f.n;
        }
        out as u32
    }

    pub fn inv(&self, a: u32) -> u32 {
        if self.factors.len() == 1 {
            return self.factors[0].inv[a as usize];
        }
        let d = self.digits(a as usize);
        let d: Vec<usize> = d
            .iter()
            .zip(&self.factors)
            .map(|(&x, f)| f.inv[x] as usize)
            .collect();
        self.join_digits(&d)
    }

    /// `x^g = g⁻¹ x g`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn empty_bits(&self) -> Vec<u64> {
        vec![0; self.n.div_ceil(64)]
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> SubgroupRec {
        let mut bits = self.empty_bits();
        bits[0] |= 1;
        let mut elems = vec![0u32];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = self.mul(elems[i], g);
                let (w, b) = (y as usize / 64, y % 64);
                if bits[w] >> b & 1 == 0 {
                    bits[w] |= 1 << b;
                    elems.push(y);
                }
            }
            i += 1;
        }
        SubgroupRec {
            bits,
            gens: gens.iter().copied().filter(|&g| g != 0).collect(),
            order: elems.len(),
        }
    }

    fn conjugate_bits(&self, h: &SubgroupRec, g: u32) -> Vec<u64> {
        let mut bits = self.empty_bits();
        for x in h.elements() {
            let y = self.conj(x, g);
            bits[y as usize / 64] |= 1 << (y % 64);
        }
        bits
    }

    /// `N_G(H)` as a sorted element list.
    pub fn normalizer(&self, h: &SubgroupRec) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&g| h.gens.iter().all(|&x| h.contains(self.conj(x, g))))
            .collect()
    }

    /// Whether `a^g = b` for some `g`.
    pub fn are_conjugate(&self, a: &SubgroupRec, b: &SubgroupRec) -> bool {
        a.order == b.order
            && (0..self.n as u32).any(|g| a.gens.iter().all(|&x| b.contains(self.conj(x, g))))
    }

    /// Records a new class and every conjugate of its representative.
    fn register(
        &self,
        k: SubgroupRec,
        reps: &mut Vec<SubgroupRec>,
        sizes: &mut Vec<usize>,
        seen: &mut HashMap<Vec<u64>, usize>,
    ) {
        let idx = reps.len();
        let norm = self.normalizer(&k);
        let mut done = self.empty_bits();
        let mut count = 0;
        for g in 0..self.n as u32 {
            if done[g as usize / 64] >> (g % 64) & 1 == 1 {
                continue;
            }
            for &m in &norm {
                let y = self.mul(m, g);
                done[y as usize / 64] |= 1 << (y % 64);
            }
            seen.insert(self.conjugate_bits(&k, g), idx);
            count += 1;
        }
        reps.push(k);
        sizes.push(count);
    }

    /// Every subgroup, up to conjugacy, ordered by (order, discovery).
    pub fn subgroup_classes(&self) -> Vec<SubgroupClass> {
        let mut reps: Vec<SubgroupRec> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();

        self.register(self.closure(&[]), &mut reps, &mut sizes, &mut seen);
        let mut idx = 0;
        while idx < reps.len() {
            let h = reps[idx].clone();
            let norm = self.normalizer(&h);
            let mut covered = h.bits.clone();
            for g in 0..self.n as u32 {
                if covered[g as usize / 64] >> (g % 64) & 1 == 1 {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(g);
                let k = self.closure(&gens);
                // ⟨H, t⟩ = ⟨H, g⟩ up to N(H)-conjugacy for t = (g^e)^n, e coprime
                // to the order of g; the covered set stays a union of cosets Ht.
                let o = self.element_order(g);
                let mut t_set = self.empty_bits();
                let mut power = g;
                for e in 1..=o {
                    if crate::arith::gcd(e as u64, o as u64) == 1 {
                        for &m in &norm {
                            let t = self.conj(power, m);
                            t_set[t as usize / 64] |= 1 << (t % 64);
                        }
                    }
                    power = self.mul(power, g);
                }
                let hs = h.elements();
                for (w, &word) in t_set.iter().enumerate() {
                    let mut b = word;
                    while b != 0 {
                        let t = (w * 64) as u32 + b.trailing_zeros();
                        b &= b - 1;
                        if covered[t as usize / 64] >> (t % 64) & 1 == 1 {
                            continue;
                        }
                        for &x in &hs {
                            let y = self.mul(x, t);
                            covered[y as usize / 64] |= 1 << (y % 64);
                        }
                    }
                }
                if !seen.contains_key(&k.bits) {
                    self.register(k, &mut reps, &mut sizes, &mut seen);
                }
            }
            idx += 1;
        }
        let mut out: Vec<SubgroupClass> = reps
            .into_iter()
            .zip(sizes)
            .map(|(rep, class_size)| SubgroupClass { rep, class_size })
            .collect();
        out.sort_by_key(|c| c.rep.order);
        out
    }

    /// Oracle: every subgroup, found by joining each known subgroup with
    /// every element (no skipping), then grouped into conjugacy classes by
    /// direct testing.
    pub fn brute_force_classes(&self) -> Vec<SubgroupRec> {
        let mut all: HashMap<Vec<u64>, SubgroupRec> = HashMap::new();
        let triv = self.closure(&[]);
        let mut queue = vec![triv.clone()];
        all.insert(triv.bits.clone(), triv);
        while let Some(h) = queue.pop() {
            for g in 0..self.n as u32 {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if !all.contains_key(&k.bits) {
                    all.insert(k.bits.clone(), k.clone());
                    queue.push(k);
                }
            }
        }
        let mut subs: Vec<SubgroupRec> = all.into_values().collect();
        subs.sort_by(|x, y| (x.order, &x.bits).cmp(&(y.order, &y.bits)));
        let mut reps: Vec<SubgroupRec> = Vec::new();
        for s in subs {
            if !reps.iter().any(|r| self.are_conjugate(r, &s)) {
                reps.push(s);
            }
        }
        reps
    }

    pub fn is_abelian(&self, h: &SubgroupRec) -> bool {
        h.gens.iter().enumerate().all(|(i, &a)| {
            h.gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Element-order histogram of `h`, as sorted `(order, count)` pairs.
    pub fn order_histogram(&self, h: &SubgroupRec) -> Vec<(usize, usize)> {
        let mut m: HashMap<usize, usize> = HashMap::new();
        for x in h.elements() {
            *m.entry(self.element_order(x)).or_default() += 1;
        }
        let mut v: Vec<(usize, usize)> = m.into_iter().collect();
        v.sort_unstable();
        v
    }
}

/// The cyclic group of order `n` as a table factor.
pub fn cyclic_factor(n: usize) -> TableFactor {
    TableFactor::new(n, |i, j| (i + j) % n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        // permutations of {0,1,2}, identity first
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let ps = perms.clone();
        FiniteGroup::new(vec![TableFactor::new(6, move |i, j| {
            let (a, b) = (ps[i], ps[j]);
            idx([b[a[0]], b[a[1]], b[a[2]]])
        })])
    }

    #[test]
    fn s3_has_four_classes() {
        let g = s3();
        let cls = g.subgroup_classes();
        assert_eq!(cls.len(), 4);
        let orders: Vec<usize> = cls.iter().map(|c| c.rep.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(cls.iter().map(|c| c.class_size).sum::<usize>(), 6);
        assert_eq!(g.brute_force_classes().len(), 4);
    }

    #[test]
    fn cyclic_products() {
        // C2 x C4 has 8 subgroups, all normal
        let g = FiniteGroup::new(vec![cyclic_factor(2), cyclic_factor(4)]);
        let cls = g.subgroup_classes();
        assert_eq!(cls.len(), 8);
        assert!(cls.iter().all(|c| c.class_size == 1));
        assert!(cls.iter().all(|c| g.is_abelian(&c.rep)));
    }
}
