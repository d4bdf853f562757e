//! The constraint sets `E(G, H, A)` and an exact enumerator for their
//! integer points.
//!
//! A system has one variable per `H`-class inside a single local `G`-class,
//! the sum condition, one cone row per distinct minimal-cocyclic-coset
//! inequality, and per-variable lower bounds. Enumeration is a depth-first
//! branch-and-prune; ranges are tightened by exact LP bounds while enough
//! variables remain free.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::abgroup::{AbElem, FinAbGroup};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::lp::{Cmp, Lp, LpResult};
use crate::matact::{ActionClass, AutElem, AutGroup, MatBlock};

/// Largest box the brute-force oracle will scan.
pub const BRUTE_FORCE_CAP: u128 = 200_000_000;

/// LP tightening is used while at least this many variables are unassigned.
const LP_MIN_FREE: usize = 3;

/// `Σ x = sum`, `row · x ≥ 0` for every row, `lower ≤ x ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub sum: i64,
    pub rows: Vec<Vec<i64>>,
    pub lower: Vec<i64>,
    pub upper: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub lp: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { lp: true }
    }
}

impl LinearSystem {
    pub fn nvars(&self) -> usize {
        self.lower.len()
    }

    /// Upper end of each variable's box `[lb_i, sum − Σ_{j≠i} lb_j]`,
    /// clipped by explicit caps.
    pub fn box_upper(&self) -> Vec<i64> {
        let total: i64 = self.lower.iter().sum();
        (0..self.nvars())
            .map(|i| {
                let u = self.sum - (total - self.lower[i]);
                match &self.upper {
                    Some(up) => u.min(up[i]),
                    None => u,
                }
            })
            .collect()
    }

    /// Number of points scanned by [`Self::brute_force`] (the last variable
    /// is determined by the sum).
    pub fn box_volume(&self) -> u128 {
        let ub = self.box_upper();
        let n = self.nvars();
        if n == 0 {
            return 1;
        }
        let mut v: u128 = 1;
        for i in 0..n - 1 {
            let w = (ub[i] - self.lower[i] + 1).max(0) as u128;
            v = v.saturating_mul(w);
        }
        v
    }

    pub fn satisfies(&self, x: &[i64]) -> bool {
        x.len() == self.nvars()
            && x.iter().sum::<i64>() == self.sum
            && x.iter().zip(&self.lower).all(|(a, l)| a >= l)
            && self
                .upper
                .as_ref()
                .map_or(true, |u| x.iter().zip(u).all(|(a, b)| a <= b))
            && self
                .rows
                .iter()
                .all(|r| r.iter().zip(x).map(|(c, v)| c * v).sum::<i64>() >= 0)
    }

    /// Every integer point, lexicographically sorted.
    pub fn enumerate(&self, opts: EnumOptions) -> Vec<Vec<i64>> {
        let n = self.nvars();
        if n == 0 {
            return if self.sum == 0 { vec![vec![]] } else { vec![] };
        }
        let ub = self.box_upper();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (ub[i] - self.lower[i], i));
        let search = Search::new(self, order, ub, opts);
        let mut out = search.run();
        out.sort();
        out
    }

    /// Full box scan; the oracle for [`Self::enumerate`].
    pub fn brute_force(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.nvars();
        if n == 0 {
            return Ok(if self.sum == 0 { vec![vec![]] } else { vec![] });
        }
        let vol = self.box_volume();
        if vol > BRUTE_FORCE_CAP {
            return Err(Error::TooLarge(vol.min(usize::MAX as u128) as usize));
        }
        let ub = self.box_upper();
        let mut out = Vec::new();
        let mut x = self.lower.clone();
        loop {
            let partial: i64 = x[..n - 1].iter().sum();
            x[n - 1] = self.sum - partial;
            if x[n - 1] >= self.lower[n - 1] && x[n - 1] <= ub[n - 1] && self.satisfies(&x) {
                out.push(x.clone());
            }
            // odometer over the first n-1 coordinates, last digit fastest
            let mut i = n - 1;
            loop {
                if i == 0 {
                    out.sort();
                    return Ok(out);
                }
                i -= 1;
                if x[i] < ub[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = self.lower[i];
            }
        }
    }
}

struct Search<'a> {
    sys: &'a LinearSystem,
    order: Vec<usize>,
    ub: Vec<i64>,
    opts: EnumOptions,
    /// `suffix_lb[L]` = Σ_{k ≥ L} lb of `order[k]`.
    suffix_lb: Vec<i64>,
    suffix_ub: Vec<i64>,
    /// Per row: Σ_{k ≥ L} r·lb and max_{k ≥ L} r over `order[k]`.
    row_suffix_lb: Vec<Vec<i64>>,
    row_suffix_max: Vec<Vec<i64>>,
}

impl<'a> Search<'a> {
    fn new(sys: &'a LinearSystem, order: Vec<usize>, ub: Vec<i64>, opts: EnumOptions) -> Self {
        let n = order.len();
        let mut suffix_lb = vec![0; n + 1];
        let mut suffix_ub = vec![0; n + 1];
        for k in (0..n).rev() {
            suffix_lb[k] = suffix_lb[k + 1] + sys.lower[order[k]];
            suffix_ub[k] = suffix_ub[k + 1] + ub[order[k]];
        }
        let mut row_suffix_lb = Vec::with_capacity(sys.rows.len());
        let mut row_suffix_max = Vec::with_capacity(sys.rows.len());
        for r in &sys.rows {
            let mut slb = vec![0; n + 1];
            let mut smax = vec![i64::MIN; n + 1];
            for k in (0..n).rev() {
                let c = r[order[k]];
                slb[k] = slb[k + 1] + c * sys.lower[order[k]];
                smax[k] = smax[k + 1].max(c);
            }
            row_suffix_lb.push(slb);
            row_suffix_max.push(smax);
        }
        Search {
            sys,
            order,
            ub,
            opts,
            suffix_lb,
            suffix_ub,
            row_suffix_lb,
            row_suffix_max,
        }
    }

    fn run(&self) -> Vec<Vec<i64>> {
        let n = self.order.len();
        let mut x = vec![0i64; n];
        let mut partial = vec![0i64; self.sys.rows.len()];
        let mut out = Vec::new();
        if self.node_ok(0, self.sys.sum, &partial) {
            self.dfs(0, self.sys.sum, &mut x, &mut partial, &mut out);
        }
        out
    }

    /// Can the rows still be met with `rem` left to distribute over the
    /// variables from level `level` on?
    fn node_ok(&self, level: usize, rem: i64, partial: &[i64]) -> bool {
        if rem < self.suffix_lb[level] || rem > self.suffix_ub[level] {
            return false;
        }
        let n = self.order.len();
        let surplus = rem - self.suffix_lb[level];
        for (i, ps) in partial.iter().enumerate() {
            let best = if level == n {
                *ps
            } else {
                ps + self.row_suffix_lb[i][level] + surplus * self.row_suffix_max[i][level]
            };
            if best < 0 {
                return false;
            }
        }
        true
    }

    fn lp_range(&self, level: usize, rem: i64, partial: &[i64]) -> Option<(i64, i64)> {
        let free = &self.order[level..];
        let m = free.len();
        let lb = &self.sys.lower;
        let mut lp = Lp::new(m);
        lp.push(vec![1; m], Cmp::Eq, rem - self.suffix_lb[level]);
        for (i, r) in self.sys.rows.iter().enumerate() {
            let coeffs: Vec<i64> = free.iter().map(|&j| r[j]).collect();
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            lp.push(coeffs, Cmp::Ge, -partial[i] - self.row_suffix_lb[i][level]);
        }
        if self.sys.upper.is_some() {
            for (k, &j) in free.iter().enumerate() {
                let mut e = vec![0; m];
                e[k] = 1;
                lp.push(e, Cmp::Le, self.ub[j] - lb[j]);
            }
        }
        let mut obj = vec![0; m];
        obj[0] = 1;
        let v = free[0];
        let lo = match lp.optimize(&obj, false) {
            LpResult::Optimal(q) => lb[v] + q.ceil().to_integer() as i64,
            LpResult::Infeasible => return Some((1, 0)),
            _ => return None,
        };
        let hi = match lp.optimize(&obj, true) {
            LpResult::Optimal(q) => lb[v] + q.floor().to_integer() as i64,
            LpResult::Infeasible => return Some((1, 0)),
            _ => return None,
        };
        Some((lo, hi))
    }

    fn dfs(
        &self,
        level: usize,
        rem: i64,
        x: &mut [i64],
        partial: &mut [i64],
        out: &mut Vec<Vec<i64>>,
    ) {
        let n = self.order.len();
        if level == n {
            if rem == 0 && partial.iter().all(|&p| p >= 0) {
                let mut sol = vec![0; n];
                for (k, &v) in self.order.iter().enumerate() {
                    sol[v] = x[k];
                }
                out.push(sol);
            }
            return;
        }
        let v = self.order[level];
        let mut lo = self.sys.lower[v].max(rem - self.suffix_ub[level + 1]);
        let mut hi = self.ub[v].min(rem - self.suffix_lb[level + 1]);
        if self.opts.lp && n - level >= LP_MIN_FREE && lo < hi {
            if let Some((a, b)) = self.lp_range(level, rem, partial) {
                lo = lo.max(a);
                hi = hi.min(b);
            }
        }
        for val in lo..=hi {
            x[level] = val;
            for (i, r) in self.sys.rows.iter().enumerate() {
                partial[i] += r[v] * val;
            }
            if self.node_ok(level + 1, rem - val, partial) {
                self.dfs(level + 1, rem - val, x, partial, out);
            }
            for (i, r) in self.sys.rows.iter().enumerate() {
                partial[i] -= r[v] * val;
            }
        }
    }
}

/// Least rotation of `t` in lexicographic order.
pub fn canonical_cyclic(t: &[i64]) -> Vec<i64> {
    (0..t.len().max(1))
        .map(|k| {
            let mut r = t.to_vec();
            r.rotate_left(k.min(t.len()));
            r
        })
        .min()
        .unwrap_or_default()
}

/// An integer function on `A`, constant on the classes it lists and zero
/// elsewhere.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub domain: FinAbGroup,
    pub classes: Arc<Vec<ActionClass>>,
    pub values: Vec<i64>,
}

#[derive(Serialize)]
struct ClassValue<'a> {
    rep: &'a AbElem,
    size: usize,
    value: i64,
}

impl Serialize for ClassFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            domain: &'a FinAbGroup,
            values: Vec<ClassValue<'a>>,
        }
        View {
            domain: &self.domain,
            values: self
                .classes
                .iter()
                .zip(&self.values)
                .filter(|(_, v)| **v != 0)
                .map(|(c, v)| ClassValue {
                    rep: &c.rep,
                    size: c.size(),
                    value: *v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl ClassFunction {
    pub fn eval(&self, a: &AbElem) -> i64 {
        self.classes
            .iter()
            .position(|c| c.contains(a))
            .map_or(0, |i| self.values[i])
    }

    /// Sum of the class values (condition (I)).
    pub fn total(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn min_value(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// `(class rep, value)` over the support, sorted; equal keys mean equal
    /// functions when the classes come from the same action.
    pub fn key(&self) -> Vec<(AbElem, i64)> {
        let mut k: Vec<(AbElem, i64)> = self
            .classes
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v != 0)
            .map(|(c, v)| (c.rep.clone(), *v))
            .collect();
        k.sort();
        k
    }

    pub fn support(&self) -> Vec<&ActionClass> {
        self.classes
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v != 0)
            .map(|(c, _)| c)
            .collect()
    }
}

/// An element of `E(G, H, A)`.
#[derive(Clone, Debug, Serialize)]
pub struct ESolution {
    pub function: ClassFunction,
    /// Values in the order of the system's variables.
    pub values: Vec<i64>,
    /// Values along a cyclic walk of the classes, when one exists; filled
    /// in by table code.
    pub tuple: Option<Vec<i64>>,
    /// Least rotation of `tuple`.
    pub canonical_tuple: Option<Vec<i64>>,
}

fn ratio_ser<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// The constraint system for one local class.
#[derive(Clone, Debug, Serialize)]
pub struct EConstraintSystem {
    pub domain: FinAbGroup,
    /// Variables: the `H`-classes inside the local class, by least member.
    pub classes: Arc<Vec<ActionClass>>,
    pub cone_rows: Vec<Vec<i64>>,
    pub lower_bounds: Vec<i64>,
    pub require_negative: bool,
    pub h_order: u64,
    #[serde(serialize_with = "ratio_ser")]
    pub h_invariant: Ratio<i64>,
    /// Why individual lower bounds were raised.
    pub notes: Vec<String>,
}

impl EConstraintSystem {
    pub fn nvars(&self) -> usize {
        self.classes.len()
    }

    pub fn linear_system(&self) -> LinearSystem {
        LinearSystem {
            sum: 1,
            rows: self.cone_rows.clone(),
            lower: self.lower_bounds.clone(),
            upper: None,
        }
    }

    /// Plain-text form: one `= 1` relation, `>= 0` rows, and bounds.
    pub fn to_text(&self) -> String {
        let n = self.nvars();
        let mut s = String::new();
        let _ = writeln!(s, "# variables {n}");
        for (i, c) in self.classes.iter().enumerate() {
            let _ = writeln!(s, "# x{} rep {} size {}", i + 1, c.rep, c.size());
        }
        let join = |r: &[i64]| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "{} = 1", join(&vec![1; n]));
        for r in &self.cone_rows {
            let _ = writeln!(s, "{} >= 0", join(r));
        }
        for (i, lb) in self.lower_bounds.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            let _ = writeln!(s, "{} >= {}", join(&e), lb);
        }
        s
    }

    fn solution(&self, values: Vec<i64>) -> ESolution {
        ESolution {
            function: ClassFunction {
                domain: self.domain.clone(),
                classes: self.classes.clone(),
                values: values.clone(),
            },
            values,
            tuple: None,
            canonical_tuple: None,
        }
    }
}

/// Choices for [`enumerate_solutions`] and [`e_set`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub prune: bool,
    pub oracle: bool,
    pub lp: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            prune: true,
            oracle: false,
            lp: true,
        }
    }
}

type CosetTable = Arc<Vec<Vec<usize>>>;

/// Element-index lists of all minimal cocyclic cosets, memoized per group.
pub fn minimal_coset_indices(a: &FinAbGroup) -> Result<CosetTable> {
    static CACHE: OnceLock<Mutex<HashMap<FinAbGroup, CosetTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("coset cache poisoned").get(a) {
        return Ok(t.clone());
    }
    let table: Vec<Vec<usize>> = a
        .minimal_cocyclic_cosets()?
        .iter()
        .map(|c| c.elements(a).iter().map(|x| a.index_of(x)).collect())
        .collect();
    let table = Arc::new(table);
    cache
        .lock()
        .expect("coset cache poisoned")
        .insert(a.clone(), table.clone());
    Ok(table)
}

fn normalize_row(row: &[i64]) -> Vec<i64> {
    let g = row.iter().fold(0u64, |g, &v| gcd(g, v.unsigned_abs()));
    if g <= 1 {
        row.to_vec()
    } else {
        row.iter().map(|v| v / g as i64).collect()
    }
}

/// Cone rows over `classes`, each point weighted by `weights[class]`,
/// gcd-normalized and deduplicated. Rows that are positive multiples of the
/// all-ones vector follow from the sum condition and are dropped.
pub fn cone_rows(a: &FinAbGroup, classes: &[ActionClass], weights: &[u64]) -> Result<Vec<Vec<i64>>> {
    let n = classes.len();
    let mut class_of = vec![usize::MAX; a.order() as usize];
    for (i, c) in classes.iter().enumerate() {
        for m in &c.members {
            class_of[a.index_of(m)] = i;
        }
    }
    let mut rows = BTreeSet::new();
    for coset in minimal_coset_indices(a)?.iter() {
        let mut row = vec![0i64; n];
        for &e in coset {
            let i = class_of[e];
            if i != usize::MAX {
                row[i] += weights[i] as i64;
            }
        }
        if row.iter().all(|&v| v == 0) {
            continue;
        }
        let row = normalize_row(&row);
        if row.iter().all(|&v| v == 1) {
            continue;
        }
        rows.insert(row);
    }
    Ok(rows.into_iter().collect())
}

/// Builds the system for `E(G, H, A)` restricted to the local class `local`.
pub fn build_system(gact: &AutGroup, h: &AutGroup, local: &[AbElem]) -> Result<EConstraintSystem> {
    let a = gact.ambient().clone();
    if h.ambient() != &a {
        return Err(Error::Dimension("H and G act on different groups".into()));
    }
    if local.is_empty() {
        return Err(Error::Hypothesis("empty local class".into()));
    }
    let mut local = local.to_vec();
    local.sort();
    if gact.local_class(&local[0]) != local {
        return Err(Error::Hypothesis(format!(
            "the given set is not a local class of the acting group (rep {})",
            local[0]
        )));
    }
    let h_inv = a.h_invariant()?;
    let pi = a.cyclic_primes();
    let classes = h.orbits(Some(&local))?;
    let mut lower = Vec::with_capacity(classes.len());
    for c in &classes {
        let api = a.part(&c.rep, &pi);
        let idx = h.stabilizer_order(&api)? / c.stabilizer_order;
        let bound = -(h_inv * Ratio::from_integer(idx as i64));
        lower.push(bound.ceil().to_integer());
    }
    // |C_G(c)| is constant on each H-class since H ≤ G
    let weights = classes
        .iter()
        .map(|c| gact.stabilizer_order(&c.rep))
        .collect::<Result<Vec<_>>>()?;
    let rows = cone_rows(&a, &classes, &weights)?;
    Ok(EConstraintSystem {
        domain: a,
        classes: Arc::new(classes),
        cone_rows: rows,
        lower_bounds: lower,
        require_negative: true,
        h_order: h.order()?,
        h_invariant: h_inv,
        notes: Vec::new(),
    })
}

/// Result of [`apply_pruning`].
#[derive(Clone, Debug)]
pub enum Pruned {
    /// The set is empty for the stated reason.
    Empty(String),
    System(EConstraintSystem),
}

/// Scalar automorphisms `x ↦ x^k` on `A_q`, identity elsewhere.
fn scalar_autos(a: &FinAbGroup, q: u64) -> Vec<AutElem> {
    let mut out = Vec::new();
    for k in 2..q {
        let blocks = a
            .components()
            .iter()
            .map(|(p, e)| {
                let mut b = MatBlock::identity(p.pow(e[0]), e.len());
                if *p == q {
                    for i in 0..b.dim {
                        b.entries[i * b.dim + i] = k;
                    }
                }
                b
            })
            .collect();
        out.push(AutElem { blocks });
    }
    out
}

/// Raises lower bounds to 0 where a negative value is impossible, and
/// detects systems that cannot have a negative value at all.
///
/// Uses: a cone row supported on a single variable; for a prime `q` with
/// `A_{q'}` cyclic, index `[C_H(a_{q'}) : C_H(a)] < q`; and when moreover
/// `A_q ≅ C_q²`, scalars on `A_q` all lying in `H`, or `q` dividing
/// `[C_H(a_{q'}) : C_H(a_{q'}) ∩ C_H(A_q)]`.
pub fn apply_pruning(sys: &EConstraintSystem, h: &AutGroup) -> Result<Pruned> {
    let a = &sys.domain;
    let mut out = sys.clone();
    let n = sys.nvars();
    let raise = |out: &mut EConstraintSystem, j: usize, why: String| {
        if out.lower_bounds[j] < 0 {
            out.lower_bounds[j] = 0;
            out.notes.push(format!("x{} >= 0: {why}", j + 1));
        }
    };
    for r in &sys.cone_rows {
        let support: Vec<usize> = (0..n).filter(|&j| r[j] != 0).collect();
        if support.len() == 1 {
            raise(&mut out, support[0], "a cocyclic coset meets the local class inside one class".into());
        }
    }
    for q in a.primes() {
        let others_cyclic = a
            .components()
            .iter()
            .all(|(p, e)| *p == q || e.len() == 1);
        if !others_cyclic {
            continue;
        }
        let qprime = a.complement_primes(&[q]);
        let elementary_rank2 = a
            .components()
            .iter()
            .any(|(p, e)| *p == q && e.as_slice() == [1, 1]);
        if elementary_rank2 && q > 2 {
            let mut all = true;
            for s in scalar_autos(a, q) {
                if !h.contains(&s)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(Pruned::Empty(format!(
                    "H contains every scalar automorphism of the Sylow {q}-subgroup"
                )));
            }
        }
        for (j, c) in sys.classes.iter().enumerate() {
            let aq = a.part(&c.rep, &qprime);
            let k_order = h.stabilizer_order(&aq)?;
            if k_order / c.stabilizer_order < q {
                raise(&mut out, j, format!("index below {q}"));
                continue;
            }
            if elementary_rank2 {
                let k = h.stabilizer(&aq)?;
                let basis: Vec<AbElem> = a
                    .hall(&[q])
                    .elements()
                    .into_iter()
                    .filter(|x| {
                        // the two unit vectors of A_q
                        x.0.iter().filter(|&&v| v == 1).count() == 1
                            && x.0.iter().filter(|&&v| v == 0).count() == x.0.len() - 1
                    })
                    .map(|x| a.embed(&x, &[q]))
                    .collect();
                let u = k.pointwise_stabilizer(&basis)?.order()?;
                if (k.order()? / u) % q == 0 {
                    raise(&mut out, j, format!("{q} divides the index of the A_q-centralizer"));
                }
            }
        }
    }
    if out.require_negative && out.lower_bounds.iter().all(|&l| l >= 0) {
        return Ok(Pruned::Empty("no variable can be negative".into()));
    }
    Ok(Pruned::System(out))
}

/// All points satisfying (I)–(IV), trivial ones included.
pub fn enumerate_feasible(sys: &EConstraintSystem, opts: SolveOptions) -> Result<Vec<Vec<i64>>> {
    let ls = sys.linear_system();
    if opts.oracle {
        ls.brute_force()
    } else {
        Ok(ls.enumerate(EnumOptions { lp: opts.lp }))
    }
}

/// The elements of `E` described by `sys`.
pub fn enumerate_solutions(sys: &EConstraintSystem, opts: SolveOptions) -> Result<Vec<ESolution>> {
    if sys.require_negative && sys.lower_bounds.iter().all(|&l| l >= 0) {
        return Ok(Vec::new());
    }
    Ok(enumerate_feasible(sys, opts)?
        .into_iter()
        .filter(|x| !sys.require_negative || x.iter().any(|&v| v < 0))
        .map(|x| sys.solution(x))
        .collect())
}

/// The oracle path: full box scan.
pub fn brute_force_solutions(sys: &EConstraintSystem) -> Result<Vec<ESolution>> {
    enumerate_solutions(
        sys,
        SolveOptions {
            prune: false,
            oracle: true,
            lp: false,
        },
    )
}

/// `E(G, H, A)` over every local `G`-class.
pub fn e_set(gact: &AutGroup, h: &AutGroup, opts: SolveOptions) -> Result<Vec<ESolution>> {
    let a = gact.ambient();
    if a.is_trivial() || a.is_cyclic() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for local in gact.local_classes() {
        if local.len() == 1 && local[0].is_identity() {
            continue;
        }
        let sys = build_system(gact, h, &local)?;
        let sys = if opts.prune {
            match apply_pruning(&sys, h)? {
                Pruned::Empty(_) => continue,
                Pruned::System(s) => s,
            }
        } else {
            sys
        };
        out.extend(enumerate_solutions(&sys, opts)?);
    }
    Ok(out)
}

/// Checks the cone inequality for every cocyclic coset (not only minimal
/// ones) against `f`, weighting by centralizers in `gact`; used to test that
/// the minimal rows imply the rest.
pub fn satisfies_all_cocyclic(f: &ClassFunction, gact: &AutGroup) -> Result<bool> {
    let a = &f.domain;
    for k in a.cocyclic_subgroups()? {
        for rep in a.cosets(&k) {
            let mut total = 0i64;
            for x in &k.elements {
                let c = a.multiply(&rep, x);
                let v = f.eval(&c);
                if !v.is_zero() {
                    total += gact.stabilizer_order(&c)? as i64 * v;
                }
            }
            if total < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c16_on_c7() -> (AutGroup, AutGroup) {
        let a = FinAbGroup::elementary_rank2(7).unwrap();
        let beta = AutElem::from_matrices(&a, &[vec![vec![4, 6], vec![5, 2]]]).unwrap();
        let h = AutGroup::new(a.clone(), vec![beta]).unwrap();
        (AutGroup::full(a).unwrap(), h)
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_cyclic(&[2, -1, 0]), vec![-1, 0, 2]);
        assert_eq!(canonical_cyclic(&[0, 0, 1]), vec![0, 0, 1]);
        assert_eq!(canonical_cyclic(&[]), Vec::<i64>::new());
    }

    #[test]
    fn c7_singer_sixteen_system() {
        let (g, h) = c16_on_c7();
        let a = g.ambient().clone();
        let local: Vec<AbElem> = a.elements().into_iter().skip(1).collect();
        let sys = build_system(&g, &h, &local).unwrap();
        assert_eq!(sys.nvars(), 3);
        assert_eq!(sys.lower_bounds, vec![-2, -2, -2]);
        let paper_rows: BTreeSet<Vec<i64>> =
            [vec![2, 4, 1], vec![4, 1, 2], vec![1, 2, 4]].into_iter().collect();
        let paper_sols: BTreeSet<Vec<i64>> =
            [vec![2, -1, 0], vec![0, 2, -1], vec![-1, 0, 2]].into_iter().collect();
        let sols: Vec<Vec<i64>> = enumerate_solutions(&sys, SolveOptions::default())
            .unwrap()
            .into_iter()
            .map(|s| s.values)
            .collect();
        assert_eq!(sols.len(), 3);
        // find the relabelling that turns our rows into the displayed ones
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut matched = false;
        for p in perms {
            let relabel = |v: &Vec<i64>| (0..3).map(|i| v[p[i]]).collect::<Vec<i64>>();
            let rows: BTreeSet<Vec<i64>> = sys.cone_rows.iter().map(relabel).collect();
            if rows == paper_rows {
                let s: BTreeSet<Vec<i64>> = sols.iter().map(relabel).collect();
                assert_eq!(s, paper_sols);
                matched = true;
            }
        }
        assert!(matched, "rows {:?}", sys.cone_rows);
        let oracle: Vec<Vec<i64>> = brute_force_solutions(&sys)
            .unwrap()
            .into_iter()
            .map(|s| s.values)
            .collect();
        assert_eq!(oracle, sols);
    }

    #[test]
    fn single_variable_system_is_empty() {
        let ls = LinearSystem {
            sum: 1,
            rows: vec![],
            lower: vec![-3],
            upper: None,
        };
        assert_eq!(ls.enumerate(EnumOptions::default()), vec![vec![1]]);
    }

    #[test]
    fn cyclic_domain_gives_empty_set() {
        let a = FinAbGroup::parse("7^[1]x3^[1]").unwrap();
        let g = AutGroup::full(a.clone()).unwrap();
        let h = AutGroup::trivial(a).unwrap();
        assert!(e_set(&g, &h, SolveOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn engine_matches_box_scan_on_small_systems() {
        let systems = [
            LinearSystem {
                sum: 1,
                rows: vec![vec![1, 2, 0, 1], vec![0, 1, 3, 1], vec![2, 0, 1, 1]],
                lower: vec![-3, -2, -3, -1],
                upper: None,
            },
            LinearSystem {
                sum: 2,
                rows: vec![vec![1, 1, 0], vec![0, 1, 1]],
                lower: vec![-4, -4, -4],
                upper: Some(vec![5, 3, 6]),
            },
            LinearSystem {
                sum: 1,
                rows: vec![vec![3, -1, 1, 0, 2]],
                lower: vec![-2, -1, -2, -1, 0],
                upper: None,
            },
        ];
        for ls in &systems {
            let bf = ls.brute_force().unwrap();
            assert_eq!(ls.enumerate(EnumOptions { lp: true }), bf);
            assert_eq!(ls.enumerate(EnumOptions { lp: false }), bf);
        }
    }

    #[test]
    fn solutions_satisfy_every_cocyclic_coset() {
        let (g, h) = c16_on_c7();
        for s in e_set(&g, &h, SolveOptions::default()).unwrap() {
            assert_eq!(s.function.total(), 1);
            assert!(s.function.min_value() < 0);
            assert!(satisfies_all_cocyclic(&s.function, &g).unwrap());
        }
    }

    #[test]
    fn scalars_prune_to_empty() {
        let a = FinAbGroup::elementary_rank2(7).unwrap();
        let g = AutGroup::full(a.clone()).unwrap();
        // Singer element of order 48 contains the scalars
        let alpha = AutElem::from_matrices(&a, &[vec![vec![0, 4], vec![1, 1]]]).unwrap();
        let h = AutGroup::new(a.clone(), vec![alpha]).unwrap();
        let local: Vec<AbElem> = a.elements().into_iter().skip(1).collect();
        let sys = build_system(&g, &h, &local).unwrap();
        assert!(matches!(apply_pruning(&sys, &h).unwrap(), Pruned::Empty(_)));
    }

    #[test]
    fn not_a_local_class_is_rejected() {
        let (g, h) = c16_on_c7();
        let a = g.ambient().clone();
        let some: Vec<AbElem> = a.elements().into_iter().skip(1).take(5).collect();
        assert!(matches!(build_system(&g, &h, &some), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn text_export_has_every_row() {
        let (g, h) = c16_on_c7();
        let a = g.ambient().clone();
        let local: Vec<AbElem> = a.elements().into_iter().skip(1).collect();
        let sys = build_system(&g, &h, &local).unwrap();
        let t = sys.to_text();
        assert_eq!(t.lines().filter(|l| l.ends_with(">= 0")).count(), 3);
        assert!(t.contains("1 1 1 = 1"));
        assert!(serde_json::to_string(&sys).is_ok());
    }
}
