//! The three algorithms for split metabelian groups `G = N ⋊ Γ` with `N`
//! abelian.
//!
//! Conjugation of `N` inside `G` is just the `Γ`-action, so every class and
//! centralizer below is computed on `Γ`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::abgroup::{AbElem, FinAbGroup};
use crate::autenum::{
    abelian_candidates, product_class_reps, subgroup_class_reps, tuple_along, Gl2Subgroup,
    SubgroupKind, DEFAULT_QMAX, FULL_ENUM_CAP,
};
use crate::error::{Error, Result};
use crate::esolve::{canonical_cyclic, e_set, ClassFunction, ESolution, SolveOptions};
use crate::matact::{ActionClass, AutElem, AutGroup};

/// `Γ` from JSON: a list of generators, each a list of matrices (one per
/// factor of `N`, rows first). `"full"` gives `Aut(N)`.
pub fn parse_gamma(n: &FinAbGroup, s: &str) -> Result<AutGroup> {
    if s.trim() == "full" {
        return AutGroup::full(n.clone());
    }
    let gens: Vec<Vec<Vec<Vec<i64>>>> =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("generator list: {e}")))?;
    let gens = gens
        .iter()
        .map(|mats| AutElem::from_matrices(n, mats))
        .collect::<Result<Vec<_>>>()?;
    AutGroup::new(n.clone(), gens)
}

/// `N ⋊ Γ` with `Γ ≤ Aut(N)`.
#[derive(Clone, Debug)]
pub struct MetabelianGroup {
    pub n: FinAbGroup,
    pub gamma: AutGroup,
    classes: Arc<OnceLock<Arc<Vec<ActionClass>>>>,
}

impl MetabelianGroup {
    pub fn new(n: FinAbGroup, gamma: AutGroup) -> Result<Self> {
        if gamma.ambient() != &n {
            return Err(Error::Dimension(format!(
                "acting group is defined on {}, not on {n}",
                gamma.ambient()
            )));
        }
        gamma.order()?;
        Ok(MetabelianGroup {
            n,
            gamma,
            classes: Arc::new(OnceLock::new()),
        })
    }

    /// The `G`-classes of `N`, i.e. the `Γ`-orbits, by least member.
    pub fn classes(&self) -> Result<Arc<Vec<ActionClass>>> {
        if let Some(c) = self.classes.get() {
            return Ok(c.clone());
        }
        let c = Arc::new(self.gamma.orbits(None)?);
        Ok(self.classes.get_or_init(|| c).clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    Open,
}

/// Where a witness came from: the prime, the class representative `y` of
/// `N_p`, `|C_Γ(y)|` and the solution `f`.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub p: u64,
    pub y: AbElem,
    pub h_order: u64,
    pub f: ClassFunction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub epsilon: ClassFunction,
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgOutcome {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl AlgOutcome {
    fn from_witnesses(witnesses: Vec<Witness>) -> Self {
        AlgOutcome {
            verdict: if witnesses.is_empty() {
                Verdict::True
            } else {
                Verdict::Open
            },
            witnesses,
        }
    }
}

/// `ε(n) = f((n^g)_{p'})` when `(n_p)^g = y`, and 0 otherwise. Fails if two
/// choices of `g` disagree.
pub fn assemble_epsilon(g: &MetabelianGroup, f: &ClassFunction, y: &AbElem, p: u64) -> Result<ClassFunction> {
    let n = &g.n;
    let rest = n.complement_primes(&[p]);
    let classes = g.classes()?;
    let els = g.gamma.elements()?;
    let mut values = Vec::with_capacity(classes.len());
    for c in classes.iter() {
        let x = &c.rep;
        let xp = n.part(x, &[p]);
        let mut value: Option<i64> = None;
        for s in &els {
            if s.apply(&xp) != *y {
                continue;
            }
            let v = f.eval(&n.project(&s.apply(x), &rest));
            match value {
                None => value = Some(v),
                Some(w) if w != v => {
                    return Err(Error::Hypothesis(format!(
                        "f is not constant on the classes of C(y): values {w} and {v} at {x}"
                    )))
                }
                _ => {}
            }
        }
        values.push(value.unwrap_or(0));
    }
    Ok(ClassFunction {
        domain: n.clone(),
        classes,
        values,
    })
}

/// Algorithm 1 for the prime `p`.
pub fn algorithm1(g: &MetabelianGroup, p: u64, opts: SolveOptions) -> Result<AlgOutcome> {
    let n = &g.n;
    let rest = n.complement_primes(&[p]);
    let npp = n.hall(&rest);
    if npp.is_trivial() || npp.is_cyclic() {
        return Ok(AlgOutcome::from_witnesses(vec![]));
    }
    let gamma_pp = g.gamma.inn_image(&rest)?;
    let np = n.hall(&[p]);
    let np_in_n: Vec<AbElem> = np.elements().iter().map(|x| n.embed(x, &[p])).collect();
    let ys: Vec<AbElem> = g.gamma.orbits(Some(&np_in_n))?.into_iter().map(|c| c.rep).collect();

    let per_y: Vec<Vec<Witness>> = ys
        .par_iter()
        .map(|y| -> Result<Vec<Witness>> {
            let h = g.gamma.stabilizer(y)?;
            let h_order = h.order()?;
            let h_pp = h.inn_image(&rest)?;
            let mut out = Vec::new();
            for sol in e_set(&gamma_pp, &h_pp, opts)? {
                let eps = assemble_epsilon(g, &sol.function, y, p)?;
                out.push(Witness {
                    epsilon: eps,
                    provenance: vec![Provenance {
                        p,
                        y: y.clone(),
                        h_order,
                        f: sol.function,
                    }],
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut merged: BTreeMap<Vec<(AbElem, i64)>, Witness> = BTreeMap::new();
    for w in per_y.into_iter().flatten() {
        match merged.get_mut(&w.epsilon.key()) {
            Some(e) => e.provenance.extend(w.provenance),
            None => {
                merged.insert(w.epsilon.key(), w);
            }
        }
    }
    Ok(AlgOutcome::from_witnesses(merged.into_values().collect()))
}

/// Algorithm 2: the witnesses common to Algorithm 1 at every prime of `N`.
pub fn algorithm2(g: &MetabelianGroup, opts: SolveOptions) -> Result<AlgOutcome> {
    let mut acc: Option<BTreeMap<Vec<(AbElem, i64)>, Witness>> = None;
    for p in g.n.primes() {
        let out = algorithm1(g, p, opts)?;
        let here: BTreeMap<_, _> = out
            .witnesses
            .into_iter()
            .map(|w| (w.epsilon.key(), w))
            .collect();
        acc = Some(match acc {
            None => here,
            Some(prev) => prev
                .into_iter()
                .filter_map(|(k, mut w)| {
                    here.get(&k).map(|o| {
                        w.provenance.extend(o.provenance.iter().cloned());
                        (k, w)
                    })
                })
                .collect(),
        });
        if acc.as_ref().is_some_and(|m| m.is_empty()) {
            break;
        }
    }
    Ok(AlgOutcome::from_witnesses(
        acc.map(|m| m.into_values().collect()).unwrap_or_default(),
    ))
}

/// Drops every cyclic Sylow component.
pub fn reduce_cyclic_factors(a: &FinAbGroup) -> FinAbGroup {
    let comps: Vec<(u64, Vec<u32>)> = a
        .components()
        .iter()
        .filter(|(_, e)| e.len() > 1)
        .cloned()
        .collect();
    if comps.is_empty() {
        FinAbGroup::trivial()
    } else {
        FinAbGroup::new(&comps).expect("components of a valid group")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    /// Every conjugacy class of subgroups of `Aut(A)` was examined.
    Exhaustive,
    /// Only abelian candidates were examined.
    AbelianCandidatesOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alg3Verdict {
    True,
    NotTrue,
    /// All examined sets are empty but coverage was not exhaustive.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Alg3Entry {
    pub label: String,
    pub order: u64,
    pub kind: Option<SubgroupKind>,
    pub generators: Vec<AutElem>,
    pub solutions: Vec<ESolution>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Alg3Outcome {
    pub group: FinAbGroup,
    pub core: FinAbGroup,
    pub coverage: Coverage,
    pub verdict: Alg3Verdict,
    /// Subgroups with a non-empty set, ordered by (order, label).
    pub entries: Vec<Alg3Entry>,
}

#[derive(Clone, Copy, Debug)]
pub struct Alg3Options {
    pub reduce: bool,
    pub qmax: u64,
    pub solve: SolveOptions,
}

impl Default for Alg3Options {
    fn default() -> Self {
        Alg3Options {
            reduce: true,
            qmax: DEFAULT_QMAX,
            solve: SolveOptions::default(),
        }
    }
}

fn gl2_entry(s: &AutGroup, k: &Gl2Subgroup, with_tuples: bool, opts: SolveOptions) -> Result<Alg3Entry> {
    let kg = k.to_aut_group()?;
    let mut sols = e_set(s, &kg, opts)?;
    if with_tuples {
        for sol in &mut sols {
            sol.tuple = tuple_along(k, &sol.function);
            sol.canonical_tuple = sol.tuple.as_deref().map(canonical_cyclic);
        }
    }
    Ok(Alg3Entry {
        label: k.label.clone(),
        order: k.order,
        kind: Some(k.kind),
        generators: kg.generators().to_vec(),
        solutions: sols,
    })
}

/// Algorithm 3 on `A`.
///
/// Supported: cores `C_q × C_q` (all subgroup classes for `q ≤ 5`, abelian
/// candidates up to `qmax` otherwise), and unreduced `C_q × C_q × C_r` for
/// `q ≤ 5` with `r` prime to `q`.
pub fn algorithm3(a: &FinAbGroup, opts: Alg3Options) -> Result<Alg3Outcome> {
    let core = if opts.reduce {
        reduce_cyclic_factors(a)
    } else {
        a.clone()
    };
    let finish = |coverage, entries: Vec<Alg3Entry>| {
        let mut entries: Vec<Alg3Entry> = entries.into_iter().filter(|e| !e.solutions.is_empty()).collect();
        entries.sort_by(|x, y| (x.order, &x.label).cmp(&(y.order, &y.label)));
        let verdict = if !entries.is_empty() {
            Alg3Verdict::NotTrue
        } else if coverage == Coverage::Exhaustive {
            Alg3Verdict::True
        } else {
            Alg3Verdict::Inconclusive
        };
        Alg3Outcome {
            group: a.clone(),
            core: core.clone(),
            coverage,
            verdict,
            entries,
        }
    };
    if core.is_trivial() || core.is_cyclic() {
        return Ok(finish(Coverage::Exhaustive, vec![]));
    }
    let noncyclic: Vec<&(u64, Vec<u32>)> = core.components().iter().filter(|(_, e)| e.len() > 1).collect();
    let scope = || {
        Error::Unsupported(format!(
            "algorithm 3 handles C_q x C_q (optionally times a cyclic group of coprime order); got {a}"
        ))
    };
    if noncyclic.len() != 1 || noncyclic[0].1 != [1, 1] {
        return Err(scope());
    }
    let q = noncyclic[0].0;
    let s = AutGroup::full(core.clone())?;

    if core.components().len() == 1 {
        let (ks, coverage, tuples) = if q <= FULL_ENUM_CAP {
            (subgroup_class_reps(q)?, Coverage::Exhaustive, false)
        } else if q <= opts.qmax {
            (abelian_candidates(q)?, Coverage::AbelianCandidatesOnly, true)
        } else {
            return Err(Error::Unsupported(format!(
                "q = {q} exceeds the configured cap {} (raise it to allow)",
                opts.qmax
            )));
        };
        let entries = ks
            .par_iter()
            .map(|k| gl2_entry(&s, k, tuples, opts.solve))
            .collect::<Result<Vec<_>>>()?;
        return Ok(finish(coverage, entries));
    }

    if q > FULL_ENUM_CAP {
        return Err(scope());
    }
    let r: u64 = core
        .components()
        .iter()
        .filter(|(p, _)| *p != q)
        .map(|(p, e)| p.pow(e[0]))
        .product();
    let (_, ks) = product_class_reps(q, r)?;
    let entries = ks
        .par_iter()
        .enumerate()
        .map(|(i, k)| -> Result<Alg3Entry> {
            let sols = e_set(&s, k, opts.solve)?;
            Ok(Alg3Entry {
                label: format!("K{i}"),
                order: k.order()?,
                kind: None,
                generators: k.generators().to_vec(),
                solutions: sols,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(Coverage::Exhaustive, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        let r = |s: &str| reduce_cyclic_factors(&FinAbGroup::parse(s).unwrap()).to_string();
        assert_eq!(r("3^[1]x7^[1,1]"), "7^[1,1]");
        assert_eq!(r("7^[1,1]x13^[1,1]"), "7^[1,1]x13^[1,1]");
        assert_eq!(r("5^[1,1]x7^[2]"), "5^[1,1]");
        assert_eq!(r("11^[1]"), "1");
    }

    #[test]
    fn cyclic_n_is_true() {
        let n = FinAbGroup::parse("7^[1]x3^[1]").unwrap();
        let gamma = AutGroup::full(n.clone()).unwrap();
        let g = MetabelianGroup::new(n, gamma).unwrap();
        let out = algorithm2(&g, SolveOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::True);
    }

    #[test]
    fn small_cores_are_true() {
        for q in [2u64, 3] {
            let a = FinAbGroup::elementary_rank2(q).unwrap();
            let out = algorithm3(&a, Alg3Options::default()).unwrap();
            assert_eq!(out.verdict, Alg3Verdict::True);
            assert_eq!(out.coverage, Coverage::Exhaustive);
        }
    }
}
