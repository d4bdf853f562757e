//! On-disk cache of `E(Aut(A), K, A)` for `A = C_q × C_q`, one JSON file
//! per subgroup, named by a hash of the schema version, `q`, the label and
//! the generators.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abgroup::{AbElem, FinAbGroup};
use crate::autenum::{Gl2Subgroup, Mat2};
use crate::error::Result;
use crate::esolve::{e_set, ClassFunction, SolveOptions};
use crate::matact::AutGroup;

/// Bump to invalidate every existing entry.
pub const SCHEMA_VERSION: u32 = 1;

pub const CACHE_ENV: &str = "SEHGALKIT_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    q: u64,
    label: String,
    generators: Vec<Mat2>,
    /// Per solution: `(class rep, value)` over the support.
    solutions: Vec<Vec<(Vec<u64>, i64)>>,
}

#[derive(Clone, Debug)]
pub struct ESetCache {
    dir: PathBuf,
}

impl ESetCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ESetCache { dir: dir.into() }
    }

    /// `SEHGALKIT_CACHE` if set, else `dir`.
    pub fn from_env_or(dir: Option<PathBuf>) -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .or(dir)
            .map(ESetCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, k: &Gl2Subgroup) -> PathBuf {
        let mut h = Sha256::new();
        h.update(format!("v{SCHEMA_VERSION}|{}|{}|", k.q, k.label));
        for g in &k.generators {
            h.update(format!("{:?};", g.m));
        }
        let name = hex::encode(&h.finalize()[..16]);
        self.dir.join(format!("q{}-{name}.json", k.q))
    }

    /// `None` on a miss, a stale schema or a generator mismatch.
    pub fn load(&self, k: &Gl2Subgroup) -> Option<Vec<ClassFunction>> {
        let text = fs::read_to_string(self.path(k)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.schema != SCHEMA_VERSION || e.q != k.q || e.label != k.label || e.generators != k.generators {
            return None;
        }
        let a = FinAbGroup::elementary_rank2(k.q).ok()?;
        let classes = Arc::new(k.to_aut_group().ok()?.orbits(None).ok()?);
        e.solutions
            .into_iter()
            .map(|sol| {
                let mut values = vec![0; classes.len()];
                for (rep, v) in sol {
                    let rep = AbElem(rep);
                    let i = classes.iter().position(|c| c.contains(&rep))?;
                    values[i] = v;
                }
                Some(ClassFunction {
                    domain: a.clone(),
                    classes: classes.clone(),
                    values,
                })
            })
            .collect()
    }

    pub fn store(&self, k: &Gl2Subgroup, sols: &[ClassFunction]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let e = Entry {
            schema: SCHEMA_VERSION,
            q: k.q,
            label: k.label.clone(),
            generators: k.generators.clone(),
            solutions: sols
                .iter()
                .map(|f| f.key().into_iter().map(|(r, v)| (r.0, v)).collect())
                .collect(),
        };
        let text = serde_json::to_string(&e)?;
        // write-then-rename keeps concurrent readers from seeing half a file
        let path = self.path(k);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// `E(Aut(A), K, A)` through the cache when one is given.
pub fn e_set_cached(
    cache: Option<&ESetCache>,
    s: &AutGroup,
    k: &Gl2Subgroup,
    opts: SolveOptions,
) -> Result<Vec<ClassFunction>> {
    if let Some(hit) = cache.and_then(|c| c.load(k)) {
        return Ok(hit);
    }
    let sols: Vec<ClassFunction> = e_set(s, &k.to_aut_group()?, opts)?
        .into_iter()
        .map(|s| s.function)
        .collect();
    if let Some(c) = cache {
        c.store(k, &sols)?;
    }
    Ok(sols)
}
