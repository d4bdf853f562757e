//! The field `F_{p²} = F_p[X]/(X² − aX − b)` with a distinguished primitive
//! element `α` (the class of `X`).

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_prime, mod_mul};
use crate::error::{Error, Result};

/// `c0 + c1·α`.
pub type FieldElem = (u64, u64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    pub p: u64,
    /// `α² = a·α + b`.
    pub a: u64,
    pub b: u64,
}

impl QuadField {
    /// The default field for `p`. For `p = 7` the modulus is `X² − X + 3`;
    /// otherwise the lexicographically least `(a, b)` making `X` primitive.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        if p == 7 {
            return QuadField::with_modulus(7, 1, 4);
        }
        Ok(QuadField::primitive_moduli(p)
            .into_iter()
            .next()
            .expect("a primitive quadratic exists for every prime"))
    }

    /// `X² − aX − b`, which must be irreducible.
    pub fn with_modulus(p: u64, a: u64, b: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        let (a, b) = (a % p, b % p);
        // irreducible iff no root in F_p
        if (0..p).any(|x| (mod_mul(x, x, p) + p * 2 - mod_mul(a, x, p) - b) % p == 0) {
            return Err(Error::InvalidGroup(format!(
                "X^2 - {a}X - {b} is reducible over F_{p}"
            )));
        }
        Ok(QuadField { p, a, b })
    }

    /// Every field whose `α` is primitive, in lexicographic `(a, b)` order.
    pub fn primitive_moduli(p: u64) -> Vec<QuadField> {
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                if let Ok(f) = QuadField::with_modulus(p, a, b) {
                    if f.is_primitive((0, 1)) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    pub fn size(&self) -> u64 {
        self.p * self.p
    }

    pub fn one(&self) -> FieldElem {
        (1 % self.p, 0)
    }

    pub fn alpha(&self) -> FieldElem {
        (0, 1)
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        ((self.p - x.0) % self.p, (self.p - x.1) % self.p)
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let p = self.p;
        let c2 = mod_mul(x.1, y.1, p);
        let c0 = (mod_mul(x.0, y.0, p) + mod_mul(c2, self.b, p)) % p;
        let c1 = (mod_mul(x.0, y.1, p) + mod_mul(x.1, y.0, p) + mod_mul(c2, self.a, p)) % p;
        (c0, c1)
    }

    pub fn pow(&self, mut x: FieldElem, mut k: u64) -> FieldElem {
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(&self, x: FieldElem) -> Option<u64> {
        if x == (0, 0) {
            return None;
        }
        divisors(self.size() - 1)
            .into_iter()
            .find(|&d| self.pow(x, d) == self.one())
    }

    pub fn is_primitive(&self, x: FieldElem) -> bool {
        self.order(x) == Some(self.size() - 1)
    }

    /// `α^0, α^1, …, α^{p²−2}`.
    pub fn powers(&self) -> Vec<FieldElem> {
        let n = (self.size() - 1) as usize;
        let mut out = Vec::with_capacity(n);
        let mut x = self.one();
        for _ in 0..n {
            out.push(x);
            x = self.mul(x, self.alpha());
        }
        out
    }

    /// Matrix of multiplication by `x` on column vectors in the basis `{1, α}`.
    pub fn mult_matrix(&self, x: FieldElem) -> [[u64; 2]; 2] {
        let c1 = x; // x·1
        let ca = self.mul(x, self.alpha()); // x·α
        [[c1.0, ca.0], [c1.1, ca.1]]
    }

    /// The Singer matrix: multiplication by `α`.
    pub fn singer_matrix(&self) -> [[u64; 2]; 2] {
        self.mult_matrix(self.alpha())
    }
}
