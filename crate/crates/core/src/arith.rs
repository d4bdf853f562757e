//! Small integer helpers shared by the group and field code.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Multiplicative order of `a` modulo `m`; `None` when `a` is not a unit.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a % m, m) != 1 {
        return None;
    }
    if m == 1 {
        return Some(1);
    }
    let phi = euler_phi(m);
    divisors(phi).into_iter().find(|&d| mod_pow(a, d, m) == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Least primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| mult_order(g, p) == Some(p - 1))
        .expect("every prime has a primitive root")
}

/// Units modulo `m`, sorted.
pub fn units(m: u64) -> Vec<u64> {
    (1..m.max(2)).filter(|&u| gcd(u, m) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_and_orders() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(6, 9), None);
        assert_eq!(mult_order(2, 13), Some(12));
        assert_eq!(mult_order(5, 13), Some(4));
        assert_eq!(primitive_root(19), 2);
        assert_eq!(primitive_root(13), 2);
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(48), vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 48]);
        assert_eq!(euler_phi(11), 10);
        assert_eq!(units(9), vec![1, 2, 4, 5, 7, 8]);
    }
}
