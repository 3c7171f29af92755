//! Small-prime utilities shared by the sweeps.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    primal::is_prime(n)
}

pub fn check_odd_prime(p: u64) -> Result<u64> {
    if p > 2 && is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Sorts and deduplicates a prime set S, rejecting non-primes.
pub fn prime_set(s: &[u64]) -> Result<Vec<u64>> {
    let mut out = s.to_vec();
    out.sort_unstable();
    out.dedup();
    match out.iter().find(|&&l| !is_prime(l)) {
        Some(&bad) => Err(Error::Domain(format!("{bad} is not prime"))),
        None => Ok(out),
    }
}

/// Odd primes in `[lo, hi]`, ascending.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 3 || lo > hi {
        return Vec::new();
    }
    primal::Primes::all()
        .map(|p| p as u64)
        .skip_while(|&p| p < lo.max(3))
        .take_while(|&p| p <= hi)
        .collect()
}

/// Smallest generator of `F_p^×`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors: Vec<u64> = distinct_prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .expect("F_p^x is cyclic")
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverses of `1..p` mod `p` (index 0 unused), in linear time.
pub fn inverse_table(p: u64) -> Vec<u64> {
    let n = p as usize;
    let mut inv = vec![0u64; n];
    if n > 1 {
        inv[1] = 1;
    }
    for k in 2..n {
        let q = p / k as u64;
        let r = (p % k as u64) as usize;
        inv[k] = mul_mod(p - q, inv[r], p);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_primes_window() {
        assert_eq!(odd_primes_in(1, 20), vec![3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(odd_primes_in(9973, 9973), vec![9973]);
        assert!(odd_primes_in(24, 28).is_empty());
    }

    #[test]
    fn generators() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(101), 2);
        assert_eq!(primitive_root(9973), 11);
    }

    #[test]
    fn inverses() {
        for p in [3u64, 5, 7, 101, 9973] {
            let inv = inverse_table(p);
            for k in 1..p {
                assert_eq!(mul_mod(k, inv[k as usize], p), 1);
            }
        }
    }

    #[test]
    fn rejects_even_and_composite() {
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(9).is_err());
        assert_eq!(check_odd_prime(13), Ok(13));
    }
}
