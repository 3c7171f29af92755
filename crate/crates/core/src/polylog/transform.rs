//! Evaluation of a polynomial over `F_p` at every point of `F_p^×`.
//!
//! With a generator `g`, evaluating `Σ c_k z^k` at `z = g^j` is a length
//! `p−1` DFT over `F_p`. Bluestein's identity `ij = T(i+j) − T(i) − T(j)`,
//! `T(m) = m(m−1)/2`, turns it into one correlation, which is computed
//! exactly as an integer convolution with a number-theoretic transform
//! over the Goldilocks prime `2^64 − 2^32 + 1`.

use crate::primes::{mul_mod, primitive_root};

const GOLDILOCKS: u64 = 0xFFFF_FFFF_0000_0001;
const EPSILON: u64 = 0xFFFF_FFFF; // 2^64 mod GOLDILOCKS
const GOLDILOCKS_GENERATOR: u64 = 7;

#[inline]
fn g_reduce(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    // 2^96 ≡ −1, 2^64 ≡ 2^32 − 1
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (sum, carry) = t0.overflowing_add(t1);
    let mut r = sum.wrapping_add(EPSILON * carry as u64);
    if r >= GOLDILOCKS {
        r -= GOLDILOCKS;
    }
    r
}

#[inline]
fn g_mul(a: u64, b: u64) -> u64 {
    g_reduce(a as u128 * b as u128)
}

#[inline]
fn g_add(a: u64, b: u64) -> u64 {
    let (s, c) = a.overflowing_add(b);
    let mut s = if c { s.wrapping_add(EPSILON) } else { s };
    if s >= GOLDILOCKS {
        s -= GOLDILOCKS;
    }
    s
}

#[inline]
fn g_sub(a: u64, b: u64) -> u64 {
    let (d, borrow) = a.overflowing_sub(b);
    if borrow {
        d.wrapping_sub(EPSILON)
    } else {
        d
    }
}

fn g_pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = g_mul(acc, base);
        }
        base = g_mul(base, base);
        exp >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = g_pow(GOLDILOCKS_GENERATOR, (GOLDILOCKS - 1) / len as u64);
        if invert {
            w_len = g_pow(w_len, GOLDILOCKS - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1;
        for _ in 0..half {
            twiddles.push(w);
            w = g_mul(w, w_len);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = g_mul(hi[k], twiddles[k]);
                lo[k] = g_add(u, v);
                hi[k] = g_sub(u, v);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = g_pow(n as u64, GOLDILOCKS - 2);
        for x in a.iter_mut() {
            *x = g_mul(*x, n_inv);
        }
    }
}

/// Cyclic convolution of length `len` (a power of two).
fn cyclic_convolution(mut a: Vec<u64>, mut b: Vec<u64>, len: usize) -> Vec<u64> {
    a.resize(len, 0);
    b.resize(len, 0);
    ntt(&mut a, false);
    ntt(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = g_mul(*x, *y);
    }
    ntt(&mut a, true);
    a
}

/// Horner evaluation of `coeffs` (ascending) at every `a ∈ F_p`.
pub(crate) fn evaluate_all_naive(coeffs: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .map(|a| {
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| (mul_mod(acc, a, p) + c) % p)
        })
        .collect()
}

/// Values of `Σ coeffs[k] z^k` at `z = 0, 1, …, p−1`.
///
/// Coefficients of index ≥ p−1 are folded onto `F_p^×` using `z^{p−1} = 1`
/// (the value at 0 is read from `coeffs[0]` directly).
pub(crate) fn evaluate_all(coeffs: &[u64], p: u64) -> Vec<u64> {
    let n = (p - 1) as usize;
    // Convolution entries are bounded by n·(p−1)^2, which must stay below
    // the transform modulus.
    let exact = (n as u128) * ((p - 1) as u128).pow(2) < GOLDILOCKS as u128;
    if p < 64 || !exact {
        return evaluate_all_naive(coeffs, p);
    }

    let mut folded = vec![0u64; n];
    for (k, &c) in coeffs.iter().enumerate() {
        let slot = k % n;
        folded[slot] = (folded[slot] + c % p) % p;
    }

    let g = primitive_root(p);
    let mut g_pows = Vec::with_capacity(n);
    let mut x = 1u64;
    for _ in 0..n {
        g_pows.push(x);
        x = mul_mod(x, g, p);
    }
    let pow_g = |e: usize| g_pows[e % n];

    // F_j = Σ_k folded[k]·g^{jk} is the value at z = g^j.
    let mut tri = 0usize; // T(m) mod n
    let mut chirp = Vec::with_capacity(2 * n - 1);
    let mut tri_of = Vec::with_capacity(2 * n - 1);
    for m in 0..(2 * n - 1) {
        tri_of.push(tri);
        chirp.push(pow_g(tri));
        tri = (tri + m) % n;
    }
    let u_rev: Vec<u64> = (0..n)
        .map(|k| {
            let i = n - 1 - k;
            let neg = (n - tri_of[i]) % n;
            mul_mod(folded[i], pow_g(neg), p)
        })
        .collect();

    let len = (2 * n - 1).next_power_of_two();
    let conv = cyclic_convolution(u_rev, chirp, len);

    let mut out = vec![0u64; p as usize];
    out[0] = coeffs.first().copied().unwrap_or(0) % p;
    for j in 0..n {
        let corr = conv[n - 1 + j] % p;
        let neg = (n - tri_of[j]) % n;
        out[pow_g(j) as usize] = mul_mod(corr, pow_g(neg), p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goldilocks_reduction_matches_u128() {
        let samples = [
            0u64,
            1,
            2,
            EPSILON,
            GOLDILOCKS - 1,
            GOLDILOCKS - 2,
            u64::MAX / 3,
            0x1234_5678_9abc_def0,
        ];
        for &a in &samples {
            for &b in &samples {
                let a = a % GOLDILOCKS;
                let b = b % GOLDILOCKS;
                let want = ((a as u128 * b as u128) % GOLDILOCKS as u128) as u64;
                assert_eq!(g_mul(a, b), want);
                assert_eq!(g_add(a, b) as u128, (a as u128 + b as u128) % GOLDILOCKS as u128);
                assert_eq!(
                    g_sub(a, b) as u128,
                    (a as u128 + GOLDILOCKS as u128 - b as u128) % GOLDILOCKS as u128
                );
            }
        }
    }

    #[test]
    fn convolution_small() {
        let c = cyclic_convolution(vec![1, 2, 3], vec![4, 5], 8);
        assert_eq!(&c[..5], &[4, 13, 22, 15, 0]);
    }

    #[test]
    fn batch_matches_horner() {
        for p in [67u64, 101, 257, 1009, 4099] {
            let coeffs: Vec<u64> = (0..p).map(|k| (k * k * 7 + 3 * k + 11) % p).collect();
            assert_eq!(evaluate_all(&coeffs, p), evaluate_all_naive(&coeffs, p), "p={p}");
        }
    }

    #[test]
    fn folds_high_degree_terms() {
        let p = 101u64;
        // z^{p-1} ≡ 1 on F_p^×, so z^{100} + z^{101} behaves like 1 + z there
        let mut coeffs = vec![0u64; 102];
        coeffs[100] = 1;
        coeffs[101] = 1;
        let got = evaluate_all(&coeffs, p);
        assert_eq!(got[0], 0);
        for a in 1..p {
            assert_eq!(got[a as usize], (1 + a) % p);
        }
    }
}
