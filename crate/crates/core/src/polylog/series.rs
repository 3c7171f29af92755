//! p-adic polylogarithms on the open unit disc.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{big_pow, iwasawa_log, truncation_index, v_p_u64, PAdic};

/// `min_{m ≥ 1} ((m−1)·v − k·v_p(m))`: worst shift between a term's
/// valuation and `v`. Attained at a power of p.
fn disc_loss(p: u64, v: i64, k: u64) -> i64 {
    let mut best = 0i64;
    let mut pe: u128 = 1;
    for e in 0..64i64 {
        let val = (pe as i128 - 1) * v as i128 - k as i128 * e as i128;
        if val < best as i128 {
            best = val as i64;
        }
        // past the minimum once each step adds more than k
        if pe * (p as u128 - 1) * v as u128 > k as u128 && val > 0 {
            break;
        }
        pe *= p as u128;
    }
    best
}

/// `Li_k(z) = Σ_{m≥1} z^m / m^k` for `v_p(z) ≥ 1`, to absolute precision
/// `min(N, what the precision of z supports)`.
pub fn polylog_series(k: u64, z: &PAdic, n: u32) -> Result<PAdic> {
    if k == 0 {
        return Err(Error::Domain("polylogarithm weight must be ≥ 1".into()));
    }
    let p = z.prime();
    let v = z.valuation_bound();
    if v < 1 {
        return Err(Error::OutsideDisc(v));
    }
    let a_z = z.absolute_precision();
    // Terms move by at least (m−1)·v − k·v_p(m) digits relative to z, and
    // an error in z moves by the same amount.
    let loss = disc_loss(p, v, k);
    let target = (n as i64).min(a_z + loss);
    if z.is_zero() {
        return Ok(PAdic::zero(p, target));
    }

    // s: how far the most negative term dips below zero valuation
    let m_max = if target < 1 {
        0
    } else {
        truncation_index(p, target, v, k as i64)
    };
    let mut s = 0i64;
    let mut e_max = 0u32;
    let mut pe = 1u64;
    let mut e = 0u32;
    while pe <= m_max {
        s = s.max(k as i64 * e as i64 - pe as i64 * v);
        e_max = e;
        pe = match pe.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
        e += 1;
    }
    if target + s < 1 {
        return Ok(PAdic::zero(p, target));
    }
    let width = (target + s) as u32;
    let work_mod = big_pow(p, width + k as u32 * e_max);
    let out_mod = big_pow(p, width);

    let (zv, _) = z.to_integer_residue()?;
    let lift = big_pow(p, s as u32);
    let mut power = BigUint::from(1u32);
    let mut acc = BigUint::zero();
    for m in 1..=m_max {
        power = (&power * &zv) % &work_mod;
        let e = v_p_u64(m, p);
        let cofactor = m / p.pow(e);
        let scaled = (&power * &lift) / big_pow(p, k as u32 * e);
        let inv = BigUint::from(cofactor)
            .pow(k as u32)
            .modinv(&out_mod)
            .unwrap_or_default();
        acc = (acc + (scaled % &out_mod) * inv) % &out_mod;
    }
    Ok(PAdic::from_residue(acc, p, width).shift(-s))
}

/// `Li_1(z) = −log(1 − z)`, with the Iwasawa branch (`log p = 0`) when
/// `1 − z` is not a unit.
pub fn li1(z: &PAdic, n: u32) -> Result<PAdic> {
    let p = z.prime();
    let one = PAdic::one(p, n.max(1));
    let w = one.checked_sub(z)?;
    let v = match w.valuation() {
        Some(v) => v,
        None => {
            return Err(Error::Domain(format!(
                "1 − z is zero to precision {}",
                w.absolute_precision()
            )))
        }
    };
    let unit = w.shift(-v);
    Ok(iwasawa_log(&unit)?.negate())
}

/// `Li^{(p)}_n(z) = Li_n(z) − p^{−n}·Li_n(z^p)` for `v_p(z) ≥ 1`; inner
/// series are padded by `n` digits for the division.
pub fn modified_polylog_series(n: u64, z: &PAdic, precision: u32) -> Result<PAdic> {
    let v = z.valuation_bound();
    if v < 1 {
        return Err(Error::OutsideDisc(v));
    }
    let padded = precision + n as u32;
    let first = polylog_series(n, z, padded)?;
    let zp = z.pow(z.prime() as i64)?;
    let second = polylog_series(n, &zp, padded)?.shift(-(n as i64));
    Ok(first.checked_sub(&second)?.truncate_absolute(precision as i64))
}
