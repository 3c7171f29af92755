//! Fixed-precision p-adic numbers.
//!
//! A nonzero [`PAdic`] stores `p^v · u` with `u` a unit known modulo `p^N`,
//! so the value itself is known modulo `p^{v+N}`. Values that cancel below
//! the tracked precision collapse into a zero state that only remembers its
//! absolute precision. No operation ever reports more digits than its
//! inputs justify.

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::check_odd_prime;

/// Working-precision schedule for zero/nonzero decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub default: u32,
    pub escalation: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            default: 8,
            escalation: 2,
            max: 64,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(default: u32, escalation: u32, max: u32) -> Result<Self> {
        if default == 0 || escalation < 2 || max < default {
            return Err(Error::Domain(format!(
                "bad precision policy default={default} escalation={escalation} max={max}"
            )));
        }
        Ok(PrecisionPolicy {
            default,
            escalation,
            max,
        })
    }

    /// Policy starting at `n` with the default escalation, capped at
    /// `max(n, 64)`.
    pub fn starting_at(n: u32) -> Result<Self> {
        let d = PrecisionPolicy::default();
        PrecisionPolicy::new(n, d.escalation, max(n, d.max))
    }

    /// `default, default·k, default·k², …`, clamped to `max`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.default];
        let mut n = self.default;
        while n < self.max {
            n = n.saturating_mul(self.escalation).min(self.max);
            out.push(n);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Zero modulo `p^abs`.
    Zero { abs: i64 },
    /// `p^valuation · unit`, unit known modulo `p^precision`.
    Nonzero {
        valuation: i64,
        unit: BigUint,
        precision: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdic {
    prime: u64,
    repr: Repr,
}

pub(crate) fn big_pow(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Splits `n ≠ 0` as `p^e · m` with `p ∤ m`.
fn split_p(n: &BigUint, p: u64) -> (u32, BigUint) {
    let pb = BigUint::from(p);
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (e, m);
        }
        m = q;
        e += 1;
    }
}

pub(crate) fn v_p_u64(mut k: u64, p: u64) -> u32 {
    let mut e = 0;
    while k.is_multiple_of(p) {
        k /= p;
        e += 1;
    }
    e
}

fn to_residue(n: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    n.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

fn mod_inverse(u: &BigUint, modulus: &BigUint) -> BigUint {
    if modulus.is_one() {
        return BigUint::zero();
    }
    u.modinv(modulus).expect("unit is invertible modulo p^N")
}

impl PAdic {
    /// Class of the integer `n` with `precision` significant digits.
    /// An `n` of zero gives the zero state with absolute precision
    /// `precision`.
    pub fn from_integer(n: impl Into<BigInt>, p: u64, precision: u32) -> Result<PAdic> {
        check_odd_prime(p)?;
        if precision == 0 {
            return Err(Error::Domain("precision must be at least 1".into()));
        }
        let n: BigInt = n.into();
        if n.is_zero() {
            return Ok(PAdic::zero(p, precision as i64));
        }
        let (e, m) = split_p(n.magnitude(), p);
        let m = if n.sign() == Sign::Minus {
            BigInt::from_biguint(Sign::Minus, m)
        } else {
            BigInt::from_biguint(Sign::Plus, m)
        };
        let unit = to_residue(&m, &big_pow(p, precision));
        Ok(PAdic {
            prime: p,
            repr: Repr::Nonzero {
                valuation: e as i64,
                unit,
                precision,
            },
        })
    }

    /// The rational `num/den`, both sides read at `precision` digits.
    pub fn from_rational(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        p: u64,
        precision: u32,
    ) -> Result<PAdic> {
        let n = PAdic::from_integer(num, p, precision)?;
        let d = PAdic::from_integer(den, p, precision)?;
        n.checked_div(&d)
    }

    /// The integer class `r mod p^abs` (abs ≥ 1), with whatever relative
    /// precision that leaves.
    pub(crate) fn from_residue(r: BigUint, p: u64, abs: u32) -> PAdic {
        let modulus = big_pow(p, abs);
        let r = r % &modulus;
        if r.is_zero() {
            return PAdic::zero(p, abs as i64);
        }
        let (e, m) = split_p(&r, p);
        PAdic {
            prime: p,
            repr: Repr::Nonzero {
                valuation: e as i64,
                unit: m,
                precision: abs - e,
            },
        }
    }

    pub fn zero(p: u64, abs: i64) -> PAdic {
        PAdic {
            prime: p,
            repr: Repr::Zero { abs },
        }
    }

    pub fn one(p: u64, precision: u32) -> PAdic {
        PAdic {
            prime: p,
            repr: Repr::Nonzero {
                valuation: 0,
                unit: BigUint::one() % big_pow(p, precision),
                precision,
            },
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// `None` for the zero state.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    /// Lower bound on the valuation: the true valuation when nonzero,
    /// the absolute precision otherwise.
    pub fn valuation_bound(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Nonzero { valuation, .. } => *valuation,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Relative precision; zero for the zero state.
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { precision, .. } => *precision,
        }
    }

    /// The exponent `a` such that the value is known modulo `p^a`.
    pub fn absolute_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Nonzero {
                valuation,
                precision,
                ..
            } => valuation + *precision as i64,
        }
    }

    /// Errors with `PrecisionExhausted` when the value is zero to precision.
    pub fn expect_nonzero(&self) -> Result<&PAdic> {
        match &self.repr {
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(*abs)),
            Repr::Nonzero { .. } => Ok(self),
        }
    }

    /// Requires a unit of `Z_p`; a value that cancelled to the zero state
    /// is reported as precision exhaustion.
    pub fn expect_unit(&self) -> Result<&PAdic> {
        match &self.repr {
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(*abs)),
            Repr::Nonzero { valuation: 0, .. } => Ok(self),
            Repr::Nonzero { valuation, .. } => Err(Error::NotAUnit(*valuation)),
        }
    }

    /// Integer representative in `[0, p^abs)` of a `Z_p` element, where
    /// `abs` is the absolute precision.
    pub fn to_integer_residue(&self) -> Result<(BigUint, i64)> {
        match &self.repr {
            Repr::Zero { abs } => Ok((BigUint::zero(), *abs)),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                if *valuation < 0 {
                    return Err(Error::NotIntegral(*valuation));
                }
                let abs = valuation + *precision as i64;
                Ok((unit * big_pow(self.prime, *valuation as u32), abs))
            }
        }
    }

    /// Image in `F_p` of a `Z_p` element known to at least one digit.
    pub fn residue(&self) -> Result<u64> {
        let (r, abs) = self.to_integer_residue()?;
        if abs < 1 {
            return Err(Error::PrecisionExhausted(abs));
        }
        Ok((r % self.prime).to_u64().expect("residue fits in u64"))
    }

    /// Drops digits so that the value is known modulo `p^abs` at most.
    pub fn truncate_absolute(&self, abs: i64) -> PAdic {
        match &self.repr {
            Repr::Zero { abs: a } => PAdic::zero(self.prime, min(*a, abs)),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                if abs <= *valuation {
                    return PAdic::zero(self.prime, abs);
                }
                let n = min(*precision as i64, abs - valuation) as u32;
                PAdic {
                    prime: self.prime,
                    repr: Repr::Nonzero {
                        valuation: *valuation,
                        unit: unit % big_pow(self.prime, n),
                        precision: n,
                    },
                }
            }
        }
    }

    /// Agreement modulo `p^abs`; both sides must be known that far.
    pub fn congruent(&self, other: &PAdic, abs: i64) -> Result<bool> {
        let d = self.checked_sub(other)?;
        if d.absolute_precision() < abs {
            return Err(Error::PrecisionExhausted(d.absolute_precision()));
        }
        Ok(d.valuation_bound() >= abs)
    }

    fn same_prime(&self, other: &PAdic) -> Result<u64> {
        if self.prime != other.prime {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        } else {
            Ok(self.prime)
        }
    }

    pub fn checked_add(&self, other: &PAdic) -> Result<PAdic> {
        let p = self.same_prime(other)?;
        let abs = min(self.absolute_precision(), other.absolute_precision());
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, _) => other.truncate_absolute(abs),
            (_, Repr::Zero { .. }) => self.truncate_absolute(abs),
            (
                Repr::Nonzero {
                    valuation: vx,
                    unit: ux,
                    ..
                },
                Repr::Nonzero {
                    valuation: vy,
                    unit: uy,
                    ..
                },
            ) => {
                let m = min(*vx, *vy);
                let width = (abs - m) as u32;
                let modulus = big_pow(p, width);
                let sx = ux * big_pow(p, (vx - m) as u32);
                let sy = uy * big_pow(p, (vy - m) as u32);
                let s = (sx + sy) % &modulus;
                if s.is_zero() {
                    PAdic::zero(p, abs)
                } else {
                    let (e, u) = split_p(&s, p);
                    PAdic {
                        prime: p,
                        repr: Repr::Nonzero {
                            valuation: m + e as i64,
                            unit: u,
                            precision: width - e,
                        },
                    }
                }
            }
        };
        Ok(out)
    }

    pub fn checked_sub(&self, other: &PAdic) -> Result<PAdic> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> PAdic {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let modulus = big_pow(self.prime, *precision);
                let u = (&modulus - unit % &modulus) % &modulus;
                PAdic {
                    prime: self.prime,
                    repr: Repr::Nonzero {
                        valuation: *valuation,
                        unit: u,
                        precision: *precision,
                    },
                }
            }
        }
    }

    pub fn checked_mul(&self, other: &PAdic) -> Result<PAdic> {
        let p = self.same_prime(other)?;
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => PAdic::zero(p, a + b),
            (Repr::Zero { abs }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { abs }) => {
                PAdic::zero(p, abs + valuation)
            }
            (
                Repr::Nonzero {
                    valuation: vx,
                    unit: ux,
                    precision: nx,
                },
                Repr::Nonzero {
                    valuation: vy,
                    unit: uy,
                    precision: ny,
                },
            ) => {
                let n = min(*nx, *ny);
                PAdic {
                    prime: p,
                    repr: Repr::Nonzero {
                        valuation: vx + vy,
                        unit: (ux * uy) % big_pow(p, n),
                        precision: n,
                    },
                }
            }
        };
        Ok(out)
    }

    pub fn inverse(&self) -> Result<PAdic> {
        match &self.repr {
            Repr::Zero { abs } => Err(Error::DivisionByZero(*abs)),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => Ok(PAdic {
                prime: self.prime,
                repr: Repr::Nonzero {
                    valuation: -valuation,
                    unit: mod_inverse(unit, &big_pow(self.prime, *precision)),
                    precision: *precision,
                },
            }),
        }
    }

    pub fn checked_div(&self, other: &PAdic) -> Result<PAdic> {
        self.same_prime(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Integer power; negative exponents go through [`PAdic::inverse`].
    pub fn pow(&self, e: i64) -> Result<PAdic> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        Ok(match &self.repr {
            Repr::Zero { abs } => {
                if e == 0 {
                    PAdic::one(self.prime, max(*abs, 1) as u32)
                } else {
                    PAdic::zero(self.prime, abs * e)
                }
            }
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let modulus = big_pow(self.prime, *precision);
                PAdic {
                    prime: self.prime,
                    repr: Repr::Nonzero {
                        valuation: valuation * e,
                        unit: unit.modpow(&BigUint::from(e as u64), &modulus),
                        precision: *precision,
                    },
                }
            }
        })
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> PAdic {
        match &self.repr {
            Repr::Zero { abs } => PAdic::zero(self.prime, abs + k),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => PAdic {
                prime: self.prime,
                repr: Repr::Nonzero {
                    valuation: valuation + k,
                    unit: unit.clone(),
                    precision: *precision,
                },
            },
        }
    }
}

impl fmt::Display for PAdic {
    /// `u*p^v + O(p^{v+N})`, or `O(p^a)` for the zero state.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match &self.repr {
            Repr::Zero { abs } => write!(f, "O({p}^{abs})"),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => write!(
                f,
                "{unit}*{p}^{valuation} + O({p}^{})",
                valuation + *precision as i64
            ),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&PAdic> for &PAdic {
            type Output = PAdic;
            /// Panics when the operands live over different primes.
            fn $method(self, rhs: &PAdic) -> PAdic {
                self.$checked(rhs).expect("p-adic operands over different primes")
            }
        }
        impl $tr<PAdic> for PAdic {
            type Output = PAdic;
            fn $method(self, rhs: PAdic) -> PAdic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.negate()
    }
}

impl Neg for PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.negate()
    }
}

/// Teichmüller representative ω(a): the (p−1)-st root of unity congruent
/// to `a` mod p, by iterating `x ↦ x^p` mod `p^N` until it is fixed.
pub fn teichmuller(a: u64, p: u64, precision: u32) -> Result<PAdic> {
    check_odd_prime(p)?;
    if a.is_multiple_of(p) {
        return Err(Error::Domain(format!("teichmuller lift of {a} ≡ 0 mod {p}")));
    }
    if precision == 0 {
        return Err(Error::Domain("precision must be at least 1".into()));
    }
    let modulus = big_pow(p, precision);
    let exp = BigUint::from(p);
    let mut x = BigUint::from(a % p);
    // Each step gains one digit, so N steps always reach the fixed point.
    for _ in 0..=precision {
        let next = x.modpow(&exp, &modulus);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(PAdic {
        prime: p,
        repr: Repr::Nonzero {
            valuation: 0,
            unit: x,
            precision,
        },
    })
}

/// Least `M` such that every `m > M` has
/// `m·slope − weight·⌊log_p m⌋ ≥ target`.
///
/// On `[p^e, p^{e+1})` the left side is increasing in `m`, so only the
/// intervals whose left endpoint still fails the bound need scanning.
pub(crate) fn truncation_index(p: u64, target: i64, slope: i64, weight: i64) -> u64 {
    assert!(slope >= 1);
    let mut last_fail = 0u64;
    let mut e: u32 = 0;
    let mut start: u64 = 1;
    loop {
        let end = start.saturating_mul(p); // exclusive
        let floor_at_start = start as i128 * slope as i128 - weight as i128 * e as i128;
        if floor_at_start < target as i128 {
            // Largest m in [start, end) with m·slope < target + weight·e.
            let need = target as i128 + weight as i128 * e as i128; // m·slope ≥ need passes
            let first_pass = (need + slope as i128 - 1) / slope as i128;
            let fail = (first_pass - 1).min(end as i128 - 1);
            if fail >= start as i128 {
                last_fail = last_fail.max(fail as u64);
            }
        } else {
            let growth = (start as i128) * (p as i128 - 1) * slope as i128;
            if growth > weight as i128 {
                // From here on every interval's left endpoint passes.
                return last_fail;
            }
        }
        start = end;
        e += 1;
    }
}

/// Sum of `(−1)^{k+1} t^k / k` for an integer `t` with `v_p(t) ≥ 1`,
/// modulo `p^target`.
fn log1p_mod(t: &BigUint, p: u64, target: u32) -> BigUint {
    let (vt, _) = split_p(t, p);
    let k_max = truncation_index(p, target as i64, vt as i64, 1);
    let pad = if k_max == 0 {
        0
    } else {
        (k_max as f64).log(p as f64).floor() as u32 + 1
    };
    let work = big_pow(p, target + pad);
    let out_mod = big_pow(p, target);
    let mut acc = BigUint::zero();
    let mut power = BigUint::one();
    for k in 1..=k_max {
        power = (&power * t) % &work;
        let e = v_p_u64(k, p);
        let cofactor = BigUint::from(k / p.pow(e));
        let term = (&power / big_pow(p, e)) % &out_mod;
        let term = (term * mod_inverse(&cofactor, &out_mod)) % &out_mod;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc += &out_mod - term;
        }
    }
    acc % out_mod
}

/// Iwasawa logarithm of a unit: `log(u) = log(u^{p−1}) / (p−1)`, so roots
/// of unity map to zero. The result is known to the precision of `u`.
pub fn iwasawa_log(u: &PAdic) -> Result<PAdic> {
    let (p, unit, n) = match &u.repr {
        Repr::Zero { abs } => return Err(Error::PrecisionExhausted(*abs)),
        Repr::Nonzero {
            valuation: 0,
            unit,
            precision,
        } => (u.prime, unit, *precision),
        Repr::Nonzero { valuation, .. } => return Err(Error::NotAUnit(*valuation)),
    };
    let modulus = big_pow(p, n);
    let w = unit.modpow(&BigUint::from(p - 1), &modulus);
    let t = (w + &modulus - BigUint::one()) % &modulus;
    if t.is_zero() {
        return Ok(PAdic::zero(p, n as i64));
    }
    let series = log1p_mod(&t, p, n);
    let scaled = (series * mod_inverse(&BigUint::from(p - 1), &modulus)) % &modulus;
    Ok(PAdic::from_residue(scaled, p, n))
}

/// `exp(t) = Σ t^k / k!` for `v_p(t) ≥ 1`, known to the absolute
/// precision of `t`.
pub fn exp_principal(t: &PAdic) -> Result<PAdic> {
    let p = t.prime;
    let v = t.valuation_bound();
    if v < 1 {
        return Err(Error::OutsideDisc(v));
    }
    let abs = t.absolute_precision();
    let target = u32::try_from(abs).map_err(|_| Error::Domain("precision overflow".into()))?;
    if t.is_zero() {
        return Ok(PAdic::one(p, target));
    }
    let (tv, _) = t.to_integer_residue()?;
    // Term k has valuation ≥ k·v − ⌊(k−1)/(p−1)⌋, nondecreasing in k.
    let bound = |k: u64| k as i64 * v - ((k as i64 - 1) / (p as i64 - 1));
    let mut k_max = 0u64;
    while bound(k_max + 1) < target as i64 {
        k_max += 1;
    }
    let mut pad = 0u32;
    for k in 1..=k_max {
        pad += v_p_u64(k, p);
    }
    let work = big_pow(p, target + pad);
    let out_mod = big_pow(p, target);
    let mut acc = BigUint::one() % &out_mod;
    let mut power = BigUint::one();
    let mut fact_p = 0u32;
    let mut fact_unit_inv = BigUint::one();
    for k in 1..=k_max {
        power = (&power * &tv) % &work;
        let e = v_p_u64(k, p);
        fact_p += e;
        let cofactor = BigUint::from(k / p.pow(e));
        fact_unit_inv = (fact_unit_inv * mod_inverse(&cofactor, &out_mod)) % &out_mod;
        let term = (&power / big_pow(p, fact_p)) % &out_mod;
        acc = (acc + term * &fact_unit_inv) % &out_mod;
    }
    Ok(PAdic::from_residue(acc, p, target))
}

/// Outcome of a zero test on a logarithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogCertificate {
    /// Forced by analysis (the argument is a root of unity).
    ProvenZero,
    /// A nonzero digit was found at this working precision.
    NonzeroAtPrecision { precision: u32, valuation: i64 },
    /// Every precision in the schedule came out zero.
    Inconclusive { max_precision: u32 },
}

/// Certifies `log(n) ≠ 0` for a nonzero integer `n` prime to `p`,
/// escalating precision along `policy`. `±1` are reported as proven zero.
pub fn certify_log_integer(n: i64, p: u64, policy: &PrecisionPolicy) -> Result<LogCertificate> {
    if n == 1 || n == -1 {
        return Ok(LogCertificate::ProvenZero);
    }
    for prec in policy.schedule() {
        let value = iwasawa_log(&PAdic::from_integer(n, p, prec)?)?;
        if let Some(v) = value.valuation() {
            return Ok(LogCertificate::NonzeroAtPrecision {
                precision: prec,
                valuation: v,
            });
        }
    }
    Ok(LogCertificate::Inconclusive {
        max_precision: policy.max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64, p: u64, prec: u32) -> PAdic {
        PAdic::from_integer(n, p, prec).unwrap()
    }

    fn residue_of(x: &PAdic) -> BigUint {
        x.to_integer_residue().unwrap().0
    }

    #[test]
    fn from_integer_examples() {
        let z = int(0, 5, 3);
        assert!(z.is_zero());
        assert_eq!(z.absolute_precision(), 3);

        let x = int(45, 5, 3);
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.unit(), Some(&BigUint::from(9u32)));

        let m = int(-1, 5, 3);
        assert_eq!(m.valuation(), Some(0));
        assert_eq!(m.unit(), Some(&BigUint::from(124u32)));
    }

    #[test]
    fn rejects_bad_prime_and_precision() {
        assert_eq!(PAdic::from_integer(3, 2, 4), Err(Error::InvalidPrime(2)));
        assert_eq!(PAdic::from_integer(3, 15, 4), Err(Error::InvalidPrime(15)));
        assert!(PAdic::from_integer(3, 5, 0).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let s = &int(2, 5, 3) + &int(3, 5, 3);
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.unit(), Some(&BigUint::from(1u32)));
        // 2 + 3 loses a digit: known mod 5^3 only.
        assert_eq!(s.absolute_precision(), 3);

        let x = int(17, 5, 3);
        let d = &x - &x;
        assert!(d.is_zero());

        let sq = int(6, 5, 3).pow(2).unwrap();
        assert_eq!(residue_of(&sq), BigUint::from(36u32));
    }

    #[test]
    fn prime_mismatch_is_an_error() {
        assert_eq!(
            int(1, 5, 3).checked_add(&int(1, 7, 3)),
            Err(Error::PrimeMismatch(5, 7))
        );
    }

    #[test]
    fn demanding_a_unit_from_cancellation() {
        let d = &int(7, 5, 3) - &int(7, 5, 3);
        assert_eq!(d.expect_unit().unwrap_err(), Error::PrecisionExhausted(3));
        assert_eq!(int(10, 5, 3).expect_unit().unwrap_err(), Error::NotAUnit(1));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(int(1, 5, 3).inverse().unwrap(), int(1, 5, 3));
        let i2 = int(2, 5, 3).inverse().unwrap();
        assert_eq!(i2.unit(), Some(&BigUint::from(63u32)));
        let i5 = int(5, 5, 3).inverse().unwrap();
        assert_eq!(i5.valuation(), Some(-1));
        assert_eq!(i5.unit(), Some(&BigUint::from(1u32)));
        assert_eq!(
            PAdic::zero(5, 3).inverse().unwrap_err(),
            Error::DivisionByZero(3)
        );
    }

    #[test]
    fn zero_absorbs_precision() {
        let z = PAdic::zero(5, 2);
        let x = int(3, 5, 6);
        let s = &z + &x;
        assert_eq!(s.absolute_precision(), 2);
        assert_eq!(residue_of(&s), BigUint::from(3u32));
        let prod = &z * &int(25, 5, 4);
        assert!(prod.is_zero());
        assert_eq!(prod.absolute_precision(), 4);
        // 125 + O(5^2) is zero to that precision
        assert!((&int(125, 5, 6) + &z).is_zero());
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(residue_of(&teichmuller(1, 7, 5).unwrap()), BigUint::from(1u32));
        let m = teichmuller(6, 7, 5).unwrap();
        assert_eq!(residue_of(&m), BigUint::from(7u32.pow(5) - 1));
        let w = teichmuller(2, 5, 3).unwrap();
        assert_eq!(residue_of(&w), BigUint::from(57u32));
        assert_eq!(residue_of(&w.pow(2).unwrap()), BigUint::from(124u32));
        assert_eq!(residue_of(&w.pow(4).unwrap()), BigUint::from(1u32));
    }

    #[test]
    fn iwasawa_log_examples() {
        assert!(iwasawa_log(&int(-1, 5, 4)).unwrap().is_zero());
        assert!(iwasawa_log(&teichmuller(2, 5, 3).unwrap())
            .unwrap()
            .is_zero());
        let l = iwasawa_log(&int(2, 3, 5)).unwrap();
        assert_eq!(residue_of(&l), BigUint::from(24u32));
        assert_eq!(l.absolute_precision(), 5);
        assert_eq!(l.to_string(), "8*3^1 + O(3^5)");
        assert_eq!(iwasawa_log(&int(3, 3, 5)), Err(Error::NotAUnit(1)));
    }

    #[test]
    fn exp_examples() {
        let one = exp_principal(&PAdic::zero(5, 4)).unwrap();
        assert_eq!(one, PAdic::one(5, 4));
        let e5 = exp_principal(&int(5, 5, 1)).unwrap();
        // 5 read with one digit is known mod 25
        assert_eq!(residue_of(&e5), BigUint::from(6u32));
        assert_eq!(e5.absolute_precision(), 2);
        let e3 = exp_principal(&int(3, 3, 3)).unwrap();
        assert_eq!(e3.absolute_precision(), 4);
        let back = iwasawa_log(&e3).unwrap();
        assert!(back.congruent(&int(3, 3, 3), 4).unwrap());
        assert_eq!(exp_principal(&int(2, 3, 3)), Err(Error::OutsideDisc(0)));
    }

    #[test]
    fn exp_matches_hand_sum() {
        // exp(3) mod 81 = 1 + 3 + 9/2 + 27/6 + 81/24 + 243/120 + 729/720 ...
        // oracle: rational partial sum with enough terms, reduced mod 81.
        use num_bigint::BigInt;
        use num_integer::Integer;
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        let mut fact = BigInt::one();
        for k in 0..40u32 {
            if k > 0 {
                fact *= k;
            }
            let t = BigInt::from(3).pow(k);
            // num/den + t/fact
            num = &num * &fact + &t * &den;
            den *= &fact;
            let g = num.gcd(&den);
            num /= &g;
            den /= &g;
        }
        let m = BigInt::from(81);
        let d = den.mod_floor(&m).to_biguint().unwrap();
        let dinv = BigInt::from(d.modinv(&BigUint::from(81u32)).unwrap());
        let expect = (num * dinv).mod_floor(&m);
        let got = exp_principal(&int(3, 3, 3)).unwrap();
        assert_eq!(BigInt::from(residue_of(&got)), expect);
    }

    #[test]
    fn truncation_bounds() {
        // k − ⌊log_3 k⌋ ≥ 5 for every k > 5 (k = 5 gives 4)
        assert_eq!(truncation_index(3, 5, 1, 1), 5);
        // no terms needed when the target is the first digit
        assert_eq!(truncation_index(5, 1, 1, 1), 0);
        // brute force against the defining property
        for p in [3u64, 5, 7] {
            for target in 1..20i64 {
                for weight in 0..6i64 {
                    let m = truncation_index(p, target, 1, weight);
                    let floor_log = |k: u64| {
                        let mut e = 0;
                        let mut q = p;
                        while q <= k {
                            q *= p;
                            e += 1;
                        }
                        e
                    };
                    let g = |k: u64| k as i64 - weight * floor_log(k);
                    for k in (m + 1)..(m + 2000) {
                        assert!(g(k) >= target, "p={p} t={target} w={weight} k={k}");
                    }
                    if m > 0 {
                        assert!(g(m) < target);
                    }
                }
            }
        }
    }

    #[test]
    fn certify_log_two() {
        let policy = PrecisionPolicy::default();
        match certify_log_integer(2, 3, &policy).unwrap() {
            LogCertificate::NonzeroAtPrecision {
                precision,
                valuation,
            } => {
                assert_eq!(precision, 8);
                assert_eq!(valuation, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            certify_log_integer(-1, 3, &policy).unwrap(),
            LogCertificate::ProvenZero
        );
    }

    #[test]
    fn policy_schedule() {
        assert_eq!(PrecisionPolicy::default().schedule(), vec![8, 16, 32, 64]);
        assert_eq!(
            PrecisionPolicy::new(5, 3, 50).unwrap().schedule(),
            vec![5, 15, 45, 50]
        );
        assert!(PrecisionPolicy::new(8, 1, 64).is_err());
    }

    #[test]
    fn display_zero() {
        assert_eq!(PAdic::zero(7, 4).to_string(), "O(7^4)");
        assert_eq!(int(45, 5, 3).to_string(), "9*5^1 + O(5^4)");
    }
}
