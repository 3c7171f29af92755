//! S-integral points of `P¹ ∖ {0, 1, ∞}`.
//!
//! A rational `z = a/b` is S-integral when `a`, `b` and `b − a` are all
//! S-units, i.e. `z` and `1 − z` are both S-units.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::primes::prime_set;
use crate::selmer::{Cusp, RefinementCondition};
use crate::sweep::Execution;

/// Default exponent bound for [`enumerate_integral_points`].
pub const DEFAULT_BOUND: u32 = 20;

/// `a/b` in lowest terms with `b > 0`, never one of the cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    num: i128,
    den: i128,
}

impl RationalPoint {
    pub fn new(num: i128, den: i128) -> Result<RationalPoint> {
        if den == 0 || num == 0 || num == den {
            return Err(Error::InvalidPoint(num, den));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow)?;
            den = den.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(RationalPoint { num, den })
    }

    pub fn integer(n: i128) -> Result<RationalPoint> {
        RationalPoint::new(n, 1)
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    /// `max(|a|, b)`
    pub fn height(&self) -> u128 {
        self.num.unsigned_abs().max(self.den.unsigned_abs())
    }

    /// `(b − a, b)`, the fraction `1 − z` (not a point of Y in general).
    fn one_minus_parts(&self) -> Result<(i128, i128)> {
        Ok((self.den.checked_sub(self.num).ok_or(Error::Overflow)?, self.den))
    }

    pub fn is_s_integral(&self, s: &[u64]) -> bool {
        let Ok((c, _)) = self.one_minus_parts() else {
            return false;
        };
        [self.num, self.den, c].iter().all(|&x| is_s_unit(x, s))
    }

    fn require_s_integral(&self, s: &[u64]) -> Result<()> {
        if self.is_s_integral(s) {
            Ok(())
        } else {
            Err(Error::NotSIntegral(self.to_string()))
        }
    }

    /// The point as an element of `Q_p` with `precision` digits.
    pub fn to_padic(&self, p: u64, precision: u32) -> Result<PAdic> {
        PAdic::from_rational(self.num, self.den, p, precision)
    }
}

fn is_s_unit(mut x: i128, s: &[u64]) -> bool {
    if x == 0 {
        return false;
    }
    for &l in s {
        let l = l as i128;
        while x % l == 0 {
            x /= l;
        }
    }
    x == 1 || x == -1
}

fn valuation(mut x: i128, l: u64) -> i64 {
    let l = l as i128;
    let mut v = 0;
    while x % l == 0 {
        x /= l;
        v += 1;
    }
    v
}

impl Ord for RationalPoint {
    /// By height, then by value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.height().cmp(&other.height()).then_with(|| {
            let lhs = BigInt::from(self.num) * other.den;
            let rhs = BigInt::from(other.num) * self.den;
            lhs.cmp(&rhs)
        })
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<RationalPoint> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i128>()
                .map_err(|e| Error::Parse(format!("'{t}': {e}")))
        };
        match s.split_once('/') {
            Some((a, b)) => RationalPoint::new(parse(a)?, parse(b)?),
            None => RationalPoint::new(parse(s)?, 1),
        }
    }
}

/// `(x_ℓ, y_ℓ) = (v_ℓ(z), −v_ℓ(1−z))` for each ℓ ∈ S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerVector(BTreeMap<u64, (i64, i64)>);

impl KummerVector {
    pub fn get(&self, l: u64) -> Option<(i64, i64)> {
        self.0.get(&l).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, i64, i64)> + '_ {
        self.0.iter().map(|(&l, &(x, y))| (l, x, y))
    }

    /// Cusps `c` with `(x_ℓ, y_ℓ) ∈ R_c`: `R_0 = {y = 0}`, `R_1 = {x = 0}`,
    /// `R_∞ = {x + y = 0}`.
    pub fn regions(&self, l: u64) -> Vec<Cusp> {
        let Some((x, y)) = self.get(l) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if y == 0 {
            out.push(Cusp::Zero);
        }
        if x == 0 {
            out.push(Cusp::One);
        }
        if x + y == 0 {
            out.push(Cusp::Infinity);
        }
        out
    }
}

impl fmt::Display for KummerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .map(|(l, x, y)| format!("(x{l},y{l})=({x},{y})"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn kummer_coordinates(z: &RationalPoint, s: &[u64]) -> Result<KummerVector> {
    let s = prime_set(s)?;
    z.require_s_integral(&s)?;
    let (c, d) = z.one_minus_parts()?;
    let map = s
        .iter()
        .map(|&l| {
            let x = valuation(z.num, l) - valuation(z.den, l);
            let y = -(valuation(c, l) - valuation(d, l));
            (l, (x, y))
        })
        .collect();
    Ok(KummerVector(map))
}

/// Image of a point in `P¹(F_ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reduction {
    Cusp(Cusp),
    /// A residue in `F_ℓ ∖ {0, 1}`.
    Point(u64),
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::Cusp(c) => write!(f, "{c}"),
            Reduction::Point(a) => write!(f, "{a}"),
        }
    }
}

/// `(a : b) mod ℓ`; at least one of `a, b` is prime to ℓ.
pub fn reduce_mod_ell(z: &RationalPoint, l: u64) -> Reduction {
    let li = l as i128;
    let a = z.num.rem_euclid(li) as u64;
    let b = z.den.rem_euclid(li) as u64;
    if b == 0 {
        return Reduction::Cusp(Cusp::Infinity);
    }
    let inv = crate::primes::pow_mod(b, l - 2, l);
    match crate::primes::mul_mod(a, inv, l) {
        0 => Reduction::Cusp(Cusp::Zero),
        1 => Reduction::Cusp(Cusp::One),
        r => Reduction::Point(r),
    }
}

/// True iff at every ℓ ∈ S the reduction of `z` lies in `Y(F_ℓ) ∪ {Σ_ℓ}`.
pub fn refinement_membership(z: &RationalPoint, sigma: &RefinementCondition, s: &[u64]) -> Result<bool> {
    let s = prime_set(s)?;
    if sigma.len() != s.len() {
        return Err(Error::IndexMismatch {
            expected: s.len(),
            got: sigma.len(),
        });
    }
    z.require_s_integral(&s)?;
    Ok(s.iter().zip(sigma.entries()).all(|(&l, &c)| match reduce_mod_ell(z, l) {
        Reduction::Point(_) => true,
        Reduction::Cusp(r) => r == c,
    }))
}

/// Every Σ, in lexicographic order, whose refined set contains `z`.
pub fn compatible_conditions(z: &RationalPoint, s: &[u64]) -> Result<Vec<RefinementCondition>> {
    let s = prime_set(s)?;
    let mut out = Vec::new();
    for sigma in RefinementCondition::all(s.len()) {
        if refinement_membership(z, &sigma, &s)? {
            out.push(sigma);
        }
    }
    Ok(out)
}

fn signed_unit(s: &[u64], exps: &[i32], negative: bool) -> Option<(i128, i128)> {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for (&l, &e) in s.iter().zip(exps) {
        let f = (l as i128).checked_pow(e.unsigned_abs())?;
        if e >= 0 {
            num = num.checked_mul(f)?;
        } else {
            den = den.checked_mul(f)?;
        }
    }
    Some((if negative { -num } else { num }, den))
}

/// S-integral points `z = ±Π ℓ^{e_ℓ}`, `|e_ℓ| ≤ bound`, sorted by height.
///
/// Only exponent vectors up to `bound` are searched, so the output is the
/// full answer only when all solutions are that small (true for S = {2}).
/// Errors with [`Error::Overflow`] when some candidate leaves `i128`.
pub fn enumerate_integral_points(s: &[u64], bound: u32, exec: Execution) -> Result<Vec<RationalPoint>> {
    if bound == 0 {
        return Err(Error::Domain("exponent bound must be at least 1".into()));
    }
    let s = prime_set(s)?;
    let b = bound as i32;
    let mut vectors: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in &s {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    let found = exec.map(&vectors, |exps| -> Result<Vec<RationalPoint>> {
        let mut hits = Vec::new();
        for negative in [false, true] {
            let (num, den) = signed_unit(&s, exps, negative).ok_or(Error::Overflow)?;
            if num == den {
                continue;
            }
            let c = den.checked_sub(num).ok_or(Error::Overflow)?;
            if is_s_unit(c, &s) {
                hits.push(RationalPoint::new(num, den)?);
            }
        }
        Ok(hits)
    });
    let mut points = Vec::new();
    for hits in found {
        points.extend(hits?);
    }
    points.sort();
    points.dedup();
    Ok(points)
}
