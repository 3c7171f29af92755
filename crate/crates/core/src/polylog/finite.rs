use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::transform;
use crate::error::{Error, Result};
use crate::primes::{check_odd_prime, inverse_table, mul_mod, pow_mod};

/// An element of the prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp {
    p: u64,
    value: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Fp {
        Fp {
            p,
            value: value.rem_euclid(p as i64) as u64,
        }
    }

    pub fn from_u64(value: u64, p: u64) -> Fp {
        Fp { p, value: value % p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, e: u64) -> Fp {
        Fp {
            p: self.p,
            value: pow_mod(self.value, e, self.p),
        }
    }

    pub fn inverse(&self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::Domain(format!("0 has no inverse in F_{}", self.p)));
        }
        Ok(self.pow(self.p - 2))
    }

    fn check(&self, other: &Fp) {
        assert_eq!(self.p, other.p, "F_p elements over different primes");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp::from_u64(self.value + rhs.value, self.p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp::from_u64(self.value + self.p - rhs.value, self.p)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            p: self.p,
            value: mul_mod(self.value, rhs.value, self.p),
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::from_u64(self.p - self.value, self.p)
    }
}

/// Dense polynomial over `F_p`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> FpPoly {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, a: Fp) -> Fp {
        assert_eq!(a.modulus(), self.p);
        let p = self.p;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (mul_mod(acc, a.value(), p) + c) % p);
        Fp::from_u64(v, p)
    }

    /// Values at `0, 1, …, p−1`.
    pub fn eval_all(&self) -> Vec<Fp> {
        transform::evaluate_all(&self.coeffs, self.p)
            .into_iter()
            .map(|v| Fp::from_u64(v, self.p))
            .collect()
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    /// The unique polynomial of degree < p taking `values[a]` at each
    /// `a ∈ F_p`, via `f = Σ_a v_a (1 − (z − a)^{p−1})`. Quadratic in p.
    pub fn interpolate(p: u64, values: &[u64]) -> FpPoly {
        assert_eq!(values.len() as u64, p);
        let n = p as usize;
        let mut coeffs = vec![0u64; n];
        coeffs[0] = values[0] % p;
        // Coefficient of z^j (j ≥ 1) is −Σ_a v_a a^{p−1−j}, reading 0^0 = 1.
        for (a, &v) in values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let a = a as u64;
            let mut power = 1u64; // a^{p-1-j} for j = p-1 downwards
            for j in (1..n).rev() {
                coeffs[j] = (coeffs[j] + p - mul_mod(v, power, p)) % p;
                power = mul_mod(power, a, p);
            }
        }
        FpPoly::new(p, coeffs)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "z")?,
                (1, c) => write!(f, "{c}*z")?,
                (k, 1) => write!(f, "z^{k}")?,
                (k, c) => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Coefficients `k^{−n}` of the finite polylogarithm `li_n(z) = Σ_{k<p} z^k/k^n`,
/// kept so that the same row can be evaluated at many points.
#[derive(Debug, Clone)]
pub struct FiniteLi {
    p: u64,
    n: u64,
    /// index k holds k^{-n}; index 0 is zero
    coeffs: Vec<u64>,
}

impl FiniteLi {
    pub fn new(n: u64, p: u64) -> Result<FiniteLi> {
        check_odd_prime(p)?;
        if n == 0 {
            return Err(Error::Domain("finite polylogarithm needs n ≥ 1".into()));
        }
        let inv = inverse_table(p);
        let e = n % (p - 1);
        let mut coeffs = vec![0u64; p as usize];
        for k in 1..p as usize {
            coeffs[k] = pow_mod(inv[k], e, p);
        }
        Ok(FiniteLi { p, n, coeffs })
    }

    pub fn weight(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn as_poly(&self) -> FpPoly {
        FpPoly::new(self.p, self.coeffs.iter().copied())
    }

    /// Single Horner pass over the precomputed row.
    pub fn eval(&self, a: Fp) -> Fp {
        assert_eq!(a.modulus(), self.p);
        let p = self.p;
        let x = a.value();
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p);
        Fp::from_u64(v, p)
    }

    /// Values at every `a ∈ F_p`, indexed by `a`.
    pub fn eval_all(&self) -> Vec<u64> {
        transform::evaluate_all(&self.coeffs, self.p)
    }

    /// Zeros in `F_p ∖ {0, 1}`, ascending.
    pub fn roots(&self) -> Vec<Fp> {
        self.eval_all()
            .into_iter()
            .enumerate()
            .skip(2)
            .filter(|&(_, v)| v == 0)
            .map(|(a, _)| Fp::from_u64(a as u64, self.p))
            .collect()
    }
}

/// `li_n(a) = Σ_{k=1}^{p−1} a^k / k^n` in `F_p`.
pub fn finite_li_eval(n: u64, a: Fp) -> Result<Fp> {
    Ok(FiniteLi::new(n, a.modulus())?.eval(a))
}

/// All `a ∈ F_p ∖ {0, 1}` with `li_n(a) = 0`, by exhaustive scan.
pub fn finite_li_roots(n: u64, p: u64) -> Result<Vec<Fp>> {
    Ok(FiniteLi::new(n, p)?.roots())
}

/// Expanded `z(z+1)(z−1)^{p−3}` over `F_p`, for `p ≥ 5`.
pub fn closed_form_li(p: u64) -> Result<FpPoly> {
    check_odd_prime(p)?;
    if p < 5 {
        return Err(Error::Domain(format!("closed form of li_(p-3) needs p ≥ 5, got {p}")));
    }
    let m = p - 3;
    let inv = inverse_table(p);
    // (z − 1)^m = Σ_j C(m, j) z^j (−1)^{m−j}
    let mut binom = 1u64;
    let mut pow_coeffs = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        let sign_negative = (m - j) % 2 == 1;
        pow_coeffs.push(if sign_negative && binom != 0 {
            p - binom
        } else {
            binom
        });
        if j < m {
            binom = mul_mod(mul_mod(binom, m - j, p), inv[(j + 1) as usize], p);
        }
    }
    let z_z_plus_1 = FpPoly::new(p, [0, 1, 1]);
    Ok(z_z_plus_1.mul(&FpPoly::new(p, pow_coeffs)))
}

/// `(1 − z̄)^{−1} · li_n(z̄)`: the reduction mod p of the modified
/// polylogarithm at any lift of `z̄` (using `z̄^p = z̄`).
pub fn modified_polylog_mod_p(n: u64, zbar: Fp) -> Result<Fp> {
    let p = zbar.modulus();
    if zbar.value() == 0 || zbar.value() == 1 {
        return Err(Error::Domain(format!(
            "modified polylogarithm mod p needs z̄ ∉ {{0, 1}}, got {zbar}"
        )));
    }
    let one = Fp::from_u64(1, p);
    Ok((one - zbar).inverse()? * finite_li_eval(n, zbar)?)
}
