//! The six Möbius automorphisms of `P¹ ∖ {0, 1, ∞}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::selmer::{Cusp, RefinementCondition};
use crate::sunit::RationalPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Moebius {
    /// `z`
    Id,
    /// `1/z`
    Inv,
    /// `1 − z`
    OneMinus,
    /// `1/(1 − z)`
    InvOneMinus,
    /// `(z − 1)/z`
    Ratio1,
    /// `z/(z − 1)`
    Ratio2,
}

impl Moebius {
    pub const ALL: [Moebius; 6] = [
        Moebius::Id,
        Moebius::Inv,
        Moebius::OneMinus,
        Moebius::InvOneMinus,
        Moebius::Ratio1,
        Moebius::Ratio2,
    ];

    /// Images of `(0, 1, ∞)`.
    fn images(self) -> [Cusp; 3] {
        use Cusp::*;
        match self {
            Moebius::Id => [Zero, One, Infinity],
            Moebius::Inv => [Infinity, One, Zero],
            Moebius::OneMinus => [One, Zero, Infinity],
            Moebius::InvOneMinus => [One, Infinity, Zero],
            Moebius::Ratio1 => [Infinity, Zero, One],
            Moebius::Ratio2 => [Zero, Infinity, One],
        }
    }

    pub fn on_cusp(self, c: Cusp) -> Cusp {
        let i = match c {
            Cusp::Zero => 0,
            Cusp::One => 1,
            Cusp::Infinity => 2,
        };
        self.images()[i]
    }

    fn from_images(images: [Cusp; 3]) -> Moebius {
        *Moebius::ALL
            .iter()
            .find(|m| m.images() == images)
            .expect("every permutation of the cusps is a Möbius map")
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(self, other: Moebius) -> Moebius {
        Moebius::from_images(other.images().map(|c| self.on_cusp(c)))
    }

    pub fn inverse(self) -> Moebius {
        *Moebius::ALL
            .iter()
            .find(|m| self.compose(**m) == Moebius::Id)
            .expect("group element has an inverse")
    }

    /// Maps sending the cusp `from` to `to`.
    pub fn sending(from: Cusp, to: Cusp) -> Vec<Moebius> {
        Moebius::ALL.into_iter().filter(|m| m.on_cusp(from) == to).collect()
    }

    /// `(a, b) ↦ (a', b')` on homogeneous coordinates of `z = a/b`.
    fn on_pair<T>(self, a: T, b: T, sub: impl Fn(T, T) -> T) -> (T, T)
    where
        T: Copy,
    {
        match self {
            Moebius::Id => (a, b),
            Moebius::Inv => (b, a),
            Moebius::OneMinus => (sub(b, a), b),
            Moebius::InvOneMinus => (b, sub(b, a)),
            Moebius::Ratio1 => (sub(a, b), a),
            Moebius::Ratio2 => (a, sub(a, b)),
        }
    }

    pub fn apply(self, z: &RationalPoint) -> Result<RationalPoint> {
        let (a, b) = (z.numerator(), z.denominator());
        let overflow = std::cell::Cell::new(false);
        let sub = |x: i128, y: i128| {
            x.checked_sub(y).unwrap_or_else(|| {
                overflow.set(true);
                0
            })
        };
        let (num, den) = self.on_pair(a, b, sub);
        if overflow.get() {
            return Err(Error::Overflow);
        }
        if den == 0 {
            return Err(Error::Pole);
        }
        RationalPoint::new(num, den)
    }

    pub fn apply_padic(self, z: &PAdic) -> Result<PAdic> {
        let one = PAdic::one(z.prime(), z.absolute_precision().max(1) as u32);
        let one_minus = || one.checked_sub(z);
        let nonzero = |w: PAdic| -> Result<PAdic> {
            if w.is_zero() {
                Err(Error::Pole)
            } else {
                Ok(w)
            }
        };
        match self {
            Moebius::Id => Ok(z.clone()),
            Moebius::Inv => nonzero(z.clone())?.inverse(),
            Moebius::OneMinus => one_minus(),
            Moebius::InvOneMinus => nonzero(one_minus()?)?.inverse(),
            Moebius::Ratio1 => z.checked_sub(&one)?.checked_div(&nonzero(z.clone())?),
            Moebius::Ratio2 => z.checked_div(&nonzero(z.checked_sub(&one)?)?),
        }
    }

    /// Applies the cusp permutation entrywise.
    pub fn act_on_refinement(self, sigma: &RefinementCondition) -> RefinementCondition {
        RefinementCondition::new(sigma.entries().iter().map(|&c| self.on_cusp(c)).collect())
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Moebius::Id => "id",
            Moebius::Inv => "inv",
            Moebius::OneMinus => "oneminus",
            Moebius::InvOneMinus => "invoneminus",
            Moebius::Ratio1 => "ratio1",
            Moebius::Ratio2 => "ratio2",
        };
        write!(f, "{name}")
    }
}

impl FromStr for Moebius {
    type Err = Error;
    fn from_str(s: &str) -> Result<Moebius> {
        Moebius::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown Möbius map '{s}'")))
    }
}

/// `{σ(z)}` over the six maps, sorted by height.
pub fn orbit(z: &RationalPoint) -> Result<Vec<RationalPoint>> {
    let mut out = BTreeSet::new();
    for m in Moebius::ALL {
        out.insert(m.apply(z)?);
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(Moebius::OneMinus.apply(&pt("2")).unwrap(), pt("-1"));
        assert_eq!(Moebius::Inv.apply(&pt("2")).unwrap(), pt("1/2"));
        assert_eq!(Moebius::Ratio1.apply(&pt("-1")).unwrap(), pt("2"));
        let sig = |s: &str| s.parse::<RefinementCondition>().unwrap();
        assert_eq!(Moebius::Id.act_on_refinement(&sig("1,inf")), sig("1,inf"));
        assert_eq!(Moebius::OneMinus.act_on_refinement(&sig("1")), sig("0"));
        assert_eq!(Moebius::Inv.act_on_refinement(&sig("0")), sig("inf"));
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&pt("-1")).unwrap(), vec![pt("-1"), pt("1/2"), pt("2")]);
        let mut want = vec![pt("3"), pt("1/3"), pt("-2"), pt("-1/2"), pt("2/3"), pt("3/2")];
        want.sort();
        assert_eq!(orbit(&pt("3")).unwrap(), want);
        // only the −1 orbit is short among rationals
        for a in -30i128..30 {
            for b in 1..30i128 {
                if let Ok(z) = RationalPoint::new(a, b) {
                    let n = orbit(&z).unwrap().len();
                    let special = ["-1", "2", "1/2"].map(pt).contains(&z);
                    assert_eq!(n, if special { 3 } else { 6 }, "{z}");
                }
            }
        }
    }

    #[test]
    fn group_law_matches_formulas() {
        let samples = ["3", "-2", "5/7", "-11/4", "9/2"].map(pt);
        for s in Moebius::ALL {
            for t in Moebius::ALL {
                let st = s.compose(t);
                for z in &samples {
                    assert_eq!(st.apply(z).unwrap(), s.apply(&t.apply(z).unwrap()).unwrap());
                }
            }
            assert_eq!(s.compose(s.inverse()), Moebius::Id);
        }
    }

    #[test]
    fn padic_application() {
        let p = 7;
        for m in Moebius::ALL {
            for z in ["3", "-1", "1/2", "14", "2/7"].map(pt) {
                let want = m.apply(&z).unwrap().to_padic(p, 10).unwrap();
                let got = m.apply_padic(&z.to_padic(p, 10).unwrap()).unwrap();
                let abs = got.absolute_precision().min(want.absolute_precision());
                assert!(got.congruent(&want, abs).unwrap(), "{m}({z}) = {got}");
                assert!(abs >= 8, "{m}({z}) lost too much: {got}");
            }
        }
        assert_eq!(Moebius::Inv.apply_padic(&PAdic::zero(7, 5)), Err(Error::Pole));
    }

    #[test]
    fn names_round_trip() {
        for m in Moebius::ALL {
            assert_eq!(m.to_string().parse::<Moebius>().unwrap(), m);
        }
        assert_eq!(Moebius::sending(Cusp::One, Cusp::Zero).len(), 2);
    }
}
