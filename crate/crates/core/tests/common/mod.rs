//! Randomized property checks shared by the `properties` and `acceptance`
//! targets. Every check runs a fixed-seed proptest runner.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use kimloci_core::padic::{exp_principal, iwasawa_log, teichmuller};
use kimloci_core::s3::Moebius;
use kimloci_core::selmer::{build_localisation, restrict_refinement, Cusp};
use kimloci_core::sunit::{enumerate_integral_points, reduce_mod_ell, refinement_membership, Reduction};
use kimloci_core::sweep::Execution;
use kimloci_core::{PAdic, RationalPoint, RefinementCondition};

pub const CASES: u32 = 1000;
pub const PRIMES: [u64; 5] = [3, 5, 7, 13, 101];
pub const PRECISION: u32 = 8;

fn runner(seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn lift<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub type Outcome = Result<(), String>;

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Outcome {
    r.map_err(|e| e.to_string())
}

/// `p^e·m` with `e` small and `m` a random nonzero integer.
fn padic_int(p: u64) -> impl Strategy<Value = (u32, i64)> {
    (0u32..4, (-1_000_000_000i64..1_000_000_000).prop_filter("nonzero", move |m| m % p as i64 != 0))
}

fn build(p: u64, (e, m): (u32, i64)) -> Result<PAdic, TestCaseError> {
    let x = lift(PAdic::from_integer(m, p, PRECISION))?;
    Ok(x.shift(e as i64))
}

pub fn ultrametric(p: u64) -> Outcome {
    let strategy = (padic_int(p), padic_int(p), any::<bool>());
    finish(runner(0x5eed_0001 ^ p).run(&strategy, |(a, b, cancel)| {
        let x = build(p, a)?;
        // half the cases force cancellation in the leading digits
        let y = if cancel {
            let k = build(p, b)?.shift(1);
            lift(x.negate().checked_add(&k))?
        } else {
            build(p, b)?
        };
        let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
        let sum = lift(x.checked_add(&y))?;
        match sum.valuation() {
            Some(vs) => {
                check(vs >= vx.min(vy), || format!("v({x} + {y}) = {vs}"))?;
                if vx != vy {
                    check(vs == vx.min(vy), || format!("v({x} + {y}) = {vs}, expected equality"))?;
                }
            }
            None => check(sum.absolute_precision() >= vx.min(vy), || format!("{x} + {y} = {sum}"))?,
        }
        Ok(())
    }))
}

pub fn log_homomorphism(p: u64) -> Outcome {
    let unit = (-1_000_000_000i64..1_000_000_000).prop_filter("unit", move |m| m % p as i64 != 0);
    finish(runner(0x5eed_0002 ^ p).run(&(unit.clone(), unit), |(u, w)| {
        let (u, w) = (lift(PAdic::from_integer(u, p, PRECISION))?, lift(PAdic::from_integer(w, p, PRECISION))?);
        let lhs = lift(iwasawa_log(&lift(u.checked_mul(&w))?))?;
        let rhs = lift(lift(iwasawa_log(&u))?.checked_add(&lift(iwasawa_log(&w))?))?;
        check(lift(lhs.congruent(&rhs, PRECISION as i64))?, || format!("log({u}·{w}): {lhs} vs {rhs}"))
    }))
}

pub fn teichmuller_fixed_point(p: u64) -> Outcome {
    finish(runner(0x5eed_0003 ^ p).run(&(1..p, 1u32..=16), |(a, n)| {
        let w = lift(teichmuller(a, p, n))?;
        let one = PAdic::one(p, n);
        check(lift(lift(w.pow(p as i64 - 1))?.congruent(&one, n as i64))?, || format!("w({a})^(p-1) = {w}"))?;
        check(lift(w.residue())? == a, || format!("w({a}) = {w} has the wrong residue"))?;
        check(lift(iwasawa_log(&w))?.is_zero(), || format!("log w({a}) nonzero"))
    }))
}

pub fn log_exp_round_trip(p: u64) -> Outcome {
    let strategy = (1u32..4, (-1_000_000_000i64..1_000_000_000).prop_filter("nonzero", |m| *m != 0));
    finish(runner(0x5eed_0004 ^ p).run(&strategy, |(e, m)| {
        let t = lift(PAdic::from_integer(m, p, PRECISION))?.shift(e as i64);
        let back = lift(iwasawa_log(&lift(exp_principal(&t))?))?;
        let abs = back.absolute_precision().min(t.absolute_precision());
        check(abs >= PRECISION as i64, || format!("round trip of {t} kept only {abs} digits"))?;
        check(lift(back.congruent(&t, abs))?, || format!("log(exp({t})) = {back}"))
    }))
}

pub fn restriction_idempotence() -> Outcome {
    let pool = [2u64, 3, 5, 7];
    let strategy = (prop::sample::subsequence(pool.to_vec(), 0..=3), 1usize..=5, any::<u64>());
    finish(runner(0x5eed_0005).run(&strategy, |(s, depth, pick)| {
        let map = lift(build_localisation(&s, depth))?;
        let all = RefinementCondition::all(s.len());
        let sigma = &all[(pick % all.len() as u64) as usize];
        let once = lift(restrict_refinement(&map, sigma))?;
        let twice = lift(restrict_refinement(&once, sigma))?;
        check(once == twice, || format!("S={s:?} n={depth} {sigma}"))
    }))
}

fn moebius() -> impl Strategy<Value = Moebius> {
    prop::sample::select(Moebius::ALL.to_vec())
}

fn rational() -> impl Strategy<Value = RationalPoint> {
    (-1_000_000i128..1_000_000, 1i128..1_000_000).prop_filter_map("cusp", |(a, b)| RationalPoint::new(a, b).ok())
}

pub fn s3_group_law() -> Outcome {
    finish(runner(0x5eed_0006).run(&(moebius(), moebius(), rational()), |(s, t, z)| {
        let st = s.compose(t);
        let lhs = lift(st.apply(&z))?;
        let rhs = lift(s.apply(&lift(t.apply(&z))?))?;
        check(lhs == rhs, || format!("({s}∘{t})({z}) = {lhs}, {s}({t}({z})) = {rhs}"))?;
        for c in Cusp::ALL {
            check(st.on_cusp(c) == s.on_cusp(t.on_cusp(c)), || format!("cusp {c} under {s}∘{t}"))?;
        }
        check(s.compose(s.inverse()) == Moebius::Id, || format!("{s} inverse"))
    }))
}

pub fn s3_group_law_padic(p: u64) -> Outcome {
    let strategy = (moebius(), moebius(), 2..p, 0u32..3, (1i64..1_000_000).prop_map(|m| m));
    finish(runner(0x5eed_0007 ^ p).run(&strategy, |(s, t, a, e, m)| {
        // a point of Y(Z_p): residue a ∉ {0, 1} plus a random p-adic tail
        let z = lift(lift(PAdic::from_integer(a as i64, p, PRECISION))?
            .checked_add(&lift(PAdic::from_integer(m, p, PRECISION))?.shift(e as i64 + 1)))?;
        let lhs = lift(s.compose(t).apply_padic(&z))?;
        let rhs = lift(s.apply_padic(&lift(t.apply_padic(&z))?))?;
        let abs = lhs.absolute_precision().min(rhs.absolute_precision());
        check(abs >= PRECISION as i64, || format!("lost precision: {lhs}"))?;
        check(lift(lhs.congruent(&rhs, abs))?, || format!("{s}∘{t} at {z}: {lhs} vs {rhs}"))
    }))
}

pub fn s3_equivariance(s: &[u64]) -> Outcome {
    let points = enumerate_integral_points(s, 3, Execution::Sequential).map_err(|e| e.to_string())?;
    if points.is_empty() {
        return Err(format!("no points for S = {s:?}"));
    }
    let conditions = RefinementCondition::all(s.len());
    let strategy = (
        prop::sample::select(points),
        moebius(),
        prop::sample::select(conditions),
    );
    let s = s.to_vec();
    finish(runner(0x5eed_0008 ^ s.iter().product::<u64>()).run(&strategy, |(z, m, sigma)| {
        let mz = lift(m.apply(&z))?;
        check(mz.is_s_integral(&s), || format!("{m}({z}) = {mz} left Y(Z_S)"))?;
        let before = lift(refinement_membership(&z, &sigma, &s))?;
        let after = lift(refinement_membership(&mz, &m.act_on_refinement(&sigma), &s))?;
        check(before == after, || format!("membership of {z} in {sigma} under {m}"))?;
        for &l in &s {
            let expect = match reduce_mod_ell(&z, l) {
                Reduction::Cusp(c) => Some(Reduction::Cusp(m.on_cusp(c))),
                Reduction::Point(_) => None,
            };
            let got = reduce_mod_ell(&mz, l);
            match expect {
                Some(e) => check(got == e, || format!("{m}({z}) mod {l} = {got}, expected {e}"))?,
                None => check(matches!(got, Reduction::Point(_)), || format!("{m}({z}) mod {l} = {got}"))?,
            }
        }
        Ok(())
    }))
}

pub const EQUIVARIANCE_SETS: [&[u64]; 3] = [&[2], &[2, 3], &[2, 3, 5]];

/// Every suite and configuration, in a fixed order.
pub fn all_suites() -> Vec<(String, Outcome)> {
    let mut out = Vec::new();
    for p in PRIMES {
        out.push((format!("ultrametric p={p}"), ultrametric(p)));
    }
    for p in PRIMES {
        out.push((format!("log homomorphism p={p}"), log_homomorphism(p)));
    }
    for p in PRIMES {
        out.push((format!("teichmuller fixed point p={p}"), teichmuller_fixed_point(p)));
    }
    for p in PRIMES {
        out.push((format!("log-exp round trip p={p}"), log_exp_round_trip(p)));
    }
    out.push(("restriction idempotence".into(), restriction_idempotence()));
    out.push(("S3 group law (rational)".into(), s3_group_law()));
    for p in PRIMES {
        out.push((format!("S3 group law (p-adic) p={p}"), s3_group_law_padic(p)));
    }
    for s in EQUIVARIANCE_SETS {
        out.push((format!("S3 equivariance S={s:?}"), s3_equivariance(s)));
    }
    out
}
