//! Per-prime loci, prime sweeps and reports.
//!
//! Two statements are checked prime by prime:
//!
//! * **refined**, S = {2}: the refined locus is `{2, −1, 1/2}`. The Σ = (1)
//!   part is computed from the finite polylogarithm `li_{p−3}`, the other two
//!   conditions are obtained from it by the S₃ action. If 2 ∉ S the refined
//!   Selmer scheme is empty and so is every locus.
//! * **unrefined**, S = ∅, depth p−3: the locus is empty. Teichmüller
//!   candidates other than −1 are removed by `li_{p−3}`, and −1 by a
//!   numerical certificate that `log 2 ≠ 0`.

use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{certify_log_integer, iwasawa_log, teichmuller, LogCertificate, PAdic, PrecisionPolicy};
use crate::polylog::{finite_li_eval, FiniteLi, Fp};
use crate::primes::{check_odd_prime, odd_primes_in, prime_set, primitive_root};
use crate::s3::Moebius;
use crate::selmer::{Cusp, RefinementCondition};
use crate::sunit::{kummer_coordinates, refinement_membership, RationalPoint};
use crate::sweep::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FinitePolylog,
    RootOfUnityOnly,
    #[serde(rename = "derived-by-s3")]
    DerivedByS3,
    /// No refined Selmer points at all (2 ∉ S).
    EmptySelmer,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::FinitePolylog => "finite-polylog",
            Method::RootOfUnityOnly => "root-of-unity-only",
            Method::DerivedByS3 => "derived-by-s3",
            Method::EmptySelmer => "empty-selmer",
        };
        write!(f, "{s}")
    }
}

/// A point of `Y(Z_p)`: residue, p-adic value and, when known, the global
/// point it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusElement {
    pub residue: u64,
    pub lift: PAdic,
    pub label: Option<RationalPoint>,
}

impl fmt::Display for LocusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(z) => write!(f, "{z}"),
            None => write!(f, "w({})", self.residue),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusResult {
    pub p: u64,
    pub sigma: Option<RefinementCondition>,
    pub locus: Vec<LocusElement>,
    pub method: Method,
    pub millis: u64,
    /// Human-readable elimination trace.
    pub note: Option<String>,
}

impl LocusResult {
    pub fn residues(&self) -> Vec<u64> {
        let mut r: Vec<u64> = self.locus.iter().map(|e| e.residue).collect();
        r.sort_unstable();
        r
    }

    pub fn labels(&self) -> Vec<String> {
        self.locus.iter().map(|e| e.to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Counterexample,
    PrecisionFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Counterexample => 1,
            Status::PrecisionFailure => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Verified => "verified",
            Status::Counterexample => "counterexample",
            Status::PrecisionFailure => "precision-failure",
        };
        write!(f, "{s}")
    }
}

/// One serialized row of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub p: u64,
    pub sigma: Option<String>,
    pub locus: Vec<String>,
    pub method: Method,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl From<&LocusResult> for ResultRecord {
    fn from(r: &LocusResult) -> Self {
        ResultRecord {
            p: r.p,
            sigma: r.sigma.as_ref().map(|s| s.to_string()),
            locus: r.labels(),
            method: r.method,
            millis: r.millis,
            note: r.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub s: Vec<u64>,
    pub p_min: u64,
    pub p_max: u64,
    pub precision: u32,
    pub results: Vec<ResultRecord>,
    pub status: Status,
    /// What went wrong, for a non-verified status.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Fault injection for exercising the failure paths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TestHooks {
    /// Add a spurious residue to the locus at this prime.
    pub inject_counterexample: Option<u64>,
    /// Pretend every log certificate came back inconclusive.
    pub force_precision_failure: bool,
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn check_precision(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("precision must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `log(ω(a)) = 0` to the working precision, and `li_{p−3}(a) = 0` for p ≥ 5.
fn recheck_sigma1(p: u64, e: &LocusElement) -> Result<bool> {
    let log_zero = iwasawa_log(&e.lift)?.is_zero();
    let li_zero = p == 3 || finite_li_eval(p - 3, Fp::from_u64(e.residue, p))?.is_zero();
    Ok(log_zero && li_zero)
}

/// The Σ = (1), S = {2} refined locus at `p` to precision `n`.
///
/// Candidates are the Teichmüller points `ω(a)`, `a ∉ {0, 1}` (the zeros of
/// log on `Y(Z_p)`); survivors are the zeros of `li_{p−3}`. Only survivors
/// are lifted. At p = 3 the candidates are the roots of unity of `Z_3` in
/// Y, which is just −1.
pub fn refined_locus_sigma1_s2(p: u64, n: u32) -> Result<LocusResult> {
    check_odd_prime(p)?;
    check_precision(n)?;
    let start = Instant::now();
    let (residues, method) = if p == 3 {
        (vec![2u64], Method::RootOfUnityOnly)
    } else {
        let li = FiniteLi::new(p - 3, p)?;
        (li.roots().into_iter().map(|a| a.value()).collect(), Method::FinitePolylog)
    };
    let minus_one = RationalPoint::integer(-1)?;
    let mut locus = Vec::with_capacity(residues.len());
    for a in residues {
        let lift = teichmuller(a, p, n)?;
        let label = (a == p - 1).then_some(minus_one);
        let e = LocusElement { residue: a, lift, label };
        if !recheck_sigma1(p, &e)? {
            return Err(Error::Domain(format!("locus element {e} at p = {p} failed its recheck")));
        }
        locus.push(e);
    }
    Ok(LocusResult {
        p,
        sigma: Some(RefinementCondition::new(vec![Cusp::One])),
        locus,
        method,
        millis: elapsed_ms(start),
        note: None,
    })
}

/// The Σ = σ((1)) locus obtained by pushing the Σ = (1) locus through σ.
pub fn derive_by_s3(base: &LocusResult, sigma_map: Moebius) -> Result<LocusResult> {
    let start = Instant::now();
    let sigma = base.sigma.as_ref().map(|s| sigma_map.act_on_refinement(s));
    let mut locus = Vec::with_capacity(base.locus.len());
    for e in &base.locus {
        let lift = sigma_map.apply_padic(&e.lift)?;
        let label = e.label.map(|z| sigma_map.apply(&z)).transpose()?;
        let residue = lift.residue()?;
        locus.push(LocusElement { residue, lift, label });
    }
    // pulling back through σ⁻¹ must land on the base locus again
    let inv = sigma_map.inverse();
    for (e, b) in locus.iter().zip(&base.locus) {
        let back = inv.apply_padic(&e.lift)?;
        let abs = back.absolute_precision().min(b.lift.absolute_precision());
        if !back.congruent(&b.lift, abs)? {
            return Err(Error::Domain(format!("S3 transport of {b} at p = {} does not invert", base.p)));
        }
    }
    Ok(LocusResult {
        p: base.p,
        sigma,
        locus,
        method: Method::DerivedByS3,
        millis: elapsed_ms(start),
        note: Some(format!("image under {sigma_map}")),
    })
}

/// The transported locus for `target`, computed without the group action
/// on the locus: candidates `w = σ(ω(a))` for all `a`, kept when
/// `σ⁻¹(w)` has vanishing log and its residue is a zero of `li_{p−3}`.
pub fn direct_transported_locus(p: u64, n: u32, target: Cusp) -> Result<Vec<u64>> {
    check_odd_prime(p)?;
    if p == 3 {
        return Err(Error::Domain("direct transport needs p ≥ 5".into()));
    }
    let sigma_map = Moebius::sending(Cusp::One, target)[0];
    let inv = sigma_map.inverse();
    let li = FiniteLi::new(p - 3, p)?.eval_all();
    let mut out = Vec::new();
    for a in 2..p {
        let w = sigma_map.apply_padic(&teichmuller(a, p, n)?)?;
        let u = inv.apply_padic(&w)?;
        if li[u.residue()? as usize] == 0 && iwasawa_log(&u)?.is_zero() {
            out.push(w.residue()?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn expected_refined_points() -> Result<Vec<RationalPoint>> {
    let mut v = vec![RationalPoint::integer(2)?, RationalPoint::integer(-1)?, RationalPoint::new(1, 2)?];
    v.sort();
    Ok(v)
}

enum PrimeOutcome {
    Ok(Vec<LocusResult>),
    Counterexample(Vec<LocusResult>, String),
    PrecisionFailure(Vec<LocusResult>, String),
}

fn refined_prime(p: u64, n: u32, hooks: TestHooks) -> Result<PrimeOutcome> {
    let s = [2u64];
    let mut base = refined_locus_sigma1_s2(p, n)?;
    if hooks.inject_counterexample == Some(p) {
        let fake = if p == 3 { 1 } else { 2 };
        base.locus.push(LocusElement {
            residue: fake,
            lift: teichmuller(fake, p, n)?,
            label: None,
        });
    }
    let expected_residue = p - 1;
    let extra: Vec<u64> = base.residues().into_iter().filter(|&a| a != expected_residue).collect();
    let missing = !base.residues().contains(&expected_residue);
    if !extra.is_empty() || missing {
        let msg = format!(
            "p = {p}, sigma = (1): extra residues {extra:?}{}",
            if missing { format!(", missing residue {expected_residue}") } else { String::new() }
        );
        return Ok(PrimeOutcome::Counterexample(vec![base], msg));
    }

    let zero = derive_by_s3(&base, Moebius::OneMinus)?;
    let infinity = derive_by_s3(&base, Moebius::Ratio2)?;
    let results = vec![base, zero, infinity];

    let mut union: Vec<RationalPoint> = results
        .iter()
        .flat_map(|r| r.locus.iter().filter_map(|e| e.label))
        .collect();
    union.sort();
    if union != expected_refined_points()? {
        let shown: Vec<String> = union.iter().map(|z| z.to_string()).collect();
        return Ok(PrimeOutcome::Counterexample(
            results,
            format!("p = {p}: union of loci is {{{}}}", shown.join(", ")),
        ));
    }

    // each global point lies in the Kummer region of its condition and
    // reduces compatibly at 2; its lift agrees with the rational value
    for r in &results {
        let sigma = r.sigma.clone().expect("refined results carry a condition");
        let cusp = sigma.entries()[0];
        for e in &r.locus {
            let z = e.label.expect("refined loci are labelled");
            let k = kummer_coordinates(&z, &s)?;
            let in_region = k.regions(2).contains(&cusp);
            let member = refinement_membership(&z, &sigma, &s)?;
            let rational = z.to_padic(p, n)?;
            let abs = rational.absolute_precision().min(e.lift.absolute_precision());
            if !(in_region && member && e.lift.congruent(&rational, abs)?) {
                return Ok(PrimeOutcome::Counterexample(
                    results.clone(),
                    format!("p = {p}: point {z} fails the Kummer cross-check for {sigma}"),
                ));
            }
        }
    }
    Ok(PrimeOutcome::Ok(results))
}

fn empty_selmer_prime(p: u64, s: &[u64]) -> Result<PrimeOutcome> {
    let start = Instant::now();
    let sigmas = RefinementCondition::all(s.len());
    Ok(PrimeOutcome::Ok(vec![LocusResult {
        p,
        sigma: None,
        locus: Vec::new(),
        method: Method::EmptySelmer,
        millis: elapsed_ms(start),
        note: Some(format!("2 not in S: all {} refined Selmer schemes are empty", sigmas.len())),
    }]))
}

fn assemble(
    theorem: &str,
    s: Vec<u64>,
    p_min: u64,
    p_max: u64,
    n: u32,
    outcomes: Vec<Result<PrimeOutcome>>,
) -> Result<VerificationReport> {
    let mut results = Vec::new();
    let mut status = Status::Verified;
    let mut detail = None;
    for outcome in outcomes {
        match outcome? {
            PrimeOutcome::Ok(rs) => results.extend(rs.iter().map(ResultRecord::from)),
            PrimeOutcome::Counterexample(rs, msg) => {
                results.extend(rs.iter().map(ResultRecord::from));
                status = Status::Counterexample;
                detail = Some(msg);
                break;
            }
            PrimeOutcome::PrecisionFailure(rs, msg) => {
                results.extend(rs.iter().map(ResultRecord::from));
                status = Status::PrecisionFailure;
                detail = Some(msg);
                break;
            }
        }
    }
    Ok(VerificationReport {
        theorem: theorem.to_string(),
        s,
        p_min,
        p_max,
        precision: n,
        results,
        status,
        detail,
    })
}

fn check_range(p_min: u64, p_max: u64) -> Result<()> {
    if p_min > p_max {
        return Err(Error::Domain(format!("empty prime range [{p_min}, {p_max}]")));
    }
    Ok(())
}

/// Refined statement over the odd primes in `[p_min, p_max]` not in S.
///
/// S = {2} runs the full computation; any S without 2 takes the empty
/// path. Other sets containing 2 are rejected.
pub fn verify_refined_kim(
    p_min: u64,
    p_max: u64,
    n: u32,
    s: &[u64],
    exec: Execution,
    hooks: TestHooks,
) -> Result<VerificationReport> {
    check_range(p_min, p_max)?;
    check_precision(n)?;
    let s = prime_set(s)?;
    let primes: Vec<u64> = odd_primes_in(p_min, p_max)
        .into_iter()
        .filter(|p| !s.contains(p))
        .collect();
    let outcomes = if s == [2] {
        exec.map(&primes, |&p| refined_prime(p, n, hooks))
    } else if !s.contains(&2) {
        exec.map(&primes, |&p| empty_selmer_prime(p, &s))
    } else {
        return Err(Error::Domain(format!(
            "refined verification supports S = {{2}} or S without 2, got {s:?}"
        )));
    };
    assemble("refined-kim", s, p_min, p_max, n, outcomes)
}

fn unrefined_prime(p: u64, n: u32, policy: &PrecisionPolicy, hooks: TestHooks) -> Result<PrimeOutcome> {
    let start = Instant::now();
    let (survivors, method, mut trace) = if p == 3 {
        (vec![2u64], Method::RootOfUnityOnly, String::from("roots of unity in Y: {-1}"))
    } else {
        let roots: Vec<u64> = FiniteLi::new(p - 3, p)?.roots().into_iter().map(|a| a.value()).collect();
        let t = format!("li_{} roots {:?}", p - 3, roots);
        (roots, Method::FinitePolylog, t)
    };
    let mut survivors = survivors;
    if hooks.inject_counterexample == Some(p) {
        survivors.push(if p == 3 { 1 } else { 2 });
    }

    let mut locus = Vec::new();
    let mut failure = None;
    for &a in &survivors {
        if a != p - 1 {
            // nothing eliminates this candidate
            locus.push(LocusElement {
                residue: a,
                lift: teichmuller(a, p, n)?,
                label: None,
            });
            continue;
        }
        // Li_1(−1) = −log 2
        let cert = if hooks.force_precision_failure {
            LogCertificate::Inconclusive { max_precision: policy.max }
        } else {
            certify_log_integer(2, p, policy)?
        };
        match cert {
            LogCertificate::NonzeroAtPrecision { precision, valuation } => {
                trace.push_str(&format!(
                    "; -log 2 nonzero at precision {precision} (valuation {valuation})"
                ));
            }
            other => {
                failure = Some(format!("p = {p}: log 2 not certified nonzero ({other:?})"));
                locus.push(LocusElement {
                    residue: a,
                    lift: teichmuller(a, p, n)?,
                    label: Some(RationalPoint::integer(-1)?),
                });
            }
        }
    }
    let result = LocusResult {
        p,
        sigma: None,
        locus,
        method,
        millis: elapsed_ms(start),
        note: Some(trace),
    };
    Ok(if let Some(msg) = failure {
        PrimeOutcome::PrecisionFailure(vec![result], msg)
    } else if !result.locus.is_empty() {
        let msg = format!("p = {p}: surviving residues {:?}", result.residues());
        PrimeOutcome::Counterexample(vec![result], msg)
    } else {
        PrimeOutcome::Ok(vec![result])
    })
}

/// Unrefined statement, S = ∅ in depth p−3, over `[p_min, p_max]`.
pub fn verify_unrefined_empty(
    p_min: u64,
    p_max: u64,
    n: u32,
    exec: Execution,
    hooks: TestHooks,
) -> Result<VerificationReport> {
    check_range(p_min, p_max)?;
    let policy = PrecisionPolicy::starting_at(n)?;
    let primes = odd_primes_in(p_min, p_max);
    let outcomes = exec.map(&primes, |&p| unrefined_prime(p, n, &policy, hooks));
    assemble("unrefined-kim", Vec::new(), p_min, p_max, n, outcomes)
}

/// All Teichmüller representatives mod `p^n`, indexed by residue
/// (index 0 unused), from powers of `ω(g)` for a generator `g`.
fn teichmuller_table(p: u64, n: u32) -> Result<Vec<BigUint>> {
    let g = primitive_root(p);
    let wg = teichmuller(g, p, n)?.to_integer_residue()?.0;
    let modulus = BigUint::from(p).pow(n);
    let mut table = vec![BigUint::default(); p as usize];
    let mut x = BigUint::one();
    let mut r = 1u64;
    for _ in 0..p - 1 {
        table[r as usize] = x.clone();
        x = (&x * &wg) % &modulus;
        r = r * g % p;
    }
    Ok(table)
}

/// Depth-1 locus for S = ∅: residues `a` with both `ω(a)` and `1 − ω(a)`
/// roots of unity, i.e. `ω(a) + ω(1 − a) ≡ 1 mod p^n`.
pub fn depth1_locus(p: u64, n: u32) -> Result<LocusResult> {
    check_odd_prime(p)?;
    check_precision(n)?;
    let start = Instant::now();
    let table = teichmuller_table(p, n)?;
    let modulus = BigUint::from(p).pow(n);
    let one = BigUint::one() % &modulus;
    let mut locus = Vec::new();
    for a in 2..p {
        let b = (p + 1 - a) % p;
        if (&table[a as usize] + &table[b as usize]) % &modulus == one {
            locus.push(LocusElement {
                residue: a,
                lift: teichmuller(a, p, n)?,
                label: None,
            });
        }
    }
    Ok(LocusResult {
        p,
        sigma: None,
        locus,
        method: Method::RootOfUnityOnly,
        millis: elapsed_ms(start),
        note: None,
    })
}

/// Roots of `a² − a + 1` in `F_p`: the expected depth-1 residues.
pub fn sixth_root_residues(p: u64) -> Vec<u64> {
    (2..p).filter(|&a| (a * a + 1) % p == a % p).collect()
}

/// True iff the depth-1 locus is nonempty exactly for p ≡ 1 mod 3 and then
/// consists of the roots of `a² − a + 1`.
pub fn depth1_matches_prediction(r: &LocusResult) -> bool {
    let got = r.residues();
    let nonempty_expected = r.p % 3 == 1;
    got.is_empty() != nonempty_expected && (got.is_empty() || got == sixth_root_residues(r.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn render_report(r: &VerificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r).map_err(|e| Error::Io(e.to_string())),
        ReportFormat::Text => {
            let mut out = format!(
                "{} S={:?} p in [{}, {}] N={}: {} ({} rows)\n",
                r.theorem,
                r.s,
                r.p_min,
                r.p_max,
                r.precision,
                r.status,
                r.results.len()
            );
            if let Some(d) = &r.detail {
                out.push_str(&format!("detail: {d}\n"));
            }
            Ok(out)
        }
    }
}

/// Writes the report to `path`.
pub fn emit_report(r: &VerificationReport, path: &Path, format: ReportFormat) -> Result<()> {
    let body = render_report(r, format)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}
