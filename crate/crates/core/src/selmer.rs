//! The polylogarithmic localisation map as symbolic polynomials.
//!
//! Coordinates `log, Li_1, …, Li_n` on the local side are sent to
//! polynomials in the Selmer coordinates `x_ℓ, y_ℓ` (ℓ ∈ S) and
//! `z_3, z_5, …`, with one opaque period `a_w` per term, where `w` is a word
//! in the generators `τ_ℓ` and `σ_{2i+1}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{iwasawa_log, PAdic};
use crate::primes::prime_set;

/// Largest depth accepted by [`build_localisation`].
pub const MAX_DEPTH: usize = 64;
/// Cap on the number of terms a map may hold.
pub const MAX_TERMS: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    /// `τ_ℓ`, degree 1.
    Tau(u64),
    /// `σ_{2i+1}` for odd index ≥ 3.
    Sigma(u32),
}

impl Generator {
    pub fn degree(&self) -> u32 {
        match self {
            Generator::Tau(_) => 1,
            Generator::Sigma(k) => *k,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Tau(l) => write!(f, "t{l}"),
            Generator::Sigma(k) => write!(f, "s{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(Generator::degree).sum()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Known closed value of a single-letter period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KnownValue {
    /// `a_{τ_ℓ} = log_p(ℓ)`
    LogOf(u64),
    /// `a_{σ_k} = ζ_p(k)`
    ZetaAt(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientSymbol {
    pub word: Word,
    pub known: Option<KnownValue>,
}

impl CoefficientSymbol {
    pub fn new(word: Word) -> CoefficientSymbol {
        let known = match word.letters() {
            [Generator::Tau(l)] => Some(KnownValue::LogOf(*l)),
            [Generator::Sigma(k)] => Some(KnownValue::ZetaAt(*k)),
            _ => None,
        };
        CoefficientSymbol { word, known }
    }
}

impl fmt::Display for CoefficientSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{}]", self.word)
    }
}

/// Selmer-scheme coordinates, in canonical order: every `x`, then every
/// `y` (by prime), then the `z`'s ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    X(u64),
    Y(u64),
    Z(u32),
}

impl Variable {
    pub fn weight(&self) -> u32 {
        match self {
            Variable::X(_) | Variable::Y(_) => 1,
            Variable::Z(k) => *k,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::X(l) => write!(f, "x{l}"),
            Variable::Y(l) => write!(f, "y{l}"),
            Variable::Z(k) => write!(f, "z{k}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(BTreeMap<Variable, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Variable>) -> Monomial {
        let mut m = Monomial::one();
        for v in vars {
            *m.0.entry(v).or_insert(0) += 1;
        }
        m
    }

    pub fn exponents(&self) -> &BTreeMap<Variable, u32> {
        &self.0
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.weight() * e).sum()
    }

    fn z_part(&self) -> Option<u32> {
        self.0.keys().find_map(|v| match v {
            Variable::Z(k) => Some(*k),
            _ => None,
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Key of one term; the coefficient symbol is determined by the word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermKey {
    pub word: Word,
    pub monomial: Monomial,
}

impl Ord for TermKey {
    /// `z`-free terms first, then by `z` index, word and monomial.
    fn cmp(&self, other: &Self) -> Ordering {
        self.monomial
            .z_part()
            .cmp(&other.monomial.z_part())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.monomial.cmp(&other.monomial))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: term → signed integer multiplicity (never zero).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolicPoly(BTreeMap<TermKey, i64>);

impl SymbolicPoly {
    pub fn zero() -> SymbolicPoly {
        SymbolicPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, word: Word, monomial: Monomial, multiplicity: i64) {
        let key = TermKey { word, monomial };
        let entry = self.0.entry(key.clone()).or_insert(0);
        *entry += multiplicity;
        if *entry == 0 {
            self.0.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, i64)> {
        self.0.iter().map(|(k, m)| (k, *m))
    }

    /// Substitutes each variable by `Σ c·w` (a signed linear form), or
    /// leaves it alone when `subst` returns `None`.
    fn substitute(&self, subst: &dyn Fn(Variable) -> Option<Vec<(i64, Variable)>>) -> SymbolicPoly {
        let mut out = SymbolicPoly::zero();
        for (key, mult) in self.terms() {
            // expand the product of substituted linear forms
            let mut partial: Vec<(i64, Monomial)> = vec![(mult, Monomial::one())];
            for (&var, &exp) in key.monomial.exponents() {
                let form = subst(var).unwrap_or_else(|| vec![(1, var)]);
                for _ in 0..exp {
                    let mut next = Vec::with_capacity(partial.len() * form.len());
                    for (c, m) in &partial {
                        for &(c2, v2) in &form {
                            let mut m2 = m.clone();
                            *m2.0.entry(v2).or_insert(0) += 1;
                            next.push((c * c2, m2));
                        }
                    }
                    partial = next;
                }
            }
            for (c, m) in partial {
                if c != 0 {
                    out.add_term(key.word.clone(), m, c);
                }
            }
        }
        out
    }
}

impl fmt::Display for SymbolicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, mult)) in self.terms().enumerate() {
            let sym = CoefficientSymbol::new(key.word.clone());
            let mag = mult.unsigned_abs();
            match (i, mult < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{sym}")?;
            if !key.monomial.0.is_empty() {
                write!(f, "*{}", key.monomial)?;
            }
        }
        Ok(())
    }
}

/// A de Rham coordinate: `log` or `Li_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coordinate {
    Log,
    Li(u32),
}

impl Coordinate {
    pub fn weight(&self) -> u32 {
        match self {
            Coordinate::Log => 1,
            Coordinate::Li(k) => *k,
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Log => write!(f, "log"),
            Coordinate::Li(k) => write!(f, "Li_{k}"),
        }
    }
}

/// One of the three cusps; orders as `0 < 1 < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cusp {
    Zero,
    One,
    Infinity,
}

impl Cusp {
    pub const ALL: [Cusp; 3] = [Cusp::Zero, Cusp::One, Cusp::Infinity];
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Zero => write!(f, "0"),
            Cusp::One => write!(f, "1"),
            Cusp::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Cusp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Cusp> {
        match s.trim() {
            "0" => Ok(Cusp::Zero),
            "1" => Ok(Cusp::One),
            "inf" | "infinity" | "∞" => Ok(Cusp::Infinity),
            other => Err(Error::Parse(format!("unknown cusp '{other}'"))),
        }
    }
}

/// A choice of cusp for every prime of S, in the order of S.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefinementCondition(pub Vec<Cusp>);

impl RefinementCondition {
    pub fn new(entries: Vec<Cusp>) -> RefinementCondition {
        RefinementCondition(entries)
    }

    pub fn entries(&self) -> &[Cusp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `3^{|S|}` conditions in lexicographic order.
    pub fn all(len: usize) -> Vec<RefinementCondition> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Cusp>| {
                    Cusp::ALL.into_iter().map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(RefinementCondition).collect()
    }
}

impl fmt::Display for RefinementCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for RefinementCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<RefinementCondition> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(RefinementCondition(Vec::new()));
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(RefinementCondition)
    }
}

/// The homomorphism on coordinate rings, one polynomial per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalisationMap {
    primes: Vec<u64>,
    depth: usize,
    coordinates: Vec<(Coordinate, SymbolicPoly)>,
}

impl LocalisationMap {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coordinates(&self) -> &[(Coordinate, SymbolicPoly)] {
        &self.coordinates
    }

    pub fn get(&self, c: Coordinate) -> Option<&SymbolicPoly> {
        self.coordinates.iter().find(|(k, _)| *k == c).map(|(_, p)| p)
    }

    /// Coordinates of the Selmer side, in canonical order.
    pub fn variables(&self) -> Vec<Variable> {
        let mut vars: Vec<Variable> = self.primes.iter().map(|&l| Variable::X(l)).collect();
        vars.extend(self.primes.iter().map(|&l| Variable::Y(l)));
        vars.extend((1..=(self.depth.saturating_sub(1) / 2)).map(|i| Variable::Z(2 * i as u32 + 1)));
        vars
    }

    /// One line per coordinate: `Li_3 -> a[t2.t2.t2]*x2^2*y2 + a[s3]*z3`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (c, poly) in &self.coordinates {
            out.push_str(&format!("{c} -> {poly}\n"));
        }
        out
    }

    /// Structured form for JSON output.
    pub fn dump(&self) -> MapDump {
        MapDump {
            s: self.primes.clone(),
            depth: self.depth,
            coordinates: self
                .coordinates
                .iter()
                .map(|(c, poly)| CoordinateDump {
                    coordinate: c.to_string(),
                    terms: poly
                        .terms()
                        .map(|(k, m)| TermDump {
                            word: k.word.0.iter().map(|g| g.to_string()).collect(),
                            monomial: k
                                .monomial
                                .exponents()
                                .iter()
                                .map(|(v, e)| (v.to_string(), *e))
                                .collect(),
                            multiplicity: m,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDump {
    pub word: Vec<String>,
    pub monomial: Vec<(String, u32)>,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateDump {
    pub coordinate: String,
    pub terms: Vec<TermDump>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDump {
    pub s: Vec<u64>,
    pub depth: usize,
    pub coordinates: Vec<CoordinateDump>,
}

/// All sequences of length `len` over `primes`, lexicographic.
fn tuples(primes: &[u64], len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                primes.iter().map(move |&l| {
                    let mut v = prefix.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

fn term_count(s: usize, depth: usize) -> u128 {
    let s = s as u128;
    let mut total = s; // log
    for k in 1..=depth as u32 {
        total += s.saturating_pow(k);
        for i in 1..=((k - 1) / 2) {
            total += s.saturating_pow(k - 2 * i - 1);
        }
    }
    total
}

/// The localisation map for prime set `s` in depth `n`.
///
/// `log ↦ Σ_ℓ a_{τ_ℓ} x_ℓ` and
/// `Li_k ↦ Σ a_{τ_{ℓ1}…τ_{ℓ(k−1)} τ_q} x_{ℓ1}⋯x_{ℓ(k−1)} y_q
///        + Σ_i Σ a_{σ_{2i+1} τ_{ℓ1}…} x_{ℓ1}⋯x_{ℓ(k−2i−1)} z_{2i+1}`.
pub fn build_localisation(s: &[u64], n: usize) -> Result<LocalisationMap> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    if n > MAX_DEPTH {
        return Err(Error::DepthTooLarge(n, MAX_DEPTH));
    }
    let primes = prime_set(s)?;
    let count = term_count(primes.len(), n);
    if count > MAX_TERMS {
        return Err(Error::TooManyTerms(count, MAX_TERMS));
    }

    let mut coordinates = Vec::with_capacity(n + 1);
    let mut log = SymbolicPoly::zero();
    for &l in &primes {
        log.add_term(Word(vec![Generator::Tau(l)]), Monomial::from_vars([Variable::X(l)]), 1);
    }
    coordinates.push((Coordinate::Log, log));

    for k in 1..=n {
        let mut poly = SymbolicPoly::zero();
        for xs in tuples(&primes, k - 1) {
            for &q in &primes {
                let mut word: Vec<Generator> = xs.iter().map(|&l| Generator::Tau(l)).collect();
                word.push(Generator::Tau(q));
                let vars = xs.iter().map(|&l| Variable::X(l)).chain([Variable::Y(q)]);
                poly.add_term(Word(word), Monomial::from_vars(vars), 1);
            }
        }
        for i in 1..=((k - 1) / 2) {
            let odd = (2 * i + 1) as u32;
            for xs in tuples(&primes, k - 2 * i - 1) {
                let mut word = vec![Generator::Sigma(odd)];
                word.extend(xs.iter().map(|&l| Generator::Tau(l)));
                let vars = xs.iter().map(|&l| Variable::X(l)).chain([Variable::Z(odd)]);
                poly.add_term(Word(word), Monomial::from_vars(vars), 1);
            }
        }
        coordinates.push((Coordinate::Li(k as u32), poly));
    }

    Ok(LocalisationMap {
        primes,
        depth: n,
        coordinates,
    })
}

/// Restricts to the refined Selmer scheme of `sigma`:
/// `y_ℓ = 0` at cusp 0, `x_ℓ = 0` at cusp 1, `y_ℓ = −x_ℓ` at ∞.
pub fn restrict_refinement(map: &LocalisationMap, sigma: &RefinementCondition) -> Result<LocalisationMap> {
    if sigma.len() != map.primes.len() {
        return Err(Error::IndexMismatch {
            expected: map.primes.len(),
            got: sigma.len(),
        });
    }
    let cusp_of: BTreeMap<u64, Cusp> = map.primes.iter().copied().zip(sigma.0.iter().copied()).collect();
    let subst = |v: Variable| -> Option<Vec<(i64, Variable)>> {
        match v {
            Variable::X(l) if cusp_of[&l] == Cusp::One => Some(vec![]),
            Variable::Y(l) if cusp_of[&l] == Cusp::Zero => Some(vec![]),
            Variable::Y(l) if cusp_of[&l] == Cusp::Infinity => Some(vec![(-1, Variable::X(l))]),
            _ => None,
        }
    };
    let coordinates = map
        .coordinates
        .iter()
        .map(|(c, poly)| (*c, poly.substitute(&subst)))
        .collect();
    Ok(LocalisationMap {
        primes: map.primes.clone(),
        depth: map.depth,
        coordinates,
    })
}

/// Coordinates whose image is identically zero.
pub fn vanishing_coordinates(map: &LocalisationMap) -> Vec<Coordinate> {
    map.coordinates
        .iter()
        .filter(|(_, p)| p.is_zero())
        .map(|(c, _)| *c)
        .collect()
}

/// `2·|S| + ⌊(n−1)/2⌋`.
pub fn selmer_dimension(s: &[u64], n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    Ok(2 * prime_set(s)?.len() + (n - 1) / 2)
}

/// Coefficient of a term after replacing known periods where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Numeric(PAdic),
    Symbol(CoefficientSymbol),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Numeric(x) => write!(f, "({x})"),
            Coefficient::Symbol(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedTerm {
    pub coefficient: Coefficient,
    pub monomial: Monomial,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedMap {
    pub prime: u64,
    pub coordinates: Vec<(Coordinate, Vec<SpecializedTerm>)>,
}

/// Replaces every `a_{τ_ℓ}` by `log_p(ℓ)` at precision `precision`;
/// `σ` and multi-letter periods stay symbolic.
pub fn specialize_single_letter(map: &LocalisationMap, p: u64, precision: u32) -> Result<SpecializedMap> {
    if map.primes.contains(&p) {
        return Err(Error::Domain(format!("p = {p} lies in S")));
    }
    let mut logs: BTreeMap<u64, PAdic> = BTreeMap::new();
    for &l in &map.primes {
        logs.insert(l, iwasawa_log(&PAdic::from_integer(l, p, precision)?)?);
    }
    let coordinates = map
        .coordinates
        .iter()
        .map(|(c, poly)| {
            let terms = poly
                .terms()
                .map(|(key, m)| {
                    let sym = CoefficientSymbol::new(key.word.clone());
                    let coefficient = match sym.known {
                        Some(KnownValue::LogOf(l)) => Coefficient::Numeric(logs[&l].clone()),
                        _ => Coefficient::Symbol(sym),
                    };
                    SpecializedTerm {
                        coefficient,
                        monomial: key.monomial.clone(),
                        multiplicity: m,
                    }
                })
                .collect();
            (*c, terms)
        })
        .collect();
    Ok(SpecializedMap { prime: p, coordinates })
}
