//! Exact normal ordering of words in `b, b†` (and a second independent
//! species `∂, ∂†`) with spatial labels, under the CCR
//! `[b(x), b†(y)] = δ(x-y)` and the renormalization `δ(x-y)² = c δ(x-y)`.
//!
//! A term is a coefficient polynomial in `c`, a set of delta factors and a
//! word. Delta factors are kept as a partition of the labels: every label is
//! replaced by the least label of its class, and a delta whose endpoints are
//! already identified contributes a factor `c`. With this bookkeeping two
//! products of deltas are equal exactly when they impose the same
//! identifications and the same number of redundant constraints.

mod corpus;
mod parse;
mod smear;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub use corpus::{builtin_corpus, parse_corpus, run_case, CaseOptions, CaseOutcome, CorpusCase, BUILTIN_CORPUS};
pub use parse::{parse, parse_identity, Source};
pub use smear::{parse_smeared, smear, Smeared, SmearedFactor, Smearing};

/// Polynomial in the renormalization constant `c` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CPoly(BTreeMap<u32, Rational64>);

impl CPoly {
    pub fn zero() -> Self {
        CPoly(BTreeMap::new())
    }

    pub fn constant(r: Rational64) -> Self {
        CPoly::monomial(r, 0)
    }

    pub fn from_int(n: i64) -> Self {
        CPoly::constant(Rational64::from_integer(n))
    }

    pub fn c_power(power: u32) -> Self {
        CPoly::monomial(Rational64::one(), power)
    }

    fn monomial(r: Rational64, power: u32) -> Self {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(power, r);
        }
        CPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest power of `c` (0 for constants and for zero).
    pub fn degree(&self) -> u32 {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Coefficient of `c^power`.
    pub fn coefficient(&self, power: u32) -> Rational64 {
        self.0.get(&power).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn add_assign(&mut self, other: &CPoly) {
        for (&p, &r) in &other.0 {
            let e = self.0.entry(p).or_insert_with(Rational64::zero);
            *e += r;
            if e.is_zero() {
                self.0.remove(&p);
            }
        }
    }

    pub fn neg(&self) -> CPoly {
        CPoly(self.0.iter().map(|(&p, &r)| (p, -r)).collect())
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (&p, &r) in &self.0 {
            for (&q, &s) in &other.0 {
                out.add_assign(&CPoly::monomial(r * s, p + q));
            }
        }
        out
    }

    /// Value at `c = value`.
    pub fn eval(&self, value: Rational64) -> Rational64 {
        self.0.iter().fold(Rational64::zero(), |acc, (&p, &r)| acc + r * num_traits::pow(value, p as usize))
    }

    fn is_single_monomial(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (&p, &r)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if r.is_negative() { '-' } else { '+' })?;
            } else if r.is_negative() {
                write!(f, "-")?;
            }
            let a = r.abs();
            match (p, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a} ")?,
            }
            match p {
                0 => {}
                1 => write!(f, "c")?,
                _ => write!(f, "c^{p}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    /// `b`, `b†`
    B,
    /// `∂`, `∂†`
    P,
}

/// One operator letter. Creators sort before annihilators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub annihilator: bool,
    pub species: Species,
    pub label: String,
}

impl Letter {
    pub fn new(species: Species, creator: bool, label: impl Into<String>) -> Self {
        Letter { annihilator: !creator, species, label: label.into() }
    }

    pub fn is_creator(&self) -> bool {
        !self.annihilator
    }

    pub fn symbol(&self) -> &'static str {
        match (self.species, self.annihilator) {
            (Species::B, false) => "bd",
            (Species::B, true) => "b",
            (Species::P, false) => "pd",
            (Species::P, true) => "p",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.symbol(), self.label)
    }
}

/// Label classes of size at least two imposed by the delta factors.
pub type Classes = BTreeSet<BTreeSet<String>>;

/// Delta classes and a word, with labels replaced by class representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    classes: Classes,
    word: Vec<Letter>,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial { classes: Classes::new(), word: Vec::new() }
    }

    pub fn letter(l: Letter) -> Self {
        Monomial { classes: Classes::new(), word: vec![l] }
    }

    pub fn classes(&self) -> &Classes {
        &self.classes
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.word.windows(2).all(|w| !(w[0].annihilator && w[1].is_creator()))
    }

    /// `self · other · Π δ(a, b)` over `extra`, with the number of delta
    /// constraints that were already implied.
    fn product(&self, other: &Monomial, extra: &[(String, String)]) -> (Monomial, u32) {
        let mut uf = LabelClasses::default();
        for class in self.classes.iter().chain(&other.classes) {
            let mut it = class.iter();
            let root = it.next().expect("nonempty class");
            for m in it {
                uf.join(root, m);
            }
        }
        for (a, b) in extra {
            uf.join(a, b);
        }
        let word = self.word.iter().chain(&other.word).cloned().collect();
        let (classes, redundant) = uf.finish();
        let mut m = Monomial { classes, word };
        m.relabel();
        (m, redundant)
    }

    fn relabel(&mut self) {
        let mut rep = BTreeMap::new();
        for class in &self.classes {
            let first = class.iter().next().expect("nonempty class").clone();
            for m in class {
                rep.insert(m.clone(), first.clone());
            }
        }
        for l in &mut self.word {
            if let Some(r) = rep.get(&l.label) {
                l.label = r.clone();
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for class in &self.classes {
            let mut it = class.iter();
            let root = it.next().expect("nonempty class");
            parts.extend(it.map(|m| format!("delta({root},{m})")));
        }
        parts.extend(self.word.iter().map(Letter::to_string));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Union-find over labels that counts redundant joins.
#[derive(Default)]
struct LabelClasses {
    parent: BTreeMap<String, String>,
    redundant: u32,
}

impl LabelClasses {
    fn find(&mut self, x: &str) -> String {
        let mut cur = x.to_string();
        while let Some(p) = self.parent.get(&cur) {
            if *p == cur {
                break;
            }
            cur = p.clone();
        }
        self.parent.entry(x.to_string()).or_insert_with(|| x.to_string());
        cur
    }

    fn join(&mut self, a: &str, b: &str) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            self.redundant += 1;
        } else {
            self.parent.insert(rb, ra);
        }
    }

    fn finish(mut self) -> (Classes, u32) {
        let labels: Vec<String> = self.parent.keys().cloned().collect();
        let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for l in labels {
            let r = self.find(&l);
            groups.entry(r).or_default().insert(l);
        }
        let classes = groups.into_values().filter(|g| g.len() > 1).collect();
        (classes, self.redundant)
    }
}

/// Finite sum of monomials with coefficients in `Q[c]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WickExpression {
    terms: BTreeMap<Monomial, CPoly>,
}

impl WickExpression {
    pub fn zero() -> Self {
        WickExpression::default()
    }

    pub fn scalar(p: CPoly) -> Self {
        let mut e = WickExpression::zero();
        e.add_term(Monomial::identity(), &p);
        e
    }

    pub fn letter(l: Letter) -> Self {
        let mut e = WickExpression::zero();
        e.add_term(Monomial::letter(l), &CPoly::from_int(1));
        e
    }

    /// `δ(a - b)`; a self-delta `δ(a - a)` is the constant `c`.
    pub fn delta(a: &str, b: &str) -> Self {
        let (m, redundant) = Monomial::identity().product(&Monomial::identity(), &[(a.to_string(), b.to_string())]);
        let mut e = WickExpression::zero();
        e.add_term(m, &CPoly::c_power(redundant));
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, coef: &CPoly) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        entry.add_assign(coef);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CPoly::from_int(-1)))
    }

    pub fn scale(&self, s: &CPoly) -> Self {
        let mut out = WickExpression::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul(s));
        }
        out
    }

    /// Concatenation product; the result is not normal-ordered.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = WickExpression::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let (m, redundant) = m1.product(m2, &[]);
                out.add_term(m, &c1.mul(c2).mul(&CPoly::c_power(redundant)));
            }
        }
        out
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(Monomial::is_normal_ordered)
    }

    /// Coefficients evaluated at `c = value`.
    pub fn at_c(&self, value: Rational64) -> Self {
        let mut out = WickExpression::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &CPoly::constant(c.eval(value)));
        }
        out
    }
}

impl fmt::Display for WickExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, c) = if c.is_single_monomial() && c.0.values().next().is_some_and(|r| r.is_negative()) {
                ("-", c.neg())
            } else {
                ("+", c.clone())
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            let coef = if c.is_single_monomial() { c.to_string() } else { format!("({c})") };
            let is_identity = m.classes.is_empty() && m.word.is_empty();
            match (coef.as_str(), is_identity) {
                (_, true) => write!(f, "{coef}")?,
                ("1", false) => write!(f, "{m}")?,
                (_, false) => write!(f, "{coef} {m}")?,
            }
        }
        Ok(())
    }
}

/// Moves every annihilator to the right of every creator using the CCR; the
/// two species commute with each other. Creators and annihilators are then
/// sorted, which is the canonical form.
pub fn normal_order(e: &WickExpression) -> WickExpression {
    let mut out = WickExpression::zero();
    let mut stack: Vec<(Monomial, CPoly)> = e.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((mut m, coef)) = stack.pop() {
        let Some(i) = m.word.windows(2).position(|w| w[0].annihilator && w[1].is_creator()) else {
            let split = m.word.iter().position(|l| l.annihilator).unwrap_or(m.word.len());
            m.word[..split].sort();
            m.word[split..].sort();
            out.add_term(m, &coef);
            continue;
        };
        if m.word[i].species == m.word[i + 1].species {
            let a = m.word[i].label.clone();
            let b = m.word[i + 1].label.clone();
            let mut rest = m.clone();
            rest.word.drain(i..i + 2);
            let (contracted, redundant) = rest.product(&Monomial::identity(), &[(a, b)]);
            stack.push((contracted, coef.mul(&CPoly::c_power(redundant))));
        }
        m.word.swap(i, i + 1);
        stack.push((m, coef));
    }
    out
}

pub fn commutator(a: &WickExpression, b: &WickExpression) -> WickExpression {
    normal_order(&a.mul(b).sub(&b.mul(a)))
}

/// Result of comparing two expressions in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub lhs: WickExpression,
    pub rhs: WickExpression,
    /// `lhs - rhs`, empty on success.
    pub difference: WickExpression,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "ok: {}", self.lhs)
        } else {
            write!(f, "mismatch\n  lhs: {}\n  rhs: {}\n  lhs - rhs: {}", self.lhs, self.rhs, self.difference)
        }
    }
}

/// Value substituted for `c` before comparison; `None` keeps it symbolic.
pub type CValue = Option<Rational64>;

/// Parses `lhs` and `rhs`, normal-orders both and compares canonical forms.
pub fn verify_identity(lhs: &str, rhs: &str, c: CValue) -> crate::Result<Verdict> {
    let l = parse(lhs)?.expand();
    let r = parse(rhs)?.expand();
    Ok(compare(&l, &r, c))
}

pub fn compare(lhs: &WickExpression, rhs: &WickExpression, c: CValue) -> Verdict {
    let (mut l, mut r) = (normal_order(lhs), normal_order(rhs));
    if let Some(v) = c {
        l = l.at_c(v);
        r = r.at_c(v);
    }
    let difference = l.sub(&r);
    Verdict { pass: difference.is_empty(), lhs: l, rhs: r, difference }
}

/// Parses the `--c` argument: `sym` or a rational such as `2` or `3/2`.
pub fn parse_c_value(text: &str) -> crate::Result<CValue> {
    let t = text.trim();
    if t == "sym" {
        return Ok(None);
    }
    t.parse::<Rational64>()
        .map(Some)
        .map_err(|_| crate::Error::Config(format!("--c expects `sym` or a rational, got `{t}`")))
}
