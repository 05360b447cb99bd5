//! Smeared reading of a pointwise identity: each label is integrated
//! against a named test function, a delta class collapses its functions to
//! a pointwise product, and a class with no operators left becomes the
//! integral `⟨φ, ψ, ...⟩ = ∫ φψ...`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::parse::Lexer;
use super::{CPoly, Letter, Species, WickExpression};
use crate::error::{Error, Result};

/// Label to test-function name.
pub type Smearing = BTreeMap<String, String>;

/// A smeared operator (or integral when `word` is empty) evaluated at the
/// pointwise product of `functions`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmearedFactor {
    pub functions: Vec<String>,
    pub word: Vec<&'static str>,
}

impl SmearedFactor {
    fn new(mut functions: Vec<String>, word: Vec<&'static str>) -> Self {
        functions.sort();
        SmearedFactor { functions, word }
    }
}

impl fmt::Display for SmearedFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fns = self.functions.join(" ");
        match self.word.as_slice() {
            [] => write!(f, "<{}>", self.functions.join(",")),
            ["bd", "b"] => write!(f, "N({fns})"),
            ["b", "b"] => write!(f, "B({fns})"),
            ["bd", "bd"] => write!(f, "Bd({fns})"),
            [one] => write!(f, "{one}({fns})"),
            w => write!(f, "{{{}}}({fns})", w.join(" ")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Smeared {
    terms: BTreeMap<Vec<SmearedFactor>, CPoly>,
}

impl Smeared {
    fn add(&mut self, mut factors: Vec<SmearedFactor>, coef: &CPoly) {
        factors.sort();
        let e = self.terms.entry(factors.clone()).or_default();
        e.add_assign(coef);
        if e.is_zero() {
            self.terms.remove(&factors);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Smeared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (factors, coef)) in self.terms.iter().enumerate() {
            let c = coef.to_string();
            let (neg, c) = match c.strip_prefix('-') {
                Some(rest) if coef.0.len() == 1 => (true, rest.to_string()),
                _ if coef.0.len() > 1 => (false, format!("({c})")),
                _ => (false, c),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body: Vec<String> = factors.iter().map(ToString::to_string).collect();
            match (c.as_str(), body.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                ("1", false) => write!(f, "{}", body.join(" "))?,
                (_, false) => write!(f, "{c} {}", body.join(" "))?,
            }
        }
        Ok(())
    }
}

/// Smeared reading of a normal-ordered expression. Every label that occurs
/// must be smeared; smeared labels absent from a term contribute `⟨φ⟩`.
pub fn smear(e: &WickExpression, smearing: &Smearing) -> Result<Smeared> {
    let mut out = Smeared::default();
    for (m, coef) in e.terms() {
        let mut groups: Vec<BTreeSet<String>> = m.classes().iter().cloned().collect();
        let covered: BTreeSet<String> = groups.iter().flatten().cloned().collect();
        let loose: BTreeSet<String> = smearing
            .keys()
            .cloned()
            .chain(m.word().iter().map(|l| l.label.clone()))
            .filter(|l| !covered.contains(l))
            .collect();
        groups.extend(loose.into_iter().map(|l| BTreeSet::from([l])));
        let mut factors = Vec::new();
        for g in groups {
            let functions = g
                .iter()
                .map(|l| {
                    smearing
                        .get(l)
                        .cloned()
                        .ok_or_else(|| Error::Domain(format!("label `{l}` has no test function")))
                })
                .collect::<Result<Vec<_>>>()?;
            let rep = g.iter().next().expect("nonempty group");
            let word = m.word().iter().filter(|l| &l.label == rep).map(Letter::symbol).collect();
            factors.push(SmearedFactor::new(functions, word));
        }
        out.add(factors, coef);
    }
    Ok(out)
}

/// Parses a smeared expression such as `2 c <phi,psi> + 4 N(phi psi)`.
pub fn parse_smeared(text: &str) -> Result<Smeared> {
    let mut lx = Lexer::new(text)?;
    let mut out = Smeared::default();
    let mut neg = lx.eat('-');
    if !neg {
        lx.eat('+');
    }
    loop {
        let mut coef = CPoly::from_int(if neg { -1 } else { 1 });
        let mut factors = Vec::new();
        let mut any = false;
        loop {
            if let Some(r) = lx.rational()? {
                coef = coef.mul(&CPoly::constant(r));
            } else if lx.eat('<') {
                let mut fns = vec![lx.ident("function name")?];
                while lx.eat(',') {
                    fns.push(lx.ident("function name")?);
                }
                lx.expect('>')?;
                factors.push(SmearedFactor::new(fns, Vec::new()));
            } else if let Some(name) = lx.peek_ident().map(str::to_string) {
                let pos = lx.pos();
                lx.ident("name")?;
                if name == "c" {
                    coef = coef.mul(&CPoly::c_power(1));
                } else {
                    let word = smeared_word(&name)
                        .ok_or_else(|| Error::Parse { pos, msg: format!("unknown smeared operator `{name}`") })?;
                    lx.expect('(')?;
                    let mut fns = vec![lx.ident("function name")?];
                    while let Some(f) = lx.peek_ident().map(str::to_string) {
                        lx.ident("function name")?;
                        fns.push(f);
                    }
                    lx.expect(')')?;
                    factors.push(SmearedFactor::new(fns, word));
                }
            } else if !any {
                return lx.error("coefficient, `c`, `<` or smeared operator");
            } else {
                break;
            }
            any = true;
            lx.eat('*');
        }
        out.add(factors, &coef);
        if lx.eat('+') {
            neg = false;
        } else if lx.eat('-') {
            neg = true;
        } else if lx.at_end() {
            return Ok(out);
        } else {
            return lx.error("`+`, `-` or end of input");
        }
    }
}

fn smeared_word(name: &str) -> Option<Vec<&'static str>> {
    let l = |creator| Letter::new(Species::B, creator, "").symbol();
    let p = |creator| Letter::new(Species::P, creator, "").symbol();
    Some(match name {
        "N" => vec![l(true), l(false)],
        "B" => vec![l(false), l(false)],
        "Bd" => vec![l(true), l(true)],
        "b" => vec![l(false)],
        "bd" => vec![l(true)],
        "p" => vec![p(false)],
        "pd" => vec![p(true)],
        _ => return None,
    })
}
