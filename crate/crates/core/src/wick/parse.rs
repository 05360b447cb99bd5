//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! sum     := ['+'|'-'] product (('+'|'-') product)*
//! product := power (['*'] power)*
//! power   := atom ['^' integer]
//! atom    := integer ['/' integer] | 'c' | '(' sum ')' | '[' sum ',' sum ']'
//!          | letter '(' label ')' | 'delta' '(' label ',' label ')'
//! letter  := b | bd | p | pd | B | Bd | N
//! ```
//!
//! `B(x) = b(x)^2`, `Bd(x) = bd(x)^2` and `N(x) = bd(x) b(x)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use super::{commutator, CPoly, Letter, Species, WickExpression};
use crate::error::{Error, Result};

/// Parsed, unexpanded expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Number(Rational64),
    C,
    Letter { name: String, label: String },
    Delta(String, String),
    Sum(Vec<(bool, Source)>),
    Product(Vec<Source>),
    Power(Box<Source>, u32),
    Commutator(Box<Source>, Box<Source>),
}

impl Source {
    /// Products are concatenated without normal ordering; commutators are
    /// normal-ordered since they are defined through it.
    pub fn expand(&self) -> WickExpression {
        match self {
            Source::Number(r) => WickExpression::scalar(CPoly::constant(*r)),
            Source::C => WickExpression::scalar(CPoly::c_power(1)),
            Source::Letter { name, label } => expand_letter(name, label),
            Source::Delta(a, b) => WickExpression::delta(a, b),
            Source::Sum(parts) => parts.iter().fold(WickExpression::zero(), |acc, (neg, s)| {
                if *neg {
                    acc.sub(&s.expand())
                } else {
                    acc.add(&s.expand())
                }
            }),
            Source::Product(parts) => parts
                .iter()
                .fold(WickExpression::scalar(CPoly::from_int(1)), |acc, s| acc.mul(&s.expand())),
            Source::Power(base, n) => {
                let b = base.expand();
                (0..*n).fold(WickExpression::scalar(CPoly::from_int(1)), |acc, _| acc.mul(&b))
            }
            Source::Commutator(a, b) => commutator(&a.expand(), &b.expand()),
        }
    }

    /// Renders with labels renamed through `map` (unmapped labels kept).
    pub fn render(&self, map: &BTreeMap<String, String>) -> String {
        let lab = |l: &String| map.get(l).cloned().unwrap_or_else(|| l.clone());
        match self {
            Source::Number(r) => r.to_string(),
            Source::C => "c".into(),
            Source::Letter { name, label } => format!("{name}({})", lab(label)),
            Source::Delta(a, b) => format!("delta({},{})", lab(a), lab(b)),
            Source::Sum(parts) => {
                let mut s = String::new();
                for (i, (neg, p)) in parts.iter().enumerate() {
                    match (i, neg) {
                        (0, false) => {}
                        (0, true) => s.push('-'),
                        (_, false) => s.push_str(" + "),
                        (_, true) => s.push_str(" - "),
                    }
                    s.push_str(&p.render(map));
                }
                s
            }
            Source::Product(parts) => parts
                .iter()
                .map(|p| match p {
                    Source::Sum(_) => format!("({})", p.render(map)),
                    _ => p.render(map),
                })
                .collect::<Vec<_>>()
                .join(" "),
            Source::Power(b, n) => match **b {
                Source::Sum(_) | Source::Product(_) => format!("({})^{n}", b.render(map)),
                _ => format!("{}^{n}", b.render(map)),
            },
            Source::Commutator(a, b) => format!("[{}, {}]", a.render(map), b.render(map)),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&BTreeMap::new()))
    }
}

fn expand_letter(name: &str, label: &str) -> WickExpression {
    let l = |species, creator| WickExpression::letter(Letter::new(species, creator, label));
    match name {
        "b" => l(Species::B, false),
        "bd" => l(Species::B, true),
        "p" => l(Species::P, false),
        "pd" => l(Species::P, true),
        "B" => l(Species::B, false).mul(&l(Species::B, false)),
        "Bd" => l(Species::B, true).mul(&l(Species::B, true)),
        "N" => l(Species::B, true).mul(&l(Species::B, false)),
        _ => unreachable!("letter names are checked by the parser"),
    }
}

const LETTERS: [&str; 7] = ["b", "bd", "p", "pd", "B", "Bd", "N"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

pub(super) struct Lexer {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Lexer {
    pub(super) fn new(text: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, ch) = chars[i];
            if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                let n = s.parse().map_err(|_| Error::Parse { pos, msg: format!("integer `{s}` out of range") })?;
                toks.push((pos, Tok::Int(n)));
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                toks.push((pos, Tok::Ident(chars[start..i].iter().map(|c| c.1).collect())));
            } else if "+-*/^()[],<>".contains(ch) {
                toks.push((pos, Tok::Sym(ch)));
                i += 1;
            } else {
                return Err(Error::Parse { pos, msg: format!("unexpected character `{ch}`") });
            }
        }
        toks.push((text.len(), Tok::End));
        Ok(Lexer { toks, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    pub(super) fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(super) fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: format!("expected {expected}, found {}", self.peek()) })
    }

    pub(super) fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(super) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(&format!("`{c}`"))
        }
    }

    pub(super) fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    pub(super) fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) => Some(s),
            _ => None,
        }
    }

    pub(super) fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    pub(super) fn peek_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    pub(super) fn int(&mut self) -> Option<i64> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Some(n)
            }
            _ => None,
        }
    }

    /// `integer ['/' integer]`, with a nonzero denominator.
    pub(super) fn rational(&mut self) -> Result<Option<Rational64>> {
        let Some(n) = self.int() else { return Ok(None) };
        if self.eat('/') {
            let pos = self.pos();
            match self.int() {
                Some(0) => Err(Error::Parse { pos, msg: "zero denominator".into() }),
                Some(d) => Ok(Some(Rational64::new(n, d))),
                None => self.error("denominator"),
            }
        } else {
            Ok(Some(Rational64::from_integer(n)))
        }
    }
}

pub fn parse(text: &str) -> Result<Source> {
    let mut lx = Lexer::new(text)?;
    let s = sum(&mut lx)?;
    if !lx.at_end() {
        return lx.error("operator, `+`, `-` or end of input");
    }
    Ok(s)
}

/// Splits `lhs = rhs` at the single `=`.
pub fn parse_identity(text: &str) -> Result<(Source, Source)> {
    let Some(eq) = text.find('=') else {
        return Err(Error::Parse { pos: text.len(), msg: "expected `=` between the two sides".into() });
    };
    let shift = |e: Error, by: usize| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    };
    let lhs = parse(&text[..eq])?;
    let rhs = parse(&text[eq + 1..]).map_err(|e| shift(e, eq + 1))?;
    Ok((lhs, rhs))
}

fn sum(lx: &mut Lexer) -> Result<Source> {
    let mut parts = Vec::new();
    let mut neg = if lx.eat('-') {
        true
    } else {
        lx.eat('+');
        false
    };
    loop {
        parts.push((neg, product(lx)?));
        if lx.eat('+') {
            neg = false;
        } else if lx.eat('-') {
            neg = true;
        } else {
            break;
        }
    }
    Ok(if parts.len() == 1 && !parts[0].0 { parts.pop().unwrap().1 } else { Source::Sum(parts) })
}

fn starts_atom(lx: &Lexer) -> bool {
    lx.peek_sym('(') || lx.peek_sym('[') || matches!(lx.peek(), Tok::Int(_) | Tok::Ident(_))
}

fn product(lx: &mut Lexer) -> Result<Source> {
    let mut parts = vec![power(lx)?];
    loop {
        if lx.eat('*') || starts_atom(lx) {
            parts.push(power(lx)?);
        } else {
            break;
        }
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Source::Product(parts) })
}

fn power(lx: &mut Lexer) -> Result<Source> {
    let base = atom(lx)?;
    if lx.eat('^') {
        match lx.int() {
            Some(n) if (0..=32).contains(&n) => Ok(Source::Power(Box::new(base), n as u32)),
            Some(_) => lx.error("exponent between 0 and 32"),
            None => lx.error("integer exponent"),
        }
    } else {
        Ok(base)
    }
}

fn atom(lx: &mut Lexer) -> Result<Source> {
    if let Some(r) = lx.rational()? {
        return Ok(Source::Number(r));
    }
    if lx.eat('(') {
        let s = sum(lx)?;
        lx.expect(')')?;
        return Ok(s);
    }
    if lx.eat('[') {
        let a = sum(lx)?;
        lx.expect(',')?;
        let b = sum(lx)?;
        lx.expect(']')?;
        return Ok(Source::Commutator(Box::new(a), Box::new(b)));
    }
    let pos = lx.pos();
    let name = lx.ident("number, `c`, `(`, `[`, `delta` or one of b, bd, p, pd, B, Bd, N")?;
    if name == "c" {
        return Ok(Source::C);
    }
    if name == "delta" {
        lx.expect('(')?;
        let a = lx.ident("label")?;
        lx.expect(',')?;
        let b = lx.ident("label")?;
        lx.expect(')')?;
        return Ok(Source::Delta(a, b));
    }
    if !LETTERS.contains(&name.as_str()) {
        return Err(Error::Parse {
            pos,
            msg: format!("unknown operator `{name}`, expected one of b, bd, p, pd, B, Bd, N, delta, c"),
        });
    }
    lx.expect('(')?;
    let label = lx.ident("label")?;
    lx.expect(')')?;
    Ok(Source::Letter { name, label })
}
