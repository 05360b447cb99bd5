//! Identity corpus: one identity per line, `#` comments, optional
//! directives before a `:`.
//!
//! ```text
//! [N(x), Bd(y)] = 2 delta(x,y) Bd(y)
//! c=2 plain : [2 p(x) + 2 pd(x) p(x)^2, 2 pd(y)] = 4 delta(x,y) + 8 delta(x,y) pd(y) p(y)
//! smear x=phi y=psi : [B(x), Bd(y)] = 2 c delta(x,y) + 4 delta(x,y) N(y) => 2 c <phi,psi> + 4 N(phi psi)
//! ```
//!
//! `c=<rational>` compares at that value of `c`; `plain` additionally
//! requires that the left side never uses the renormalization `δ² = cδ`,
//! i.e. its canonical form carries no power of `c`; `smear` maps labels to test
//! functions and compares the smeared reading of the left side with the
//! expression after `=>`.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{compare, parse_identity, parse_smeared, smear, Smearing, Verdict};
use crate::error::{Error, Result};

pub const BUILTIN_CORPUS: &str = include_str!("identities.txt");

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseOptions {
    pub c: Option<Rational64>,
    pub plain: bool,
    pub smear: Option<Smearing>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCase {
    pub line: usize,
    pub options: CaseOptions,
    pub identity: String,
    pub smeared: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub case: CorpusCase,
    pub pass: bool,
    pub verdict: Option<Verdict>,
    /// Smeared reading of the left side, when requested.
    pub smeared_lhs: Option<String>,
    pub reading: Option<String>,
    pub detail: String,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Config(format!("corpus line {}: {msg}", i + 1));
        let (head, body) = match line.split_once(':') {
            Some((h, b)) => (Some(h), b),
            None => (None, line),
        };
        let mut options = CaseOptions::default();
        for word in head.into_iter().flat_map(str::split_whitespace) {
            if word == "plain" {
                options.plain = true;
            } else if word == "smear" {
                options.smear.get_or_insert_with(BTreeMap::new);
            } else if let Some(v) = word.strip_prefix("c=") {
                options.c = Some(v.parse().map_err(|_| at(format!("bad value `{v}` for c")))?);
            } else if let Some((label, func)) = word.split_once('=') {
                match options.smear.as_mut() {
                    Some(m) => {
                        m.insert(label.to_string(), func.to_string());
                    }
                    None => return Err(at(format!("`{word}` outside a smear directive"))),
                }
            } else {
                return Err(at(format!("unknown directive `{word}`")));
            }
        }
        let (identity, smeared) = match body.split_once("=>") {
            Some((id, s)) => (id.trim().to_string(), Some(s.trim().to_string())),
            None => (body.trim().to_string(), None),
        };
        if options.smear.is_some() != smeared.is_some() {
            return Err(at("`smear` and `=>` must appear together".into()));
        }
        cases.push(CorpusCase { line: i + 1, options, identity, smeared });
    }
    Ok(cases)
}

pub fn builtin_corpus() -> Vec<CorpusCase> {
    parse_corpus(BUILTIN_CORPUS).expect("builtin corpus parses")
}

pub fn run_case(case: &CorpusCase) -> CaseOutcome {
    match run_inner(case) {
        Ok(o) => o,
        Err(e) => CaseOutcome {
            case: case.clone(),
            pass: false,
            verdict: None,
            smeared_lhs: None,
            reading: None,
            detail: e.to_string(),
        },
    }
}

fn run_inner(case: &CorpusCase) -> Result<CaseOutcome> {
    let (lhs_src, rhs_src) = parse_identity(&case.identity)?;
    let verdict = compare(&lhs_src.expand(), &rhs_src.expand(), case.options.c);
    let mut pass = verdict.pass;
    let mut detail = verdict.to_string();
    if case.options.plain {
        let symbolic = compare(&lhs_src.expand(), &rhs_src.expand(), None);
        if symbolic.lhs.terms().any(|(_, c)| c.degree() > 0) {
            pass = false;
            detail = format!("renormalization used: {}", symbolic.lhs);
        }
    }
    let (mut smeared_lhs, mut reading) = (None, None);
    if let (Some(map), Some(expected)) = (&case.options.smear, &case.smeared) {
        let got = smear(&verdict.lhs, map)?;
        let want = parse_smeared(expected)?;
        smeared_lhs = Some(lhs_src.render(map));
        reading = Some(got.to_string());
        if got != want {
            pass = false;
            detail = format!("smeared reading {got} differs from {want}");
        }
    }
    Ok(CaseOutcome { case: case.clone(), pass, verdict: Some(verdict), smeared_lhs, reading, detail })
}
