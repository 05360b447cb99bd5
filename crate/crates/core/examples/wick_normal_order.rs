//! Symbolic normal ordering under the CCR and δ² = cδ.

use swnlab::wick::{builtin_corpus, commutator, normal_order, parse, run_case, smear, verify_identity, Smearing};

fn main() -> swnlab::Result<()> {
    let e = |s: &str| parse(s).map(|p| p.expand());
    println!("b(x) bd(y)           -> {}", normal_order(&e("b(x) bd(y)")?));
    println!("delta(x,y)^2         -> {}", normal_order(&e("delta(x,y)^2")?));
    let bb = commutator(&e("B(x)")?, &e("Bd(y)")?);
    println!("[B(x), Bd(y)]        =  {bb}");
    let map = Smearing::from([("x".into(), "phi".into()), ("y".into(), "psi".into())]);
    println!("smeared              =  {}", smear(&bb, &map)?);

    let v = verify_identity("[2 p(x) + 2 pd(x) p(x)^2, 2 pd(y)]", "4 delta(x,y) + 8 delta(x,y) pd(y) p(y)", None)?;
    println!("derivative form: {v}");
    println!("bad input: {}", parse("[B(x), Bd(y)").unwrap_err());

    let cases = builtin_corpus();
    let passed = cases.iter().filter(|c| run_case(c).pass).count();
    println!("builtin corpus: {passed}/{} identities hold", cases.len());
    Ok(())
}
