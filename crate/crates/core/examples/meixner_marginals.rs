//! Lévy measures and one-dimensional marginals of the Meixner-class noises.

use swnlab::meixner::{levy_density, marginal_law, LevyMeasureSpec, LevyPoint, MarginalAnswer, MarginalLaw, MarginalQuery, Which};

fn main() -> swnlab::Result<()> {
    let meixner = LevyMeasureSpec::new(1.0)?;
    println!("Meixner nu~(0.5) = {}", levy_density(&meixner, Which::NuTilde, LevyPoint::Real(0.5))?);
    let pascal = LevyMeasureSpec::new(3.0)?;
    println!("Pascal atom 1 at s = {}, nu~ mass {}", pascal.pascal_atom(1), levy_density(&pascal, Which::NuTilde, LevyPoint::Atom(1))?);

    for beta in [0.0, 2.0, 3.0] {
        for area in [0.5, 2.0] {
            let law = MarginalLaw::new(beta, area)?;
            println!(
                "beta={beta} |D|={area}: mass {:.12} mean {:+.1e} variance {:.12}",
                law.total_mass()?,
                law.mean()?,
                law.variance()?
            );
        }
    }

    if let MarginalAnswer::Support(points) = marginal_law(3.0, 1.0, MarginalQuery::Support(4))? {
        for (s, p) in points {
            println!("  P(X = {s:+.6}) = {p:.6}");
        }
    }
    Ok(())
}
