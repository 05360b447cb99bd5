//! Vacuum moments of X_β(φ), of 2a_β(φ) and of 2⟨·,φ⟩ from its cumulants,
//! side by side.

use swnlab::basespace::GridSpace;
use swnlab::crosscheck::{seeded_function, theorem1_moment_check, NamedFunction};

fn main() -> swnlab::Result<()> {
    let grid = GridSpace::uniform(3, 0.5)?;
    let phi = NamedFunction { name: "seed7".into(), function: seeded_function(&grid, 7) };
    for beta in [0.0, 3.0] {
        println!("beta = {beta}");
        for r in theorem1_moment_check(beta, &phi, "G=3 v=0.5", 8, 1e-8) {
            println!(
                "  k={}  swn {:>16.9}  extended {:>16.9}  cumulants {:>16.9}  rel {:.1e} {}",
                r.params.order.unwrap_or(0),
                r.lhs[0],
                r.rhs[0],
                r.rhs[1],
                r.rel_error,
                if r.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
