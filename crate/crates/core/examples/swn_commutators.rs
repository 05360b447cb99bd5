//! The six square-of-white-noise relations, checked numerically in the
//! Fock representation on random vectors of the safe window.

use swnlab::basespace::GridSpace;
use swnlab::crosscheck::seeded_function;
use swnlab::fock::create;
use swnlab::relations::SwnRelation;
use swnlab::swn::{commutator_residual, relation_operators, SwnSpace};

fn main() -> swnlab::Result<()> {
    let grid = GridSpace::uniform(2, 0.5)?;
    let space = SwnSpace::new(grid.clone(), 5, 5)?;
    let phi = seeded_function(&grid, 1);
    let psi = seeded_function(&grid, 2);
    let vectors = (0..4).map(|s| space.random_test_vector(s, 8)).collect::<swnlab::Result<Vec<_>>>()?;

    for rel in SwnRelation::ALL {
        let (p, q, rhs) = relation_operators(rel, &phi, &psi, &space)?;
        let r = commutator_residual((&p, &q), &rhs, &vectors)?;
        println!("{:<10} max relative residual {r:.2e}", rel.name());
    }

    // vectors within two levels of the truncation ceiling are refused
    let g = space.embed(&phi, 1);
    let high = (0..4).try_fold(space.vacuum(), |f, _| create(&g, &f))?;
    println!("level-4 vector with N = 5: {}", space.check_window(&high).unwrap_err());
    Ok(())
}
