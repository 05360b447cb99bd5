//! Creation, annihilation and second quantization on a truncated symmetric
//! Fock space in the occupation basis.

use swnlab::fock::{annihilate, create, dgamma, fock_inner, vacuum, Occupation, OneParticleOperator};

fn main() -> swnlab::Result<()> {
    let dim = 3;
    let omega = vacuum(dim, 4);
    let g = [1.0, 0.0, 2.0];
    let h = [0.5, 1.0, 0.0];

    let f = create(&h, &create(&g, &omega)?)?;
    println!("A+(h) A+(g) Omega:");
    for (occ, c) in f.entries() {
        println!("  {occ}  {c}");
    }

    // [A-(g), A+(h)] = <g, h> on a vector well below the ceiling
    let lhs = annihilate(&g, &create(&h, &f)?)?.axpy(-1.0, &create(&h, &annihilate(&g, &f)?)?)?;
    let gh: f64 = g.iter().zip(&h).map(|(a, b)| a * b).sum();
    println!("||[A-(g), A+(h)] F - <g,h> F|| = {:e}", lhs.axpy(-gh, &f)?.norm());

    let number = OneParticleOperator::identity(dim);
    let n_f = dgamma(&number, &f)?;
    println!("<F, dGamma(1) F> / <F, F> = {}", fock_inner(&f, &n_f)? / fock_inner(&f, &f)?);
    println!("weight of {{0^2,2^1}} = {}", Occupation::from_modes(vec![0, 0, 2]).weight());
    Ok(())
}
