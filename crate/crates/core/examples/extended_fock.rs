//! The extended Fock space: diagonal patterns, the weighted inner product
//! and the Jacobi field a_β(φ).

use swnlab::basespace::{GridFunction, GridSpace};
use swnlab::extfock::{ext_inner, ext_vacuum_moment, kappa, partitions, single_atom_jacobi, SymmetricKernel};
use swnlab::special::{factorial, rising_factorial};

fn main() -> swnlab::Result<()> {
    for alpha in partitions(4) {
        println!("alpha = {:?}  |alpha| = {}  K = {}", alpha.alpha(), alpha.size(), kappa(&alpha));
    }

    let v = 0.5;
    let atom = GridSpace::uniform(1, v)?;
    let one = GridFunction::constant(atom, 1.0);
    for n in 0..=5 {
        let k = SymmetricKernel::tensor_power(&one, n);
        println!("n={n}: n! (1^n, 1^n)_ext = {}, (v)_n n! = {}", factorial(n) * ext_inner(&k, &k)?, rising_factorial(v, n) * factorial(n));
    }

    let j = single_atom_jacobi(1.5, v, 5)?;
    println!("single-atom Jacobi matrix: diagonal {:?}, off-diagonal {:?}", j.diagonal(), j.off_diagonal());
    let unit = GridFunction::constant(GridSpace::uniform(1, 1.0)?, 1.0);
    println!("<Omega, a_beta^4 Omega> at beta = 2, v = 1: {} (beta^2 + 5 = 9)", ext_vacuum_moment(2.0, &unit, 4, 4)?);
    Ok(())
}
