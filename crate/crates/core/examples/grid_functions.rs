//! Test functions on a finite grid and their L² pairings.

use swnlab::basespace::{inner, pointwise_product, GridFunction, GridSpace};

fn main() -> swnlab::Result<()> {
    let grid = GridSpace::uniform(3, 0.5)?;
    let phi = GridFunction::new(grid.clone(), vec![1.0, 2.0, 3.0])?;
    let psi = GridFunction::new(grid.clone(), vec![0.5, -1.0, 2.0])?;

    println!("<phi, psi>     = {}", inner(&phi, &psi)?);
    println!("phi psi        = {:?}", pointwise_product(&phi, &psi)?.values());
    println!("v sum phi^3    = {}", phi.integral_of_power(3));

    let other = GridSpace::uniform(3, 1.0)?;
    let stranger = GridFunction::constant(other, 1.0);
    println!("different grid -> {}", inner(&phi, &stranger).unwrap_err());
    Ok(())
}
