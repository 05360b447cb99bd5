//! Vacuum moments of X_β(φ) = B†(φ) + B(φ) + βN(φ).

use swnlab::basespace::{GridFunction, GridSpace};
use swnlab::swn::{vacuum_moment, vacuum_moment_auto, SwnSpace};

fn main() -> swnlab::Result<()> {
    let grid = GridSpace::uniform(1, 1.0)?;
    let one = GridFunction::constant(grid.clone(), 1.0);
    for beta in [0.0, 1.0, 2.0] {
        let m: Vec<f64> = (0..=6).map(|k| vacuum_moment_auto(beta, &one, k)).collect::<swnlab::Result<_>>()?;
        println!("beta = {beta}: {m:?}");
    }

    // the result does not move when the truncation grows
    let small = vacuum_moment(1.0, &one, 6, &SwnSpace::new(grid.clone(), 7, 7)?)?;
    let large = vacuum_moment(1.0, &one, 6, &SwnSpace::new(grid.clone(), 10, 12)?)?;
    println!("k = 6 at N=M=7: {small}, at N=12 M=10: {large}");
    println!("too small: {}", vacuum_moment(1.0, &one, 6, &SwnSpace::new(grid, 7, 4)?).unwrap_err());
    Ok(())
}
