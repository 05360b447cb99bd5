//! The Jacobi matrix of the Meixner-class recurrence, its orthogonal
//! polynomials and the moments of its spectral measure in each regime.

use swnlab::jacobi::{jacobi_beta, polynomial_sequence};
use swnlab::meixner::{regime_moment, LevyMeasureSpec};

fn main() -> swnlab::Result<()> {
    for beta in [0.0, 1.0, 2.0, 3.0, 5.0] {
        let spec = LevyMeasureSpec::new(beta)?;
        let exact = jacobi_beta(beta, 6)?.vacuum_moments(5);
        let measured = (0..=5).map(|j| regime_moment(&spec, j)).collect::<swnlab::Result<Vec<_>>>()?;
        println!("beta = {beta} ({:?})", spec.regime());
        println!("  (J^j)_11       {exact:?}");
        println!("  moments of nu~ {measured:?}");
    }

    let p = polynomial_sequence(2.0, 4)?;
    for n in 0..=4 {
        println!("P~_{n} coefficients {:?}, squared norm {}", p.coefficients(n), swnlab::jacobi::PolynomialSequence::squared_norm(n));
    }
    Ok(())
}
