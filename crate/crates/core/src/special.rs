//! Gamma-function helpers for the Meixner-regime densities.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch-agnostic `ln Γ(z)`; only the real part is reliable
/// modulo `2πi` in the imaginary part, which is all `|Γ|` needs.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) = Γ(z + 1) / z keeps us off the reflection formula, whose
        // sin(πz) overflows for large imaginary parts.
        return ln_gamma(z + 1.0) - z.ln();
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0, "gamma is only needed on the positive axis");
    ln_gamma(Complex64::new(x, 0.0)).re.exp()
}

/// `|Γ(x + iy)|²` through the Lanczos log-gamma.
pub fn abs_gamma_sq(x: f64, y: f64) -> f64 {
    (2.0 * ln_gamma(Complex64::new(x, y)).re).exp()
}

/// `|Γ(1 + iy)|² = πy / sinh(πy)`, written to stay finite for large `|y|`.
pub fn abs_gamma_one_plus_i_sq(y: f64) -> f64 {
    let u = PI * y.abs();
    if u < 1e-8 {
        return 1.0 - u * u / 6.0;
    }
    let e = (-u).exp();
    2.0 * u * e / (1.0 - e * e)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn rising_factorial(x: f64, n: usize) -> f64 {
    (0..n).map(|k| x + k as f64).product()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn real_values() {
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-13);
        assert!(rel(gamma(1.0), 1.0) < 1e-13);
        assert!(rel(gamma(5.0), 24.0) < 1e-13);
        assert!(rel(gamma(2.5), 0.75 * PI.sqrt()) < 1e-13);
        assert!(rel(gamma(0.1), 9.513_507_698_668_732) < 1e-12);
        assert!(rel(gamma(10.3), 716_430.689_418_0) < 1e-9);
    }

    #[test]
    fn imaginary_line_identities() {
        // two independent routes: Lanczos vs the closed forms on Re z = 1 and Re z = 1/2
        for &y in &[0.0, 0.1, 0.7, 1.3, 4.0, 11.0, 35.0, 90.0] {
            let fast = abs_gamma_one_plus_i_sq(y);
            let lanczos = abs_gamma_sq(1.0, y);
            assert!(rel(lanczos, fast) < 1e-10, "y={y}: {lanczos} vs {fast}");
            let half = PI / (PI * y).cosh();
            assert!(rel(abs_gamma_sq(0.5, y), half) < 1e-10, "y={y}");
        }
        // Re z = 1/4 goes through the shift
        let y = 2.0;
        let shifted = abs_gamma_sq(1.25, y) / (0.25f64.powi(2) + y * y);
        assert!(rel(abs_gamma_sq(0.25, y), shifted) < 1e-12);
    }

    #[test]
    fn rising() {
        assert_eq!(rising_factorial(0.5, 0), 1.0);
        assert_eq!(rising_factorial(2.0, 3), 24.0);
        assert_eq!(factorial(6), 720.0);
    }
}
