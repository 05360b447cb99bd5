//! Cumulants of `⟨ω, φ⟩` under the compensated Meixner-class noise and the
//! cumulant-to-moment composition.

use crate::basespace::GridFunction;
use crate::error::{Error, Result};
use crate::jacobi::spectral_moment;

/// `κ_j` of `⟨ω, φ⟩`: zero for `j = 1`, else `(∫ s^{j-2} ν̃_β) · v Σ φ^j`.
pub fn cumulant(beta: f64, phi: &GridFunction, j: usize) -> Result<f64> {
    match j {
        0 => Err(Error::Domain("cumulants are indexed from 1".into())),
        1 => Ok(0.0),
        _ => Ok(spectral_moment(beta, j - 2)? * phi.integral_of_power(j as u32)),
    }
}

/// `κ_1, ..., κ_k` in one vector (index 0 holds `κ_1`).
pub fn cumulants(beta: f64, phi: &GridFunction, k: usize) -> Result<Vec<f64>> {
    (1..=k).map(|j| cumulant(beta, phi, j)).collect()
}

/// `m_k = Σ_{π ∈ Π(k)} Π_{B ∈ π} κ_{|B|}`, via
/// `m_n = Σ_{i=1}^{n} C(n-1, i-1) κ_i m_{n-i}`.
pub fn moments_from_cumulants(kappas: &[f64], k: usize) -> Result<f64> {
    if kappas.len() < k {
        return Err(Error::Domain(format!("need cumulants up to order {k}, have {}", kappas.len())));
    }
    let mut moments = vec![1.0];
    for n in 1..=k {
        let mut binom = 1.0; // C(n-1, i-1)
        let mut acc = 0.0;
        for i in 1..=n {
            acc += binom * kappas[i - 1] * moments[n - i];
            binom = binom * (n - i) as f64 / i as f64;
        }
        moments.push(acc);
    }
    Ok(moments[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basespace::GridSpace;

    /// Oracle: explicit enumeration of set partitions by restricted growth strings.
    fn by_set_partitions(kappas: &[f64], k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let mut total = 0.0;
        let mut rgs = vec![0usize; k];
        loop {
            let blocks = rgs.iter().max().unwrap() + 1;
            let mut sizes = vec![0usize; blocks];
            for &b in &rgs {
                sizes[b] += 1;
            }
            total += sizes.iter().map(|&s| kappas[s - 1]).product::<f64>();
            // next restricted growth string
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return total;
                }
                let prefix_max = rgs[..i].iter().max().copied().unwrap();
                if rgs[i] <= prefix_max {
                    rgs[i] += 1;
                    for r in rgs.iter_mut().skip(i + 1) {
                        *r = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    #[test]
    fn partition_oracle_counts_bell_numbers() {
        let ones = vec![1.0; 8];
        let bell = [1.0, 1.0, 2.0, 5.0, 15.0, 52.0, 203.0, 877.0, 4140.0];
        for (k, b) in bell.iter().enumerate() {
            assert_eq!(by_set_partitions(&ones, k), *b);
            assert_eq!(moments_from_cumulants(&ones, k).unwrap(), *b);
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(moments_from_cumulants(&[0.0, 2.5], 2).unwrap(), 2.5);
        let k = [0.0, 1.7, 0.0, 0.9];
        assert!((moments_from_cumulants(&k, 4).unwrap() - (0.9 + 3.0 * 1.7 * 1.7)).abs() < 1e-14);
        assert_eq!(moments_from_cumulants(&[0.0; 6], 6).unwrap(), 0.0);
        assert!(moments_from_cumulants(&[1.0], 3).is_err());
    }

    #[test]
    fn composition_matches_enumeration() {
        let k = [0.3, -1.2, 0.7, 2.1, -0.4, 1.1, 0.25, -0.6];
        for order in 0..=8 {
            let a = moments_from_cumulants(&k, order).unwrap();
            let b = by_set_partitions(&k, order);
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "order {order}");
        }
    }

    #[test]
    fn cumulant_examples() {
        let s = GridSpace::uniform(3, 0.5).unwrap();
        let phi = GridFunction::new(s, vec![1.0, -0.5, 2.0]).unwrap();
        let sq = 0.5 * (1.0 + 0.25 + 4.0);
        let cube = 0.5 * (1.0 - 0.125 + 8.0);
        for &beta in &[0.0, 1.0, 2.0, 3.0] {
            assert_eq!(cumulant(beta, &phi, 1).unwrap(), 0.0);
            assert!((cumulant(beta, &phi, 2).unwrap() - sq).abs() < 1e-14);
            assert!((cumulant(beta, &phi, 3).unwrap() - beta * cube).abs() < 1e-13);
        }
        assert!(cumulant(1.0, &phi, 0).is_err());
    }
}
