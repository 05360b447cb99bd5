//! The Meixner-class measures attached to `J_β`: the spectral measure
//! `ν̃_β`, the Lévy measure `ν_β = s⁻² ν̃_β`, and the one-dimensional
//! marginals `μ_{β,Δ}` of the compensated noise.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::{check_beta, polynomial_sequence};
use crate::quadrature::{integrate_half_line, integrate_line, Tolerance};
use crate::special::{abs_gamma_one_plus_i_sq, abs_gamma_sq, factorial, gamma};

/// Geometric-tail cutoff for the Pascal series.
const SERIES_TAIL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `0 <= β < 2`
    Meixner,
    /// `β = 2`
    Gamma,
    /// `β > 2`
    Pascal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyMeasureSpec {
    beta: f64,
    regime: Regime,
    /// `√|4 - β²|`
    root: f64,
    /// `p_β = (β - √(β²-4)) / (β + √(β²-4))`, Pascal only.
    p: Option<f64>,
}

impl LevyMeasureSpec {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let root = (4.0 - beta * beta).abs().sqrt();
        let (regime, p) = if beta < 2.0 {
            (Regime::Meixner, None)
        } else if beta == 2.0 {
            (Regime::Gamma, None)
        } else {
            let p = (beta - root) / (beta + root);
            debug_assert!(p > 0.0 && p < 1.0);
            (Regime::Pascal, Some(p))
        };
        Ok(LevyMeasureSpec { beta, regime, root, p })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn root(&self) -> f64 {
        self.root
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    /// Tilt `θ = arctan(β / √(4-β²))` of the Meixner densities. The densities
    /// carry `e^{+2sθ/√(4-β²)}`: that sign gives `ν̃_β` the moments
    /// `(J_β^j)_{11}` (mean `+β`) and centres the marginals.
    fn meixner_angle(&self) -> f64 {
        (self.beta / self.root).atan()
    }

    fn meixner_density(&self, s: f64) -> f64 {
        let a = self.root;
        a / (2.0 * PI)
            * abs_gamma_one_plus_i_sq(s / a)
            * (2.0 * s / a * self.meixner_angle()).exp()
    }

    /// Location of the `k`-th Pascal atom of `ν̃_β`.
    pub fn pascal_atom(&self, k: u64) -> f64 {
        self.root * k as f64
    }

    /// Mass of `ν̃_β` at the `k`-th Pascal atom.
    fn pascal_mass(&self, k: u64) -> f64 {
        let p = self.p.expect("pascal regime");
        (self.beta * self.beta - 4.0) * p.powi(k as i32) * k as f64
    }

    /// Number of Pascal atoms needed so the geometric tail of `Σ k^e p^k`
    /// falls below `SERIES_TAIL` relative to the total.
    fn pascal_terms(&self, extra_power: i32) -> u64 {
        let p = self.p.expect("pascal regime");
        let mut k = 1u64;
        loop {
            let ratio = p * ((k + 1) as f64 / k as f64).powi(extra_power.max(0));
            if ratio < 0.5 && (k as f64).powi(extra_power) * p.powi(k as i32) / (1.0 - ratio) < SERIES_TAIL {
                return k;
            }
            k += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// `ν̃_β`
    NuTilde,
    /// `ν_β = s⁻² ν̃_β`
    Nu,
}

/// Query point: a real `s` for the absolutely continuous regimes, a support
/// index `k >= 1` for Pascal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyPoint {
    Real(f64),
    Atom(u64),
}

/// Density (Meixner, Gamma) or atom mass (Pascal) of `ν̃_β` or `ν_β`.
pub fn levy_density(spec: &LevyMeasureSpec, which: Which, point: LevyPoint) -> Result<f64> {
    let value = match (spec.regime, point) {
        (Regime::Pascal, LevyPoint::Atom(k)) => {
            if k == 0 {
                return Err(Error::Domain("Pascal atoms are indexed from k = 1".into()));
            }
            let mass = spec.pascal_mass(k);
            match which {
                Which::NuTilde => mass,
                Which::Nu => mass / spec.pascal_atom(k).powi(2),
            }
        }
        (Regime::Pascal, LevyPoint::Real(_)) => {
            return Err(Error::Domain("Pascal queries take a support index".into()))
        }
        (_, LevyPoint::Atom(_)) => {
            return Err(Error::Domain("support indices are only meaningful for Pascal".into()))
        }
        (Regime::Gamma, LevyPoint::Real(s)) => {
            if !(s > 0.0) {
                return Err(Error::Domain(format!("gamma regime needs s > 0, got {s}")));
            }
            match which {
                Which::NuTilde => s * (-s).exp(),
                Which::Nu => (-s).exp() / s,
            }
        }
        (Regime::Meixner, LevyPoint::Real(s)) => {
            let d = spec.meixner_density(s);
            match which {
                Which::NuTilde => d,
                Which::Nu => {
                    if s == 0.0 {
                        return Err(Error::Domain(
                            "ν_β has a non-integrable s⁻² singularity at 0".into(),
                        ));
                    }
                    d / (s * s)
                }
            }
        }
    };
    Ok(value)
}

fn quad_tol() -> Tolerance {
    Tolerance { abs: 1e-300, rel: 1e-14, max_intervals: 8000 }
}

/// `∫ g(s) ν̃_β(ds)` by the regime's own route: quadrature of the Meixner
/// density, quadrature of `s e^{-s}`, or the Pascal series. `degree` bounds
/// the polynomial growth of `g` and sizes the Pascal truncation.
pub fn integrate_nu_tilde(spec: &LevyMeasureSpec, degree: usize, g: impl Fn(f64) -> f64) -> Result<f64> {
    match spec.regime {
        Regime::Meixner => {
            let center = spec.beta; // mean of ν̃_β
            integrate_line(|s| g(s) * spec.meixner_density(s), center, quad_tol())
        }
        Regime::Gamma => integrate_half_line(|s| g(s) * s * (-s).exp(), 0.0, quad_tol()),
        Regime::Pascal => {
            let terms = spec.pascal_terms(degree as i32 + 1);
            // smallest terms first
            Ok((1..=terms)
                .rev()
                .map(|k| g(spec.pascal_atom(k)) * spec.pascal_mass(k))
                .sum())
        }
    }
}

/// `∫ s^j ν̃_β(ds)` computed from the regime formulas (closed form for Gamma).
pub fn regime_moment(spec: &LevyMeasureSpec, j: usize) -> Result<f64> {
    match spec.regime {
        Regime::Gamma => Ok(factorial(j + 1)),
        _ => integrate_nu_tilde(spec, j, |s| s.powi(j as i32)),
    }
}

/// Gram matrix `⟨s P̃_{β,m-1}, s P̃_{β,n-1}⟩_{L²(ν_β)}` for `m, n = 1..=n_max`.
///
/// Under `ν_β = s⁻² ν̃_β` the `s²` cancels, which is how the integrand is
/// evaluated (the Lévy density itself is singular at the origin).
pub fn gram_check_i3(beta: f64, n_max: usize) -> Result<Vec<Vec<f64>>> {
    if n_max == 0 || n_max > 8 {
        return Err(Error::Domain(format!("gram check supports 1 <= n_max <= 8, got {n_max}")));
    }
    let spec = LevyMeasureSpec::new(beta)?;
    let polys = polynomial_sequence(beta, n_max)?;
    let mut gram = vec![vec![0.0; n_max]; n_max];
    for m in 1..=n_max {
        for n in m..=n_max {
            let value = match spec.regime {
                Regime::Gamma => {
                    // ∫ s² P Q · e^{-s}/s ds = Σ_k c_k (k+1)!
                    let prod = poly_mul(polys.coefficients(m - 1), polys.coefficients(n - 1));
                    prod.iter().enumerate().map(|(k, c)| c * factorial(k + 1)).sum()
                }
                Regime::Pascal => {
                    let terms = spec.pascal_terms((m + n) as i32);
                    (1..=terms)
                        .rev()
                        .map(|k| {
                            let s = spec.pascal_atom(k);
                            let nu_mass = spec.pascal_mass(k) / (s * s);
                            polys.eval_shifted(m, s) * polys.eval_shifted(n, s) * nu_mass
                        })
                        .sum()
                }
                Regime::Meixner => integrate_nu_tilde(&spec, 2 * n_max, |s| {
                    polys.eval(m - 1, s) * polys.eval(n - 1, s)
                })?,
            };
            gram[m - 1][n - 1] = value;
            gram[n - 1][m - 1] = value;
        }
    }
    Ok(gram)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Expected Gram diagonal `(n-1)! n!`.
pub fn gram_expected_diagonal(n: usize) -> f64 {
    factorial(n - 1) * factorial(n)
}

/// One-dimensional marginal `μ_{β,Δ}`, the law of `⟨ω, χ_Δ⟩` with `|Δ| = area`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalLaw {
    spec: LevyMeasureSpec,
    area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalQuery {
    /// Density at `s` (Gamma, Meixner).
    Density(f64),
    /// Probability of the `k`-th support point (Pascal, `k >= 0`).
    Pmf(u64),
    /// Support points and masses for `k = 0..=kmax` (Pascal).
    Support(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarginalAnswer {
    Density(f64),
    Pmf(f64),
    Support(Vec<(f64, f64)>),
}

pub fn marginal_law(beta: f64, area: f64, query: MarginalQuery) -> Result<MarginalAnswer> {
    let law = MarginalLaw::new(beta, area)?;
    Ok(match query {
        MarginalQuery::Density(s) => MarginalAnswer::Density(law.density(s)?),
        MarginalQuery::Pmf(k) => MarginalAnswer::Pmf(law.pmf(k)?),
        MarginalQuery::Support(kmax) => {
            MarginalAnswer::Support((0..=kmax).map(|k| law.pmf(k).map(|m| (law.support_point(k), m))).collect::<Result<_>>()?)
        }
    })
}

impl MarginalLaw {
    pub fn new(beta: f64, area: f64) -> Result<Self> {
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::Domain(format!("|Δ| must be positive, got {area}")));
        }
        Ok(MarginalLaw { spec: LevyMeasureSpec::new(beta)?, area })
    }

    pub fn spec(&self) -> &LevyMeasureSpec {
        &self.spec
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn density(&self, s: f64) -> Result<f64> {
        let t = self.area;
        let beta = self.spec.beta;
        match self.spec.regime {
            Regime::Pascal => Err(Error::Domain("the Pascal marginal is discrete; query a pmf".into())),
            Regime::Gamma => {
                let x = s + t;
                if x <= 0.0 {
                    return Ok(0.0);
                }
                Ok(x.powf(t - 1.0) * (-x).exp() / gamma(t))
            }
            Regime::Meixner => {
                let a = self.spec.root;
                let y = (s + beta * t / 2.0) / a;
                Ok(a.powf(t - 1.0) / (2.0 * PI * gamma(t))
                    * abs_gamma_sq(t / 2.0, y)
                    * ((2.0 * s + beta * t) / a * self.spec.meixner_angle()).exp())
            }
        }
    }

    pub fn support_point(&self, k: u64) -> f64 {
        let a = self.spec.root;
        a * k as f64 - 2.0 * self.area / (self.spec.beta + a)
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        let p = self
            .spec
            .p
            .ok_or_else(|| Error::Domain("pmf queries need the Pascal regime".into()))?;
        let t = self.area;
        // (t)_k / k! p^k accumulated as a product to stay finite
        let coeff: f64 = (0..k).map(|i| (t + i as f64) / (i + 1) as f64 * p).product();
        Ok((1.0 - p).powf(t) * coeff)
    }

    /// `∫ g dμ_{β,Δ}` by the regime's route.
    pub fn expectation(&self, degree: usize, g: impl Fn(f64) -> f64) -> Result<f64> {
        let t = self.area;
        match self.spec.regime {
            Regime::Pascal => {
                let p = self.spec.p.expect("pascal");
                // pmf ratio (t+k)/(k+1) p, tail handled as in the Lévy series
                let mut terms = 0u64;
                loop {
                    let k = terms as f64;
                    let ratio = p * (t + k) / (k + 1.0) * ((k + 2.0) / (k + 1.0)).powi(degree as i32);
                    if ratio < 0.5 && self.pmf(terms)? * (1.0 + self.support_point(terms).abs()).powi(degree as i32) < SERIES_TAIL {
                        break;
                    }
                    terms += 1;
                }
                let mut acc = 0.0;
                for k in (0..=terms).rev() {
                    acc += g(self.support_point(k)) * self.pmf(k)?;
                }
                Ok(acc)
            }
            Regime::Gamma => {
                // x = s + t = u², removes the (s+t)^{t-1} endpoint singularity
                let f = |u: f64| {
                    let x = u * u;
                    2.0 * u * x.powf(t - 1.0) * (-x).exp() / gamma(t) * g(x - t)
                };
                integrate_half_line(f, 0.0, quad_tol())
            }
            Regime::Meixner => {
                let dens = |s: f64| self.density(s).expect("meixner density");
                integrate_line(|s| g(s) * dens(s), 0.0, quad_tol())
            }
        }
    }

    pub fn moment(&self, j: usize) -> Result<f64> {
        self.expectation(j, |s| s.powi(j as i32))
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.expectation(0, |_| 1.0)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1)
    }

    pub fn variance(&self) -> Result<f64> {
        let m = self.mean()?;
        Ok(self.moment(2)? - m * m)
    }
}
