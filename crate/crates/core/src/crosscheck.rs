//! Check suites: the commutator relations in both representations,
//! adjointness, the three-way vacuum-moment comparison, the spectral chain
//! for the Meixner-class recurrence, the marginal laws and the symbolic
//! corpus. Every suite returns [`CheckReport`]s in a fixed order.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basespace::{GridFunction, GridSpace};
use crate::cumulants::{cumulants, moments_from_cumulants};
use crate::error::{Error, Result};
use crate::extfock::{
    apply_a, ext_fock_inner, ext_inner, ext_relation_residual, ext_vacuum_moment, single_atom_jacobi, AKind,
    ExtFockVector, SymmetricKernel,
};
use crate::fock::fock_inner;
use crate::jacobi::jacobi_beta;
use crate::meixner::{gram_check_i3, gram_expected_diagonal, regime_moment, LevyMeasureSpec, MarginalLaw, Regime};
use crate::relations::SwnRelation;
use crate::report::{CheckReport, Params};
use crate::special::{factorial, rising_factorial};
use crate::swn::{commutator_residual, relation_operators, vacuum_moment_auto, SwnKind, SwnOperator, SwnSpace};
use crate::wick::{run_case, CorpusCase};

/// Highest moment order compared; beyond it the moment-cumulant recursion
/// loses too much to cancellation in double precision.
pub const MOMENT_ORDER_CAP: usize = 8;

/// Highest order of spectral moments compared against `ν̃_β`.
pub const SPECTRAL_ORDER: usize = 8;

/// Highest order for the single-atom comparisons.
pub const SINGLE_ATOM_ORDER: usize = 6;

pub const DEFAULT_BETAS: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 5.0];

/// A grid of `atoms` atoms of mass `cell_mass`; `dim` only labels the
/// dimension of the space the atoms stand for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub atoms: usize,
    pub cell_mass: f64,
}

impl GridSpec {
    pub const fn new(atoms: usize, cell_mass: f64) -> Self {
        GridSpec { dim: 1, atoms, cell_mass }
    }

    pub fn build(&self) -> Result<Arc<GridSpace>> {
        GridSpace::new(self.dim, (0..self.atoms).map(|i| format!("x{i}")).collect(), self.cell_mass)
    }

    pub fn label(&self) -> String {
        match self.dim {
            1 => format!("G={} v={}", self.atoms, self.cell_mass),
            d => format!("G={} v={} d={d}", self.atoms, self.cell_mass),
        }
    }
}

pub const DEFAULT_GRIDS: [GridSpec; 2] = [GridSpec::new(1, 1.0), GridSpec::new(3, 0.5)];

/// Values uniform in `[-1, 1]` from a ChaCha8 stream.
pub fn seeded_function(grid: &Arc<GridSpace>, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GridFunction::new(grid.clone(), values).expect("length matches grid")
}

/// A named test function.
#[derive(Debug, Clone)]
pub struct NamedFunction {
    pub name: String,
    pub function: GridFunction,
}

fn run_or_fail(check: &str, params: Params, tol: f64, r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| CheckReport::failure(check, params, tol, &e))
}

/// Truncations used by the commutator suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// SWN Fock level ceiling `N`.
    pub swn_level: usize,
    /// SWN ladder size `M`.
    pub swn_ladder: usize,
    /// Extended Fock level ceiling.
    pub ext_level: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { swn_level: 5, swn_ladder: 5, ext_level: 5 }
    }
}

/// The six relations in the SWN representation and for `2a⁺, 2a⁰, 2a⁻` on
/// the extended Fock space. One report per (representation, relation,
/// grid) holding the largest relative residual over all seeds; `φ` and `ψ`
/// are drawn from each seed.
pub fn commutator_suite(grids: &[GridSpec], seeds: &[u64], trunc: Truncation, tol: f64) -> Vec<CheckReport> {
    let mut cases = Vec::new();
    for rep in ["swn", "extfock"] {
        for rel in SwnRelation::ALL {
            for grid in grids {
                cases.push((rep, rel, *grid));
            }
        }
    }
    cases
        .par_iter()
        .map(|&(rep, rel, grid)| {
            let check = format!("commutator_{rep}");
            let params = Params {
                relation: Some(rel.name().to_string()),
                grid: Some(grid.label()),
                truncation: Some(match rep {
                    "swn" => format!("N={} M={}", trunc.swn_level, trunc.swn_ladder),
                    _ => format!("level={}", trunc.ext_level),
                }),
                ..Params::default()
            };
            let r = (|| {
                let g = grid.build()?;
                let mut worst = 0.0f64;
                for &seed in seeds {
                    let phi = seeded_function(&g, 2 * seed);
                    let psi = seeded_function(&g, 2 * seed + 1);
                    let res = if rep == "swn" {
                        let space = SwnSpace::new(g.clone(), trunc.swn_ladder, trunc.swn_level)?;
                        let (p, q, rhs) = relation_operators(rel, &phi, &psi, &space)?;
                        let vecs = (0..3).map(|i| space.random_test_vector(1000 * seed + i, 8)).collect::<Result<Vec<_>>>()?;
                        commutator_residual((&p, &q), &rhs, &vecs)?
                    } else {
                        let top = trunc.ext_level.checked_sub(2).ok_or_else(|| {
                            Error::Window(format!("extended level ceiling {} leaves no safe window", trunc.ext_level))
                        })?;
                        let vecs: Vec<_> = (0..3)
                            .map(|i| ExtFockVector::random(g.clone(), trunc.ext_level, top, 1000 * seed + i))
                            .collect();
                        ext_relation_residual(rel, &phi, &psi, &vecs)?
                    };
                    worst = worst.max(res);
                }
                Ok(CheckReport::residual(&check, params.clone(), worst, tol)
                    .with_note(format!("max over seeds {seeds:?}")))
            })();
            run_or_fail(&check, params.clone(), tol, r)
        })
        .collect()
}

/// `⟨B†F, G⟩ = ⟨F, BG⟩` and `⟨NF, G⟩ = ⟨F, NG⟩` on the truncated Fock
/// space, `⟨a⁺f, g⟩ = ⟨f, a⁻g⟩` and `⟨a⁰f, g⟩ = ⟨f, a⁰g⟩` on the extended
/// Fock space; one report per pair and seed.
pub fn adjointness_suite(grid: GridSpec, seeds: &[u64], tol: f64) -> Vec<CheckReport> {
    let checks = ["adjoint_swn_b", "symmetric_swn_n", "adjoint_ext_a", "symmetric_ext_a0"];
    let cases: Vec<(&str, u64)> = checks.iter().flat_map(|&c| seeds.iter().map(move |&s| (c, s))).collect();
    cases
        .par_iter()
        .map(|&(check, seed)| {
            let params = Params { grid: Some(grid.label()), seed: Some(seed), ..Params::default() };
            let r = (|| {
                let g = grid.build()?;
                let phi = seeded_function(&g, seed);
                let (lhs, rhs) = match check {
                    "adjoint_swn_b" | "symmetric_swn_n" => {
                        let space = SwnSpace::new(g.clone(), 5, 5)?;
                        let f = space.random_test_vector(100 + seed, 10)?;
                        let h = space.random_test_vector(200 + seed, 10)?;
                        let (left, right) = if check == "adjoint_swn_b" {
                            (SwnKind::Bdag, SwnKind::B)
                        } else {
                            (SwnKind::N, SwnKind::N)
                        };
                        let left = SwnOperator::new(left, &phi, 0.0, &space)?;
                        let right = SwnOperator::new(right, &phi, 0.0, &space)?;
                        (fock_inner(&left.apply(&f)?, &h)?, fock_inner(&f, &right.apply(&h)?)?)
                    }
                    _ => {
                        let f = ExtFockVector::random(g.clone(), 5, 4, 100 + seed);
                        let h = ExtFockVector::random(g.clone(), 5, 5, 200 + seed);
                        if check == "adjoint_ext_a" {
                            let f = f.truncated_to(3);
                            let lhs = ext_fock_inner(&apply_a(AKind::Plus, &phi, &f, 0.0)?, &h)?;
                            (lhs, ext_fock_inner(&f, &apply_a(AKind::Minus, &phi, &h, 0.0)?)?)
                        } else {
                            let lhs = ext_fock_inner(&apply_a(AKind::Zero, &phi, &f, 0.0)?, &h)?;
                            (lhs, ext_fock_inner(&f, &apply_a(AKind::Zero, &phi, &h, 0.0)?)?)
                        }
                    }
                };
                Ok(CheckReport::compare(check, params.clone(), vec![lhs], vec![rhs], tol))
            })();
            run_or_fail(check, params.clone(), tol, r)
        })
        .collect()
}

/// For `k = 0..=k_max` compares `⟨Ω, X_β(φ)^k Ω⟩` in the SWN representation
/// with `2^k ⟨Ω, a_β(φ)^k Ω⟩` on the extended Fock space and with `2^k m_k`
/// from the cumulants of `⟨·, φ⟩`. Reports hold `lhs = [swn, swn]`,
/// `rhs = [extended, cumulant]`.
pub fn theorem1_moment_check(beta: f64, phi: &NamedFunction, grid_label: &str, k_max: usize, tol: f64) -> Vec<CheckReport> {
    let check = "theorem1_moment";
    if k_max > MOMENT_ORDER_CAP {
        let err = Error::Domain(format!("moment order {k_max} exceeds the cap {MOMENT_ORDER_CAP}"));
        let params = Params { beta: Some(beta), phi: Some(phi.name.clone()), order: Some(k_max), ..Params::default() };
        return vec![CheckReport::failure(check, params, tol, &err)];
    }
    let kappas = cumulants(beta, &phi.function, k_max);
    (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let params = Params {
                beta: Some(beta),
                phi: Some(phi.name.clone()),
                grid: Some(grid_label.to_string()),
                order: Some(k),
                truncation: Some(format!("N=M={} ext level={k}", k + 1)),
                ..Params::default()
            };
            let r = (|| {
                let scale = 2f64.powi(k as i32);
                let swn = vacuum_moment_auto(beta, &phi.function, k)?;
                let ext = scale * ext_vacuum_moment(beta, &phi.function, k, k)?;
                let bell = scale * moments_from_cumulants(kappas.as_ref().map_err(Clone::clone)?, k)?;
                Ok(CheckReport::compare(check, params.clone(), vec![swn, swn], vec![ext, bell], tol)
                    .with_note(format!("moment order capped at {MOMENT_ORDER_CAP}")))
            })();
            run_or_fail(check, params, tol, r)
        })
        .collect()
}

/// Runs [`theorem1_moment_check`] for every `β`, grid and test function.
pub fn moments_suite(betas: &[f64], grids: &[(GridSpec, Vec<NamedFunction>)], k_max: usize, tol: f64) -> Vec<CheckReport> {
    let mut cases = Vec::new();
    for &beta in betas {
        for (grid, phis) in grids {
            for phi in phis {
                cases.push((beta, grid.label(), phi));
            }
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|(beta, label, phi)| theorem1_moment_check(*beta, phi, label, k_max, tol))
        .collect()
}

/// Tolerances for the spectral chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainTolerance {
    /// Closed-form Gamma moments.
    pub exact: f64,
    /// Series and quadrature results.
    pub numeric: f64,
    /// Single-atom moments and norms.
    pub single_atom: f64,
}

impl Default for ChainTolerance {
    fn default() -> Self {
        ChainTolerance { exact: 1e-10, numeric: 1e-6, single_atom: 1e-8 }
    }
}

/// (a) `(J_β^j)₁₁` against the moments of `ν̃_β` for `j <= SPECTRAL_ORDER`;
/// (b) the Gram matrix of `s P̃_{β,n-1}` under `ν_β`, normalized by the
/// expected diagonal `(n-1)! n!`, against the identity; (c) at a single atom
/// of each mass in `areas`, extended-Fock norms against `(v)_n n!` and the
/// vacuum moments of `a_β(1)` (directly and through its Jacobi matrix)
/// against the moments of the marginal law `μ_{β,Δ}` with `|Δ| = v`.
pub fn proofchain_check(beta: f64, n_max: usize, areas: &[f64], tol: ChainTolerance) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let spec = match LevyMeasureSpec::new(beta) {
        Ok(s) => s,
        Err(e) => {
            let params = Params { beta: Some(beta), ..Params::default() };
            return vec![CheckReport::failure("proofchain", params, tol.numeric, &e)];
        }
    };
    let regime = spec.regime();
    let regime_tol = if regime == Regime::Gamma { tol.exact } else { tol.numeric };
    let exact: Vec<f64> = match jacobi_beta(beta, SPECTRAL_ORDER + 2) {
        Ok(j) => j.vacuum_moments(SPECTRAL_ORDER + 1),
        Err(e) => {
            let params = Params { beta: Some(beta), ..Params::default() };
            return vec![CheckReport::failure("spectral_moment", params, regime_tol, &e)];
        }
    };
    let spectral: Vec<CheckReport> = (0..=SPECTRAL_ORDER)
        .into_par_iter()
        .map(|j| {
            let params = Params { beta: Some(beta), order: Some(j), ..Params::default() };
            let r = regime_moment(&spec, j).map(|m| {
                // ∫|s|^j dν̃ sets the size of the quadrature error: it is the
                // moment itself for even j and at most the Cauchy-Schwarz bound
                // for odd j, whose moments vanish at β = 0.
                let scale = if j % 2 == 0 { exact[j] } else { (exact[j - 1] * exact[j + 1]).sqrt() };
                CheckReport::compare_scaled("spectral_moment", params.clone(), vec![exact[j]], vec![m], scale, regime_tol)
                    .with_note(format!("{regime:?} regime"))
            });
            run_or_fail("spectral_moment", params, regime_tol, r)
        })
        .collect();
    out.extend(spectral);

    let params = Params { beta: Some(beta), order: Some(n_max), ..Params::default() };
    let gram = gram_check_i3(beta, n_max).map(|g| {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for m in 1..=n_max {
            for n in 1..=n_max {
                let norm = (gram_expected_diagonal(m) * gram_expected_diagonal(n)).sqrt();
                lhs.push(g[m - 1][n - 1] / norm);
                rhs.push(if m == n { 1.0 } else { 0.0 });
            }
        }
        CheckReport::compare_scaled("gram_i3", params.clone(), lhs, rhs, 1.0, tol.numeric)
            .with_note("entries divided by sqrt of the expected diagonals (n-1)! n!")
    });
    out.push(run_or_fail("gram_i3", params, tol.numeric, gram));

    let single: Vec<CheckReport> = areas
        .par_iter()
        .flat_map_iter(|&v| single_atom_checks(beta, v, tol.single_atom))
        .collect();
    out.extend(single);
    out
}

fn single_atom_checks(beta: f64, v: f64, tol: f64) -> Vec<CheckReport> {
    let params = Params { beta: Some(beta), area: Some(v), grid: Some(format!("G=1 v={v}")), ..Params::default() };
    let norms = (|| {
        let g = GridSpace::uniform(1, v)?;
        let one = GridFunction::constant(g, 1.0);
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for n in 0..=SINGLE_ATOM_ORDER {
            let k = SymmetricKernel::tensor_power(&one, n);
            lhs.push(factorial(n) * ext_inner(&k, &k)?);
            rhs.push(rising_factorial(v, n) * factorial(n));
        }
        Ok(CheckReport::compare("single_atom_norm", params.clone(), lhs, rhs, tol))
    })();
    let moments = (|| {
        let law = MarginalLaw::new(beta, v)?;
        let g = GridSpace::uniform(1, v)?;
        let one = GridFunction::constant(g, 1.0);
        let orders = 1..=SINGLE_ATOM_ORDER;
        let direct = orders.clone().map(|j| ext_vacuum_moment(beta, &one, j, j)).collect::<Result<Vec<_>>>()?;
        let jac = single_atom_jacobi(beta, v, SINGLE_ATOM_ORDER + 1)?.vacuum_moments(SINGLE_ATOM_ORDER);
        let marginal = orders.map(|j| law.moment(j)).collect::<Result<Vec<_>>>()?;
        Ok([
            CheckReport::compare("single_atom_moment", params.clone(), direct, marginal.clone(), tol),
            CheckReport::compare("single_atom_jacobi", params.clone(), jac[1..].to_vec(), marginal, tol),
        ])
    })();
    let mut out = vec![run_or_fail("single_atom_norm", params.clone(), tol, norms)];
    match moments {
        Ok(r) => out.extend(r),
        Err(e) => out.push(CheckReport::failure("single_atom_moment", params, tol, &e)),
    }
    out
}

/// Normalization, mean `0` and variance `|Δ|` of `μ_{β,Δ}`, compared on the
/// scale `max(1, |Δ|)` of the values involved.
pub fn marginal_suite(betas: &[f64], areas: &[f64], tol: f64) -> Vec<CheckReport> {
    let cases: Vec<(f64, f64)> = betas.iter().flat_map(|&b| areas.iter().map(move |&a| (b, a))).collect();
    cases
        .par_iter()
        .map(|&(beta, area)| {
            let params = Params { beta: Some(beta), area: Some(area), ..Params::default() };
            let r = (|| {
                let law = MarginalLaw::new(beta, area)?;
                let lhs = vec![law.total_mass()?, law.mean()?, law.variance()?];
                Ok(CheckReport::compare_scaled("marginal_moments", params.clone(), lhs, vec![1.0, 0.0, area], area.max(1.0), tol)
                    .with_note("[mass, mean, variance]"))
            })();
            run_or_fail("marginal_moments", params, tol, r)
        })
        .collect()
}

/// One report per corpus identity; exact comparison (tolerance 0).
pub fn wick_suite(cases: &[CorpusCase]) -> Vec<CheckReport> {
    cases
        .par_iter()
        .map(|case| {
            let outcome = run_case(case);
            let params = Params { relation: Some(case.identity.clone()), ..Params::default() };
            let residual = if outcome.pass { 0.0 } else { 1.0 };
            let mut note = format!("line {}: {}", case.line, outcome.detail);
            if let (Some(l), Some(r)) = (&outcome.smeared_lhs, &outcome.reading) {
                note = format!("{note}; smeared: {l} = {r}");
            }
            CheckReport::residual("wick_identity", params, residual, 0.0).with_note(note)
        })
        .collect()
}
