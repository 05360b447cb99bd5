//! Fock representation of the square-of-white-noise algebra.
//!
//! The one-particle space is `L²(grid) ⊗ ℓ₂` with the ladder truncated at
//! `M` levels. Mode `(x, l)` (atom `x`, ladder index `l = 1..=M`) has index
//! `(l - 1)·G + x`, so enlarging `M` only appends modes. With orthonormal
//! coordinates the grid function `φ` enters creation and annihilation as
//! `√v·φ(x)`, and multiplication operators as `φ(x)`:
//!
//! ```text
//! B†(φ) = 2A⁺(φ⊗e₁) + 2A⁰(φ⊗J⁺)
//! N(φ)  = 2A⁰(φ⊗J⁰)
//! B(φ)  = 2A⁻(φ⊗e₁) + 2A⁰(φ⊗J⁻)
//! X_β(φ) = B†(φ) + B(φ) + βN(φ) = 2(A⁺(φ⊗e₁) + A⁰(φ⊗J_β) + A⁻(φ⊗e₁))
//! ```

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basespace::{inner, pointwise_product, GridFunction, GridSpace};
use crate::error::{Error, Result};
use crate::fock::{self, annihilate, create, dgamma, FockVector, Mode, Occupation, OneParticleOperator};
use crate::jacobi::check_beta;
use crate::relations::{max_residual, relation_shape, RhsTerm, Role, Smear, SwnRelation};

/// Truncated Fock space over `L²(grid) ⊗ ℓ₂^M` with levels `<= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwnSpace {
    grid: Arc<GridSpace>,
    ladder: usize,
    max_level: usize,
}

impl SwnSpace {
    pub fn new(grid: Arc<GridSpace>, ladder: usize, max_level: usize) -> Result<Self> {
        if ladder == 0 {
            return Err(Error::Domain("ladder truncation must be >= 1".into()));
        }
        Ok(SwnSpace { grid, ladder, max_level })
    }

    pub fn grid(&self) -> &Arc<GridSpace> {
        &self.grid
    }

    pub fn ladder(&self) -> usize {
        self.ladder
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// One-particle dimension `G·M`.
    pub fn dim(&self) -> usize {
        self.grid.len() * self.ladder
    }

    pub fn mode(&self, atom: usize, ladder_index: usize) -> Mode {
        debug_assert!(ladder_index >= 1 && ladder_index <= self.ladder);
        ((ladder_index - 1) * self.grid.len() + atom) as Mode
    }

    /// `(atom, ladder index)` of a mode.
    pub fn split(&self, mode: Mode) -> (usize, usize) {
        let g = self.grid.len();
        (mode as usize % g, mode as usize / g + 1)
    }

    pub fn vacuum(&self) -> FockVector {
        fock::vacuum(self.dim(), self.max_level)
    }

    /// Orthonormal coordinates of `φ ⊗ e_l`.
    pub fn embed(&self, phi: &GridFunction, ladder_index: usize) -> Vec<f64> {
        let sv = self.grid.cell_mass().sqrt();
        let mut out = vec![0.0; self.dim()];
        for (x, &p) in phi.values().iter().enumerate() {
            out[self.mode(x, ladder_index) as usize] = sv * p;
        }
        out
    }

    /// `φ ⊗ K` for a ladder matrix given by its diagonal and its
    /// super/sub-diagonals (`upper[n]` maps `e_{n+1}` to `e_{n+2}`).
    fn multiplication(&self, phi: &GridFunction, diag: &[f64], raise: &[f64], lower: &[f64]) -> Result<OneParticleOperator> {
        let mut trip = Vec::new();
        for (x, &p) in phi.values().iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for l in 1..=self.ladder {
                let col = self.mode(x, l) as usize;
                if diag[l - 1] != 0.0 {
                    trip.push((col, col, p * diag[l - 1]));
                }
                if l < self.ladder && raise[l - 1] != 0.0 {
                    trip.push((self.mode(x, l + 1) as usize, col, p * raise[l - 1]));
                }
                if l > 1 && lower[l - 2] != 0.0 {
                    trip.push((self.mode(x, l - 1) as usize, col, p * lower[l - 2]));
                }
            }
        }
        OneParticleOperator::from_triplets(self.dim(), trip)
    }

    fn check_grid(&self, phi: &GridFunction) -> Result<()> {
        if **phi.space() == *self.grid {
            Ok(())
        } else {
            Err(Error::Domain("test function lives on a different grid".into()))
        }
    }

    fn check_vector(&self, f: &FockVector) -> Result<()> {
        if f.dim() != self.dim() || f.max_level() != self.max_level {
            return Err(Error::Domain(format!(
                "vector on (D={}, N={}) applied in space (D={}, N={})",
                f.dim(),
                f.max_level(),
                self.dim(),
                self.max_level
            )));
        }
        Ok(())
    }

    /// Highest ladder index occupied by `f`.
    pub fn top_ladder(&self, f: &FockVector) -> usize {
        f.max_mode().map_or(0, |m| self.split(m).1)
    }

    /// Random sparse vector with levels `<= N-2` and ladder indices `<= M-2`,
    /// entries uniform in `[-1, 1]`.
    pub fn random_test_vector(&self, seed: u64, entries: usize) -> Result<FockVector> {
        if self.max_level < 2 || self.ladder < 3 {
            return Err(Error::Window(format!(
                "need N >= 2 and M >= 3 for a nonempty safe window (N={}, M={})",
                self.max_level, self.ladder
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let top_level = self.max_level - 2;
        let top_ladder = self.ladder - 2;
        let mut f = FockVector::zero(self.dim(), self.max_level);
        f.add_at(Occupation::empty(), rng.gen_range(-1.0..1.0));
        for _ in 0..entries {
            let level = rng.gen_range(1..=top_level.max(1));
            let modes = (0..level.min(top_level))
                .map(|_| self.mode(rng.gen_range(0..self.grid.len()), rng.gen_range(1..=top_ladder)))
                .collect();
            f.add_at(Occupation::from_modes(modes), rng.gen_range(-1.0..1.0));
        }
        Ok(f)
    }

    /// Rejects vectors outside levels `<= N-2`, ladder `<= M-2`.
    pub fn check_window(&self, f: &FockVector) -> Result<()> {
        self.check_vector(f)?;
        let level = f.top_level().unwrap_or(0);
        if level + 2 > self.max_level {
            return Err(Error::Window(format!("level {level} exceeds N-2 = {}", self.max_level as i64 - 2)));
        }
        let ladder = self.top_ladder(f);
        if ladder + 2 > self.ladder {
            return Err(Error::Window(format!("ladder index {ladder} exceeds M-2 = {}", self.ladder as i64 - 2)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwnKind {
    Bdag,
    N,
    B,
    X,
}

/// `B†(φ)`, `N(φ)`, `B(φ)` or `X_β(φ)`, assembled from `A⁺`, `A⁰`, `A⁻`.
#[derive(Debug, Clone)]
pub struct SwnOperator {
    kind: SwnKind,
    phi: GridFunction,
    beta: f64,
    /// `2·(φ⊗e₁)` for the creation part, if any.
    create: Option<Vec<f64>>,
    /// `2·(φ⊗e₁)` for the annihilation part, if any.
    annihilate: Option<Vec<f64>>,
    /// `2·(φ⊗K)` for the neutral part.
    neutral: OneParticleOperator,
    space: SwnSpace,
}

impl SwnOperator {
    pub fn new(kind: SwnKind, phi: &GridFunction, beta: f64, space: &SwnSpace) -> Result<Self> {
        space.check_grid(phi)?;
        check_beta(beta)?;
        let m = space.ladder;
        let zero = vec![0.0; m];
        let up: Vec<f64> = (1..m).map(|n| ((n * (n + 1)) as f64).sqrt()).collect();
        let down = up.clone();
        let number: Vec<f64> = (1..=m).map(|n| n as f64).collect();
        let no_off = vec![0.0; m.saturating_sub(1)];
        let twice = phi.map(|x| 2.0 * x);
        let e1 = space.embed(&twice, 1);
        let (create, annihilate, neutral) = match kind {
            SwnKind::Bdag => (Some(e1), None, space.multiplication(&twice, &zero, &up, &no_off)?),
            SwnKind::N => (None, None, space.multiplication(&twice, &number, &no_off, &no_off)?),
            SwnKind::B => (None, Some(e1), space.multiplication(&twice, &zero, &no_off, &down)?),
            SwnKind::X => {
                let diag: Vec<f64> = number.iter().map(|n| beta * n).collect();
                (Some(e1.clone()), Some(e1), space.multiplication(&twice, &diag, &up, &down)?)
            }
        };
        Ok(SwnOperator { kind, phi: phi.clone(), beta, create, annihilate, neutral, space: space.clone() })
    }

    pub fn kind(&self) -> SwnKind {
        self.kind
    }

    pub fn phi(&self) -> &GridFunction {
        &self.phi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Linear action on `f`; components pushed above level `N` are dropped.
    pub fn apply(&self, f: &FockVector) -> Result<FockVector> {
        self.space.check_vector(f)?;
        let mut out = dgamma(&self.neutral, f)?;
        if let Some(g) = &self.create {
            out = out.axpy(1.0, &create(g, f)?)?;
        }
        if let Some(g) = &self.annihilate {
            out = out.axpy(1.0, &annihilate(g, f)?)?;
        }
        Ok(out)
    }
}

pub fn apply(op: &SwnOperator, f: &FockVector) -> Result<FockVector> {
    op.apply(f)
}

fn role_kind(role: Role) -> SwnKind {
    match role {
        Role::Creator => SwnKind::Bdag,
        Role::Number => SwnKind::N,
        Role::Annihilator => SwnKind::B,
    }
}

/// One term of a right-hand side: `coeff·⟨φ,ψ⟩·1` or `coeff·op`.
#[derive(Debug, Clone)]
pub enum SwnRhs {
    Identity(f64),
    Operator(f64, SwnOperator),
}

/// `max_F ‖([P,Q] - RHS)F‖ / ‖F‖` over test vectors in the safe window.
pub fn commutator_residual(
    lhs_pair: (&SwnOperator, &SwnOperator),
    rhs: &[SwnRhs],
    test_vectors: &[FockVector],
) -> Result<f64> {
    let (p, q) = lhs_pair;
    for f in test_vectors {
        p.space.check_window(f)?;
    }
    let rhs_apply = |f: &FockVector| -> Result<FockVector> {
        let mut acc = FockVector::zero(f.dim(), f.max_level());
        for term in rhs {
            acc = match term {
                SwnRhs::Identity(c) => acc.axpy(*c, f)?,
                SwnRhs::Operator(c, op) => acc.axpy(*c, &op.apply(f)?)?,
            };
        }
        Ok(acc)
    };
    max_residual(|f| p.apply(f), |f| q.apply(f), rhs_apply, test_vectors)
}

/// Builds `(P, Q, RHS)` of a named relation for `φ`, `ψ`.
pub fn relation_operators(
    rel: SwnRelation,
    phi: &GridFunction,
    psi: &GridFunction,
    space: &SwnSpace,
) -> Result<(SwnOperator, SwnOperator, Vec<SwnRhs>)> {
    let ((pr, ps), (qr, qs), rhs) = relation_shape(rel);
    let prod = pointwise_product(phi, psi)?;
    let pick = |s: Smear| match s {
        Smear::Phi => phi,
        Smear::Psi => psi,
        Smear::Product => &prod,
    };
    let p = SwnOperator::new(role_kind(pr), pick(ps), 0.0, space)?;
    let q = SwnOperator::new(role_kind(qr), pick(qs), 0.0, space)?;
    let ip = inner(phi, psi)?;
    let rhs = rhs
        .into_iter()
        .map(|t| match t {
            RhsTerm::Identity(c) => Ok(SwnRhs::Identity(c * ip)),
            RhsTerm::Operator(c, role, s) => Ok(SwnRhs::Operator(c, SwnOperator::new(role_kind(role), pick(s), 0.0, space)?)),
        })
        .collect::<Result<_>>()?;
    Ok((p, q, rhs))
}

/// `⟨Ω, X_β(φ)^k Ω⟩` in `space`, which must have `N >= k+1` and `M >= k+1`.
pub fn vacuum_moment(beta: f64, phi: &GridFunction, k: usize, space: &SwnSpace) -> Result<f64> {
    if space.max_level < k + 1 {
        return Err(Error::Truncation { what: "N", required: k + 1, have: space.max_level });
    }
    if space.ladder < k + 1 {
        return Err(Error::Truncation { what: "M", required: k + 1, have: space.ladder });
    }
    let x = SwnOperator::new(SwnKind::X, phi, beta, space)?;
    let mut f = space.vacuum();
    for step in 0..k {
        f = x.apply(&f)?;
        // a component at level L needs L more steps to return to Ω
        let remaining = k - step - 1;
        f = f.truncated_to(remaining);
    }
    Ok(f.vacuum_component())
}

/// [`vacuum_moment`] in the smallest admissible space `N = M = k+1`.
pub fn vacuum_moment_auto(beta: f64, phi: &GridFunction, k: usize) -> Result<f64> {
    let space = SwnSpace::new(phi.space().clone(), k + 1, k + 1)?;
    vacuum_moment(beta, phi, k, &space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_inner;

    fn grid(g: usize, v: f64) -> Arc<GridSpace> {
        GridSpace::uniform(g, v).unwrap()
    }

    fn random_fn(s: &Arc<GridSpace>, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::new(s.clone(), (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn vacuum_examples() {
        let s = grid(2, 0.5);
        let space = SwnSpace::new(s.clone(), 4, 4).unwrap();
        let phi = GridFunction::new(s, vec![1.0, -2.0]).unwrap();
        let om = space.vacuum();
        let b = SwnOperator::new(SwnKind::B, &phi, 0.0, &space).unwrap();
        assert!(b.apply(&om).unwrap().is_empty());
        let n = SwnOperator::new(SwnKind::N, &phi, 0.0, &space).unwrap();
        assert!(n.apply(&om).unwrap().is_empty());
        let bd = SwnOperator::new(SwnKind::Bdag, &phi, 0.0, &space).unwrap();
        let out = bd.apply(&om).unwrap();
        let twice = phi.map(|x| 2.0 * x);
        let expected = create(&space.embed(&twice, 1), &om).unwrap();
        assert!(out.axpy(-1.0, &expected).unwrap().norm() < 1e-15);
        assert!((fock_inner(&out, &out).unwrap() - 4.0 * inner(&phi, &phi).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn x_is_sum_of_parts() {
        let s = grid(3, 0.5);
        let space = SwnSpace::new(s.clone(), 6, 5).unwrap();
        let phi = random_fn(&s, 1);
        let beta = 1.7;
        let x = SwnOperator::new(SwnKind::X, &phi, beta, &space).unwrap();
        let parts = [SwnKind::Bdag, SwnKind::B, SwnKind::N].map(|k| SwnOperator::new(k, &phi, beta, &space).unwrap());
        for seed in 0..5 {
            let f = space.random_test_vector(seed, 8).unwrap();
            let lhs = x.apply(&f).unwrap();
            let rhs = parts[0]
                .apply(&f)
                .unwrap()
                .axpy(1.0, &parts[1].apply(&f).unwrap())
                .unwrap()
                .axpy(beta, &parts[2].apply(&f).unwrap())
                .unwrap();
            assert!(lhs.axpy(-1.0, &rhs).unwrap().norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn all_relations_hold() {
        for &(g, v) in &[(1usize, 1.0), (2, 0.7), (3, 0.5)] {
            let s = grid(g, v);
            let space = SwnSpace::new(s.clone(), 5, 5).unwrap();
            let phi = random_fn(&s, 10 + g as u64);
            let psi = random_fn(&s, 20 + g as u64);
            let vectors: Vec<_> = (0..4).map(|seed| space.random_test_vector(seed, 10).unwrap()).collect();
            for rel in SwnRelation::ALL {
                let (p, q, rhs) = relation_operators(rel, &phi, &psi, &space).unwrap();
                let r = commutator_residual((&p, &q), &rhs, &vectors).unwrap();
                assert!(r <= 1e-10, "{} on G={g}: {r}", rel.name());
            }
        }
    }

    #[test]
    fn commutator_on_vacuum() {
        let s = grid(2, 0.5);
        let space = SwnSpace::new(s.clone(), 4, 4).unwrap();
        let phi = random_fn(&s, 3);
        let psi = random_fn(&s, 4);
        let b = SwnOperator::new(SwnKind::B, &phi, 0.0, &space).unwrap();
        let bd = SwnOperator::new(SwnKind::Bdag, &psi, 0.0, &space).unwrap();
        let om = space.vacuum();
        let comm = b.apply(&bd.apply(&om).unwrap()).unwrap().axpy(-1.0, &bd.apply(&b.apply(&om).unwrap()).unwrap()).unwrap();
        let expected = 4.0 * inner(&phi, &psi).unwrap();
        assert_eq!(comm.len(), 1);
        assert!((comm.vacuum_component() - expected).abs() < 1e-14);
    }

    #[test]
    fn window_rejected() {
        let s = grid(1, 1.0);
        let space = SwnSpace::new(s.clone(), 4, 3).unwrap();
        let phi = GridFunction::constant(s, 1.0);
        let (p, q, rhs) = relation_operators(SwnRelation::NumberNumber, &phi, &phi, &space).unwrap();
        let mut f = FockVector::zero(space.dim(), 3);
        f.add_at(Occupation::from_modes(vec![0, 0]), 1.0);
        assert!(matches!(commutator_residual((&p, &q), &rhs, &[f]), Err(Error::Window(_))));
        let mut f = FockVector::zero(space.dim(), 3);
        f.add_at(Occupation::from_modes(vec![space.mode(0, 3)]), 1.0);
        assert!(commutator_residual((&p, &q), &rhs, &[f]).is_err());
    }

    #[test]
    fn adjoint_and_symmetry() {
        let s = grid(2, 0.8);
        let space = SwnSpace::new(s.clone(), 5, 5).unwrap();
        let phi = random_fn(&s, 5);
        let b = SwnOperator::new(SwnKind::B, &phi, 0.0, &space).unwrap();
        let bd = SwnOperator::new(SwnKind::Bdag, &phi, 0.0, &space).unwrap();
        let n = SwnOperator::new(SwnKind::N, &phi, 0.0, &space).unwrap();
        for seed in 0..6 {
            let f = space.random_test_vector(seed, 10).unwrap();
            let g = space.random_test_vector(100 + seed, 10).unwrap();
            let lhs = fock_inner(&bd.apply(&f).unwrap(), &g).unwrap();
            let rhs = fock_inner(&f, &b.apply(&g).unwrap()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            let lhs = fock_inner(&n.apply(&f).unwrap(), &g).unwrap();
            let rhs = fock_inner(&f, &n.apply(&g).unwrap()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn moment_examples() {
        let s = grid(3, 0.5);
        let phi = random_fn(&s, 8);
        for &beta in &[0.0, 1.0, 3.0] {
            assert_eq!(vacuum_moment_auto(beta, &phi, 0).unwrap(), 1.0);
            assert_eq!(vacuum_moment_auto(beta, &phi, 1).unwrap(), 0.0);
            let m2 = vacuum_moment_auto(beta, &phi, 2).unwrap();
            assert!((m2 - 4.0 * inner(&phi, &phi).unwrap()).abs() < 1e-13);
            let m3 = vacuum_moment_auto(beta, &phi, 3).unwrap();
            assert!((m3 - 8.0 * beta * phi.integral_of_power(3)).abs() < 1e-12);
        }
        let small = SwnSpace::new(s, 3, 3).unwrap();
        assert!(matches!(vacuum_moment(1.0, &phi, 4, &small), Err(Error::Truncation { .. })));
    }

    #[test]
    fn moment_truncation_independent() {
        let s = grid(2, 0.5);
        let phi = random_fn(&s, 9);
        for k in 0..=6 {
            let base = vacuum_moment_auto(1.3, &phi, k).unwrap();
            let big = SwnSpace::new(s.clone(), k + 4, k + 3).unwrap();
            assert_eq!(base.to_bits(), vacuum_moment(1.3, &phi, k, &big).unwrap().to_bits());
        }
    }
}
