//! The six defining relations of the square-of-white-noise algebra with
//! `c = 2`, and a residual harness generic over the representation space.

use serde::Serialize;

use crate::error::Result;

pub const C: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SwnRelation {
    /// `[B(φ), B†(ψ)] = 2c⟨φ,ψ⟩ + 4N(φψ)`
    AnnihilatorCreator,
    /// `[N(φ), B†(ψ)] = 2B†(φψ)`
    NumberCreator,
    /// `[N(φ), B(ψ)] = -2B(φψ)`
    NumberAnnihilator,
    /// `[N(φ), N(ψ)] = 0`
    NumberNumber,
    /// `[B(φ), B(ψ)] = 0`
    AnnihilatorAnnihilator,
    /// `[B†(φ), B†(ψ)] = 0`
    CreatorCreator,
}

impl SwnRelation {
    pub const ALL: [SwnRelation; 6] = [
        SwnRelation::AnnihilatorCreator,
        SwnRelation::NumberCreator,
        SwnRelation::NumberAnnihilator,
        SwnRelation::NumberNumber,
        SwnRelation::AnnihilatorAnnihilator,
        SwnRelation::CreatorCreator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SwnRelation::AnnihilatorCreator => "[B(phi),Bdag(psi)] = 2c<phi,psi> + 4N(phi psi)",
            SwnRelation::NumberCreator => "[N(phi),Bdag(psi)] = 2Bdag(phi psi)",
            SwnRelation::NumberAnnihilator => "[N(phi),B(psi)] = -2B(phi psi)",
            SwnRelation::NumberNumber => "[N(phi),N(psi)] = 0",
            SwnRelation::AnnihilatorAnnihilator => "[B(phi),B(psi)] = 0",
            SwnRelation::CreatorCreator => "[Bdag(phi),Bdag(psi)] = 0",
        }
    }
}

/// Operator role inside a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Creator,
    Number,
    Annihilator,
}

/// Smearing function of a relation operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smear {
    Phi,
    Psi,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhsTerm {
    /// `coeff · ⟨φ,ψ⟩ · 1`
    Identity(f64),
    Operator(f64, Role, Smear),
}

/// `(P, Q, RHS)` with `[P, Q] = RHS`.
pub fn relation_shape(rel: SwnRelation) -> ((Role, Smear), (Role, Smear), Vec<RhsTerm>) {
    use Role::*;
    use Smear::*;
    match rel {
        SwnRelation::AnnihilatorCreator => (
            (Annihilator, Phi),
            (Creator, Psi),
            vec![RhsTerm::Identity(2.0 * C), RhsTerm::Operator(4.0, Number, Product)],
        ),
        SwnRelation::NumberCreator => {
            ((Number, Phi), (Creator, Psi), vec![RhsTerm::Operator(2.0, Creator, Product)])
        }
        SwnRelation::NumberAnnihilator => (
            (Number, Phi),
            (Annihilator, Psi),
            vec![RhsTerm::Operator(-2.0, Annihilator, Product)],
        ),
        SwnRelation::NumberNumber => ((Number, Phi), (Number, Psi), vec![]),
        SwnRelation::AnnihilatorAnnihilator => ((Annihilator, Phi), (Annihilator, Psi), vec![]),
        SwnRelation::CreatorCreator => ((Creator, Phi), (Creator, Psi), vec![]),
    }
}

/// Vectors the residual harness can subtract and measure.
pub trait Residual: Sized {
    fn axpy(&self, s: f64, other: &Self) -> Result<Self>;
    fn norm(&self) -> f64;
}

impl Residual for crate::fock::FockVector {
    fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        crate::fock::FockVector::axpy(self, s, other)
    }
    fn norm(&self) -> f64 {
        crate::fock::FockVector::norm(self)
    }
}

/// `max_F ‖([P,Q] - Σ c_i R_i) F‖ / ‖F‖`. `rhs` yields the already-summed
/// right-hand side applied to `F`.
pub fn max_residual<V: Residual>(
    p: impl Fn(&V) -> Result<V>,
    q: impl Fn(&V) -> Result<V>,
    rhs: impl Fn(&V) -> Result<V>,
    vectors: &[V],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in vectors {
        let pq = p(&q(f)?)?;
        let qp = q(&p(f)?)?;
        let r = rhs(f)?;
        let res = pq.axpy(-1.0, &qp)?.axpy(-1.0, &r)?;
        let n = f.norm();
        if n > 0.0 {
            worst = worst.max(res.norm() / n);
        }
    }
    Ok(worst)
}
