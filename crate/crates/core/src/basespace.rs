//! Finite base space: `G` atoms of common mass `v` standing in for the
//! Lebesgue space the noise lives on.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpace {
    dim: usize,
    atoms: Vec<String>,
    cell_mass: f64,
}

impl GridSpace {
    pub fn new(dim: usize, atoms: Vec<String>, cell_mass: f64) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(Error::Domain("dimension label must be positive".into()));
        }
        if atoms.is_empty() {
            return Err(Error::Domain("grid needs at least one atom".into()));
        }
        if !(cell_mass > 0.0 && cell_mass.is_finite()) {
            return Err(Error::Domain(format!("cell mass must be positive, got {cell_mass}")));
        }
        let mut sorted = atoms.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != atoms.len() {
            return Err(Error::Domain("atom identifiers must be unique".into()));
        }
        Ok(Arc::new(GridSpace { dim, atoms, cell_mass }))
    }

    /// `count` atoms named `x0, x1, ...` in dimension 1.
    pub fn uniform(count: usize, cell_mass: f64) -> Result<Arc<Self>> {
        Self::new(1, (0..count).map(|i| format!("x{i}")).collect(), cell_mass)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn cell_mass(&self) -> f64 {
        self.cell_mass
    }
}

/// A real function on the atoms of a [`GridSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    space: Arc<GridSpace>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(space: Arc<GridSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Dimension { expected: space.len(), got: values.len() });
        }
        Ok(GridFunction { space, values })
    }

    pub fn constant(space: Arc<GridSpace>, value: f64) -> Self {
        let values = vec![value; space.len()];
        GridFunction { space, values }
    }

    pub fn zero(space: Arc<GridSpace>) -> Self {
        Self::constant(space, 0.0)
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }

    fn check_same(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::Domain("grid functions live on different spaces".into()))
        }
    }

    /// `v * sum_x f(x)^p`, the integral of the p-th power.
    pub fn integral_of_power(&self, p: u32) -> f64 {
        self.space.cell_mass * self.values.iter().map(|x| x.powi(p as i32)).sum::<f64>()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// L² pairing `v * Σ f g`.
pub fn inner(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.check_same(g)?;
    let s: f64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum();
    Ok(f.space.cell_mass * s)
}

pub fn pointwise_product(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.check_same(g)?;
    Ok(GridFunction {
        space: f.space.clone(),
        values: f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect(),
    })
}
