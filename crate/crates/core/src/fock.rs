//! Truncated symmetric Fock space over `R^D`.
//!
//! Vectors are stored sparsely in the monomial basis: an [`Occupation`]
//! multiset `m = {i1, ..., in}` stands for the symmetrized tensor
//! `u_{i1} ⊗̂ ... ⊗̂ u_{in}` of orthonormal one-particle basis vectors. With the
//! `n!`-weighted norm of the Fock space this basis is orthogonal and
//! `‖u_m‖² = Π_i m_i!`, so [`fock_inner`] only has to apply that weight.
//!
//! Components above the configured maximal level are dropped by
//! [`create`]; identities are exact as long as no intermediate vector
//! touches that ceiling.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a one-particle basis vector.
pub type Mode = u32;

/// Sorted multiset of one-particle modes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Occupation(Vec<Mode>);

impl Occupation {
    pub fn empty() -> Self {
        Occupation(Vec::new())
    }

    pub fn from_modes(mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable();
        Occupation(modes)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    /// `(mode, occupation)` pairs with positive occupation.
    pub fn counts(&self) -> impl Iterator<Item = (Mode, usize)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            if i >= self.0.len() {
                return None;
            }
            let mode = self.0[i];
            let start = i;
            while i < self.0.len() && self.0[i] == mode {
                i += 1;
            }
            Some((mode, i - start))
        })
    }

    pub fn count(&self, mode: Mode) -> usize {
        self.0.iter().filter(|&&m| m == mode).count()
    }

    /// `Π m_i!`, the squared norm of the monomial basis vector.
    pub fn weight(&self) -> f64 {
        self.counts()
            .map(|(_, c)| (1..=c).map(|k| k as f64).product::<f64>())
            .product()
    }

    pub fn with(&self, mode: Mode) -> Occupation {
        let pos = self.0.partition_point(|&m| m <= mode);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..pos]);
        v.push(mode);
        v.extend_from_slice(&self.0[pos..]);
        Occupation(v)
    }

    /// Removes one copy of `mode`; the caller guarantees it is present.
    pub fn without(&self, mode: Mode) -> Occupation {
        let pos = self.0.iter().position(|&m| m == mode).expect("mode not occupied");
        let mut v = self.0.clone();
        v.remove(pos);
        Occupation(v)
    }

    fn replaced(&self, from: Mode, to: Mode) -> Occupation {
        if from == to {
            return self.clone();
        }
        self.without(from).with(to)
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (mode, c)) in self.counts().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{mode}^{c}")?;
        }
        write!(f, "}}")
    }
}

/// Sparse element of the truncated Fock space `⊕_{n≤N} (R^D)^{⊗̂n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    dim: usize,
    max_level: usize,
    entries: BTreeMap<Occupation, f64>,
}

impl FockVector {
    pub fn zero(dim: usize, max_level: usize) -> Self {
        FockVector { dim, max_level, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn entries(&self) -> &BTreeMap<Occupation, f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, occ: &Occupation) -> f64 {
        self.entries.get(occ).copied().unwrap_or(0.0)
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_component(&self) -> f64 {
        self.get(&Occupation::empty())
    }

    /// Adds `value` at `occ`. Panics on an out-of-range index, drops levels
    /// above the ceiling.
    pub fn add_at(&mut self, occ: Occupation, value: f64) {
        assert!(
            occ.modes().iter().all(|&m| (m as usize) < self.dim),
            "mode out of range for dimension {}",
            self.dim
        );
        if occ.level() > self.max_level {
            return;
        }
        *self.entries.entry(occ).or_insert(0.0) += value;
    }

    /// Highest level carrying a nonzero coefficient.
    pub fn top_level(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(o, _)| o.level())
            .max()
    }

    pub fn max_mode(&self) -> Option<Mode> {
        self.entries.keys().filter_map(|o| o.modes().last().copied()).max()
    }

    pub fn scaled(&self, s: f64) -> FockVector {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|c| *c *= s);
        out
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &FockVector) -> Result<FockVector> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (o, c) in &other.entries {
            *out.entries.entry(o.clone()).or_insert(0.0) += s * c;
        }
        Ok(out)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(o, c)| c * c * o.weight()).sum::<f64>().sqrt()
    }

    /// Keeps only entries with level `<= level`.
    pub fn truncated_to(&self, level: usize) -> FockVector {
        let mut out = FockVector::zero(self.dim, self.max_level);
        out.entries = self
            .entries
            .iter()
            .filter(|(o, _)| o.level() <= level)
            .map(|(o, c)| (o.clone(), *c))
            .collect();
        out
    }

    fn check_same(&self, other: &FockVector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        if self.max_level != other.max_level {
            return Err(Error::Domain(format!(
                "max level {} vs {}",
                self.max_level, other.max_level
            )));
        }
        Ok(())
    }

    fn compact(mut self) -> Self {
        self.entries.retain(|_, c| *c != 0.0);
        self
    }
}

/// Sparse `D x D` real matrix, stored by column.
#[derive(Clone, Debug, PartialEq)]
pub struct OneParticleOperator {
    dim: usize,
    columns: Vec<Vec<(Mode, f64)>>,
    tridiagonal: bool,
}

impl OneParticleOperator {
    pub fn identity(dim: usize) -> Self {
        OneParticleOperator {
            dim,
            columns: (0..dim).map(|i| vec![(i as Mode, 1.0)]).collect(),
            tridiagonal: true,
        }
    }

    /// From row-major dense storage.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut columns = vec![Vec::new(); dim];
        let mut tridiagonal = true;
        for (j, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, got: row.len() });
            }
            for (i, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    columns[i].push((j as Mode, x));
                    tridiagonal &= i.abs_diff(j) <= 1;
                }
            }
        }
        Ok(OneParticleOperator { dim, columns, tridiagonal })
    }

    /// From `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::Dimension { expected: dim, got: r.max(c) + 1 });
            }
            *acc.entry((c, r)).or_insert(0.0) += v;
        }
        let mut columns = vec![Vec::new(); dim];
        let mut tridiagonal = true;
        for ((c, r), v) in acc {
            if v != 0.0 {
                columns[c].push((r as Mode, v));
                tridiagonal &= r.abs_diff(c) <= 1;
            }
        }
        Ok(OneParticleOperator { dim, columns, tridiagonal })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.tridiagonal
    }

    pub fn column(&self, i: Mode) -> &[(Mode, f64)] {
        &self.columns[i as usize]
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.columns[col]
            .iter()
            .find(|(r, _)| *r as usize == row)
            .map_or(0.0, |(_, v)| *v)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|c| {
            self.columns[c].iter().all(|&(r, v)| self.entry(c, r as usize) == v)
        })
    }

    pub fn apply(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: g.len() });
        }
        let mut out = vec![0.0; self.dim];
        for (i, &gi) in g.iter().enumerate() {
            if gi != 0.0 {
                for &(r, v) in &self.columns[i] {
                    out[r as usize] += v * gi;
                }
            }
        }
        Ok(out)
    }
}

pub fn vacuum(dim: usize, max_level: usize) -> FockVector {
    let mut v = FockVector::zero(dim, max_level);
    v.entries.insert(Occupation::empty(), 1.0);
    v
}

fn check_dim(dim: usize, got: usize) -> Result<()> {
    if dim == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected: dim, got })
    }
}

/// Creation operator `A⁺(g) F = g ⊗̂ F`; overflow above the ceiling is dropped.
pub fn create(g: &[f64], f: &FockVector) -> Result<FockVector> {
    check_dim(f.dim, g.len())?;
    let mut out = FockVector::zero(f.dim, f.max_level);
    for (occ, &c) in &f.entries {
        if occ.level() + 1 > f.max_level {
            continue;
        }
        for (i, &gi) in g.iter().enumerate() {
            if gi != 0.0 {
                *out.entries.entry(occ.with(i as Mode)).or_insert(0.0) += gi * c;
            }
        }
    }
    Ok(out.compact())
}

/// Annihilation operator `A⁻(g)`, the adjoint of [`create`] for the
/// `n!`-weighted inner product.
pub fn annihilate(g: &[f64], f: &FockVector) -> Result<FockVector> {
    check_dim(f.dim, g.len())?;
    let mut out = FockVector::zero(f.dim, f.max_level);
    for (occ, &c) in &f.entries {
        for (mode, count) in occ.counts() {
            let gi = g[mode as usize];
            if gi != 0.0 {
                *out.entries.entry(occ.without(mode)).or_insert(0.0) += gi * count as f64 * c;
            }
        }
    }
    Ok(out.compact())
}

/// Differential second quantization `dΓ(h)`: `h` acting on each tensor slot.
pub fn dgamma(h: &OneParticleOperator, f: &FockVector) -> Result<FockVector> {
    check_dim(f.dim, h.dim)?;
    let mut out = FockVector::zero(f.dim, f.max_level);
    for (occ, &c) in &f.entries {
        for (mode, count) in occ.counts() {
            for &(row, v) in h.column(mode) {
                let key = occ.replaced(mode, row);
                *out.entries.entry(key).or_insert(0.0) += v * count as f64 * c;
            }
        }
    }
    Ok(out.compact())
}

/// `Σ_n n! ⟨f⁽ⁿ⁾, g⁽ⁿ⁾⟩`.
pub fn fock_inner(f: &FockVector, g: &FockVector) -> Result<f64> {
    f.check_same(g)?;
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    Ok(small
        .entries
        .iter()
        .filter_map(|(o, c)| large.entries.get(o).map(|d| c * d * o.weight()))
        .sum())
}
