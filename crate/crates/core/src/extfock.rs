//! Discrete extended Fock space over a [`GridSpace`] and the Jacobi field
//! `a_β(φ) = a⁺(φ) + βa⁰(φ) + a⁻(φ)` of the Meixner-class noise.
//!
//! A level-`n` kernel is a symmetric function on `n`-tuples of atoms,
//! stored by the multiset of its arguments. Integrals become `v`-weighted
//! sums; the diagonal part `a₂⁻` is pointwise and carries no `v`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basespace::{GridFunction, GridSpace};
use crate::error::{Error, Result};
use crate::fock::{Mode, Occupation};
use crate::jacobi::{check_beta, JacobiMatrix};
use crate::relations::{max_residual, relation_shape, Residual, RhsTerm, Role, Smear, SwnRelation};
use crate::special::factorial;

/// Multiplicity form `α = (α₁, α₂, ...)` of an integer partition of `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalPattern {
    alpha: Vec<usize>,
    n: usize,
}

impl DiagonalPattern {
    /// Trailing zeros of `alpha` are ignored.
    pub fn new(mut alpha: Vec<usize>) -> Self {
        while alpha.last() == Some(&0) {
            alpha.pop();
        }
        let n = alpha.iter().enumerate().map(|(i, a)| (i + 1) * a).sum();
        DiagonalPattern { alpha, n }
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// `Σ i·αᵢ`
    pub fn n(&self) -> usize {
        self.n
    }

    /// `|α| = Σ αᵢ`
    pub fn size(&self) -> usize {
        self.alpha.iter().sum()
    }

    /// Block sizes in argument order: `α₁` ones, then `α₂` twos, ...
    pub fn blocks(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i + 1, a))
            .collect()
    }
}

/// All partitions of `n` in multiplicity form (`n = 0` gives the empty pattern).
pub fn partitions(n: usize) -> Vec<DiagonalPattern> {
    fn rec(remaining: usize, max_part: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(parts.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            parts.push(part);
            rec(remaining - part, part, parts, out);
            parts.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, n, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|parts| {
            let mut alpha = vec![0; n];
            for p in parts {
                alpha[p - 1] += 1;
            }
            DiagonalPattern::new(alpha)
        })
        .collect()
}

/// `K_α = n! / Π αᵢ! iᵢ^{αᵢ}`, the number of permutations of cycle type `α`.
pub fn kappa(alpha: &DiagonalPattern) -> u128 {
    let mut denom: u128 = 1;
    for (i, &a) in alpha.alpha.iter().enumerate() {
        denom *= (1..=a as u128).product::<u128>() * ((i + 1) as u128).pow(a as u32);
    }
    let num: u128 = (1..=alpha.n as u128).product();
    debug_assert_eq!(num % denom, 0);
    num / denom
}

/// Symmetric real function on `n`-tuples of atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel {
    level: usize,
    grid: Arc<GridSpace>,
    values: BTreeMap<Occupation, f64>,
}

impl SymmetricKernel {
    pub fn zero(grid: Arc<GridSpace>, level: usize) -> Self {
        SymmetricKernel { level, grid, values: BTreeMap::new() }
    }

    /// `φ^{⊗n}`.
    pub fn tensor_power(phi: &GridFunction, level: usize) -> Self {
        let mut k = Self::zero(phi.space().clone(), level);
        let g = phi.space().len();
        for_each_multiset(g, level, |atoms| {
            let v: f64 = atoms.iter().map(|&a| phi.value(a as usize)).product();
            k.set(Occupation::from_modes(atoms.to_vec()), v);
        });
        k
    }

    /// Builds a kernel from a function of the sorted argument multiset.
    pub fn from_fn(grid: Arc<GridSpace>, level: usize, mut f: impl FnMut(&[Mode]) -> f64) -> Self {
        let mut k = Self::zero(grid.clone(), level);
        for_each_multiset(grid.len(), level, |atoms| {
            k.set(Occupation::from_modes(atoms.to_vec()), f(atoms));
        });
        k
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn grid(&self) -> &Arc<GridSpace> {
        &self.grid
    }

    pub fn values(&self) -> &BTreeMap<Occupation, f64> {
        &self.values
    }

    pub fn set(&mut self, args: Occupation, value: f64) {
        assert_eq!(args.level(), self.level, "kernel arity");
        if value == 0.0 {
            self.values.remove(&args);
        } else {
            self.values.insert(args, value);
        }
    }

    pub fn add(&mut self, args: Occupation, value: f64) {
        *self.values.entry(args).or_insert(0.0) += value;
    }

    /// Value at an argument tuple, in any order.
    pub fn eval(&self, args: &[Mode]) -> f64 {
        self.values.get(&Occupation::from_modes(args.to_vec())).copied().unwrap_or(0.0)
    }

    fn compact(mut self) -> Self {
        self.values.retain(|_, v| *v != 0.0);
        self
    }
}

/// Calls `f` on every sorted multiset of `len` atoms out of `g`.
fn for_each_multiset(g: usize, len: usize, mut f: impl FnMut(&[Mode])) {
    fn rec(g: usize, start: Mode, buf: &mut Vec<Mode>, len: usize, f: &mut impl FnMut(&[Mode])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for a in start..g as Mode {
            buf.push(a);
            rec(g, a, buf, len, f);
            buf.pop();
        }
    }
    rec(g, 0, &mut Vec::with_capacity(len), len, &mut f);
}

/// `D_α f` as a function on `|α|`-tuples.
pub struct DiagonalView<'a> {
    blocks: Vec<usize>,
    kernel: &'a SymmetricKernel,
}

impl DiagonalView<'_> {
    pub fn arity(&self) -> usize {
        self.blocks.len()
    }

    pub fn eval(&self, xs: &[Mode]) -> f64 {
        assert_eq!(xs.len(), self.blocks.len(), "D_α arity");
        let args: Vec<Mode> = xs
            .iter()
            .zip(&self.blocks)
            .flat_map(|(&x, &b)| std::iter::repeat_n(x, b))
            .collect();
        self.kernel.eval(&args)
    }
}

pub fn diag_embed<'a>(alpha: &DiagonalPattern, f: &'a SymmetricKernel) -> Result<DiagonalView<'a>> {
    if alpha.n != f.level {
        return Err(Error::Domain(format!("pattern of {} applied to a level-{} kernel", alpha.n, f.level)));
    }
    Ok(DiagonalView { blocks: alpha.blocks(), kernel: f })
}

fn check_grid(a: &Arc<GridSpace>, b: &Arc<GridSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::Domain("kernels live on different grids".into()))
    }
}

/// `Σ_α K_α v^{|α|} Σ_{y ∈ G^{|α|}} (D_α f)(y) (D_α g)(y)`.
pub fn ext_inner(f: &SymmetricKernel, g: &SymmetricKernel) -> Result<f64> {
    check_grid(&f.grid, &g.grid)?;
    if f.level != g.level {
        return Err(Error::Domain(format!("levels {} and {} differ", f.level, g.level)));
    }
    if f.level == 0 {
        return Ok(f.eval(&[]) * g.eval(&[]));
    }
    let atoms = f.grid.len();
    let v = f.grid.cell_mass();
    let mut total = 0.0;
    for alpha in partitions(f.level) {
        let df = diag_embed(&alpha, f)?;
        let dg = diag_embed(&alpha, g)?;
        let arity = df.arity();
        let mut tuple = vec![0 as Mode; arity];
        let mut sum = 0.0;
        loop {
            sum += df.eval(&tuple) * dg.eval(&tuple);
            // odometer over G^{|α|}
            let mut i = 0;
            while i < arity {
                tuple[i] += 1;
                if (tuple[i] as usize) < atoms {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if i == arity {
                break;
            }
        }
        total += kappa(&alpha) as f64 * v.powi(arity as i32) * sum;
    }
    Ok(total)
}

/// Element of the extended Fock space truncated at `max_level`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtFockVector {
    grid: Arc<GridSpace>,
    max_level: usize,
    components: BTreeMap<usize, SymmetricKernel>,
}

impl ExtFockVector {
    pub fn zero(grid: Arc<GridSpace>, max_level: usize) -> Self {
        ExtFockVector { grid, max_level, components: BTreeMap::new() }
    }

    pub fn vacuum(grid: Arc<GridSpace>, max_level: usize) -> Self {
        let mut v = Self::zero(grid.clone(), max_level);
        let mut k = SymmetricKernel::zero(grid, 0);
        k.set(Occupation::empty(), 1.0);
        v.components.insert(0, k);
        v
    }

    pub fn grid(&self) -> &Arc<GridSpace> {
        &self.grid
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn component(&self, level: usize) -> Option<&SymmetricKernel> {
        self.components.get(&level)
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &SymmetricKernel)> {
        self.components.iter()
    }

    pub fn vacuum_component(&self) -> f64 {
        self.components.get(&0).map_or(0.0, |k| k.eval(&[]))
    }

    /// Sets the level-`n` component; levels above the ceiling are dropped.
    pub fn set_component(&mut self, kernel: SymmetricKernel) {
        if kernel.level <= self.max_level {
            self.components.insert(kernel.level, kernel);
        }
    }

    pub fn top_level(&self) -> Option<usize> {
        self.components.iter().filter(|(_, k)| !k.values.is_empty()).map(|(&n, _)| n).max()
    }

    fn add_at(&mut self, level: usize, args: Occupation, value: f64) {
        if level > self.max_level {
            return;
        }
        self.components
            .entry(level)
            .or_insert_with(|| SymmetricKernel::zero(self.grid.clone(), level))
            .add(args, value);
    }

    pub fn truncated_to(&self, level: usize) -> Self {
        let mut out = self.clone();
        out.components.retain(|&n, _| n <= level);
        out
    }

    fn compact(mut self) -> Self {
        let comps = std::mem::take(&mut self.components);
        self.components = comps
            .into_iter()
            .map(|(n, k)| (n, k.compact()))
            .filter(|(_, k)| !k.values.is_empty())
            .collect();
        self
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        check_grid(&self.grid, &other.grid)?;
        if self.max_level != other.max_level {
            return Err(Error::Domain(format!("max level {} vs {}", self.max_level, other.max_level)));
        }
        Ok(())
    }

    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&n, k) in &other.components {
            for (args, v) in &k.values {
                out.add_at(n, args.clone(), s * v);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for k in out.components.values_mut() {
            k.values.values_mut().for_each(|v| *v *= s);
        }
        out
    }

    pub fn norm(&self) -> f64 {
        ext_fock_inner(self, self).map(f64::sqrt).unwrap_or(f64::NAN)
    }

    /// Random vector with kernels on levels `<= top`, values uniform in `[-1, 1]`.
    pub fn random(grid: Arc<GridSpace>, max_level: usize, top: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Self::zero(grid.clone(), max_level);
        for level in 0..=top.min(max_level) {
            let k = SymmetricKernel::from_fn(grid.clone(), level, |_| rng.gen_range(-1.0..1.0));
            out.set_component(k);
        }
        out
    }
}

impl Residual for ExtFockVector {
    fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        ExtFockVector::axpy(self, s, other)
    }
    fn norm(&self) -> f64 {
        ExtFockVector::norm(self)
    }
}

/// `Σ_n n! (f⁽ⁿ⁾, g⁽ⁿ⁾)_ext`.
pub fn ext_fock_inner(f: &ExtFockVector, g: &ExtFockVector) -> Result<f64> {
    f.check_same(g)?;
    let mut total = 0.0;
    for (n, kf) in &f.components {
        if let Some(kg) = g.components.get(n) {
            total += factorial(*n) * ext_inner(kf, kg)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AKind {
    Plus,
    Zero,
    Minus1,
    Minus2,
    Minus,
    Beta,
}

/// Applies `a⁺`, `a⁰`, `a₁⁻`, `a₂⁻`, `a⁻ = a₁⁻ + a₂⁻` or `a_β` (with
/// coefficient `beta` on `a⁰`).
pub fn apply_a(kind: AKind, phi: &GridFunction, f: &ExtFockVector, beta: f64) -> Result<ExtFockVector> {
    check_grid(phi.space(), &f.grid)?;
    let mut out = ExtFockVector::zero(f.grid.clone(), f.max_level);
    let (plus, zero, minus1, minus2) = match kind {
        AKind::Plus => (1.0, 0.0, 0.0, 0.0),
        AKind::Zero => (0.0, 1.0, 0.0, 0.0),
        AKind::Minus1 => (0.0, 0.0, 1.0, 0.0),
        AKind::Minus2 => (0.0, 0.0, 0.0, 1.0),
        AKind::Minus => (0.0, 0.0, 1.0, 1.0),
        AKind::Beta => {
            check_beta(beta)?;
            (1.0, beta, 1.0, 1.0)
        }
    };
    let g = f.grid.len();
    let v = f.grid.cell_mass();
    for (&n, k) in &f.components {
        for (args, &c) in &k.values {
            if zero != 0.0 {
                // (Σ φ(x_i)) f
                let s: f64 = args.counts().map(|(a, m)| m as f64 * phi.value(a as usize)).sum();
                out.add_at(n, args.clone(), zero * s * c);
            }
            if plus != 0.0 && n < f.max_level {
                // (φ ⊗̂ f)(X) = 1/(n+1) Σ_{a ∈ X} mult_X(a) φ(a) f(X - a): each
                // f(Y) feeds X = Y + a with weight mult_{Y+a}(a) φ(a) / (n+1)
                for a in 0..g as Mode {
                    let p = phi.value(a as usize);
                    if p != 0.0 {
                        let mult = args.count(a) + 1;
                        out.add_at(n + 1, args.with(a), plus * p * mult as f64 / (n + 1) as f64 * c);
                    }
                }
            }
            if n == 0 {
                continue;
            }
            for (a, m) in args.counts() {
                let p = phi.value(a as usize);
                if p == 0.0 {
                    continue;
                }
                let y = args.without(a);
                if minus1 != 0.0 {
                    // n v Σ_x φ(x) f(x, Y): f(X) feeds Y = X - x once per distinct x
                    out.add_at(n - 1, y.clone(), minus1 * n as f64 * v * p * c);
                }
                if minus2 != 0.0 && m >= 2 {
                    // n Σ_{a ∈ Y} mult_Y(a) φ(a) f(Y + a): f(X) feeds Y = X - a
                    // when a stays in Y, with multiplicity m - 1
                    out.add_at(n - 1, y, minus2 * n as f64 * (m - 1) as f64 * p * c);
                }
            }
        }
    }
    Ok(out.compact())
}

/// `⟨Ω, a_β(φ)^k Ω⟩` under the weighted extended inner product.
pub fn ext_vacuum_moment(beta: f64, phi: &GridFunction, k: usize, max_level: usize) -> Result<f64> {
    if max_level < k {
        return Err(Error::Truncation { what: "max level", required: k, have: max_level });
    }
    let mut f = ExtFockVector::vacuum(phi.space().clone(), max_level);
    for step in 0..k {
        f = apply_a(AKind::Beta, phi, &f, beta)?;
        f = f.truncated_to(k - step - 1);
    }
    Ok(f.vacuum_component())
}

/// Jacobi matrix of `a_β(1)` at a single atom of mass `v`, read off from the
/// operators in the orthonormalized basis `φ^{⊗n} / ‖φ^{⊗n}‖`.
pub fn single_atom_jacobi(beta: f64, cell_mass: f64, size: usize) -> Result<JacobiMatrix> {
    check_beta(beta)?;
    let grid = GridSpace::uniform(1, cell_mass)?;
    let one = GridFunction::constant(grid.clone(), 1.0);
    let max_level = size;
    let basis = |n: usize| {
        let mut f = ExtFockVector::zero(grid.clone(), max_level);
        f.set_component(SymmetricKernel::tensor_power(&one, n));
        f
    };
    let norms: Vec<f64> = (0..size).map(|n| basis(n).norm()).collect();
    let mut diag = Vec::with_capacity(size);
    let mut off = Vec::with_capacity(size.saturating_sub(1));
    for n in 0..size {
        let e = basis(n).scaled(1.0 / norms[n]);
        let ae = apply_a(AKind::Beta, &one, &e, beta)?;
        diag.push(ext_fock_inner(&ae, &e)?);
        if n + 1 < size {
            let next = basis(n + 1).scaled(1.0 / norms[n + 1]);
            off.push(ext_fock_inner(&ae, &next)?);
        }
    }
    JacobiMatrix::new(diag, off)
}

/// Right-hand-side terms for the extended-space relation residuals.
#[derive(Debug, Clone)]
pub enum ExtRhs {
    Identity(f64),
    Operator(f64, AKind, GridFunction),
}

/// Rejects vectors above level `N-2`.
pub fn check_ext_window(f: &ExtFockVector) -> Result<()> {
    let top = f.top_level().unwrap_or(0);
    if top + 2 > f.max_level {
        return Err(Error::Window(format!("level {top} exceeds N-2 = {}", f.max_level as i64 - 2)));
    }
    Ok(())
}

/// `max_F ‖([2a_P(φ), 2a_Q(ψ)] - RHS)F‖ / ‖F‖` for one of the six relations,
/// with `2a⁺`, `2a⁰`, `2a⁻` in the roles of `B†`, `N`, `B`.
pub fn ext_relation_residual(
    rel: SwnRelation,
    phi: &GridFunction,
    psi: &GridFunction,
    test_vectors: &[ExtFockVector],
) -> Result<f64> {
    for f in test_vectors {
        check_ext_window(f)?;
    }
    let ((pr, ps), (qr, qs), rhs) = relation_shape(rel);
    let prod = crate::basespace::pointwise_product(phi, psi)?;
    let ip = crate::basespace::inner(phi, psi)?;
    let pick = |s: Smear| match s {
        Smear::Phi => phi.clone(),
        Smear::Psi => psi.clone(),
        Smear::Product => prod.clone(),
    };
    let kind = |r: Role| match r {
        Role::Creator => AKind::Plus,
        Role::Number => AKind::Zero,
        Role::Annihilator => AKind::Minus,
    };
    let twice = |r: Role, f: GridFunction| move |x: &ExtFockVector| Ok(apply_a(kind(r), &f, x, 0.0)?.scaled(2.0));
    let terms: Vec<ExtRhs> = rhs
        .into_iter()
        .map(|t| match t {
            RhsTerm::Identity(c) => ExtRhs::Identity(c * ip),
            RhsTerm::Operator(c, r, s) => ExtRhs::Operator(2.0 * c, kind(r), pick(s)),
        })
        .collect();
    let rhs_apply = |f: &ExtFockVector| -> Result<ExtFockVector> {
        let mut acc = ExtFockVector::zero(f.grid.clone(), f.max_level);
        for t in &terms {
            acc = match t {
                ExtRhs::Identity(c) => acc.axpy(*c, f)?,
                ExtRhs::Operator(c, k, g) => acc.axpy(*c, &apply_a(*k, g, f, 0.0)?)?,
            };
        }
        Ok(acc)
    };
    max_residual(twice(pr, pick(ps)), twice(qr, pick(qs)), rhs_apply, test_vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basespace::inner;
    use crate::special::rising_factorial;

    fn grid(g: usize, v: f64) -> Arc<GridSpace> {
        GridSpace::uniform(g, v).unwrap()
    }

    fn random_fn(s: &Arc<GridSpace>, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::new(s.clone(), (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    /// Oracle: partition count by the pentagonal-free DP p(n) = Σ_k p(n, k).
    fn partition_count(n: usize) -> usize {
        let mut p = vec![0usize; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for m in part..=n {
                p[m] += p[m - part];
            }
        }
        p[n]
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions(1), vec![DiagonalPattern::new(vec![1])]);
        let p3 = partitions(3);
        assert_eq!(p3.len(), 3);
        assert!(p3.contains(&DiagonalPattern::new(vec![3])));
        assert!(p3.contains(&DiagonalPattern::new(vec![1, 1])));
        assert!(p3.contains(&DiagonalPattern::new(vec![0, 0, 1])));
        assert_eq!(partitions(6).len(), 11);
        for n in 1..=10 {
            assert_eq!(partitions(n).len(), partition_count(n));
            assert!(partitions(n).iter().all(|a| a.n() == n && a.size() <= n));
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&DiagonalPattern::new(vec![5])), 1);
        assert_eq!(kappa(&DiagonalPattern::new(vec![1, 1])), 3);
        assert_eq!(kappa(&DiagonalPattern::new(vec![0, 0, 1])), 2);
        // cycle types partition S_n
        for n in 1..=8 {
            let total: u128 = partitions(n).iter().map(kappa).sum();
            assert_eq!(total, (1..=n as u128).product::<u128>());
        }
    }

    #[test]
    fn diag_embed_examples() {
        let s = grid(3, 1.0);
        let f2 = SymmetricKernel::from_fn(s.clone(), 2, |a| 1.0 + a[0] as f64 + 10.0 * a[1] as f64);
        let d = diag_embed(&DiagonalPattern::new(vec![2]), &f2).unwrap();
        assert_eq!(d.eval(&[1, 2]), f2.eval(&[1, 2]));
        let d = diag_embed(&DiagonalPattern::new(vec![0, 1]), &f2).unwrap();
        assert_eq!(d.eval(&[2]), f2.eval(&[2, 2]));
        let f3 = SymmetricKernel::from_fn(s, 3, |a| a.iter().map(|&x| (x + 1) as f64 * 3f64.powi(x as i32)).sum());
        let d = diag_embed(&DiagonalPattern::new(vec![1, 1]), &f3).unwrap();
        assert_eq!(d.eval(&[0, 2]), f3.eval(&[0, 2, 2]));
        assert!(diag_embed(&DiagonalPattern::new(vec![1, 1]), &f2).is_err());
    }

    #[test]
    fn ext_inner_examples() {
        let s = grid(3, 0.5);
        let f = random_fn(&s, 1);
        let g = random_fn(&s, 2);
        let kf = SymmetricKernel::tensor_power(&f, 1);
        let kg = SymmetricKernel::tensor_power(&g, 1);
        assert!((ext_inner(&kf, &kg).unwrap() - inner(&f, &g).unwrap()).abs() < 1e-14);

        let one = grid(1, 1.0);
        let k = SymmetricKernel::from_fn(one, 2, |_| 1.0);
        assert_eq!(ext_inner(&k, &k).unwrap(), 2.0);

        // extra diagonal terms are nonnegative
        let k = SymmetricKernel::from_fn(s.clone(), 3, |a| (a[0] as f64 - 0.5) * (a[2] as f64 + 0.3));
        let plain = {
            let v: f64 = 0.5;
            let mut sum = 0.0;
            for x in 0..3 {
                for y in 0..3 {
                    for z in 0..3 {
                        sum += k.eval(&[x, y, z]).powi(2);
                    }
                }
            }
            v.powi(3) * sum
        };
        assert!(ext_inner(&k, &k).unwrap() >= plain);
        assert!(ext_inner(&k, &SymmetricKernel::zero(s, 2)).is_err());
    }

    #[test]
    fn single_atom_norms_are_rising_factorials() {
        for &v in &[0.5, 1.0, 2.0] {
            let s = grid(1, v);
            let one = GridFunction::constant(s.clone(), 1.0);
            for n in 0..=6 {
                let k = SymmetricKernel::tensor_power(&one, n);
                let norm2 = factorial(n) * ext_inner(&k, &k).unwrap();
                let expected = rising_factorial(v, n) * factorial(n);
                assert!((norm2 - expected).abs() <= 1e-12 * expected, "v={v} n={n}");
            }
            let j = single_atom_jacobi(1.5, v, 6).unwrap();
            for n in 0..5 {
                let b = (((n + 1) as f64) * (v + n as f64)).sqrt();
                assert!((j.off_diagonal()[n] - b).abs() < 1e-12);
                assert!((j.diagonal()[n] - 1.5 * n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_examples() {
        let s = grid(2, 0.5);
        let phi = random_fn(&s, 4);
        let om = ExtFockVector::vacuum(s.clone(), 4);
        assert!(apply_a(AKind::Minus, &phi, &om, 0.0).unwrap().top_level().is_none());
        let mut lvl1 = ExtFockVector::zero(s.clone(), 4);
        lvl1.set_component(SymmetricKernel::tensor_power(&phi, 1));
        assert!(apply_a(AKind::Minus2, &phi, &lvl1, 0.0).unwrap().top_level().is_none());
        let a_om = apply_a(AKind::Beta, &phi, &om, 0.7).unwrap();
        assert_eq!(a_om, lvl1);
        let m2 = ext_vacuum_moment(0.7, &phi, 2, 4).unwrap();
        assert!((m2 - phi.integral_of_power(2)).abs() < 1e-14);

        let single = grid(1, 1.0);
        let one = GridFunction::constant(single, 1.0);
        for &beta in &[0.0, 1.0, 2.5] {
            let m4 = ext_vacuum_moment(beta, &one, 4, 4).unwrap();
            assert!((m4 - (beta * beta + 5.0)).abs() < 1e-12);
        }
        assert!(matches!(ext_vacuum_moment(1.0, &one, 5, 4), Err(Error::Truncation { .. })));
    }

    #[test]
    fn third_moment_brute_force() {
        let s = grid(3, 0.4);
        let phi = random_fn(&s, 12);
        for &beta in &[0.0, 1.0, 3.0] {
            let m3 = ext_vacuum_moment(beta, &phi, 3, 3).unwrap();
            assert!((m3 - beta * phi.integral_of_power(3)).abs() < 1e-13);
        }
    }

    #[test]
    fn adjointness_and_symmetry() {
        let s = grid(2, 0.6);
        for seed in 0..5 {
            let phi = random_fn(&s, 40 + seed);
            let f = ExtFockVector::random(s.clone(), 5, 4, seed);
            let g = ExtFockVector::random(s.clone(), 5, 4, 100 + seed);
            let lhs = ext_fock_inner(&apply_a(AKind::Plus, &phi, &f.truncated_to(3), 0.0).unwrap(), &g).unwrap();
            let rhs = ext_fock_inner(&f.truncated_to(3), &apply_a(AKind::Minus, &phi, &g, 0.0).unwrap()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
            let lhs = ext_fock_inner(&apply_a(AKind::Zero, &phi, &f, 0.0).unwrap(), &g).unwrap();
            let rhs = ext_fock_inner(&f, &apply_a(AKind::Zero, &phi, &g, 0.0).unwrap()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn relations_hold() {
        for &(g, v) in &[(1usize, 1.0), (2, 0.5), (3, 0.5)] {
            let s = grid(g, v);
            let phi = random_fn(&s, 1);
            let psi = random_fn(&s, 2);
            let vecs: Vec<_> = (0..3).map(|seed| ExtFockVector::random(s.clone(), 5, 3, seed)).collect();
            for rel in SwnRelation::ALL {
                let r = ext_relation_residual(rel, &phi, &psi, &vecs).unwrap();
                assert!(r <= 1e-10, "{} on G={g}: {r}", rel.name());
            }
        }
    }
}
