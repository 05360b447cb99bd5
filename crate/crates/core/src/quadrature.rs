//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-300, rel: 1e-13, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    abs_value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Segment {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut a = WGK[7] * fc.abs();
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        k += WGK[j] * (f1 + f2);
        a += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    Segment { lo, hi, value: k * h, abs_value: a * h.abs(), err: ((k - g) * h).abs() }
}

/// `∫_lo^hi f`, refined until the error estimate is below
/// `max(abs, rel · ∫|f|)`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: Tolerance) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&f, lo, hi));
    loop {
        let (abs_value, err) = heap
            .iter()
            .fold((0.0, 0.0), |(a, e), s| (a + s.abs_value, e + s.err));
        if err <= tol.abs.max(tol.rel * abs_value) {
            // sum in position order so the result does not depend on heap layout
            let mut segs: Vec<Segment> = heap.into_vec();
            segs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            return Ok(segs.iter().map(|s| s.value).sum());
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature { lo, hi, err });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine precision
            return Err(Error::Quadrature { lo, hi, err });
        }
        heap.push(kronrod(&f, worst.lo, mid));
        heap.push(kronrod(&f, mid, worst.hi));
    }
}

/// Finds `L > start` with `|f(±L)|·(1 + L) < cutoff · peak` on the given side,
/// for integrands with exponentially decaying tails.
pub fn tail_cutoff(f: &impl Fn(f64) -> f64, center: f64, direction: f64, peak: f64, cutoff: f64) -> f64 {
    let mut len = 4.0;
    while len < 1e5 {
        let x = center + direction * len;
        // check a few points beyond as well, densities can oscillate in size
        let beyond = [x, x + direction * 0.5 * len, x + direction * len];
        if beyond.iter().all(|&y| f(y).abs() * (1.0 + (y - center).abs()) < cutoff * peak) {
            return len;
        }
        len *= 1.5;
    }
    len
}

/// `∫_R f` for a smooth integrand with exponentially decaying tails.
pub fn integrate_line(f: impl Fn(f64) -> f64, center: f64, tol: Tolerance) -> Result<f64> {
    let peak = (-400..=400)
        .map(|i| f(center + i as f64 * 0.1).abs())
        .fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let right = tail_cutoff(&f, center, 1.0, peak, 1e-16);
    let left = tail_cutoff(&f, center, -1.0, peak, 1e-16);
    let len = left.max(right);
    integrate(&f, center - len, center + len, tol)
}

/// `∫_lo^∞ f` for an integrand with exponentially decaying right tail.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, lo: f64, tol: Tolerance) -> Result<f64> {
    let peak = (1..=800)
        .map(|i| f(lo + i as f64 * 0.05).abs())
        .fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let len = tail_cutoff(&f, lo, 1.0, peak, 1e-16);
    integrate(&f, lo, lo + len, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomials_exact_on_one_panel() {
        for deg in 0..=22 {
            let s = kronrod(&|x: f64| x.powi(deg), 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((s.value - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_integrals() {
        let tol = Tolerance::default();
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, tol).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = integrate_line(|x: f64| (-x * x).exp(), 0.0, tol).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let v = integrate_half_line(|x: f64| x.powi(5) * (-x).exp(), 0.0, tol).unwrap();
        assert!((v - 120.0).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_reported() {
        let tol = Tolerance { abs: 0.0, rel: 1e-15, max_intervals: 8 };
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, tol);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
