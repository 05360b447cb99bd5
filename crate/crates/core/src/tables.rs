//! Density and mass tables of `ν̃_β`, `ν_β` and `μ_{β,Δ}` for CSV export.

use std::io::Write;

use crate::error::{Error, Result};
use crate::meixner::{levy_density, LevyMeasureSpec, LevyPoint, MarginalLaw, Regime, Which};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    /// `None` marks a point where the quantity is undefined.
    pub rows: Vec<Vec<Option<f64>>>,
    /// Integral (continuous) or sum (discrete) of the last column over the
    /// tabulated range.
    pub column_total: f64,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let io = |e: csv::Error| Error::Config(format!("writing table: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| v.map(fmt17).unwrap_or_default())).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Config(format!("writing table: {e}")))?;
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

/// Midpoints of `points` equal cells of `[lo, hi]`.
fn midpoints(lo: f64, hi: f64, points: usize) -> (Vec<f64>, f64) {
    let h = (hi - lo) / points as f64;
    ((0..points).map(|i| lo + (i as f64 + 0.5) * h).collect(), h)
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0).sum()
}

/// `ν̃_β` and `ν_β` on `points` abscissae (Meixner, Gamma) or on the first
/// `points` atoms (Pascal). The column total is that of `ν̃_β`.
pub fn levy_table(beta: f64, points: usize) -> Result<Table> {
    let spec = LevyMeasureSpec::new(beta)?;
    match spec.regime() {
        Regime::Pascal => {
            let mut rows = Vec::with_capacity(points);
            let mut total = 0.0;
            for k in 1..=points as u64 {
                let nt = levy_density(&spec, Which::NuTilde, LevyPoint::Atom(k))?;
                let nu = levy_density(&spec, Which::Nu, LevyPoint::Atom(k))?;
                total += nt;
                rows.push(vec![Some(k as f64), Some(spec.pascal_atom(k)), Some(nu), Some(nt)]);
            }
            Ok(Table { header: cols(&["k", "s", "nu", "nu_tilde"]), rows, column_total: total })
        }
        regime => {
            let xs = match regime {
                Regime::Gamma => linspace(0.0, 40.0, points + 1)[1..].to_vec(),
                _ => linspace(beta - 30.0, beta + 30.0, points),
            };
            let mut rows = Vec::with_capacity(points);
            let mut nts = Vec::with_capacity(points);
            for &s in &xs {
                let nt = levy_density(&spec, Which::NuTilde, LevyPoint::Real(s))?;
                let nu = levy_density(&spec, Which::Nu, LevyPoint::Real(s)).ok();
                nts.push(nt);
                rows.push(vec![Some(s), nu, Some(nt)]);
            }
            Ok(Table { header: cols(&["s", "nu", "nu_tilde"]), rows, column_total: trapezoid(&xs, &nts) })
        }
    }
}

/// Density of `μ_{β,Δ}` at cell midpoints (Meixner, Gamma) or its pmf on
/// the first `points` support points (Pascal).
pub fn marginal_table(beta: f64, area: f64, points: usize) -> Result<Table> {
    let law = MarginalLaw::new(beta, area)?;
    let sd = area.sqrt();
    match law.spec().regime() {
        Regime::Pascal => {
            let mut rows = Vec::with_capacity(points);
            let mut total = 0.0;
            for k in 0..points as u64 {
                let m = law.pmf(k)?;
                total += m;
                rows.push(vec![Some(k as f64), Some(law.support_point(k)), Some(m)]);
            }
            Ok(Table { header: cols(&["k", "s", "pmf"]), rows, column_total: total })
        }
        Regime::Gamma => {
            // abscissae uniform in u = sqrt(s + |Δ|), which also removes the
            // (s + |Δ|)^{|Δ|-1} endpoint singularity from the column total
            let (us, h) = midpoints(0.0, (30.0 + 20.0 * sd + area).sqrt(), points);
            let mut rows = Vec::with_capacity(points);
            let mut total = 0.0;
            for &u in &us {
                let s = u * u - area;
                let d = law.density(s)?;
                total += d * 2.0 * u * h;
                rows.push(vec![Some(s), Some(d)]);
            }
            Ok(Table { header: cols(&["s", "density"]), rows, column_total: total })
        }
        Regime::Meixner => {
            let (xs, h) = midpoints(-30.0 - 10.0 * sd, 30.0 + 10.0 * sd, points);
            let mut rows = Vec::with_capacity(points);
            let mut total = 0.0;
            for &s in &xs {
                let d = law.density(s)?;
                total += d * h;
                rows.push(vec![Some(s), Some(d)]);
            }
            Ok(Table { header: cols(&["s", "density"]), rows, column_total: total })
        }
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
