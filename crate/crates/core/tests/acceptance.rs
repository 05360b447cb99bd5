//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the lines are always shown; exits nonzero if any criterion
//! fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use swnlab::basespace::{GridFunction, GridSpace};
use swnlab::crosscheck::{adjointness_suite, commutator_suite, seeded_function, GridSpec, Truncation};
use swnlab::extfock::{ext_inner, ext_vacuum_moment, SymmetricKernel};
use swnlab::jacobi::spectral_moment;
use swnlab::meixner::{gram_check_i3, regime_moment, LevyMeasureSpec, MarginalLaw};
use swnlab::swn::vacuum_moment_auto;
use swnlab::wick::{builtin_corpus, commutator, normal_order, parse, run_case, smear, Smearing};

const BETAS: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 5.0];

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = fn() -> Outcome;

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        (a - b).abs()
    } else {
        (a - b).abs() / scale
    }
}

// ---- independent oracles ----------------------------------------------

/// `(J_β^m)₁₁` as a weighted count of Motzkin paths on levels `1, 2, ...`
/// starting and ending at level 1: a flat step at level `n` weighs `βn`,
/// an up-down pair between `n` and `n+1` weighs `n(n+1)`.
fn motzkin_moment(beta: f64, m: usize) -> f64 {
    // weights[n] = total weight of partial paths ending at level n
    let mut weights = vec![0.0; m + 3];
    weights[1] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; m + 3];
        for n in 1..=m + 1 {
            let w = weights[n];
            if w == 0.0 {
                continue;
            }
            next[n] += w * beta * n as f64;
            // the pair weight is charged on the way down
            next[n + 1] += w;
            if n > 1 {
                next[n - 1] += w * ((n - 1) * n) as f64;
            }
        }
        weights = next;
    }
    weights[1]
}

/// Sum over set partitions of `{1..k}` of the product of block cumulants.
fn moment_by_set_partitions(kappa: &dyn Fn(usize) -> f64, k: usize) -> f64 {
    fn rec(i: usize, k: usize, sizes: &mut Vec<usize>, kappa: &dyn Fn(usize) -> f64) -> f64 {
        if i == k {
            return sizes.iter().map(|&s| kappa(s)).product();
        }
        let mut total = 0.0;
        for b in 0..sizes.len() {
            sizes[b] += 1;
            total += rec(i + 1, k, sizes, kappa);
            sizes[b] -= 1;
        }
        sizes.push(1);
        total += rec(i + 1, k, sizes, kappa);
        sizes.pop();
        total
    }
    rec(0, k, &mut Vec::new(), kappa)
}

/// Moments of `ν̃_β` computed without the library: trapezoid rule on the
/// Meixner density with `|Γ(1+iy)|² = πy / sinh(πy)` (exponentially
/// accurate for this analytic, exponentially decaying integrand), the
/// closed form `(j+1)!` for Gamma, and the atom series for Pascal.
fn nu_tilde_moment_oracle(beta: f64, j: usize) -> f64 {
    if beta < 2.0 {
        let a = (4.0 - beta * beta).sqrt();
        let theta = (beta / a).atan();
        let gamma_sq = |y: f64| if y == 0.0 { 1.0 } else { PI * y / (PI * y).sinh() };
        // tilt e^{+2sθ/a}: it gives ν̃ the mean +β of J_β
        let density = |s: f64| a / (2.0 * PI) * gamma_sq(s / a) * (2.0 * s * theta / a).exp();
        let h = 0.005;
        let half = (200.0 / h) as i64;
        (-half..=half).map(|i| {
            let s = beta + i as f64 * h;
            s.powi(j as i32) * density(s)
        })
        .sum::<f64>()
            * h
    } else if beta == 2.0 {
        (1..=j + 1).map(|i| i as f64).product()
    } else {
        let r = (beta * beta - 4.0).sqrt();
        let p = (beta - r) / (beta + r);
        (1..2000).rev().map(|k| {
            let k = k as f64;
            (r * k).powi(j as i32) * (beta * beta - 4.0) * p.powf(k) * k
        })
        .sum()
    }
}

fn rising(v: f64, n: usize) -> f64 {
    (0..n).map(|i| v + i as f64).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

// ---- criteria ----------------------------------------------------------

fn criterion_commutators() -> Outcome {
    let start = Instant::now();
    let grids = [GridSpec::new(1, 1.0), GridSpec::new(2, 0.5), GridSpec::new(3, 0.25)];
    let seeds: Vec<u64> = (0..10).collect();
    let reports = commutator_suite(&grids, &seeds, Truncation::default(), 1e-10);
    let worst = reports.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let all = reports.len() == 2 * 6 * grids.len() && reports.iter().all(|r| r.pass);
    outcome(
        all && worst <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("{} relation reports, max residual {worst:.1e}, {:.2?}", reports.len(), elapsed),
    )
}

fn criterion_symbolic() -> Outcome {
    let start = Instant::now();
    let e = |s: &str| parse(s).expect("test expression parses").expand();
    let symbolic = [
        ("[B(x), Bd(y)]", "2 c delta(x,y) + 4 delta(x,y) N(y)"),
        ("[N(x), Bd(y)]", "2 delta(x,y) Bd(y)"),
        ("[N(x), B(y)]", "-2 delta(x,y) B(y)"),
        ("[N(x), N(y)]", "0"),
        ("[B(x), B(y)]", "0"),
        ("[Bd(x), Bd(y)]", "0"),
    ];
    let mut failures = Vec::new();
    for (l, r) in symbolic {
        if normal_order(&e(l)) != normal_order(&e(r)) {
            failures.push(l.to_string());
        }
    }
    let map = Smearing::from([("x".into(), "phi".into()), ("y".into(), "psi".into())]);
    let smeared = [
        ("[B(x), Bd(y)]", "2 c <phi,psi> + 4 N(phi psi)"),
        ("[N(x), Bd(y)]", "2 Bd(phi psi)"),
        ("[N(x), B(y)]", "-2 B(phi psi)"),
        ("[N(x), N(y)]", "0"),
        ("[B(x), B(y)]", "0"),
        ("[Bd(x), Bd(y)]", "0"),
    ];
    for (l, expected) in smeared {
        let got = smear(&normal_order(&e(l)), &map).map(|s| s.to_string());
        if got.as_deref() != Ok(expected) {
            failures.push(format!("smeared {l}: {got:?}"));
        }
    }
    // B = 2(p + pd p²), N = 2 pd p, Bd = 2 pd under the plain CCR
    let b = "(2 p(#) + 2 pd(#) p(#)^2)";
    let n = "(2 pd(#) p(#))";
    let bd = "(2 pd(#))";
    let at = |t: &str, v: &str| t.replace('#', v);
    let derivative = [
        (at(b, "x"), at(bd, "y"), format!("4 delta(x,y) + 4 delta(x,y) {}", at(n, "y"))),
        (at(n, "x"), at(bd, "y"), format!("2 delta(x,y) {}", at(bd, "y"))),
        (at(n, "x"), at(b, "y"), format!("-2 delta(x,y) {}", at(b, "y"))),
        (at(n, "x"), at(n, "y"), "0".to_string()),
        (at(b, "x"), at(b, "y"), "0".to_string()),
        (at(bd, "x"), at(bd, "y"), "0".to_string()),
    ];
    for (p, q, rhs) in &derivative {
        let lhs = commutator(&e(p), &e(q));
        let uses_c = lhs.terms().any(|(_, c)| c.degree() > 0);
        if uses_c || lhs != normal_order(&e(rhs)) {
            failures.push(format!("[{p}, {q}] = {lhs}"));
        }
    }
    let corpus = builtin_corpus();
    let corpus_failures = corpus.iter().filter(|c| !run_case(c).pass).count();
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && corpus_failures == 0 && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "{} pointwise, {} smeared, {} derivative-form identities, corpus {}/{}, {:.2?}{}",
            symbolic.len(),
            smeared.len(),
            derivative.len(),
            corpus.len() - corpus_failures,
            corpus.len(),
            elapsed,
            if failures.is_empty() { String::new() } else { format!("; failing: {failures:?}") }
        ),
    )
}

fn criterion_adjointness() -> Outcome {
    let seeds: Vec<u64> = (0..10).collect();
    let reports = adjointness_suite(GridSpec::new(3, 0.5), &seeds, 1e-10);
    let worst = reports.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    outcome(
        reports.len() == 40 && reports.iter().all(|r| r.pass),
        format!("{} cases (B/B†, N, a⁺/a⁻, a⁰), max relative error {worst:.1e}", reports.len()),
    )
}

fn criterion_theorem1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut failing = Vec::new();
    let grids: [(usize, f64); 2] = [(1, 1.0), (3, 0.5)];
    for &beta in &BETAS {
        for &(atoms, v) in &grids {
            let grid: Arc<GridSpace> = GridSpace::uniform(atoms, v).unwrap();
            let phis = [GridFunction::constant(grid.clone(), 1.0), seeded_function(&grid, 11)];
            for phi in &phis {
                let power_sum = |j: usize| v * phi.values().iter().map(|x| x.powi(j as i32)).sum::<f64>();
                let kappa = |j: usize| if j < 2 { 0.0 } else { motzkin_moment(beta, j - 2) * power_sum(j) };
                for k in 0..=8 {
                    let scale = 2f64.powi(k as i32);
                    let swn = vacuum_moment_auto(beta, phi, k).unwrap();
                    let ext = scale * ext_vacuum_moment(beta, phi, k, k).unwrap();
                    let lib_bell = {
                        let kappas = swnlab::cumulants::cumulants(beta, phi, k).unwrap();
                        scale * swnlab::cumulants::moments_from_cumulants(&kappas, k).unwrap()
                    };
                    let oracle = scale * moment_by_set_partitions(&kappa, k);
                    let err = rel(swn, ext).max(rel(swn, lib_bell)).max(rel(swn, oracle));
                    worst = worst.max(err);
                    count += 1;
                    if err > 1e-8 {
                        failing.push(format!("beta={beta} G={atoms} k={k}: {swn} {ext} {lib_bell} {oracle}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failing.is_empty() && elapsed < Duration::from_secs(120),
        format!("{count} (β, grid, φ, k) cases against a set-partition oracle, max relative error {worst:.1e}, {elapsed:.2?}{}",
            if failing.is_empty() { String::new() } else { format!("; failing: {failing:?}") }),
    )
}

fn criterion_spectral() -> Outcome {
    let mut worst_exact = 0.0f64;
    let mut worst_numeric = 0.0f64;
    let mut failing = Vec::new();
    for &beta in &BETAS {
        let spec = LevyMeasureSpec::new(beta).unwrap();
        for j in 0..=8 {
            let jac = spectral_moment(beta, j).unwrap();
            let motzkin = motzkin_moment(beta, j);
            let regime = regime_moment(&spec, j).unwrap();
            let oracle = nu_tilde_moment_oracle(beta, j);
            // odd moments vanish at β = 0; compare those on the scale of
            // the neighbouring even moments
            let scale = if j % 2 == 0 { motzkin } else { (motzkin_moment(beta, j - 1) * motzkin_moment(beta, j + 1)).sqrt() };
            let err_of = |x: f64| (x - motzkin).abs() / scale;
            let err = err_of(jac).max(err_of(regime)).max(err_of(oracle));
            let tol = if beta == 2.0 { 1e-10 } else { 1e-6 };
            if beta == 2.0 {
                worst_exact = worst_exact.max(err);
            } else {
                worst_numeric = worst_numeric.max(err);
            }
            if err > tol {
                failing.push(format!("beta={beta} j={j}: J {jac} regime {regime} oracle {oracle} paths {motzkin}"));
            }
        }
    }
    outcome(
        failing.is_empty(),
        format!("Gamma max error {worst_exact:.1e} (tol 1e-10), Pascal/Meixner max error {worst_numeric:.1e} (tol 1e-6){}",
            if failing.is_empty() { String::new() } else { format!("; failing: {failing:?}") }),
    )
}

fn criterion_marginals() -> Outcome {
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for &beta in &BETAS {
        for &area in &[0.5, 1.0, 2.0] {
            let law = MarginalLaw::new(beta, area).unwrap();
            let got = [law.total_mass().unwrap(), law.mean().unwrap(), law.variance().unwrap()];
            let want = [1.0, 0.0, area];
            let err = got.iter().zip(&want).map(|(g, w)| (g - w).abs() / area.max(1.0)).fold(0.0, f64::max);
            worst = worst.max(err);
            if err > 1e-6 {
                failing.push(format!("beta={beta} area={area}: {got:?}"));
            }
        }
        let gram = gram_check_i3(beta, 6).unwrap();
        for m in 1..=6 {
            for n in 1..=6 {
                let dm = factorial(m - 1) * factorial(m);
                let dn = factorial(n - 1) * factorial(n);
                let want = if m == n { dm } else { 0.0 };
                let err = (gram[m - 1][n - 1] - want).abs() / (dm * dn).sqrt();
                worst = worst.max(err);
                if err > 1e-6 {
                    failing.push(format!("gram beta={beta} ({m},{n}) = {}", gram[m - 1][n - 1]));
                }
            }
        }
    }
    outcome(
        failing.is_empty(),
        format!("mass/mean/variance for 15 laws and 5 Gram matrices (n <= 6), max error {worst:.1e}{}",
            if failing.is_empty() { String::new() } else { format!("; failing: {failing:?}") }),
    )
}

fn criterion_single_atom() -> Outcome {
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for &v in &[0.5, 1.0, 2.0] {
        let grid = GridSpace::uniform(1, v).unwrap();
        let one = GridFunction::constant(grid, 1.0);
        for n in 0..=6 {
            let k = SymmetricKernel::tensor_power(&one, n);
            let err = rel(factorial(n) * ext_inner(&k, &k).unwrap(), rising(v, n) * factorial(n));
            worst = worst.max(err);
            if err > 1e-8 {
                failing.push(format!("norm v={v} n={n}"));
            }
        }
        for &beta in &BETAS {
            let law = MarginalLaw::new(beta, v).unwrap();
            // cumulants of the marginal: κ_j = |Δ| (J_β^{j-2})₁₁
            let kappa = |j: usize| if j < 2 { 0.0 } else { v * motzkin_moment(beta, j - 2) };
            for j in 1..=6 {
                let ext = ext_vacuum_moment(beta, &one, j, j).unwrap();
                let marginal = law.moment(j).unwrap();
                let oracle = moment_by_set_partitions(&kappa, j);
                let err = rel(ext, marginal).max(rel(ext, oracle));
                worst = worst.max(err);
                if err > 1e-8 {
                    failing.push(format!("moment beta={beta} v={v} j={j}: {ext} {marginal} {oracle}"));
                }
            }
        }
    }
    outcome(
        failing.is_empty(),
        format!("norms (v)_n n! for n <= 6 and moments of order <= 6 at v in {{0.5, 1, 2}}, max error {worst:.1e}{}",
            if failing.is_empty() { String::new() } else { format!("; failing: {failing:?}") }),
    )
}

fn criterion_determinism(suite_start: Instant) -> Outcome {
    let dir = tempfile::tempdir().expect("temporary directory");
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# acceptance run\nformat = both\nseeds = 0, 1, 2, 3, 4, 5, 6, 7, 8, 9\n").unwrap();
    let mut outputs = Vec::new();
    for name in ["first", "second"] {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_swnlab"))
            .arg("all")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .output()
            .expect("binary runs");
        if !status.status.success() {
            return outcome(false, format!("`all` exited with {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
        }
        let json = std::fs::read(out.join("all.json")).unwrap();
        let csv = std::fs::read(out.join("all.csv")).unwrap();
        outputs.push((json, csv));
    }
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&outputs[0].0).unwrap();
    let identical = outputs[0] == outputs[1];
    let total = suite_start.elapsed();
    outcome(
        identical && total < Duration::from_secs(300),
        format!(
            "two `all` runs, {} reports, JSON and CSV byte-identical: {identical}; suite wall-clock {total:.2?}",
            reports.len()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(&str, Criterion); 7] = [
        ("commutator suite, both representations, c = 2", criterion_commutators),
        ("symbolic suite: relations, smeared readings, derivative form", criterion_symbolic),
        ("adjointness and symmetry", criterion_adjointness),
        ("three-way vacuum moments", criterion_theorem1),
        ("spectral measures of the Jacobi matrices", criterion_spectral),
        ("marginal laws and Gram matrix", criterion_marginals),
        ("single-atom reduction", criterion_single_atom),
    ];
    let mut failed = 0;
    let mut line = |n: usize, name: &str, o: Outcome| {
        println!("criterion {n} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    };
    for (i, (name, run)) in criteria.iter().enumerate() {
        line(i + 1, name, run());
    }
    line(8, "determinism and total runtime", criterion_determinism(start));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
