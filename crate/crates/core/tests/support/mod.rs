//! Independent oracles and property checks shared by the integration tests.
//!
//! Each check returns `Err` with a description of the first violation so the
//! same code can back a plain `#[test]` and an acceptance report line.
#![allow(dead_code)]

use clusterability::harness::{run_experiment, ExperimentSpec};
use clusterability::hopkins::{hopkins_statistic, HopkinsConfig};
use clusterability::seed::derived_rng;
use clusterability::unimodality::{count_modes, critical_bandwidth, dip_statistic, KdeGrid, KdeSpec};
use clusterability::{beta_cdf, beta_quantile, generate, scenario_catalog, Dataset, MethodId, Series};
use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Check = std::result::Result<(), String>;

// ---------------------------------------------------------------------------
// Dip: linear-programming oracle
// ---------------------------------------------------------------------------

/// Dip of a sorted sample by linear programming.
///
/// For each candidate mode `z_j` the closest unimodal CDF is piecewise linear
/// between the distinct sample points, convex to the left of `z_j`, concave
/// to its right, and may jump at `z_j` itself. The LP minimizes the largest
/// gap `t` between that CDF and both one-sided limits of the empirical CDF;
/// the dip is the smallest `t` over all `j`.
pub fn lp_dip(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mut z = Vec::new();
    let mut upper = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if z.last() == Some(&x) {
            *upper.last_mut().unwrap() = (i + 1) as f64 / n;
        } else {
            z.push(x);
            upper.push((i + 1) as f64 / n);
        }
    }
    let k = z.len();
    let lower: Vec<f64> = (0..k).map(|i| if i == 0 { 0.0 } else { upper[i - 1] }).collect();

    let mut best = f64::INFINITY;
    for mode in 0..k {
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let t = p.add_var(1.0, (0.0, 1.0));
        // left[i] is the left limit at z_i, right[i] the value; they differ only at the mode.
        let right: Vec<_> = (0..k).map(|_| p.add_var(0.0, (0.0, 1.0))).collect();
        let mut left = right.clone();
        left[mode] = p.add_var(0.0, (0.0, 1.0));
        p.add_constraint([(right[mode], 1.0), (left[mode], -1.0)], ComparisonOp::Ge, 0.0);
        for i in 0..k {
            for (g, f) in [(left[i], lower[i]), (right[i], upper[i])] {
                p.add_constraint([(g, 1.0), (t, -1.0)], ComparisonOp::Le, f);
                p.add_constraint([(g, 1.0), (t, 1.0)], ComparisonOp::Ge, f);
            }
        }
        for i in 0..k.saturating_sub(1) {
            p.add_constraint([(left[i + 1], 1.0), (right[i], -1.0)], ComparisonOp::Ge, 0.0);
        }
        // Segment i joins z_i and z_{i+1}; slopes rise up to the mode and fall after it.
        for i in 0..k.saturating_sub(2) {
            let (a, b) = (z[i + 1] - z[i], z[i + 2] - z[i + 1]);
            // slope_i - slope_{i+1}
            let expr = merged(&[
                (right[i], -1.0 / a),
                (left[i + 1], 1.0 / a),
                (right[i + 1], 1.0 / b),
                (left[i + 2], -1.0 / b),
            ]);
            if i + 1 < mode {
                p.add_constraint(expr.as_slice(), ComparisonOp::Le, 0.0);
            } else if i >= mode {
                p.add_constraint(expr.as_slice(), ComparisonOp::Ge, 0.0);
            }
        }
        let sol = p.solve().expect("dip LP is feasible");
        best = best.min(sol.objective());
    }
    best
}

/// Sums coefficients of repeated variables; the solver wants each variable once.
fn merged(terms: &[(Variable, f64)]) -> Vec<(Variable, f64)> {
    let mut out: Vec<(Variable, f64)> = Vec::new();
    for &(v, c) in terms {
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some(slot) => slot.1 += c,
            None => out.push((v, c)),
        }
    }
    out.sort_by_key(|(v, _)| v.idx());
    out
}

/// Fixed and random samples of size at most 50, with and without ties.
pub fn dip_corpus() -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![
        vec![0.0, 1.0],
        vec![0.0, 1.0, 2.0],
        vec![0.0, 0.1, 5.0, 5.1],
        vec![1.0, 2.0, 3.0, 10.0, 11.0, 12.0, 30.0],
        (0..50).map(|i| i as f64).collect(),
        (0..50).map(|i| (i as f64).powi(2)).collect(),
    ];
    for s in 0..90u64 {
        let mut rng = derived_rng(2024, &[s]);
        let m = rng.random_range(3..=50);
        out.push(mixed_sample(s % 6, m, &mut rng));
    }
    out
}

fn mixed_sample(kind: u64, m: usize, rng: &mut impl Rng) -> Vec<f64> {
    match kind {
        0 => (0..m).map(|_| rng.random::<f64>()).collect(),
        1 => (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
        2 => (0..m).map(|i| rng.sample::<f64, _>(StandardNormal) + if i % 2 == 0 { 0.0 } else { 4.0 }).collect(),
        3 => (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect(),
        4 => (0..m).map(|_| (rng.sample::<f64, _>(StandardNormal) * 3.0).round()).collect(),
        _ => (0..m).map(|i| rng.sample::<f64, _>(StandardNormal) * 0.3 + (i % 3) as f64 * 2.0).collect(),
    }
}

fn sorted_series(mut v: Vec<f64>) -> Series {
    v.sort_by(f64::total_cmp);
    Series::new_sorted(v).unwrap()
}

/// Random non-constant samples of size 2 to 300.
pub fn random_samples(count: u64, seed: u64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|s| {
            let mut rng = derived_rng(seed, &[s]);
            let m = rng.random_range(2..=300);
            loop {
                let v = mixed_sample(s % 6, m, &mut rng);
                if v.iter().any(|&x| x != v[0]) {
                    break v;
                }
            }
        })
        .collect()
}

pub fn check_dip_matches_oracle() -> Check {
    for (idx, mut v) in dip_corpus().into_iter().enumerate() {
        v.sort_by(f64::total_cmp);
        if v.first() == v.last() {
            continue;
        }
        let dip = dip_statistic(&Series::new_sorted(v.clone()).unwrap()).unwrap();
        let oracle = lp_dip(&v);
        if (dip - oracle).abs() >= 1e-6 {
            return Err(format!("corpus sample {idx} (m = {}): dip {dip} vs oracle {oracle}", v.len()));
        }
    }
    Ok(())
}

pub fn check_dip_bounds_and_affine(count: u64) -> Check {
    for (idx, v) in random_samples(count, 31).into_iter().enumerate() {
        let m = v.len() as f64;
        let dip = dip_statistic(&sorted_series(v.clone())).unwrap();
        if dip < 1.0 / (2.0 * m) - 1e-12 || dip > 0.25 + 1e-12 {
            return Err(format!("sample {idx}: dip {dip} outside [1/(2m), 1/4] for m = {m}"));
        }
        for (scale, shift) in [(0.5, -10.0), (3.7, 1e3), (1e-3, 0.25)] {
            let moved = dip_statistic(&sorted_series(v.iter().map(|x| scale * x + shift).collect())).unwrap();
            if (moved - dip).abs() > 1e-9 {
                return Err(format!("sample {idx}: dip {dip} became {moved} under x -> {scale}x + {shift}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Critical bandwidth and mode counting
// ---------------------------------------------------------------------------

pub const BANDWIDTH_TOL: f64 = 1e-3;

pub fn check_two_point_critical_bandwidth() -> Check {
    let h = critical_bandwidth(&Series::new(vec![0.0, 2.0]).unwrap(), 1, BANDWIDTH_TOL, KdeGrid::default())
        .map_err(|e| e.to_string())?;
    if (h - 1.0).abs() > BANDWIDTH_TOL {
        return Err(format!("critical bandwidth of (0, 2) is {h}, expected 1"));
    }
    Ok(())
}

pub fn check_bandwidth_scale_equivariance(count: u64) -> Check {
    for (idx, v) in random_samples(count, 47).into_iter().enumerate() {
        let base = critical_bandwidth(&sorted_series(v.clone()), 1, BANDWIDTH_TOL, KdeGrid::default()).unwrap();
        for c in [0.1, 3.0, 250.0] {
            let scaled = sorted_series(v.iter().map(|x| c * x).collect());
            let h = critical_bandwidth(&scaled, 1, BANDWIDTH_TOL, KdeGrid::default()).unwrap();
            if ((h / (c * base)) - 1.0).abs() > 2.0 * BANDWIDTH_TOL {
                return Err(format!("sample {idx}: h_crit {base} scaled by {c} gave {h}"));
            }
        }
    }
    Ok(())
}

/// Mode counts over a 50-point bandwidth grid from 1% of the range up to the range.
pub fn check_modes_monotone_in_bandwidth(count: u64) -> Check {
    for (idx, v) in random_samples(count, 59).into_iter().enumerate() {
        let series = sorted_series(v);
        let range = series.range();
        let mut previous = usize::MAX;
        for step in 0..50 {
            let h = range * 0.01 * 100f64.powf(step as f64 / 49.0);
            let modes = count_modes(&series, &KdeSpec::new(h)).unwrap();
            if modes > previous {
                return Err(format!("sample {idx}: {modes} modes at h = {h} after {previous} at a smaller h"));
            }
            previous = modes;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Incomplete beta: quadrature oracle
// ---------------------------------------------------------------------------

pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Regularized incomplete beta by integrating the density and its normalizer.
pub fn oracle_beta_cdf(x: f64, a: f64, b: f64) -> f64 {
    // Scaled so the peak is near 1 and the absolute tolerance is meaningful.
    let mode = if a > 1.0 && b > 1.0 { (a - 1.0) / (a + b - 2.0) } else { 0.5 };
    let term = |k: f64, u: f64| if k == 0.0 { 0.0 } else { k * u.ln() };
    let log_peak = term(a - 1.0, mode) + term(b - 1.0, 1.0 - mode);
    let density = |t: f64| (term(a - 1.0, t) + term(b - 1.0, 1.0 - t) - log_peak).exp();
    simpson(&density, 0.0, x, 1e-15) / simpson(&density, 0.0, 1.0, 1e-15)
}

pub fn oracle_beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if oracle_beta_cdf(mid, a, b) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn check_beta_round_trip_and_symmetry() -> Check {
    let shapes = [0.5, 1.0, 2.0, 5.0, 10.0, 40.0];
    for &a in &shapes {
        for &b in &shapes {
            for p in [0.001, 0.01, 0.05, 0.3, 0.5, 0.9, 0.999] {
                let q = beta_quantile(p, a, b).map_err(|e| e.to_string())?;
                let back = beta_cdf(q, a, b).map_err(|e| e.to_string())?;
                if (back - p).abs() > 1e-8 {
                    return Err(format!("I(Q({p}; {a}, {b})) = {back}"));
                }
            }
            for x in [0.05, 0.2, 0.5, 0.77] {
                let sum = beta_cdf(x, a, b).unwrap() + beta_cdf(1.0 - x, b, a).unwrap();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(format!("I_x({a}, {b}) + I_(1-x)({b}, {a}) = {sum} at x = {x}"));
                }
            }
        }
        let half = beta_cdf(0.5, a, a).unwrap();
        if (half - 0.5).abs() > 1e-12 {
            return Err(format!("I_0.5({a}, {a}) = {half}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Hopkins null calibration
// ---------------------------------------------------------------------------

pub fn uniform_square(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = derived_rng(seed, &[n as u64, d as u64]);
    Dataset::new(n, d, (0..n * d).map(|_| rng.random::<f64>()).collect()).unwrap()
}

/// Share of `n x d` uniform datasets declared clusterable.
pub fn hopkins_null_rejection_rate(config: &HopkinsConfig, d: usize, seeds: u64) -> f64 {
    let mut rejected = 0;
    for s in 0..seeds {
        let data = uniform_square(100, d, s);
        let mut rng = derived_rng(s, &[99]);
        if hopkins_statistic(&data, config, &mut rng).unwrap().clusterable {
            rejected += 1;
        }
    }
    rejected as f64 / seeds as f64
}

/// On a uniform line the summed nearest-neighbour distances of real and
/// pseudo points are exchangeable sums of exponentials, so `H` is exactly
/// Beta(m, m). In more dimensions the raw-distance statistic is conservative.
pub fn check_hopkins_null_calibration() -> Check {
    let rate = hopkins_null_rejection_rate(&HopkinsConfig::default(), 1, 1000);
    if !(0.02..=0.10).contains(&rate) {
        return Err(format!("rejection rate {rate} under uniform data, expected within [0.02, 0.10]"));
    }
    for d in [2, 3] {
        let rate = hopkins_null_rejection_rate(&HopkinsConfig::default(), d, 1000);
        if rate > 0.10 {
            return Err(format!("rejection rate {rate} under {d}-D uniform data exceeds 0.10"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scenarios and experiment determinism
// ---------------------------------------------------------------------------

/// `(row, n, d)` for the 31 benchmark scenarios.
pub const SCENARIO_SHAPES: [(u32, usize, usize); 31] = [
    (1, 50, 2),
    (2, 50, 3),
    (3, 50, 10),
    (4, 100, 50),
    (5, 51, 2),
    (6, 251, 2),
    (7, 53, 2),
    (8, 100, 2),
    (9, 100, 2),
    (10, 100, 2),
    (11, 100, 2),
    (12, 150, 2),
    (13, 230, 2),
    (14, 150, 2),
    (15, 199, 2),
    (16, 150, 2),
    (17, 150, 2),
    (18, 100, 10),
    (19, 200, 10),
    (20, 200, 50),
    (21, 200, 50),
    (22, 200, 2),
    (23, 200, 2),
    (24, 200, 2),
    (25, 50, 2),
    (26, 100, 2),
    (27, 150, 2),
    (28, 250, 2),
    (29, 100, 2),
    (30, 200, 2),
    (31, 200, 2),
];

pub fn check_scenario_shapes(seeds: u64) -> Check {
    let catalog = scenario_catalog();
    if catalog.len() != SCENARIO_SHAPES.len() {
        return Err(format!("catalog has {} rows", catalog.len()));
    }
    for (sc, &(row, n, d)) in catalog.iter().zip(&SCENARIO_SHAPES) {
        if (sc.row_id, sc.expected_n, sc.expected_d) != (row, n, d) {
            return Err(format!("row {} declares {}x{}, expected row {row} {n}x{d}", sc.row_id, sc.expected_n, sc.expected_d));
        }
        for seed in 0..seeds {
            let data = generate(sc, seed).map_err(|e| e.to_string())?;
            if (data.rows(), data.cols()) != (n, d) {
                return Err(format!("row {row} seed {seed}: generated {}x{}", data.rows(), data.cols()));
            }
        }
    }
    Ok(())
}

pub fn small_experiment(parallelism: Option<usize>) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(vec![1, 5, 11], MethodId::ALL.to_vec(), 3, 2718);
    spec.config.dip_null_replicates = 200;
    spec.config.silverman_bootstrap = 100;
    spec.parallelism = parallelism;
    spec
}

pub fn check_experiment_determinism() -> Check {
    let reference = run_experiment(&small_experiment(Some(1))).map_err(|e| e.to_string())?;
    for threads in [Some(3), None] {
        let table = run_experiment(&small_experiment(threads)).map_err(|e| e.to_string())?;
        if table != reference {
            return Err(format!("parallelism {threads:?} changed the rejection table"));
        }
    }
    Ok(())
}
