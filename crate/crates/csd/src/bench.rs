//! Reproducible scaling and power experiments.
//!
//! `run_scaling` measures wall time of the exact and random-feature paths
//! over an (n, d, m) grid (medians over replicates, deterministic seeds per
//! cell); `run_power` estimates rejection rates against tau-matched
//! alternatives. Measured constants are reported, never asserted — the
//! acceptance suite only checks log-log slopes.

use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};
use crate::estimator::{csd_v_statistic, wild_bootstrap_test, BootstrapOptions};
use crate::generators::{Family, GeneratorSpec};
use crate::kernel::BaseKernelSpec;
use crate::models::CopulaModel;
use crate::rf::{draw_basis, rf_csd};
use crate::rng::split_seed;
use crate::sampling::{sample, SamplerConfig};
use crate::stein::SteinKernelEvaluator;

/// Grid for the scaling study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchGrid {
    pub n_values: Vec<usize>,
    pub d_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

impl BenchGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.d_values.is_empty() || self.m_values.is_empty() {
            return Err(CsdError::InvalidParameter("bench grid axes must be nonempty".into()));
        }
        if self.n_values.iter().chain(&self.d_values).chain(&self.m_values).any(|&v| v == 0) {
            return Err(CsdError::InvalidParameter("bench grid values must be positive".into()));
        }
        if self.replicates < 3 {
            return Err(CsdError::InvalidParameter("bench needs replicates >= 3".into()));
        }
        Ok(())
    }
}

/// One measured cell of the scaling study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub method: String,
    pub median_ms: f64,
    pub csd_sq: f64,
    pub seed: u64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

/// Measure the exact and RF paths over the grid. Clayton θ=2 is the workload
/// model; each cell's sample is regenerated from `split_seed(grid.seed, cell)`
/// so csd values are bit-reproducible across runs.
pub fn run_scaling(grid: &BenchGrid) -> Result<Vec<ScalingRow>> {
    grid.validate()?;
    let mut rows = Vec::new();
    let sigma = 0.5;
    let base = BaseKernelSpec::rbf(sigma)?;
    let mut cell: u64 = 0;

    // exact path over n × d
    for &d in &grid.d_values {
        let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0)?, d)?;
        let eval = SteinKernelEvaluator::new(model.clone(), base);
        for &n in &grid.n_values {
            let seed = split_seed(grid.seed, cell);
            cell += 1;
            let s = sample(&SamplerConfig { model: model.clone(), n, seed })?;
            let mut times = Vec::with_capacity(grid.replicates);
            let mut value = 0.0;
            for _ in 0..grid.replicates {
                let t0 = std::time::Instant::now();
                let est = csd_v_statistic(&s, &eval)?;
                times.push(t0.elapsed().as_secs_f64() * 1e3);
                value = est.csd_sq;
            }
            rows.push(ScalingRow {
                n,
                d,
                m: 0,
                method: "exact".into(),
                median_ms: median(times),
                csd_sq: value,
                seed,
            });
        }
    }

    // RF path over n × m at the first d
    let d = grid.d_values[0];
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0)?, d)?;
    for &m in &grid.m_values {
        for &n in &grid.n_values {
            let seed = split_seed(grid.seed, cell);
            cell += 1;
            let s = sample(&SamplerConfig { model: model.clone(), n, seed })?;
            let basis = draw_basis(m, d, sigma, split_seed(seed, 1))?;
            let mut times = Vec::with_capacity(grid.replicates);
            let mut value = 0.0;
            for _ in 0..grid.replicates {
                let t0 = std::time::Instant::now();
                let est = rf_csd(&s, &model, &basis)?;
                times.push(t0.elapsed().as_secs_f64() * 1e3);
                value = est.csd_sq;
            }
            rows.push(ScalingRow {
                n,
                d,
                m,
                method: "rf".into(),
                median_ms: median(times),
                csd_sq: value,
                seed,
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of log(y) against log(x).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..xs.len() {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    num / den
}

/// One alternative of the power study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: String,
    pub rejection_rate: f64,
    /// Binomial standard error of the rejection rate.
    pub se: f64,
    pub mean_csd: f64,
    pub seed: u64,
}

/// Rejection rates of the wild-bootstrap test with target `target` against
/// each (label, model) alternative, at sample size n over `replicates` runs.
pub fn run_power(
    target: &CopulaModel,
    alternatives: &[(String, CopulaModel)],
    n: usize,
    replicates: usize,
    draws: usize,
    alpha: f64,
    seed: u64,
) -> Result<Vec<PowerRow>> {
    use rayon::prelude::*;
    let base = BaseKernelSpec::rbf(0.5)?;
    let eval = SteinKernelEvaluator::new(target.clone(), base);
    let mut rows = Vec::new();
    for (idx, (label, alt)) in alternatives.iter().enumerate() {
        let alt_seed = split_seed(seed, idx as u64);
        let results: Vec<(bool, f64)> = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let s = sample(&SamplerConfig {
                    model: alt.clone(),
                    n,
                    seed: split_seed(alt_seed, r as u64),
                })?;
                let opts = BootstrapOptions {
                    draws,
                    alpha,
                    seed: split_seed(alt_seed, 1_000_000 + r as u64),
                    ..Default::default()
                };
                let report = wild_bootstrap_test(&s, &eval, &opts)?;
                Ok((report.reject, report.estimate.csd_sq))
            })
            .collect::<Result<Vec<_>>>()?;
        let rejections = results.iter().filter(|(rej, _)| *rej).count();
        let rate = rejections as f64 / replicates as f64;
        rows.push(PowerRow {
            alternative: label.clone(),
            rejection_rate: rate,
            se: (rate * (1.0 - rate) / replicates as f64).sqrt(),
            mean_csd: results.iter().map(|(_, c)| c).sum::<f64>() / replicates as f64,
            seed: alt_seed,
        });
    }
    Ok(rows)
}

/// Population Kendall tau of a one-parameter family.
///
/// Clayton: θ/(θ+2). Gumbel: 1 - 1/θ. Frank: 1 - 4/θ·(1 - D₁(θ)) with the
/// Debye function D₁ evaluated by Simpson quadrature.
pub fn family_tau(family: Family, theta: f64) -> Result<f64> {
    match family {
        Family::Independence => Ok(0.0),
        Family::Clayton => {
            if theta <= 0.0 {
                return Err(CsdError::InvalidParameter("Clayton tau needs theta > 0".into()));
            }
            Ok(theta / (theta + 2.0))
        }
        Family::Gumbel => {
            if theta < 1.0 {
                return Err(CsdError::InvalidParameter("Gumbel tau needs theta >= 1".into()));
            }
            Ok(1.0 - 1.0 / theta)
        }
        Family::Frank => {
            if theta == 0.0 {
                return Ok(0.0);
            }
            Ok(1.0 - 4.0 / theta * (1.0 - debye1(theta)))
        }
    }
}

/// D₁(x) = (1/x) ∫₀ˣ t/(eᵗ-1) dt, with the integrand extended by continuity
/// (→ 1) at t = 0. Antisymmetric extension handles x < 0:
/// D₁(-x) = D₁(x) + x/2.
fn debye1(x: f64) -> f64 {
    if x < 0.0 {
        return debye1(-x) - x / 2.0;
    }
    let f = |t: f64| if t.abs() < 1e-8 { 1.0 - t / 2.0 } else { t / t.exp_m1() };
    // Simpson with enough panels for ~1e-12 on the smooth integrand.
    let panels = 2000;
    let h = x / panels as f64;
    let mut acc = f(0.0) + f(x);
    for i in 1..panels {
        let t = i as f64 * h;
        acc += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0 / x
}

/// Solve family_tau(family, θ) = tau by bisection to 1e-10.
pub fn theta_for_tau(family: Family, tau: f64) -> Result<f64> {
    let (mut lo, mut hi) = match family {
        Family::Clayton => {
            if !(0.0 < tau && tau < 1.0) {
                return Err(CsdError::InvalidParameter("Clayton tau must be in (0,1)".into()));
            }
            (1e-9, 1e9)
        }
        Family::Gumbel => {
            if !(0.0 <= tau && tau < 1.0) {
                return Err(CsdError::InvalidParameter("Gumbel tau must be in [0,1)".into()));
            }
            (1.0, 1e9)
        }
        Family::Frank => {
            if !(tau.abs() < 1.0) || tau == 0.0 {
                return Err(CsdError::InvalidParameter("Frank tau must be in (-1,1)\\{0}".into()));
            }
            if tau > 0.0 {
                (1e-9, 700.0)
            } else {
                (-700.0, -1e-9)
            }
        }
        Family::Independence => {
            return Err(CsdError::InvalidParameter("independence has fixed tau 0".into()))
        }
    };
    let target = tau;
    let f = |th: f64| family_tau(family, th).unwrap() - target;
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(CsdError::Numeric("tau not bracketed".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-10 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
