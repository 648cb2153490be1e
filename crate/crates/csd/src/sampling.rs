//! Exact samplers for the supported copulas.
//!
//! Archimedean families use the frailty construction: draw a latent V whose
//! Laplace transform is the generator inverse ψ, then set U_j = ψ(E_j/V)
//! with i.i.d. standard exponentials E_j. The frailties are Gamma for
//! Clayton, positive stable (Chambers–Mallows–Stuck) for Gumbel, and
//! logarithmic-series (Kemp's exact method) for Frank with θ > 0. Gaussian
//! copulas map correlated normals through Φ; mixtures draw a component per
//! point. Everything is deterministic in the seed.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};
use crate::estimator::PseudoSample;
use crate::generators::{Family, GeneratorSpec};
use crate::models::CopulaModel;
use crate::normal::norm_cdf;
use crate::rng::{rng_from_seed, CsdRng};

/// What to sample: model, sample size, seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub model: CopulaModel,
    pub n: usize,
    pub seed: u64,
}

/// Draw n i.i.d. points from the model.
pub fn sample(config: &SamplerConfig) -> Result<PseudoSample> {
    if config.n == 0 {
        return Err(CsdError::InvalidParameter("sample size must be >= 1".into()));
    }
    check_samplable(&config.model)?;
    let mut rng = rng_from_seed(config.seed);
    let d = config.model.dim();
    let mut points = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let mut p = vec![0.0; d];
        draw_point(&config.model, &mut rng, &mut p)?;
        points.push(p);
    }
    PseudoSample::direct(points)
}

fn check_samplable(model: &CopulaModel) -> Result<()> {
    match model {
        CopulaModel::Archimedean(a) => {
            let spec = a.spec();
            if spec.family() == Family::Frank && spec.theta() < 0.0 {
                return Err(CsdError::Unsupported(
                    "no frailty exists for Frank with theta < 0; sampling unsupported".into(),
                ));
            }
            Ok(())
        }
        CopulaModel::Gaussian(_) => Ok(()),
        CopulaModel::Mixture(m) => m.components().iter().try_for_each(check_samplable),
    }
}

fn draw_point(model: &CopulaModel, rng: &mut CsdRng, out: &mut [f64]) -> Result<()> {
    match model {
        CopulaModel::Archimedean(a) => {
            let spec = a.spec();
            let v = draw_frailty(spec, rng)?;
            for u in out.iter_mut() {
                let e: f64 = Exp1.sample(rng);
                *u = spec.psi(e / v)?;
            }
            Ok(())
        }
        CopulaModel::Gaussian(g) => {
            let d = out.len();
            let eps: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let l = g.chol();
            for i in 0..d {
                let mut z = 0.0;
                for k in 0..=i {
                    z += l[[i, k]] * eps[k];
                }
                out[i] = norm_cdf(z);
            }
            Ok(())
        }
        CopulaModel::Mixture(m) => {
            let x: f64 = rng.random();
            let mut cum = 0.0;
            let mut pick = m.components().len() - 1;
            for (k, w) in m.weights().iter().enumerate() {
                cum += w;
                if x < cum {
                    pick = k;
                    break;
                }
            }
            draw_point(&m.components()[pick], rng, out)
        }
    }
}

/// Latent frailty whose Laplace transform equals the family's ψ.
fn draw_frailty(spec: &GeneratorSpec, rng: &mut CsdRng) -> Result<f64> {
    let th = spec.theta();
    match spec.family() {
        // ψ(t) = e^{-t} is the transform of the point mass at 1.
        Family::Independence => Ok(1.0),
        // E[e^{-tV}] = (1+θt)^{-1/θ} for V ~ Gamma(shape 1/θ, scale θ).
        Family::Clayton => {
            let gamma = Gamma::new(1.0 / th, th)
                .map_err(|e| CsdError::InvalidParameter(e.to_string()))?;
            Ok(gamma.sample(rng))
        }
        // E[e^{-tV}] = exp(-t^{1/θ}) for positive-stable V with α = 1/θ.
        Family::Gumbel => Ok(positive_stable(1.0 / th, rng)),
        // E[e^{-tV}] = ln(1 - p e^{-t})/ln(1-p) = ψ(t) with p = 1 - e^{-θ}.
        Family::Frank => {
            if th < 0.0 {
                return Err(CsdError::Unsupported(
                    "Frank frailty requires theta > 0".into(),
                ));
            }
            Ok(log_series(-(-th).exp_m1(), rng) as f64)
        }
    }
}

/// Positive-stable variate with Laplace transform exp(-s^α), 0 < α < 1,
/// via the Chambers–Mallows–Stuck representation:
/// V = sin(αΘ)·sin((1-α)Θ)^{(1-α)/α} / (sin(Θ)^{1/α}·W^{(1-α)/α}),
/// Θ ~ U(0,π), W ~ Exp(1).
pub fn positive_stable(alpha: f64, rng: &mut CsdRng) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    let theta = std::f64::consts::PI * rng.random::<f64>();
    let w: f64 = Exp1.sample(rng);
    let ratio = (1.0 - alpha) / alpha;
    (alpha * theta).sin() * ((1.0 - alpha) * theta).sin().powf(ratio)
        / (theta.sin().powf(1.0 / alpha) * w.powf(ratio))
}

/// Logarithmic-series variate, pmf(k) = -p^k/(k ln(1-p)) for k ≥ 1,
/// via Kemp's second accelerated algorithm (exact, O(1) even as p → 1).
pub fn log_series(p: f64, rng: &mut CsdRng) -> u64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let u: f64 = rng.random();
    if u >= p {
        return 1;
    }
    let v: f64 = rng.random();
    let q = -(v * (1.0 - p).ln()).exp_m1(); // 1 - (1-p)^v
    if u <= q * q {
        let k = 1.0 + u.ln() / q.ln();
        // guard against ln(q) -> 0 roundoff pushing k below 1
        return k.floor().max(1.0) as u64;
    }
    if u > q {
        1
    } else {
        2
    }
}
