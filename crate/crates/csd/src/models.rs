//! Copula models: log-density and score field s(u) = ∇ log c₀(u).
//!
//! Three families share one interface: Archimedean (generator-based),
//! Gaussian (correlation matrix), and finite mixtures of either. The score
//! is the only model-dependent ingredient of the Stein kernel, so everything
//! downstream works uniformly through [`CopulaModel::score`].
//!
//! Sign conventions are fixed by differentiation of the explicit density
//! c(u) = ψ⁽ᵈ⁾(t) Π φ′(u_k), t = Σ φ(u_k):
//!
//! ```text
//! s_j(u) = φ′(u_j) · ψ⁽ᵈ⁺¹⁾(t)/ψ⁽ᵈ⁾(t) + φ″(u_j)/φ′(u_j)
//! ```
//!
//! and every score implementation in this module is pinned to central finite
//! differences of its own `log_density` by the test suite.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};
use crate::generators::{Family, GeneratorSpec};
use crate::linalg::{chol_solve, cholesky};
use crate::normal::{norm_pdf, norm_ppf};

/// Hard floor for interior clamping; callers that know their sample size use
/// `max(CLAMP_EPS_MIN, 1/(4n))` instead (rank pseudo-observations never get
/// near either).
pub const CLAMP_EPS_MIN: f64 = 1e-10;

/// Clamp a point into [eps, 1-eps]^d, returning how many coordinates moved.
pub fn clamp_point(u: &mut [f64], eps: f64) -> usize {
    let mut clamped = 0;
    for x in u.iter_mut() {
        if *x < eps {
            *x = eps;
            clamped += 1;
        } else if *x > 1.0 - eps {
            *x = 1.0 - eps;
            clamped += 1;
        }
    }
    clamped
}

/// The coordinate-wise score s_j(u) = ∂_{u_j} log c₀(u).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub values: Vec<f64>,
}

impl ScoreVector {
    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }
}

/// Archimedean copula of dimension d built from a scalar generator.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchimedeanCopula {
    spec: GeneratorSpec,
    dim: usize,
}

impl ArchimedeanCopula {
    pub fn new(spec: GeneratorSpec, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(CsdError::InvalidParameter(format!(
                "copula dimension must be >= 2, got {dim}"
            )));
        }
        if dim > 64 {
            return Err(CsdError::InvalidParameter(format!(
                "dimension {dim} exceeds the d <= 64 jet cap"
            )));
        }
        // ψ must be d-monotone; Frank with θ < 0 only qualifies bivariate.
        if spec.family() == Family::Frank && spec.theta() < 0.0 && dim > 2 {
            return Err(CsdError::InvalidParameter(
                "Frank with theta < 0 is only a valid copula for d = 2".into(),
            ));
        }
        Ok(Self { spec, dim })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }
}

/// Gaussian copula with correlation matrix Σ (Cholesky factor cached).
#[derive(Debug, Clone)]
pub struct GaussianCopula {
    sigma: Array2<f64>,
    chol: Array2<f64>,
    log_det: f64,
}

impl GaussianCopula {
    pub fn new(sigma: Array2<f64>) -> Result<Self> {
        let d = sigma.nrows();
        if d < 2 || sigma.ncols() != d {
            return Err(CsdError::InvalidParameter("sigma must be square with d >= 2".into()));
        }
        for i in 0..d {
            if (sigma[[i, i]] - 1.0).abs() > 1e-12 {
                return Err(CsdError::InvalidParameter(format!(
                    "sigma diagonal entry {i} is {}, must be 1",
                    sigma[[i, i]]
                )));
            }
            for j in 0..i {
                if (sigma[[i, j]] - sigma[[j, i]]).abs() > 1e-12 {
                    return Err(CsdError::InvalidParameter("sigma must be symmetric".into()));
                }
            }
        }
        let chol = cholesky(&sigma)
            .map_err(|_| CsdError::InvalidParameter("sigma is not positive definite".into()))?;
        let log_det = 2.0 * (0..d).map(|i| chol[[i, i]].ln()).sum::<f64>();
        Ok(Self { sigma, chol, log_det })
    }

    pub fn sigma(&self) -> &Array2<f64> {
        &self.sigma
    }

    pub(crate) fn chol(&self) -> &Array2<f64> {
        &self.chol
    }
}

/// Finite mixture with strictly positive weights on equal-dimension components.
#[derive(Debug, Clone)]
pub struct MixtureCopula {
    weights: Vec<f64>,
    components: Vec<CopulaModel>,
}

impl MixtureCopula {
    pub fn new(weights: Vec<f64>, components: Vec<CopulaModel>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(CsdError::InvalidParameter(
                "mixture needs matching, nonempty weights and components".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(CsdError::InvalidParameter("mixture weights must be > 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(CsdError::InvalidParameter(format!(
                "mixture weights sum to {total}, must be 1 within 1e-12"
            )));
        }
        let d = components[0].dim();
        if components.iter().any(|c| c.dim() != d) {
            return Err(CsdError::InvalidParameter("mixture components must share d".into()));
        }
        Ok(Self { weights, components })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[CopulaModel] {
        &self.components
    }
}

/// Target dependence model.
#[derive(Debug, Clone)]
pub enum CopulaModel {
    Archimedean(ArchimedeanCopula),
    Gaussian(GaussianCopula),
    Mixture(MixtureCopula),
}

impl CopulaModel {
    pub fn archimedean(spec: GeneratorSpec, dim: usize) -> Result<Self> {
        Ok(Self::Archimedean(ArchimedeanCopula::new(spec, dim)?))
    }

    pub fn gaussian(sigma: Array2<f64>) -> Result<Self> {
        Ok(Self::Gaussian(GaussianCopula::new(sigma)?))
    }

    pub fn mixture(weights: Vec<f64>, components: Vec<CopulaModel>) -> Result<Self> {
        Ok(Self::Mixture(MixtureCopula::new(weights, components)?))
    }

    /// The independence copula (Archimedean with generator -ln u).
    pub fn independence(dim: usize) -> Result<Self> {
        Self::archimedean(GeneratorSpec::independence(), dim)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Archimedean(a) => a.dim,
            Self::Gaussian(g) => g.sigma.nrows(),
            Self::Mixture(m) => m.components[0].dim(),
        }
    }

    fn check_dim(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(CsdError::InvalidInput(format!(
                "point has dimension {}, model expects {}",
                u.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Score field s(u) = ∇ log c₀(u) at an interior point.
    ///
    /// Coordinates are nudged into [1e-10, 1-1e-10] first; sample-level
    /// clamping with the n-aware ε (and its bookkeeping) happens when the
    /// sample is built.
    pub fn score(&self, u: &[f64]) -> Result<ScoreVector> {
        self.check_dim(u)?;
        let mut point = u.to_vec();
        clamp_point(&mut point, CLAMP_EPS_MIN);
        let values = self.score_inner(&point)?;
        if values.iter().any(|s| !s.is_finite()) {
            return Err(CsdError::Numeric(format!("non-finite score at {point:?}")));
        }
        Ok(ScoreVector { values })
    }

    fn score_inner(&self, u: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Archimedean(a) => {
                let g = &a.spec;
                // c ≡ 1 for independence; the general path would leave
                // O(ε/u) residue from the cancelling terms.
                if g.family() == Family::Independence {
                    return Ok(vec![0.0; u.len()]);
                }
                let mut t = 0.0;
                for &x in u {
                    t += g.phi(x)?;
                }
                let ratio = g.psi_ratio(t, a.dim)?;
                u.iter()
                    .map(|&x| {
                        let d1 = g.phi_d1(x)?;
                        let d2 = g.phi_d2(x)?;
                        Ok(d1 * ratio + d2 / d1)
                    })
                    .collect()
            }
            Self::Gaussian(gc) => {
                let z: Vec<f64> = u.iter().map(|&x| norm_ppf(x)).collect();
                // (Σ⁻¹ - I) z via the cached Cholesky factor.
                let siginv_z = chol_solve(&gc.chol, &z);
                Ok(z.iter()
                    .zip(&siginv_z)
                    .map(|(&zj, &wj)| -(wj - zj) / norm_pdf(zj))
                    .collect())
            }
            Self::Mixture(m) => {
                let mut logs = Vec::with_capacity(m.components.len());
                let mut scores = Vec::with_capacity(m.components.len());
                for (w, comp) in m.weights.iter().zip(&m.components) {
                    logs.push(w.ln() + comp.log_density(u)?);
                    scores.push(comp.score_inner(u)?);
                }
                let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if !max.is_finite() {
                    return Err(CsdError::Numeric(
                        "mixture density underflowed in log space".into(),
                    ));
                }
                let resp: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
                let denom: f64 = resp.iter().sum();
                let d = u.len();
                let mut s = vec![0.0; d];
                for (r, comp_score) in resp.iter().zip(&scores) {
                    for j in 0..d {
                        s[j] += r * comp_score[j];
                    }
                }
                for sj in &mut s {
                    *sj /= denom;
                }
                Ok(s)
            }
        }
    }

    /// log c₀(u). Archimedean densities are assembled in sign–log arithmetic:
    /// log|ψ⁽ᵈ⁾(t)| + Σ log(-φ′(u_k)), with the overall sign checked to be
    /// positive (a negative sign would mean a generator-derivative bug).
    pub fn log_density(&self, u: &[f64]) -> Result<f64> {
        self.check_dim(u)?;
        let mut point = u.to_vec();
        clamp_point(&mut point, CLAMP_EPS_MIN);
        self.log_density_inner(&point)
    }

    fn log_density_inner(&self, u: &[f64]) -> Result<f64> {
        match self {
            Self::Archimedean(a) => {
                let g = &a.spec;
                let d = a.dim;
                let mut t = 0.0;
                let mut sum_log_neg_phi_d1 = 0.0;
                for &x in u {
                    t += g.phi(x)?;
                    sum_log_neg_phi_d1 += (-g.phi_d1(x)?).ln();
                }
                let psi_d = g.psi_deriv_log(t, d)?;
                // density sign = sign(ψ^{(d)}) · (-1)^d
                let density_sign = psi_d.sign * if d % 2 == 0 { 1 } else { -1 };
                if density_sign <= 0 {
                    return Err(CsdError::Numeric(format!(
                        "archimedean density non-positive at t = {t} (d = {d})"
                    )));
                }
                Ok(psi_d.log_abs + sum_log_neg_phi_d1)
            }
            Self::Gaussian(gc) => {
                let z: Vec<f64> = u.iter().map(|&x| norm_ppf(x)).collect();
                let siginv_z = chol_solve(&gc.chol, &z);
                let mut quad = 0.0;
                for j in 0..z.len() {
                    quad += z[j] * (siginv_z[j] - z[j]);
                }
                Ok(-0.5 * quad - 0.5 * gc.log_det)
            }
            Self::Mixture(m) => {
                let mut max = f64::NEG_INFINITY;
                let mut logs = Vec::with_capacity(m.components.len());
                for (w, comp) in m.weights.iter().zip(&m.components) {
                    let l = w.ln() + comp.log_density_inner(u)?;
                    logs.push(l);
                    max = max.max(l);
                }
                if !max.is_finite() {
                    return Err(CsdError::Numeric(
                        "mixture density underflowed in log space".into(),
                    ));
                }
                let s: f64 = logs.iter().map(|l| (l - max).exp()).sum();
                Ok(max + s.ln())
            }
        }
    }

    /// Lower tail-dependence coefficient λ_L where it is known in closed form:
    /// Clayton 2^{-1/θ}; Independence, Gumbel and Frank 0. Gaussian and
    /// mixtures are not supported here.
    pub fn tail_lower(&self) -> Result<f64> {
        match self {
            Self::Archimedean(a) => match a.spec.family() {
                Family::Clayton => Ok((2.0f64).powf(-1.0 / a.spec.theta())),
                Family::Independence | Family::Gumbel | Family::Frank => Ok(0.0),
            },
            _ => Err(CsdError::Unsupported(
                "lower tail coefficient is only provided for Archimedean families".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawModel {
    Archimedean {
        family: Family,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
        d: usize,
    },
    Gaussian {
        sigma: Vec<Vec<f64>>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<RawModel>,
    },
}

impl TryFrom<RawModel> for CopulaModel {
    type Error = CsdError;
    fn try_from(raw: RawModel) -> Result<Self> {
        match raw {
            RawModel::Archimedean { family, theta, d } => {
                let spec = match family {
                    Family::Independence => GeneratorSpec::independence(),
                    f => GeneratorSpec::new(
                        f,
                        theta.ok_or_else(|| {
                            CsdError::InvalidParameter(format!("family {f:?} requires theta"))
                        })?,
                    )?,
                };
                CopulaModel::archimedean(spec, d)
            }
            RawModel::Gaussian { sigma } => {
                let d = sigma.len();
                if sigma.iter().any(|row| row.len() != d) {
                    return Err(CsdError::InvalidParameter("sigma rows must have length d".into()));
                }
                let flat: Vec<f64> = sigma.into_iter().flatten().collect();
                let arr = Array2::from_shape_vec((d, d), flat)
                    .map_err(|e| CsdError::InvalidParameter(e.to_string()))?;
                CopulaModel::gaussian(arr)
            }
            RawModel::Mixture { weights, components } => {
                let comps = components
                    .into_iter()
                    .map(CopulaModel::try_from)
                    .collect::<Result<Vec<_>>>()?;
                CopulaModel::mixture(weights, comps)
            }
        }
    }
}

impl From<&CopulaModel> for RawModel {
    fn from(model: &CopulaModel) -> Self {
        match model {
            CopulaModel::Archimedean(a) => RawModel::Archimedean {
                family: a.spec.family(),
                theta: if a.spec.family() == Family::Independence {
                    None
                } else {
                    Some(a.spec.theta())
                },
                d: a.dim,
            },
            CopulaModel::Gaussian(g) => RawModel::Gaussian {
                sigma: g.sigma.rows().into_iter().map(|r| r.to_vec()).collect(),
            },
            CopulaModel::Mixture(m) => RawModel::Mixture {
                weights: m.weights.clone(),
                components: m.components.iter().map(RawModel::from).collect(),
            },
        }
    }
}

impl Serialize for CopulaModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawModel::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CopulaModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawModel::deserialize(deserializer)?;
        CopulaModel::try_from(raw).map_err(serde::de::Error::custom)
    }
}
