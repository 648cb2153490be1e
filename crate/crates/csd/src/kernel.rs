//! Separable base kernel on the unit cube.
//!
//! k(u,v) = Π_j k₁(u_j, v_j) with two choices of k₁:
//!
//! * `GaussianRbf` — exp(-(x-y)²/(2σ²)), the textbook choice;
//! * `BoundaryWeightedRbf` — w(x)·w(y)·exp(-(x-y)²/(2σ²)) with
//!   w(x) = 4x(1-x).
//!
//! The weighted variant exists because RKHS functions of the plain RBF do
//! not vanish on the faces of the cube, so the Stein identity's
//! integration-by-parts leaves an O(1) boundary term under copula targets
//! whose density is positive on a face (Clayton, Frank, Independence) and
//! even fails to converge absolutely for Gaussian targets. The weight
//! factor pushes every RKHS function to zero on the boundary, restoring the
//! exact zero-mean property, and simultaneously bounds w·s for all
//! supported score fields. The plain RBF remains available for diagnostics
//! and comparisons.
//!
//! The Stein kernel needs k, both gradients and the diagonal of the mixed
//! Hessian; all are returned as *ratios* against k so a single O(d) pass
//! suffices and the d-fold product is never recomputed per partial.

use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};

/// Base kernel choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    #[serde(rename = "rbf")]
    GaussianRbf,
    #[serde(rename = "weighted_rbf")]
    BoundaryWeightedRbf,
}

/// Validated kernel specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKernelSpec")]
pub struct BaseKernelSpec {
    pub kind: KernelKind,
    pub bandwidth: f64,
}

#[derive(Deserialize)]
struct RawKernelSpec {
    kind: KernelKind,
    bandwidth: f64,
}

impl TryFrom<RawKernelSpec> for BaseKernelSpec {
    type Error = CsdError;
    fn try_from(raw: RawKernelSpec) -> Result<Self> {
        BaseKernelSpec::new(raw.kind, raw.bandwidth)
    }
}

/// Boundary weight w(x) = 4x(1-x): 1 at the center, 0 on the faces.
#[inline]
pub fn boundary_weight(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

/// d/dx log w(x) = (1-2x)/(x(1-x)).
#[inline]
pub fn boundary_weight_log_grad(x: f64) -> f64 {
    (1.0 - 2.0 * x) / (x * (1.0 - x))
}

/// Kernel value with derivative ratios, assembled in one O(d) pass.
///
/// `grad_u_ratio[j] = ∂_{u_j}k / k`, `grad_v_ratio[j] = ∂_{v_j}k / k`,
/// `hess_trace_ratio = Σ_j ∂_{u_j}∂_{v_j}k / k`.
#[derive(Debug, Clone)]
pub struct KernelDerivBundle {
    pub k: f64,
    pub grad_u_ratio: Vec<f64>,
    pub grad_v_ratio: Vec<f64>,
    pub hess_trace_ratio: f64,
}

impl BaseKernelSpec {
    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(CsdError::InvalidParameter(format!(
                "kernel bandwidth must be finite and positive, got {bandwidth}"
            )));
        }
        Ok(Self { kind, bandwidth })
    }

    pub fn rbf(bandwidth: f64) -> Result<Self> {
        Self::new(KernelKind::GaussianRbf, bandwidth)
    }

    pub fn weighted_rbf(bandwidth: f64) -> Result<Self> {
        Self::new(KernelKind::BoundaryWeightedRbf, bandwidth)
    }

    /// Product of per-coordinate boundary weights (1 for the plain RBF).
    #[inline]
    pub fn weight(&self, u: &[f64]) -> f64 {
        match self.kind {
            KernelKind::GaussianRbf => 1.0,
            KernelKind::BoundaryWeightedRbf => u.iter().map(|&x| boundary_weight(x)).product(),
        }
    }

    /// ∂_{x_j} log of the weight factor (0 for the plain RBF).
    #[inline]
    pub fn weight_log_grad(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::GaussianRbf => 0.0,
            KernelKind::BoundaryWeightedRbf => boundary_weight_log_grad(x),
        }
    }

    /// Plain kernel value k(u, v).
    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), v.len());
        let s2 = self.bandwidth * self.bandwidth;
        let sq: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
        self.weight(u) * self.weight(v) * (-sq / (2.0 * s2)).exp()
    }

    /// Kernel value plus all derivative ratios the Stein kernel consumes.
    ///
    /// For the RBF factor: ∂₁k₁ = -((x-y)/σ²)k₁, ∂₂k₁ = +((x-y)/σ²)k₁,
    /// ∂₁∂₂k₁ = (1/σ² - (x-y)²/σ⁴)k₁. The weight factor shifts the gradient
    /// ratios by w′/w per coordinate; ratios against k₁ multiply out to
    /// ratios against the full product since the other factors cancel.
    pub fn eval_bundle(&self, u: &[f64], v: &[f64]) -> KernelDerivBundle {
        debug_assert_eq!(u.len(), v.len());
        let d = u.len();
        let s2 = self.bandwidth * self.bandwidth;
        let mut sq = 0.0;
        let mut grad_u_ratio = Vec::with_capacity(d);
        let mut grad_v_ratio = Vec::with_capacity(d);
        let mut hess_trace_ratio = 0.0;
        for j in 0..d {
            let diff = u[j] - v[j];
            sq += diff * diff;
            let gu = self.weight_log_grad(u[j]) - diff / s2;
            let gv = self.weight_log_grad(v[j]) + diff / s2;
            grad_u_ratio.push(gu);
            grad_v_ratio.push(gv);
            // ∂²(w(x)w(y)g(x-y))/∂x∂y over the kernel = gu·gv + 1/σ²
            // (g'/g differentiates to 1/σ² in the mixed direction).
            hess_trace_ratio += gu * gv + 1.0 / s2;
        }
        KernelDerivBundle {
            k: self.weight(u) * self.weight(v) * (-sq / (2.0 * s2)).exp(),
            grad_u_ratio,
            grad_v_ratio,
            hess_trace_ratio,
        }
    }
}

/// Median-heuristic bandwidth: median pairwise Euclidean distance over a
/// subsample of at most 1000 points, divided by √2. The subsample is an
/// evenly strided slice so the heuristic is deterministic.
pub fn median_bandwidth(points: &[Vec<f64>]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(CsdError::InvalidInput("median bandwidth needs n >= 2".into()));
    }
    let keep = n.min(1000);
    let stride = n as f64 / keep as f64;
    let idx: Vec<usize> = (0..keep).map(|i| (i as f64 * stride) as usize).collect();
    let mut dists = Vec::with_capacity(keep * (keep - 1) / 2);
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            let d2: f64 = points[idx[a]]
                .iter()
                .zip(&points[idx[b]])
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            dists.push(d2.sqrt());
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = dists.len();
    let median = if m % 2 == 1 { dists[m / 2] } else { 0.5 * (dists[m / 2 - 1] + dists[m / 2]) };
    if median == 0.0 {
        return Err(CsdError::InvalidInput("all points identical; bandwidth degenerate".into()));
    }
    Ok(median / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn bundle_at_equal_points() {
        let k = BaseKernelSpec::rbf(0.5).unwrap();
        let u = [0.3, 0.6, 0.9];
        let b = k.eval_bundle(&u, &u);
        assert_relative_eq!(b.k, 1.0, epsilon = 1e-15);
        for j in 0..3 {
            assert_eq!(b.grad_u_ratio[j], 0.0);
            assert_eq!(b.grad_v_ratio[j], 0.0);
        }
        assert_relative_eq!(b.hess_trace_ratio, 3.0 / 0.25, epsilon = 1e-12);
    }

    #[test]
    fn bundle_hand_evaluated_1d() {
        // d=1, σ=1, u=0.2, v=0.6
        let k = BaseKernelSpec::rbf(1.0).unwrap();
        let b = k.eval_bundle(&[0.2], &[0.6]);
        assert_relative_eq!(b.k, (-0.08f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(b.grad_u_ratio[0], 0.4, epsilon = 1e-14);
        assert_relative_eq!(b.grad_v_ratio[0], -0.4, epsilon = 1e-14);
        assert_relative_eq!(b.hess_trace_ratio, 1.0 - 0.16, epsilon = 1e-14);
    }

    #[test]
    fn weighted_kernel_vanishes_on_faces() {
        let k = BaseKernelSpec::weighted_rbf(0.5).unwrap();
        let center = [0.5, 0.5];
        assert_relative_eq!(k.eval(&center, &center), 1.0, epsilon = 1e-14);
        assert!(k.eval(&[1e-12, 0.5], &center) < 1e-11);
        assert!(k.eval(&[0.5, 1.0 - 1e-12], &center) < 1e-11);
    }

    #[test]
    fn bundle_symmetry_both_kinds() {
        for spec in [BaseKernelSpec::rbf(0.7).unwrap(), BaseKernelSpec::weighted_rbf(0.7).unwrap()]
        {
            let mut rng = rng_from_seed(5);
            for _ in 0..100 {
                let u: Vec<f64> = (0..4).map(|_| 0.02 + 0.96 * rng.random::<f64>()).collect();
                let v: Vec<f64> = (0..4).map(|_| 0.02 + 0.96 * rng.random::<f64>()).collect();
                let buv = spec.eval_bundle(&u, &v);
                let bvu = spec.eval_bundle(&v, &u);
                assert_relative_eq!(buv.k, bvu.k, epsilon = 1e-15);
                for j in 0..4 {
                    assert_relative_eq!(buv.grad_u_ratio[j], bvu.grad_v_ratio[j], epsilon = 1e-15);
                }
                assert_relative_eq!(buv.hess_trace_ratio, bvu.hess_trace_ratio, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        // Both kernel kinds at 100 random (u, v, σ, d) configurations.
        let mut rng = rng_from_seed(11);
        for trial in 0..100 {
            let d = 1 + (trial % 5);
            let sigma = 0.3 + rng.random::<f64>();
            let kind =
                if trial % 2 == 0 { KernelKind::GaussianRbf } else { KernelKind::BoundaryWeightedRbf };
            let k = BaseKernelSpec::new(kind, sigma).unwrap();
            let u: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect();
            let v: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect();
            let b = k.eval_bundle(&u, &v);
            let h = 1e-6;
            let h2 = 1e-4; // second differences need a wider step: ε/h² roundoff
            let mut up = u.clone();
            let mut um = u.clone();
            let mut vp = v.clone();
            let mut vm = v.clone();
            let mut hess_trace = 0.0;
            for j in 0..d {
                up[j] += h;
                um[j] -= h;
                vp[j] += h;
                vm[j] -= h;
                let du = (k.eval(&up, &v) - k.eval(&um, &v)) / (2.0 * h);
                let dv = (k.eval(&u, &vp) - k.eval(&u, &vm)) / (2.0 * h);
                up[j] = u[j] + h2;
                um[j] = u[j] - h2;
                vp[j] = v[j] + h2;
                vm[j] = v[j] - h2;
                let duv = (k.eval(&up, &vp) - k.eval(&up, &vm) - k.eval(&um, &vp)
                    + k.eval(&um, &vm))
                    / (4.0 * h2 * h2);
                assert_relative_eq!(b.grad_u_ratio[j] * b.k, du, max_relative = 1e-6, epsilon = 1e-9);
                assert_relative_eq!(b.grad_v_ratio[j] * b.k, dv, max_relative = 1e-6, epsilon = 1e-9);
                hess_trace += duv;
                up[j] = u[j];
                um[j] = u[j];
                vp[j] = v[j];
                vm[j] = v[j];
            }
            assert_relative_eq!(
                b.hess_trace_ratio * b.k,
                hess_trace,
                max_relative = 1e-5,
                epsilon = 1e-7
            );
        }
    }

    #[test]
    fn gram_matrix_positive_semidefinite() {
        // Min eigenvalue of the 50-point Gram stays above -1e-8 (power
        // iteration on μI - K to reach the smallest eigenvalue).
        for spec in [BaseKernelSpec::rbf(0.4).unwrap(), BaseKernelSpec::weighted_rbf(0.4).unwrap()]
        {
            let mut rng = rng_from_seed(99);
            let pts: Vec<Vec<f64>> = (0..50)
                .map(|_| (0..3).map(|_| rng.random::<f64>()).collect())
                .collect();
            let n = pts.len();
            let mut gram = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    gram[i][j] = spec.eval(&pts[i], &pts[j]);
                }
            }
            let mu = gram
                .iter()
                .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            let mut x = vec![1.0; n];
            for _ in 0..500 {
                let mut y = vec![0.0; n];
                for i in 0..n {
                    for j in 0..n {
                        y[i] += (if i == j { mu } else { 0.0 } - gram[i][j]) * x[j];
                    }
                }
                let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                for (xi, yi) in x.iter_mut().zip(&y) {
                    *xi = yi / norm;
                }
            }
            let mut rayleigh = 0.0;
            for i in 0..n {
                for j in 0..n {
                    rayleigh += x[i] * gram[i][j] * x[j];
                }
            }
            assert!(rayleigh > -1e-8, "{:?}: min eigenvalue estimate {rayleigh}", spec.kind);
        }
    }

    #[test]
    fn median_bandwidth_examples() {
        // Two points at distance 0.5.
        let pts = vec![vec![0.0, 0.0], vec![0.5, 0.0]];
        assert_relative_eq!(
            median_bandwidth(&pts).unwrap(),
            0.5 / std::f64::consts::SQRT_2,
            epsilon = 1e-14
        );
        // Identical points degenerate.
        let same = vec![vec![0.5, 0.5]; 10];
        assert!(median_bandwidth(&same).is_err());
        // 1000 uniform points in d=2: median distance lands in a known band.
        let mut rng = rng_from_seed(1234);
        let unif: Vec<Vec<f64>> =
            (0..1000).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
        let sigma = median_bandwidth(&unif).unwrap();
        assert!(sigma > 0.2 && sigma < 0.6, "sigma = {sigma}");
    }

    #[test]
    fn kernel_spec_json() {
        let k: BaseKernelSpec = serde_json::from_str(r#"{"kind":"rbf","bandwidth":0.4}"#).unwrap();
        assert_eq!(k.kind, KernelKind::GaussianRbf);
        assert_relative_eq!(k.bandwidth, 0.4);
        let w: BaseKernelSpec =
            serde_json::from_str(r#"{"kind":"weighted_rbf","bandwidth":0.3}"#).unwrap();
        assert_eq!(w.kind, KernelKind::BoundaryWeightedRbf);
        assert!(serde_json::from_str::<BaseKernelSpec>(r#"{"kind":"rbf","bandwidth":-1.0}"#).is_err());
    }
}
