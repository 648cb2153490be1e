//! Independent verification oracles.
//!
//! Everything here deliberately avoids the analytic fast paths it is used to
//! check: derivatives come from central finite differences (with Richardson
//! extrapolation where high orders are needed), and the brute-force Stein
//! kernel assembles the four-term formula from raw difference quotients.
//! The `self-check` CLI command and the test suites both run against these.

use crate::kernel::BaseKernelSpec;
use crate::models::CopulaModel;

/// d-th order central difference with step `h`:
/// `f⁽ᵈ⁾(x) ≈ h⁻ᵈ Σ_i (-1)^i C(d,i) f(x + (d/2 - i)h)`.
pub fn central_fd(f: &dyn Fn(f64) -> f64, x: f64, d: usize, h: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0f64; // C(d, i)
    for i in 0..=d {
        let offset = (d as f64 / 2.0 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(x + offset);
        binom = binom * (d - i) as f64 / (i + 1) as f64;
    }
    acc / h.powi(d as i32)
}

/// High-precision d-th derivative via Ridders-style Richardson extrapolation
/// of the central stencil. The step shrinks by 1.4 per level (the error
/// series is even in h, so each tableau column cancels another h² term) and
/// the ladder stops as soon as roundoff starts to dominate — without the
/// early stop, corrupted deep levels can agree by accident and win.
pub fn richardson_fd(f: &dyn Fn(f64) -> f64, x: f64, d: usize) -> f64 {
    // Keep the widest stencil well inside (0, 2x) in case f has a
    // singularity at 0 (generator inverses often do).
    let h0 = (0.4 * x.abs().max(0.5)).min(1.6 * x.abs() / (d as f64 + 1.0));
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const SAFE: f64 = 2.0;
    const LEVELS: usize = 12;

    let mut tableau = vec![vec![0.0f64; LEVELS]; LEVELS];
    tableau[0][0] = central_fd(f, x, d, h0);
    let mut best = tableau[0][0];
    let mut best_err = f64::INFINITY;
    let mut h = h0;
    for k in 1..LEVELS {
        h /= CON;
        tableau[k][0] = central_fd(f, x, d, h);
        let mut fac = CON2;
        for j in 1..=k {
            tableau[k][j] = (tableau[k][j - 1] * fac - tableau[k - 1][j - 1]) / (fac - 1.0);
            fac *= CON2;
            let err = (tableau[k][j] - tableau[k][j - 1])
                .abs()
                .max((tableau[k][j] - tableau[k - 1][j - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = tableau[k][j];
            }
        }
        if (tableau[k][k] - tableau[k - 1][k - 1]).abs() >= SAFE * best_err {
            break;
        }
    }
    best
}

/// Central-difference gradient of a multivariate function.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, u: &[f64], h: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(u.len());
    let mut plus = u.to_vec();
    let mut minus = u.to_vec();
    for j in 0..u.len() {
        plus[j] = u[j] + h;
        minus[j] = u[j] - h;
        grad.push((f(&plus) - f(&minus)) / (2.0 * h));
        plus[j] = u[j];
        minus[j] = u[j];
    }
    grad
}

/// Brute-force Copula-Stein kernel: every ingredient of
/// `s(u)ᵀs(v)k + s(u)ᵀ∇_v k + s(v)ᵀ∇_u k + tr(∇_u∇_vᵀk)` is computed from
/// raw difference quotients (scores from the log-density, kernel partials
/// from the kernel itself), bypassing both the ratio bundle and the analytic
/// score path.
pub fn brute_stein_kernel(
    model: &CopulaModel,
    base: &BaseKernelSpec,
    u: &[f64],
    v: &[f64],
    h: f64,
) -> f64 {
    let d = u.len();
    let logc = |x: &[f64]| model.log_density(x).expect("oracle point must be interior");
    let s_u = fd_gradient(&logc, u, h);
    let s_v = fd_gradient(&logc, v, h);
    let k = |a: &[f64], b: &[f64]| base.eval(a, b);

    let mut total = 0.0;
    let mut up = u.to_vec();
    let mut um = u.to_vec();
    let mut vp = v.to_vec();
    let mut vm = v.to_vec();
    let k_uv = k(u, v);
    for j in 0..d {
        up[j] = u[j] + h;
        um[j] = u[j] - h;
        vp[j] = v[j] + h;
        vm[j] = v[j] - h;
        let dku = (k(&up, v) - k(&um, v)) / (2.0 * h);
        let dkv = (k(u, &vp) - k(u, &vm)) / (2.0 * h);
        let dkuv = (k(&up, &vp) - k(&up, &vm) - k(&um, &vp) + k(&um, &vm)) / (4.0 * h * h);
        total += s_u[j] * s_v[j] * k_uv + s_u[j] * dkv + s_v[j] * dku + dkuv;
        up[j] = u[j];
        um[j] = u[j];
        vp[j] = v[j];
        vm[j] = v[j];
    }
    total
}

/// Kolmogorov–Smirnov distance of a sample from the uniform law on (0,1).
pub fn ks_uniform_distance(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut dist = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        dist = dist.max((x - lo).abs()).max((hi - x).abs());
    }
    dist
}

/// Spearman rank correlation of two equal-length sequences (no-ties ranks,
/// midranks on exact duplicates).
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |zs: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..zs.len()).collect();
        idx.sort_by(|&a, &b| zs[a].partial_cmp(&zs[b]).unwrap());
        let mut r = vec![0.0; zs.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && zs[idx[j + 1]] == zs[idx[i]] {
                j += 1;
            }
            let mid = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = mid;
            }
            i = j + 1;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..xs.len() {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx).powi(2);
        vy += (ry[i] - my).powi(2);
    }
    cov / (vx * vy).sqrt()
}
