//! Empirical squared discrepancy and the wild-bootstrap test.
//!
//! The estimator is the V-statistic (diagonal included)
//!
//! ```text
//! CSD²_n = (1/n²) Σ_i Σ_j k_{C₀}(U_i, U_j)
//! ```
//!
//! computed three ways: an exact blocked pass, a streaming pass with O(B·d)
//! working memory, and (in [`crate::rf`]) a random-feature approximation.
//! Calibration is by wild bootstrap: T* = (1/n²) Σ_ij w_i w_j K_ij with
//! i.i.d. Rademacher w, keeping the degeneracy of the null distribution.
//!
//! All block reductions run in a fixed order regardless of thread count, so
//! every statistic here is bit-reproducible for a given seed and binary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};
use crate::kahan::KahanSum;
use crate::models::{clamp_point, CLAMP_EPS_MIN};
use crate::rng::{rng_from_seed, split_seed};
use crate::stein::SteinKernelEvaluator;

/// Sample-size-aware interior clamp: ε = max(1e-10, 1/(4n)). Rank
/// pseudo-observations live in [1/(n+1), n/(n+1)] and are never touched.
pub fn clamp_eps_for(n: usize) -> f64 {
    (1.0 / (4.0 * n as f64)).max(CLAMP_EPS_MIN)
}

/// Where a sample's coordinates came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    /// Rank-transformed raw data; each column is a permutation of i/(n+1).
    RanksOf,
    /// Points supplied directly on (0,1)^d.
    Direct,
}

/// n×d matrix of points in the open unit hypercube with clamping metadata.
#[derive(Debug, Clone)]
pub struct PseudoSample {
    points: Vec<Vec<f64>>,
    source: SampleSource,
    clamp_count: usize,
}

impl PseudoSample {
    /// Wrap direct observations, clamping into [ε, 1-ε] with the n-aware ε.
    pub fn direct(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_source(points, SampleSource::Direct)
    }

    fn with_source(mut points: Vec<Vec<f64>>, source: SampleSource) -> Result<Self> {
        if points.is_empty() {
            return Err(CsdError::InvalidInput("sample is empty".into()));
        }
        let d = points[0].len();
        if d == 0 {
            return Err(CsdError::InvalidInput("points have dimension 0".into()));
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(CsdError::InvalidInput("ragged rows in sample".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CsdError::InvalidInput("non-finite coordinate in sample".into()));
        }
        let eps = clamp_eps_for(points.len());
        let mut clamp_count = 0;
        for p in &mut points {
            clamp_count += clamp_point(p, eps);
        }
        Ok(Self { points, source, clamp_count })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn source(&self) -> SampleSource {
        self.source
    }

    pub fn clamp_count(&self) -> usize {
        self.clamp_count
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[j]).collect()
    }
}

/// Rank-transform raw observations to pseudo-observations on (0,1)^d:
/// entry (i,j) becomes rank(raw[i][j]) / (n+1). Ties are broken by original
/// row order, so each column is exactly a permutation of {1/(n+1), ..., n/(n+1)}.
pub fn pseudo_observations(raw: &[Vec<f64>]) -> Result<PseudoSample> {
    let n = raw.len();
    if n < 2 {
        return Err(CsdError::InvalidInput("rank transform needs n >= 2".into()));
    }
    let d = raw[0].len();
    if d == 0 || raw.iter().any(|r| r.len() != d) {
        return Err(CsdError::InvalidInput("ragged or empty rows in raw data".into()));
    }
    if raw.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CsdError::InvalidInput("non-finite value in raw data".into()));
    }
    let mut points = vec![vec![0.0; d]; n];
    for j in 0..d {
        let col: Vec<f64> = raw.iter().map(|r| r[j]).collect();
        if col.iter().all(|&x| x == col[0]) {
            return Err(CsdError::InvalidInput(format!("column {j} is constant")));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| col[a].partial_cmp(&col[b]).unwrap().then(a.cmp(&b)));
        for (rank0, &i) in idx.iter().enumerate() {
            points[i][j] = (rank0 + 1) as f64 / (n + 1) as f64;
        }
    }
    PseudoSample::with_source(points, SampleSource::RanksOf)
}

/// How an estimate was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    ExactVStat,
    Streaming,
    RandomFeature,
}

/// A squared-discrepancy estimate with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsdEstimate {
    pub csd_sq: f64,
    pub n: usize,
    pub method: EstimateMethod,
    /// Mean of the Gram diagonal k_{C₀}(U_i, U_i); E[CSD²_n] = diag_mean/n
    /// under the null.
    pub diag_mean: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Exact V-statistic via a blocked upper-triangle pass with compensated,
/// fixed-order reduction. Scores are computed once per point and shared
/// across all pairs.
pub fn csd_v_statistic(sample: &PseudoSample, eval: &SteinKernelEvaluator) -> Result<CsdEstimate> {
    let n = sample.n();
    check_dims(sample, eval)?;
    let points = sample.points();
    let scores = eval.scores_for(points)?;

    let mut diag = KahanSum::new();
    for (p, s) in points.iter().zip(&scores) {
        diag.add(eval.diag_with_score(p, s));
    }

    const ROW_BLOCK: usize = 64;
    let nblocks = n.div_ceil(ROW_BLOCK);
    let partials: Vec<KahanSum> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * ROW_BLOCK;
            let hi = ((b + 1) * ROW_BLOCK).min(n);
            let mut acc = KahanSum::new();
            for i in lo..hi {
                for j in (i + 1)..n {
                    acc.add(eval.eval_with_scores(&points[i], &points[j], &scores[i], &scores[j]));
                }
            }
            acc
        })
        .collect();
    let mut off = KahanSum::new();
    for p in &partials {
        off.merge(p);
    }

    let total = 2.0 * off.value() + diag.value();
    Ok(CsdEstimate {
        csd_sq: total / (n as f64 * n as f64),
        n,
        method: EstimateMethod::ExactVStat,
        diag_mean: diag.value() / n as f64,
        seed: None,
    })
}

/// Off-diagonal mean (1/(n(n-1))) Σ_{i≠j} k_{C₀}(U_i, U_j) — the unbiased
/// U-statistic, exposed for diagnostics — together with its Monte-Carlo
/// standard error sqrt(2·mean(k²)/(n(n-1))) for the degenerate null.
pub fn off_diagonal_mean(
    sample: &PseudoSample,
    eval: &SteinKernelEvaluator,
) -> Result<(f64, f64)> {
    let n = sample.n();
    if n < 2 {
        return Err(CsdError::InvalidInput("off-diagonal mean needs n >= 2".into()));
    }
    check_dims(sample, eval)?;
    let points = sample.points();
    let scores = eval.scores_for(points)?;
    const ROW_BLOCK: usize = 64;
    let nblocks = n.div_ceil(ROW_BLOCK);
    let partials: Vec<(KahanSum, KahanSum)> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * ROW_BLOCK;
            let hi = ((b + 1) * ROW_BLOCK).min(n);
            let mut acc = KahanSum::new();
            let mut acc_sq = KahanSum::new();
            for i in lo..hi {
                for j in (i + 1)..n {
                    let k = eval.eval_with_scores(&points[i], &points[j], &scores[i], &scores[j]);
                    acc.add(k);
                    acc_sq.add(k * k);
                }
            }
            (acc, acc_sq)
        })
        .collect();
    let mut sum = KahanSum::new();
    let mut sum_sq = KahanSum::new();
    for (a, b) in &partials {
        sum.merge(a);
        sum_sq.merge(b);
    }
    let pairs = (n * (n - 1)) as f64;
    let mean = 2.0 * sum.value() / pairs;
    let mean_sq = 2.0 * sum_sq.value() / pairs;
    let se = (2.0 * mean_sq / pairs).sqrt();
    Ok((mean, se))
}

/// Streaming blocked V-statistic (Kahan-compensated, O(block·d) working
/// memory beyond the sample itself): diagonal blocks are visited once in
/// full, off-diagonal blocks once and doubled.
pub fn csd_streaming(
    sample: &PseudoSample,
    eval: &SteinKernelEvaluator,
    block: usize,
) -> Result<CsdEstimate> {
    if block == 0 {
        return Err(CsdError::InvalidParameter("block size must be >= 1".into()));
    }
    let n = sample.n();
    check_dims(sample, eval)?;
    let points = sample.points();
    let nblocks = n.div_ceil(block);

    let mut total = KahanSum::new();
    let mut diag = KahanSum::new();
    for p in 0..nblocks {
        let (plo, phi) = (p * block, ((p + 1) * block).min(n));
        let row_scores = eval.scores_for(&points[plo..phi])?;
        for (p, s) in points[plo..phi].iter().zip(&row_scores) {
            diag.add(eval.diag_with_score(p, s));
        }
        for q in p..nblocks {
            let (qlo, qhi) = (q * block, ((q + 1) * block).min(n));
            let mut partial = KahanSum::new();
            if q == p {
                for i in plo..phi {
                    for j in qlo..qhi {
                        if i == j {
                            partial.add(eval.diag_with_score(&points[i], &row_scores[i - plo]));
                        } else {
                            partial.add(eval.eval_with_scores(
                                &points[i],
                                &points[j],
                                &row_scores[i - plo],
                                &row_scores[j - qlo],
                            ));
                        }
                    }
                }
                total.merge(&partial);
            } else {
                let col_scores = eval.scores_for(&points[qlo..qhi])?;
                for i in plo..phi {
                    for j in qlo..qhi {
                        partial.add(eval.eval_with_scores(
                            &points[i],
                            &points[j],
                            &row_scores[i - plo],
                            &col_scores[j - qlo],
                        ));
                    }
                }
                // off-diagonal blocks are mirrored, so they count twice
                total.add(2.0 * partial.value());
            }
        }
    }

    Ok(CsdEstimate {
        csd_sq: total.value() / (n as f64 * n as f64),
        n,
        method: EstimateMethod::Streaming,
        diag_mean: diag.value() / n as f64,
        seed: None,
    })
}

/// Full Stein Gram matrix (row-major, symmetric, diagonal via the fast path).
pub struct GramMatrix {
    data: Vec<f64>,
    n: usize,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// V-statistic over the stored matrix (fixed-order Kahan over the upper
    /// triangle, doubled, plus the diagonal).
    pub fn v_statistic(&self) -> f64 {
        let n = self.n;
        let mut off = KahanSum::new();
        let mut diag = KahanSum::new();
        for i in 0..n {
            diag.add(self.get(i, i));
            for j in (i + 1)..n {
                off.add(self.get(i, j));
            }
        }
        (2.0 * off.value() + diag.value()) / (n as f64 * n as f64)
    }

    pub fn diag_mean(&self) -> f64 {
        let mut diag = KahanSum::new();
        for i in 0..self.n {
            diag.add(self.get(i, i));
        }
        diag.value() / self.n as f64
    }
}

/// Materialize the Stein Gram matrix (n² f64, so n ≲ 16k on a 2 GiB budget).
pub fn stein_gram(sample: &PseudoSample, eval: &SteinKernelEvaluator) -> Result<GramMatrix> {
    let n = sample.n();
    check_dims(sample, eval)?;
    let points = sample.points();
    let scores = eval.scores_for(points)?;
    let mut data = vec![0.0f64; n * n];

    // Parallel over rows; each row writes its own slice.
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        row[i] = eval.diag_with_score(&points[i], &scores[i]);
        for j in (i + 1)..n {
            row[j] = eval.eval_with_scores(&points[i], &points[j], &scores[i], &scores[j]);
        }
    });
    // Mirror the upper triangle.
    for i in 0..n {
        for j in (i + 1)..n {
            data[j * n + i] = data[i * n + j];
        }
    }
    Ok(GramMatrix { data, n })
}

/// Wild-bootstrap statistic (1/n²)·wᵀKw for explicit weights; the test hook
/// for forced weights and the workhorse for the bootstrap draws.
pub fn bootstrap_statistic(gram: &GramMatrix, weights: &[f64]) -> f64 {
    let n = gram.n();
    debug_assert_eq!(weights.len(), n);
    let mut acc = KahanSum::new();
    for i in 0..n {
        let row = gram.row(i);
        let mut dot = 0.0;
        for j in 0..n {
            dot += row[j] * weights[j];
        }
        acc.add(weights[i] * dot);
    }
    acc.value() / (n as f64 * n as f64)
}

/// Options for [`wild_bootstrap_test`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapOptions {
    /// Number of bootstrap draws B (>= 100).
    pub draws: usize,
    /// Test level α in (0,1).
    pub alpha: f64,
    /// Seed for the Rademacher weights.
    pub seed: u64,
    /// Gram matrices above this many bytes are not materialized; the test
    /// falls back to a blocked two-pass recomputation (documented slowdown).
    pub gram_budget_bytes: usize,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        Self { draws: 500, alpha: 0.05, seed: 0, gram_budget_bytes: 2 << 30 }
    }
}

/// Goodness-of-fit test report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    pub estimate: CsdEstimate,
    /// The B bootstrap statistics T*_b.
    pub bootstrap_stats: Vec<f64>,
    /// (1 + #{T* >= observed}) / (B + 1).
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub bootstrap_seed: u64,
    pub timing_ms: f64,
}

/// Wild-bootstrap goodness-of-fit test.
///
/// Computes the Gram matrix once (or streams it when over budget), draws B
/// Rademacher weight vectors, and calibrates the V-statistic against the
/// simulated null. The Gram diagonal is retained in T* — w_i² = 1 makes it a
/// constant shift common to the observed statistic and every draw.
pub fn wild_bootstrap_test(
    sample: &PseudoSample,
    eval: &SteinKernelEvaluator,
    opts: &BootstrapOptions,
) -> Result<TestReport> {
    if opts.draws < 100 {
        return Err(CsdError::InvalidParameter(format!(
            "need at least 100 bootstrap draws, got {}",
            opts.draws
        )));
    }
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(CsdError::InvalidParameter(format!("alpha must be in (0,1), got {}", opts.alpha)));
    }
    let start = std::time::Instant::now();
    let n = sample.n();
    let gram_bytes = n.saturating_mul(n).saturating_mul(8);

    let (estimate, bootstrap_stats) = if gram_bytes <= opts.gram_budget_bytes {
        let gram = stein_gram(sample, eval)?;
        let estimate = CsdEstimate {
            csd_sq: gram.v_statistic(),
            n,
            method: EstimateMethod::ExactVStat,
            diag_mean: gram.diag_mean(),
            seed: None,
        };
        let stats: Vec<f64> = (0..opts.draws)
            .into_par_iter()
            .map(|b| {
                let w = rademacher(n, split_seed(opts.seed, b as u64));
                bootstrap_statistic(&gram, &w)
            })
            .collect();
        (estimate, stats)
    } else {
        streamed_bootstrap(sample, eval, opts)?
    };

    let observed = estimate.csd_sq;
    let exceed = bootstrap_stats.iter().filter(|&&t| t >= observed).count();
    let p_value = (1 + exceed) as f64 / (opts.draws + 1) as f64;
    Ok(TestReport {
        reject: p_value <= opts.alpha,
        estimate,
        bootstrap_stats,
        p_value,
        alpha: opts.alpha,
        bootstrap_seed: opts.seed,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn rademacher(n: usize, seed: u64) -> Vec<f64> {
    use rand::Rng;
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

/// Fallback used when the Gram matrix exceeds the memory budget: kernel
/// entries are recomputed block by block and every bootstrap accumulator is
/// updated in the same pass. O(n·B) memory, O(n²(d + B)) time.
fn streamed_bootstrap(
    sample: &PseudoSample,
    eval: &SteinKernelEvaluator,
    opts: &BootstrapOptions,
) -> Result<(CsdEstimate, Vec<f64>)> {
    let n = sample.n();
    let points = sample.points();
    let scores = eval.scores_for(points)?;
    let weights: Vec<Vec<f64>> =
        (0..opts.draws).map(|b| rademacher(n, split_seed(opts.seed, b as u64))).collect();

    let mut total = KahanSum::new();
    let mut diag = KahanSum::new();
    let mut boot = vec![KahanSum::new(); opts.draws];
    for i in 0..n {
        let kd = eval.diag_with_score(&points[i], &scores[i]);
        diag.add(kd);
        total.add(kd);
        for acc in boot.iter_mut() {
            acc.add(kd); // w_i² = 1
        }
        for j in (i + 1)..n {
            let k = eval.eval_with_scores(&points[i], &points[j], &scores[i], &scores[j]);
            total.add(2.0 * k);
            for (b, acc) in boot.iter_mut().enumerate() {
                acc.add(2.0 * weights[b][i] * weights[b][j] * k);
            }
        }
    }
    let n2 = n as f64 * n as f64;
    let estimate = CsdEstimate {
        csd_sq: total.value() / n2,
        n,
        method: EstimateMethod::ExactVStat,
        diag_mean: diag.value() / n as f64,
        seed: None,
    };
    Ok((estimate, boot.into_iter().map(|a| a.value() / n2).collect()))
}

fn check_dims(sample: &PseudoSample, eval: &SteinKernelEvaluator) -> Result<()> {
    if sample.dim() != eval.dim() {
        return Err(CsdError::InvalidInput(format!(
            "sample dimension {} does not match model dimension {}",
            sample.dim(),
            eval.dim()
        )));
    }
    Ok(())
}
