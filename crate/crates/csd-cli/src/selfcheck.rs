//! End-to-end verification suite behind `csd self-check`.
//!
//! Runs the same independent oracles the test suite uses — finite
//! differences for scores, brute-force assembly for the Stein kernel, a
//! naive double loop for streaming, Monte Carlo for RF unbiasedness — and
//! exits 4 naming the first failing check.

use csd::estimator::{csd_streaming, csd_v_statistic};
use csd::generators::GeneratorSpec;
use csd::kernel::BaseKernelSpec;
use csd::models::CopulaModel;
use csd::oracle::{brute_stein_kernel, fd_gradient};
use csd::rf::{draw_basis_for, rf_csd};
use csd::rng::rng_from_seed;
use csd::sampling::{sample, SamplerConfig};
use csd::stein::SteinKernelEvaluator;

use rand::Rng;

use crate::{fail, CliResult, EXIT_SELFCHECK};

pub fn run(inject_score_corruption: bool) -> CliResult<u8> {
    let start = std::time::Instant::now();
    check("score-vs-fd", score_vs_fd(inject_score_corruption))?;
    check("kernel-vs-bruteforce", kernel_vs_bruteforce())?;
    check("streaming-vs-naive", streaming_vs_naive())?;
    check("rf-unbiasedness", rf_unbiasedness())?;
    eprintln!("self-check: all checks passed in {:.1}s", start.elapsed().as_secs_f64());
    Ok(0)
}

fn check(name: &str, outcome: Result<String, String>) -> CliResult<()> {
    match outcome {
        Ok(detail) => {
            eprintln!("self-check {name}: ok ({detail})");
            Ok(())
        }
        Err(detail) => {
            eprintln!("self-check {name}: FAILED ({detail})");
            Err(fail(EXIT_SELFCHECK, format!("self-check failed: {name}")))
        }
    }
}

fn battery() -> Vec<CopulaModel> {
    vec![
        CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap(),
        CopulaModel::archimedean(GeneratorSpec::gumbel(2.5).unwrap(), 3).unwrap(),
        CopulaModel::archimedean(GeneratorSpec::frank(4.0).unwrap(), 2).unwrap(),
        CopulaModel::gaussian(ndarray_matrix(&[[1.0, 0.5], [0.5, 1.0]])).unwrap(),
    ]
}

fn ndarray_matrix<const N: usize>(rows: &[[f64; N]; N]) -> ndarray::Array2<f64> {
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    ndarray::Array2::from_shape_vec((N, N), flat).unwrap()
}

fn interior(rng: &mut csd::rng::CsdRng, d: usize) -> Vec<f64> {
    (0..d).map(|_| 0.06 + 0.88 * rng.random::<f64>()).collect()
}

fn score_vs_fd(corrupt: bool) -> Result<String, String> {
    let mut rng = rng_from_seed(7001);
    let mut worst: f64 = 0.0;
    for model in battery() {
        for _ in 0..20 {
            let u = interior(&mut rng, model.dim());
            let mut s = model.score(&u).map_err(|e| e.to_string())?;
            if corrupt {
                // fault injection: a sign flip like a generator-derivative bug
                s.values[0] = -s.values[0];
            }
            let fd = fd_gradient(&|x| model.log_density(x).unwrap(), &u, 1e-5);
            for j in 0..model.dim() {
                let rel = (s.values[j] - fd[j]).abs() / fd[j].abs().max(1e-8);
                worst = worst.max(rel);
                if rel > 1e-5 {
                    return Err(format!(
                        "score {} vs fd {} at {u:?} (rel {rel:.2e})",
                        s.values[j], fd[j]
                    ));
                }
            }
        }
    }
    Ok(format!("worst rel err {worst:.2e}"))
}

fn kernel_vs_bruteforce() -> Result<String, String> {
    let mut rng = rng_from_seed(7002);
    let mut worst: f64 = 0.0;
    for base in [BaseKernelSpec::weighted_rbf(0.5).unwrap(), BaseKernelSpec::rbf(0.5).unwrap()] {
        for model in battery() {
            let eval = SteinKernelEvaluator::new(model.clone(), base);
            for _ in 0..10 {
                let u = interior(&mut rng, model.dim());
                let v = interior(&mut rng, model.dim());
                let fast = eval.stein_kernel(&u, &v).map_err(|e| e.to_string())?;
                let brute = brute_stein_kernel(&model, &base, &u, &v, 1e-5);
                let rel = (fast - brute).abs() / brute.abs().max(1e-6);
                worst = worst.max(rel);
                if rel > 1e-4 {
                    return Err(format!("fast {fast} vs brute {brute} (rel {rel:.2e})"));
                }
            }
        }
    }
    Ok(format!("worst rel err {worst:.2e}"))
}

fn streaming_vs_naive() -> Result<String, String> {
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval = SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::weighted_rbf(0.4).unwrap());
    let s = sample(&SamplerConfig { model, n: 150, seed: 7003 }).map_err(|e| e.to_string())?;
    let exact = csd_v_statistic(&s, &eval).map_err(|e| e.to_string())?;
    // independent naive double loop
    let mut naive = 0.0;
    for i in 0..s.n() {
        for j in 0..s.n() {
            naive += eval.stein_kernel(&s.points()[i], &s.points()[j]).map_err(|e| e.to_string())?;
        }
    }
    naive /= (s.n() * s.n()) as f64;
    let mut worst = (exact.csd_sq - naive).abs() / naive.abs();
    for block in [1usize, 32, 150] {
        let streamed = csd_streaming(&s, &eval, block).map_err(|e| e.to_string())?;
        let rel = (exact.csd_sq - streamed.csd_sq).abs() / exact.csd_sq.abs();
        worst = worst.max(rel);
        if rel > 1e-12 {
            return Err(format!("block {block}: rel diff {rel:.2e}"));
        }
    }
    if (exact.csd_sq - naive).abs() / naive.abs() > 1e-10 {
        return Err(format!("blocked {} vs naive {naive}", exact.csd_sq));
    }
    Ok(format!("worst rel diff {worst:.2e}"))
}

fn rf_unbiasedness() -> Result<String, String> {
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let base = BaseKernelSpec::weighted_rbf(0.5).unwrap();
    let eval = SteinKernelEvaluator::new(model.clone(), base);
    let s = sample(&SamplerConfig { model: model.clone(), n: 30, seed: 7004 })
        .map_err(|e| e.to_string())?;
    let exact = csd_v_statistic(&s, &eval).map_err(|e| e.to_string())?.csd_sq;
    let draws = 60;
    let vals: Vec<f64> = (0..draws)
        .map(|b| {
            let basis = draw_basis_for(&base, 64, 2, 7100 + b as u64).unwrap();
            rf_csd(&s, &model, &basis).unwrap().csd_sq
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / draws as f64;
    let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    let se = (var / draws as f64).sqrt();
    if (mean - exact).abs() > 4.0 * se {
        return Err(format!("rf mean {mean:.4e} vs exact {exact:.4e} (4·SE {:.4e})", 4.0 * se));
    }
    Ok(format!("|mean - exact| = {:.2e} within 4·SE = {:.2e}", (mean - exact).abs(), 4.0 * se))
}
