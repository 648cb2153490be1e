//! Acceptance gate: every release-blocking property, one test per criterion,
//! each printing a PASS line with the measured numbers.
//!
//! Run with `cargo test -p csd --test acceptance -- --nocapture` to see the
//! per-criterion lines. Tests serialize on a global mutex so the wall-time
//! and scaling measurements are not polluted by sibling tests.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::Instant;

use csd::bench::{log_log_slope, theta_for_tau};
use csd::estimator::{
    csd_streaming, csd_v_statistic, off_diagonal_mean, wild_bootstrap_test, BootstrapOptions,
    PseudoSample,
};
use csd::generators::{Family, GeneratorSpec};
use csd::kernel::BaseKernelSpec;
use csd::models::CopulaModel;
use csd::oracle::{brute_stein_kernel, fd_gradient, ks_uniform_distance, spearman_rho};
use csd::rf::{draw_basis, rf_csd};
use csd::rng::{rng_from_seed, split_seed};
use csd::sampling::{sample, SamplerConfig};
use csd::stein::SteinKernelEvaluator;
use rand::Rng;
use rayon::prelude::*;

fn gate() -> MutexGuard<'static, ()> {
    static GATE: OnceLock<Mutex<()>> = OnceLock::new();
    GATE.get_or_init(|| Mutex::new(())).lock().unwrap_or_else(|e| e.into_inner())
}

/// Single-threaded rayon pool for wall-time measurements.
fn serial_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
}

fn random_interior(rng: &mut csd::rng::CsdRng, d: usize) -> Vec<f64> {
    (0..d).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect()
}

/// The model battery for the score / kernel criteria: Clayton, Gumbel, Frank
/// at three θ each (spanning d ∈ {2,3,5}), Gaussian at two Σ, one mixture.
fn model_battery() -> Vec<(String, CopulaModel)> {
    let mut out = Vec::new();
    let archimedean = [
        (Family::Clayton, [0.7, 2.0, 5.0]),
        (Family::Gumbel, [1.3, 2.0, 4.0]),
        (Family::Frank, [1.5, 4.0, 9.0]),
    ];
    let dims = [2usize, 3, 5];
    for (fam, thetas) in archimedean {
        for (i, &th) in thetas.iter().enumerate() {
            let d = dims[i];
            out.push((
                format!("{fam:?}(θ={th}, d={d})"),
                CopulaModel::archimedean(GeneratorSpec::new(fam, th).unwrap(), d).unwrap(),
            ));
        }
    }
    let sigma2 = ndarray::array![[1.0, 0.6], [0.6, 1.0]];
    out.push(("Gaussian(d=2, ρ=0.6)".into(), CopulaModel::gaussian(sigma2).unwrap()));
    let mut sigma5 = ndarray::Array2::<f64>::eye(5);
    for i in 0..5usize {
        for j in 0..5usize {
            if i != j {
                sigma5[[i, j]] = 0.4f64.powi((i as i32 - j as i32).abs());
            }
        }
    }
    out.push(("Gaussian(d=5, AR(0.4))".into(), CopulaModel::gaussian(sigma5).unwrap()));
    out.push((
        "Mixture(0.4·Clayton2 + 0.6·Gumbel3, d=2)".into(),
        CopulaModel::mixture(
            vec![0.4, 0.6],
            vec![
                CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap(),
                CopulaModel::archimedean(GeneratorSpec::gumbel(3.0).unwrap(), 2).unwrap(),
            ],
        )
        .unwrap(),
    ));
    out
}

#[test]
fn criterion_01_score_correctness() {
    let _g = gate();
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let mut worst: f64 = 0.0;
    for (name, model) in model_battery() {
        for _ in 0..100 {
            let u = random_interior(&mut rng, model.dim());
            let s = model.score(&u).unwrap();
            let fd = fd_gradient(&|x| model.log_density(x).unwrap(), &u, 1e-5);
            for j in 0..model.dim() {
                let rel = (s.values[j] - fd[j]).abs() / fd[j].abs().max(1e-8);
                worst = worst.max(rel);
                assert!(
                    rel < 1e-5,
                    "{name}: score coord {j} at {u:?}: analytic {} vs fd {} (rel {rel:.2e})",
                    s.values[j],
                    fd[j]
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30s budget");
    println!(
        "ACCEPTANCE 1 (score correctness): PASS — worst rel err {worst:.2e} < 1e-5, {elapsed:.1}s"
    );
}

#[test]
fn criterion_02_stein_kernel_oracle() {
    let _g = gate();
    let start = Instant::now();
    let mut rng = rng_from_seed(202);
    let mut worst: f64 = 0.0;
    for base in [BaseKernelSpec::rbf(0.5).unwrap(), BaseKernelSpec::weighted_rbf(0.5).unwrap()] {
        for (name, model) in model_battery() {
            let eval = SteinKernelEvaluator::new(model.clone(), base);
            for _ in 0..100 {
                let u = random_interior(&mut rng, model.dim());
                let v = random_interior(&mut rng, model.dim());
                let fast = eval.stein_kernel(&u, &v).unwrap();
                let brute = brute_stein_kernel(&model, &base, &u, &v, 1e-5);
                // the 1e-6 floor keeps near-cancelling kernel values from
                // inflating an otherwise absolute-scale agreement
                let rel = (fast - brute).abs() / brute.abs().max(1e-6);
                worst = worst.max(rel);
                assert!(
                    rel < 1e-4,
                    "{name} ({:?}): fast {fast} vs brute {brute} (rel {rel:.2e})",
                    base.kind
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s budget");
    println!(
        "ACCEPTANCE 2 (stein kernel vs brute force): PASS — worst rel err {worst:.2e} < 1e-4, {elapsed:.1}s"
    );
}

#[test]
fn criterion_03_zero_mean_degeneracy() {
    let _g = gate();
    // The zero-mean property is the shadow of the boundary-vanishing lemma,
    // so it is tested under the kernel whose RKHS actually vanishes on the
    // faces; the plain RBF carries an O(1) boundary bias by construction.
    let base = BaseKernelSpec::weighted_rbf(0.5).unwrap();
    let models = vec![
        (
            "Clayton(2, d=2)",
            CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap(),
        ),
        (
            "Gumbel(2, d=3)",
            CopulaModel::archimedean(GeneratorSpec::gumbel(2.0).unwrap(), 3).unwrap(),
        ),
        (
            "Gaussian(ρ=0.5, d=2)",
            CopulaModel::gaussian(ndarray::array![[1.0, 0.5], [0.5, 1.0]]).unwrap(),
        ),
    ];
    for (i, (name, model)) in models.into_iter().enumerate() {
        let s = sample(&SamplerConfig { model: model.clone(), n: 2000, seed: 303 + i as u64 })
            .unwrap();
        let eval = SteinKernelEvaluator::new(model, base);
        let (mean, se) = off_diagonal_mean(&s, &eval).unwrap();
        assert!(
            mean.abs() < 3.0 * se,
            "{name}: off-diagonal mean {mean:.3e} vs 3·SE {:.3e}",
            3.0 * se
        );
        println!(
            "ACCEPTANCE 3 (zero mean, {name}): PASS — |{mean:.3e}| < 3·SE = {:.3e}",
            3.0 * se
        );
    }
}

#[test]
fn criterion_04_mean_identity_and_rate() {
    let _g = gate();
    let start = Instant::now();
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval =
        SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::weighted_rbf(0.5).unwrap());
    let ns = [100usize, 200, 400, 800, 1600];
    let reps = 200usize;
    let mut mean_by_n = Vec::new();
    for (ni, &n) in ns.iter().enumerate() {
        let results: Vec<(f64, f64)> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let s = sample(&SamplerConfig {
                    model: model.clone(),
                    n,
                    seed: split_seed(404, (ni * 1000 + r) as u64),
                })
                .unwrap();
                let est = csd_v_statistic(&s, &eval).unwrap();
                (est.csd_sq, est.diag_mean)
            })
            .collect();
        let mean_csd = results.iter().map(|(c, _)| c).sum::<f64>() / reps as f64;
        let mean_diag = results.iter().map(|(_, d)| d).sum::<f64>() / reps as f64;
        let var_csd =
            results.iter().map(|(c, _)| (c - mean_csd).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var_csd / reps as f64).sqrt();
        let expect = mean_diag / n as f64;
        assert!(
            (mean_csd - expect).abs() < 3.0 * se,
            "n={n}: mean csd {mean_csd:.4e} vs diag_mean/n {expect:.4e} (3·SE {:.4e})",
            3.0 * se
        );
        mean_by_n.push(mean_csd);
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = log_log_slope(&xs, &mean_by_n);
    assert!(
        (-1.15..=-0.85).contains(&slope),
        "log-log slope of E[csd²] vs n is {slope:.3}, outside [-1.15, -0.85]"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "runtime {elapsed:.1}s exceeds 10min budget");
    println!(
        "ACCEPTANCE 4 (mean identity + 1/n rate): PASS — slope {slope:.3} in [-1.15,-0.85], identity within 3·SE at every n, {elapsed:.1}s"
    );
}

#[test]
fn criterion_05_streaming_equivalence() {
    let _g = gate();
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval = SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::rbf(0.5).unwrap());
    let mut worst: f64 = 0.0;
    let mut configs = 0;
    for (i, &n) in [120usize, 250, 400, 600, 90].iter().enumerate() {
        let s =
            sample(&SamplerConfig { model: model.clone(), n, seed: 505 + i as u64 }).unwrap();
        let exact = csd_v_statistic(&s, &eval).unwrap();
        for &block in &[1usize, 7, 64, n] {
            let streamed = csd_streaming(&s, &eval, block).unwrap();
            let rel = (exact.csd_sq - streamed.csd_sq).abs() / exact.csd_sq.abs();
            worst = worst.max(rel);
            configs += 1;
            assert!(rel < 1e-12, "n={n} block={block}: rel diff {rel:.2e}");
        }
    }
    assert_eq!(configs, 20);
    println!(
        "ACCEPTANCE 5 (streaming ≡ exact): PASS — worst rel diff {worst:.2e} < 1e-12 over {configs} configs"
    );
}

#[test]
fn criterion_06_rf_unbiasedness_and_convergence() {
    let _g = gate();
    let start = Instant::now();
    let sigma = 0.5;
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval = SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::rbf(sigma).unwrap());
    let s = sample(&SamplerConfig { model: model.clone(), n: 50, seed: 606 }).unwrap();
    let exact = csd_v_statistic(&s, &eval).unwrap().csd_sq;

    // conditional unbiasedness at m = 64 and m = 512
    for &m in &[64usize, 512] {
        let vals: Vec<f64> = (0..400)
            .into_par_iter()
            .map(|b| {
                let basis = draw_basis(m, 2, sigma, split_seed(607, (m * 1000 + b) as u64)).unwrap();
                rf_csd(&s, &model, &basis).unwrap().csd_sq
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
        let se = (var / vals.len() as f64).sqrt();
        assert!(
            (mean - exact).abs() < 3.0 * se,
            "m={m}: mean {mean:.4e} vs exact {exact:.4e} (3·SE {:.4e})",
            3.0 * se
        );
        println!(
            "ACCEPTANCE 6 (RF unbiasedness, m={m}): PASS — |mean - exact| = {:.2e} < 3·SE = {:.2e}",
            (mean - exact).abs(),
            3.0 * se
        );
    }

    // median relative error decreases from m=64 to m=4096
    let mut medians = Vec::new();
    for &m in &[64usize, 256, 1024, 4096] {
        let mut errs: Vec<f64> = (0..50)
            .into_par_iter()
            .map(|b| {
                let basis = draw_basis(m, 2, sigma, split_seed(608, (m * 100 + b) as u64)).unwrap();
                let v = rf_csd(&s, &model, &basis).unwrap().csd_sq;
                (v - exact).abs() / exact.abs()
            })
            .collect();
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(errs[25]);
    }
    assert!(
        medians[0] > medians[3],
        "median rel err did not decrease: {medians:?}"
    );
    assert!(
        medians.windows(2).filter(|w| w[1] < w[0]).count() >= 2,
        "median rel err not decreasing in median: {medians:?}"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "runtime {elapsed:.1}s exceeds 5min budget");
    println!(
        "ACCEPTANCE 6 (RF m-convergence): PASS — median rel errs {medians:?} decreasing, {elapsed:.1}s"
    );
}

#[test]
fn criterion_07_bootstrap_level() {
    let _g = gate();
    let start = Instant::now();
    let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval =
        SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::weighted_rbf(0.5).unwrap());
    let reps = 500usize;
    let results: Vec<(bool, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = sample(&SamplerConfig {
                model: model.clone(),
                n: 300,
                seed: split_seed(707, r as u64),
            })
            .unwrap();
            let report = wild_bootstrap_test(
                &s,
                &eval,
                &BootstrapOptions {
                    draws: 500,
                    alpha: 0.05,
                    seed: split_seed(708, r as u64),
                    ..Default::default()
                },
            )
            .unwrap();
            (report.reject, report.p_value)
        })
        .collect();
    let rate = results.iter().filter(|(rej, _)| *rej).count() as f64 / reps as f64;
    assert!(
        (0.02..=0.08).contains(&rate),
        "null rejection rate {rate:.3} outside [0.02, 0.08]"
    );
    let pvals: Vec<f64> = results.iter().map(|(_, p)| *p).collect();
    let ks = ks_uniform_distance(&pvals);
    assert!(ks < 0.1, "p-value KS distance from uniform {ks:.3} >= 0.1");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1200.0, "runtime {elapsed:.1}s exceeds 20min budget");
    println!(
        "ACCEPTANCE 7 (bootstrap level): PASS — rate {rate:.3} in [0.02,0.08], p-value KS {ks:.3} < 0.1, {elapsed:.1}s"
    );
}

#[test]
fn criterion_08_tail_dependence_power() {
    let _g = gate();
    let start = Instant::now();
    let target = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
    let eval =
        SteinKernelEvaluator::new(target.clone(), BaseKernelSpec::weighted_rbf(0.5).unwrap());

    // τ-matched Gumbel alternative: τ(Clayton 2) = 0.5 → θ_G = 2.
    let tau = csd::bench::family_tau(Family::Clayton, 2.0).unwrap();
    let theta_g = theta_for_tau(Family::Gumbel, tau).unwrap();
    assert!((theta_g - 2.0).abs() < 1e-8);
    let alt = CopulaModel::archimedean(GeneratorSpec::gumbel(theta_g).unwrap(), 2).unwrap();

    let reps = 200usize;
    let rejections: usize = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = sample(&SamplerConfig {
                model: alt.clone(),
                n: 500,
                seed: split_seed(808, r as u64),
            })
            .unwrap();
            let report = wild_bootstrap_test(
                &s,
                &eval,
                &BootstrapOptions {
                    draws: 300,
                    alpha: 0.05,
                    seed: split_seed(809, r as u64),
                    ..Default::default()
                },
            )
            .unwrap();
            report.reject as usize
        })
        .sum();
    let power = rejections as f64 / reps as f64;
    assert!(power > 0.5, "power against τ-matched Gumbel {power:.3} <= 0.5");

    // mean CSD monotone in |λ_L(target) - λ_L(alt)| over a Clayton θ grid
    let lam_target = target.tail_lower().unwrap();
    let thetas = [0.5f64, 1.0, 2.0, 4.0];
    let mut lam_diffs = Vec::new();
    let mut mean_csd = Vec::new();
    for (ti, &th) in thetas.iter().enumerate() {
        let alt = CopulaModel::archimedean(GeneratorSpec::clayton(th).unwrap(), 2).unwrap();
        let lam = alt.tail_lower().unwrap();
        lam_diffs.push((lam - lam_target).abs());
        let vals: Vec<f64> = (0..100)
            .into_par_iter()
            .map(|r| {
                let s = sample(&SamplerConfig {
                    model: alt.clone(),
                    n: 500,
                    seed: split_seed(810, (ti * 1000 + r) as u64),
                })
                .unwrap();
                csd_v_statistic(&s, &eval).unwrap().csd_sq
            })
            .collect();
        mean_csd.push(vals.iter().sum::<f64>() / vals.len() as f64);
    }
    let rho = spearman_rho(&lam_diffs, &mean_csd);
    assert!(rho > 0.8, "Spearman(|Δλ_L|, mean CSD) = {rho:.3} <= 0.8 ({lam_diffs:?} vs {mean_csd:?})");
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE 8 (tail-dependence power): PASS — power {power:.2} > 0.5, Spearman {rho:.2} > 0.8, {elapsed:.1}s"
    );
}

#[test]
fn criterion_09_complexity_shadows() {
    let _g = gate();
    let pool = serial_pool();
    let sigma = 0.5;
    let base = BaseKernelSpec::rbf(sigma).unwrap();

    let time_median = |mut f: Box<dyn FnMut() -> f64>| -> f64 {
        let mut times = Vec::new();
        for _ in 0..5 {
            let t0 = Instant::now();
            let v = f();
            times.push(t0.elapsed().as_secs_f64());
            std::hint::black_box(v);
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times[2]
    };

    // exact vs n (quadratic)
    let ns = [200usize, 400, 800, 1600];
    let mut t_n = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
        let eval = SteinKernelEvaluator::new(model.clone(), base);
        let s = sample(&SamplerConfig { model, n, seed: 909 + i as u64 }).unwrap();
        t_n.push(pool.install(|| {
            time_median(Box::new(move || csd_v_statistic(&s, &eval).unwrap().csd_sq))
        }));
    }
    let slope_n = log_log_slope(&ns.iter().map(|&n| n as f64).collect::<Vec<_>>(), &t_n);
    assert!(
        (1.7..=2.3).contains(&slope_n),
        "exact-method slope vs n = {slope_n:.2}, outside [1.7, 2.3] (times {t_n:?})"
    );

    // exact vs d (linear-ish; amortized scores keep it near 1)
    let ds = [2usize, 4, 8, 16, 32];
    let mut t_d = Vec::new();
    for (i, &d) in ds.iter().enumerate() {
        let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), d).unwrap();
        let eval = SteinKernelEvaluator::new(model.clone(), base);
        let s = sample(&SamplerConfig { model, n: 300, seed: 919 + i as u64 }).unwrap();
        t_d.push(pool.install(|| {
            time_median(Box::new(move || csd_v_statistic(&s, &eval).unwrap().csd_sq))
        }));
    }
    let slope_d = log_log_slope(&ds.iter().map(|&d| d as f64).collect::<Vec<_>>(), &t_d);
    assert!(
        slope_d <= 1.4,
        "exact-method slope vs d = {slope_d:.2}, above 1.4 (times {t_d:?})"
    );

    // RF vs n (near-linear)
    let ns_rf = [2000usize, 4000, 8000, 16000];
    let mut t_rf = Vec::new();
    for (i, &n) in ns_rf.iter().enumerate() {
        let model = CopulaModel::archimedean(GeneratorSpec::clayton(2.0).unwrap(), 2).unwrap();
        let s = sample(&SamplerConfig { model: model.clone(), n, seed: 929 + i as u64 }).unwrap();
        let basis = draw_basis(256, 2, sigma, 930 + i as u64).unwrap();
        t_rf.push(pool.install(|| {
            time_median(Box::new(move || rf_csd(&s, &model, &basis).unwrap().csd_sq))
        }));
    }
    let slope_rf = log_log_slope(&ns_rf.iter().map(|&n| n as f64).collect::<Vec<_>>(), &t_rf);
    assert!(
        (0.8..=1.3).contains(&slope_rf),
        "RF slope vs n = {slope_rf:.2}, outside [0.8, 1.3] (times {t_rf:?})"
    );

    println!(
        "ACCEPTANCE 9 (complexity shadows): PASS — exact/n {slope_n:.2} in [1.7,2.3], exact/d {slope_d:.2} <= 1.4, rf/n {slope_rf:.2} in [0.8,1.3]"
    );
}

#[test]
fn criterion_10_determinism() {
    let _g = gate();
    let model = CopulaModel::archimedean(GeneratorSpec::gumbel(2.0).unwrap(), 2).unwrap();
    let eval = SteinKernelEvaluator::new(model.clone(), BaseKernelSpec::rbf(0.5).unwrap());

    // sampling, exact estimate, bootstrap, RF: all bit-identical on re-run
    // with the recorded seeds.
    let run = || {
        let s = sample(&SamplerConfig { model: model.clone(), n: 150, seed: 1010 }).unwrap();
        let est = csd_v_statistic(&s, &eval).unwrap();
        let report = wild_bootstrap_test(
            &s,
            &eval,
            &BootstrapOptions { draws: 200, alpha: 0.05, seed: 1011, ..Default::default() },
        )
        .unwrap();
        let basis = draw_basis(128, 2, 0.5, 1012).unwrap();
        let rf = rf_csd(&s, &model, &basis).unwrap();
        (est.csd_sq, report.p_value, report.bootstrap_stats, rf.csd_sq)
    };
    let (a_est, a_p, a_stats, a_rf) = run();
    let (b_est, b_p, b_stats, b_rf) = run();
    assert_eq!(a_est.to_bits(), b_est.to_bits(), "exact csd_sq not bit-identical");
    assert_eq!(a_p.to_bits(), b_p.to_bits(), "p-value not bit-identical");
    assert_eq!(a_rf.to_bits(), b_rf.to_bits(), "rf csd_sq not bit-identical");
    for (x, y) in a_stats.iter().zip(&b_stats) {
        assert_eq!(x.to_bits(), y.to_bits(), "bootstrap stat not bit-identical");
    }

    // streaming path too, under a different thread count
    let s = sample(&SamplerConfig { model: model.clone(), n: 150, seed: 1010 }).unwrap();
    let st1 = csd_streaming(&s, &eval, 32).unwrap();
    let st2 = serial_pool().install(|| csd_streaming(&s, &eval, 32).unwrap());
    assert_eq!(st1.csd_sq.to_bits(), st2.csd_sq.to_bits());
    println!("ACCEPTANCE 10 (determinism): PASS — exact, bootstrap, RF and streaming all bit-reproducible");
}
