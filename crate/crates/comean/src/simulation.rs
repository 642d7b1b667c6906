//! Monte Carlo coverage harness with deterministic, seedable parallel
//! execution: every replication runs on its own RNG substream, so results
//! are identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, StudentT, Uniform};

use crate::error::{Error, Result};
use crate::estimators::{EstimatorSpec, TwoSampleData};
use crate::exec::{map_indexed, Parallelism};
use crate::inference::{
    clt_variance, confidence_interval, CltConvention, VarianceMethod, ZStyle,
};
use crate::resampling::{
    bootstrap_variance, delete_d_jackknife, jackknife_paired, jackknife_unequal,
};
use crate::stats::{summarize, Sample};

/// Simulation model: a base law standardized to unit variance (models 1-3)
/// or the literal shifted-gamma construction (models 4-5), scaled by
/// per-population sigma around a common mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationModel {
    pub id: u8,
    pub mu: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    /// Gamma shape, models 4-5 only.
    pub shape: f64,
}

impl SimulationModel {
    /// Model with the study defaults: mu = 10, sigma1 = 1, sigma2 = 2.
    pub fn new(id: u8) -> Result<Self> {
        Self::with_params(id, 10.0, 1.0, 2.0)
    }

    pub fn with_params(id: u8, mu: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        let shape = match id {
            1..=3 => 0.0,
            4 => 1.5,
            5 => 2.5,
            other => return Err(Error::InvalidModel(other)),
        };
        if sigma1 <= 0.0 {
            return Err(Error::NonPositiveSigma(sigma1));
        }
        if sigma2 <= 0.0 {
            return Err(Error::NonPositiveSigma(sigma2));
        }
        Ok(Self { id, mu, sigma1, sigma2, shape })
    }

    fn sigma(&self, population: u8) -> f64 {
        if population == 1 {
            self.sigma1
        } else {
            self.sigma2
        }
    }
}

/// Draws one sample of size `n` for the given population (1 or 2).
pub fn draw_sample(
    model: &SimulationModel,
    population: u8,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Sample> {
    let sigma = model.sigma(population);
    let mu = model.mu;
    let values: Vec<f64> = match model.id {
        1 => {
            let normal = Normal::new(0.0, 1.0).expect("valid normal");
            (0..n).map(|_| mu + sigma * normal.sample(rng)).collect()
        }
        2 => {
            // t(5) standardized to unit variance (Var t(5) = 5/3)
            let t = StudentT::new(5.0).expect("valid t");
            let scale = (5.0f64 / 3.0).sqrt();
            (0..n).map(|_| mu + sigma * t.sample(rng) / scale).collect()
        }
        3 => {
            // U(-5,5) standardized to unit variance (Var = 25/3)
            let u = Uniform::new(-5.0, 5.0).expect("valid uniform");
            let scale = (25.0f64 / 3.0).sqrt();
            (0..n).map(|_| mu + sigma * u.sample(rng) / scale).collect()
        }
        4 | 5 => {
            // literally mu + sigma (G - a sigma), G ~ Gamma(shape a, scale sigma)
            let gamma = Gamma::new(model.shape, sigma).expect("valid gamma");
            (0..n)
                .map(|_| mu + sigma * (gamma.sample(rng) - model.shape * sigma))
                .collect()
        }
        other => return Err(Error::InvalidModel(other)),
    };
    Sample::new(values)
}

/// The seeded substream for replication `rep`.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Empirical coverage of nominal-`level` intervals for one
/// (model, N, method) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub model: u8,
    pub n: usize,
    pub method: VarianceMethod,
    pub coverage: f64,
    pub reps: usize,
    pub seed: u64,
    pub mean_ci_width: f64,
    /// Replications excluded because the estimator or variance method failed.
    pub failures: usize,
}

/// Per-replication containment flags, one row per method, for paired
/// comparisons between methods.
#[derive(Debug, Clone)]
pub struct CoverageTable {
    pub results: Vec<CoverageResult>,
    /// hits[m][r] = interval of method m contained mu in replication r
    /// (None when the replication failed for that method).
    pub hits: Vec<Vec<Option<bool>>>,
}

/// Runs the coverage experiment: all methods share the same data within a
/// replication (paired design). Replication `r` draws both samples from the
/// substream `(seed, r)`; bootstrap methods draw from a substream derived
/// from `(seed, r)` shared across B values.
pub fn coverage_experiment(
    model: &SimulationModel,
    n: usize,
    reps: usize,
    methods: &[VarianceMethod],
    estimator: &EstimatorSpec,
    level: f64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<CoverageTable> {
    if reps < 1 {
        return Err(Error::TooFewObservations { needed: 1, got: reps });
    }
    let mu = model.mu;

    // per-rep outcome: Some((contains, width)) per method, None on failure
    let run_rep = |rep: usize| -> Vec<Option<(bool, f64)>> {
        let mut rng = replication_rng(seed, rep as u64);
        let data = match (|| -> Result<TwoSampleData> {
            let s1 = draw_sample(model, 1, n, &mut rng)?;
            let s2 = draw_sample(model, 2, n, &mut rng)?;
            Ok(TwoSampleData::new(s1, s2))
        })() {
            Ok(d) => d,
            Err(_) => return vec![None; methods.len()],
        };
        let center = match crate::estimators::estimate_common_mean(&data, estimator) {
            Ok(e) => e.value,
            Err(_) => return vec![None; methods.len()],
        };
        let boot_seed = splitmix64(seed ^ splitmix64(rep as u64));
        methods
            .iter()
            .map(|method| {
                let sd = match *method {
                    VarianceMethod::JackknifeUnequal(norming, grouping) => jackknife_unequal(
                        estimator,
                        &data,
                        norming,
                        grouping,
                        Parallelism::Sequential,
                    )
                    .map(|r| r.sd),
                    VarianceMethod::JackknifePaired(norming) => {
                        jackknife_paired(estimator, &data, norming, Parallelism::Sequential)
                            .map(|r| r.sd)
                    }
                    VarianceMethod::DeleteD(d) => {
                        let mut dd_rng = ChaCha8Rng::seed_from_u64(boot_seed);
                        dd_rng.set_stream(u64::MAX);
                        delete_d_jackknife(estimator, &data, d, 5_000, &mut dd_rng).map(|r| r.sd)
                    }
                    VarianceMethod::Clt => {
                        clt_variance(&data, estimator, CltConvention::Unbiased).map(|c| c.sd)
                    }
                    VarianceMethod::Bootstrap { b, .. } => {
                        bootstrap_variance(estimator, &data, b, boot_seed, Parallelism::Sequential)
                            .map(|r| r.sd)
                    }
                };
                let sd = match sd {
                    Ok(sd) => sd,
                    Err(_) => return None,
                };
                let ci = confidence_interval(center, sd, level, ZStyle::Exact).ok()?;
                Some((ci.contains(mu), ci.width()))
            })
            .collect()
    };

    let rows = map_indexed(reps, parallelism, run_rep);

    let mut results = Vec::with_capacity(methods.len());
    let mut hits = vec![Vec::with_capacity(reps); methods.len()];
    for (m, method) in methods.iter().enumerate() {
        let mut covered = 0usize;
        let mut valid = 0usize;
        let mut width_sum = 0.0;
        for row in &rows {
            match row[m] {
                Some((contains, width)) => {
                    valid += 1;
                    width_sum += width;
                    if contains {
                        covered += 1;
                    }
                    hits[m].push(Some(contains));
                }
                None => hits[m].push(None),
            }
        }
        results.push(CoverageResult {
            model: model.id,
            n,
            method: *method,
            coverage: if valid > 0 { covered as f64 / valid as f64 } else { f64::NAN },
            reps,
            seed,
            mean_ci_width: if valid > 0 { width_sum / valid as f64 } else { f64::NAN },
            failures: reps - valid,
        });
    }
    Ok(CoverageTable { results, hits })
}

/// Empirical frequency of the misordering event S~1^2 > S~2^2.
pub fn misordering_probability(
    model: &SimulationModel,
    n: usize,
    reps: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<f64> {
    let flags = map_indexed(reps, parallelism, |rep| -> Result<bool> {
        let mut rng = replication_rng(seed, rep as u64);
        let s1 = draw_sample(model, 1, n, &mut rng)?;
        let s2 = draw_sample(model, 2, n, &mut rng)?;
        let v1 = summarize(s1.values())?.var_unbiased;
        let v2 = summarize(s2.values())?.var_unbiased;
        Ok(v1 > v2)
    });
    let mut misordered = 0usize;
    for f in flags {
        if f? {
            misordered += 1;
        }
    }
    Ok(misordered as f64 / reps as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resampling::Norming;

    #[test]
    fn invalid_model_and_sigma_rejected() {
        assert!(matches!(SimulationModel::new(9), Err(Error::InvalidModel(9))));
        assert!(SimulationModel::with_params(1, 10.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn draws_are_deterministic_given_seed() {
        let model = SimulationModel::new(1).unwrap();
        let a = draw_sample(&model, 1, 20, &mut replication_rng(7, 3)).unwrap();
        let b = draw_sample(&model, 1, 20, &mut replication_rng(7, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gamma_model_centering_is_exact_in_expectation() {
        // E[G] = a sigma makes mu + sigma (G - a sigma) centered at mu
        let model = SimulationModel::new(4).unwrap();
        let n = 100_000;
        let s = draw_sample(&model, 1, n, &mut replication_rng(11, 0)).unwrap();
        let stats = summarize(s.values()).unwrap();
        let se = (stats.var_unbiased / n as f64).sqrt();
        assert!(
            (stats.mean - 10.0).abs() < 4.0 * se,
            "mean {} too far from 10 (se {se})",
            stats.mean
        );
    }

    #[test]
    fn single_replication_coverage_is_zero_or_one() {
        let model = SimulationModel::new(1).unwrap();
        let table = coverage_experiment(
            &model,
            25,
            1,
            &[VarianceMethod::JackknifePaired(Norming::Unbiased)],
            &EstimatorSpec::GraybillDeal,
            0.95,
            42,
            Parallelism::Sequential,
        )
        .unwrap();
        let c = table.results[0].coverage;
        assert!(c == 0.0 || c == 1.0);
    }

    #[test]
    fn coverage_is_independent_of_parallelism() {
        let model = SimulationModel::new(1).unwrap();
        let methods = [
            VarianceMethod::JackknifePaired(Norming::Unbiased),
            VarianceMethod::Bootstrap { b: 50, seed: 0 },
        ];
        let run = |p| {
            coverage_experiment(
                &model,
                15,
                40,
                &methods,
                &EstimatorSpec::GraybillDeal,
                0.95,
                9,
                p,
            )
            .unwrap()
        };
        let seq = run(Parallelism::Sequential);
        let par = run(Parallelism::Rayon);
        assert_eq!(seq.results, par.results);
        assert_eq!(seq.hits, par.hits);
    }

    #[test]
    fn equal_sigmas_misorder_about_half_the_time() {
        let model = SimulationModel::with_params(1, 10.0, 1.0, 1.0).unwrap();
        let reps = 4000;
        let p = misordering_probability(&model, 30, reps, 5, Parallelism::Rayon).unwrap();
        let se = (0.25 / reps as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * se, "p = {p}");
    }

    #[test]
    fn misordering_smoke_tiny_n() {
        let model = SimulationModel::new(2).unwrap();
        let p = misordering_probability(&model, 2, 50, 1, Parallelism::Sequential).unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}
