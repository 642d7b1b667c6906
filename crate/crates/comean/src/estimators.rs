//! Common-mean estimators: convex combinations of the two sample means with
//! random weights, switching on the empirical ordering of the variance
//! estimates, plus the generic two-sample-statistic contract the resampling
//! layer operates on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::stats::{summarize, Sample, SummaryStats};

/// Two independent samples assumed to share a common mean.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleData {
    pub sample1: Sample,
    pub sample2: Sample,
}

impl TwoSampleData {
    pub fn new(sample1: Sample, sample2: Sample) -> Self {
        Self { sample1, sample2 }
    }

    pub fn from_values(v1: Vec<f64>, v2: Vec<f64>) -> Result<Self> {
        Ok(Self::new(Sample::new(v1)?, Sample::new(v2)?))
    }

    pub fn n1(&self) -> usize {
        self.sample1.len()
    }

    pub fn n2(&self) -> usize {
        self.sample2.len()
    }

    pub fn n(&self) -> usize {
        self.n1() + self.n2()
    }
}

/// Argument vector of the weight function: sample fractions, unbiased
/// variances and means of both samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaInputs {
    pub frac1: f64,
    pub frac2: f64,
    pub var1: f64,
    pub var2: f64,
    pub mean1: f64,
    pub mean2: f64,
}

impl GammaInputs {
    pub fn from_summaries(s1: &SummaryStats, s2: &SummaryStats) -> Self {
        let n = (s1.n + s2.n) as f64;
        Self {
            frac1: s1.n as f64 / n,
            frac2: s2.n as f64 / n,
            var1: s1.var_unbiased,
            var2: s2.var_unbiased,
            mean1: s1.mean,
            mean2: s2.mean,
        }
    }

    pub fn from_data(data: &TwoSampleData) -> Result<Self> {
        let s1 = summarize(data.sample1.values())?;
        let s2 = summarize(data.sample2.values())?;
        Ok(Self::from_summaries(&s1, &s2))
    }

    fn mean_diff_sq(&self) -> f64 {
        let d = self.mean1 - self.mean2;
        d * d
    }
}

/// Which side of the empirical order constraint the data fell on.
/// Ties (var1 == var2) belong to the ordered branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// var1 <= var2, in agreement with the constraint.
    Ordered,
    /// var1 > var2.
    Unordered,
}

impl Branch {
    fn from_inputs(inputs: &GammaInputs) -> Self {
        if inputs.var1 <= inputs.var2 {
            Branch::Ordered
        } else {
            Branch::Unordered
        }
    }
}

/// Identifier of the weight rule that produced a [`GammaWeight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRule {
    KnownVariance,
    GraybillDeal,
    ElfessiUnbalanced,
    ElfessiBalanced,
    FixedWeight,
    Kubokawa,
    ChangPlus,
}

/// The convex weight applied to the first sample mean, with branch provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaWeight {
    pub value: f64,
    pub branch: Branch,
    pub rule: WeightRule,
    /// False only for Kubokawa weights that fell outside [0, 1]; the value is
    /// returned unclamped and callers decide how to handle it.
    pub in_range: bool,
}

impl GammaWeight {
    fn new(value: f64, branch: Branch, rule: WeightRule) -> Self {
        Self { value, branch, rule, in_range: (0.0..=1.0).contains(&value) }
    }
}

/// Rule for picking the replacement weight when the Chang improvement fires.
/// All three satisfy n1/n <= gamma_tilde <= 2 n1/n - gamma_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TildeRule {
    /// gamma_tilde = n1/n, the unique choice valid for every gamma_n.
    Floor,
    /// gamma_tilde = 2 n1/n - gamma_n.
    Reflect,
    /// gamma_tilde = 1.5 n1/n - 0.5 gamma_n.
    Midpoint,
}

/// Positive function of (var1, var2, (mean1 - mean2)^2) parameterizing the
/// Kubokawa weight class.
#[derive(Clone)]
pub struct PsiFn(Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>);

impl PsiFn {
    pub fn new(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// psi identically one.
    pub fn one() -> Self {
        Self::new(|_, _, _| 1.0)
    }

    pub fn eval(&self, var1: f64, var2: f64, mean_diff_sq: f64) -> f64 {
        (self.0)(var1, var2, mean_diff_sq)
    }
}

impl fmt::Debug for PsiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PsiFn(..)")
    }
}

/// The estimator family.
#[derive(Debug, Clone)]
pub enum EstimatorSpec {
    /// Minimum-variance unbiased weights for known population variances.
    KnownVariance { sigma1_sq: f64, sigma2_sq: f64 },
    /// Inverse unbiased-variance weights (no order restriction).
    GraybillDeal,
    /// GD on the ordered branch, sample-fraction weights otherwise.
    /// This is the rule the data analyses call Nair's estimator.
    ElfessiUnbalanced,
    /// Balanced designs only: GD on the ordered branch, variance-proportional
    /// weights otherwise.
    ElfessiBalanced,
    /// Deterministic weight gamma on the first sample mean.
    FixedWeight(f64),
    /// gamma_psi = 1 - a / (b R psi), R = (b var2 + c (mean1-mean2)^2) / var1.
    Kubokawa { a: f64, b: f64, c: f64, psi: PsiFn },
    /// Chang improvement applied on top of a base rule.
    ChangPlus { base: Box<EstimatorSpec>, tilde_rule: TildeRule },
}

/// A computed common-mean estimate together with its weight and inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonMeanEstimate {
    pub value: f64,
    pub gamma: GammaWeight,
    pub inputs: GammaInputs,
}

pub fn estimate_known_variance(
    inputs: &GammaInputs,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> Result<CommonMeanEstimate> {
    if sigma1_sq <= 0.0 {
        return Err(Error::NonPositiveVariance(sigma1_sq));
    }
    if sigma2_sq <= 0.0 {
        return Err(Error::NonPositiveVariance(sigma2_sq));
    }
    let value = inputs.frac1 * sigma2_sq / (inputs.frac1 * sigma2_sq + inputs.frac2 * sigma1_sq);
    let gamma = GammaWeight::new(value, Branch::from_inputs(inputs), WeightRule::KnownVariance);
    Ok(combine(inputs, gamma))
}

pub fn gamma_graybill_deal(inputs: &GammaInputs) -> Result<GammaWeight> {
    let denom = inputs.frac1 * inputs.var2 + inputs.frac2 * inputs.var1;
    if denom == 0.0 {
        return Err(Error::BothVariancesZero);
    }
    Ok(GammaWeight::new(
        inputs.frac1 * inputs.var2 / denom,
        Branch::from_inputs(inputs),
        WeightRule::GraybillDeal,
    ))
}

pub fn gamma_elfessi_unbalanced(inputs: &GammaInputs) -> Result<GammaWeight> {
    let branch = Branch::from_inputs(inputs);
    let value = match branch {
        Branch::Ordered => gamma_graybill_deal(inputs)?.value,
        Branch::Unordered => inputs.frac1,
    };
    Ok(GammaWeight { value, branch, rule: WeightRule::ElfessiUnbalanced, in_range: true })
}

/// Requires a balanced design; the fractions stand in for the counts, so the
/// balance check is frac1 == frac2.
pub fn gamma_elfessi_balanced(inputs: &GammaInputs, n1: usize, n2: usize) -> Result<GammaWeight> {
    if n1 != n2 {
        return Err(Error::UnbalancedDesign { n1, n2 });
    }
    let branch = Branch::from_inputs(inputs);
    let value = match branch {
        Branch::Ordered => gamma_graybill_deal(inputs)?.value,
        Branch::Unordered => {
            let denom = inputs.var1 + inputs.var2;
            if denom == 0.0 {
                return Err(Error::BothVariancesZero);
            }
            inputs.var1 / denom
        }
    };
    Ok(GammaWeight { value, branch, rule: WeightRule::ElfessiBalanced, in_range: true })
}

/// Returns the Kubokawa weight as written, unclamped; `in_range` is false
/// when it falls outside [0, 1].
pub fn gamma_kubokawa(
    inputs: &GammaInputs,
    a: f64,
    b: f64,
    c: f64,
    psi: &PsiFn,
) -> Result<GammaWeight> {
    if inputs.var1 == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let diff_sq = inputs.mean_diff_sq();
    let r = (b * inputs.var2 + c * diff_sq) / inputs.var1;
    let denom = b * r * psi.eval(inputs.var1, inputs.var2, diff_sq);
    let value = if a == 0.0 {
        1.0
    } else {
        if denom == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        1.0 - a / denom
    };
    Ok(GammaWeight::new(value, Branch::from_inputs(inputs), WeightRule::Kubokawa))
}

/// Chang improvement: leaves weights >= n1/n untouched, otherwise replaces
/// them by gamma_tilde per the rule.
pub fn gamma_chang_plus(gamma_n: GammaWeight, frac1: f64, tilde_rule: TildeRule) -> GammaWeight {
    let value = if gamma_n.value >= frac1 {
        gamma_n.value
    } else {
        let tilde = match tilde_rule {
            TildeRule::Floor => frac1,
            TildeRule::Reflect => 2.0 * frac1 - gamma_n.value,
            TildeRule::Midpoint => 1.5 * frac1 - 0.5 * gamma_n.value,
        };
        debug_assert!(tilde >= frac1 && tilde <= 2.0 * frac1 - gamma_n.value + 1e-12);
        tilde
    };
    GammaWeight::new(value, gamma_n.branch, WeightRule::ChangPlus)
}

fn combine(inputs: &GammaInputs, gamma: GammaWeight) -> CommonMeanEstimate {
    CommonMeanEstimate {
        value: gamma.value * inputs.mean1 + (1.0 - gamma.value) * inputs.mean2,
        gamma,
        inputs: *inputs,
    }
}

impl EstimatorSpec {
    /// Smallest per-sample size the weight rule can be evaluated on.
    fn min_sample_size(&self) -> usize {
        match self {
            EstimatorSpec::FixedWeight(_) | EstimatorSpec::KnownVariance { .. } => 1,
            EstimatorSpec::ChangPlus { base, .. } => base.min_sample_size(),
            _ => 2,
        }
    }

    pub fn weight(&self, inputs: &GammaInputs, n1: usize, n2: usize) -> Result<GammaWeight> {
        match self {
            EstimatorSpec::KnownVariance { sigma1_sq, sigma2_sq } => {
                if *sigma1_sq <= 0.0 {
                    return Err(Error::NonPositiveVariance(*sigma1_sq));
                }
                if *sigma2_sq <= 0.0 {
                    return Err(Error::NonPositiveVariance(*sigma2_sq));
                }
                let value = inputs.frac1 * sigma2_sq
                    / (inputs.frac1 * sigma2_sq + inputs.frac2 * sigma1_sq);
                Ok(GammaWeight::new(value, Branch::from_inputs(inputs), WeightRule::KnownVariance))
            }
            EstimatorSpec::GraybillDeal => gamma_graybill_deal(inputs),
            EstimatorSpec::ElfessiUnbalanced => gamma_elfessi_unbalanced(inputs),
            EstimatorSpec::ElfessiBalanced => gamma_elfessi_balanced(inputs, n1, n2),
            EstimatorSpec::FixedWeight(g) => {
                Ok(GammaWeight::new(*g, Branch::from_inputs(inputs), WeightRule::FixedWeight))
            }
            EstimatorSpec::Kubokawa { a, b, c, psi } => gamma_kubokawa(inputs, *a, *b, *c, psi),
            EstimatorSpec::ChangPlus { base, tilde_rule } => {
                let inner = base.weight(inputs, n1, n2)?;
                Ok(gamma_chang_plus(inner, inputs.frac1, *tilde_rule))
            }
        }
    }

    /// Evaluate the estimator from precomputed per-sample summaries.
    pub fn estimate_from_summaries(
        &self,
        s1: &SummaryStats,
        s2: &SummaryStats,
    ) -> Result<CommonMeanEstimate> {
        let needed = self.min_sample_size();
        for s in [s1, s2] {
            if s.n < needed {
                return Err(Error::TooFewObservations { needed, got: s.n });
            }
        }
        let inputs = GammaInputs::from_summaries(s1, s2);
        let gamma = self.weight(&inputs, s1.n, s2.n)?;
        Ok(combine(&inputs, gamma))
    }
}

/// Dispatches to the weight rule and forms the convex combination.
pub fn estimate_common_mean(data: &TwoSampleData, spec: &EstimatorSpec) -> Result<CommonMeanEstimate> {
    let s1 = summarize(data.sample1.values())?;
    let s2 = summarize(data.sample2.values())?;
    spec.estimate_from_summaries(&s1, &s2)
}

/// A two-sample statistic: a pure function of the two value multisets,
/// symmetric within each sample.
pub trait TwoSampleStatistic: Sync {
    fn evaluate(&self, sample1: &[f64], sample2: &[f64]) -> Result<f64>;

    /// Fast path for statistics that are functions of the per-sample
    /// summaries only. Returning `Some` lets the jackknife recompute
    /// leave-one-out values in O(1) from cached totals.
    fn evaluate_summaries(&self, _s1: &SummaryStats, _s2: &SummaryStats) -> Option<Result<f64>> {
        None
    }
}

impl TwoSampleStatistic for EstimatorSpec {
    fn evaluate(&self, sample1: &[f64], sample2: &[f64]) -> Result<f64> {
        let s1 = summarize(sample1)?;
        let s2 = summarize(sample2)?;
        Ok(self.estimate_from_summaries(&s1, &s2)?.value)
    }

    fn evaluate_summaries(&self, s1: &SummaryStats, s2: &SummaryStats) -> Option<Result<f64>> {
        Some(self.estimate_from_summaries(s1, s2).map(|e| e.value))
    }
}

impl<F> TwoSampleStatistic for F
where
    F: Fn(&[f64], &[f64]) -> Result<f64> + Sync,
{
    fn evaluate(&self, sample1: &[f64], sample2: &[f64]) -> Result<f64> {
        self(sample1, sample2)
    }
}

/// The pooled mean (n1 xbar1 + n2 xbar2) / n; its jackknife pseudo-values
/// reproduce the raw observations exactly.
#[derive(Debug, Clone, Copy)]
pub struct PooledMean;

impl TwoSampleStatistic for PooledMean {
    fn evaluate(&self, sample1: &[f64], sample2: &[f64]) -> Result<f64> {
        if sample1.is_empty() && sample2.is_empty() {
            return Err(Error::EmptySample);
        }
        let total: f64 = sample1.iter().chain(sample2).sum();
        Ok(total / (sample1.len() + sample2.len()) as f64)
    }

    fn evaluate_summaries(&self, s1: &SummaryStats, s2: &SummaryStats) -> Option<Result<f64>> {
        let n = (s1.n + s2.n) as f64;
        Some(Ok((s1.n as f64 * s1.mean + s2.n as f64 * s2.mean) / n))
    }
}
