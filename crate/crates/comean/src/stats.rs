//! Summary statistics and the exact sample-variance linearization.

use crate::error::{Error, Result};

/// An ordered list of finite real-valued measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates that the sample is non-empty and every value is finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl std::ops::Index<usize> for Sample {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Per-sample summary: count, mean and both variance conventions.
///
/// `var_biased` uses divisor `n` and `var_unbiased` divisor `n - 1`;
/// for `n == 1` both are reported as zero and `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub var_biased: f64,
    pub var_unbiased: f64,
    /// All values identical (variance exactly zero).
    pub degenerate: bool,
}

/// Two-pass mean and central second moment.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    let var_biased = ss / n as f64;
    let var_unbiased = if n >= 2 { ss / (n - 1) as f64 } else { 0.0 };
    Ok(SummaryStats {
        n,
        mean,
        var_biased,
        var_unbiased,
        degenerate: var_biased == 0.0,
    })
}

pub fn summarize_sample(sample: &Sample) -> Result<SummaryStats> {
    summarize(sample.values())
}

/// Splits `var_biased - sigma2` into its linear part and quadratic remainder:
///
/// linear_part = (1/n) sum((x_i - mu)^2 - sigma2)
/// remainder   = ((1/n) sum(x_i - mu))^2
///
/// The identity `var_biased - sigma2 = linear_part - remainder` is exact
/// (up to floating-point roundoff) for every input.
pub fn linearization_decomposition(values: &[f64], mu: f64, sigma2: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = values.len() as f64;
    let linear_part = values.iter().map(|x| (x - mu) * (x - mu) - sigma2).sum::<f64>() / n;
    let centered_mean = values.iter().map(|x| x - mu).sum::<f64>() / n;
    let remainder = centered_mean * centered_mean;
    Ok((linear_part, remainder))
}

/// Running totals (n, sum, sum of squares) supporting O(1) leave-one-out
/// summary recomputation.
#[derive(Debug, Clone, Copy)]
pub struct Totals {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Totals {
    pub fn from_values(values: &[f64]) -> Self {
        let sum = values.iter().sum();
        let sum_sq = values.iter().map(|x| x * x).sum();
        Self { n: values.len(), sum, sum_sq }
    }

    pub fn summary(&self) -> SummaryStats {
        Self::summary_from(self.n, self.sum, self.sum_sq)
    }

    /// Summary of the sample with value `x` removed.
    pub fn summary_without(&self, x: f64) -> SummaryStats {
        Self::summary_from(self.n - 1, self.sum - x, self.sum_sq - x * x)
    }

    fn summary_from(n: usize, sum: f64, sum_sq: f64) -> SummaryStats {
        let nf = n as f64;
        let mean = sum / nf;
        // max(0) guards cancellation for near-constant samples
        let var_biased = (sum_sq / nf - mean * mean).max(0.0);
        let var_unbiased = if n >= 2 { var_biased * nf / (n - 1) as f64 } else { 0.0 };
        SummaryStats { n, mean, var_biased, var_unbiased, degenerate: var_biased == 0.0 }
    }
}
