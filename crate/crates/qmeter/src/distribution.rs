//! Outcome distributions on finite grids.

use crate::error::{Error, Result};

const NEGATIVE_PROB_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;

/// Probability distribution over real outcome labels.
#[derive(Clone, Debug)]
pub struct Distribution {
    outcomes: Vec<f64>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps a distribution. Probabilities in
    /// `[−1e−12, 0)` are clamped to zero; the total must be 1 within 1e−10.
    pub fn new(outcomes: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::InvalidDistribution("label/probability length mismatch".into()));
        }
        let mut clamped = probs;
        for p in &mut clamped {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution("probabilities must be finite".into()));
            }
            if *p < 0.0 {
                if *p < -NEGATIVE_PROB_TOL {
                    return Err(Error::InvalidDistribution(format!(
                        "probability {p:.3e} below clamp tolerance"
                    )));
                }
                *p = 0.0;
            }
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Distribution { outcomes, probs: clamped })
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability at an exact outcome label.
    pub fn prob_at(&self, outcome: f64) -> Result<f64> {
        self.outcomes
            .iter()
            .position(|&x| x == outcome)
            .map(|k| self.probs[k])
            .ok_or(Error::UnknownOutcome(outcome))
    }

    /// Σ f(xₖ)·pₖ.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.outcomes.iter().zip(&self.probs).map(|(&x, &p)| f(x) * p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expectation(|x| x)
    }

    /// Variance clamped at zero from below (−1e−12 tolerance).
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let v = self.expectation(|x| x * x) - m * m;
        v.max(0.0)
    }
}

/// Joint distribution on a 2-D grid of real labels.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    x_outcomes: Vec<f64>,
    y_outcomes: Vec<f64>,
    /// Row k = x-outcome k, column l = y-outcome l.
    probs: Vec<Vec<f64>>,
}

impl JointDistribution {
    /// Validates grid shape, clamps tiny negatives, checks normalization.
    pub fn new(x_outcomes: Vec<f64>, y_outcomes: Vec<f64>, probs: Vec<Vec<f64>>) -> Result<Self> {
        if probs.len() != x_outcomes.len()
            || probs.iter().any(|row| row.len() != y_outcomes.len())
        {
            return Err(Error::InvalidDistribution("grid shape mismatch".into()));
        }
        let mut clamped = probs;
        let mut total = 0.0;
        for row in &mut clamped {
            for p in row {
                if !p.is_finite() {
                    return Err(Error::InvalidDistribution("probabilities must be finite".into()));
                }
                if *p < 0.0 {
                    if *p < -NEGATIVE_PROB_TOL {
                        return Err(Error::InvalidDistribution(format!(
                            "probability {p:.3e} below clamp tolerance"
                        )));
                    }
                    *p = 0.0;
                }
                total += *p;
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(JointDistribution { x_outcomes, y_outcomes, probs: clamped })
    }

    pub fn x_outcomes(&self) -> &[f64] {
        &self.x_outcomes
    }

    pub fn y_outcomes(&self) -> &[f64] {
        &self.y_outcomes
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn prob(&self, k: usize, l: usize) -> f64 {
        self.probs[k][l]
    }

    /// Σ f(xₖ, yₗ)·μₖₗ.
    pub fn expectation(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut s = 0.0;
        for (k, &x) in self.x_outcomes.iter().enumerate() {
            for (l, &y) in self.y_outcomes.iter().enumerate() {
                s += f(x, y) * self.probs[k][l];
            }
        }
        s
    }

    /// Marginal over the first coordinate.
    pub fn x_marginal(&self) -> Distribution {
        let probs: Vec<f64> = self.probs.iter().map(|row| row.iter().sum()).collect();
        Distribution { outcomes: self.x_outcomes.clone(), probs }
    }

    /// Marginal over the second coordinate.
    pub fn y_marginal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.y_outcomes.len())
            .map(|l| self.probs.iter().map(|row| row[l]).sum())
            .collect();
        Distribution { outcomes: self.y_outcomes.clone(), probs }
    }
}

/// Distribution over outcome tuples from a sequence of measurements.
#[derive(Clone, Debug)]
pub struct SequenceDistribution {
    labels: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl SequenceDistribution {
    pub(crate) fn new(labels: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        let mut clamped = probs;
        for p in &mut clamped {
            if *p < 0.0 {
                if *p < -NEGATIVE_PROB_TOL {
                    return Err(Error::InvalidDistribution(format!(
                        "probability {p:.3e} below clamp tolerance"
                    )));
                }
                *p = 0.0;
            }
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(SequenceDistribution { labels, probs: clamped })
    }

    pub fn labels(&self) -> &[Vec<f64>] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Probability of an exact outcome tuple.
    pub fn prob_of(&self, tuple: &[f64]) -> Result<f64> {
        self.labels
            .iter()
            .position(|l| l.as_slice() == tuple)
            .map(|k| self.probs[k])
            .ok_or_else(|| Error::UnknownOutcome(f64::NAN))
    }
}
