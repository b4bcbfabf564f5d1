//! Probability-operator-valued measures on finite real outcome grids.

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::linalg::{self, cr, tol, CMatrix};
use crate::observable::Observable;
use crate::state::DensityState;

/// A POM: distinct real outcome labels with positive effects summing to the
/// identity. Generalizes [`Observable`] to unsharp measurements.
#[derive(Clone, Debug)]
pub struct Pom {
    outcomes: Vec<f64>,
    effects: Vec<CMatrix>,
}

impl Pom {
    /// Validates labels (finite, distinct; sorted ascending on construction)
    /// and effects (Hermitian, spectrum ≥ −1e−10, summing to the identity).
    pub fn new(outcomes: Vec<f64>, effects: Vec<CMatrix>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() != effects.len() {
            return Err(Error::InvalidPom(
                "outcome and effect counts must match and be nonzero".into(),
            ));
        }
        if outcomes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPom("outcome labels must be finite".into()));
        }
        let dim = effects[0].nrows();
        let mut order: Vec<usize> = (0..outcomes.len()).collect();
        order.sort_by(|&a, &b| outcomes[a].total_cmp(&outcomes[b]));
        let outcomes: Vec<f64> = order.iter().map(|&k| outcomes[k]).collect();
        let effects: Vec<CMatrix> = order.into_iter().map(|k| effects[k].clone()).collect();
        if outcomes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPom("outcome labels must be distinct".into()));
        }
        let mut total = CMatrix::zeros(dim, dim);
        for (k, e) in effects.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::InvalidPom("effects must share one dimension".into()));
            }
            linalg::check_hermitian(e, tol::EQUALITY)
                .map_err(|err| Error::InvalidPom(format!("effect {k}: {err}")))?;
            let (values, _) = linalg::eigh(e)?;
            if let Some(&min) = values.first() {
                if min < -tol::EQUALITY {
                    return Err(Error::InvalidPom(format!(
                        "effect {k} has negative eigenvalue {min:.3e}"
                    )));
                }
            }
            total += e;
        }
        if (total - linalg::identity(dim)).norm() > tol::EQUALITY {
            return Err(Error::InvalidPom("effects do not sum to the identity".into()));
        }
        Ok(Pom { outcomes, effects })
    }

    /// Smeared version of a sharp observable: effects
    /// `Eₖ = η·Pₖ + (1−η)/n · 1` with `η ∈ (0, 1]`.
    ///
    /// With `scaled` labels `aₖ/η` the first-moment operator reproduces Â
    /// whenever the labels of `observable` sum to zero; with raw labels the
    /// first moment is shrunk by η.
    pub fn unsharp(observable: &Observable, eta: f64, scaled: bool) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidModel(format!("eta must be in (0, 1], got {eta}")));
        }
        let n = observable.len() as f64;
        let dim = observable.dim();
        let background = linalg::identity(dim) * cr((1.0 - eta) / n);
        let effects: Vec<CMatrix> = observable
            .projectors()
            .iter()
            .map(|p| p * cr(eta) + &background)
            .collect();
        let outcomes: Vec<f64> = observable
            .outcomes()
            .iter()
            .map(|&a| if scaled { a / eta } else { a })
            .collect();
        Pom::new(outcomes, effects)
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// First-moment operator X̂ = Σ xₖ Eₖ.
    pub fn first_moment(&self) -> CMatrix {
        self.moment_operator(|x| x)
    }

    /// Second-moment operator Σ xₖ² Eₖ.
    pub fn second_moment(&self) -> CMatrix {
        self.moment_operator(|x| x * x)
    }

    /// Operator Σ f(xₖ)·Eₖ.
    pub fn moment_operator(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let dim = self.dim();
        let mut op = CMatrix::zeros(dim, dim);
        for (x, e) in self.outcomes.iter().zip(&self.effects) {
            op += e * cr(f(*x));
        }
        op
    }

    /// Outcome distribution pₖ = Tr[Eₖ ρ] in the given state.
    pub fn born(&self, rho: &DensityState) -> Result<Distribution> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "POM dimension {} vs state dimension {}",
                self.dim(),
                rho.dim()
            )));
        }
        let probs: Vec<f64> = self.effects.iter().map(|e| rho.expectation(e)).collect();
        Distribution::new(self.outcomes.clone(), probs)
    }

    /// Drops effects with Frobenius norm at most `floor`.
    pub fn without_zero_effects(&self, floor: f64) -> Pom {
        let kept: Vec<(f64, CMatrix)> = self
            .outcomes
            .iter()
            .zip(&self.effects)
            .filter(|(_, e)| e.norm() > floor)
            .map(|(x, e)| (*x, e.clone()))
            .collect();
        let (outcomes, effects) = kept.into_iter().unzip();
        Pom { outcomes, effects }
    }

    /// Effect-wise equality within `tol` after dropping zero effects on both
    /// sides: same labels, each effect within `tol` in Frobenius norm.
    pub fn approx_eq(&self, other: &Pom, tol: f64) -> bool {
        let a = self.without_zero_effects(tol);
        let b = other.without_zero_effects(tol);
        a.outcomes.len() == b.outcomes.len()
            && a.outcomes
                .iter()
                .zip(&b.outcomes)
                .all(|(x, y)| (x - y).abs() <= tol)
            && a.effects
                .iter()
                .zip(&b.effects)
                .all(|(e, f)| (e - f).norm() <= tol)
    }
}

/// Outcome distribution of a POM in a state; see [`Pom::born`].
pub fn born_distribution(x: &Pom, rho: &DensityState) -> Result<Distribution> {
    x.born(rho)
}
