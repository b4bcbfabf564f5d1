//! Repeated measurements: resolution, the mean-value predictor, predictive
//! uncertainty, and the standard-quantum-limit condition.
//!
//! The resolution σ compares the recorded outcome with an ideal measurement
//! on the posterior state; the predictive uncertainty Δ[τ,ρ] scores a
//! mean-value prediction of a second, identical measurement after evolving
//! for time τ. An unbiased compatible instrument whose resolution does not
//! exceed its precision obeys
//! `Δ[τ,ρ]² ≥ |Tr[[Â(0), Â(τ)] 𝐗(ℝ)ρ]|` — the standard quantum limit.
//! Instruments with resolution above precision can beat it.

use crate::error::{Error, Result};
use crate::hamiltonian::{evolve, heisenberg, Hamiltonian};
use crate::instrument::{Instrument, PosteriorFamily};
use crate::linalg::{self, tol};
use crate::metrics;
use crate::observable::Observable;
use crate::state::DensityState;

/// Root-mean-square scatter (resolution) of an instrument for an observable:
/// `σ² = Σₖ pₖ Σₗ (xₖ − aₗ)²·Tr[Pₗ ρₖ]` over outcomes with a posterior.
pub fn resolution(t: &Instrument, a: &Observable, rho: &DensityState) -> Result<f64> {
    let family = t.posterior_family(rho)?;
    resolution_from_family(&family, a).map(|s| s.sqrt())
}

fn resolution_from_family(family: &PosteriorFamily, a: &Observable) -> Result<f64> {
    let mut total = 0.0;
    for entry in family.entries() {
        let Some(posterior) = &entry.posterior else { continue };
        let ideal = a.as_pom().born(posterior)?;
        let x = entry.outcome;
        total += entry.probability * ideal.expectation(|av| (x - av) * (x - av));
    }
    Ok(total.max(0.0))
}

/// The two nonnegative parts of the squared resolution:
/// `σ² = Σₖ pₖ·ΔA[ρₖ]² + Σₖ pₖ·(Tr[Âρₖ] − xₖ)²`.
#[derive(Clone, Copy, Debug)]
pub struct ResolutionDecomposition {
    /// Outcome-averaged posterior variance of the observable.
    pub posterior_variance: f64,
    /// Outcome-averaged squared gap between the posterior mean and the
    /// recorded outcome.
    pub prediction_bias: f64,
}

impl ResolutionDecomposition {
    pub fn total(&self) -> f64 {
        self.posterior_variance + self.prediction_bias
    }
}

/// Splits the squared resolution into posterior variance and prediction
/// bias; both parts are nonnegative and sum to σ².
pub fn resolution_decomposition(
    t: &Instrument,
    a: &Observable,
    rho: &DensityState,
) -> Result<ResolutionDecomposition> {
    let family = t.posterior_family(rho)?;
    let a_pom = a.as_pom();
    let a_op = a.operator();
    let mut posterior_variance = 0.0;
    let mut prediction_bias = 0.0;
    for entry in family.entries() {
        let Some(posterior) = &entry.posterior else { continue };
        let s = metrics::spread(&a_pom, posterior)?;
        posterior_variance += entry.probability * s.variance;
        let gap = posterior.expectation(&a_op) - entry.outcome;
        prediction_bias += entry.probability * gap * gap;
    }
    Ok(ResolutionDecomposition { posterior_variance, prediction_bias })
}

/// The mean-value predictor `h(x) = Tr[ρₓ Â(τ)]`, defined on outcomes whose
/// posterior exists.
#[derive(Clone, Debug)]
pub struct Predictor {
    entries: Vec<(f64, f64)>,
}

impl Predictor {
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// Predicted value at an exact outcome label.
    pub fn value_at(&self, outcome: f64) -> Result<f64> {
        self.entries
            .iter()
            .find(|(x, _)| *x == outcome)
            .map(|(_, h)| *h)
            .ok_or(Error::NullPosterior(outcome))
    }
}

/// Builds the mean-value predictor for a second measurement after time τ.
pub fn predictor(
    t: &Instrument,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    rho: &DensityState,
) -> Result<Predictor> {
    let a_tau = heisenberg(a, hamiltonian, tau)?;
    let family = t.posterior_family(rho)?;
    let entries = family
        .entries()
        .iter()
        .filter_map(|entry| {
            entry
                .posterior
                .as_ref()
                .map(|posterior| (entry.outcome, posterior.expectation(&a_tau)))
        })
        .collect();
    Ok(Predictor { entries })
}

/// Squared prediction uncertainty at one outcome:
/// `Δ[τ,ρ,x]² = Σ_{x'} (x' − h(x))²·Pr[X = x' ‖ α(τ)ρₓ]`, the second
/// measurement being the same instrument's POM on the evolved posterior.
/// Returns the root Δ[τ,ρ,x]. Errors when the posterior at `x` is missing.
pub fn conditional_uncertainty(
    t: &Instrument,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    rho: &DensityState,
    outcome: f64,
) -> Result<f64> {
    let family = t.posterior_family(rho)?;
    let prediction = predictor(t, a, hamiltonian, tau, rho)?.value_at(outcome)?;
    let posterior = family.posterior_at(outcome)?;
    let evolved = evolve(posterior, hamiltonian, tau)?;
    let second = t.associated_pom().born(&evolved)?;
    Ok(second.expectation(|x| (x - prediction) * (x - prediction)).max(0.0).sqrt())
}

/// Root-mean-square predictive uncertainty of the repeated measurement:
/// `Δ[τ,ρ]² = Σₖ pₖ·Δ[τ,ρ,xₖ]²` over outcomes with a posterior.
pub fn predictive_uncertainty(
    t: &Instrument,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    rho: &DensityState,
) -> Result<f64> {
    let rows = outcome_rows(t, a, hamiltonian, tau, rho)?;
    Ok(rows.iter().map(|r| r.probability * r.uncertainty * r.uncertainty).sum::<f64>().sqrt())
}

/// Per-outcome row of an [`SqlReport`].
#[derive(Clone, Copy, Debug)]
pub struct SqlOutcomeRow {
    pub outcome: f64,
    pub probability: f64,
    /// Mean-value prediction h(xₖ).
    pub prediction: f64,
    /// Conditional uncertainty Δ[τ,ρ,xₖ].
    pub uncertainty: f64,
}

fn outcome_rows(
    t: &Instrument,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    rho: &DensityState,
) -> Result<Vec<SqlOutcomeRow>> {
    let a_tau = heisenberg(a, hamiltonian, tau)?;
    let family = t.posterior_family(rho)?;
    let pom = t.associated_pom();
    let mut rows = Vec::new();
    for entry in family.entries() {
        let Some(posterior) = &entry.posterior else { continue };
        let prediction = posterior.expectation(&a_tau);
        let evolved = evolve(posterior, hamiltonian, tau)?;
        let second = pom.born(&evolved)?;
        let usq = second.expectation(|x| (x - prediction) * (x - prediction)).max(0.0);
        rows.push(SqlOutcomeRow {
            outcome: entry.outcome,
            probability: entry.probability,
            prediction,
            uncertainty: usq.sqrt(),
        });
    }
    Ok(rows)
}

/// Full evaluation of the standard-quantum-limit condition and bound for an
/// unbiased compatible instrument.
#[derive(Clone, Debug)]
pub struct SqlReport {
    /// Resolution σ of the first measurement.
    pub sigma: f64,
    /// Precision ε of the associated POM in the evolved post-measurement
    /// state α(τ)𝐗(ℝ)ρ.
    pub epsilon_after: f64,
    /// Squared predictive uncertainty Δ[τ,ρ]².
    pub delta_sq: f64,
    /// The bound `|Tr[[Â(0), Â(τ)] 𝐗(ℝ)ρ]|`.
    pub rhs: f64,
    /// σ ≤ ε_after (+1e−12): the hypothesis under which the bound is proven.
    pub condition_holds: bool,
    /// Δ² ≥ rhs (−1e−9).
    pub sql_holds: bool,
    /// Per-outcome probabilities, predictions, and uncertainties.
    pub rows: Vec<SqlOutcomeRow>,
    /// Probability mass of outcomes without a posterior state.
    pub excluded_weight: f64,
    /// Set when the excluded mass exceeds 1e−9.
    pub excluded_weight_flag: bool,
}

impl SqlReport {
    /// The provable implication: condition ⇒ bound. Its converse is not
    /// asserted anywhere.
    pub fn implication_holds(&self) -> bool {
        !self.condition_holds || self.sql_holds
    }
}

const CONDITION_SLACK: f64 = 1e-12;
const SQL_SLACK: f64 = 1e-9;

/// Evaluates resolution, post-measurement precision, predictive uncertainty,
/// and the standard-quantum-limit bound for one instrument.
///
/// Errors unless the associated POM is unbiased and compatible for `a`.
pub fn sql_report(
    t: &Instrument,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    rho: &DensityState,
) -> Result<SqlReport> {
    let pom = t.associated_pom();
    let compat = metrics::compatibility_defect(&pom, a)?;
    if compat > tol::COMPAT {
        return Err(Error::NotCompatible { deviation: compat });
    }
    let bias = metrics::unbiasedness_defect(&pom, a)?;
    if bias > tol::UNBIASED {
        return Err(Error::Biased { deviation: bias });
    }

    let family = t.posterior_family(rho)?;
    let sigma = resolution_from_family(&family, a)?.sqrt();
    let post_state = t.apply_all(rho)?;
    let evolved_post = evolve(&post_state, hamiltonian, tau)?;
    let epsilon_after = metrics::precision(&pom, a, &evolved_post)?;
    let rows = outcome_rows(t, a, hamiltonian, tau, rho)?;
    let delta_sq: f64 = rows.iter().map(|r| r.probability * r.uncertainty * r.uncertainty).sum();
    let a_tau = heisenberg(a, hamiltonian, tau)?;
    let rhs = linalg::commutator_trace(&a.operator(), &a_tau, post_state.matrix())?.norm();
    let excluded_weight = family.excluded_weight();

    Ok(SqlReport {
        sigma,
        epsilon_after,
        delta_sq,
        rhs,
        condition_holds: sigma <= epsilon_after + CONDITION_SLACK,
        sql_holds: delta_sq >= rhs - SQL_SLACK,
        rows,
        excluded_weight,
        excluded_weight_flag: excluded_weight > 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TAU: f64 = 1.0;

    fn luders_z() -> Instrument {
        Instrument::luders(&Observable::pauli_z())
    }

    /// Measure σz, prepare the Bloch vector (cos δ, sin δ, 0) with δ = π/6.
    fn mp_pi_6() -> Instrument {
        let prepared = DensityState::bloch(std::f64::consts::FRAC_PI_2, std::f64::consts::PI / 6.0);
        Instrument::measure_prepare(&Observable::pauli_z(), &prepared).unwrap()
    }

    fn rotation() -> Hamiltonian {
        Hamiltonian::rotate_z_to_x(TAU, 1.0)
    }

    #[test]
    fn resolution_of_luders_vanishes() {
        let a = Observable::pauli_z();
        for rho in [
            DensityState::basis(2, 0),
            DensityState::maximally_mixed(2),
            DensityState::bloch(1.1, 0.4),
        ] {
            assert!(resolution(&luders_z(), &a, &rho).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn resolution_of_measure_prepare_is_sqrt_two() {
        let a = Observable::pauli_z();
        for rho in [DensityState::basis(2, 0), DensityState::maximally_mixed(2)] {
            let sigma = resolution(&mp_pi_6(), &a, &rho).unwrap();
            assert!((sigma * sigma - 2.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn resolution_matches_decomposition_for_unsharp() {
        let t = Instrument::unsharp(&Observable::pauli_z(), 0.5, true).unwrap();
        let a = Observable::pauli_z();
        let rho = DensityState::maximally_mixed(2);
        let sigma = resolution(&t, &a, &rho).unwrap();
        let parts = resolution_decomposition(&t, &a, &rho).unwrap();
        assert!((sigma * sigma - parts.total()).abs() <= 1e-10);
        assert!(parts.posterior_variance >= -1e-12 && parts.prediction_bias >= -1e-12);
    }

    #[test]
    fn decomposition_of_luders_is_zero_zero() {
        let parts = resolution_decomposition(
            &luders_z(),
            &Observable::pauli_z(),
            &DensityState::bloch(0.7, 0.2),
        )
        .unwrap();
        assert!(parts.posterior_variance <= 1e-10);
        assert!(parts.prediction_bias <= 1e-10);
    }

    #[test]
    fn decomposition_of_measure_prepare() {
        // posterior part ΔA[ψ₀]² = 1 (Bloch z-component 0), bias part 1
        let parts = resolution_decomposition(
            &mp_pi_6(),
            &Observable::pauli_z(),
            &DensityState::maximally_mixed(2),
        )
        .unwrap();
        assert!((parts.posterior_variance - 1.0).abs() <= 1e-10);
        assert!((parts.prediction_bias - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn decomposition_sums_on_random_instruments() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..30 {
            let dim = rng.random_range(2..=4);
            let t = crate::random::instrument(dim, rng.random_range(2..=3), 2, &mut rng);
            let a = crate::random::observable(dim, &mut rng);
            let rho = crate::random::density(dim, &mut rng);
            let sigma = resolution(&t, &a, &rho).unwrap();
            let parts = resolution_decomposition(&t, &a, &rho).unwrap();
            assert!((sigma * sigma - parts.total()).abs() <= 1e-9);
        }
    }

    #[test]
    fn predictor_of_luders_at_zero_time_is_the_outcome() {
        let h = rotation();
        let p = predictor(&luders_z(), &Observable::pauli_z(), &h, 0.0, &DensityState::maximally_mixed(2))
            .unwrap();
        for &(x, hx) in p.entries() {
            assert!((hx - x).abs() <= 1e-10);
        }
    }

    #[test]
    fn predictor_of_measure_prepare_is_constant_cos() {
        let p = predictor(
            &mp_pi_6(),
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::maximally_mixed(2),
        )
        .unwrap();
        let want = (std::f64::consts::PI / 6.0).cos();
        for &(_, hx) in p.entries() {
            assert!((hx - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn predictor_commuting_dynamics_keeps_outcome() {
        let h = Hamiltonian::new(linalg::pauli_z() * cr(0.8), 1.0).unwrap();
        let p = predictor(&luders_z(), &Observable::pauli_z(), &h, 2.2, &DensityState::maximally_mixed(2))
            .unwrap();
        for &(x, hx) in p.entries() {
            assert!((hx - x).abs() <= 1e-10);
        }
    }

    #[test]
    fn conditional_uncertainty_examples() {
        let a = Observable::pauli_z();
        // repeatable instrument, no evolution: exact prediction
        let d = conditional_uncertainty(&luders_z(), &a, &rotation(), 0.0, &DensityState::maximally_mixed(2), 1.0)
            .unwrap();
        assert!(d.abs() <= 1e-9);
        // measure-and-prepare with rotation: sin²(π/6) at each outcome
        for outcome in [-1.0, 1.0] {
            let d = conditional_uncertainty(
                &mp_pi_6(),
                &a,
                &rotation(),
                TAU,
                &DensityState::maximally_mixed(2),
                outcome,
            )
            .unwrap();
            assert!((d * d - 0.25).abs() <= 1e-10);
        }
    }

    #[test]
    fn conditional_uncertainty_variance_plus_bias_identity() {
        let a = Observable::pauli_z();
        let t = Instrument::unsharp(&a, 0.6, true).unwrap();
        let h = rotation();
        let rho = DensityState::bloch(1.0, 0.5);
        let family = t.posterior_family(&rho).unwrap();
        let p = predictor(&t, &a, &h, TAU, &rho).unwrap();
        for entry in family.entries() {
            let Some(posterior) = &entry.posterior else { continue };
            let d = conditional_uncertainty(&t, &a, &h, TAU, &rho, entry.outcome).unwrap();
            let evolved = evolve(posterior, &h, TAU).unwrap();
            let second = metrics::spread(&t.associated_pom(), &evolved).unwrap();
            let gap = second.mean - p.value_at(entry.outcome).unwrap();
            assert!((d * d - (second.variance + gap * gap)).abs() <= 1e-10);
        }
    }

    #[test]
    fn conditional_uncertainty_null_posterior_errors() {
        let err = conditional_uncertainty(
            &luders_z(),
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::basis(2, 0),
            -1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NullPosterior(_)));
    }

    #[test]
    fn predictive_uncertainty_examples() {
        let a = Observable::pauli_z();
        let mixed = DensityState::maximally_mixed(2);
        let d = predictive_uncertainty(&luders_z(), &a, &rotation(), 0.0, &mixed).unwrap();
        assert!(d.abs() <= 1e-9);
        let d = predictive_uncertainty(&mp_pi_6(), &a, &rotation(), TAU, &mixed).unwrap();
        assert!((d * d - 0.25).abs() <= 1e-10);
        let d = predictive_uncertainty(&luders_z(), &a, &rotation(), TAU, &DensityState::basis(2, 0))
            .unwrap();
        assert!((d * d - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn predictive_uncertainty_is_weighted_mean_of_conditionals() {
        let a = Observable::pauli_z();
        let t = Instrument::unsharp(&a, 0.7, true).unwrap();
        let h = rotation();
        let rho = DensityState::bloch(0.9, 1.3);
        let total = predictive_uncertainty(&t, &a, &h, TAU, &rho).unwrap();
        let family = t.posterior_family(&rho).unwrap();
        let mut acc = 0.0;
        for entry in family.entries() {
            if entry.posterior.is_some() {
                let d = conditional_uncertainty(&t, &a, &h, TAU, &rho, entry.outcome).unwrap();
                acc += entry.probability * d * d;
            }
        }
        assert!((total * total - acc).abs() <= 1e-10);
    }

    #[test]
    fn sql_report_luders_obeys_the_bound() {
        let report = sql_report(
            &luders_z(),
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::basis(2, 0),
        )
        .unwrap();
        assert!(report.sigma <= 1e-9);
        assert!(report.epsilon_after <= 1e-9);
        assert!(report.condition_holds);
        // the first measurement destroys the coherence feeding the bound
        assert!(report.rhs <= 1e-10);
        assert!((report.delta_sq - 1.0).abs() <= 1e-9);
        assert!(report.sql_holds && report.implication_holds());
    }

    #[test]
    fn sql_report_measure_prepare_beats_the_bound() {
        let report = sql_report(
            &mp_pi_6(),
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::basis(2, 0),
        )
        .unwrap();
        assert!((report.sigma - std::f64::consts::SQRT_2).abs() <= 1e-9);
        assert!(report.epsilon_after <= 1e-9);
        assert!(!report.condition_holds); // resolution above precision
        assert!((report.delta_sq - 0.25).abs() <= 1e-9);
        assert!((report.rhs - 1.0).abs() <= 1e-9);
        assert!(!report.sql_holds); // the limit is beaten
        assert!(report.implication_holds()); // vacuously: condition failed
        // consistency of the per-outcome table
        let table: f64 = report.rows.iter().map(|r| r.probability * r.uncertainty * r.uncertainty).sum();
        assert!((table - report.delta_sq).abs() <= 1e-9);
    }

    #[test]
    fn sql_report_rejects_biased_instruments() {
        let biased = Instrument::unsharp(&Observable::pauli_z(), 0.5, false).unwrap();
        let err = sql_report(
            &biased,
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::basis(2, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Biased { .. }));
    }

    #[test]
    fn sql_report_rejects_incompatible_instruments() {
        let t = Instrument::luders(&Observable::pauli_x());
        let err = sql_report(
            &t,
            &Observable::pauli_z(),
            &rotation(),
            TAU,
            &DensityState::basis(2, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotCompatible { .. } | Error::Biased { .. }));
    }

    #[test]
    fn unbiased_case_splits_delta_into_precision_and_variance() {
        // Δ[τ,ρ,x]² = ε_x² + ΔÂ(τ)[ρₓ]² when the associated POM is unbiased
        let a = Observable::pauli_z();
        let t = Instrument::unsharp(&a, 0.55, true).unwrap();
        let h = rotation();
        let rho = DensityState::bloch(1.2, 0.1);
        let report = sql_report(&t, &a, &h, TAU, &rho).unwrap();
        let family = t.posterior_family(&rho).unwrap();
        let pom = t.associated_pom();
        for (row, entry) in report.rows.iter().zip(family.entries()) {
            let posterior = entry.posterior.as_ref().unwrap();
            let evolved = evolve(posterior, &h, TAU).unwrap();
            let second = metrics::spread(&pom, &evolved).unwrap();
            // unbiasedness: second-measurement mean equals h(x)
            assert!((second.mean - row.prediction).abs() <= 1e-9);
            let eps = metrics::precision(&pom, &a, &evolved).unwrap();
            let a_tau_var = {
                let a_tau = heisenberg(&a, &h, TAU).unwrap();
                let spectral = Observable::spectral(&a_tau, tol::CLUSTER).unwrap();
                metrics::spread(&spectral.as_pom(), posterior).unwrap().variance
            };
            assert!((row.uncertainty.powi(2) - (eps * eps + a_tau_var)).abs() <= 1e-9);
        }
    }

    #[test]
    fn implication_suite_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut condition_count = 0;
        for _ in 0..40 {
            let dim = rng.random_range(2..=4);
            let (t, a) = crate::random::unbiased_compatible_instrument(dim, &mut rng);
            let h = Hamiltonian::new(crate::random::hermitian(dim, &mut rng), 1.0).unwrap();
            let rho = crate::random::density(dim, &mut rng);
            let report = sql_report(&t, &a, &h, 0.9, &rho).unwrap();
            if report.condition_holds {
                condition_count += 1;
                assert!(report.sql_holds, "bound failed under the condition");
            }
        }
        assert!(condition_count > 0, "suite never exercised the condition");
    }
}
