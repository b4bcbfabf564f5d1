//! Randomized search for instruments beating the standard quantum limit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::instrument::Instrument;
use crate::linalg::{self, tol, CMatrix};
use crate::observable::Observable;
use crate::pom::Pom;
use crate::random;
use crate::repeated::{sql_report, SqlReport};
use crate::state::DensityState;

/// How a search run concluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// A candidate with nonzero bound was scored; see the best entry.
    Found,
    /// Every candidate had a vanishing bound (commuting dynamics): nothing
    /// can violate a zero right-hand side.
    NoViolationPossible,
    /// Budget exhausted without a single admissible candidate.
    NoValidCandidate,
}

/// The best candidate found by the search.
#[derive(Clone, Debug)]
pub struct SearchBest {
    pub instrument: Instrument,
    /// Prior state the candidate was scored in.
    pub state: DensityState,
    pub report: SqlReport,
    /// Δ[τ,ρ]² / rhs — below 1 the standard quantum limit is beaten.
    pub ratio: f64,
    pub candidate_index: usize,
    pub family: &'static str,
}

/// Outcome of [`sql_violation_search`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub best: Option<SearchBest>,
    /// Candidates evaluated.
    pub evaluated: usize,
    /// Candidates that passed the admissibility checks with a usable bound.
    pub valid: usize,
}

/// Randomized search over measure-and-prepare and left-rotated square-root
/// instruments, minimizing the violation ratio Δ²/rhs subject to the
/// unbiased-compatibility precondition and `rhs > 1e−9`.
///
/// Candidate generation and scoring are deterministic per `(budget, seed)`;
/// ties keep the earlier candidate.
pub fn sql_violation_search(
    dim: usize,
    a: &Observable,
    hamiltonian: &Hamiltonian,
    tau: f64,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if a.dim() != dim || hamiltonian.dim() != dim {
        return Err(Error::DimensionMismatch(
            "observable and Hamiltonian must act on the search dimension".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<SearchBest> = None;
    let mut evaluated = 0usize;
    let mut valid = 0usize;
    for index in 0..budget {
        let (instrument, family) = match index % 2 {
            0 => (measure_prepare_candidate(a, &mut rng), "measure_prepare"),
            _ => match rotated_root_candidate(a, &mut rng) {
                Some(t) => (t, "rotated_sqrt"),
                None => continue,
            },
        };
        let state = if index % 4 < 2 {
            DensityState::maximally_mixed(dim)
        } else {
            random::density(dim, &mut rng)
        };
        evaluated += 1;
        let Ok(report) = sql_report(&instrument, a, hamiltonian, tau, &state) else {
            continue;
        };
        if report.rhs <= 1e-9 {
            continue;
        }
        valid += 1;
        let ratio = report.delta_sq / report.rhs;
        let better = best.as_ref().is_none_or(|b| ratio < b.ratio);
        if better {
            best = Some(SearchBest {
                instrument,
                state,
                report,
                ratio,
                candidate_index: index,
                family,
            });
        }
    }
    let status = if best.is_some() {
        SearchStatus::Found
    } else if evaluated > 0 {
        SearchStatus::NoViolationPossible
    } else {
        SearchStatus::NoValidCandidate
    };
    Ok(SearchOutcome { status, best, evaluated, valid })
}

/// Measure `a` sharply and hand out a random pure state. The associated POM
/// is projective, hence unbiased and compatible by construction.
fn measure_prepare_candidate(a: &Observable, rng: &mut impl Rng) -> Instrument {
    loop {
        let prepared = random::pure(a.dim(), rng);
        if let Ok(t) = Instrument::measure_prepare(a, &prepared) {
            return t;
        }
    }
}

/// Square-root instrument of an unsharp smearing of `a` with each Kraus
/// operator rotated from the left by a random unitary, then polar-normalized
/// back onto the completeness constraint. Left rotations leave `K†K` — and
/// hence the associated POM — unchanged, so unbiased compatibility survives.
fn rotated_root_candidate(a: &Observable, rng: &mut impl Rng) -> Option<Instrument> {
    if a.outcomes().iter().sum::<f64>().abs() > 1e-9 {
        // rescaled unsharp labels are only unbiased for zero-sum labels
        return None;
    }
    let eta = 0.25 + 0.75 * rng.random::<f64>();
    let pom = Pom::unsharp(a, eta, true).ok()?;
    let dim = a.dim();
    let raw: Vec<Vec<CMatrix>> = pom
        .effects()
        .iter()
        .map(|e| {
            let root = linalg::psd_sqrt(e, tol::EIGEN_CLAMP).expect("PSD effect");
            vec![random::unitary(dim, rng) * root]
        })
        .collect();
    // polar re-normalization guards against numerical drift
    let mut total = CMatrix::zeros(dim, dim);
    for set in &raw {
        for k in set {
            total += k.adjoint() * k;
        }
    }
    let whiten = linalg::psd_inv_sqrt(&total, tol::EIGEN_CLAMP, 1e-9).ok()?;
    let kraus_sets: Vec<Vec<CMatrix>> =
        raw.into_iter().map(|set| set.into_iter().map(|k| k * &whiten).collect()).collect();
    Instrument::new(pom.outcomes().to_vec(), kraus_sets).ok()
}
