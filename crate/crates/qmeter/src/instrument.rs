//! Instruments: outcome-indexed completely positive maps in Kraus form.
//!
//! An instrument assigns to each outcome `xₖ` a completely positive map
//! `ρ ↦ Σⱼ Kₖⱼ ρ Kₖⱼ†`; the per-outcome maps sum to a trace-preserving
//! channel, `Σₖⱼ Kₖⱼ†Kₖⱼ = 1`. The instrument therefore carries both the
//! outcome statistics (through its associated POM) and the state reduction
//! (through posterior states).

use crate::distribution::SequenceDistribution;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{self, cr, tol, CMatrix, CVector};
use crate::observable::Observable;
use crate::pom::Pom;
use crate::state::DensityState;

/// An instrument (discrete CPOM): per-outcome Kraus operator sets.
#[derive(Clone, Debug)]
pub struct Instrument {
    outcomes: Vec<f64>,
    kraus_sets: Vec<Vec<CMatrix>>,
}

impl Instrument {
    /// Validates outcome labels (finite, distinct; sorted ascending) and the
    /// completeness relation `Σₖⱼ Kₖⱼ†Kₖⱼ = 1` within 1e−10.
    pub fn new(outcomes: Vec<f64>, kraus_sets: Vec<Vec<CMatrix>>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() != kraus_sets.len() {
            return Err(Error::InvalidInstrument(
                "outcome and Kraus-set counts must match and be nonzero".into(),
            ));
        }
        if outcomes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInstrument("outcome labels must be finite".into()));
        }
        let mut order: Vec<usize> = (0..outcomes.len()).collect();
        order.sort_by(|&a, &b| outcomes[a].total_cmp(&outcomes[b]));
        let outcomes: Vec<f64> = order.iter().map(|&k| outcomes[k]).collect();
        let kraus_sets: Vec<Vec<CMatrix>> =
            order.into_iter().map(|k| kraus_sets[k].clone()).collect();
        if outcomes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInstrument("outcome labels must be distinct".into()));
        }
        let dim = kraus_sets
            .first()
            .and_then(|set| set.first())
            .map(|k| k.nrows())
            .ok_or_else(|| Error::InvalidInstrument("empty Kraus set".into()))?;
        let mut total = CMatrix::zeros(dim, dim);
        for (k, set) in kraus_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidInstrument(format!("outcome {k} has no Kraus operators")));
            }
            for op in set {
                if op.nrows() != dim || op.ncols() != dim {
                    return Err(Error::InvalidInstrument(
                        "Kraus operators must be square with one shared dimension".into(),
                    ));
                }
                total += op.adjoint() * op;
            }
        }
        if (total - linalg::identity(dim)).norm() > tol::EQUALITY {
            return Err(Error::InvalidInstrument(
                "Kraus operators do not satisfy Σ K†K = 1".into(),
            ));
        }
        Ok(Instrument { outcomes, kraus_sets })
    }

    /// Projective (Lüders) instrument of a sharp observable.
    pub fn luders(observable: &Observable) -> Self {
        Instrument {
            outcomes: observable.outcomes().to_vec(),
            kraus_sets: observable.projectors().iter().map(|p| vec![p.clone()]).collect(),
        }
    }

    /// Unsharp instrument with square-root Kraus operators `Kₖ = √Eₖ` of the
    /// smeared POM from [`Pom::unsharp`].
    pub fn unsharp(observable: &Observable, eta: f64, scaled: bool) -> Result<Self> {
        let pom = Pom::unsharp(observable, eta, scaled)?;
        Self::from_pom_sqrt(&pom)
    }

    /// Instrument with Kraus operators `Kₖ = √Eₖ` for an arbitrary POM.
    pub fn from_pom_sqrt(pom: &Pom) -> Result<Self> {
        let kraus_sets: Vec<Vec<CMatrix>> = pom
            .effects()
            .iter()
            .map(|e| linalg::psd_sqrt(e, tol::EIGEN_CLAMP).map(|s| vec![s]))
            .collect::<Result<_>>()?;
        Instrument::new(pom.outcomes().to_vec(), kraus_sets)
    }

    /// Measure-and-prepare instrument: measure `observable` sharply, then
    /// hand out the fixed state `prepare` regardless of the outcome.
    ///
    /// For a pure prepared state |ψ₀⟩ and rank-one projectors this is the
    /// familiar `Kₓ = |ψ₀⟩⟨eₓ|` family.
    pub fn measure_prepare(observable: &Observable, prepare: &DensityState) -> Result<Self> {
        if observable.dim() != prepare.dim() {
            return Err(Error::DimensionMismatch(
                "measure_prepare: observable and prepared state dimensions differ".into(),
            ));
        }
        let (weights, basis) = linalg::eigh(prepare.matrix())?;
        let mut kraus_sets = Vec::with_capacity(observable.len());
        for projector in observable.projectors() {
            let mut set = Vec::new();
            for vec in projector_range_basis(projector)? {
                for (l, &w) in weights.iter().enumerate() {
                    if w > tol::P_FLOOR {
                        let prep = basis.column(l).into_owned();
                        set.push(linalg::outer(&prep, &vec) * cr(w.sqrt()));
                    }
                }
            }
            kraus_sets.push(set);
        }
        Instrument::new(observable.outcomes().to_vec(), kraus_sets)
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn kraus_sets(&self) -> &[Vec<CMatrix>] {
        &self.kraus_sets
    }

    pub fn dim(&self) -> usize {
        self.kraus_sets[0][0].nrows()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    fn outcome_index(&self, x: f64) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|&o| o == x)
            .ok_or(Error::UnknownOutcome(x))
    }

    /// Unnormalized operation for one outcome index applied to a raw matrix.
    pub(crate) fn apply_index(&self, k: usize, rho: &CMatrix) -> CMatrix {
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for op in &self.kraus_sets[k] {
            out += op * rho * op.adjoint();
        }
        out
    }

    /// State reduction for a subset of outcome labels: the unnormalized
    /// positive operator `Σ_{x∈subset} Σⱼ Kₓⱼ ρ Kₓⱼ†`. Its trace equals the
    /// probability of observing an outcome in the subset.
    pub fn apply(&self, subset: &[f64], rho: &DensityState) -> Result<CMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "instrument and state dimensions differ".into(),
            ));
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for &x in subset {
            let k = self.outcome_index(x)?;
            out += self.apply_index(k, rho.matrix());
        }
        Ok(out)
    }

    /// Total channel `ρ ↦ Σₖⱼ Kₖⱼ ρ Kₖⱼ†` (trace preserving).
    pub fn apply_all(&self, rho: &DensityState) -> Result<DensityState> {
        let total = self.apply(&self.outcomes.clone(), rho)?;
        DensityState::with_tol(&linalg::hermitize(&total) * cr(1.0 / total.trace().re), tol::EQUALITY)
    }

    /// The POM extracted from the instrument: effects `Eₖ = Σⱼ Kₖⱼ†Kₖⱼ`,
    /// same outcome labels. It determines the outcome statistics alone.
    pub fn associated_pom(&self) -> Pom {
        let dim = self.dim();
        let effects: Vec<CMatrix> = self
            .kraus_sets
            .iter()
            .map(|set| {
                let mut e = CMatrix::zeros(dim, dim);
                for op in set {
                    e += op.adjoint() * op;
                }
                linalg::hermitize(&e)
            })
            .collect();
        Pom::new(self.outcomes.clone(), effects)
            .expect("effects of a valid instrument form a POM")
    }

    /// Outcome probabilities and normalized posterior states.
    ///
    /// Outcomes with probability at or below the floor (1e−12) carry no
    /// posterior state and are excluded from downstream outcome averages.
    pub fn posterior_family(&self, rho: &DensityState) -> Result<PosteriorFamily> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "instrument and state dimensions differ".into(),
            ));
        }
        let probs = self.associated_pom().born(rho)?;
        let mut entries = Vec::with_capacity(self.len());
        for (k, (&x, &p)) in self.outcomes.iter().zip(probs.probs()).enumerate() {
            let posterior = if p > tol::P_FLOOR {
                let op = self.apply_index(k, rho.matrix());
                let normalized =
                    DensityState::with_tol(&linalg::hermitize(&op) * cr(1.0 / p), tol::EQUALITY)?;
                Some(normalized)
            } else {
                None
            };
            entries.push(PosteriorEntry { outcome: x, probability: p, posterior });
        }
        Ok(PosteriorFamily { entries })
    }

    /// Choi matrix `Σᵢⱼ Φₖ(|i⟩⟨j|) ⊗ |i⟩⟨j|` of the outcome-`k` map.
    pub fn choi(&self, k: usize) -> CMatrix {
        let dim = self.dim();
        let mut choi = CMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let unit = linalg::matrix_unit(dim, i, j);
                choi += linalg::tensor_product(&self.apply_index(k, &unit), &unit);
            }
        }
        choi
    }

    /// Largest per-outcome Choi-matrix distance (Frobenius) between two
    /// instruments over matching outcome grids. Errors if the grids differ.
    ///
    /// Choi matrices compare the maps themselves, independent of the chosen
    /// Kraus representations.
    pub fn choi_distance(&self, other: &Instrument) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("instrument dimensions differ".into()));
        }
        if self.outcomes.len() != other.outcomes.len()
            || self
                .outcomes
                .iter()
                .zip(&other.outcomes)
                .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(Error::DimensionMismatch("instrument outcome grids differ".into()));
        }
        let mut worst = 0.0f64;
        for k in 0..self.outcomes.len() {
            worst = worst.max((self.choi(k) - other.choi(k)).norm());
        }
        Ok(worst)
    }
}

/// Orthonormal basis of the range of a projector (eigenvectors with
/// eigenvalue ≈ 1).
pub(crate) fn projector_range_basis(projector: &CMatrix) -> Result<Vec<CVector>> {
    let (values, vectors) = linalg::eigh(projector)?;
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(k, _)| vectors.column(k).into_owned())
        .collect())
}

/// One row of a posterior family.
#[derive(Clone, Debug)]
pub struct PosteriorEntry {
    pub outcome: f64,
    pub probability: f64,
    /// `None` when the outcome probability is at or below the floor.
    pub posterior: Option<DensityState>,
}

/// Posterior states for a prior state and an instrument: the mixture
/// `Σₖ pₖ ρₖ` reproduces the unconditioned post-measurement state.
#[derive(Clone, Debug)]
pub struct PosteriorFamily {
    entries: Vec<PosteriorEntry>,
}

impl PosteriorFamily {
    pub fn entries(&self) -> &[PosteriorEntry] {
        &self.entries
    }

    /// Posterior at an exact outcome label; errors when it is `None`.
    pub fn posterior_at(&self, outcome: f64) -> Result<&DensityState> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.outcome == outcome)
            .ok_or(Error::UnknownOutcome(outcome))?;
        entry.posterior.as_ref().ok_or(Error::NullPosterior(outcome))
    }

    /// The mixture Σₖ pₖ ρₖ over outcomes that carry a posterior.
    pub fn mixture(&self) -> CMatrix {
        let dim = self
            .entries
            .iter()
            .find_map(|e| e.posterior.as_ref().map(|s| s.dim()))
            .unwrap_or(1);
        let mut out = CMatrix::zeros(dim, dim);
        for entry in &self.entries {
            if let Some(state) = &entry.posterior {
                out += state.matrix() * cr(entry.probability);
            }
        }
        out
    }

    /// Total probability mass of outcomes without a posterior state.
    pub fn excluded_weight(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.posterior.is_none())
            .map(|e| e.probability)
            .sum()
    }
}

/// Joint outcome statistics of a sequence of measurements applied
/// back-to-back: the probability of the tuple `(x₁, …, xₙ)` is the trace of
/// the composed per-outcome operations applied left to right.
pub fn sequential_distribution(
    instruments: &[&Instrument],
    rho: &DensityState,
) -> Result<SequenceDistribution> {
    let zero_times = vec![0.0; instruments.len()];
    let free = Hamiltonian::zero(rho.dim());
    timed_sequential_distribution(instruments, &zero_times, &free, rho)
}

/// Joint outcome statistics of measurements at given times under free
/// evolution between them: each per-outcome operation is preceded by the
/// unitary evolution over the elapsed interval (the first one from time 0).
///
/// Times must be non-negative and non-decreasing; equal times mean
/// back-to-back measurements.
pub fn timed_sequential_distribution(
    instruments: &[&Instrument],
    times: &[f64],
    hamiltonian: &Hamiltonian,
    rho: &DensityState,
) -> Result<SequenceDistribution> {
    if instruments.len() != times.len() {
        return Err(Error::DimensionMismatch(
            "instrument and time counts must match".into(),
        ));
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::DecreasingTimes);
    }
    let dim = rho.dim();
    for t in instruments {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch(
                "all instruments must act on the state space".into(),
            ));
        }
        if hamiltonian.dim() != dim {
            return Err(Error::DimensionMismatch(
                "Hamiltonian must act on the state space".into(),
            ));
        }
    }
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    let mut stack: Vec<(usize, Vec<f64>, CMatrix)> =
        vec![(0, Vec::new(), rho.matrix().clone())];
    while let Some((step, prefix, op)) = stack.pop() {
        if step == instruments.len() {
            labels.push(prefix);
            probs.push(op.trace().re);
            continue;
        }
        let gap = if step == 0 { times[0] } else { times[step] - times[step - 1] };
        let u = hamiltonian.evolution(gap)?;
        let evolved = &u * op * u.adjoint();
        let t = instruments[step];
        // reverse order keeps the emitted tuples in lexicographic order
        for k in (0..t.len()).rev() {
            let mut next = prefix.clone();
            next.push(t.outcomes()[k]);
            stack.push((step + 1, next, t.apply_index(k, &evolved)));
        }
    }
    SequenceDistribution::new(labels, probs)
}
