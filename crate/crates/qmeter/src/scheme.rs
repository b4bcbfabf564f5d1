//! Measurement schemes: probe + coupling + meters, and the constructions
//! connecting them to instruments and POMs.
//!
//! A scheme `[K, σ, Û, ⟨M₁,…,Mₙ⟩]` measures the system by coupling it to a
//! probe prepared in σ, evolving jointly under Û, and reading compatible
//! meter observables on the probe. Every scheme induces an instrument
//! (`scheme_to_instrument`); every instrument arises this way
//! (`realize_instrument`); every POM extends to a sharp observable on a
//! larger space (`naimark_dilate`) and hence has an interacting realization.

use crate::error::{Error, Result};
use crate::instrument::{projector_range_basis, Instrument};
use crate::linalg::{self, cr, tol, CMatrix, Isometry, Keep};
use crate::observable::Observable;
use crate::pom::Pom;
use crate::state::DensityState;

/// A measurement scheme: probe space dimension, probe state, coupling
/// unitary on system ⊗ probe, and a compatible list of meter observables on
/// the probe.
#[derive(Clone, Debug)]
pub struct MeasurementScheme {
    probe_state: DensityState,
    coupling: CMatrix,
    meters: Vec<Observable>,
}

impl MeasurementScheme {
    /// Validates the coupling (square, unitary, dimension a multiple of the
    /// probe dimension) and the meters (on the probe, pairwise commuting
    /// projectors within 1e−10).
    pub fn new(
        probe_state: DensityState,
        coupling: CMatrix,
        meters: Vec<Observable>,
    ) -> Result<Self> {
        let probe_dim = probe_state.dim();
        if coupling.nrows() != coupling.ncols()
            || coupling.nrows() % probe_dim != 0
            || coupling.nrows() == 0
        {
            return Err(Error::InvalidScheme(format!(
                "coupling is {}×{}, not square with dimension a multiple of probe dimension {probe_dim}",
                coupling.nrows(),
                coupling.ncols()
            )));
        }
        linalg::check_unitary(&coupling, tol::EQUALITY)
            .map_err(|e| Error::InvalidScheme(e.to_string()))?;
        if meters.is_empty() {
            return Err(Error::InvalidScheme("at least one meter observable is required".into()));
        }
        for (i, m) in meters.iter().enumerate() {
            if m.dim() != probe_dim {
                return Err(Error::InvalidScheme(format!(
                    "meter {i} acts on dimension {}, probe has dimension {probe_dim}",
                    m.dim()
                )));
            }
            for (j, other) in meters.iter().enumerate().skip(i + 1) {
                for p in m.projectors() {
                    for q in other.projectors() {
                        let deviation = (p * q - q * p).norm();
                        if deviation > tol::EQUALITY {
                            return Err(Error::NonCommutingMeters { i, j, deviation });
                        }
                    }
                }
            }
        }
        Ok(MeasurementScheme { probe_state, coupling, meters })
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_state.dim()
    }

    pub fn system_dim(&self) -> usize {
        self.coupling.nrows() / self.probe_dim()
    }

    pub fn probe_state(&self) -> &DensityState {
        &self.probe_state
    }

    pub fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    pub fn meters(&self) -> &[Observable] {
        &self.meters
    }

    /// The instrument induced by this scheme; see [`scheme_to_instrument`].
    pub fn to_instrument(&self) -> Result<Instrument> {
        scheme_to_instrument(self)
    }

    /// Outcome probabilities of the scheme evaluated directly from the
    /// defining partial-trace expression, without Kraus extraction:
    /// `pₖ = Tr[(1 ⊗ Mₖ) Û (ρ⊗σ) Û†]` over joint meter atoms.
    pub fn direct_probabilities(&self, rho: &DensityState) -> Result<Vec<f64>> {
        let d = self.system_dim();
        if rho.dim() != d {
            return Err(Error::DimensionMismatch(
                "scheme system dimension and state dimension differ".into(),
            ));
        }
        let joint = linalg::tensor_product(rho.matrix(), self.probe_state.matrix());
        let evolved = &self.coupling * joint * self.coupling.adjoint();
        let atoms = meter_atoms(&self.meters)?;
        atoms
            .iter()
            .map(|atom| {
                let lifted = linalg::tensor_product(&linalg::identity(d), &atom.projector);
                Ok(linalg::trace_product(&lifted, &evolved).re)
            })
            .collect()
    }
}

struct MeterAtom {
    /// Scalar outcome label of the induced instrument.
    label: f64,
    projector: CMatrix,
}

/// Joint projector atoms of a commuting meter list.
///
/// A single meter keeps its own labels. For several meters the joint atoms
/// are products of one projector per meter; the induced scalar labels are the
/// lexicographic ranks (0, 1, 2, …) of the surviving outcome tuples, since an
/// instrument carries one real label per outcome.
fn meter_atoms(meters: &[Observable]) -> Result<Vec<MeterAtom>> {
    if meters.len() == 1 {
        return Ok(meters[0]
            .outcomes()
            .iter()
            .zip(meters[0].projectors())
            .map(|(&label, p)| MeterAtom { label, projector: p.clone() })
            .collect());
    }
    let dim = meters[0].dim();
    let mut atoms = vec![MeterAtom { label: 0.0, projector: linalg::identity(dim) }];
    for meter in meters {
        let mut refined = Vec::with_capacity(atoms.len() * meter.len());
        for atom in &atoms {
            for p in meter.projectors() {
                refined.push(MeterAtom { label: 0.0, projector: &atom.projector * p });
            }
        }
        atoms = refined;
    }
    let mut kept: Vec<MeterAtom> = atoms
        .into_iter()
        .filter(|a| a.projector.norm() > 1e-12)
        .collect();
    for (rank, atom) in kept.iter_mut().enumerate() {
        atom.label = rank as f64;
        atom.projector = linalg::hermitize(&atom.projector);
    }
    Ok(kept)
}

/// Extracts the instrument of a measurement scheme.
///
/// The probe state is spectrally decomposed (rank truncation at 1e−12) and
/// each meter atom contributes Kraus operators
/// `K = √λℓ · (1 ⊗ ⟨m|) Û (1 ⊗ |φℓ⟩)` — one per probe eigenvector φℓ and
/// meter-range basis vector m.
pub fn scheme_to_instrument(scheme: &MeasurementScheme) -> Result<Instrument> {
    let d = scheme.system_dim();
    let p = scheme.probe_dim();
    let u = scheme.coupling();
    let (probe_values, probe_vectors) = linalg::eigh(scheme.probe_state().matrix())?;
    let atoms = meter_atoms(scheme.meters())?;
    let mut outcomes = Vec::with_capacity(atoms.len());
    let mut kraus_sets = Vec::with_capacity(atoms.len());
    for atom in &atoms {
        let mut set = Vec::new();
        for meter_vec in projector_range_basis(&atom.projector)? {
            for (l, &weight) in probe_values.iter().enumerate() {
                if weight <= 1e-12 {
                    continue;
                }
                let probe_vec = probe_vectors.column(l);
                let mut k = CMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..d {
                        let mut s = linalg::ZERO;
                        for q in 0..p {
                            let bra = meter_vec[q].conj();
                            if bra.norm_sqr() == 0.0 {
                                continue;
                            }
                            for r in 0..p {
                                s += bra * u[(i * p + q, j * p + r)] * probe_vec[r];
                            }
                        }
                        k[(i, j)] = s * cr(weight.sqrt());
                    }
                }
                if k.norm() > 1e-12 {
                    set.push(k);
                }
            }
        }
        if set.is_empty() {
            set.push(CMatrix::zeros(d, d));
        }
        outcomes.push(atom.label);
        kraus_sets.push(set);
    }
    Instrument::new(outcomes, kraus_sets)
}

/// Turns an isometry `V: Cᵈ → Cᵈ⊗Cᵖ` into a coupling unitary `Û` on the
/// joint space with `Û(ψ ⊗ e₀) = Vψ`, completing the remaining columns with
/// seeded pseudo-random orthonormal vectors.
pub(crate) fn coupling_from_isometry(
    v: &Isometry,
    system_dim: usize,
    probe_dim: usize,
    seed: u64,
) -> CMatrix {
    let total = system_dim * probe_dim;
    debug_assert_eq!(v.out_dim(), total);
    debug_assert_eq!(v.in_dim(), system_dim);
    let completed = linalg::complete_isometry(v, seed);
    let mut coupling = CMatrix::zeros(total, total);
    // column j·p hosts V's column j (the image of e_j ⊗ e₀)
    for j in 0..system_dim {
        coupling.set_column(j * probe_dim, &completed.column(j));
    }
    let mut spare = system_dim;
    for c in 0..total {
        if c % probe_dim == 0 && c / probe_dim < system_dim {
            continue;
        }
        coupling.set_column(c, &completed.column(spare));
        spare += 1;
    }
    coupling
}

/// Builds a measurement scheme realizing the given instrument.
///
/// The probe dimension is the total Kraus count (padded to at least 2), the
/// probe state is pure `|e₀⟩`, the coupling extends the isometry
/// `ψ ⊗ e₀ ↦ Σₖⱼ (Kₖⱼψ) ⊗ e₍ₖⱼ₎`, and the single meter reads the Kraus index
/// back as the instrument's outcome label. Deterministic per seed.
pub fn realize_instrument(instrument: &Instrument, seed: u64) -> MeasurementScheme {
    let d = instrument.dim();
    let total_kraus: usize = instrument.kraus_sets().iter().map(Vec::len).sum();
    let p = total_kraus.max(2);
    let mut w = CMatrix::zeros(d * p, d);
    let mut index = 0usize;
    let mut index_outcomes: Vec<usize> = Vec::with_capacity(total_kraus);
    for (k, set) in instrument.kraus_sets().iter().enumerate() {
        for op in set {
            for i in 0..d {
                for j in 0..d {
                    w[(i * p + index, j)] = op[(i, j)];
                }
            }
            index_outcomes.push(k);
            index += 1;
        }
    }
    let isometry = Isometry::with_tol(w, 10.0 * tol::EQUALITY)
        .expect("completeness relation of a valid instrument");
    let coupling = coupling_from_isometry(&isometry, d, p, seed);
    let mut projectors: Vec<CMatrix> =
        (0..instrument.len()).map(|_| CMatrix::zeros(p, p)).collect();
    for (idx, &k) in index_outcomes.iter().enumerate() {
        projectors[k] += linalg::matrix_unit(p, idx, idx);
    }
    // padding indices never receive amplitude from the embedded subspace;
    // fold them into the first outcome to keep the meter complete
    for idx in total_kraus..p {
        projectors[0] += linalg::matrix_unit(p, idx, idx);
    }
    let meter = Observable::new(instrument.outcomes().to_vec(), projectors)
        .expect("diagonal index projectors form an observable");
    MeasurementScheme::new(DensityState::basis(p, 0), coupling, vec![meter])
        .expect("constructed coupling is unitary")
}

/// A POM extended to a sharp observable on `system ⊗ Cⁿ`.
#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    /// `Vψ = Σₖ (√Eₖ ψ) ⊗ eₖ`.
    pub isometry: Isometry,
    /// Projectors `1 ⊗ |eₖ⟩⟨eₖ|` with the POM's outcome labels.
    pub observable: Observable,
}

impl NaimarkDilation {
    /// `V† Pₖ V` — reproduces the original effects.
    pub fn compressed_effects(&self) -> Vec<CMatrix> {
        self.observable
            .projectors()
            .iter()
            .map(|p| self.isometry.matrix().adjoint() * p * self.isometry.matrix())
            .collect()
    }
}

/// The dilation isometry `Vψ = Σₖ (√Eₖ ψ) ⊗ eₖ` of any effect list summing
/// to the identity; the probe index runs over the list.
pub(crate) fn dilation_isometry(effects: &[CMatrix]) -> Result<Isometry> {
    let d = effects[0].nrows();
    let n = effects.len();
    let mut v = CMatrix::zeros(d * n, d);
    for (k, effect) in effects.iter().enumerate() {
        let root = linalg::psd_sqrt(effect, tol::EIGEN_CLAMP)?;
        for i in 0..d {
            for j in 0..d {
                v[(i * n + k, j)] = root[(i, j)];
            }
        }
    }
    Isometry::with_tol(v, 10.0 * tol::EQUALITY)
}

/// Dilates a POM to a sharp observable: `V† (1⊗|eₖ⟩⟨eₖ|) V = Eₖ` with
/// `V†V = 1` on a space of dimension `dim·n`.
pub fn naimark_dilate(pom: &Pom) -> Result<NaimarkDilation> {
    let d = pom.dim();
    let n = pom.len();
    let isometry = dilation_isometry(pom.effects())?;
    let projectors: Vec<CMatrix> = (0..n)
        .map(|k| linalg::tensor_product(&linalg::identity(d), &linalg::matrix_unit(n, k, k)))
        .collect();
    let observable = Observable::new(pom.outcomes().to_vec(), projectors)?;
    Ok(NaimarkDilation { isometry, observable })
}

/// Interacting realization of a POM: a scheme whose meter statistics
/// reproduce `Tr[Eₖ ρ]` exactly, built from the Naimark dilation with the
/// probe carrying the outcome index.
pub fn interacting_realization(pom: &Pom, seed: u64) -> Result<MeasurementScheme> {
    let dilation = naimark_dilate(pom)?;
    let d = pom.dim();
    let n = pom.len();
    let coupling = coupling_from_isometry(&dilation.isometry, d, n, seed);
    let projectors: Vec<CMatrix> = (0..n).map(|k| linalg::matrix_unit(n, k, k)).collect();
    let meter = Observable::new(pom.outcomes().to_vec(), projectors)?;
    MeasurementScheme::new(DensityState::basis(n, 0), coupling, vec![meter])
}

/// Verifies Eq.-level agreement between a scheme and a state: the partial
/// trace over the probe of `(1⊗Mₖ)Û(ρ⊗σ)Û†` reproduces the per-outcome
/// operation of the extracted instrument.
pub fn reduced_outcome_operator(
    scheme: &MeasurementScheme,
    atom_projector: &CMatrix,
    rho: &DensityState,
) -> Result<CMatrix> {
    let d = scheme.system_dim();
    let p = scheme.probe_dim();
    let joint = linalg::tensor_product(rho.matrix(), scheme.probe_state().matrix());
    let evolved = scheme.coupling() * joint * scheme.coupling().adjoint();
    let lifted = linalg::tensor_product(&linalg::identity(d), atom_projector);
    linalg::partial_trace(&(lifted * evolved), d, p, Keep::First)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, identity, matrix_unit, unitarity_defect};
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cnot_system_controls_probe() -> CMatrix {
        let p0 = matrix_unit(2, 0, 0);
        let p1 = matrix_unit(2, 1, 1);
        let flip = linalg::pauli_x();
        linalg::tensor_product(&p0, &identity(2)) + linalg::tensor_product(&p1, &flip)
    }

    #[test]
    fn decoupled_probe_gives_constant_statistics() {
        let probe = DensityState::new(
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(0.3), cr(0.7)])),
        )
        .unwrap();
        let scheme =
            MeasurementScheme::new(probe, identity(4), vec![Observable::pauli_z()]).unwrap();
        let t = scheme.to_instrument().unwrap();
        for rho in [DensityState::basis(2, 0), DensityState::maximally_mixed(2)] {
            let family = t.posterior_family(&rho).unwrap();
            // outcome −1 reads probe |1⟩ (weight 0.7), outcome +1 reads |0⟩
            assert!((family.entries()[0].probability - 0.7).abs() < 1e-12);
            assert!((family.entries()[1].probability - 0.3).abs() < 1e-12);
            // maps are ρ ↦ pₖ·ρ
            let out = t.apply(&[t.outcomes()[0]], &rho).unwrap();
            assert!((out - rho.matrix() * cr(0.7)).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_coupling_reads_out_luders_z() {
        let scheme = MeasurementScheme::new(
            DensityState::basis(2, 0),
            cnot_system_controls_probe(),
            vec![Observable::pauli_z()],
        )
        .unwrap();
        let t = scheme.to_instrument().unwrap();
        let expected = Instrument::luders(&Observable::pauli_z());
        assert!(t.choi_distance(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn extraction_matches_direct_partial_trace_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let u = random::unitary(6, &mut rng);
            let probe = random::density(3, &mut rng);
            let meter = random::observable(3, &mut rng);
            let scheme = MeasurementScheme::new(probe, u, vec![meter]).unwrap();
            let t = scheme.to_instrument().unwrap();
            let rho = random::density(2, &mut rng);
            let direct = scheme.direct_probabilities(&rho).unwrap();
            let born = t.associated_pom().born(&rho).unwrap();
            assert!((direct.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            for (a, b) in direct.iter().zip(born.probs()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn non_commuting_meters_are_rejected() {
        let mx = Observable::pauli_x();
        let mz = Observable::pauli_z();
        let err = MeasurementScheme::new(
            DensityState::basis(2, 0),
            identity(4),
            vec![mz, mx],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonCommutingMeters { .. }));
    }

    #[test]
    fn two_commuting_meters_yield_product_atoms() {
        // two copies of the index observable on a 4-dim probe, split into
        // coarse (pairs) and fine (parity) readings
        let coarse = Observable::new(
            vec![0.0, 1.0],
            vec![
                matrix_unit(4, 0, 0) + matrix_unit(4, 1, 1),
                matrix_unit(4, 2, 2) + matrix_unit(4, 3, 3),
            ],
        )
        .unwrap();
        let fine = Observable::new(
            vec![0.0, 1.0],
            vec![
                matrix_unit(4, 0, 0) + matrix_unit(4, 2, 2),
                matrix_unit(4, 1, 1) + matrix_unit(4, 3, 3),
            ],
        )
        .unwrap();
        let scheme = MeasurementScheme::new(
            DensityState::basis(4, 0),
            identity(8),
            vec![coarse, fine],
        )
        .unwrap();
        let t = scheme.to_instrument().unwrap();
        assert_eq!(t.len(), 4); // all four joint atoms survive
        assert_eq!(t.outcomes(), &[0.0, 1.0, 2.0, 3.0]); // lexicographic ranks
        let family = t.posterior_family(&DensityState::basis(2, 0)).unwrap();
        assert!((family.entries()[0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realize_luders_round_trips() {
        let t = Instrument::luders(&Observable::pauli_z());
        let scheme = realize_instrument(&t, 17);
        let back = scheme.to_instrument().unwrap();
        assert!(back.choi_distance(&t).unwrap() <= 1e-9);
    }

    #[test]
    fn realize_measure_prepare_round_trips() {
        let psi0 = crate::CVector::from_vec(vec![cr(0.6), cr(0.8)]);
        let t = Instrument::measure_prepare(
            &Observable::pauli_z(),
            &DensityState::pure(&psi0).unwrap(),
        )
        .unwrap();
        let scheme = realize_instrument(&t, 23);
        let back = scheme.to_instrument().unwrap();
        assert!(back.choi_distance(&t).unwrap() <= 1e-9);
    }

    #[test]
    fn realize_random_instruments_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..25 {
            let dim = rng.random_range(2..=4);
            let n_outcomes = rng.random_range(1..=3);
            let t = random::instrument(dim, n_outcomes, 2, &mut rng);
            let scheme = realize_instrument(&t, trial);
            let back = scheme.to_instrument().unwrap();
            assert!(back.choi_distance(&t).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn naimark_dilation_of_projective_pom_is_exact() {
        let pom = Observable::pauli_z().as_pom();
        let dilation = naimark_dilate(&pom).unwrap();
        for (compressed, effect) in dilation.compressed_effects().iter().zip(pom.effects()) {
            assert!((compressed - effect).norm() <= 1e-12);
        }
    }

    #[test]
    fn naimark_dilation_of_unsharp_z() {
        let pom = Pom::unsharp(&Observable::pauli_z(), 0.5, false).unwrap();
        let dilation = naimark_dilate(&pom).unwrap();
        assert_eq!(dilation.isometry.out_dim(), 4);
        let v = dilation.isometry.matrix();
        assert!((v.adjoint() * v - identity(2)).norm() <= 1e-10);
        for (compressed, effect) in dilation.compressed_effects().iter().zip(pom.effects()) {
            assert!((compressed - effect).norm() <= 1e-10);
        }
    }

    #[test]
    fn naimark_dilation_of_random_poms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let dim = rng.random_range(2..=3);
            let n = rng.random_range(2..=4);
            let pom = random::pom(dim, n, &mut rng);
            let dilation = naimark_dilate(&pom).unwrap();
            let v = dilation.isometry.matrix();
            assert!((v.adjoint() * v - identity(dim)).norm() <= 1e-10);
            for (compressed, effect) in dilation.compressed_effects().iter().zip(pom.effects()) {
                assert!((compressed - effect).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn interacting_realization_reproduces_pom_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pom = random::pom(2, 3, &mut rng);
        let scheme = interacting_realization(&pom, 3).unwrap();
        let rho = random::density(2, &mut rng);
        let direct = scheme.direct_probabilities(&rho).unwrap();
        let born = pom.born(&rho).unwrap();
        for (a, b) in direct.iter().zip(born.probs()) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn coupling_columns_embed_the_isometry() {
        let t = Instrument::luders(&Observable::pauli_z());
        let scheme = realize_instrument(&t, 8);
        assert!(unitarity_defect(scheme.coupling()) <= 1e-12);
        // Û(e_j ⊗ e₀) must equal Σₖ (Kₖ e_j) ⊗ eₖ
        let p = scheme.probe_dim();
        for j in 0..2 {
            let embedded = scheme.coupling().column(j * p).into_owned();
            let mut expected = crate::CVector::zeros(2 * p);
            for (idx, set) in t.kraus_sets().iter().enumerate() {
                let col = &set[0] * basis_vector(2, j);
                for i in 0..2 {
                    expected[i * p + idx] += col[i];
                }
            }
            assert!((embedded - expected).norm() <= 1e-12);
        }
    }
}
