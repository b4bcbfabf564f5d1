//! Sharp observables: real-labeled projection-valued measures.

use crate::error::{Error, Result};
use crate::linalg::{self, cr, tol, CMatrix};
use crate::pom::Pom;

/// A sharp observable: distinct real outcome labels with mutually orthogonal
/// projectors summing to the identity.
#[derive(Clone, Debug)]
pub struct Observable {
    outcomes: Vec<f64>,
    projectors: Vec<CMatrix>,
}

impl Observable {
    /// Validates labels (finite, distinct, sorted ascending on construction)
    /// and projectors (Hermitian, idempotent, orthogonal, complete).
    pub fn new(outcomes: Vec<f64>, projectors: Vec<CMatrix>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() != projectors.len() {
            return Err(Error::InvalidObservable(
                "outcome and projector counts must match and be nonzero".into(),
            ));
        }
        if outcomes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidObservable("outcome labels must be finite".into()));
        }
        let dim = projectors[0].nrows();
        let mut order: Vec<usize> = (0..outcomes.len()).collect();
        order.sort_by(|&a, &b| outcomes[a].total_cmp(&outcomes[b]));
        let outcomes: Vec<f64> = order.iter().map(|&k| outcomes[k]).collect();
        let projectors: Vec<CMatrix> = order.into_iter().map(|k| projectors[k].clone()).collect();
        if outcomes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidObservable("outcome labels must be distinct".into()));
        }
        let mut total = CMatrix::zeros(dim, dim);
        for (k, p) in projectors.iter().enumerate() {
            if p.nrows() != dim || p.ncols() != dim {
                return Err(Error::InvalidObservable("projectors must share one dimension".into()));
            }
            linalg::check_hermitian(p, tol::EQUALITY)
                .map_err(|e| Error::InvalidObservable(format!("projector {k}: {e}")))?;
            if (p * p - p).norm() > tol::EQUALITY {
                return Err(Error::InvalidObservable(format!("projector {k} is not idempotent")));
            }
            for (l, q) in projectors.iter().enumerate().skip(k + 1) {
                if (p * q).norm() > tol::EQUALITY {
                    return Err(Error::InvalidObservable(format!(
                        "projectors {k} and {l} are not orthogonal"
                    )));
                }
            }
            total += p;
        }
        if (total - linalg::identity(dim)).norm() > tol::EQUALITY {
            return Err(Error::InvalidObservable("projectors do not sum to the identity".into()));
        }
        Ok(Observable { outcomes, projectors })
    }

    /// Spectral decomposition of a Hermitian operator into an observable.
    ///
    /// Eigenvalues closer than `cluster_tol` merge into one outcome; the label
    /// is the cluster mean and the projector the sum of its eigenprojectors.
    pub fn spectral(h: &CMatrix, cluster_tol: f64) -> Result<Self> {
        let (values, vectors) = linalg::eigh(h)?;
        let dim = h.nrows();
        let mut outcomes = Vec::new();
        let mut projectors: Vec<CMatrix> = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let mut end = start + 1;
            while end < values.len() && values[end] - values[end - 1] <= cluster_tol {
                end += 1;
            }
            let label = values[start..end].iter().sum::<f64>() / (end - start) as f64;
            let mut projector = CMatrix::zeros(dim, dim);
            for k in start..end {
                let col = vectors.column(k).into_owned();
                projector += linalg::outer(&col, &col);
            }
            outcomes.push(label);
            projectors.push(linalg::hermitize(&projector));
            start = end;
        }
        Observable::new(outcomes, projectors)
    }

    /// σz with outcomes ±1.
    pub fn pauli_z() -> Self {
        Observable::new(
            vec![1.0, -1.0],
            vec![linalg::matrix_unit(2, 0, 0), linalg::matrix_unit(2, 1, 1)],
        )
        .expect("static construction")
    }

    /// σx with outcomes ±1.
    pub fn pauli_x() -> Self {
        Observable::spectral(&linalg::pauli_x(), tol::CLUSTER).expect("static construction")
    }

    /// σy with outcomes ±1.
    pub fn pauli_y() -> Self {
        Observable::spectral(&linalg::pauli_y(), tol::CLUSTER).expect("static construction")
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// The self-adjoint operator Â = Σ aₖ Pₖ.
    pub fn operator(&self) -> CMatrix {
        let dim = self.dim();
        let mut op = CMatrix::zeros(dim, dim);
        for (a, p) in self.outcomes.iter().zip(&self.projectors) {
            op += p * cr(*a);
        }
        op
    }

    /// This observable viewed as a POM (effects are the projectors).
    pub fn as_pom(&self) -> Pom {
        Pom::new(self.outcomes.clone(), self.projectors.clone())
            .expect("projectors form a valid POM")
    }
}

/// Spectral decomposition of a Hermitian operator; see [`Observable::spectral`].
pub fn spectral_pvm(h: &CMatrix, cluster_tol: f64) -> Result<Observable> {
    Observable::spectral(h, cluster_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, matrix_unit, pauli_x, pauli_z};

    #[test]
    fn spectral_of_pauli_z() {
        let obs = Observable::spectral(&pauli_z(), tol::CLUSTER).unwrap();
        assert_eq!(obs.outcomes(), &[-1.0, 1.0]);
        assert!((obs.projectors()[0].clone() - matrix_unit(2, 1, 1)).norm() < 1e-12);
        assert!((obs.projectors()[1].clone() - matrix_unit(2, 0, 0)).norm() < 1e-12);
    }

    #[test]
    fn spectral_of_pauli_x_matches_hadamard_basis() {
        // eigendecomposition oracle: |±⟩ = (|0⟩ ± |1⟩)/√2
        let obs = Observable::spectral(&pauli_x(), tol::CLUSTER).unwrap();
        assert_eq!(obs.outcomes(), &[-1.0, 1.0]);
        let plus = CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.5), cr(0.5), cr(0.5)]);
        let minus = CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(-0.5), cr(-0.5), cr(0.5)]);
        assert!((obs.projectors()[1].clone() - plus).norm() < 1e-12);
        assert!((obs.projectors()[0].clone() - minus).norm() < 1e-12);
    }

    #[test]
    fn spectral_clusters_degenerate_eigenvalues() {
        let obs = Observable::spectral(&identity(3), tol::CLUSTER).unwrap();
        assert_eq!(obs.len(), 1);
        assert!((obs.outcomes()[0] - 1.0).abs() < 1e-12);
        assert!((obs.projectors()[0].clone() - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn spectral_reconstructs_operator() {
        let h = linalg::hermitize(&CMatrix::from_row_slice(
            2,
            2,
            &[cr(0.3), Complex64::new(0.1, -0.4), Complex64::new(0.1, 0.4), cr(-1.2)],
        ));
        let obs = Observable::spectral(&h, tol::CLUSTER).unwrap();
        assert!((obs.operator() - h).norm() <= 2.0 * tol::CLUSTER);
    }

    #[test]
    fn rejects_non_projective_input() {
        let half = identity(2) * cr(0.5);
        assert!(Observable::new(vec![0.0, 1.0], vec![half.clone(), half]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn spectral_reconstruction_bound(seed in 0u64..256, dim in 1usize..6) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = crate::random::hermitian(dim, &mut rng);
            let obs = Observable::spectral(&h, tol::CLUSTER).unwrap();
            proptest::prop_assert!((obs.operator() - h).norm() <= dim as f64 * tol::CLUSTER);
            // projector completeness and orthogonality come with the type;
            // spectra must be preserved exactly up to clustering
            let total: CMatrix = obs.projectors().iter().sum();
            proptest::prop_assert!((total - identity(dim)).norm() <= 1e-10);
        }
    }

    use num_complex::Complex64;
}
