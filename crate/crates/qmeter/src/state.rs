//! Density operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, cr, tol, CMatrix, CVector};

/// A density operator ρ: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    /// Validates and wraps a density matrix with the default tolerance.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tol(matrix, tol::EQUALITY)
    }

    /// Validates Hermiticity, spectrum ≥ −tol, and unit trace within `tol`.
    pub fn with_tol(matrix: CMatrix, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and nonempty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        linalg::check_hermitian(&matrix, tol)
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        // store the Hermitian part so spectral operations stay well-posed
        // when the caller accepts a loose tolerance
        let matrix = linalg::hermitize(&matrix);
        let (values, _) = linalg::eigh(&matrix)?;
        if let Some(&min) = values.first() {
            if min < -tol {
                return Err(Error::InvalidState(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        let trace = matrix.trace();
        if (trace - cr(1.0)).norm() > tol {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        Ok(DensityState { matrix })
    }

    /// Pure state |ψ⟩⟨ψ|; the vector is normalized first.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm < 1e-12 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        let unit = psi / cr(norm);
        Ok(DensityState { matrix: linalg::outer(&unit, &unit) })
    }

    /// Basis state |k⟩⟨k| in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        DensityState { matrix: linalg::matrix_unit(dim, k, k) }
    }

    /// The maximally mixed state 1/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityState { matrix: linalg::identity(dim) * cr(1.0 / dim as f64) }
    }

    /// Qubit pure state from Bloch angles: θ from the +z axis, φ azimuthal.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let mut psi = CVector::zeros(2);
        psi[0] = cr((theta / 2.0).cos());
        psi[1] = Complex64::from_polar((theta / 2.0).sin(), phi);
        DensityState { matrix: linalg::outer(&psi, &psi) }
    }

    /// Normalizes an unnormalized positive operator, returning its trace and
    /// the normalized state. Used to condition on a measurement outcome.
    pub fn normalize(op: &CMatrix, tol: f64) -> Result<(f64, Self)> {
        let weight = op.trace().re;
        if weight <= 0.0 {
            return Err(Error::InvalidState(format!(
                "cannot normalize operator with trace {weight:.3e}"
            )));
        }
        let state = Self::with_tol(op * cr(1.0 / weight), tol)?;
        Ok((weight, state))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// PSD square root √ρ.
    pub fn sqrt(&self) -> CMatrix {
        linalg::psd_sqrt(&self.matrix, tol::EIGEN_CLAMP)
            .expect("validated density matrix has a PSD square root")
    }

    /// Expectation value Re Tr[op·ρ].
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        linalg::trace_product(op, &self.matrix).re
    }
}
