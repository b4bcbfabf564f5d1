//! Hamiltonians, unitary time evolution, and the Heisenberg picture.

use crate::error::{Error, Result};
use crate::linalg::{self, tol, CMatrix};
use crate::observable::Observable;
use crate::state::DensityState;

/// A Hamiltonian with an explicit action scale ħ (default 1).
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    matrix: CMatrix,
    hbar: f64,
}

impl Hamiltonian {
    pub fn new(matrix: CMatrix, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::InvalidModel(format!("hbar must be positive, got {hbar}")));
        }
        linalg::check_hermitian(&matrix, tol::EQUALITY)?;
        Ok(Hamiltonian { matrix, hbar })
    }

    /// The trivial Hamiltonian (free of dynamics).
    pub fn zero(dim: usize) -> Self {
        Hamiltonian { matrix: CMatrix::zeros(dim, dim), hbar: 1.0 }
    }

    /// Qubit Hamiltonian whose evolution over `tau` maps σz to σx in the
    /// Heisenberg picture: `Ûτ† σz Ûτ = σx`.
    pub fn rotate_z_to_x(tau: f64, hbar: f64) -> Self {
        let angle = -std::f64::consts::FRAC_PI_4 * hbar / tau;
        Hamiltonian { matrix: linalg::pauli_y() * linalg::cr(angle), hbar }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The evolution unitary `Ûₜ = exp(−i·t·Ĥ/ħ)`.
    pub fn evolution(&self, t: f64) -> Result<CMatrix> {
        linalg::unitary_exp(&self.matrix, t / self.hbar)
    }
}

/// Schrödinger-picture evolution `ρ(t) = Ûₜ ρ Ûₜ†`.
pub fn evolve(rho: &DensityState, hamiltonian: &Hamiltonian, t: f64) -> Result<DensityState> {
    if rho.dim() != hamiltonian.dim() {
        return Err(Error::DimensionMismatch(
            "state and Hamiltonian dimensions differ".into(),
        ));
    }
    let u = hamiltonian.evolution(t)?;
    DensityState::with_tol(linalg::hermitize(&(&u * rho.matrix() * u.adjoint())), tol::EQUALITY)
}

/// Heisenberg-picture observable operator `Â(τ) = Ûτ† Â(0) Ûτ`.
pub fn heisenberg(a: &Observable, hamiltonian: &Hamiltonian, tau: f64) -> Result<CMatrix> {
    if a.dim() != hamiltonian.dim() {
        return Err(Error::DimensionMismatch(
            "observable and Hamiltonian dimensions differ".into(),
        ));
    }
    let u = hamiltonian.evolution(tau)?;
    Ok(linalg::hermitize(&(u.adjoint() * a.operator() * u)))
}
