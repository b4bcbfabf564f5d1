//! Named instrument families with documented closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::instrument::Instrument;
use crate::linalg::{self, CMatrix};
use crate::observable::Observable;
use crate::state::DensityState;

/// Descriptor of a named instrument family.
#[derive(Clone, Debug)]
pub enum ModelSpec {
    /// Projective instrument: `Kₖ = Pₖ`, outcomes `aₖ`.
    Luders { observable: Observable },
    /// Square-root instrument of the smeared POM
    /// `Eₖ = η·Pₖ + (1−η)/n`: `Kₖ = √Eₖ`, outcomes `aₖ/η` when `scaled`.
    Unsharp { observable: Observable, eta: f64, scaled: bool },
    /// Sharp measurement followed by preparation of a fixed state:
    /// `Kₓ = |ψ₀⟩⟨eₓ|` for pure `ψ₀`, outcomes `aₖ`.
    MeasurePrepare { observable: Observable, prepare: DensityState },
    /// Pointer coupling `Û = Σₖ Pₖ ⊗ Ŝ^{g·k}` with a fractional cyclic
    /// shift Ŝ on an n-dimensional pointer read out in the index basis;
    /// `g = 1` reduces to the projective instrument.
    VonNeumann { observable: Observable, strength: f64 },
}

/// Builds the instrument described by a [`ModelSpec`].
pub fn build_model(spec: &ModelSpec) -> Result<Instrument> {
    match spec {
        ModelSpec::Luders { observable } => Ok(Instrument::luders(observable)),
        ModelSpec::Unsharp { observable, eta, scaled } => {
            Instrument::unsharp(observable, *eta, *scaled)
        }
        ModelSpec::MeasurePrepare { observable, prepare } => {
            Instrument::measure_prepare(observable, prepare)
        }
        ModelSpec::VonNeumann { observable, strength } => {
            von_neumann(observable, *strength)
        }
    }
}

/// Fractional power `Ŝᵗ` of the cyclic shift on `Cⁿ`, through the discrete
/// Fourier transform: `Ŝᵗ = W·diag(e^{−2πi·j·t/n})·W†`.
pub fn fractional_shift(n: usize, t: f64) -> CMatrix {
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let w = CMatrix::from_fn(n, n, |a, j| {
        Complex64::from_polar(1.0 / (n as f64).sqrt(), tau * (a * j) as f64)
    });
    let phases = nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|j| Complex64::from_polar(1.0, -tau * j as f64 * t)),
    );
    &w * CMatrix::from_diagonal(&phases) * w.adjoint()
}

fn von_neumann(observable: &Observable, strength: f64) -> Result<Instrument> {
    if !(strength > 0.0 && strength <= 1.0) {
        return Err(Error::InvalidModel(format!(
            "coupling strength must be in (0, 1], got {strength}"
        )));
    }
    let n = observable.len();
    // a single-outcome observable still gets a 2-dim pointer; its only
    // controlled shift is Ŝ⁰ = 1, so the padded coupling stays unitary
    let probe = n.max(2);
    let mut coupling = CMatrix::zeros(observable.dim() * probe, observable.dim() * probe);
    for (k, p) in observable.projectors().iter().enumerate() {
        let shift = fractional_shift(probe, strength * k as f64);
        coupling += linalg::tensor_product(p, &shift);
    }
    let projectors: Vec<CMatrix> = (0..n)
        .map(|k| {
            let mut p = linalg::matrix_unit(probe, k, k);
            if k == 0 {
                for pad in n..probe {
                    p += linalg::matrix_unit(probe, pad, pad);
                }
            }
            p
        })
        .collect();
    let meter = Observable::new(observable.outcomes().to_vec(), projectors)?;
    let scheme = crate::scheme::MeasurementScheme::new(
        DensityState::basis(probe, 0),
        coupling,
        vec![meter],
    )?;
    scheme.to_instrument()
}

/// One-paragraph description of a named model family, for the CLI.
pub fn describe_model(family: &str) -> Option<&'static str> {
    match family {
        "luders" => Some(
            "luders: projective instrument of a sharp observable. Kraus operators are the \
             spectral projectors themselves, K_k = P_k, with outcomes a_k. Repeatable: the \
             posterior at outcome a_k is the normalized projection, and resolution vanishes.",
        ),
        "unsharp" => Some(
            "unsharp: square-root instrument of the smeared POM E_k = eta*P_k + (1-eta)/n. \
             Kraus operators K_k = sqrt(E_k). With scaled=true the outcomes a_k/eta make the \
             first moment reproduce the observable operator whenever the labels sum to zero \
             (unbiased); with scaled=false the raw labels shrink the first moment by eta. \
             Parameters: eta in (0,1], scaled (bool).",
        ),
        "measure_prepare" => Some(
            "measure_prepare: sharp measurement of the observable followed by preparation of \
             a fixed state. For a pure prepared state |psi0> the Kraus operators are \
             K_x = |psi0><e_x|. The associated POM is the projective one (unbiased and \
             compatible), posteriors are constant, and the resolution can exceed the \
             precision - the route to beating the standard quantum limit.",
        ),
        "von_neumann" => Some(
            "von_neumann: pointer-coupling scheme U = sum_k P_k (x) S^(g*k) with a fractional \
             cyclic shift S on an n-dimensional pointer prepared in |0>, read out in the index \
             basis with the observable's outcome labels. Strength g in (0,1]; g = 1 is the \
             projective (Luders) instrument, smaller g interpolates toward no measurement.",
        ),
        _ => None,
    }
}

/// The model family names accepted by [`describe_model`].
pub const MODEL_FAMILIES: [&str; 4] = ["luders", "unsharp", "measure_prepare", "von_neumann"];
