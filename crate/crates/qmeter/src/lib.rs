//! Finite-dimensional quantum measurement statistics.
//!
//! `qmeter` models measurements on finite-dimensional quantum systems in
//! full generality — not just projective readouts — and makes the
//! measurement-theoretic error quantities and their limit theorems
//! executable:
//!
//! - **States, observables, POMs**: density operators, sharp observables
//!   (projection-valued measures), and positive-operator-valued measures on
//!   finite real outcome grids ([`DensityState`], [`Observable`], [`Pom`]).
//! - **Instruments and schemes**: outcome-indexed completely positive maps
//!   in Kraus form, posterior states, sequential outcome statistics, and
//!   probe/coupling/meter measurement schemes with both directions of the
//!   correspondence: extraction ([`scheme_to_instrument`]) and realization
//!   ([`realize_instrument`]), plus Naimark dilation of POMs
//!   ([`naimark_dilate`]).
//! - **Error metrics**: precision (root-mean-square error against a
//!   compatible observable), unbiasedness, the variance/bias decomposition,
//!   and the Robertson and Holevo uncertainty bounds ([`metrics`]).
//! - **Joint measurements**: coexistent POM pairs via a joint outcome grid,
//!   noise operators of an interacting realization, and the strengthened
//!   joint uncertainty bounds ([`joint`]).
//! - **Repeated measurements**: resolution, mean-value prediction,
//!   predictive uncertainty, and the standard quantum limit
//!   `Δ[τ,ρ]² ≥ |Tr[[Â(0), Â(τ)] 𝐗(ℝ)ρ]|` with its resolution-vs-precision
//!   condition — including measure-and-prepare models that beat the limit
//!   when the condition fails ([`repeated`], [`search`]).
//!
//! Randomized verification suites for every implemented theorem live in
//! [`suites`]; config-driven batch execution for the `qmeter` binary lives
//! in [`scenario`].
//!
//! # Example
//!
//! ```
//! use qmeter::{DensityState, Hamiltonian, Instrument, Observable};
//!
//! // an unsharp σz instrument, unbiased by outcome rescaling
//! let z = Observable::pauli_z();
//! let t = Instrument::unsharp(&z, 0.5, true)?;
//!
//! // outcome statistics in ∣0⟩⟨0∣
//! let rho = DensityState::basis(2, 0);
//! let born = t.associated_pom().born(&rho)?;
//! assert!((born.prob_at(2.0)? - 0.75).abs() < 1e-12);
//!
//! // precision against σz: ε² = ΔX² − ΔA² for unbiased instruments
//! let eps = qmeter::precision(&t.associated_pom(), &z, &rho)?;
//! assert!((eps * eps - 3.0).abs() < 1e-10);
//!
//! // the standard-quantum-limit report under a z→x rotation
//! let h = Hamiltonian::rotate_z_to_x(1.0, 1.0);
//! let report = qmeter::sql_report(&t, &z, &h, 1.0, &rho)?;
//! assert!(report.implication_holds());
//! # Ok::<(), qmeter::Error>(())
//! ```
//!
//! The `examples/` directory walks through each capability; the `qmeter`
//! binary runs JSON scenario files, randomized theorem suites, and the
//! limit-violation search.

pub mod distribution;
pub mod error;
pub mod hamiltonian;
pub mod instrument;
pub mod joint;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod observable;
pub mod pom;
pub mod random;
pub mod repeated;
pub mod search;
pub mod scenario;
pub mod scheme;
pub mod state;
pub mod suites;

pub use distribution::{Distribution, JointDistribution, SequenceDistribution};
pub use error::{Error, Result};
pub use hamiltonian::{evolve, heisenberg, Hamiltonian};
pub use instrument::{
    sequential_distribution, timed_sequential_distribution, Instrument, PosteriorEntry,
    PosteriorFamily,
};
pub use joint::{joint_uncertainty_report, noise_operators, JointPom, JointUncertaintyReport, NoiseOperator};
pub use linalg::{CMatrix, CVector};
pub use metrics::{
    compatible_joint, diagonal_support_criteria, diagonal_support_test, holevo_check,
    is_unbiased, moment, precision, precision_decomposition, robertson_check, spread,
    BoundCheck, DiagonalSupport, PrecisionDecomposition, Spread,
};
pub use models::{build_model, describe_model, ModelSpec};
pub use observable::{spectral_pvm, Observable};
pub use search::{sql_violation_search, SearchBest, SearchOutcome, SearchStatus};
pub use pom::{born_distribution, Pom};
pub use scenario::{emit_report, parse_config, run_scenario, Report, ReportFormat, ScenarioConfig};
pub use scheme::{
    interacting_realization, naimark_dilate, realize_instrument, scheme_to_instrument,
    MeasurementScheme, NaimarkDilation,
};
pub use repeated::{
    conditional_uncertainty, predictive_uncertainty, predictor, resolution,
    resolution_decomposition, sql_report, Predictor, ResolutionDecomposition, SqlOutcomeRow,
    SqlReport,
};
pub use state::DensityState;
pub use suites::{run_suite, SuiteReport, SUITE_NAMES};
