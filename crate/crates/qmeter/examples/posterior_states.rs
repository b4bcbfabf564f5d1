//! State reduction: instruments, posterior states, and sequential outcome
//! statistics, with and without free evolution between measurements.
//!
//! ```bash
//! cargo run -p qmeter --example posterior_states
//! ```

use qmeter::linalg::cr;
use qmeter::{
    sequential_distribution, timed_sequential_distribution, CVector, DensityState, Hamiltonian,
    Instrument, Observable,
};

fn main() -> qmeter::Result<()> {
    let z = Observable::pauli_z();
    let plus = DensityState::pure(&CVector::from_vec(vec![cr(1.0), cr(1.0)]))?;

    println!("Lüders σz instrument on ∣+⟩⟨+∣:");
    let luders = Instrument::luders(&z);
    for entry in luders.posterior_family(&plus)?.entries() {
        match &entry.posterior {
            Some(state) => println!(
                "  outcome {:+}: p = {:.3}, posterior ⟨σz⟩ = {:+.3}",
                entry.outcome,
                entry.probability,
                state.expectation(&qmeter::linalg::pauli_z())
            ),
            None => println!("  outcome {:+}: p = 0 (no posterior)", entry.outcome),
        }
    }

    // a measure-and-prepare instrument hands out the same state for every
    // outcome: maximal state disturbance with sharp statistics
    let prepared = DensityState::bloch(std::f64::consts::FRAC_PI_2, 0.0);
    let mp = Instrument::measure_prepare(&z, &prepared)?;
    println!("\nmeasure-and-prepare on ∣+⟩⟨+∣ (prepares ∣+x⟩):");
    for entry in mp.posterior_family(&plus)?.entries() {
        let state = entry.posterior.as_ref().expect("nonzero branch");
        println!(
            "  outcome {:+}: p = {:.3}, posterior ⟨σx⟩ = {:+.3}",
            entry.outcome,
            entry.probability,
            state.expectation(&qmeter::linalg::pauli_x())
        );
    }

    // repeating a projective measurement reproduces the first outcome
    println!("\ntwo back-to-back Lüders σz measurements on ∣+⟩⟨+∣:");
    let seq = sequential_distribution(&[&luders, &luders], &plus)?;
    for (tuple, p) in seq.labels().iter().zip(seq.probs()) {
        if *p > 1e-12 {
            println!("  outcomes {tuple:?}: p = {p:.3}");
        }
    }

    // free evolution between the measurements breaks the repeatability
    let tau = 1.0;
    let h = Hamiltonian::rotate_z_to_x(tau, 1.0);
    println!("\nsame pair with a z→x rotation over the gap, starting from ∣0⟩⟨0∣:");
    let timed = timed_sequential_distribution(
        &[&luders, &luders],
        &[0.0, tau],
        &h,
        &DensityState::basis(2, 0),
    )?;
    for (tuple, p) in timed.labels().iter().zip(timed.probs()) {
        if *p > 1e-12 {
            println!("  outcomes {tuple:?}: p = {p:.3}");
        }
    }
    Ok(())
}
