//! The precision ε[X‖A,ρ] of an approximate measurement and its
//! variance/bias decomposition.
//!
//! ```bash
//! cargo run -p qmeter --example precision_and_bias
//! ```

use qmeter::{DensityState, Observable, Pom};

fn main() -> qmeter::Result<()> {
    let z = Observable::pauli_z();
    let ket0 = DensityState::basis(2, 0);

    // ε vanishes exactly when the POM is the observable itself
    let eps = qmeter::precision(&z.as_pom(), &z, &ket0)?;
    println!("precision of sharp σz against itself: ε = {eps:.2e}");

    // unbiased unsharp measurement: ε² = ΔX² − ΔA²
    let unsharp = Pom::unsharp(&z, 0.5, true)?;
    let eps = qmeter::precision(&unsharp, &z, &ket0)?;
    let dx = qmeter::spread(&unsharp, &ket0)?.variance;
    let da = qmeter::spread(&z.as_pom(), &ket0)?.variance;
    println!("\nunsharp σz (η = 0.5, outcomes ±2) on ∣0⟩⟨0∣:");
    println!("  ε²          = {:.6}", eps * eps);
    println!("  ΔX² − ΔA²   = {:.6}  (unbiased identity)", dx - da);

    // biased variant (raw ±1 outcomes): the bias term is a floor for ε²
    let biased = Pom::unsharp(&z, 0.5, false)?;
    let mixed = DensityState::maximally_mixed(2);
    let eps = qmeter::precision(&biased, &z, &mixed)?;
    let parts = qmeter::precision_decomposition(&biased, &z, &mixed)?;
    println!("\nbiased unsharp σz (raw ±1 outcomes) on 1/2:");
    println!("  ε²                    = {:.6}", eps * eps);
    println!("  ΔX²                   = {:.6}", parts.pom_variance);
    println!("  ΔX̂² (operator)        = {:.6}", parts.operator_variance);
    println!("  bias  Tr[(Â−X̂)²ρ]     = {:.6}", parts.bias);
    println!("  recombined            = {:.6}", parts.squared_error());
    println!("  ε² ≥ bias: {}", eps * eps >= parts.bias - 1e-12);

    // incompatible pairs are rejected rather than silently symmetrized
    let err = qmeter::precision(&Observable::pauli_x().as_pom(), &z, &ket0).unwrap_err();
    println!("\nprecision of σx against σz: {err}");
    Ok(())
}
