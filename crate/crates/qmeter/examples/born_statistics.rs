//! Outcome statistics of sharp and unsharp measurements.
//!
//! ```bash
//! cargo run -p qmeter --example born_statistics
//! ```

use qmeter::{DensityState, Observable, Pom};

fn print_distribution(name: &str, pom: &Pom, rho: &DensityState) -> qmeter::Result<()> {
    let dist = pom.born(rho)?;
    print!("{name}: ");
    for (x, p) in dist.outcomes().iter().zip(dist.probs()) {
        print!(" Pr[{x:+}] = {p:.4} ");
    }
    println!();
    Ok(())
}

fn main() -> qmeter::Result<()> {
    let z = Observable::pauli_z();
    let ket0 = DensityState::basis(2, 0);
    let mixed = DensityState::maximally_mixed(2);

    println!("sharp σz measurement");
    print_distribution("  on ∣0⟩⟨0∣ ", &z.as_pom(), &ket0)?;
    print_distribution("  on 1/2    ", &z.as_pom(), &mixed)?;

    // smear σz with sharpness η = 0.5; rescaled outcomes ±2 keep the
    // measurement unbiased (first moment operator = σz)
    let unsharp = Pom::unsharp(&z, 0.5, true)?;
    println!("\nunsharp σz, η = 0.5, outcomes ±2");
    print_distribution("  on ∣0⟩⟨0∣ ", &unsharp, &ket0)?;
    print_distribution("  on 1/2    ", &unsharp, &mixed)?;
    println!(
        "  unbiased: {}",
        qmeter::is_unbiased(&unsharp, &z)?
    );

    let s = qmeter::spread(&unsharp, &ket0)?;
    println!("  spread on ∣0⟩⟨0∣: mean = {:.4}, variance = {:.4}", s.mean, s.variance);

    // an arbitrary Hermitian matrix becomes an observable by spectral
    // decomposition
    let h = qmeter::linalg::pauli_x() + qmeter::linalg::pauli_z();
    let tilted = Observable::spectral(&h, 1e-8)?;
    println!("\nspectral observable of σx + σz: outcomes = {:?}", tilted.outcomes());
    print_distribution("  on ∣0⟩⟨0∣ ", &tilted.as_pom(), &ket0)?;
    Ok(())
}
