//! Robertson and Holevo uncertainty bounds, checked numerically.
//!
//! ```bash
//! cargo run -p qmeter --example uncertainty_bounds
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmeter::{random, DensityState, Observable};

fn main() -> qmeter::Result<()> {
    // σx vs σy in ∣0⟩⟨0∣ saturates the bound: 1·1 = ½·|⟨[σx,σy]⟩| = 1
    let ket0 = DensityState::basis(2, 0);
    let check = qmeter::robertson_check(&Observable::pauli_x(), &Observable::pauli_y(), &ket0)?;
    println!("Robertson, σx vs σy in ∣0⟩⟨0∣:");
    println!("  ΔA·ΔB = {:.6}, ½|Tr[[Â,B̂]ρ]| = {:.6}, holds = {}", check.lhs, check.rhs, check.holds);

    // the POM extension covers unsharp measurements too
    let x = qmeter::Pom::unsharp(&Observable::pauli_x(), 0.7, true)?;
    let y = qmeter::Pom::unsharp(&Observable::pauli_y(), 0.7, true)?;
    let check = qmeter::holevo_check(&x, &y, &ket0)?;
    println!("\nHolevo, unsharp σx vs unsharp σy (η = 0.7) in ∣0⟩⟨0∣:");
    println!("  ΔX·ΔY = {:.6}, ½|Tr[[X̂,Ŷ]ρ]| = {:.6}, holds = {}", check.lhs, check.rhs, check.holds);

    // random sweep: the bounds never fail
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 2000;
    let mut closest = f64::INFINITY;
    for _ in 0..trials {
        let dim = rng.random_range(2..=6);
        let a = random::observable(dim, &mut rng);
        let b = random::observable(dim, &mut rng);
        let rho = random::density(dim, &mut rng);
        let check = qmeter::robertson_check(&a, &b, &rho)?;
        assert!(check.holds);
        if check.rhs > 1e-6 {
            closest = closest.min(check.lhs - check.rhs);
        }
    }
    println!("\n{trials} random Robertson trials: all hold, tightest slack = {closest:.3e}");

    // the two named suites are also available through the library
    for name in ["robertson", "holevo"] {
        let report = qmeter::run_suite(name, 500, 42)?;
        println!(
            "suite {:12} trials = {:4}  violations = {}  pass = {}",
            report.name, report.trials, report.violations, report.pass
        );
    }
    Ok(())
}
