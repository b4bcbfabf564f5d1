//! The standard quantum limit for repeated measurements — and how a
//! measure-and-prepare instrument beats it.
//!
//! Two identical measurements separated by time τ. The observer predicts
//! the second outcome from the first by the mean-value strategy
//! h(x) = Tr[ρₓ Â(τ)]. Whenever the first instrument's resolution stays at
//! or below its post-measurement precision, the squared prediction error
//! obeys Δ[τ,ρ]² ≥ |Tr[[Â(0), Â(τ)] 𝐗(ℝ)ρ]|. An instrument whose posterior
//! states carry sharper information about the future value than the
//! recorded outcome does — resolution above precision — escapes the bound.
//!
//! ```bash
//! cargo run -p qmeter --example sql_violation
//! ```

use qmeter::{DensityState, Hamiltonian, Instrument, Observable};

fn show(name: &str, report: &qmeter::SqlReport) {
    println!("{name}:");
    println!("  resolution σ            = {:.6}", report.sigma);
    println!("  precision after τ       = {:.6}", report.epsilon_after);
    println!("  condition σ ≤ ε_after   : {}", report.condition_holds);
    println!("  predictive Δ²           = {:.6}", report.delta_sq);
    println!("  bound |Tr[[Â(0),Â(τ)]𝐗(ℝ)ρ]| = {:.6}", report.rhs);
    println!(
        "  Δ² ≥ bound              : {}{}",
        report.sql_holds,
        if report.sql_holds { "" } else { "   ← standard quantum limit beaten" }
    );
    println!();
}

fn main() -> qmeter::Result<()> {
    let z = Observable::pauli_z();
    let tau = 1.0;
    let rotation = Hamiltonian::rotate_z_to_x(tau, 1.0); // Â(τ) = σx
    let ket0 = DensityState::basis(2, 0);

    // a projective measurement satisfies the condition; its bound is 0
    // because the first measurement destroys the coherence feeding it
    let luders = Instrument::luders(&z);
    show("Lüders σz", &qmeter::sql_report(&luders, &z, &rotation, tau, &ket0)?);

    // the unsharp instrument also satisfies the condition and obeys the
    // bound comfortably
    let unsharp = Instrument::unsharp(&z, 0.5, true)?;
    show("unsharp σz (η = 0.5)", &qmeter::sql_report(&unsharp, &z, &rotation, tau, &ket0)?);

    // measure σz sharply but hand out the Bloch state at azimuth π/6: the
    // posterior knows the future value better than the outcome label, the
    // condition fails, and the prediction error drops below the bound
    let prepared = DensityState::bloch(std::f64::consts::FRAC_PI_2, std::f64::consts::PI / 6.0);
    let mp = Instrument::measure_prepare(&z, &prepared)?;
    let report = qmeter::sql_report(&mp, &z, &rotation, tau, &ket0)?;
    show("measure-and-prepare (azimuth π/6)", &report);

    println!("per-outcome table of the violating instrument:");
    for row in &report.rows {
        println!(
            "  outcome {:+}: p = {:.4}, prediction h = {:+.6}, Δ[τ,ρ,x] = {:.6}",
            row.outcome, row.probability, row.prediction, row.uncertainty
        );
    }
    Ok(())
}
