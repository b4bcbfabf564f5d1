//! Randomized search for instruments beating the standard quantum limit.
//!
//! ```bash
//! cargo run -p qmeter --example sql_search
//! ```

use qmeter::linalg::cr;
use qmeter::{sql_violation_search, Hamiltonian, Observable, SearchStatus};

fn main() -> qmeter::Result<()> {
    let z = Observable::pauli_z();
    let tau = 1.0;

    // a rotation that turns σz into σx keeps the bound's commutator alive
    let rotation = Hamiltonian::rotate_z_to_x(tau, 1.0);
    let outcome = sql_violation_search(2, &z, &rotation, tau, 400, 7)?;
    println!(
        "z→x rotation: evaluated {} candidates, {} with a usable bound",
        outcome.evaluated, outcome.valid
    );
    if let Some(best) = &outcome.best {
        println!("  best family     = {}", best.family);
        println!("  candidate index = {}", best.candidate_index);
        println!("  Δ²              = {:.6}", best.report.delta_sq);
        println!("  bound           = {:.6}", best.report.rhs);
        println!("  ratio Δ²/bound  = {:.6}  (below 1 beats the limit)", best.ratio);
        println!("  σ = {:.4}, ε_after = {:.4}", best.report.sigma, best.report.epsilon_after);
        println!(
            "  condition σ ≤ ε_after: {} — violating instruments must break it",
            best.report.condition_holds
        );
    }

    // commuting dynamics kill the bound for every candidate: nothing to beat
    let static_h = Hamiltonian::new(qmeter::linalg::pauli_z() * cr(0.7), 1.0)?;
    let outcome = sql_violation_search(2, &z, &static_h, tau, 60, 3)?;
    println!("\n[Ĥ, Â] = 0:");
    match outcome.status {
        SearchStatus::NoViolationPossible => {
            println!("  no violation possible — the bound vanishes for all candidates")
        }
        other => println!("  unexpected status {other:?}"),
    }
    Ok(())
}
