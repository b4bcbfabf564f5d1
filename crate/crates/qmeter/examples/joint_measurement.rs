//! Joint measurement of σx and σy: marginal POMs, the strengthened
//! uncertainty bounds, and the noise operators of an interacting
//! realization.
//!
//! ```bash
//! cargo run -p qmeter --example joint_measurement
//! ```

use qmeter::linalg::basis_vector;
use qmeter::{noise_operators, DensityState, JointPom, Observable};

fn main() -> qmeter::Result<()> {
    let a = Observable::pauli_x();
    let b = Observable::pauli_y();
    let ket0 = DensityState::basis(2, 0);

    // the balanced grid saturates both bounds at gamma = 1
    for gamma in [1.0, 1.5] {
        let joint = JointPom::balanced_xy(gamma)?;
        let (x, y) = joint.marginals()?;
        println!("balanced σx/σy joint measurement, γ = {gamma}:");
        println!("  grid = {:?} × {:?}", joint.x_outcomes(), joint.y_outcomes());
        println!(
            "  marginals unbiased: X {}  Y {}",
            qmeter::is_unbiased(&x, &a)?,
            qmeter::is_unbiased(&y, &b)?
        );
        let r = qmeter::joint_uncertainty_report(&joint, &a, &b, &ket0)?;
        println!("  ε_A = {:.4}, ε_B = {:.4}, ΔX = {:.4}, ΔY = {:.4}", r.epsilon_a, r.epsilon_b, r.delta_x, r.delta_y);
        println!("  c = |Tr[[Â,B̂]ρ]| = {:.4}", r.commutator);
        println!("  (1) ε_A·ε_B ≥ c/2: {} ({:.4} vs {:.4})", r.check1, r.epsilon_a * r.epsilon_b, r.commutator / 2.0);
        println!("  (2) ΔX·ΔY ≥ c:     {} ({:.4} vs {:.4})", r.check2, r.delta_x * r.delta_y, r.commutator);
        println!();
    }

    // build the interacting realization and inspect its noise operators:
    // for the saturating grid the noise variances equal the squared
    // precisions, which is how the bound is proved
    let joint = JointPom::balanced_xy(1.0)?;
    let scheme = joint.interacting_realization(7)?;
    println!(
        "interacting realization: probe dim = {}, meters = {}",
        scheme.probe_dim(),
        scheme.meters().len()
    );
    let noise = noise_operators(&scheme, &[&a, &b], &basis_vector(2, 0))?;
    for (label, n) in ["N̂₁ (σx)", "N̂₂ (σy)"].iter().zip(&noise) {
        println!("  {label}: mean = {:+.2e}, variance = {:.6}", n.mean, n.variance);
    }
    Ok(())
}
