//! Naimark dilation: every POM extends to a sharp observable on a larger
//! space, and hence has an interacting realization.
//!
//! ```bash
//! cargo run -p qmeter --example naimark_dilation
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qmeter::linalg::identity;
use qmeter::{interacting_realization, naimark_dilate, Observable, Pom, random};

fn main() -> qmeter::Result<()> {
    // dilate the unsharp σz POM: 2 outcomes on a qubit → 4-dim extension
    let pom = Pom::unsharp(&Observable::pauli_z(), 0.5, false)?;
    let dilation = naimark_dilate(&pom)?;
    let v = dilation.isometry.matrix();
    println!(
        "unsharp σz (η = 0.5): dilated to dimension {}",
        dilation.isometry.out_dim()
    );
    println!("  ‖V†V − 1‖ = {:.2e}", (v.adjoint() * v - identity(pom.dim())).norm());
    for (k, (compressed, effect)) in dilation
        .compressed_effects()
        .iter()
        .zip(pom.effects())
        .enumerate()
    {
        println!("  ‖V†P{k}V − E{k}‖ = {:.2e}", (compressed - effect).norm());
    }

    // the compressed sharp observable reproduces the POM statistics through
    // an actual probe-and-coupling scheme
    let scheme = interacting_realization(&pom, 11)?;
    let rho = qmeter::DensityState::bloch(0.9, 0.4);
    let direct = scheme.direct_probabilities(&rho)?;
    let born = pom.born(&rho)?;
    println!("\nscheme statistics vs POM statistics in a generic state:");
    for ((x, p_scheme), p_born) in pom.outcomes().iter().zip(&direct).zip(born.probs()) {
        println!("  outcome {x:+}: scheme {p_scheme:.6}  born {p_born:.6}");
    }

    // dilation residuals stay at machine precision across random POMs
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let dim = 2 + (rand::Rng::random_range(&mut rng, 0..2usize));
        let n = rand::Rng::random_range(&mut rng, 2..=4usize);
        let pom = random::pom(dim, n, &mut rng);
        let dilation = naimark_dilate(&pom)?;
        let v = dilation.isometry.matrix();
        worst = worst.max((v.adjoint() * v - identity(dim)).norm());
        for (compressed, effect) in dilation.compressed_effects().iter().zip(pom.effects()) {
            worst = worst.max((compressed - effect).norm());
        }
    }
    println!("\n200 random POMs (dims 2–3): worst dilation residual = {worst:.2e}");
    Ok(())
}
