//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmeter::linalg::{self, trace_product};
use qmeter::{
    random, suites, DensityState, Hamiltonian, Instrument, JointPom, Observable, Pom,
};

fn pass(line: &str) {
    println!("[acceptance] {line}: PASS");
}

/// Precision identity for the unbiased unsharp fixture: the direct
/// grid summation of the squared error agrees with the variance-difference
/// route, both equal to 3.
#[test]
fn c01_precision_identity() {
    let z = Observable::pauli_z();
    let x = Pom::unsharp(&z, 0.5, true).unwrap();
    let rho = DensityState::basis(2, 0);

    // independent oracle: raw grid summation of ∬(x−a)²Tr[X(dx)A(da)ρ]
    let mut direct = 0.0;
    for (xi, e) in x.outcomes().iter().zip(x.effects()) {
        for (ai, p) in z.outcomes().iter().zip(z.projectors()) {
            let mass = trace_product(&(e * p), rho.matrix()).re;
            direct += (xi - ai) * (xi - ai) * mass;
        }
    }
    assert!((direct - 3.0).abs() <= 1e-10, "direct ε² = {direct}");

    // implementation route and the variance-difference route
    let eps = qmeter::precision(&x, &z, &rho).unwrap();
    let dx2 = qmeter::spread(&x, &rho).unwrap().variance;
    let da2 = qmeter::spread(&z.as_pom(), &rho).unwrap().variance;
    let via_variances = dx2 - da2;
    assert!((eps * eps - direct).abs() <= 1e-10);
    assert!((via_variances - 3.0).abs() <= 1e-10);
    assert!((eps * eps - via_variances).abs() <= 1e-10);
    pass("C1 precision identity: eps^2 = 3 by grid sum and by variance difference (<= 1e-10)");
}

/// Joint-measurement bounds saturate on the balanced σx/σy grid in ∣0⟩⟨0∣.
#[test]
fn c02_joint_measurement_bounds() {
    let joint = JointPom::balanced_xy(1.0).unwrap();
    let report = qmeter::joint_uncertainty_report(
        &joint,
        &Observable::pauli_x(),
        &Observable::pauli_y(),
        &DensityState::basis(2, 0),
    )
    .unwrap();
    assert!((report.epsilon_a - 1.0).abs() <= 1e-9);
    assert!((report.epsilon_b - 1.0).abs() <= 1e-9);
    assert!((report.delta_x - std::f64::consts::SQRT_2).abs() <= 1e-9);
    assert!((report.delta_y - std::f64::consts::SQRT_2).abs() <= 1e-9);
    assert!((report.commutator - 2.0).abs() <= 1e-9);
    assert!(report.check1 && report.check2);
    assert!((report.epsilon_a * report.epsilon_b - report.commutator / 2.0).abs() <= 1e-9);
    assert!((report.delta_x * report.delta_y - report.commutator).abs() <= 1e-9);
    pass("C2 joint bounds: eps_A = eps_B = 1, dX = dY = sqrt(2), c = 2, both saturated (<= 1e-9)");
}

/// The measure-and-prepare fixture violates the resolution-vs-precision
/// condition and beats the standard quantum limit.
#[test]
fn c03_sql_violation() {
    let z = Observable::pauli_z();
    let prepared =
        DensityState::bloch(std::f64::consts::FRAC_PI_2, std::f64::consts::PI / 6.0);
    let t = Instrument::measure_prepare(&z, &prepared).unwrap();
    let tau = 1.0;
    let h = Hamiltonian::rotate_z_to_x(tau, 1.0);
    let report = qmeter::sql_report(&t, &z, &h, tau, &DensityState::basis(2, 0)).unwrap();
    assert!((report.sigma - std::f64::consts::SQRT_2).abs() <= 1e-9);
    assert!(report.epsilon_after.abs() <= 1e-9);
    assert!(!report.condition_holds);
    assert!((report.delta_sq - 0.25).abs() <= 1e-9);
    assert!((report.rhs - 1.0).abs() <= 1e-9);
    assert!(report.delta_sq < report.rhs);
    assert!(!report.sql_holds);
    pass("C3 SQL violation: sigma = sqrt(2), eps_after = 0, delta^2 = 0.25 < rhs = 1 (<= 1e-9)");
}

/// Over 200 random unbiased-compatible instruments, every one whose
/// resolution stays at or below its post-measurement precision obeys the
/// bound with slack 1e−9.
#[test]
fn c04_sql_implication_suite() {
    let started = Instant::now();
    let report = suites::sql_implication_suite(200, 20240);
    let elapsed = started.elapsed();
    assert_eq!(report.trials, 200);
    assert!(report.conditioned > 0, "the condition never held");
    assert_eq!(report.violations, 0, "bound failed under the condition");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(&format!(
        "C4 SQL implication: {}/{} conditioned trials, 0 violations in {:.1}s",
        report.conditioned,
        report.trials,
        elapsed.as_secs_f64()
    ));
}

/// 100 random instruments round-trip through realization and extraction
/// with per-outcome Choi distance at most 1e−9.
#[test]
fn c05_realization_round_trip() {
    let started = Instant::now();
    let report = suites::realization_roundtrip_suite(100, 555);
    let elapsed = started.elapsed();
    assert_eq!(report.trials, 100);
    assert_eq!(report.violations, 0, "worst margin {}", report.worst_margin);
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(&format!(
        "C5 realization round-trip: 100 instruments, worst Choi residual {:.2e}, {:.1}s",
        1e-9 - report.worst_margin,
        elapsed.as_secs_f64()
    ));
}

/// 200 random POMs dilate with `V†V = 1` and `V†PₖV = Eₖ` within 1e−10.
#[test]
fn c06_naimark_dilation() {
    let report = suites::naimark_suite(200, 909);
    assert_eq!(report.trials, 200);
    assert_eq!(report.violations, 0, "worst margin {}", report.worst_margin);
    pass(&format!(
        "C6 Naimark dilation: 200 POMs, worst residual {:.2e} (<= 1e-10)",
        1e-10 - report.worst_margin
    ));
}

/// 1000 random trials of each uncertainty bound with zero violations, plus
/// the exactly saturating case.
#[test]
fn c07_robertson_holevo_suites() {
    let robertson = suites::robertson_suite(1000, 77);
    assert_eq!(robertson.violations, 0);
    let holevo = suites::holevo_suite(1000, 78);
    assert_eq!(holevo.violations, 0);

    let ket0 = DensityState::basis(2, 0);
    let check =
        qmeter::robertson_check(&Observable::pauli_x(), &Observable::pauli_y(), &ket0).unwrap();
    assert!((check.lhs - 1.0).abs() <= 1e-10 && (check.rhs - 1.0).abs() <= 1e-10);
    let check = qmeter::holevo_check(
        &Observable::pauli_x().as_pom(),
        &Observable::pauli_y().as_pom(),
        &ket0,
    )
    .unwrap();
    assert!((check.lhs - 1.0).abs() <= 1e-10 && (check.rhs - 1.0).abs() <= 1e-10);
    pass("C7 Robertson/Holevo: 1000+1000 random trials, 0 violations; sigma_x/sigma_y/|0> saturates at 1");
}

/// Posterior mixing and the resolution decomposition hold across the same
/// instrument pools criteria 4 and 5 draw from.
#[test]
fn c08_posterior_and_resolution_consistency() {
    // pool of criterion 4: unbiased-compatible instruments
    let mut rng = ChaCha8Rng::seed_from_u64(20240);
    for _ in 0..200 {
        let dim = rng.random_range(2..=4);
        let (t, a) = random::unbiased_compatible_instrument(dim, &mut rng);
        let rho = random::density(dim, &mut rng);
        check_mixing_and_decomposition(&t, &a, &rho);
    }
    // pool of criterion 5: unconstrained random instruments
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    for _ in 0..100 {
        let dim = rng.random_range(2..=4);
        let n_outcomes = rng.random_range(1..=3);
        let t = random::instrument(dim, n_outcomes, 2, &mut rng);
        let a = random::observable(dim, &mut rng);
        let rho = random::density(dim, &mut rng);
        check_mixing_and_decomposition(&t, &a, &rho);
    }
    pass("C8 posterior mixing <= 1e-9 and resolution decomposition <= 1e-9 across both pools");
}

fn check_mixing_and_decomposition(t: &Instrument, a: &Observable, rho: &DensityState) {
    let family = t.posterior_family(rho).unwrap();
    let total = t.apply(t.outcomes(), rho).unwrap();
    assert!((family.mixture() - total).norm() <= 1e-9, "mixing identity failed");
    let sigma = qmeter::resolution(t, a, rho).unwrap();
    let parts = qmeter::resolution_decomposition(t, a, rho).unwrap();
    assert!(parts.posterior_variance >= -1e-12 && parts.prediction_bias >= -1e-12);
    assert!((sigma * sigma - parts.total()).abs() <= 1e-9, "decomposition sum failed");
}

/// The two diagonal-support criteria agree on 100 random grid measures,
/// half diagonal-supported by construction.
#[test]
fn c09_diagonal_support_equivalence() {
    let report = suites::diagonal_support_suite(100, 31);
    assert_eq!(report.trials, 100);
    assert_eq!(report.violations, 0);
    pass("C9 diagonal-support criteria agree on 100/100 random grid measures");
}

/// Running the binary twice on the same config and seed produces
/// byte-identical JSON.
#[test]
fn c10_cli_determinism() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/sql_scenario.json");
    let run = || {
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_qmeter"))
            .args(["run", "--config", config, "--format", "json"])
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
        output.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "reports differ between runs");
    // sanity: the fixture carries the violation numbers
    let parsed: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert!((parsed["scalars"]["delta_sq"].as_f64().unwrap() - 0.25).abs() <= 1e-9);
    assert_eq!(parsed["flags"]["sql_holds"], serde_json::Value::Bool(false));
    pass("C10 determinism: byte-identical JSON across two qmeter runs");
}

/// The acceptance-relevant randomized suites are all reachable through the
/// public suite runner used by `qmeter verify`.
#[test]
fn named_suites_cover_the_criteria() {
    for name in ["sql_implication", "realization_roundtrip", "naimark", "robertson", "holevo", "posterior_mixing", "resolution_decomposition", "diagonal_support"] {
        let report = qmeter::run_suite(name, 30, 1).unwrap();
        assert!(report.pass, "{name} failed");
    }
    // auxiliary invariant: psd_sqrt multiply-back at the acceptance scale
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let g = random::gaussian_matrix(4, 4, &mut rng);
        let p = g.adjoint() * &g;
        let s = linalg::psd_sqrt(&p, 1e-10).unwrap();
        assert!((&s * &s - &p).norm() <= 1e-10);
    }
    pass("named suites cover every acceptance criterion family");
}
