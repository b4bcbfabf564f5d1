//! Scenario execution: builds fixtures from a config and dispatches to the
//! measurement operations.

use crate::error::Result;
use crate::hamiltonian::Hamiltonian;
use crate::instrument::Instrument;
use crate::joint::joint_uncertainty_report;
use crate::linalg::tol;
use crate::metrics;
use crate::models::build_model;
use crate::observable::Observable;
use crate::pom::Pom;
use crate::scenario::config::{ScenarioConfig, ScenarioKind};
use crate::scenario::report::{Report, TableRow};
use crate::scheme;
use crate::search::{sql_violation_search, SearchStatus};
use crate::state::DensityState;
use crate::suites;

const DEFAULT_TRIALS: usize = 200;
const DEFAULT_BUDGET: usize = 200;

/// Runs one scenario to a [`Report`]. Deterministic for fixed config bytes
/// and seed.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    config.validate()?;
    let dim = config.resolve_dim()?;
    let tolerance = config.effective_tolerance()?;
    let seed = config.seed.unwrap_or(0);

    let mut report = Report::new(config.kind.as_str());
    report.echo("dim", dim);
    report.echo("seed", seed);
    if let Some(tau) = &config.tau {
        report.echo("tau", tau.display());
    }

    match config.kind {
        ScenarioKind::Born => run_born(config, dim, tolerance, &mut report)?,
        ScenarioKind::Precision => run_precision(config, dim, tolerance, &mut report)?,
        ScenarioKind::Joint => run_joint(config, dim, tolerance, &mut report)?,
        ScenarioKind::Sql => run_sql(config, dim, tolerance, &mut report)?,
        ScenarioKind::Realize => run_realize(config, dim, tolerance, seed, &mut report)?,
        ScenarioKind::Naimark => run_naimark(config, &mut report)?,
        ScenarioKind::Suite => run_suite_kind(config, seed, &mut report)?,
        ScenarioKind::Search => run_search(config, dim, seed, &mut report)?,
    }
    Ok(report)
}

fn label(outcome: f64) -> String {
    format!("{outcome}")
}

fn built_pom(config: &ScenarioConfig) -> Result<Pom> {
    config.pom.as_ref().expect("validated").build("pom")
}

fn built_observable(config: &ScenarioConfig, field: &str) -> Result<Observable> {
    let observable = match field {
        "observable_b" => config.observable_b.as_ref(),
        _ => config.observable.as_ref(),
    };
    observable.expect("validated").build(field)
}

fn built_state(config: &ScenarioConfig, dim: usize, tolerance: f64) -> Result<DensityState> {
    config.state.as_ref().expect("validated").build(dim, tolerance, "state")
}

fn built_instrument(config: &ScenarioConfig, dim: usize, tolerance: f64) -> Result<Instrument> {
    let spec = config.model.as_ref().expect("validated").build(dim, tolerance, "model")?;
    build_model(&spec)
}

fn built_hamiltonian(config: &ScenarioConfig, dim: usize, tau: f64) -> Result<Hamiltonian> {
    config.hamiltonian.as_ref().expect("validated").build(dim, tau, "hamiltonian")
}

fn run_born(
    config: &ScenarioConfig,
    dim: usize,
    tolerance: f64,
    report: &mut Report,
) -> Result<()> {
    let pom = built_pom(config)?;
    let state = built_state(config, dim, tolerance)?;
    let dist = pom.born(&state)?;
    let spread = metrics::spread(&pom, &state)?;
    report.scalar("mean", spread.mean);
    report.scalar("variance", spread.variance);
    report.scalar("stddev", spread.stddev);
    report.table(
        "born",
        dist.outcomes()
            .iter()
            .zip(dist.probs())
            .map(|(&x, &p)| TableRow { label: label(x), value: p })
            .collect(),
    );
    report.flag("pass", true);
    Ok(())
}

fn run_precision(
    config: &ScenarioConfig,
    dim: usize,
    tolerance: f64,
    report: &mut Report,
) -> Result<()> {
    let pom = built_pom(config)?;
    let observable = built_observable(config, "observable")?;
    let state = built_state(config, dim, tolerance)?;
    let epsilon = metrics::precision(&pom, &observable, &state)?;
    let decomposition = metrics::precision_decomposition(&pom, &observable, &state)?;
    let unbiased = metrics::is_unbiased(&pom, &observable)?;
    let observable_variance = metrics::spread(&observable.as_pom(), &state)?.variance;

    let decomposition_check =
        (epsilon * epsilon - decomposition.squared_error()).abs() <= 1e-9;
    let identity_check = if unbiased {
        let via_variances = decomposition.pom_variance - observable_variance;
        (epsilon * epsilon - via_variances).abs() <= 1e-9
    } else {
        true
    };

    report.scalar("epsilon", epsilon);
    report.scalar("epsilon_sq", epsilon * epsilon);
    report.scalar("pom_variance", decomposition.pom_variance);
    report.scalar("operator_variance", decomposition.operator_variance);
    report.scalar("bias", decomposition.bias);
    report.scalar("observable_variance", observable_variance);
    report.flag("unbiased", unbiased);
    report.flag("identity_check", identity_check);
    report.flag("decomposition_check", decomposition_check);
    report.flag("pass", identity_check && decomposition_check);
    Ok(())
}

fn run_joint(
    config: &ScenarioConfig,
    dim: usize,
    tolerance: f64,
    report: &mut Report,
) -> Result<()> {
    let joint = config.joint_pom.as_ref().expect("validated").build("joint_pom")?;
    let a = built_observable(config, "observable")?;
    let b = built_observable(config, "observable_b")?;
    let state = built_state(config, dim, tolerance)?;
    let r = joint_uncertainty_report(&joint, &a, &b, &state)?;
    report.scalar("epsilon_a", r.epsilon_a);
    report.scalar("epsilon_b", r.epsilon_b);
    report.scalar("delta_x", r.delta_x);
    report.scalar("delta_y", r.delta_y);
    report.scalar("commutator", r.commutator);
    report.flag("check1", r.check1);
    report.flag("check2", r.check2);
    report.flag("pass", r.check1 && r.check2);
    Ok(())
}

fn run_sql(
    config: &ScenarioConfig,
    dim: usize,
    tolerance: f64,
    report: &mut Report,
) -> Result<()> {
    let instrument = built_instrument(config, dim, tolerance)?;
    let observable = built_observable(config, "observable")?;
    let tau = config.tau.as_ref().expect("validated").value();
    let hamiltonian = built_hamiltonian(config, dim, tau)?;
    let state = built_state(config, dim, tolerance)?;
    let r = crate::repeated::sql_report(&instrument, &observable, &hamiltonian, tau, &state)?;
    report.scalar("sigma", r.sigma);
    report.scalar("epsilon_after", r.epsilon_after);
    report.scalar("delta_sq", r.delta_sq);
    report.scalar("rhs", r.rhs);
    report.scalar("excluded_weight", r.excluded_weight);
    report.flag("condition_holds", r.condition_holds);
    report.flag("sql_holds", r.sql_holds);
    report.flag("implication_holds", r.implication_holds());
    report.flag("excluded_weight_flag", r.excluded_weight_flag);
    report.flag("pass", r.implication_holds());
    report.table(
        "probability",
        r.rows.iter().map(|row| TableRow { label: label(row.outcome), value: row.probability }).collect(),
    );
    report.table(
        "prediction",
        r.rows.iter().map(|row| TableRow { label: label(row.outcome), value: row.prediction }).collect(),
    );
    report.table(
        "uncertainty",
        r.rows.iter().map(|row| TableRow { label: label(row.outcome), value: row.uncertainty }).collect(),
    );
    Ok(())
}

fn run_realize(
    config: &ScenarioConfig,
    dim: usize,
    tolerance: f64,
    seed: u64,
    report: &mut Report,
) -> Result<()> {
    let instrument = built_instrument(config, dim, tolerance)?;
    let scheme = scheme::realize_instrument(&instrument, seed);
    let round_trip = scheme.to_instrument()?;
    let choi_distance = round_trip.choi_distance(&instrument)?;
    report.scalar("choi_distance", choi_distance);
    report.scalar("probe_dim", scheme.probe_dim() as f64);
    report.flag("pass", choi_distance <= tol::CHOI);
    Ok(())
}

fn run_naimark(config: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let pom = built_pom(config)?;
    let dilation = scheme::naimark_dilate(&pom)?;
    let v = dilation.isometry.matrix();
    let isometry_defect =
        (v.adjoint() * v - crate::linalg::identity(pom.dim())).norm();
    let effect_defect = dilation
        .compressed_effects()
        .iter()
        .zip(pom.effects())
        .map(|(c, e)| (c - e).norm())
        .fold(0.0f64, f64::max);
    report.scalar("isometry_defect", isometry_defect);
    report.scalar("max_effect_defect", effect_defect);
    report.scalar("dilated_dim", dilation.isometry.out_dim() as f64);
    report.flag("pass", isometry_defect <= 1e-10 && effect_defect <= 1e-10);
    Ok(())
}

fn run_suite_kind(config: &ScenarioConfig, seed: u64, report: &mut Report) -> Result<()> {
    let name = config.suite.as_ref().expect("validated");
    let trials = config.trials.unwrap_or(DEFAULT_TRIALS);
    let suite = suites::run_suite(name, trials, seed).map_err(|e| match e {
        crate::Error::Scenario(msg) => crate::Error::config("suite", msg),
        other => other,
    })?;
    report.echo("suite", name);
    report.scalar("trials", suite.trials as f64);
    report.scalar("conditioned", suite.conditioned as f64);
    report.scalar("violations", suite.violations as f64);
    report.scalar(
        "worst_margin",
        if suite.worst_margin.is_finite() { suite.worst_margin } else { 0.0 },
    );
    report.flag("pass", suite.pass);
    Ok(())
}

fn run_search(
    config: &ScenarioConfig,
    dim: usize,
    seed: u64,
    report: &mut Report,
) -> Result<()> {
    let observable = built_observable(config, "observable")?;
    let tau = config.tau.as_ref().expect("validated").value();
    let hamiltonian = built_hamiltonian(config, dim, tau)?;
    let budget = config.budget.unwrap_or(DEFAULT_BUDGET);
    let outcome = sql_violation_search(dim, &observable, &hamiltonian, tau, budget, seed)?;
    report.echo("budget", budget);
    report.echo(
        "status",
        match outcome.status {
            SearchStatus::Found => "found",
            SearchStatus::NoViolationPossible => "no_violation_possible",
            SearchStatus::NoValidCandidate => "no_valid_candidate",
        },
    );
    report.scalar("evaluated", outcome.evaluated as f64);
    report.scalar("valid", outcome.valid as f64);
    report.flag("found", outcome.best.is_some());
    if let Some(best) = &outcome.best {
        report.echo("family", best.family);
        report.scalar("ratio", best.ratio);
        report.scalar("best_delta_sq", best.report.delta_sq);
        report.scalar("best_rhs", best.report.rhs);
        report.scalar("best_sigma", best.report.sigma);
        report.scalar("best_epsilon_after", best.report.epsilon_after);
        report.scalar("candidate_index", best.candidate_index as f64);
        report.flag("violation_found", best.ratio < 1.0);
    } else {
        report.flag("violation_found", false);
    }
    report.flag("pass", true);
    Ok(())
}
