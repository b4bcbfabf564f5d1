//! Measurement noise metrics: moments, spread, precision, bias
//! decomposition, the diagonal-support criterion, and the
//! Robertson/Holevo bound checks.

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{self, tol};
use crate::observable::Observable;
use crate::pom::Pom;
use crate::state::DensityState;

/// Expectation `Σₖ f(xₖ)·Tr[Eₖρ]` of a function of the outcome.
pub fn moment(x: &Pom, f: impl Fn(f64) -> f64, rho: &DensityState) -> Result<f64> {
    Ok(x.born(rho)?.expectation(f))
}

/// Mean, variance, and standard deviation of a POM's outcome distribution.
#[derive(Clone, Copy, Debug)]
pub struct Spread {
    pub mean: f64,
    pub variance: f64,
    pub stddev: f64,
}

/// First and second outcome moments: `Var = Ex[X²] − Ex[X]²`, clamped at 0.
pub fn spread(x: &Pom, rho: &DensityState) -> Result<Spread> {
    let dist = x.born(rho)?;
    let mean = dist.mean();
    let variance = dist.variance();
    Ok(Spread { mean, variance, stddev: variance.sqrt() })
}

/// Largest commutator norm `‖[Eₖ, Pₗ]‖` between effects and projectors.
pub fn compatibility_defect(x: &Pom, a: &Observable) -> Result<f64> {
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch(
            "POM and observable dimensions differ".into(),
        ));
    }
    let mut worst = 0.0f64;
    for e in x.effects() {
        for p in a.projectors() {
            worst = worst.max((e * p - p * e).norm());
        }
    }
    Ok(worst)
}

/// Joint outcome distribution `μ(xₖ, aₗ) = Re Tr[Eₖ Pₗ ρ]` of a POM and a
/// compatible observable measured together.
///
/// Errors if any effect/projector pair fails to commute within 1e−8, or if
/// the total negative mass removed by clamping exceeds 1e−9.
pub fn compatible_joint(
    x: &Pom,
    a: &Observable,
    rho: &DensityState,
) -> Result<JointDistribution> {
    let defect = compatibility_defect(x, a)?;
    if defect > tol::COMPAT {
        return Err(Error::NotCompatible { deviation: defect });
    }
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch("state dimension differs".into()));
    }
    let mut clamped_mass = 0.0;
    let mut grid = Vec::with_capacity(x.len());
    for e in x.effects() {
        let mut row = Vec::with_capacity(a.len());
        for p in a.projectors() {
            let raw = linalg::trace_product(&(e * p), rho.matrix()).re;
            if raw < 0.0 {
                clamped_mass -= raw;
            }
            row.push(raw.max(0.0));
        }
        grid.push(row);
    }
    if clamped_mass > 1e-9 {
        return Err(Error::NegativeMass(clamped_mass));
    }
    JointDistribution::new(x.outcomes().to_vec(), a.outcomes().to_vec(), grid)
}

/// Root-mean-square error (precision) of a POM for measuring a compatible
/// observable: `ε² = Σₖₗ (xₖ − aₗ)²·μ(xₖ, aₗ)`.
///
/// Vanishes for every state exactly when the POM is the observable itself.
pub fn precision(x: &Pom, a: &Observable, rho: &DensityState) -> Result<f64> {
    let mu = compatible_joint(x, a, rho)?;
    Ok(mu.expectation(|xv, av| (xv - av) * (xv - av)).max(0.0).sqrt())
}

/// Whether the first-moment operator reproduces the observable's operator:
/// `‖Σ xₖEₖ − Σ aₗPₗ‖ ≤ 1e−9`.
pub fn is_unbiased(x: &Pom, a: &Observable) -> Result<bool> {
    Ok(unbiasedness_defect(x, a)? <= tol::UNBIASED)
}

/// `‖X̂ − Â‖` (Frobenius).
pub fn unbiasedness_defect(x: &Pom, a: &Observable) -> Result<f64> {
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch(
            "POM and observable dimensions differ".into(),
        ));
    }
    Ok((x.first_moment() - a.operator()).norm())
}

/// The three terms of the squared-precision decomposition
/// `ε² = ΔX² − ΔX̂² + Tr[(Â − X̂)²ρ]`.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionDecomposition {
    /// Outcome-distribution variance ΔX².
    pub pom_variance: f64,
    /// Operator variance ΔX̂² = Tr[X̂²ρ] − Tr[X̂ρ]² (√ρ-regularized).
    pub operator_variance: f64,
    /// Bias term Tr[(Â − X̂)²ρ], a lower bound for ε².
    pub bias: f64,
}

impl PrecisionDecomposition {
    /// Recombined squared error ΔX² − ΔX̂² + bias.
    pub fn squared_error(&self) -> f64 {
        self.pom_variance - self.operator_variance + self.bias
    }
}

/// Splits the squared precision into distribution variance, operator
/// variance, and the bias term; for an unbiased POM the bias vanishes and
/// `ε² = ΔX² − ΔA²`.
pub fn precision_decomposition(
    x: &Pom,
    a: &Observable,
    rho: &DensityState,
) -> Result<PrecisionDecomposition> {
    let defect = compatibility_defect(x, a)?;
    if defect > tol::COMPAT {
        return Err(Error::NotCompatible { deviation: defect });
    }
    let pom_variance = spread(x, rho)?.variance;
    let first = x.first_moment();
    let second = linalg::regularized_second_moment(&first, rho.matrix())?;
    let mean = rho.expectation(&first);
    let operator_variance = second - mean * mean;
    let gap = a.operator() - first;
    let bias = linalg::regularized_second_moment(&linalg::hermitize(&gap), rho.matrix())?;
    Ok(PrecisionDecomposition { pom_variance, operator_variance, bias })
}

/// Outcome of the two equivalent diagonal-support criteria for a finite grid
/// measure: vanishing of `Σ(x−y)²μ`, and coincidence of `μ(Δ₁×Δ₂)` with
/// `μ((Δ₁∩Δ₂)×ℝ)` over every pair of label subsets.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalSupport {
    pub moment_criterion: bool,
    pub marginal_criterion: bool,
}

impl DiagonalSupport {
    pub fn agree(&self) -> bool {
        self.moment_criterion == self.marginal_criterion
    }
}

const DIAGONAL_TOL: f64 = 1e-12;

/// Evaluates both diagonal-support criteria independently.
///
/// Labels on the two axes are identified when they differ by at most 1e−12.
/// Subset enumeration is exhaustive, so grids are expected to stay small
/// (≤ ~10 labels per axis).
pub fn diagonal_support_criteria(mu: &JointDistribution) -> DiagonalSupport {
    let moment_criterion =
        mu.expectation(|x, y| (x - y) * (x - y)).abs() <= DIAGONAL_TOL;

    let nx = mu.x_outcomes().len();
    let ny = mu.y_outcomes().len();
    // match x-labels to y-labels (None = x value absent from the y grid)
    let matched: Vec<Option<usize>> = mu
        .x_outcomes()
        .iter()
        .map(|&x| mu.y_outcomes().iter().position(|&y| (x - y).abs() <= DIAGONAL_TOL))
        .collect();
    // row_subset[k][m] = Σ_{l ∈ m} μ(k, l) over y-label bitmasks m
    let mut row_subset = vec![vec![0.0f64; 1 << ny]; nx];
    for (k, row) in row_subset.iter_mut().enumerate() {
        for m in 1usize..(1 << ny) {
            let low = m.trailing_zeros() as usize;
            row[m] = row[m & (m - 1)] + mu.prob(k, low);
        }
    }
    let row_total: Vec<f64> = (0..nx).map(|k| row_subset[k][(1 << ny) - 1]).collect();

    let mut marginal_criterion = true;
    'outer: for mask_x in 0usize..(1 << nx) {
        for mask_y in 0usize..(1 << ny) {
            let mut rectangle = 0.0;
            let mut intersection = 0.0;
            for k in 0..nx {
                if mask_x & (1 << k) == 0 {
                    continue;
                }
                rectangle += row_subset[k][mask_y];
                if let Some(l) = matched[k] {
                    if mask_y & (1 << l) != 0 {
                        intersection += row_total[k];
                    }
                }
            }
            if (rectangle - intersection).abs() > DIAGONAL_TOL {
                marginal_criterion = false;
                break 'outer;
            }
        }
    }
    DiagonalSupport { moment_criterion, marginal_criterion }
}

/// True when the grid measure is supported on the diagonal `x = y`.
///
/// Panics if the two criteria of [`diagonal_support_criteria`] disagree —
/// they are provably equivalent on finite grids at the shared tolerance.
pub fn diagonal_support_test(mu: &JointDistribution) -> bool {
    let criteria = diagonal_support_criteria(mu);
    assert!(
        criteria.agree(),
        "diagonal-support criteria disagree: moment={}, marginal={}",
        criteria.moment_criterion,
        criteria.marginal_criterion
    );
    criteria.moment_criterion
}

/// A two-sided uncertainty bound evaluation.
#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

const BOUND_SLACK: f64 = 1e-12;

/// Robertson bound for sharp observables:
/// `ΔA·ΔB ≥ ½|Tr[[Â, B̂]ρ]|`.
pub fn robertson_check(
    a: &Observable,
    b: &Observable,
    rho: &DensityState,
) -> Result<BoundCheck> {
    let lhs = spread(&a.as_pom(), rho)?.stddev * spread(&b.as_pom(), rho)?.stddev;
    let c = linalg::commutator_trace(&a.operator(), &b.operator(), rho.matrix())?;
    let rhs = 0.5 * c.norm();
    Ok(BoundCheck { lhs, rhs, holds: lhs >= rhs - BOUND_SLACK })
}

/// Holevo's extension of the Robertson bound to arbitrary POM pairs:
/// `ΔX·ΔY ≥ ½|Tr[[X̂, Ŷ]ρ]|` with first-moment operators.
pub fn holevo_check(x: &Pom, y: &Pom, rho: &DensityState) -> Result<BoundCheck> {
    let lhs = spread(x, rho)?.stddev * spread(y, rho)?.stddev;
    let c = linalg::commutator_trace(&x.first_moment(), &y.first_moment(), rho.matrix())?;
    let rhs = 0.5 * c.norm();
    Ok(BoundCheck { lhs, rhs, holds: lhs >= rhs - BOUND_SLACK })
}

/// Whether a POM equals an observable as a POM: same labels after dropping
/// zero effects, effects within 1e−9.
pub fn pom_equals_observable(x: &Pom, a: &Observable) -> bool {
    x.approx_eq(&a.as_pom(), tol::UNBIASED)
}

/// States spanning the self-adjoint operators on dimension `dim`: the basis
/// states and all pairwise real/imaginary superpositions. Vanishing of a
/// quadratic form on this family implies vanishing on every state.
pub fn spanning_states(dim: usize) -> Vec<DensityState> {
    let mut states = Vec::new();
    for i in 0..dim {
        states.push(DensityState::basis(dim, i));
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut real = linalg::CVector::zeros(dim);
            real[i] = linalg::cr(1.0);
            real[j] = linalg::cr(1.0);
            states.push(DensityState::pure(&real).expect("unit vector"));
            let mut imag = linalg::CVector::zeros(dim);
            imag[i] = linalg::cr(1.0);
            imag[j] = num_complex::Complex64::new(0.0, 1.0);
            states.push(DensityState::pure(&imag).expect("unit vector"));
        }
    }
    states
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unsharp_z(eta: f64, scaled: bool) -> Pom {
        Pom::unsharp(&Observable::pauli_z(), eta, scaled).unwrap()
    }

    fn ket0() -> DensityState {
        DensityState::basis(2, 0)
    }

    #[test]
    fn moment_examples() {
        let pom = unsharp_z(0.5, true);
        let mixed = DensityState::maximally_mixed(2);
        assert!((moment(&pom, |_| 1.0, &mixed).unwrap() - 1.0).abs() < 1e-12);
        let z = Observable::pauli_z().as_pom();
        assert!((moment(&z, |x| x, &ket0()).unwrap() - 1.0).abs() < 1e-12);
        // x² is constant 4 on the ±2 grid
        assert!((moment(&pom, |x| x * x, &mixed).unwrap() - 4.0).abs() < 1e-12);
        assert!((moment(&pom, |x| x * x, &ket0()).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn spread_examples() {
        let z = Observable::pauli_z().as_pom();
        let s = spread(&z, &ket0()).unwrap();
        assert!((s.mean - 1.0).abs() < 1e-12 && s.variance < 1e-12);
        let s = spread(&z, &DensityState::maximally_mixed(2)).unwrap();
        assert!((s.mean).abs() < 1e-12 && (s.variance - 1.0).abs() < 1e-12);
        let s = spread(&unsharp_z(0.5, true), &ket0()).unwrap();
        assert!((s.mean - 1.0).abs() < 1e-12);
        assert!((s.variance - 3.0).abs() < 1e-12);
    }

    #[test]
    fn compatible_joint_of_identical_measurements_is_diagonal() {
        let plus = DensityState::pure(&crate::CVector::from_vec(vec![cr(1.0), cr(1.0)])).unwrap();
        let mu = compatible_joint(&Observable::pauli_z().as_pom(), &Observable::pauli_z(), &plus)
            .unwrap();
        assert!((mu.prob(0, 0) - 0.5).abs() < 1e-12);
        assert!((mu.prob(1, 1) - 0.5).abs() < 1e-12);
        assert!(mu.prob(0, 1).abs() < 1e-15 && mu.prob(1, 0).abs() < 1e-15);
    }

    #[test]
    fn compatible_joint_unsharp_vs_sharp() {
        let mu = compatible_joint(&unsharp_z(0.5, true), &Observable::pauli_z(), &ket0()).unwrap();
        // grids sorted ascending: x ∈ {−2, 2}, a ∈ {−1, 1}
        assert!((mu.prob(1, 1) - 0.75).abs() < 1e-12);
        assert!((mu.prob(0, 1) - 0.25).abs() < 1e-12);
        assert!(mu.prob(1, 0).abs() < 1e-15 && mu.prob(0, 0).abs() < 1e-15);
        // marginals reproduce the individual distributions
        let born_x = unsharp_z(0.5, true).born(&ket0()).unwrap();
        for (a, b) in mu.x_marginal().probs().iter().zip(born_x.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
        let born_a = Observable::pauli_z().as_pom().born(&ket0()).unwrap();
        for (a, b) in mu.y_marginal().probs().iter().zip(born_a.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        let err = compatible_joint(
            &Observable::pauli_x().as_pom(),
            &Observable::pauli_z(),
            &ket0(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotCompatible { .. }));
    }

    #[test]
    fn precision_of_the_observable_itself_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Observable::pauli_z();
        for _ in 0..10 {
            let rho = crate::random::density(2, &mut rng);
            assert!(precision(&a.as_pom(), &a, &rho).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn precision_of_unsharp_z_matches_both_routes() {
        let x = unsharp_z(0.5, true);
        let a = Observable::pauli_z();
        let eps = precision(&x, &a, &ket0()).unwrap();
        // direct grid sum: (2−1)²·0.75 + (−2−1)²·0.25 = 3
        assert!((eps * eps - 3.0).abs() <= 1e-10);
        // unbiased identity route: ΔX² − ΔA² = 3 − 0
        let dx2 = spread(&x, &ket0()).unwrap().variance;
        let da2 = spread(&a.as_pom(), &ket0()).unwrap().variance;
        assert!((eps * eps - (dx2 - da2)).abs() <= 1e-10);
    }

    #[test]
    fn unbiasedness_examples() {
        let a = Observable::pauli_z();
        assert!(is_unbiased(&unsharp_z(0.5, true), &a).unwrap());
        assert!(!is_unbiased(&unsharp_z(0.5, false), &a).unwrap());
        assert!(is_unbiased(&a.as_pom(), &a).unwrap());
    }

    #[test]
    fn decomposition_unbiased_case_has_zero_bias() {
        let x = unsharp_z(0.5, true);
        let a = Observable::pauli_z();
        let rho = DensityState::maximally_mixed(2);
        let d = precision_decomposition(&x, &a, &rho).unwrap();
        assert!(d.bias <= 1e-12);
        let eps = precision(&x, &a, &rho).unwrap();
        assert!((eps * eps - d.squared_error()).abs() <= 1e-9);
    }

    #[test]
    fn decomposition_biased_case() {
        let x = unsharp_z(0.5, false);
        let a = Observable::pauli_z();
        let rho = DensityState::maximally_mixed(2);
        let d = precision_decomposition(&x, &a, &rho).unwrap();
        // Tr[(σz − 0.5σz)²]/2 = 0.25
        assert!((d.bias - 0.25).abs() <= 1e-12);
        let eps = precision(&x, &a, &rho).unwrap();
        assert!((eps * eps - d.squared_error()).abs() <= 1e-9);
        assert!(eps * eps >= d.bias - 1e-12);
    }

    #[test]
    fn decomposition_on_random_compatible_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let dim = rng.random_range(2..=4);
            let a = crate::random::observable(dim, &mut rng);
            let x = crate::random::compatible_pom(&a, rng.random_range(2..=4), &mut rng);
            let rho = crate::random::density(dim, &mut rng);
            let eps = precision(&x, &a, &rho).unwrap();
            let d = precision_decomposition(&x, &a, &rho).unwrap();
            assert!((eps * eps - d.squared_error()).abs() <= 1e-9);
            assert!(eps * eps >= d.bias - 1e-12);
            // grid second moment dominates the operator second moment
            assert!(d.pom_variance >= d.operator_variance - 1e-12);
        }
    }

    #[test]
    fn diagonal_support_basic_cases() {
        let diag = JointDistribution::new(
            vec![-1.0, 1.0],
            vec![-1.0, 1.0],
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
        )
        .unwrap();
        assert!(diagonal_support_test(&diag));
        let off = JointDistribution::new(
            vec![-1.0, 1.0],
            vec![-1.0, 1.0],
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        assert!(!diagonal_support_test(&off));
    }

    #[test]
    fn diagonal_support_perturbation_flips_both_criteria() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = rng.random_range(2..=5);
            let labels: Vec<f64> = (0..n).map(|k| k as f64 - 1.0).collect();
            let mut masses: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.1).collect();
            let total: f64 = masses.iter().sum();
            for m in &mut masses {
                *m /= total;
            }
            let mut grid = vec![vec![0.0; n]; n];
            for k in 0..n {
                grid[k][k] = masses[k];
            }
            let clean =
                JointDistribution::new(labels.clone(), labels.clone(), grid.clone()).unwrap();
            let c = diagonal_support_criteria(&clean);
            assert!(c.moment_criterion && c.marginal_criterion);

            // move 1e−6 of mass one cell off the diagonal
            let shift = 1e-6;
            grid[0][0] -= shift;
            grid[0][n - 1] += shift;
            let bent = JointDistribution::new(labels.clone(), labels, grid).unwrap();
            let c = diagonal_support_criteria(&bent);
            assert!(!c.moment_criterion && !c.marginal_criterion);
        }
    }

    #[test]
    fn robertson_saturates_on_pauli_pair() {
        let check = robertson_check(&Observable::pauli_x(), &Observable::pauli_y(), &ket0())
            .unwrap();
        assert!((check.lhs - 1.0).abs() <= 1e-10);
        assert!((check.rhs - 1.0).abs() <= 1e-10);
        assert!(check.holds);
    }

    #[test]
    fn robertson_trivial_for_equal_observables() {
        let a = Observable::pauli_z();
        let check = robertson_check(&a, &a, &DensityState::maximally_mixed(2)).unwrap();
        assert!(check.rhs <= 1e-12 && check.holds);
    }

    #[test]
    fn holevo_reduces_to_robertson_for_projective_poms() {
        let check = holevo_check(
            &Observable::pauli_x().as_pom(),
            &Observable::pauli_y().as_pom(),
            &ket0(),
        )
        .unwrap();
        assert!((check.lhs - 1.0).abs() <= 1e-10 && (check.rhs - 1.0).abs() <= 1e-10);
        assert!(check.holds);
    }

    #[test]
    fn holevo_on_balanced_joint_marginals() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let half = cr(0.5);
        let root2 = std::f64::consts::SQRT_2;
        let ex: Vec<crate::CMatrix> = [-1.0f64, 1.0].iter().map(|&sign| {
            (linalg::identity(2) + linalg::pauli_x() * cr(sign * s)) * half
        }).collect();
        let ey: Vec<crate::CMatrix> = [-1.0f64, 1.0].iter().map(|&sign| {
            (linalg::identity(2) + linalg::pauli_y() * cr(sign * s)) * half
        }).collect();
        let x = Pom::new(vec![-root2, root2], ex).unwrap();
        let y = Pom::new(vec![-root2, root2], ey).unwrap();
        let check = holevo_check(&x, &y, &ket0()).unwrap();
        assert!((check.lhs - 2.0).abs() <= 1e-10);
        assert!((check.rhs - 1.0).abs() <= 1e-10);
        assert!(check.holds);
    }

    #[test]
    fn precision_zero_on_spanning_family_identifies_the_observable() {
        let a = Observable::pauli_z();
        // forward: X = A gives zero precision on the whole family
        for rho in spanning_states(2) {
            assert!(precision(&a.as_pom(), &a, &rho).unwrap() <= 1e-9);
        }
        assert!(pom_equals_observable(&a.as_pom(), &a));
        // converse: an unsharp POM fails on some spanning state and differs
        let x = unsharp_z(0.5, true);
        let worst = spanning_states(2)
            .iter()
            .map(|rho| precision(&x, &a, rho).unwrap())
            .fold(0.0f64, f64::max);
        assert!(worst > 0.5);
        assert!(!pom_equals_observable(&x, &a));
    }
}
