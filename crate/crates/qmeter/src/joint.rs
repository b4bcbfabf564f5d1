//! Joint measurements of two observables: coexistent POM pairs through a
//! joint POM on a 2-D outcome grid, their marginals, noise operators of an
//! interacting realization, and the joint uncertainty bounds.

use crate::error::{Error, Result};
use crate::linalg::{self, cr, tol, CMatrix, CVector};
use crate::metrics;
use crate::observable::Observable;
use crate::pom::Pom;
use crate::scheme::{coupling_from_isometry, dilation_isometry, MeasurementScheme};
use crate::state::DensityState;

/// A POM on a 2-D grid of outcome pairs `(xᵢ, yⱼ)`. Its marginals form a
/// coexistent pair of POMs measured by one device.
#[derive(Clone, Debug)]
pub struct JointPom {
    x_outcomes: Vec<f64>,
    y_outcomes: Vec<f64>,
    /// effects[i][j] belongs to outcome (xᵢ, yⱼ)
    effects: Vec<Vec<CMatrix>>,
}

impl JointPom {
    /// Validates grid shape, Hermitian PSD atoms, and completeness.
    pub fn new(
        x_outcomes: Vec<f64>,
        y_outcomes: Vec<f64>,
        effects: Vec<Vec<CMatrix>>,
    ) -> Result<Self> {
        if x_outcomes.is_empty() || y_outcomes.is_empty() {
            return Err(Error::InvalidPom("joint POM grid must be nonempty".into()));
        }
        if effects.len() != x_outcomes.len()
            || effects.iter().any(|row| row.len() != y_outcomes.len())
        {
            return Err(Error::InvalidPom("joint POM grid shape mismatch".into()));
        }
        if x_outcomes.windows(2).any(|w| w[0] >= w[1])
            || y_outcomes.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidPom("grid labels must be strictly increasing".into()));
        }
        let dim = effects[0][0].nrows();
        let mut total = CMatrix::zeros(dim, dim);
        for row in &effects {
            for m in row {
                linalg::check_hermitian(m, tol::EQUALITY)
                    .map_err(|e| Error::InvalidPom(e.to_string()))?;
                let (values, _) = linalg::eigh(m)?;
                if let Some(&min) = values.first() {
                    if min < -tol::EQUALITY {
                        return Err(Error::InvalidPom(format!(
                            "joint effect has negative eigenvalue {min:.3e}"
                        )));
                    }
                }
                total += m;
            }
        }
        if (total - linalg::identity(dim)).norm() > tol::EQUALITY {
            return Err(Error::InvalidPom("joint effects do not sum to the identity".into()));
        }
        Ok(JointPom { x_outcomes, y_outcomes, effects })
    }

    /// Balanced joint unsharp measurement of σx and σy on a qubit:
    /// atoms `M = ¼(1 + κxσx + κyσy)` on the grid `x, y ∈ {±√2·γ}` with
    /// `κ = 1/(2γ²)`.
    ///
    /// The marginals are unbiased and compatible with σx and σy for every
    /// `γ ≥ 1`; at `γ = 1` both joint uncertainty bounds are saturated in
    /// the state |0⟩⟨0|.
    pub fn balanced_xy(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) {
            return Err(Error::InvalidModel(format!(
                "grid inflation must satisfy gamma ≥ 1, got {gamma}"
            )));
        }
        let label = std::f64::consts::SQRT_2 * gamma;
        let kappa = 1.0 / (2.0 * gamma * gamma);
        let grid = [-label, label];
        let mut effects = Vec::with_capacity(2);
        for &x in &grid {
            let mut row = Vec::with_capacity(2);
            for &y in &grid {
                let m = (linalg::identity(2)
                    + linalg::pauli_x() * cr(kappa * x)
                    + linalg::pauli_y() * cr(kappa * y))
                    * cr(0.25);
                row.push(m);
            }
            effects.push(row);
        }
        JointPom::new(grid.to_vec(), grid.to_vec(), effects)
    }

    pub fn x_outcomes(&self) -> &[f64] {
        &self.x_outcomes
    }

    pub fn y_outcomes(&self) -> &[f64] {
        &self.y_outcomes
    }

    pub fn effects(&self) -> &[Vec<CMatrix>] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0][0].nrows()
    }

    /// The coexistent pair of marginal POMs:
    /// `Eᵢ = Σⱼ Mᵢⱼ` and `Fⱼ = Σᵢ Mᵢⱼ`.
    pub fn marginals(&self) -> Result<(Pom, Pom)> {
        let dim = self.dim();
        let x_effects: Vec<CMatrix> = self
            .effects
            .iter()
            .map(|row| {
                let mut e = CMatrix::zeros(dim, dim);
                for m in row {
                    e += m;
                }
                e
            })
            .collect();
        let y_effects: Vec<CMatrix> = (0..self.y_outcomes.len())
            .map(|j| {
                let mut f = CMatrix::zeros(dim, dim);
                for row in &self.effects {
                    f += &row[j];
                }
                f
            })
            .collect();
        Ok((
            Pom::new(self.x_outcomes.clone(), x_effects)?,
            Pom::new(self.y_outcomes.clone(), y_effects)?,
        ))
    }

    /// Interacting realization of the joint POM: the probe carries the
    /// flattened grid index, the coupling extends the dilation isometry, and
    /// two commuting meters read back the two grid coordinates.
    pub fn interacting_realization(&self, seed: u64) -> Result<MeasurementScheme> {
        let d = self.dim();
        let nx = self.x_outcomes.len();
        let ny = self.y_outcomes.len();
        let n = nx * ny;
        let flat: Vec<CMatrix> =
            self.effects.iter().flat_map(|row| row.iter().cloned()).collect();
        let isometry = dilation_isometry(&flat)?;
        let coupling = coupling_from_isometry(&isometry, d, n, seed);
        let x_projectors: Vec<CMatrix> = (0..nx)
            .map(|i| {
                let mut p = CMatrix::zeros(n, n);
                for j in 0..ny {
                    p += linalg::matrix_unit(n, i * ny + j, i * ny + j);
                }
                p
            })
            .collect();
        let y_projectors: Vec<CMatrix> = (0..ny)
            .map(|j| {
                let mut p = CMatrix::zeros(n, n);
                for i in 0..nx {
                    p += linalg::matrix_unit(n, i * ny + j, i * ny + j);
                }
                p
            })
            .collect();
        let meter_x = Observable::new(self.x_outcomes.clone(), x_projectors)?;
        let meter_y = Observable::new(self.y_outcomes.clone(), y_projectors)?;
        MeasurementScheme::new(DensityState::basis(n, 0), coupling, vec![meter_x, meter_y])
    }

    /// Joint outcome probabilities `Tr[Mᵢⱼ ρ]`.
    pub fn born(&self, rho: &DensityState) -> Result<crate::JointDistribution> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "joint POM and state dimensions differ".into(),
            ));
        }
        let grid: Vec<Vec<f64>> = self
            .effects
            .iter()
            .map(|row| row.iter().map(|m| rho.expectation(m)).collect())
            .collect();
        crate::JointDistribution::new(self.x_outcomes.clone(), self.y_outcomes.clone(), grid)
    }
}

/// Evaluation of the two joint-measurement uncertainty bounds for a
/// coexistent pair with unbiased compatible marginals:
/// `(1) ε_A·ε_B ≥ c/2` and `(2) ΔX·ΔY ≥ c` with
/// `c = |Tr[[Â, B̂]ρ]|`.
#[derive(Clone, Copy, Debug)]
pub struct JointUncertaintyReport {
    pub epsilon_a: f64,
    pub epsilon_b: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    /// `|Tr[[Â, B̂]ρ]|`
    pub commutator: f64,
    pub check1: bool,
    pub check2: bool,
}

const JOINT_SLACK: f64 = 1e-10;

/// Verifies the marginals are unbiased and compatible for `a` and `b`, then
/// evaluates both bounds. Bound (2) strengthens the Holevo bound by a factor
/// of two whenever the commutator term is nonzero.
pub fn joint_uncertainty_report(
    m: &JointPom,
    a: &Observable,
    b: &Observable,
    rho: &DensityState,
) -> Result<JointUncertaintyReport> {
    let (x, y) = m.marginals()?;
    for (pom, obs) in [(&x, a), (&y, b)] {
        let defect = metrics::unbiasedness_defect(pom, obs)?;
        if defect > tol::UNBIASED {
            return Err(Error::Biased { deviation: defect });
        }
    }
    let epsilon_a = metrics::precision(&x, a, rho)?;
    let epsilon_b = metrics::precision(&y, b, rho)?;
    let delta_x = metrics::spread(&x, rho)?.stddev;
    let delta_y = metrics::spread(&y, rho)?.stddev;
    let commutator =
        linalg::commutator_trace(&a.operator(), &b.operator(), rho.matrix())?.norm();
    Ok(JointUncertaintyReport {
        epsilon_a,
        epsilon_b,
        delta_x,
        delta_y,
        commutator,
        check1: epsilon_a * epsilon_b >= commutator / 2.0 - JOINT_SLACK,
        check2: delta_x * delta_y >= commutator - JOINT_SLACK,
    })
}

/// A noise operator `N̂ = Û†(1⊗M̂)Û − Â⊗1` with its first two moments in a
/// product vector state.
#[derive(Clone, Debug)]
pub struct NoiseOperator {
    pub operator: CMatrix,
    pub mean: f64,
    pub variance: f64,
}

/// Noise operators of a measurement scheme relative to target observables,
/// evaluated in `ψ ⊗ φ` where φ is the scheme's (pure) probe state.
///
/// For an interacting realization of a coexistent pair with unbiased
/// compatible marginals the means vanish and the variances reproduce the
/// squared precisions.
pub fn noise_operators(
    scheme: &MeasurementScheme,
    observables: &[&Observable],
    psi: &CVector,
) -> Result<Vec<NoiseOperator>> {
    if observables.len() != scheme.meters().len() {
        return Err(Error::DimensionMismatch(
            "one target observable per meter is required".into(),
        ));
    }
    let d = scheme.system_dim();
    if psi.nrows() != d || observables.iter().any(|a| a.dim() != d) {
        return Err(Error::DimensionMismatch(
            "system state and observables must live on the scheme's system space".into(),
        ));
    }
    // the construction needs a pure probe vector
    let (probe_values, probe_vectors) = linalg::eigh(scheme.probe_state().matrix())?;
    let top = probe_values.len() - 1;
    if probe_values[top] < 1.0 - tol::EQUALITY {
        return Err(Error::MixedProbe(probe_values[top]));
    }
    let phi = probe_vectors.column(top).into_owned();
    let norm = psi.norm();
    if norm < 1e-12 {
        return Err(Error::InvalidState("system vector must be nonzero".into()));
    }
    let product = (psi / cr(norm)).kronecker(&phi);
    let u = scheme.coupling();
    let mut out = Vec::with_capacity(observables.len());
    for (meter, target) in scheme.meters().iter().zip(observables) {
        let lifted_meter =
            linalg::tensor_product(&linalg::identity(d), &meter.operator());
        let lifted_target =
            linalg::tensor_product(&target.operator(), &linalg::identity(scheme.probe_dim()));
        let noise = u.adjoint() * lifted_meter * u - lifted_target;
        let mean = product.dotc(&(&noise * &product)).re;
        let second = (&noise * &product).norm_squared();
        out.push(NoiseOperator { operator: noise, mean, variance: second - mean * mean });
    }
    Ok(out)
}
