//! JSON scenario configuration: schema, parsing, and fixture building.
//!
//! Complex scalars are `[re, im]` pairs; matrices are row-major nested
//! arrays whose entries may be bare reals or pairs. Angle-like numeric
//! fields accept either a JSON number or a small constant expression string
//! (`"pi/6"`, `"3*pi/4"`); unknown keys are rejected.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::joint::JointPom;
use crate::linalg::{self, CMatrix, CVector};
use crate::models::ModelSpec;
use crate::observable::Observable;
use crate::pom::Pom;
use crate::state::DensityState;

/// Numeric config field: a number, or an expression over numbers and `pi`
/// with `+ − * /` and parentheses. The textual source is kept so configs
/// round-trip unchanged.
#[derive(Clone, Debug)]
pub struct Num {
    value: f64,
    source: Option<String>,
}

impl Num {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn from_value(value: f64) -> Self {
        Num { value, source: None }
    }

    /// Echo string: the original expression when one was given.
    pub fn display(&self) -> String {
        match &self.source {
            Some(s) => s.clone(),
            None => format!("{}", self.value),
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.source {
            Some(s) => serializer.serialize_str(s),
            None => serializer.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NumVisitor;
        impl serde::de::Visitor<'_> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a constant expression string")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Ok(Num { value: v, source: None })
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num { value: v as f64, source: None })
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num { value: v as f64, source: None })
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                let value = parse_expression(v).map_err(E::custom)?;
                Ok(Num { value, source: Some(v.to_string()) })
            }
        }
        deserializer.deserialize_any(NumVisitor)
    }
}

/// Evaluates the tiny expression grammar: numbers, `pi`, `+ − * /`, unary
/// minus, parentheses.
pub fn parse_expression(text: &str) -> std::result::Result<f64, String> {
    let mut parser = ExprParser { chars: text.chars().collect(), pos: 0 };
    let value = parser.expression()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(format!("trailing input at offset {}", parser.pos));
    }
    Ok(value)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expression(&mut self) -> std::result::Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                '+' => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> std::result::Result<f64, String> {
        let mut acc = self.factor()?;
        while let Some(op) = self.peek() {
            match op {
                '*' => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                '/' => {
                    self.pos += 1;
                    let denom = self.factor()?;
                    if denom == 0.0 {
                        return Err("division by zero".into());
                    }
                    acc /= denom;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if self.peek() != Some(')') {
                    return Err("expected ')'".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('p') | Some('P') => {
                let rest: String = self.chars[self.pos..].iter().take(2).collect();
                if rest.eq_ignore_ascii_case("pi") {
                    self.pos += 2;
                    Ok(std::f64::consts::PI)
                } else {
                    Err(format!("unknown symbol at offset {}", self.pos))
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos];
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' {
                        self.pos += 1;
                    } else if (c == '+' || c == '-')
                        && self.pos > start
                        && matches!(self.chars[self.pos - 1], 'e' | 'E')
                    {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                text.parse::<f64>().map_err(|e| e.to_string())
            }
            other => Err(format!("unexpected input {other:?}")),
        }
    }
}

/// A complex matrix entry: bare real or `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EntryConfig {
    Real(f64),
    Complex([f64; 2]),
}

impl EntryConfig {
    fn to_complex(self) -> num_complex::Complex64 {
        match self {
            EntryConfig::Real(re) => num_complex::Complex64::new(re, 0.0),
            EntryConfig::Complex([re, im]) => num_complex::Complex64::new(re, im),
        }
    }
}

/// Row-major nested-array matrix literal.
pub type MatrixConfig = Vec<Vec<EntryConfig>>;

fn build_matrix(m: &MatrixConfig, path: &str) -> Result<CMatrix> {
    let rows = m.len();
    if rows == 0 {
        return Err(Error::config(path, "matrix must be nonempty"));
    }
    let cols = m[0].len();
    if cols == 0 || m.iter().any(|row| row.len() != cols) {
        return Err(Error::config(path, "matrix rows must be nonempty and equal-length"));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| m[i][j].to_complex()))
}

fn build_vector(v: &[EntryConfig], path: &str) -> Result<CVector> {
    if v.is_empty() {
        return Err(Error::config(path, "vector must be nonempty"));
    }
    Ok(CVector::from_iterator(v.len(), v.iter().map(|e| e.to_complex())))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// State literal or named state.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// Pure state from an amplitude vector (normalized on construction).
    Pure { amplitudes: Vec<EntryConfig> },
    /// Explicit density matrix.
    Density { matrix: MatrixConfig },
    /// 1/dim on the scenario dimension.
    MaximallyMixed,
    /// Basis state |index⟩⟨index| on the scenario dimension.
    Basis { index: usize },
    /// Qubit pure state from Bloch angles (θ from +z, φ azimuthal).
    Bloch { theta: Num, phi: Num },
}

impl StateConfig {
    pub fn build(&self, dim: usize, tol: f64, path: &str) -> Result<DensityState> {
        let state = match self {
            StateConfig::Pure { amplitudes } => {
                DensityState::pure(&build_vector(amplitudes, path)?)?
            }
            StateConfig::Density { matrix } => {
                DensityState::with_tol(build_matrix(matrix, path)?, tol)?
            }
            StateConfig::MaximallyMixed => DensityState::maximally_mixed(dim),
            StateConfig::Basis { index } => {
                if *index >= dim {
                    return Err(Error::config(
                        format!("{path}.index"),
                        format!("basis index {index} out of range for dimension {dim}"),
                    ));
                }
                DensityState::basis(dim, *index)
            }
            StateConfig::Bloch { theta, phi } => DensityState::bloch(theta.value(), phi.value()),
        };
        if state.dim() != dim {
            return Err(Error::config(
                path,
                format!("state has dimension {}, scenario uses {dim}", state.dim()),
            ));
        }
        Ok(state)
    }

    /// Dimension determined by the literal itself, when it has one.
    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            StateConfig::Pure { amplitudes } => Some(amplitudes.len()),
            StateConfig::Density { matrix } => Some(matrix.len()),
            StateConfig::Bloch { .. } => Some(2),
            _ => None,
        }
    }
}

/// Sharp observable literal or named Pauli.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableConfig {
    Pauli { axis: Axis },
    /// Spectral decomposition of a Hermitian matrix (eigenvalue clustering
    /// at 1e−8).
    Hermitian { matrix: MatrixConfig },
    Projective { outcomes: Vec<f64>, projectors: Vec<MatrixConfig> },
}

impl ObservableConfig {
    pub fn build(&self, path: &str) -> Result<Observable> {
        match self {
            ObservableConfig::Pauli { axis } => Ok(match axis {
                Axis::X => Observable::pauli_x(),
                Axis::Y => Observable::pauli_y(),
                Axis::Z => Observable::pauli_z(),
            }),
            ObservableConfig::Hermitian { matrix } => {
                Observable::spectral(&build_matrix(matrix, path)?, linalg::tol::CLUSTER)
            }
            ObservableConfig::Projective { outcomes, projectors } => {
                let ps = projectors
                    .iter()
                    .enumerate()
                    .map(|(k, m)| build_matrix(m, &format!("{path}.projectors[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Observable::new(outcomes.clone(), ps)
            }
        }
    }

    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            ObservableConfig::Pauli { .. } => Some(2),
            ObservableConfig::Hermitian { matrix } => Some(matrix.len()),
            ObservableConfig::Projective { projectors, .. } => {
                projectors.first().map(Vec::len)
            }
        }
    }
}

/// POM literal or named family.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PomConfig {
    Projective {
        observable: ObservableConfig,
    },
    Unsharp {
        observable: ObservableConfig,
        eta: f64,
        #[serde(default = "default_true")]
        scaled: bool,
    },
    Effects {
        outcomes: Vec<f64>,
        effects: Vec<MatrixConfig>,
    },
}

fn default_true() -> bool {
    true
}

impl PomConfig {
    pub fn build(&self, path: &str) -> Result<Pom> {
        match self {
            PomConfig::Projective { observable } => {
                Ok(observable.build(&format!("{path}.observable"))?.as_pom())
            }
            PomConfig::Unsharp { observable, eta, scaled } => {
                if !(*eta > 0.0 && *eta <= 1.0) {
                    return Err(Error::config(
                        format!("{path}.eta"),
                        format!("eta must be in (0, 1], got {eta}"),
                    ));
                }
                Pom::unsharp(&observable.build(&format!("{path}.observable"))?, *eta, *scaled)
            }
            PomConfig::Effects { outcomes, effects } => {
                let es = effects
                    .iter()
                    .enumerate()
                    .map(|(k, m)| build_matrix(m, &format!("{path}.effects[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Pom::new(outcomes.clone(), es)
            }
        }
    }

    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            PomConfig::Projective { observable } | PomConfig::Unsharp { observable, .. } => {
                observable.implied_dim()
            }
            PomConfig::Effects { effects, .. } => effects.first().map(Vec::len),
        }
    }
}

/// Instrument model descriptor.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Luders {
        observable: ObservableConfig,
    },
    Unsharp {
        observable: ObservableConfig,
        eta: f64,
        #[serde(default = "default_true")]
        scaled: bool,
    },
    MeasurePrepare {
        observable: ObservableConfig,
        prepare: StateConfig,
    },
    VonNeumann {
        observable: ObservableConfig,
        strength: Num,
    },
}

impl ModelConfig {
    pub fn build(&self, dim: usize, tol: f64, path: &str) -> Result<ModelSpec> {
        let observable_path = format!("{path}.observable");
        Ok(match self {
            ModelConfig::Luders { observable } => {
                ModelSpec::Luders { observable: observable.build(&observable_path)? }
            }
            ModelConfig::Unsharp { observable, eta, scaled } => {
                if !(*eta > 0.0 && *eta <= 1.0) {
                    return Err(Error::config(
                        format!("{path}.eta"),
                        format!("eta must be in (0, 1], got {eta}"),
                    ));
                }
                ModelSpec::Unsharp {
                    observable: observable.build(&observable_path)?,
                    eta: *eta,
                    scaled: *scaled,
                }
            }
            ModelConfig::MeasurePrepare { observable, prepare } => ModelSpec::MeasurePrepare {
                observable: observable.build(&observable_path)?,
                prepare: prepare.build(dim, tol, &format!("{path}.prepare"))?,
            },
            ModelConfig::VonNeumann { observable, strength } => {
                let strength = strength.value();
                if !(strength > 0.0 && strength <= 1.0) {
                    return Err(Error::config(
                        format!("{path}.strength"),
                        format!("strength must be in (0, 1], got {strength}"),
                    ));
                }
                ModelSpec::VonNeumann { observable: observable.build(&observable_path)?, strength }
            }
        })
    }

    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            ModelConfig::Luders { observable }
            | ModelConfig::Unsharp { observable, .. }
            | ModelConfig::MeasurePrepare { observable, .. }
            | ModelConfig::VonNeumann { observable, .. } => observable.implied_dim(),
        }
    }
}

/// Hamiltonian literal or named fixture.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianConfig {
    Zero,
    Matrix {
        matrix: MatrixConfig,
        #[serde(default = "default_hbar")]
        hbar: f64,
    },
    Pauli {
        axis: Axis,
        coefficient: Num,
        #[serde(default = "default_hbar")]
        hbar: f64,
    },
    /// Qubit rotation with `Ûτ† σz Ûτ = σx` at the scenario's `tau`.
    RotateZToX,
}

fn default_hbar() -> f64 {
    1.0
}

impl HamiltonianConfig {
    pub fn build(&self, dim: usize, tau: f64, path: &str) -> Result<Hamiltonian> {
        let h = match self {
            HamiltonianConfig::Zero => Hamiltonian::zero(dim),
            HamiltonianConfig::Matrix { matrix, hbar } => {
                Hamiltonian::new(build_matrix(matrix, path)?, *hbar)?
            }
            HamiltonianConfig::Pauli { axis, coefficient, hbar } => {
                let base = match axis {
                    Axis::X => linalg::pauli_x(),
                    Axis::Y => linalg::pauli_y(),
                    Axis::Z => linalg::pauli_z(),
                };
                Hamiltonian::new(base * linalg::cr(coefficient.value()), *hbar)?
            }
            HamiltonianConfig::RotateZToX => {
                if tau == 0.0 {
                    return Err(Error::config(path, "rotate_z_to_x needs a nonzero tau"));
                }
                Hamiltonian::rotate_z_to_x(tau, 1.0)
            }
        };
        if h.dim() != dim {
            return Err(Error::config(
                path,
                format!("Hamiltonian has dimension {}, scenario uses {dim}", h.dim()),
            ));
        }
        Ok(h)
    }
}

/// Joint POM literal or named fixture.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum JointPomConfig {
    /// Balanced joint σx/σy measurement; `gamma ≥ 1` inflates the grid.
    BalancedXy {
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    Grid {
        x_outcomes: Vec<f64>,
        y_outcomes: Vec<f64>,
        effects: Vec<Vec<MatrixConfig>>,
    },
}

fn default_gamma() -> f64 {
    1.0
}

impl JointPomConfig {
    pub fn build(&self, path: &str) -> Result<JointPom> {
        match self {
            JointPomConfig::BalancedXy { gamma } => JointPom::balanced_xy(*gamma),
            JointPomConfig::Grid { x_outcomes, y_outcomes, effects } => {
                let grid = effects
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, m)| build_matrix(m, &format!("{path}.effects[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                JointPom::new(x_outcomes.clone(), y_outcomes.clone(), grid)
            }
        }
    }

    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            JointPomConfig::BalancedXy { .. } => Some(2),
            JointPomConfig::Grid { effects, .. } => {
                effects.first().and_then(|row| row.first()).map(Vec::len)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Born,
    Precision,
    Joint,
    Sql,
    Realize,
    Naimark,
    Suite,
    Search,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Born => "born",
            ScenarioKind::Precision => "precision",
            ScenarioKind::Joint => "joint",
            ScenarioKind::Sql => "sql",
            ScenarioKind::Realize => "realize",
            ScenarioKind::Naimark => "naimark",
            ScenarioKind::Suite => "suite",
            ScenarioKind::Search => "search",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<f64>,
}

/// One scenario: kind plus the inputs that kind needs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pom: Option<PomConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable_b: Option<ObservableConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_pom: Option<JointPomConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesConfig>,
}

/// Parses and validates a scenario config from JSON bytes.
pub fn parse_config(bytes: &[u8]) -> Result<ScenarioConfig> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::config("<config>", format!("not UTF-8: {e}")))?;
    let config: ScenarioConfig = serde_json::from_str(text)
        .map_err(|e| Error::config("<config>", e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl ScenarioConfig {
    /// Per-kind required-field validation, with field-path errors.
    pub fn validate(&self) -> Result<()> {
        let need = |present: bool, field: &str| -> Result<()> {
            if present {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("required for kind {:?}", self.kind.as_str()),
                ))
            }
        };
        match self.kind {
            ScenarioKind::Born => {
                need(self.pom.is_some(), "pom")?;
                need(self.state.is_some(), "state")?;
            }
            ScenarioKind::Precision => {
                need(self.pom.is_some(), "pom")?;
                need(self.observable.is_some(), "observable")?;
                need(self.state.is_some(), "state")?;
            }
            ScenarioKind::Joint => {
                need(self.joint_pom.is_some(), "joint_pom")?;
                need(self.observable.is_some(), "observable")?;
                need(self.observable_b.is_some(), "observable_b")?;
                need(self.state.is_some(), "state")?;
            }
            ScenarioKind::Sql => {
                need(self.model.is_some(), "model")?;
                need(self.observable.is_some(), "observable")?;
                need(self.hamiltonian.is_some(), "hamiltonian")?;
                need(self.tau.is_some(), "tau")?;
                need(self.state.is_some(), "state")?;
            }
            ScenarioKind::Realize => {
                need(self.model.is_some(), "model")?;
            }
            ScenarioKind::Naimark => {
                need(self.pom.is_some(), "pom")?;
            }
            ScenarioKind::Suite => {
                need(self.suite.is_some(), "suite")?;
            }
            ScenarioKind::Search => {
                need(self.observable.is_some(), "observable")?;
                need(self.hamiltonian.is_some(), "hamiltonian")?;
                need(self.tau.is_some(), "tau")?;
            }
        }
        // dry-run the builders so structural errors surface at parse time
        self.resolve_dim()?;
        Ok(())
    }

    /// The scenario dimension: explicit `dim`, else inferred from the first
    /// dimension-carrying input.
    pub fn resolve_dim(&self) -> Result<usize> {
        if let Some(dim) = self.dim {
            if dim == 0 {
                return Err(Error::config("dim", "dimension must be positive"));
            }
            return Ok(dim);
        }
        let inferred = self
            .model
            .as_ref()
            .and_then(ModelConfig::implied_dim)
            .or_else(|| self.pom.as_ref().and_then(PomConfig::implied_dim))
            .or_else(|| self.observable.as_ref().and_then(ObservableConfig::implied_dim))
            .or_else(|| self.joint_pom.as_ref().and_then(JointPomConfig::implied_dim))
            .or_else(|| self.state.as_ref().and_then(StateConfig::implied_dim));
        match self.kind {
            ScenarioKind::Suite => Ok(inferred.unwrap_or(2)),
            _ => inferred.ok_or_else(|| {
                Error::config("dim", "cannot infer the dimension; set `dim` explicitly")
            }),
        }
    }

    /// Equality tolerance: explicit config value, else the `QMETER_TOL`
    /// environment variable, else 1e−10.
    pub fn effective_tolerance(&self) -> Result<f64> {
        if let Some(t) = self.tolerances.as_ref().and_then(|t| t.equality) {
            if !(t > 0.0) {
                return Err(Error::config("tolerances.equality", "must be positive"));
            }
            return Ok(t);
        }
        if let Ok(text) = std::env::var("QMETER_TOL") {
            let t: f64 = text.parse().map_err(|e| {
                Error::config("QMETER_TOL", format!("not a decimal float: {e}"))
            })?;
            if !(t > 0.0) {
                return Err(Error::config("QMETER_TOL", "must be positive"));
            }
            return Ok(t);
        }
        Ok(linalg::tol::EQUALITY)
    }
}
