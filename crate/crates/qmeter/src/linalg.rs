//! Dense complex matrix algebra: tensor products, partial traces, PSD square
//! roots, isometry completion, and √ρ-regularized commutator traces.
//!
//! Everything here works on [`CMatrix`] (`nalgebra::DMatrix<Complex64>`) and is
//! sized for desk-scale dimensions (≤ ~64). A single Hermitian
//! eigendecomposition, [`eigh`], backs every spectral construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense complex square (or rectangular) matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Default tolerances used by validators throughout the crate.
pub mod tol {
    /// Absolute tolerance for operator equality checks (Frobenius norm).
    pub const EQUALITY: f64 = 1e-10;
    /// Eigenvalues above `-EIGEN_CLAMP` are clamped to zero in PSD roots.
    pub const EIGEN_CLAMP: f64 = 1e-10;
    /// Eigenvalue clustering width for spectral decompositions.
    pub const CLUSTER: f64 = 1e-8;
    /// Commutator norm tolerance for compatibility checks.
    pub const COMPAT: f64 = 1e-8;
    /// Outcomes with probability at or below this floor have no posterior state.
    pub const P_FLOOR: f64 = 1e-12;
    /// Frobenius tolerance for Choi-matrix comparisons.
    pub const CHOI: f64 = 1e-9;
    /// Tolerance on first-moment operator equality in unbiasedness checks.
    pub const UNBIASED: f64 = 1e-9;
}

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Real number promoted to a complex scalar.
pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `dim × dim` identity.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Standard basis vector `|k⟩` in dimension `dim`.
pub fn basis_vector(dim: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[k] = ONE;
    v
}

/// Matrix unit `|i⟩⟨j|` in dimension `dim`.
pub fn matrix_unit(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

/// Rank-one operator `|u⟩⟨v|`.
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Pauli σx.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Pauli σy.
pub fn pauli_y() -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
}

/// Pauli σz.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `Tr[a·b]` without forming the product matrix.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut s = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Frobenius distance from Hermiticity, `‖m − m†‖`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Checks Hermiticity within `tol` (Frobenius norm).
pub fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let deviation = hermiticity_defect(m);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    Ok(())
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Frobenius deviation of `u` from unitarity, `‖u†u − 1‖`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.ncols())).norm()
}

/// Checks unitarity within `tol`.
pub fn check_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    let deviation = unitarity_defect(u);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Kronecker product with the index convention `(i₁, i₂) ↦ i₁·dim₂ + i₂`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Which tensor factor a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    /// Keep the first (left) factor, trace out the second.
    First,
    /// Keep the second (right) factor, trace out the first.
    Second,
}

/// Partial trace of an operator on a bipartite space with factor dimensions
/// `(dim_first, dim_second)`, under the same index convention as
/// [`tensor_product`].
pub fn partial_trace(
    x: &CMatrix,
    dim_first: usize,
    dim_second: usize,
    keep: Keep,
) -> Result<CMatrix> {
    let n = dim_first * dim_second;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace: operator is {}×{}, expected {n}×{n}",
            x.nrows(),
            x.ncols()
        )));
    }
    match keep {
        Keep::First => {
            let mut out = CMatrix::zeros(dim_first, dim_first);
            for i in 0..dim_first {
                for j in 0..dim_first {
                    let mut s = ZERO;
                    for k in 0..dim_second {
                        s += x[(i * dim_second + k, j * dim_second + k)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
        Keep::Second => {
            let mut out = CMatrix::zeros(dim_second, dim_second);
            for i in 0..dim_second {
                for j in 0..dim_second {
                    let mut s = ZERO;
                    for k in 0..dim_first {
                        s += x[(k * dim_second + i, k * dim_second + j)];
                    }
                    out[(i, j)] = s;
                }
            }
            Ok(out)
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching unitary of
/// eigenvectors (columns). The input is checked Hermitian within
/// [`tol::EQUALITY`] and symmetrized before decomposition.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m, tol::EQUALITY)?;
    if m.nrows() == 0 {
        return Err(Error::DimensionMismatch("eigh: empty matrix".into()));
    }
    if m.nrows() == 1 {
        return Ok((vec![m[(0, 0)].re], identity(1)));
    }
    let se = nalgebra::linalg::SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let columns: Vec<CVector> =
        order.iter().map(|&k| se.eigenvectors.column(k).into_owned()).collect();
    Ok((values, CMatrix::from_columns(&columns)))
}

/// Hermitian PSD square root.
///
/// Eigenvalues in `[-clamp, 0)` are clamped to zero; an eigenvalue below
/// `-clamp` is an error. The result `s` is Hermitian PSD with `s·s`
/// reproducing the (clamped) input.
pub fn psd_sqrt(p: &CMatrix, clamp: f64) -> Result<CMatrix> {
    let (values, vectors) = eigh(p)?;
    if let Some(&min) = values.first() {
        if min < -clamp {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    let roots = CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| cr(v.max(0.0).sqrt())),
    );
    Ok(&vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint())
}

/// Moore–Penrose inverse square root of a Hermitian PSD matrix.
///
/// Eigenvalues at or below `rank_floor` are dropped from the inverse.
pub fn psd_inv_sqrt(p: &CMatrix, clamp: f64, rank_floor: f64) -> Result<CMatrix> {
    let (values, vectors) = eigh(p)?;
    if let Some(&min) = values.first() {
        if min < -clamp {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    let inv = CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| if v > rank_floor { cr(1.0 / v.sqrt()) } else { ZERO }),
    );
    Ok(&vectors * CMatrix::from_diagonal(&inv) * vectors.adjoint())
}

/// Unitary `exp(−i·angle·h)` of a Hermitian generator.
pub fn unitary_exp(h: &CMatrix, angle: f64) -> Result<CMatrix> {
    let (values, vectors) = eigh(h)?;
    let phases = CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::from_polar(1.0, -angle * v)),
    );
    Ok(&vectors * CMatrix::from_diagonal(&phases) * vectors.adjoint())
}

/// A linear map `V: Cⁿ → Cᵐ` (m ≥ n) with orthonormal columns.
#[derive(Clone, Debug)]
pub struct Isometry {
    matrix: CMatrix,
}

impl Isometry {
    /// Wraps a matrix after checking `V†V = 1` within [`tol::EQUALITY`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tol(matrix, tol::EQUALITY)
    }

    /// Wraps a matrix after checking `V†V = 1` within `tol`.
    pub fn with_tol(matrix: CMatrix, tol: f64) -> Result<Self> {
        if matrix.nrows() < matrix.ncols() || matrix.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "isometry must be tall: got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = (matrix.adjoint() * &matrix - identity(matrix.ncols())).norm();
        if deviation > tol {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Isometry { matrix })
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Completes an isometry to a unitary whose first `in_dim` columns are the
/// isometry's columns, verbatim.
///
/// The remaining columns are seeded pseudo-random vectors orthonormalized by
/// modified Gram–Schmidt (two passes); the result is deterministic per seed.
pub fn complete_isometry(v: &Isometry, seed: u64) -> CMatrix {
    let out_dim = v.out_dim();
    let mut columns: Vec<CVector> =
        v.matrix().column_iter().map(|c| c.into_owned()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while columns.len() < out_dim {
        let mut w = gaussian_vector(out_dim, &mut rng);
        for _ in 0..2 {
            for c in &columns {
                let overlap = c.dotc(&w);
                w -= c * overlap;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            columns.push(w / cr(norm));
        }
    }
    CMatrix::from_columns(&columns)
}

/// √ρ-regularized commutator trace `Tr[[x, y] ρ]`, evaluated as
/// `Tr[(x√ρ)†·y√ρ − (y√ρ)†·x√ρ]`.
///
/// Purely imaginary when `x` and `y` are Hermitian.
pub fn commutator_trace(x: &CMatrix, y: &CMatrix, rho: &CMatrix) -> Result<Complex64> {
    let dim = rho.nrows();
    if x.nrows() != dim || x.ncols() != dim || y.nrows() != dim || y.ncols() != dim {
        return Err(Error::DimensionMismatch(
            "commutator_trace: operator and state dimensions differ".into(),
        ));
    }
    let root = psd_sqrt(rho, tol::EIGEN_CLAMP)?;
    let xs = x * &root;
    let ys = y * &root;
    Ok(trace_product(&xs.adjoint(), &ys) - trace_product(&ys.adjoint(), &xs))
}

/// Second moment `Tr[m² ρ]` through the √ρ regularization
/// `Tr[(m√ρ)†·m√ρ]`; `m` must be Hermitian.
pub fn regularized_second_moment(m: &CMatrix, rho: &CMatrix) -> Result<f64> {
    check_hermitian(m, tol::EQUALITY)?;
    let root = psd_sqrt(rho, tol::EIGEN_CLAMP)?;
    Ok((m * root).norm_squared())
}

pub(crate) fn gaussian_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    CVector::from_iterator(dim, (0..dim).map(|_| gaussian_complex(rng)))
}

/// Standard complex Gaussian sample via Box–Muller.
pub(crate) fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * th.cos(), r * th.sin()) * cr(std::f64::consts::FRAC_1_SQRT_2)
}
