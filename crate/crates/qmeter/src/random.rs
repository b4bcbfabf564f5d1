//! Seeded random fixtures: states, observables, POMs, instruments.
//!
//! Used by the randomized verification suites and the violation search; all
//! constructions are deterministic for a given RNG stream.

use rand::Rng;

use crate::instrument::Instrument;
use crate::linalg::{self, cr, gaussian_complex, gaussian_vector, tol, CMatrix, CVector};
use crate::observable::Observable;
use crate::pom::Pom;
use crate::state::DensityState;

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-ish random unit vector.
pub fn unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v = gaussian_vector(dim, rng);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / cr(norm);
        }
    }
}

/// Random unitary from Gram–Schmidt on a Gaussian matrix.
pub fn unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let mut columns: Vec<CVector> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut w = gaussian_vector(dim, rng);
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

/// Random Hermitian matrix with O(1) spectral spread.
pub fn hermitian(dim: usize, rng: &mut impl Rng) -> CMatrix {
    linalg::hermitize(&gaussian_matrix(dim, dim, rng))
}

/// Full-rank random density state (normalized G†G).
pub fn density(dim: usize, rng: &mut impl Rng) -> DensityState {
    let g = gaussian_matrix(dim, dim, rng);
    let p = g.adjoint() * &g;
    let trace = p.trace();
    DensityState::new(p / trace).expect("normalized Gram matrix is a state")
}

/// Random pure state.
pub fn pure(dim: usize, rng: &mut impl Rng) -> DensityState {
    DensityState::pure(&unit_vector(dim, rng)).expect("unit vector")
}

/// Random sharp observable: spectral decomposition of a random Hermitian.
pub fn observable(dim: usize, rng: &mut impl Rng) -> Observable {
    loop {
        if let Ok(obs) = Observable::spectral(&hermitian(dim, rng), tol::CLUSTER) {
            return obs;
        }
    }
}

/// Random POM with `n_outcomes` effects: Gram matrices `Gᵢ†Gᵢ` squeezed
/// through `S^{−1/2}(·)S^{−1/2}` so they sum to the identity. Outcome labels
/// are draws from [−2, 2], sorted.
pub fn pom(dim: usize, n_outcomes: usize, rng: &mut impl Rng) -> Pom {
    loop {
        let grams: Vec<CMatrix> = (0..n_outcomes)
            .map(|_| {
                let g = gaussian_matrix(dim, dim, rng);
                g.adjoint() * g
            })
            .collect();
        let mut total = CMatrix::zeros(dim, dim);
        for g in &grams {
            total += g;
        }
        let Ok(whiten) = linalg::psd_inv_sqrt(&total, tol::EIGEN_CLAMP, 1e-9) else {
            continue;
        };
        let effects: Vec<CMatrix> =
            grams.iter().map(|g| linalg::hermitize(&(&whiten * g * &whiten))).collect();
        let outcomes = distinct_labels(n_outcomes, rng);
        if let Ok(pom) = Pom::new(outcomes, effects) {
            return pom;
        }
    }
}

/// Random instrument: Gaussian Kraus operators polar-normalized onto the
/// completeness constraint `Σ K†K = 1`.
pub fn instrument(
    dim: usize,
    n_outcomes: usize,
    max_kraus: usize,
    rng: &mut impl Rng,
) -> Instrument {
    loop {
        let counts: Vec<usize> = (0..n_outcomes).map(|_| rng.random_range(1..=max_kraus)).collect();
        let raw: Vec<Vec<CMatrix>> = counts
            .iter()
            .map(|&c| (0..c).map(|_| gaussian_matrix(dim, dim, rng)).collect())
            .collect();
        let mut total = CMatrix::zeros(dim, dim);
        for set in &raw {
            for k in set {
                total += k.adjoint() * k;
            }
        }
        let Ok(whiten) = linalg::psd_inv_sqrt(&total, tol::EIGEN_CLAMP, 1e-9) else {
            continue;
        };
        let kraus_sets: Vec<Vec<CMatrix>> =
            raw.into_iter().map(|set| set.into_iter().map(|k| k * &whiten).collect()).collect();
        let outcomes = distinct_labels(n_outcomes, rng);
        if let Ok(t) = Instrument::new(outcomes, kraus_sets) {
            return t;
        }
    }
}

/// Random instrument whose associated POM is unbiased and compatible for the
/// returned observable, drawn from three families: Lüders, left-rotated
/// unsharp (`Wₖ√Eₖ` with random unitaries `Wₖ`), and measure-and-prepare.
///
/// Left unitary rotations change the state reduction but leave `K†K` — and
/// hence the associated POM — untouched.
pub fn unbiased_compatible_instrument(
    dim: usize,
    rng: &mut impl Rng,
) -> (Instrument, Observable) {
    loop {
        let obs = zero_sum_observable(dim, rng);
        let family = rng.random_range(0..3u8);
        let t = match family {
            0 => Instrument::luders(&obs),
            1 => {
                let eta = 0.2 + 0.8 * rng.random::<f64>();
                let Ok(pom) = Pom::unsharp(&obs, eta, true) else { continue };
                let kraus_sets: Vec<Vec<CMatrix>> = pom
                    .effects()
                    .iter()
                    .map(|e| {
                        let root = linalg::psd_sqrt(e, tol::EIGEN_CLAMP).expect("PSD effect");
                        vec![unitary(dim, rng) * root]
                    })
                    .collect();
                match Instrument::new(pom.outcomes().to_vec(), kraus_sets) {
                    Ok(t) => t,
                    Err(_) => continue,
                }
            }
            _ => {
                let prepared = pure(dim, rng);
                match Instrument::measure_prepare(&obs, &prepared) {
                    Ok(t) => t,
                    Err(_) => continue,
                }
            }
        };
        return (t, obs);
    }
}

/// Random POM compatible with the given observable: effects are classical
/// smearings `Eₖ = Σₗ cₖₗ Pₗ` with a column-stochastic matrix `c`, so every
/// effect commutes with every projector.
pub fn compatible_pom(a: &crate::observable::Observable, n_outcomes: usize, rng: &mut impl Rng) -> Pom {
    loop {
        let n_proj = a.len();
        let mut columns = vec![vec![0.0f64; n_outcomes]; n_proj];
        for column in &mut columns {
            let mut total = 0.0;
            for w in column.iter_mut() {
                *w = rng.random::<f64>() + 1e-3;
                total += *w;
            }
            for w in column.iter_mut() {
                *w /= total;
            }
        }
        let dim = a.dim();
        let effects: Vec<CMatrix> = (0..n_outcomes)
            .map(|k| {
                let mut e = CMatrix::zeros(dim, dim);
                for (l, p) in a.projectors().iter().enumerate() {
                    e += p * cr(columns[l][k]);
                }
                e
            })
            .collect();
        let outcomes = distinct_labels(n_outcomes, rng);
        if let Ok(pom) = Pom::new(outcomes, effects) {
            return pom;
        }
    }
}

/// Random observable whose outcome labels sum to zero, so its unsharp
/// smearing with rescaled labels stays unbiased.
pub fn zero_sum_observable(dim: usize, rng: &mut impl Rng) -> Observable {
    loop {
        let obs = observable(dim, rng);
        let shift = obs.outcomes().iter().sum::<f64>() / obs.len() as f64;
        let labels: Vec<f64> = obs.outcomes().iter().map(|a| a - shift).collect();
        if let Ok(centered) = Observable::new(labels, obs.projectors().to_vec()) {
            return centered;
        }
    }
}

fn distinct_labels(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let mut labels: Vec<f64> = (0..n).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect();
        labels.sort_by(f64::total_cmp);
        if labels.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return labels;
        }
    }
}
