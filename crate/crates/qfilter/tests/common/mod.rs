//! Shared generators for the integration suites: seeded random ensembles,
//! random raw-state embeddings, and small helpers.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use qfilter::ensemble::{validate_ensemble, Ensemble, PureState2D, RawState};
use qfilter::oracle::weighted_difference;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A state drawn from the unitarily invariant distribution on the 2D unit
/// sphere: squared weight of the first axis uniform in [0, 1], phases
/// uniform.
pub fn random_state(rng: &mut ChaCha8Rng) -> PureState2D {
    let u: f64 = rng.random();
    let alpha: f64 = rng.random::<f64>() * 2.0 * PI;
    let beta: f64 = rng.random::<f64>() * 2.0 * PI;
    PureState2D::new(
        Complex64::from_polar((1.0 - u).sqrt(), alpha),
        Complex64::from_polar(u.sqrt(), beta),
    )
    .expect("construction is normalized")
}

pub fn random_priors(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|&x| x / sum).collect()
}

/// A random ensemble with `n` states and a random boundary.
pub fn random_ensemble(rng: &mut ChaCha8Rng, n: usize) -> Ensemble {
    let states: Vec<PureState2D> = (0..n).map(|_| random_state(rng)).collect();
    let priors = random_priors(rng, n);
    let subset_size = rng.random_range(1..n);
    validate_ensemble(states, priors, subset_size).expect("generated ensemble is valid")
}

/// A random ensemble restricted to the regime where the weighted subset
/// difference is indefinite, i.e. where a rank-one projective measurement
/// genuinely discriminates and the trace-norm bound is attained. Ensembles
/// dominated by one subset are resampled.
pub fn random_indefinite_ensemble(rng: &mut ChaCha8Rng, n: usize) -> Ensemble {
    loop {
        let ens = random_ensemble(rng, n);
        let (lo, hi) = weighted_difference(&ens).eigenvalues();
        if lo < -1e-9 && hi > 1e-9 {
            return ens;
        }
    }
}

/// Random ensemble whose frame coordinates are all real: real unit vectors
/// in the 2D plane.
pub fn random_real_ensemble(rng: &mut ChaCha8Rng, n: usize) -> Ensemble {
    let states: Vec<PureState2D> = (0..n)
        .map(|_| {
            let t: f64 = rng.random::<f64>() * 2.0 * PI;
            PureState2D::new(Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0))
                .expect("unit circle point is normalized")
        })
        .collect();
    let priors = random_priors(rng, n);
    let subset_size = rng.random_range(1..n);
    validate_ensemble(states, priors, subset_size).expect("generated ensemble is valid")
}

/// Embeds 2D states into a `dim`-dimensional space through a random
/// isometry (two orthonormalized Gaussian-like columns).
pub fn lift_to_raw(rng: &mut ChaCha8Rng, states: &[PureState2D], dim: usize) -> Vec<RawState> {
    assert!(dim >= 2);
    let column = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        (0..dim)
            .map(|_| {
                Complex64::from_polar(rng.random::<f64>() + 0.1, rng.random::<f64>() * 2.0 * PI)
            })
            .collect()
    };
    let normalize = |v: &mut Vec<Complex64>| {
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= norm);
    };
    let mut e1 = column(rng);
    normalize(&mut e1);
    let mut e2 = column(rng);
    let overlap: Complex64 = e1.iter().zip(&e2).map(|(a, b)| a.conj() * b).sum();
    for (a, b) in e2.iter_mut().zip(&e1) {
        *a -= overlap * b;
    }
    normalize(&mut e2);

    states
        .iter()
        .map(|s| {
            let amps: Vec<Complex64> = (0..dim).map(|i| s.c1() * e1[i] + s.c2() * e2[i]).collect();
            let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            RawState::new(amps.iter().map(|c| c / norm).collect())
                .expect("isometry is norm-preserving")
        })
        .collect()
}
