//! Seeded Monte Carlo simulation of the preparation-and-measurement
//! experiment: draw a state by its prior, project onto the detection pair,
//! and tally wrong subset assignments.
//!
//! Reproducibility contract: trial `t` belongs to chunk `t / CHUNK_TRIALS`;
//! chunk `c` consumes ChaCha8 stream `c` of the seed, drawing exactly two
//! uniforms per trial (state selection first, outcome second). Aggregates
//! are sums over chunks, so any partitioning of chunks across workers
//! reproduces the single-threaded result bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::Ensemble;
use crate::solver::DetectionPair;

/// Number of trials served by one RNG stream.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// Trial count and RNG seed for one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
}

/// Outcome tallies of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    /// Fraction of trials assigned to the wrong subset.
    pub error_rate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)` at the plug-in estimate.
    pub stderr: f64,
    /// Per prepared state: `(state index, mu outcomes, nu outcomes)`.
    pub per_state_counts: Vec<(usize, u64, u64)>,
}

/// Runs the experiment: each trial prepares state k with probability
/// `eta_k`, observes outcome `mu` with probability `|<mu|psi_k>|^2` (else
/// `nu`), and counts an error when the outcome points at the wrong subset.
/// Deterministic for a fixed `(ensemble, detection, config)`.
pub fn simulate(ensemble: &Ensemble, detection: &DetectionPair, config: &SimConfig) -> SimResult {
    assert!(config.trials >= 1, "simulation needs at least one trial");

    let n = ensemble.len();
    // Cumulative prior distribution; the final entry is forced to 1 so the
    // last state absorbs any rounding shortfall.
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &p in ensemble.priors() {
        acc += p;
        cdf.push(acc);
    }
    cdf[n - 1] = 1.0;

    let p_mu: Vec<f64> = ensemble
        .states()
        .iter()
        .map(|s| detection.mu().inner(s).norm_sqr().clamp(0.0, 1.0))
        .collect();

    let mut mu_counts = vec![0u64; n];
    let mut nu_counts = vec![0u64; n];

    let chunks = config.trials.div_ceil(CHUNK_TRIALS);
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(chunk);
        let in_chunk = CHUNK_TRIALS.min(config.trials - chunk * CHUNK_TRIALS);
        for _ in 0..in_chunk {
            let u_state: f64 = rng.random();
            let k = cdf.partition_point(|&c| c <= u_state).min(n - 1);
            let u_outcome: f64 = rng.random();
            if u_outcome < p_mu[k] {
                mu_counts[k] += 1;
            } else {
                nu_counts[k] += 1;
            }
        }
    }

    let mut errors = 0u64;
    for k in 0..n {
        errors += if ensemble.in_subset(k) {
            nu_counts[k]
        } else {
            mu_counts[k]
        };
    }
    let error_rate = errors as f64 / config.trials as f64;
    let stderr = (error_rate * (1.0 - error_rate) / config.trials as f64).sqrt();
    SimResult {
        trials: config.trials,
        errors,
        error_rate,
        stderr,
        per_state_counts: (0..n).map(|k| (k, mu_counts[k], nu_counts[k])).collect(),
    }
}

/// Stochastic estimate of the success probability at angles `(phi, chi)`:
/// one minus the simulated error rate of the corresponding measurement.
pub fn estimate_objective(ensemble: &Ensemble, phi: f64, chi: f64, config: &SimConfig) -> f64 {
    let detection = DetectionPair::from_angles(ensemble, phi, chi);
    1.0 - simulate(ensemble, &detection, config).error_rate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{validate_ensemble, PureState2D};
    use crate::solver::solve;
    use num_complex::Complex64;

    fn state(re1: f64, re2: f64) -> PureState2D {
        PureState2D::new(Complex64::new(re1, 0.0), Complex64::new(re2, 0.0)).unwrap()
    }

    fn trine() -> Ensemble {
        let h = 3.0f64.sqrt() / 2.0;
        validate_ensemble(
            vec![state(1.0, 0.0), state(-0.5, -h), state(-0.5, h)],
            vec![1.0 / 3.0; 3],
            1,
        )
        .unwrap()
    }

    #[test]
    fn trine_error_rate_near_one_sixth() {
        let ens = trine();
        let sol = solve(&ens).unwrap();
        let config = SimConfig {
            trials: 1_000_000,
            seed: 17,
        };
        let result = simulate(&ens, sol.detection(), &config);
        assert!((result.error_rate - 1.0 / 6.0).abs() < 3.0 * result.stderr);
    }

    #[test]
    fn deterministic_given_seed() {
        let ens = trine();
        let sol = solve(&ens).unwrap();
        let config = SimConfig {
            trials: 200_000,
            seed: 99,
        };
        let a = simulate(&ens, sol.detection(), &config);
        let b = simulate(&ens, sol.detection(), &config);
        assert_eq!(a, b);
    }

    #[test]
    fn counts_are_exhaustive() {
        let ens = trine();
        let sol = solve(&ens).unwrap();
        let config = SimConfig {
            trials: 100_001, // deliberately not a multiple of the chunk size
            seed: 3,
        };
        let result = simulate(&ens, sol.detection(), &config);
        let total: u64 = result
            .per_state_counts
            .iter()
            .map(|&(_, mu, nu)| mu + nu)
            .sum();
        assert_eq!(total, config.trials);
    }

    #[test]
    fn zero_prior_padding_gives_zero_errors() {
        // All weight on the first state, measured along its own axis.
        let ens =
            validate_ensemble(vec![state(1.0, 0.0), state(0.0, 1.0)], vec![1.0, 0.0], 1).unwrap();
        let detection = DetectionPair::from_angles(&ens, 0.0, 0.0);
        let config = SimConfig {
            trials: 50_000,
            seed: 7,
        };
        let result = simulate(&ens, &detection, &config);
        assert_eq!(result.errors, 0);
    }

    #[test]
    fn swapped_detection_complements_error_rate() {
        let ens = trine();
        let sol = solve(&ens).unwrap();
        // Rotating phi by pi/2 swaps mu and nu up to phase.
        let swapped = DetectionPair::from_angles(
            &ens,
            sol.detection().phi() + std::f64::consts::FRAC_PI_2,
            sol.detection().chi(),
        );
        let config = SimConfig {
            trials: 1_000_000,
            seed: 23,
        };
        let result = simulate(&ens, &swapped, &config);
        assert!((result.error_rate - sol.p_max()).abs() < 3.0 * result.stderr);
    }

    #[test]
    fn estimate_objective_matches_closed_form_at_optimum() {
        let ens = trine();
        let sol = solve(&ens).unwrap();
        let config = SimConfig {
            trials: 1_000_000,
            seed: 41,
        };
        let est = estimate_objective(&ens, sol.detection().phi(), sol.detection().chi(), &config);
        let stderr = (sol.p_max() * (1.0 - sol.p_max()) / config.trials as f64).sqrt();
        assert!((est - sol.p_max()).abs() < 3.0 * stderr);
    }

    #[test]
    fn symmetric_family_estimate_matches_closed_form() {
        let ens = crate::families::make_symmetric(std::f64::consts::PI / 6.0).unwrap();
        let sol = solve(&ens).unwrap();
        let config = SimConfig {
            trials: 1_000_000,
            seed: 67,
        };
        let est = estimate_objective(&ens, sol.detection().phi(), sol.detection().chi(), &config);
        let p_success = 1.0 - (3.0 - 13.0f64.sqrt() / 2.0) / 6.0;
        let stderr = (p_success * (1.0 - p_success) / config.trials as f64).sqrt();
        assert!((est - p_success).abs() < 3.0 * stderr);
    }

    #[test]
    fn maximally_wrong_detection_estimates_zero() {
        let s = state(1.0, 0.0);
        let ens = validate_ensemble(vec![s, s.orthogonal()], vec![0.5, 0.5], 1).unwrap();
        // mu perpendicular to the subset-1 state: every trial misassigns.
        let config = SimConfig {
            trials: 100_000,
            seed: 5,
        };
        let est = estimate_objective(&ens, std::f64::consts::FRAC_PI_2, 0.0, &config);
        assert!(est.abs() < 1e-12);
    }
}
