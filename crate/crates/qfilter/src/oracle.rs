//! Independent verification of the closed-form solver: brute-force grid
//! maximization of the defining success probability, and the Helstrom bound
//! on discriminating the two weighted subset density operators.
//!
//! The trace-norm bound coincides with the projective optimum exactly when
//! the weighted difference `w1 rho1 - w2 rho2` is indefinite; when one
//! subset dominates (both eigenvalues share a sign), guessing the heavier
//! subset outright beats any two-outcome projective measurement and the
//! bound sits strictly above the solver's maximum.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::ensemble::{Ensemble, PureState2D};
use crate::error::Result;
use crate::solver::{solve, Objective};

/// A 2x2 Hermitian matrix, stored as its four complex entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    entries: [[Complex64; 2]; 2],
}

impl HermitianMatrix2 {
    /// Tolerance for the Hermiticity check of externally supplied entries.
    const HERMITICITY_TOL: f64 = 1e-12;

    /// Builds a matrix from explicit entries, verifying finiteness and
    /// Hermiticity.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let finite = entries
            .iter()
            .flatten()
            .all(|c| c.re.is_finite() && c.im.is_finite());
        let defect = (entries[0][0] - entries[0][0].conj())
            .norm()
            .max((entries[1][1] - entries[1][1].conj()).norm())
            .max((entries[0][1] - entries[1][0].conj()).norm());
        if !finite || defect > Self::HERMITICITY_TOL {
            return Err(crate::error::Error::Schema(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self { entries })
    }

    pub fn zero() -> Self {
        Self {
            entries: [[Complex64::ZERO; 2]; 2],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    /// Adds `weight * |state><state|`, keeping exact Hermitian symmetry.
    pub fn add_weighted_projector(&mut self, state: &PureState2D, weight: f64) {
        let (c1, c2) = (state.c1(), state.c2());
        self.entries[0][0] += weight * (c1 * c1.conj());
        self.entries[1][1] += weight * (c2 * c2.conj());
        let off = weight * (c1 * c2.conj());
        self.entries[0][1] += off;
        self.entries[1][0] += off.conj();
    }

    /// Eigenvalues `(lambda_min, lambda_max)` from the closed-form quadratic
    /// in trace and determinant.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let half_gap = (0.25 * (a - d) * (a - d) + self.entries[0][1].norm_sqr()).sqrt();
        let mid = 0.5 * (a + d);
        (mid - half_gap, mid + half_gap)
    }

    /// Trace norm: the sum of the absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        let (lo, hi) = self.eigenvalues();
        lo.abs() + hi.abs()
    }
}

/// The weighted density difference `sum_{k<=M} eta_k P_k - sum_{k>M} eta_k P_k`.
pub fn weighted_difference(ensemble: &Ensemble) -> HermitianMatrix2 {
    let mut gamma = HermitianMatrix2::zero();
    for (k, state) in ensemble.states().iter().enumerate() {
        let sign = if ensemble.in_subset(k) { 1.0 } else { -1.0 };
        gamma.add_weighted_projector(state, sign * ensemble.priors()[k]);
    }
    gamma
}

/// Maximum success probability allowed by the Helstrom bound,
/// `1 - 1/2 (1 - ||w1 rho1 - w2 rho2||)`.
pub fn helstrom_bound(ensemble: &Ensemble) -> f64 {
    0.5 * (1.0 + weighted_difference(ensemble).trace_norm())
}

/// Coarse scan of the success probability over a `steps x steps` uniform
/// grid on `(phi, chi) in [0, pi)^2`, without refinement. Doubling `steps`
/// nests the old grid inside the new one, so the scan maximum never
/// decreases under doubling.
pub fn grid_scan(ensemble: &Ensemble, steps: usize) -> (f64, f64, f64) {
    assert!(steps >= 8, "grid needs at least 8 steps per axis");
    let objective = Objective::new(ensemble);
    let h = PI / steps as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..steps {
        let phi = i as f64 * h;
        for j in 0..steps {
            let chi = j as f64 * h;
            let p = objective.eval(phi, chi);
            if p > best.0 {
                best = (p, phi, chi);
            }
        }
    }
    best
}

/// Brute-force maximization of the success probability: the coarse scan of
/// [`grid_scan`] followed by two refinement rounds that subdivide the
/// winning cell tenfold. The result lands within the refinement resolution
/// `O((pi / (100 steps))^2)` of the true maximum and never exceeds it.
///
/// On the lines `sin(2 phi) = 0` the probability is independent of `chi`,
/// so a coarse maximum there carries no phase information; the first
/// refinement round therefore re-scans the whole phase axis at the
/// subdivided mixing angles before the windows contract.
///
/// Returns `(p_max, phi, chi)` at the best point found.
pub fn grid_maximize(ensemble: &Ensemble, steps: usize) -> (f64, f64, f64) {
    let objective = Objective::new(ensemble);
    let mut best = grid_scan(ensemble, steps);
    let h = PI / steps as f64;

    let coarse = best;
    for i in -10..=10i32 {
        let phi = coarse.1 + i as f64 * h / 10.0;
        for j in 0..2 * steps {
            let chi = j as f64 * h;
            let p = objective.eval(phi, chi);
            if p > best.0 {
                best = (p, phi, chi);
            }
        }
    }

    let mut h = h;
    for _ in 0..2 {
        let fine = h / 10.0;
        let center = best;
        for i in -10..=10i32 {
            let phi = center.1 + i as f64 * fine;
            for j in -10..=10i32 {
                let chi = center.2 + j as f64 * fine;
                let p = objective.eval(phi, chi);
                if p > best.0 {
                    best = (p, phi, chi);
                }
            }
        }
        h = fine;
    }
    best
}

/// Agreement report between the closed form and the two oracles.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub p_max_grid: f64,
    pub phi_grid: f64,
    pub chi_grid: f64,
    pub p_max_helstrom: f64,
    pub p_max_closed: f64,
    pub max_abs_gap: f64,
}

/// Runs the closed-form solver, the grid oracle and the Helstrom oracle,
/// and reports the worst disagreement with the closed form.
pub fn cross_check(ensemble: &Ensemble, steps: usize) -> Result<OracleReport> {
    let closed = solve(ensemble)?;
    let (p_max_grid, phi_grid, chi_grid) = grid_maximize(ensemble, steps);
    let p_max_helstrom = helstrom_bound(ensemble);
    let p_max_closed = closed.p_max();
    let max_abs_gap = (p_max_grid - p_max_closed)
        .abs()
        .max((p_max_helstrom - p_max_closed).abs());
    Ok(OracleReport {
        p_max_grid,
        phi_grid,
        chi_grid,
        p_max_helstrom,
        p_max_closed,
        max_abs_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::validate_ensemble;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state(re1: f64, im1: f64, re2: f64, im2: f64) -> PureState2D {
        PureState2D::new(c(re1, im1), c(re2, im2)).unwrap()
    }

    fn trine() -> Ensemble {
        let h = 3.0f64.sqrt() / 2.0;
        validate_ensemble(
            vec![
                state(1.0, 0.0, 0.0, 0.0),
                state(-0.5, 0.0, -h, 0.0),
                state(-0.5, 0.0, h, 0.0),
            ],
            vec![1.0 / 3.0; 3],
            1,
        )
        .unwrap()
    }

    #[test]
    fn helstrom_matches_closed_form_on_trine() {
        assert_abs_diff_eq!(helstrom_bound(&trine()), 5.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn helstrom_identical_states_reduces_to_prior_comparison() {
        let s = state(0.6, 0.0, 0.8, 0.0);
        for w in [0.2, 0.5, 0.9] {
            let ens = validate_ensemble(vec![s, s], vec![w, 1.0 - w], 1).unwrap();
            assert_abs_diff_eq!(helstrom_bound(&ens), w.max(1.0 - w), epsilon = 1e-14);
        }
    }

    #[test]
    fn grid_finds_trine_optimum() {
        let (p, _, _) = grid_maximize(&trine(), 400);
        assert!((p - 5.0 / 6.0).abs() < 1e-6);
    }

    #[test]
    fn grid_finds_perfect_discrimination_of_orthogonal_pair() {
        let s = state(0.6, 0.0, 0.0, 0.8);
        let ens = validate_ensemble(vec![s, s.orthogonal()], vec![0.5, 0.5], 1).unwrap();
        let (p, _, _) = grid_maximize(&ens, 400);
        assert!((p - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cross_check_trine_is_tight() {
        let report = cross_check(&trine(), 400).unwrap();
        assert!(report.max_abs_gap < 1e-6);
        assert_abs_diff_eq!(report.p_max_closed, 5.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn cross_check_propagates_degenerate_basis() {
        let s = state(1.0, 0.0, 0.0, 0.0);
        let ens = validate_ensemble(vec![s, s.with_phase(0.2)], vec![0.5, 0.5], 1).unwrap();
        assert!(matches!(
            cross_check(&ens, 100),
            Err(Error::DegenerateBasis)
        ));
    }

    #[test]
    fn helstrom_exceeds_projective_when_one_subset_dominates() {
        // Orthonormal pair vs their balanced superposition, with the pair
        // carrying 90% of the weight: the weighted difference is positive
        // definite, so guessing the first subset (0.9) beats the best
        // rank-one projective measurement (0.55).
        let r = 0.5f64.sqrt();
        let ens = validate_ensemble(
            vec![
                state(1.0, 0.0, 0.0, 0.0),
                state(0.0, 0.0, 1.0, 0.0),
                state(r, 0.0, r, 0.0),
            ],
            vec![0.45, 0.45, 0.1],
            2,
        )
        .unwrap();
        let sol = solve(&ens).unwrap();
        assert_abs_diff_eq!(sol.p_max(), 0.55, epsilon = 1e-12);
        assert_abs_diff_eq!(helstrom_bound(&ens), 0.9, epsilon = 1e-12);
        let (lo, hi) = weighted_difference(&ens).eigenvalues();
        assert!(lo > 0.0 && hi > 0.0);
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetric_entries() {
        let bad = [
            [c(1.0, 0.0), c(0.5, 0.5)],
            [c(0.5, 0.5), c(2.0, 0.0)], // should be the conjugate
        ];
        assert!(HermitianMatrix2::new(bad).is_err());
        let good = [[c(1.0, 0.0), c(0.5, 0.5)], [c(0.5, -0.5), c(2.0, 0.0)]];
        assert!(HermitianMatrix2::new(good).is_ok());
    }

    #[test]
    fn closed_form_eigenvalues_match_trace_and_determinant() {
        let m = HermitianMatrix2::new([[c(0.7, 0.0), c(0.2, -0.4)], [c(0.2, 0.4), c(-0.3, 0.0)]])
            .unwrap();
        let (lo, hi) = m.eigenvalues();
        let trace = m.entry(0, 0).re + m.entry(1, 1).re;
        let det = m.entry(0, 0).re * m.entry(1, 1).re - m.entry(0, 1).norm_sqr();
        assert_abs_diff_eq!(lo + hi, trace, epsilon = 1e-14);
        assert_abs_diff_eq!(lo * hi, det, epsilon = 1e-14);
    }
}
