//! Generators and closed-form error probabilities for the symmetric
//! three-state families: three equally probable states
//! `cos(beta)|u1> + e^{i 2 pi (k-1)/3} sin(beta)|u2>` with
//! `0 < beta <= pi/4`, filtered with respect to the first state, and the
//! comparison against discriminating all three states individually.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::ensemble::{validate_ensemble, Ensemble, PureState2D};
use crate::error::{Error, Result};
use crate::solver::solve;

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 && beta <= FRAC_PI_4 + 1e-15 {
        Ok(())
    } else {
        Err(Error::Domain {
            detail: format!("beta = {beta} outside (0, pi/4]"),
        })
    }
}

/// The symmetric family member at mixing angle `beta`: three states with
/// equal priors and the first state distinguished.
pub fn make_symmetric(beta: f64) -> Result<Ensemble> {
    check_beta(beta)?;
    let (s, c) = beta.sin_cos();
    let states = (0..3)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            PureState2D::new(Complex64::new(c, 0.0), phase * s)
        })
        .collect::<Result<Vec<_>>>()?;
    validate_ensemble(states, vec![1.0 / 3.0; 3], 1)
}

/// The trine states: `|u1>` and `-1/2 (|u1> +- sqrt(3) |u2>)`, equally
/// probable, first state distinguished.
pub fn make_trine() -> Ensemble {
    let h = 3.0f64.sqrt() / 2.0;
    let states = vec![
        PureState2D::new(Complex64::new(1.0, 0.0), Complex64::ZERO).unwrap(),
        PureState2D::new(Complex64::new(-0.5, 0.0), Complex64::new(-h, 0.0)).unwrap(),
        PureState2D::new(Complex64::new(-0.5, 0.0), Complex64::new(h, 0.0)).unwrap(),
    ];
    validate_ensemble(states, vec![1.0 / 3.0; 3], 1).expect("trine ensemble is valid")
}

/// Minimum error probability for filtering one symmetric state from the
/// other two: `[3 - sqrt(1 + 3 sin^2(2 beta))] / 6`.
pub fn filter_error(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let s2 = (2.0 * beta).sin();
    Ok((3.0 - (1.0 + 3.0 * s2 * s2).sqrt()) / 6.0)
}

/// Minimum error probability for discriminating all three symmetric states
/// individually: `[2 - sin(2 beta)] / 3`.
pub fn individual_error(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((2.0 - (2.0 * beta).sin()) / 3.0)
}

/// One grid point of the filtering-vs-individual comparison sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFamilyPoint {
    pub beta: f64,
    /// Closed-form filtering error.
    pub p_err_filter: f64,
    /// Filtering error recomputed through the general solver.
    pub p_err_filter_solver: f64,
    /// Closed-form individual-discrimination error.
    pub p_err_individual: f64,
    /// `p_err_filter / p_err_individual`.
    pub ratio: f64,
}

/// Sweeps `beta` over a uniform grid, carrying both closed-form errors and
/// the solver's value at every point. The solver must reproduce the closed
/// form to 1e-10; a larger gap is an internal inconsistency and panics.
pub fn ratio_sweep(
    beta_min: f64,
    beta_max: f64,
    points: usize,
) -> Result<Vec<SymmetricFamilyPoint>> {
    if points < 2 {
        return Err(Error::Domain {
            detail: format!("sweep needs at least 2 points, got {points}"),
        });
    }
    if beta_min >= beta_max {
        return Err(Error::Domain {
            detail: format!("empty sweep range [{beta_min}, {beta_max}]"),
        });
    }
    check_beta(beta_min)?;
    check_beta(beta_max)?;

    let step = (beta_max - beta_min) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let beta = beta_min + i as f64 * step;
            let p_err_filter = filter_error(beta)?;
            let p_err_individual = individual_error(beta)?;
            let solution = solve(&make_symmetric(beta)?)?;
            let p_err_filter_solver = solution.p_error();
            assert!(
                (p_err_filter_solver - p_err_filter).abs() < 1e-10,
                "solver disagrees with closed form at beta = {beta}: {p_err_filter_solver} vs {p_err_filter}"
            );
            Ok(SymmetricFamilyPoint {
                beta,
                p_err_filter,
                p_err_filter_solver,
                p_err_individual,
                ratio: p_err_filter / p_err_individual,
            })
        })
        .collect()
}
