//! Ensemble file parsing and deterministic serialization of results.
//!
//! Input schema (exactly one of `states` / `raw_states`):
//!
//! ```json
//! { "states": [[[re, im], [re, im]], ...], "priors": [...], "subset_size": M }
//! { "raw_states": [[[re, im], ...], ...], "priors": [...], "subset_size": M }
//! ```
//!
//! Outputs are single-line JSON (or CSV for sweeps) with fixed field order
//! and fixed-width float formatting, so identical inputs produce
//! byte-identical files: JSON floats carry 17 significant digits
//! (round-trip exact for doubles), CSV values 15.

use num_complex::Complex64;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::Path;

use crate::ensemble::{embed_raw, validate_ensemble, Ensemble, PureState2D, RawState};
use crate::error::{Error, Result};
use crate::families::SymmetricFamilyPoint;
use crate::oracle::OracleReport;
use crate::sim::SimResult;
use crate::solver::FilterSolution;

/// 17 significant digits: exact round trip for IEEE doubles.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// 15 significant digits, used for CSV sweep output.
fn fmt_f64_csv(x: f64) -> String {
    format!("{x:.14e}")
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_state(s: &PureState2D) -> String {
    format!("[{},{}]", fmt_complex(s.c1()), fmt_complex(s.c2()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    #[serde(default)]
    states: Option<Vec<[[f64; 2]; 2]>>,
    #[serde(default)]
    raw_states: Option<Vec<Vec<[f64; 2]>>>,
    priors: Vec<f64>,
    subset_size: usize,
}

/// Parses an ensemble from JSON text. Raw states are embedded into 2D
/// coordinates with the given rank tolerance.
pub fn parse_ensemble(text: &str, rank_tol: f64) -> Result<Ensemble> {
    let file: EnsembleFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let states = match (file.states, file.raw_states) {
        (Some(_), Some(_)) => {
            return Err(Error::Schema(
                "exactly one of \"states\" and \"raw_states\" must be present, found both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Schema(
                "exactly one of \"states\" and \"raw_states\" must be present, found neither"
                    .into(),
            ))
        }
        (Some(states), None) => states
            .iter()
            .enumerate()
            .map(|(k, s)| {
                PureState2D::new(
                    Complex64::new(s[0][0], s[0][1]),
                    Complex64::new(s[1][0], s[1][1]),
                )
                .map_err(|e| at_state(k, e))
            })
            .collect::<Result<Vec<_>>>()?,
        (None, Some(raw)) => {
            let raw_states = raw
                .iter()
                .enumerate()
                .map(|(k, amps)| {
                    RawState::new(
                        amps.iter()
                            .map(|a| Complex64::new(a[0], a[1]))
                            .collect::<Vec<_>>(),
                    )
                    .map_err(|e| at_state(k, e))
                })
                .collect::<Result<Vec<_>>>()?;
            embed_raw(&raw_states, rank_tol)?
        }
    };
    validate_ensemble(states, file.priors, file.subset_size)
}

fn at_state(index: usize, e: Error) -> Error {
    match e {
        Error::Normalization { what, value, tol } => Error::Normalization {
            what: format!("state {index}: {what}"),
            value,
            tol,
        },
        other => other,
    }
}

/// Reads and parses an ensemble file.
pub fn load_ensemble(path: &Path, rank_tol: f64) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path)?;
    parse_ensemble(&text, rank_tol)
}

/// Serializes an ensemble back to the `states` form of the input schema.
pub fn ensemble_json(ensemble: &Ensemble) -> String {
    let states: Vec<String> = ensemble.states().iter().map(fmt_state).collect();
    let priors: Vec<String> = ensemble.priors().iter().map(|&p| fmt_f64(p)).collect();
    format!(
        "{{\"states\":[{}],\"priors\":[{}],\"subset_size\":{}}}\n",
        states.join(","),
        priors.join(","),
        ensemble.subset_size()
    )
}

/// Serializes a solver result.
pub fn filter_solution_json(solution: &FilterSolution) -> String {
    format!(
        "{{\"p_max\":{},\"p_error\":{},\"R\":{},\"Q\":{},\"phi_e\":{},\"chi_e\":{},\"mu\":{},\"nu\":{},\"degenerate\":{}}}\n",
        fmt_f64(solution.p_max()),
        fmt_f64(solution.p_error()),
        fmt_f64(solution.r()),
        fmt_complex(solution.q()),
        fmt_f64(solution.detection().phi()),
        fmt_f64(solution.detection().chi()),
        fmt_state(solution.detection().mu()),
        fmt_state(solution.detection().nu()),
        solution.degenerate(),
    )
}

/// Serializes an oracle cross-check report.
pub fn oracle_report_json(report: &OracleReport) -> String {
    format!(
        "{{\"p_max_grid\":{},\"phi_grid\":{},\"chi_grid\":{},\"p_max_helstrom\":{},\"p_max_closed\":{},\"max_abs_gap\":{}}}\n",
        fmt_f64(report.p_max_grid),
        fmt_f64(report.phi_grid),
        fmt_f64(report.chi_grid),
        fmt_f64(report.p_max_helstrom),
        fmt_f64(report.p_max_closed),
        fmt_f64(report.max_abs_gap),
    )
}

/// Serializes a simulation result.
pub fn sim_result_json(result: &SimResult) -> String {
    let counts: Vec<String> = result
        .per_state_counts
        .iter()
        .map(|&(k, mu, nu)| format!("[{k},{mu},{nu}]"))
        .collect();
    format!(
        "{{\"trials\":{},\"errors\":{},\"error_rate\":{},\"stderr\":{},\"per_state_counts\":[{}]}}\n",
        result.trials,
        result.errors,
        fmt_f64(result.error_rate),
        fmt_f64(result.stderr),
        counts.join(","),
    )
}

/// Serializes a sweep as CSV with a header row.
pub fn sweep_csv(points: &[SymmetricFamilyPoint]) -> String {
    let mut out =
        String::from("beta,p_err_filter_formula,p_err_filter_solver,p_err_individual,ratio\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64_csv(p.beta),
            fmt_f64_csv(p.p_err_filter),
            fmt_f64_csv(p.p_err_filter_solver),
            fmt_f64_csv(p.p_err_individual),
            fmt_f64_csv(p.ratio),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::gram;

    #[test]
    fn parses_states_form() {
        let text = r#"{
            "states": [[[1.0, 0.0], [0.0, 0.0]], [[0.6, 0.0], [0.8, 0.0]]],
            "priors": [0.5, 0.5],
            "subset_size": 1
        }"#;
        let ens = parse_ensemble(text, 1e-9).unwrap();
        assert_eq!(ens.len(), 2);
        assert!((gram(&ens).entry(0, 1).re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn parses_raw_states_form_and_embeds() {
        let r = 0.5f64;
        let text = format!(
            r#"{{
                "raw_states": [
                    [[{r}, 0.0], [{r}, 0.0], [{r}, 0.0], [{r}, 0.0]],
                    [[{r}, 0.0], [-{r}, 0.0], [{r}, 0.0], [-{r}, 0.0]]
                ],
                "priors": [0.5, 0.5],
                "subset_size": 1
            }}"#
        );
        let ens = parse_ensemble(&text, 1e-9).unwrap();
        assert_eq!(ens.len(), 2);
        assert!(gram(&ens).entry(0, 1).norm() < 1e-12);
    }

    #[test]
    fn rejects_both_and_neither_state_forms() {
        let both = r#"{"states": [], "raw_states": [], "priors": [], "subset_size": 1}"#;
        assert!(matches!(parse_ensemble(both, 1e-9), Err(Error::Schema(_))));
        let neither = r#"{"priors": [0.5, 0.5], "subset_size": 1}"#;
        assert!(matches!(
            parse_ensemble(neither, 1e-9),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"states": [[[1,0],[0,0]],[[0,0],[1,0]]], "priors": [0.5,0.5], "subset_size": 1, "extra": 3}"#;
        assert!(matches!(parse_ensemble(text, 1e-9), Err(Error::Schema(_))));
    }

    #[test]
    fn bad_prior_sum_names_the_sum() {
        let text =
            r#"{"states": [[[1,0],[0,0]],[[0,0],[1,0]]], "priors": [0.5,0.4], "subset_size": 1}"#;
        let err = parse_ensemble(text, 1e-9).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("0.9"), "message was: {message}");
    }

    #[test]
    fn unnormalized_state_names_its_index() {
        let text = r#"{"states": [[[1,0],[0,0]],[[0.5,0],[0.5,0]]], "priors": [0.5,0.5], "subset_size": 1}"#;
        let err = parse_ensemble(text, 1e-9).unwrap_err();
        assert!(err.to_string().contains("state 1"), "got: {err}");
    }

    #[test]
    fn linearly_independent_3d_raw_states_rank_error() {
        let text = r#"{
            "raw_states": [
                [[1,0],[0,0],[0,0]],
                [[0,0],[1,0],[0,0]],
                [[0,0],[0,0],[1,0]]
            ],
            "priors": [0.4, 0.3, 0.3],
            "subset_size": 1
        }"#;
        assert!(matches!(
            parse_ensemble(text, 1e-9),
            Err(Error::Rank { .. })
        ));
    }

    #[test]
    fn float_formatting_is_round_trip_exact() {
        for &x in &[
            1.0 / 3.0,
            0.1,
            1.0 / 6.0,
            std::f64::consts::PI,
            -2.2250738585072014e-308,
            0.0,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "failed for {s}");
        }
    }

    #[test]
    fn ensemble_json_round_trips() {
        let text = r#"{"states": [[[1,0],[0,0]],[[0.6,0],[0.8,0]]], "priors": [0.25,0.75], "subset_size": 1}"#;
        let ens = parse_ensemble(text, 1e-9).unwrap();
        let serialized = ensemble_json(&ens);
        let reparsed = parse_ensemble(&serialized, 1e-9).unwrap();
        assert_eq!(ens, reparsed);
    }
}
