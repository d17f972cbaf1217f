//! Minimum-error discrimination between two complementary subsets of a set
//! of N non-orthogonal pure states spanning a two-dimensional Hilbert space.
//!
//! Given states `|psi_1>, ..., |psi_N>` with prior probabilities `eta_k`
//! and a boundary M, the task is to decide with the smallest possible error
//! whether a prepared state belongs to `{|psi_1>, ..., |psi_M>}` or to the
//! complement. In 2D the optimal strategy is a von Neumann measurement onto
//! an orthonormal detection pair, and both the measurement and its error
//! probability have closed forms in the state overlaps.
//!
//! The crate provides:
//!
//! - [`ensemble`]: domain types, validation, Gram matrices, and the
//!   canonical 2D embedding of states given in a higher-dimensional basis;
//! - [`solver`]: the closed-form optimum, with dedicated real-state and
//!   three-state code paths for cross-checking;
//! - [`oracle`]: independent verification by brute-force grid maximization
//!   and by the Helstrom trace-norm bound;
//! - [`sim`]: a seeded, reproducible Monte Carlo simulation of the
//!   preparation-and-measurement experiment;
//! - [`families`]: the symmetric three-state families (including the trine
//!   states) and the filtering-vs-individual-discrimination sweep;
//! - [`cli`] and [`io`]: the `qfilter` command-line front end with stable
//!   JSON/CSV serialization.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod families;
pub mod io;
pub mod oracle;
pub mod sim;
pub mod solver;

pub use ensemble::{
    embed_raw, gram, validate_ensemble, Ensemble, OverlapMatrix, PureState2D, RawState,
};
pub use error::{Error, Result};
pub use families::{
    filter_error, individual_error, make_symmetric, make_trine, ratio_sweep, SymmetricFamilyPoint,
};
pub use oracle::{cross_check, grid_maximize, helstrom_bound, HermitianMatrix2, OracleReport};
pub use sim::{estimate_objective, simulate, SimConfig, SimResult};
pub use solver::{objective, solve, solve_real, solve_three, DetectionPair, FilterSolution};
