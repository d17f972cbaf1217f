//! Domain types for ensembles of pure states restricted to a two-dimensional
//! Hilbert space, plus overlap (Gram) computation and the canonical 2D
//! embedding of states given in an arbitrary higher-dimensional basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for stored normalization invariants (unit norms, prior sums).
pub const NORM_TOL: f64 = 1e-12;

/// Default tolerance for numerical rank decisions when embedding raw states.
/// Looser than [`NORM_TOL`]: a state that is almost, but not exactly, inside
/// the 2D span is a different failure mode than a mistyped amplitude.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Threshold below which two states count as parallel when scanning for a
/// basis partner: a partner must satisfy |<psi_1|psi_k>| < 1 - 1e-9.
const PARALLEL_TOL: f64 = 1e-9;

/// A normalized pure state in a fixed two-dimensional orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2D {
    c1: Complex64,
    c2: Complex64,
}

impl PureState2D {
    /// Builds a state from its two amplitudes, checking finiteness and
    /// unit norm within [`NORM_TOL`].
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        for c in [c1, c2] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::Normalization {
                    what: "state amplitude".into(),
                    value: f64::NAN,
                    tol: NORM_TOL,
                });
            }
        }
        let norm_sq = c1.norm_sqr() + c2.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization {
                what: "state norm^2".into(),
                value: norm_sq,
                tol: NORM_TOL,
            });
        }
        Ok(Self { c1, c2 })
    }

    /// Amplitude on the first basis state.
    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    /// Amplitude on the second basis state.
    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    /// The state multiplied by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let ph = Complex64::from_polar(1.0, theta);
        Self {
            c1: ph * self.c1,
            c2: ph * self.c2,
        }
    }

    /// The orthogonal complement `(-c2*, c1*)`, unique up to phase in 2D.
    pub fn orthogonal(&self) -> Self {
        Self {
            c1: -self.c2.conj(),
            c2: self.c1.conj(),
        }
    }

    /// Linear combination `a |x> + b |y>` renormalized onto the unit sphere.
    /// Returns an error if the combination is (numerically) the zero vector.
    pub fn superpose(a: Complex64, x: &Self, b: Complex64, y: &Self) -> Result<Self> {
        let c1 = a * x.c1 + b * y.c1;
        let c2 = a * x.c2 + b * y.c2;
        let norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
        if norm < 1e-14 {
            return Err(Error::DegenerateBasis);
        }
        Ok(Self {
            c1: c1 / norm,
            c2: c2 / norm,
        })
    }
}

/// A normalized state given by its amplitudes in an arbitrary orthonormal
/// basis of a d-dimensional space, before the 2D-span check.
#[derive(Debug, Clone, PartialEq)]
pub struct RawState {
    amplitudes: Vec<Complex64>,
}

impl RawState {
    /// Builds a raw state, checking finiteness and unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Schema("raw state with zero amplitudes".into()));
        }
        for c in &amplitudes {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::Normalization {
                    what: "raw state amplitude".into(),
                    value: f64::NAN,
                    tol: NORM_TOL,
                });
            }
        }
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization {
                what: "raw state norm^2".into(),
                value: norm_sq,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    /// The amplitudes in their original basis.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `<self|other>`. Both states must have the same dimension.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.amplitudes.len(), other.amplitudes.len());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl From<PureState2D> for RawState {
    fn from(s: PureState2D) -> Self {
        Self {
            amplitudes: vec![s.c1(), s.c2()],
        }
    }
}

/// An ensemble of N two-dimensional pure states with prior probabilities and
/// a subset boundary: states `1..=M` form the distinguished subset, states
/// `M+1..=N` its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<PureState2D>,
    priors: Vec<f64>,
    subset_size: usize,
}

impl Ensemble {
    /// Validates and builds an ensemble. Priors must be finite, non-negative
    /// and sum to 1 within [`NORM_TOL`]; the boundary must satisfy 1 <= M < N.
    /// Zero priors are allowed and retained.
    pub fn new(states: Vec<PureState2D>, priors: Vec<f64>, subset_size: usize) -> Result<Self> {
        if states.len() != priors.len() {
            return Err(Error::LengthMismatch {
                states: states.len(),
                priors: priors.len(),
            });
        }
        let n = states.len();
        if n < 2 || subset_size < 1 || subset_size >= n {
            return Err(Error::Partition { subset_size, n });
        }
        for &p in &priors {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Normalization {
                    what: "prior".into(),
                    value: p,
                    tol: NORM_TOL,
                });
            }
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization {
                what: "prior sum".into(),
                value: sum,
                tol: NORM_TOL,
            });
        }
        Ok(Self {
            states,
            priors,
            subset_size,
        })
    }

    pub fn states(&self) -> &[PureState2D] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Number of states in the distinguished subset.
    pub fn subset_size(&self) -> usize {
        self.subset_size
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Total prior weight of the distinguished subset.
    pub fn subset_weight(&self) -> f64 {
        self.priors[..self.subset_size].iter().sum()
    }

    /// Total prior weight of the complementary subset.
    pub fn complement_weight(&self) -> f64 {
        self.priors[self.subset_size..].iter().sum()
    }

    /// True when state k belongs to the distinguished subset.
    pub fn in_subset(&self, k: usize) -> bool {
        k < self.subset_size
    }
}

/// Validates and builds an [`Ensemble`]; alias for [`Ensemble::new`].
pub fn validate_ensemble(
    states: Vec<PureState2D>,
    priors: Vec<f64>,
    subset_size: usize,
) -> Result<Ensemble> {
    Ensemble::new(states, priors, subset_size)
}

/// The Hermitian matrix of pairwise overlaps `A_kl = <psi_k|psi_l>`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl OverlapMatrix {
    fn from_inner_products<F>(n: usize, inner: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let mut entries = vec![Complex64::ZERO; n * n];
        for k in 0..n {
            for l in k..n {
                let a = inner(k, l);
                entries[k * n + l] = a;
                entries[l * n + k] = a.conj();
            }
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The overlap `A_kl`.
    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.entries[k * self.n + l]
    }

    /// Eigenvalues in ascending order. The matrix is Hermitian by
    /// construction, so they are real.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_fn(self.n, self.n, |r, c| self.entry(r, c));
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Largest deviation from Hermitian symmetry, `max |A_kl - conj(A_lk)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.n {
            for l in 0..self.n {
                worst = worst.max((self.entry(k, l) - self.entry(l, k).conj()).norm());
            }
        }
        worst
    }

    /// Largest deviation of a diagonal entry from 1.
    pub fn diagonal_defect(&self) -> f64 {
        (0..self.n)
            .map(|k| (self.entry(k, k) - Complex64::ONE).norm())
            .fold(0.0, f64::max)
    }
}

/// Computes the overlap matrix of an ensemble.
pub fn gram(ensemble: &Ensemble) -> OverlapMatrix {
    let states = ensemble.states();
    OverlapMatrix::from_inner_products(states.len(), |k, l| states[k].inner(&states[l]))
}

/// Overlap matrix of a list of raw states (all must share one dimension).
pub fn gram_raw(states: &[RawState]) -> OverlapMatrix {
    OverlapMatrix::from_inner_products(states.len(), |k, l| states[k].inner(&states[l]))
}

/// Index of the state used as basis partner for `|psi_1>`: among the states
/// with |A_1k| < 1 - 1e-9, the one with the smallest overlap magnitude,
/// which keeps the residual `|psi_k> - A_1k |psi_1>` as far from the zero
/// vector as the ensemble allows (earliest index wins ties). `None` means
/// every state is parallel to the first one.
pub fn basis_partner(overlaps: &OverlapMatrix) -> Option<usize> {
    (1..overlaps.n())
        .map(|k| (k, overlaps.entry(0, k).norm()))
        .filter(|&(_, a)| a < 1.0 - PARALLEL_TOL)
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .map(|(k, _)| k)
}

/// Embeds raw d-dimensional states into canonical 2D coordinates.
///
/// The target basis is `{|psi_1>, |v>}` where `|v>` is the normalized
/// component of the basis partner (see [`basis_partner`]) orthogonal to
/// `|psi_1>`. In that basis state k has coordinates
/// `(A_1k, (A_jk - A_j1 A_1k) / sqrt(1 - |A_1j|^2))` with j the partner
/// index, which fixes the phase convention so that the partner's second
/// coordinate is real and non-negative. All pairwise inner products are
/// preserved.
///
/// Fails with [`Error::Rank`] when the Gram matrix of the inputs has
/// numerical rank above 2 (third-largest eigenvalue above `tol`), and with
/// [`Error::DegenerateBasis`] when all states are parallel.
pub fn embed_raw(raw_states: &[RawState], tol: f64) -> Result<Vec<PureState2D>> {
    if raw_states.len() < 2 {
        return Err(Error::Schema(format!(
            "embedding needs at least two states, got {}",
            raw_states.len()
        )));
    }
    let dim = raw_states[0].amplitudes().len();
    if let Some(bad) = raw_states.iter().find(|s| s.amplitudes().len() != dim) {
        return Err(Error::Schema(format!(
            "raw states mix dimensions {} and {}",
            dim,
            bad.amplitudes().len()
        )));
    }

    let overlaps = gram_raw(raw_states);
    let n = overlaps.n();
    if n > 2 {
        let ev = overlaps.eigenvalues();
        let third_largest = ev[n - 3];
        if third_largest > tol {
            return Err(Error::Rank {
                eigenvalue: third_largest,
                tol,
            });
        }
    }

    let partner = basis_partner(&overlaps).ok_or(Error::DegenerateBasis)?;
    let root = (1.0 - overlaps.entry(0, partner).norm_sqr()).sqrt();

    (0..n)
        .map(|k| {
            let c1 = overlaps.entry(0, k);
            let c2 = (overlaps.entry(partner, k)
                - overlaps.entry(partner, 0) * overlaps.entry(0, k))
                / root;
            // Inputs that are only approximately rank-2 leave the projected
            // norm slightly off 1; renormalize before the strict constructor.
            let norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
            if (norm - 1.0).abs() > tol.sqrt() {
                return Err(Error::Rank {
                    eigenvalue: (norm - 1.0).abs(),
                    tol,
                });
            }
            PureState2D::new(c1 / norm, c2 / norm)
        })
        .collect()
}
