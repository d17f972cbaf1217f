//! Closed-form computation of the optimal two-outcome projective measurement
//! that decides, with minimum error probability, whether a prepared state
//! belongs to the distinguished subset of an ensemble or to its complement.
//!
//! The success probability of a detection state `|mu>` is
//!
//! ```text
//! P(phi, chi) = sum_{k<=M} eta_k |<mu|psi_k>|^2
//!             + sum_{k>M}  eta_k (1 - |<mu|psi_k>|^2)
//! ```
//!
//! with `|mu> = cos(phi)|psi_1> + e^{i chi} sin(phi)|v>` in the orthonormal
//! frame spanned by the first state and the normalized residual `|v>` of a
//! basis partner. Expanding the overlaps reduces this to
//! `1/2 + R cos(2 phi) + |Q| sin(2 phi) cos(chi - arg Q)`, whose maximum
//! `1/2 + sqrt(R^2 + |Q|^2)` is attained in closed form.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::ensemble::{basis_partner, gram, Ensemble, OverlapMatrix, PureState2D};
use crate::error::{Error, Result};

/// Magnitude below which R and Q jointly count as zero, flagging the
/// solution as degenerate (the success probability is 1/2 everywhere).
const DEGENERACY_TOL: f64 = 1e-15;

/// Orthonormal working frame `{|e1>, |v>}` for a given ensemble:
/// `|e1>` is the first state and `|v>` the normalized residual of the basis
/// partner after projecting out `|e1>`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    e1: PureState2D,
    v: PureState2D,
}

impl Frame {
    /// Builds the frame, scanning for a basis partner. Fails when every
    /// state is parallel to the first one.
    fn for_ensemble(ensemble: &Ensemble, overlaps: &OverlapMatrix) -> Result<Self> {
        let partner = basis_partner(overlaps).ok_or(Error::DegenerateBasis)?;
        let e1 = ensemble.states()[0];
        let a = overlaps.entry(0, partner);
        let v = PureState2D::superpose(Complex64::ONE, &ensemble.states()[partner], -a, &e1)?;
        Ok(Self { e1, v })
    }

    /// Like [`Frame::for_ensemble`], but total: when all states are parallel
    /// the second axis is the (unique up to phase) orthogonal complement of
    /// the first state, which leaves every overlap `<v|psi_k>` zero.
    fn with_complement_fallback(ensemble: &Ensemble, overlaps: &OverlapMatrix) -> Self {
        Self::for_ensemble(ensemble, overlaps).unwrap_or_else(|_| Frame {
            e1: ensemble.states()[0],
            v: ensemble.states()[0].orthogonal(),
        })
    }
}

/// The orthonormal detection pair `{|mu>, |nu>}` defining the projective
/// measurement: outcome `mu` infers the distinguished subset, outcome `nu`
/// its complement.
#[derive(Debug, Clone, Copy)]
pub struct DetectionPair {
    phi: f64,
    chi: f64,
    mu: PureState2D,
    nu: PureState2D,
}

impl DetectionPair {
    /// Builds the detection pair for mixing angle `phi` and relative phase
    /// `chi` in the ensemble's working frame:
    /// `|mu> = cos(phi)|e1> + e^{i chi} sin(phi)|v>` and
    /// `|nu> = sin(phi)|e1> - e^{i chi} cos(phi)|v>`.
    pub fn from_angles(ensemble: &Ensemble, phi: f64, chi: f64) -> Self {
        let overlaps = gram(ensemble);
        let frame = Frame::with_complement_fallback(ensemble, &overlaps);
        Self::in_frame(&frame, phi, chi)
    }

    fn in_frame(frame: &Frame, phi: f64, chi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let ph = Complex64::from_polar(1.0, chi);
        let mu = PureState2D::superpose(Complex64::new(c, 0.0), &frame.e1, ph * s, &frame.v)
            .expect("detection state is never the zero vector");
        let nu = PureState2D::superpose(Complex64::new(s, 0.0), &frame.e1, -ph * c, &frame.v)
            .expect("detection state is never the zero vector");
        Self { phi, chi, mu, nu }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Detection state for the distinguished subset.
    pub fn mu(&self) -> &PureState2D {
        &self.mu
    }

    /// Detection state for the complementary subset.
    pub fn nu(&self) -> &PureState2D {
        &self.nu
    }
}

/// Solution of the subset-discrimination problem: the rotation invariants
/// R and Q, the optimal success/error probabilities and the measurement
/// attaining them.
#[derive(Debug, Clone)]
pub struct FilterSolution {
    r: f64,
    q: Complex64,
    p_max: f64,
    p_error: f64,
    detection: DetectionPair,
    degenerate: bool,
}

impl FilterSolution {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// Maximum probability of assigning the state to the correct subset.
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Minimum error probability, `1 - p_max`.
    pub fn p_error(&self) -> f64 {
        self.p_error
    }

    pub fn detection(&self) -> &DetectionPair {
        &self.detection
    }

    /// True when R and Q both vanish: every measurement succeeds with
    /// probability 1/2 and the reported angles are an arbitrary tie-break.
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    fn from_invariants_in_frame(frame: &Frame, r: f64, q: Complex64) -> Self {
        let amplitude = r.hypot(q.norm());
        // atan2 lands 2 phi_e in [0, pi], so sin(2 phi_e) >= 0 and
        // cos(2 phi_e) carries the sign of R, matching the extremum
        // conditions without branch logic.
        let phi_e = q.norm().atan2(r) / 2.0;
        let chi_e = if q.norm() == 0.0 {
            0.0
        } else {
            q.arg().rem_euclid(2.0 * PI)
        };
        FilterSolution {
            r,
            q,
            p_max: 0.5 + amplitude,
            p_error: 0.5 - amplitude,
            detection: DetectionPair::in_frame(frame, phi_e, chi_e),
            degenerate: amplitude <= DEGENERACY_TOL,
        }
    }
}

/// Per-ensemble data for repeated evaluation of the success probability at
/// arbitrary angles: the overlaps of every state with the two frame axes.
pub(crate) struct Objective {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    priors: Vec<f64>,
    subset_size: usize,
}

impl Objective {
    pub(crate) fn new(ensemble: &Ensemble) -> Self {
        let overlaps = gram(ensemble);
        let frame = Frame::with_complement_fallback(ensemble, &overlaps);
        let alpha = ensemble
            .states()
            .iter()
            .map(|s| frame.e1.inner(s))
            .collect();
        let beta = ensemble.states().iter().map(|s| frame.v.inner(s)).collect();
        Self {
            alpha,
            beta,
            priors: ensemble.priors().to_vec(),
            subset_size: ensemble.subset_size(),
        }
    }

    /// Success probability of the measurement defined by `(phi, chi)`,
    /// evaluated directly from the state overlaps.
    pub(crate) fn eval(&self, phi: f64, chi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let ph = Complex64::from_polar(s, -chi);
        let mut p = 0.0;
        for k in 0..self.priors.len() {
            let overlap = (c * self.alpha[k] + ph * self.beta[k]).norm_sqr();
            p += if k < self.subset_size {
                self.priors[k] * overlap
            } else {
                self.priors[k] * (1.0 - overlap)
            };
        }
        p
    }
}

/// Probability of a correct subset assignment for the measurement with
/// angles `(phi, chi)`, evaluated from the defining sum over states.
pub fn objective(ensemble: &Ensemble, phi: f64, chi: f64) -> f64 {
    Objective::new(ensemble).eval(phi, chi)
}

/// Signed sums of the rotation invariants over the two subsets: `op(k)` is
/// added for subset members and subtracted for the complement.
fn signed_sum<T, F>(ensemble: &Ensemble, zero: T, op: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Sub<Output = T> + Copy,
    F: Fn(usize) -> T,
{
    let mut acc = zero;
    for k in 0..ensemble.len() {
        let term = op(k);
        acc = if ensemble.in_subset(k) {
            acc + term
        } else {
            acc - term
        };
    }
    acc
}

fn invariant_r(ensemble: &Ensemble, overlaps: &OverlapMatrix) -> f64 {
    signed_sum(ensemble, 0.0, |k| {
        ensemble.priors()[k] * (overlaps.entry(0, k).norm_sqr() - 0.5)
    })
}

fn invariant_q(ensemble: &Ensemble, overlaps: &OverlapMatrix, partner: usize) -> Complex64 {
    let root = (1.0 - overlaps.entry(0, partner).norm_sqr()).sqrt();
    signed_sum(ensemble, Complex64::ZERO, |k| {
        let a_jk = overlaps.entry(partner, k);
        let a_k1 = overlaps.entry(k, 0);
        let a_j1 = overlaps.entry(partner, 0);
        ensemble.priors()[k] * (a_jk * a_k1 - a_j1 * overlaps.entry(0, k).norm_sqr()) / root
    })
}

/// Solves the subset-discrimination problem in closed form.
///
/// Returns the invariants R and Q, the maximum success probability
/// `1/2 + sqrt(R^2 + |Q|^2)` and the optimal detection pair with
/// `phi_e = atan2(|Q|, R) / 2` and `chi_e = arg Q`. Fails with
/// [`Error::DegenerateBasis`] when every state is parallel to the first,
/// in which case no measurement beats comparing the two subset priors.
pub fn solve(ensemble: &Ensemble) -> Result<FilterSolution> {
    let overlaps = gram(ensemble);
    let partner = basis_partner(&overlaps).ok_or(Error::DegenerateBasis)?;
    let frame = Frame::for_ensemble(ensemble, &overlaps)?;
    let r = invariant_r(ensemble, &overlaps);
    let q = invariant_q(ensemble, &overlaps, partner);
    Ok(FilterSolution::from_invariants_in_frame(&frame, r, q))
}

/// Fast path for ensembles whose frame coordinates are all real.
///
/// With real coordinates `(a_k, b_k)` the invariants reduce to
/// `R = sum± eta_k (a_k^2 - 1/2)` and `Q = sum± eta_k a_k b_k`, where the
/// sign of `b_k` is fixed by the frame convention. The optimal relative
/// phase is 0 for Q >= 0 and pi for Q < 0. Fails with [`Error::NotReal`]
/// when any coordinate has an imaginary part above the tolerance.
pub fn solve_real(ensemble: &Ensemble) -> Result<FilterSolution> {
    const REAL_TOL: f64 = 1e-12;

    let overlaps = gram(ensemble);
    let partner = basis_partner(&overlaps).ok_or(Error::DegenerateBasis)?;
    let frame = Frame::for_ensemble(ensemble, &overlaps)?;
    let root = (1.0 - overlaps.entry(0, partner).norm_sqr()).sqrt();

    let mut coords = Vec::with_capacity(ensemble.len());
    for k in 0..ensemble.len() {
        let a = overlaps.entry(0, k);
        let b = (overlaps.entry(partner, k) - overlaps.entry(partner, 0) * a) / root;
        let imag = a.im.abs().max(b.im.abs());
        if imag > REAL_TOL {
            return Err(Error::NotReal { index: k, imag });
        }
        coords.push((a.re, b.re));
    }

    let r = signed_sum(ensemble, 0.0, |k| {
        let (a, _) = coords[k];
        ensemble.priors()[k] * (a * a - 0.5)
    });
    let q = signed_sum(ensemble, 0.0, |k| {
        let (a, b) = coords[k];
        ensemble.priors()[k] * a * b
    });

    let amplitude = r.hypot(q);
    let phi_e = q.abs().atan2(r) / 2.0;
    let chi_e = if q >= 0.0 { 0.0 } else { PI };
    Ok(FilterSolution {
        r,
        q: Complex64::new(q, 0.0),
        p_max: 0.5 + amplitude,
        p_error: 0.5 - amplitude,
        detection: DetectionPair::in_frame(&frame, phi_e, chi_e),
        degenerate: amplitude <= DEGENERACY_TOL,
    })
}

/// Closed form for filtering the first of three states (N = 3, M = 1).
///
/// Uses the three-state reductions
/// `R = 1/2 - eta_2 |A_12|^2 - eta_3 |A_13|^2`,
/// `|Q|^2 = eta_2^2 |A_12|^2 (1 - |A_12|^2) + eta_3^2 |A_13|^2 (1 - |A_13|^2)
///        + 2 eta_2 eta_3 (Re(A_12 A_23 A_31) - |A_12|^2 |A_13|^2)`,
/// and the success probability written directly in terms of the overlaps.
/// Fails with [`Error::Shape`] on any other ensemble shape.
pub fn solve_three(ensemble: &Ensemble) -> Result<FilterSolution> {
    if ensemble.len() != 3 || ensemble.subset_size() != 1 {
        return Err(Error::Shape {
            n: ensemble.len(),
            subset_size: ensemble.subset_size(),
        });
    }
    let overlaps = gram(ensemble);
    let partner = basis_partner(&overlaps).ok_or(Error::DegenerateBasis)?;
    let frame = Frame::for_ensemble(ensemble, &overlaps)?;

    let (eta2, eta3) = (ensemble.priors()[1], ensemble.priors()[2]);
    let x2 = overlaps.entry(0, 1).norm_sqr();
    let x3 = overlaps.entry(0, 2).norm_sqr();
    let triple = (overlaps.entry(0, 1) * overlaps.entry(1, 2) * overlaps.entry(2, 0)).re;

    let r = 0.5 - eta2 * x2 - eta3 * x3;
    let q_sq = eta2 * eta2 * x2 * (1.0 - x2)
        + eta3 * eta3 * x3 * (1.0 - x3)
        + 2.0 * eta2 * eta3 * (triple - x2 * x3);
    debug_assert!(q_sq > -1e-12, "|Q|^2 must be non-negative, got {q_sq:e}");
    let q_abs = q_sq.max(0.0).sqrt();

    let disc = 1.0 - 4.0 * (eta2 * (1.0 - eta2) * x2 + eta3 * (1.0 - eta3) * x3)
        + 8.0 * eta2 * eta3 * triple;
    debug_assert!(
        disc > -1e-12,
        "discriminant must be non-negative, got {disc:e}"
    );
    let p_max = 0.5 + 0.5 * disc.max(0.0).sqrt();

    // The reductions fix R and |Q| but not the phase of Q; take it from the
    // general signed sum, which is the only piece the short forms omit.
    let chi_q = invariant_q(ensemble, &overlaps, partner).arg();
    let q = Complex64::from_polar(q_abs, chi_q);

    let phi_e = q_abs.atan2(r) / 2.0;
    let chi_e = if q_abs == 0.0 {
        0.0
    } else {
        chi_q.rem_euclid(2.0 * PI)
    };
    let amplitude = r.hypot(q_abs);
    Ok(FilterSolution {
        r,
        q,
        p_max,
        p_error: 1.0 - p_max,
        detection: DetectionPair::in_frame(&frame, phi_e, chi_e),
        degenerate: amplitude <= DEGENERACY_TOL,
    })
}
