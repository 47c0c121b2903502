//! The KCBS measurement scenario: five rank-1 projectors on a qutrit whose
//! orthogonality graph is a pentagon, and the two functionals built on them.
//!
//! * The projector form `K̃ = (1/5) Σ P(Π_i = 1)`.
//! * The anti-correlation form `K = (1/5) Σ P(X_i ≠ X_{i+1})` with
//!   `X_i = 2Π_i − I`.
//!
//! Adjacent projectors are orthogonal, so each pair `(Π_i, Π_{i+1})` is
//! jointly measurable and its joint distribution is exact:
//! `P(1,1) = 0`, `P(1,0) = P_i`, `P(0,1) = P_{i+1}`. Hence
//! `P(X_i ≠ X_{i+1}) = P_i + P_{i+1}` and `K = 2 K̃` for every state.

use nalgebra::Matrix3 as NMatrix3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::graph::{ContextGraph, EdgeKind};
use crate::qutrit::{born_probability, Complex, Matrix3, Projector, QutritState};
use crate::{Error, Result};

/// Default tolerance for deciding that two projectors are orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// Five projectors indexed `0..5`, with the vectors they were built from.
#[derive(Clone, Debug, PartialEq)]
pub struct KcbsBasis {
    vectors: [QutritState; 5],
    projectors: [Projector; 5],
}

/// The five vectors of the standard construction, un-normalized, entry by
/// entry. The third component is `sqrt(cos(π/5))` throughout and the first
/// two trace out a regular pentagram in the plane.
pub fn standard_raw_vectors() -> [[f64; 3]; 5] {
    let z = (PI / 5.0).cos().sqrt();
    let (c2, s2) = ((2.0 * PI / 5.0).cos(), (2.0 * PI / 5.0).sin());
    let (c4, s4) = ((4.0 * PI / 5.0).cos(), (4.0 * PI / 5.0).sin());
    [
        [1.0, 0.0, z],
        [c4, -s4, z],
        [c2, s2, z],
        [c2, -s2, z],
        [c4, s4, z],
    ]
}

impl KcbsBasis {
    /// Builds a basis without checking the pentagon structure.
    pub fn new(vectors: [QutritState; 5]) -> Self {
        let projectors = vectors.map(|v| Projector::from_state(&v));
        Self {
            vectors,
            projectors,
        }
    }

    /// Builds a basis and rejects it unless it realizes the pentagon.
    pub fn pentagon(vectors: [QutritState; 5]) -> Result<Self> {
        let basis = Self::new(vectors);
        basis.check_pentagon(ORTHOGONALITY_TOL)?;
        Ok(basis)
    }

    /// The standard basis (normalized on load).
    pub fn standard() -> Self {
        let raw = standard_raw_vectors();
        Self::new(raw.map(|r| QutritState::from_real(r).expect("standard vectors are nonzero")))
    }

    pub fn vector(&self, i: usize) -> &QutritState {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[QutritState; 5] {
        &self.vectors
    }

    pub fn projector(&self, i: usize) -> &Projector {
        &self.projectors[i]
    }

    pub fn projectors(&self) -> &[Projector; 5] {
        &self.projectors
    }

    /// `Tr(Π_i Π_j)`.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.projectors[i].trace_product(&self.projectors[j])
    }

    /// Relabels the basis: the new `m`-th projector is the old `perm[m]`-th.
    pub fn permuted(&self, perm: [usize; 5]) -> Self {
        Self::new(perm.map(|p| self.vectors[p]))
    }

    /// Neighbors must be orthogonal (within `tol`); distance-2 pairs must not
    /// be (overlap above 1e-6).
    pub fn check_pentagon(&self, tol: f64) -> Result<()> {
        for i in 0..5 {
            let next = (i + 1) % 5;
            let adj = self.overlap(i, next).abs();
            if adj > tol {
                return Err(Error::NotPentagon(format!(
                    "Tr(Π_{i} Π_{next}) = {adj:e} exceeds {tol:e}"
                )));
            }
            let skip = (i + 2) % 5;
            let far = self.overlap(i, skip);
            if far <= 1e-6 {
                return Err(Error::NotPentagon(format!(
                    "Tr(Π_{i} Π_{skip}) = {far:e} should be nonzero"
                )));
            }
        }
        Ok(())
    }

    /// `(1/5) Σ Π_i`; its top eigenvalue is the largest quantum value of K̃.
    pub fn average_projector(&self) -> Matrix3 {
        self.projectors
            .iter()
            .fold(Matrix3::zero(), |acc, p| acc.add(p.matrix()))
            .scale(0.2)
    }
}

impl Default for KcbsBasis {
    fn default() -> Self {
        Self::standard()
    }
}

/// Orthogonality graph of a basis: an exclusive edge for each pair with
/// `Tr(Π_i Π_j) < tol`.
pub fn orthogonality_graph(basis: &KcbsBasis, tol: f64) -> Result<ContextGraph> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::BadTolerance(tol));
    }
    let mut g = ContextGraph::new((0..5).map(|i| format!("Π_{i}")).collect())?;
    for i in 0..5 {
        for j in i + 1..5 {
            if basis.overlap(i, j) < tol {
                g.add_edge(i, j, EdgeKind::Exclusive)?;
            }
        }
    }
    Ok(g)
}

/// Projector-form KCBS value `(1/5) Σ P_i`.
pub fn ktilde(state: &QutritState, basis: &KcbsBasis) -> f64 {
    basis
        .projectors()
        .iter()
        .map(|p| born_probability(state, p))
        .sum::<f64>()
        / 5.0
}

/// Anti-correlation-form KCBS value, using the exact joint distribution of
/// each commuting adjacent pair.
pub fn k_anticorr(state: &QutritState, basis: &KcbsBasis) -> f64 {
    let probs: Vec<f64> = basis
        .projectors()
        .iter()
        .map(|p| born_probability(state, p))
        .collect();
    (0..5)
        .map(|i| {
            let pair = JointPair::exclusive(probs[i], probs[(i + 1) % 5]);
            pair.p10 + pair.p01
        })
        .sum::<f64>()
        / 5.0
}

/// Joint outcome distribution of two jointly measurable projectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointPair {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

impl JointPair {
    /// Orthogonal projectors never both click.
    pub fn exclusive(p_first: f64, p_second: f64) -> Self {
        Self {
            p11: 0.0,
            p10: p_first,
            p01: p_second,
            p00: (1.0 - p_first - p_second).max(0.0),
        }
    }
}

/// Largest value of [`ktilde`] over all pure states, with a maximizer.
pub fn ktilde_max(basis: &KcbsBasis) -> (f64, QutritState) {
    let avg = basis.average_projector();
    let m = NMatrix3::from_fn(|i, j| avg.get(i, j));
    let eig = m.symmetric_eigen();
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let col = eig.eigenvectors.column(idx);
    let state = QutritState::new([col[0], col[1], col[2]]).expect("eigenvector is nonzero");
    (value, state)
}

/// The constants of the KCBS scenario as they are usually quoted.
///
/// The anti-correlation pair (`noncontextual_anticorr_form`,
/// `quantum_anticorr_form`) does not match what the exclusivity identity
/// `K = 2K̃` gives; see [`DerivedBounds`] for the values computed here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KcbsBounds {
    pub noncontextual_projector_form: f64,
    pub quantum_projector_form: f64,
    pub exclusivity_max: f64,
    pub noncontextual_anticorr_form: f64,
    pub quantum_anticorr_form: f64,
    pub algebraic_anticorr_max: f64,
    /// Monogamy bound on `K̃(A,B) + K̃(A,E)`.
    pub monogamy_projector_form: f64,
    /// Monogamy bound on `K(A,B) + K(A,E)` as quoted.
    pub monogamy_anticorr_form: f64,
    /// Alice-Bob anti-correlation needed for a secure key.
    pub security_threshold: f64,
}

pub fn bounds() -> KcbsBounds {
    let sqrt5 = 5f64.sqrt();
    KcbsBounds {
        noncontextual_projector_form: 2.0 / 5.0,
        quantum_projector_form: sqrt5 / 5.0,
        exclusivity_max: 1.0 / 2.0,
        noncontextual_anticorr_form: 3.0 / 5.0,
        quantum_anticorr_form: (4.0 * sqrt5 - 5.0) / 5.0,
        algebraic_anticorr_max: 1.0,
        monogamy_projector_form: 4.0 / 5.0,
        monogamy_anticorr_form: 6.0 / 5.0,
        security_threshold: 5.0 / 8.0,
    }
}

/// Values recomputed here from first principles, reported next to
/// [`KcbsBounds`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedBounds {
    /// Max over exclusivity-respecting 0/1 assignments of the pentagon of
    /// the number of ones, over 5.
    pub noncontextual_projector_form: f64,
    /// Top eigenvalue of the average projector.
    pub quantum_projector_form: f64,
    /// Max over exclusivity-respecting assignments of the number of
    /// anti-correlated edges, over 5.
    pub noncontextual_anticorr_form: f64,
    /// `k_anticorr` at the maximizer of `ktilde`.
    pub quantum_anticorr_form: f64,
    /// Monogamy bound on `K` obtained by doubling the projector-form bound.
    pub monogamy_anticorr_form: f64,
}

/// Both sets of constants, side by side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KcbsConstants {
    pub paper: KcbsBounds,
    pub derived: DerivedBounds,
}

pub fn derived_bounds(basis: &KcbsBasis) -> DerivedBounds {
    let pentagon = crate::graph::pentagon();
    let mut best_ones = 0usize;
    let mut best_anti = 0usize;
    crate::graph::for_each_assignment(&pentagon, |a| {
        best_ones = best_ones.max(a.ones());
        let anti = (0..5).filter(|&i| a.value(i) != a.value((i + 1) % 5)).count();
        best_anti = best_anti.max(anti);
    });
    let (qmax, maximizer) = ktilde_max(basis);
    DerivedBounds {
        noncontextual_projector_form: best_ones as f64 / 5.0,
        quantum_projector_form: qmax,
        noncontextual_anticorr_form: best_anti as f64 / 5.0,
        quantum_anticorr_form: k_anticorr(&maximizer, basis),
        monogamy_anticorr_form: 2.0 * bounds().monogamy_projector_form,
    }
}

pub fn constants(basis: &KcbsBasis) -> KcbsConstants {
    KcbsConstants {
        paper: bounds(),
        derived: derived_bounds(basis),
    }
}

/// Convenience: a state from three complex amplitudes given as `(re, im)`.
pub fn state_from_pairs(pairs: [(f64, f64); 3]) -> Result<QutritState> {
    QutritState::new(pairs.map(|(re, im)| Complex::new(re, im)))
}
