//! Pure qutrit states, rank-1 projectors and projective measurements.
//!
//! Everything is double precision. States are normalized when they are
//! built, so the Born rule below never divides by a norm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::rng::RngStream;
use crate::{Error, Result};

pub type Complex = Complex64;

/// Norms below this are treated as the zero vector.
pub const MIN_NORM: f64 = 1e-12;

/// Branch probabilities closer than this to 0 or 1 are snapped, so a sampled
/// branch always has a non-degenerate post-measurement state.
const BRANCH_EPS: f64 = 1e-15;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// A normalized vector in C^3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Complex; 3]", into = "[Complex; 3]")]
pub struct QutritState([Complex; 3]);

impl QutritState {
    /// Normalizes `amplitudes`; fails if the vector is (numerically) zero.
    pub fn new(amplitudes: [Complex; 3]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm >= MIN_NORM) || !norm.is_finite() {
            return Err(Error::Unnormalizable(norm));
        }
        Ok(Self(amplitudes.map(|a| a / norm)))
    }

    pub fn from_real(amplitudes: [f64; 3]) -> Result<Self> {
        Self::new(amplitudes.map(|x| Complex::new(x, 0.0)))
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(k: usize) -> Self {
        let mut a = [ZERO; 3];
        a[k] = ONE;
        Self(a)
    }

    pub fn amplitudes(&self) -> &[Complex; 3] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|a| a.conj()))
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        inner_product(self, other).norm_sqr()
    }

    /// Equality up to a global phase.
    pub fn same_ray(&self, other: &Self, tol: f64) -> bool {
        (1.0 - self.overlap(other)).abs() <= tol
    }
}

impl TryFrom<[Complex; 3]> for QutritState {
    type Error = Error;

    fn try_from(a: [Complex; 3]) -> Result<Self> {
        Self::new(a)
    }
}

impl From<QutritState> for [Complex; 3] {
    fn from(s: QutritState) -> Self {
        s.0
    }
}

/// `⟨a|b⟩`, conjugating `a`.
pub fn inner_product(a: &QutritState, b: &QutritState) -> Complex {
    a.0.iter().zip(&b.0).map(|(x, y)| x.conj() * y).sum()
}

/// A 3x3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3(pub [[Complex; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self(m)
    }

    pub fn zero() -> Self {
        Self([[ZERO; 3]; 3])
    }

    pub fn outer(a: &[Complex; 3], b: &[Complex; 3]) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j].conj();
            }
        }
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.0[i][j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Self(m)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= rhs.0[i][j];
            }
        }
        Self(m)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += rhs.0[i][j];
            }
        }
        Self(m)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[j][i].conj();
            }
        }
        Self(m)
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn apply(&self, v: &[Complex; 3]) -> [Complex; 3] {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// `⟨s|M|s⟩`.
    pub fn expectation(&self, s: &QutritState) -> Complex {
        let ms = self.apply(s.amplitudes());
        s.0.iter().zip(&ms).map(|(a, b)| a.conj() * b).sum()
    }
}

/// A rank-1 orthogonal projector `|v⟩⟨v|`.
///
/// The generating unit vector is kept alongside the matrix; the entangled
/// collapse needs it to read off the partner's conditional state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projector {
    vector: QutritState,
    matrix: Matrix3,
}

impl Projector {
    pub fn from_state(v: &QutritState) -> Self {
        Self {
            vector: *v,
            matrix: Matrix3::outer(v.amplitudes(), v.amplitudes()),
        }
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.matrix
    }

    pub fn vector(&self) -> &QutritState {
        &self.vector
    }

    /// `I − P`.
    pub fn complement(&self) -> Matrix3 {
        Matrix3::identity().sub(&self.matrix)
    }

    /// Real part of `Tr(P Q)`; equals `|⟨p|q⟩|²` for rank-1 projectors.
    pub fn trace_product(&self, other: &Projector) -> f64 {
        self.matrix.mul(&other.matrix).trace().re
    }

    pub fn idempotence_defect(&self) -> f64 {
        self.matrix.mul(&self.matrix).sub(&self.matrix).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.sub(&self.matrix.adjoint()).max_abs()
    }
}

pub fn projector_from_state(v: &QutritState) -> Projector {
    Projector::from_state(v)
}

/// `⟨s|P|s⟩`, clamped to `[0, 1]`.
pub fn born_probability(state: &QutritState, p: &Projector) -> f64 {
    p.vector.overlap(state).clamp(0.0, 1.0)
}

/// Outcome of a two-outcome projective measurement `{P, I − P}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    /// 1 for `P`, 0 for `I − P`.
    pub outcome: u8,
    pub post_state: QutritState,
}

/// Samples the measurement `{P, I − P}` on `state` and collapses it.
pub fn measure(state: &QutritState, p: &Projector, rng: &mut RngStream) -> Measurement {
    let prob = snap(born_probability(state, p));
    let click = rng.bernoulli(prob);
    let post = if click {
        // For a rank-1 projector the collapsed state is the ray of P itself.
        *p.vector()
    } else {
        let rest = p.complement().apply(state.amplitudes());
        QutritState::new(rest).expect("sampled branch has positive probability")
    };
    Measurement {
        outcome: click as u8,
        post_state: post,
    }
}

fn snap(p: f64) -> f64 {
    if p < BRANCH_EPS {
        0.0
    } else if p > 1.0 - BRANCH_EPS {
        1.0
    } else {
        p
    }
}

/// A normalized vector in C^3 ⊗ C^3, ordered `|jk⟩` with `j` on Alice's side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQutritState([Complex; 9]);

impl TwoQutritState {
    pub fn new(amplitudes: [Complex; 9]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm >= MIN_NORM) || !norm.is_finite() {
            return Err(Error::Unnormalizable(norm));
        }
        Ok(Self(amplitudes.map(|a| a / norm)))
    }

    /// `(|00⟩ + |11⟩ + |22⟩)/√3`.
    pub fn maximally_entangled() -> Self {
        let mut a = [ZERO; 9];
        let w = Complex::new(1.0 / 3f64.sqrt(), 0.0);
        a[0] = w;
        a[4] = w;
        a[8] = w;
        Self(a)
    }

    pub fn product(a: &QutritState, b: &QutritState) -> Self {
        let mut out = [ZERO; 9];
        for j in 0..3 {
            for k in 0..3 {
                out[3 * j + k] = a.0[j] * b.0[k];
            }
        }
        Self(out)
    }

    pub fn amplitudes(&self) -> &[Complex; 9] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `(⟨v| ⊗ I)|ψ⟩`, the unnormalized partner vector for Alice's ray `v`.
    fn contract_first(&self, v: &QutritState) -> [Complex; 3] {
        let mut out = [ZERO; 3];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| v.0[j].conj() * self.0[3 * j + k]).sum();
        }
        out
    }
}

/// Result of Alice measuring `{P ⊗ I, (I − P) ⊗ I}` on a shared pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Collapse {
    /// Outcome 1; Bob holds this pure state.
    Click(QutritState),
    /// Outcome 0; the round is abandoned.
    NoClick,
}

/// Probability that Alice's `P ⊗ I` clicks on `psi`.
pub fn entangled_click_probability(psi: &TwoQutritState, p: &Projector) -> f64 {
    let partner = psi.contract_first(p.vector());
    partner.iter().map(|a| a.norm_sqr()).sum::<f64>().clamp(0.0, 1.0)
}

/// Alice measures her half of `psi` with `{P ⊗ I, (I − P) ⊗ I}`.
///
/// Because `P` is rank 1, `(P ⊗ I)|ψ⟩ = |v⟩ ⊗ (⟨v| ⊗ I)|ψ⟩` is always a
/// product, so Bob's conditional state on a click is pure.
pub fn entangled_collapse(psi: &TwoQutritState, p: &Projector, rng: &mut RngStream) -> Collapse {
    let partner = psi.contract_first(p.vector());
    let prob = snap(partner.iter().map(|a| a.norm_sqr()).sum::<f64>().clamp(0.0, 1.0));
    if rng.bernoulli(prob) {
        Collapse::Click(QutritState::new(partner).expect("sampled branch has positive probability"))
    } else {
        Collapse::NoClick
    }
}
