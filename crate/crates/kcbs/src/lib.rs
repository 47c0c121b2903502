//! Simulation and analysis of a quantum key distribution protocol built on
//! the KCBS contextuality scenario.
//!
//! The crate is organized bottom-up:
//!
//! * [`qutrit`]: exact 3- and 9-dimensional pure-state algebra, Born-rule
//!   probabilities and seeded projective measurements.
//! * [`scenario`]: the five KCBS projectors, their pentagon orthogonality
//!   structure and both forms of the KCBS functional.
//! * [`graph`]: exact graph algorithms over compatibility graphs and the
//!   monogamy certificate for the Alice-Bob / Alice-Eve joint scenario.
//! * [`protocol`]: the prepare-and-measure (and entanglement-assisted)
//!   protocol, sifting, key statistics and the security verdict.
//! * [`adversary`]: intercept-resend eavesdroppers and an exact
//!   density-matrix oracle for their expected statistics.
//! * [`report`]: machine-readable reports and transcript export.
//!
//! A quick look at the headline numbers:
//!
//! ```
//! use kcbs::qutrit::QutritState;
//! use kcbs::scenario::{ktilde, KcbsBasis};
//!
//! let basis = KcbsBasis::standard();
//! let axis = QutritState::from_real([0.0, 0.0, 1.0]).unwrap();
//! let value = ktilde(&axis, &basis);
//! assert!((value - 5f64.sqrt() / 5.0).abs() < 1e-12);
//! assert!(value > 0.4);
//! ```

pub mod adversary;
mod error;
pub mod graph;
pub mod protocol;
pub mod qutrit;
pub mod report;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};

/// The chapters of the guide under `book/`, compiled as doc-tests so that
/// every snippet in the book keeps building against the current API.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/qutrits.md")]
    pub mod qutrits {}
    #[doc = include_str!("../../../book/src/kcbs.md")]
    pub mod kcbs {}
    #[doc = include_str!("../../../book/src/monogamy.md")]
    pub mod monogamy {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    pub mod protocol {}
    #[doc = include_str!("../../../book/src/adversary.md")]
    pub mod adversary {}
    #[doc = include_str!("../../../book/src/reports.md")]
    pub mod reports {}
}
