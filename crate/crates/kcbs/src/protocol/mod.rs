//! The key distribution protocol.
//!
//! Each round Alice picks a setting `i` and sends `|v_i⟩` (or, in the
//! entanglement-assisted mode, steers Bob's half of a maximally entangled
//! pair onto it). Bob picks `j`, measures `{Π_j, I − Π_j}` and only then
//! announces `j`. The round is sifted by how `j` relates to `i`:
//!
//! | case | relation      | Bob (no Eve) | Alice writes |
//! |------|---------------|--------------|--------------|
//! | C1   | `j = i`       | 1            | 0            |
//! | C2   | `j = i ± 1`   | 0            | 1            |
//! | C3   | otherwise     | random       | nothing      |
//!
//! so every sifted round carries an anti-correlated bit pair. C3 rounds are
//! kept in the transcript but never enter the key or the security test.
//!
//! Rounds draw from their own random stream `(seed, round index)`, so a
//! session is bit-identical however it is spread over threads.

mod info;
mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{intercept, EveRecord, EveStrategy};
use crate::qutrit::{entangled_collapse, measure, Collapse, TwoQutritState};
use crate::rng::RngStream;
use crate::scenario::KcbsBasis;
use crate::{Error, Result};

pub use info::{binary_entropy, entropy_of_bits, mutual_information};
pub use stats::{
    estimate_security, final_key, key_stats, sacrifice_stream, verdict_for, KeyStats, SecurityReport,
    Verdict, CONFIDENCE_SIGMAS, MIN_SACRIFICE, SECURITY_THRESHOLD,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PrepareMeasure,
    Entangled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub mode: Mode,
    pub basis: KcbsBasis,
    pub rounds: u64,
    pub sacrifice_fraction: f64,
    pub eve: EveStrategy,
    pub seed: u64,
}

impl ProtocolConfig {
    /// Prepare-and-measure on the standard basis, no eavesdropper, 10%
    /// sacrificed for the security test.
    pub fn new(rounds: u64, seed: u64) -> Self {
        Self {
            mode: Mode::PrepareMeasure,
            basis: KcbsBasis::standard(),
            rounds,
            sacrifice_fraction: 0.1,
            eve: EveStrategy::absent(),
            seed,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_eve(mut self, eve: EveStrategy) -> Self {
        self.eve = eve;
        self
    }

    pub fn with_basis(mut self, basis: KcbsBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_sacrifice(mut self, fraction: f64) -> Self {
        self.sacrifice_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if !(0.0..=0.5).contains(&self.sacrifice_fraction) {
            return Err(Error::InvalidConfig(format!(
                "sacrifice fraction {} outside [0, 0.5]",
                self.sacrifice_fraction
            )));
        }
        self.eve.validate()
    }

    /// Like [`validate`](Self::validate), and additionally requires enough
    /// rounds that the sacrificed sample can reach [`MIN_SACRIFICE`].
    pub fn validate_for_verdict(&self) -> Result<()> {
        self.validate()?;
        if self.sacrifice_fraction * (self.rounds as f64) < MIN_SACRIFICE as f64 {
            return Err(Error::InvalidConfig(format!(
                "sacrifice fraction × rounds = {} is below {MIN_SACRIFICE}",
                self.sacrifice_fraction * self.rounds as f64
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SiftCase {
    C1,
    C2,
    C3,
}

impl SiftCase {
    pub fn classify(alice: u8, bob: u8) -> Self {
        match (bob + 5 - alice) % 5 {
            0 => SiftCase::C1,
            1 | 4 => SiftCase::C2,
            _ => SiftCase::C3,
        }
    }

    /// Alice's post-processed bit: 0 for C1, 1 for C2.
    pub fn alice_bit(self) -> Option<u8> {
        match self {
            SiftCase::C1 => Some(0),
            SiftCase::C2 => Some(1),
            SiftCase::C3 => None,
        }
    }

    pub fn is_sifted(self) -> bool {
        self != SiftCase::C3
    }

    /// Bob's settings that sift against Alice's `i`: `i`, `i+1`, `i−1`.
    pub fn sifted_bob_settings(alice: u8) -> [u8; 3] {
        [alice, (alice + 1) % 5, (alice + 4) % 5]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SiftCase::C1 => "C1",
            SiftCase::C2 => "C2",
            SiftCase::C3 => "C3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: u64,
    pub alice_setting: u8,
    pub bob_setting: u8,
    pub bob_outcome: u8,
    pub sift_case: SiftCase,
    pub alice_bit: Option<u8>,
    pub bob_bit: Option<u8>,
    pub eve: Option<EveRecord>,
    /// Entangled pairs Alice consumed before her measurement clicked; always
    /// 1 in prepare-and-measure mode.
    pub attempts: u32,
}

impl RoundRecord {
    pub fn is_sifted(&self) -> bool {
        self.sift_case.is_sifted()
    }

    pub fn anticorrelated(&self) -> Option<bool> {
        Some(self.alice_bit? != self.bob_bit?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    config: ProtocolConfig,
    rounds: Vec<RoundRecord>,
}

impl Transcript {
    /// Wraps externally produced rounds, e.g. synthetic ones for testing the
    /// security test. Records are checked against the sifting rules.
    pub fn from_rounds(config: ProtocolConfig, rounds: Vec<RoundRecord>) -> Result<Self> {
        for r in &rounds {
            if r.alice_setting >= 5 || r.bob_setting >= 5 {
                return Err(Error::SettingOutOfRange(r.alice_setting.max(r.bob_setting) as usize));
            }
            let case = SiftCase::classify(r.alice_setting, r.bob_setting);
            let bob_bit = case.is_sifted().then_some(r.bob_outcome);
            if r.sift_case != case || r.alice_bit != case.alice_bit() || r.bob_bit != bob_bit {
                return Err(Error::InvalidConfig(format!(
                    "round {} violates the sifting rules",
                    r.index
                )));
            }
        }
        let mut config = config;
        config.rounds = rounds.len() as u64;
        Ok(Self { config, rounds })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn sifted(&self) -> impl Iterator<Item = &RoundRecord> {
        self.rounds.iter().filter(|r| r.is_sifted())
    }
}

/// Runs one round with the settings already chosen.
///
/// Random draws from `rng` happen in causal order: Alice's entangled
/// attempts, Eve's interception, Bob's measurement.
pub fn execute_round(
    cfg: &ProtocolConfig,
    index: u64,
    alice: u8,
    bob: u8,
    rng: &mut RngStream,
) -> Result<RoundRecord> {
    if alice >= 5 || bob >= 5 {
        return Err(Error::SettingOutOfRange(alice.max(bob) as usize));
    }
    let basis = &cfg.basis;
    let (mut state, attempts) = match cfg.mode {
        Mode::PrepareMeasure => (*basis.vector(alice as usize), 1),
        Mode::Entangled => {
            let pair = TwoQutritState::maximally_entangled();
            let mut attempts = 0u32;
            loop {
                attempts += 1;
                if let Collapse::Click(s) = entangled_collapse(&pair, basis.projector(alice as usize), rng) {
                    break (s, attempts);
                }
            }
        }
    };

    let mut eve = None;
    if cfg.eve.is_present() && (cfg.eve.rate >= 1.0 || rng.bernoulli(cfg.eve.rate)) {
        let hit = intercept(&cfg.eve, basis, &state, rng)?;
        state = hit.resent;
        eve = Some(hit.record);
    }

    let outcome = measure(&state, basis.projector(bob as usize), rng).outcome;
    let case = SiftCase::classify(alice, bob);
    Ok(RoundRecord {
        index,
        alice_setting: alice,
        bob_setting: bob,
        bob_outcome: outcome,
        sift_case: case,
        alice_bit: case.alice_bit(),
        bob_bit: case.is_sifted().then_some(outcome),
        eve,
        attempts,
    })
}

/// Runs round `index` on its own stream: draws Alice's then Bob's setting
/// uniformly, then [`execute_round`].
pub fn run_round(cfg: &ProtocolConfig, index: u64) -> Result<RoundRecord> {
    let mut rng = RngStream::new(cfg.seed, index);
    let alice = rng.below(5) as u8;
    let bob = rng.below(5) as u8;
    execute_round(cfg, index, alice, bob, &mut rng)
}

/// Runs every round on the current rayon pool and collects them in index
/// order.
pub fn run_session(cfg: &ProtocolConfig) -> Result<Transcript> {
    cfg.validate()?;
    let rounds = (0..cfg.rounds)
        .into_par_iter()
        .map(|i| run_round(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Transcript {
        config: cfg.clone(),
        rounds,
    })
}

/// [`run_session`] on a dedicated pool of `threads` workers.
pub fn run_session_with_threads(cfg: &ProtocolConfig, threads: usize) -> Result<Transcript> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_session(cfg))
}
