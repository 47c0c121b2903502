//! Intercept-resend eavesdroppers.
//!
//! Eve sits on the quantum channel, measures the in-flight qutrit with one of
//! the five KCBS projectors and forwards a state to Bob. She cannot see Bob's
//! setting (it is announced only after his measurement), so her setting is
//! either fixed or drawn uniformly, and her guess of Alice's bit uses her own
//! outcome only: a click suggests Alice prepared Eve's ray, which Alice
//! records as 0 in the matching-setting case; no click suggests the
//! neighbouring case, recorded as 1.
//!
//! [`attack_expectation`] is the exact counterpart of a simulated session:
//! it propagates density matrices through every branch instead of sampling.

use serde::{Deserialize, Serialize};

use crate::protocol::{SiftCase, Transcript};
use crate::qutrit::{measure, Matrix3, QutritState};
use crate::rng::RngStream;
use crate::scenario::KcbsBasis;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveKind {
    Absent,
    /// Always measures with `Π_k`.
    InterceptResendFixed(u8),
    /// Draws `k` uniformly every round.
    InterceptResendRandom,
}

/// What Eve forwards to Bob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResendPolicy {
    /// The post-measurement state.
    CollapsedState,
    /// `|v_k⟩` on a click, the post-measurement state otherwise. For rank-1
    /// projectors the click branch already collapses onto `|v_k⟩`, so this
    /// coincides with `CollapsedState`; it is kept as a named contrast.
    EigenstateOnClick,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EveStrategy {
    pub kind: EveKind,
    pub resend: ResendPolicy,
    /// Fraction of rounds Eve intercepts.
    pub rate: f64,
}

impl EveStrategy {
    pub fn absent() -> Self {
        Self {
            kind: EveKind::Absent,
            resend: ResendPolicy::CollapsedState,
            rate: 1.0,
        }
    }

    pub fn fixed(k: u8) -> Self {
        Self {
            kind: EveKind::InterceptResendFixed(k),
            ..Self::absent()
        }
    }

    pub fn random() -> Self {
        Self {
            kind: EveKind::InterceptResendRandom,
            ..Self::absent()
        }
    }

    pub fn with_resend(mut self, resend: ResendPolicy) -> Self {
        self.resend = resend;
        self
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate;
        self
    }

    pub fn is_present(&self) -> bool {
        self.kind != EveKind::Absent
    }

    pub fn validate(&self) -> Result<()> {
        if let EveKind::InterceptResendFixed(k) = self.kind {
            if k >= 5 {
                return Err(Error::SettingOutOfRange(k as usize));
            }
        }
        if !(0.0..=1.0).contains(&self.rate) {
            return Err(Error::InvalidConfig(format!(
                "interception rate {} outside [0, 1]",
                self.rate
            )));
        }
        Ok(())
    }

    /// Probability of each of Eve's settings.
    pub fn setting_weights(&self) -> [f64; 5] {
        match self.kind {
            EveKind::Absent => [0.0; 5],
            EveKind::InterceptResendFixed(k) => {
                let mut w = [0.0; 5];
                w[k as usize] = 1.0;
                w
            }
            EveKind::InterceptResendRandom => [0.2; 5],
        }
    }

    /// Short label: `absent`, `fixed:K` or `random`.
    pub fn label(&self) -> String {
        match self.kind {
            EveKind::Absent => "absent".into(),
            EveKind::InterceptResendFixed(k) => format!("fixed:{k}"),
            EveKind::InterceptResendRandom => "random".into(),
        }
    }
}

impl Default for EveStrategy {
    fn default() -> Self {
        Self::absent()
    }
}

/// What Eve saw in one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub setting: u8,
    pub outcome: u8,
    pub guess: u8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interception {
    pub resent: QutritState,
    pub record: EveRecord,
}

/// Eve's guess of Alice's bit from her outcome: `1 - e`.
pub fn eve_guess(outcome: u8) -> u8 {
    1 - (outcome & 1)
}

/// Eve measures `in_flight` and decides what to forward.
pub fn intercept(
    strategy: &EveStrategy,
    basis: &KcbsBasis,
    in_flight: &QutritState,
    rng: &mut RngStream,
) -> Result<Interception> {
    let k = match strategy.kind {
        EveKind::Absent => return Err(Error::AbsentEve),
        EveKind::InterceptResendFixed(k) if k >= 5 => return Err(Error::SettingOutOfRange(k as usize)),
        EveKind::InterceptResendFixed(k) => k as usize,
        EveKind::InterceptResendRandom => rng.below(5) as usize,
    };
    let m = measure(in_flight, basis.projector(k), rng);
    let resent = match (strategy.resend, m.outcome) {
        (ResendPolicy::EigenstateOnClick, 1) => *basis.vector(k),
        _ => m.post_state,
    };
    Ok(Interception {
        resent,
        record: EveRecord {
            setting: k as u8,
            outcome: m.outcome,
            guess: eve_guess(m.outcome),
        },
    })
}

fn require_eve(t: &Transcript) -> Result<()> {
    if t.rounds().iter().any(|r| r.eve.is_some()) {
        Ok(())
    } else {
        Err(Error::NoEveRecords)
    }
}

/// Fraction of intercepted sifted rounds in which Eve's guess equals Alice's
/// bit.
pub fn estimate_pe(t: &Transcript) -> Result<f64> {
    require_eve(t)?;
    let (mut hits, mut total) = (0u64, 0u64);
    for r in t.rounds() {
        if let (Some(a), Some(e)) = (r.alice_bit, r.eve) {
            total += 1;
            hits += (e.guess == a) as u64;
        }
    }
    if total == 0 {
        return Err(Error::NoSiftedRounds);
    }
    Ok(hits as f64 / total as f64)
}

/// Success rate of a guesser that always answers `guess`; the baseline any
/// eavesdropper has to beat.
pub fn constant_guess_rate(t: &Transcript, guess: u8) -> Result<f64> {
    let bits: Vec<u8> = t.rounds().iter().filter_map(|r| r.alice_bit).collect();
    if bits.is_empty() {
        return Err(Error::NoSiftedRounds);
    }
    Ok(bits.iter().filter(|&&b| b == guess).count() as f64 / bits.len() as f64)
}

/// Alice-Eve anti-correlation: over intercepted rounds where Eve's setting
/// is in context with Alice's, the fraction in which Eve's outcome differs
/// from the bit Alice would have written for that setting.
pub fn estimate_kae(t: &Transcript) -> Result<f64> {
    require_eve(t)?;
    let (mut anti, mut total) = (0u64, 0u64);
    for r in t.rounds() {
        let Some(e) = r.eve else { continue };
        let Some(a) = SiftCase::classify(r.alice_setting, e.setting).alice_bit() else {
            continue;
        };
        total += 1;
        anti += (e.outcome != a) as u64;
    }
    if total == 0 {
        return Err(Error::NoSiftedRounds);
    }
    Ok(anti as f64 / total as f64)
}

/// Exact expected statistics of an attack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackExpectation {
    pub strategy: EveStrategy,
    /// Expected Alice-Bob anti-correlation over sifted rounds.
    pub kab_expected: f64,
    /// Expected rate at which Eve's guess matches Alice's bit on intercepted
    /// sifted rounds.
    pub pe_expected: f64,
    /// Expected Alice-Eve anti-correlation over in-context (i, k) pairs.
    pub kae_expected: f64,
    /// `(3/5) max P(a ≠ e | i, k) + 1/5` over in-context pairs, the form in
    /// which the Alice-Eve violation is usually bounded. Reported only.
    pub kae_quoted_form: f64,
    /// `P(Bob clicks | i, j)`.
    pub bob_click: [[f64; 5]; 5],
    /// `P(a ≠ b | i, j)` for sifted pairs, `None` otherwise.
    pub anticorrelation: [[Option<f64>; 5]; 5],
    /// `P(Eve's guess = a | i, j)` for sifted pairs, `None` otherwise.
    pub eve_correct: [[Option<f64>; 5]; 5],
    /// `P(Eve clicks | i, k)`.
    pub eve_click: [[f64; 5]; 5],
    /// Anti-correlation pooled over Bob's sifted settings, per Alice setting.
    pub kab_by_alice: [f64; 5],
}

/// Computes [`AttackExpectation`] by enumerating Alice's preparation, Eve's
/// setting and outcome, and Bob's setting, carrying density matrices.
pub fn attack_expectation(strategy: &EveStrategy, basis: &KcbsBasis) -> Result<AttackExpectation> {
    if !strategy.is_present() {
        return Err(Error::AbsentEve);
    }
    strategy.validate()?;
    let weights = strategy.setting_weights();
    let rate = strategy.rate;
    let identity = Matrix3::identity();

    let mut bob_click = [[0.0; 5]; 5];
    let mut anticorrelation = [[None; 5]; 5];
    let mut eve_correct = [[None; 5]; 5];
    let mut eve_click = [[0.0; 5]; 5];

    for i in 0..5 {
        let rho = *basis.projector(i).matrix();
        // Bob's state averaged over Eve's branches, and for each branch the
        // weight and guess needed for P_E.
        let mut bob_rho = rho.scale(1.0 - rate);
        let mut branches: Vec<(f64, u8, Matrix3)> = Vec::new();
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let pk = basis.projector(k);
            let ops = [(1u8, *pk.matrix()), (0u8, identity.sub(pk.matrix()))];
            for (e, op) in ops {
                let projected = op.mul(&rho).mul(&op);
                let prob = projected.trace().re;
                if e == 1 {
                    eve_click[i][k] = prob.clamp(0.0, 1.0);
                }
                if prob <= 1e-15 {
                    continue;
                }
                let post = match (strategy.resend, e) {
                    (ResendPolicy::EigenstateOnClick, 1) => *pk.matrix(),
                    _ => projected.scale(1.0 / prob),
                };
                bob_rho = bob_rho.add(&post.scale(rate * w * prob));
                branches.push((w * prob, e, post));
            }
        }

        for j in 0..5 {
            let pj = basis.projector(j).matrix();
            let click = pj.mul(&bob_rho).trace().re.clamp(0.0, 1.0);
            bob_click[i][j] = click;
            let case = SiftCase::classify(i as u8, j as u8);
            let Some(a) = case.alice_bit() else { continue };
            anticorrelation[i][j] = Some(if a == 0 { click } else { 1.0 - click });
            let correct: f64 = branches
                .iter()
                .filter(|(_, e, _)| eve_guess(*e) == a)
                .map(|(p, _, _)| p)
                .sum();
            eve_correct[i][j] = Some(correct.clamp(0.0, 1.0));
        }
    }

    let sifted = |i: usize| SiftCase::sifted_bob_settings(i as u8).into_iter().map(|j| j as usize);
    let mean_over_sifted = |table: &[[Option<f64>; 5]; 5]| {
        (0..5)
            .flat_map(|i| sifted(i).map(move |j| (i, j)))
            .map(|(i, j)| table[i][j].expect("sifted entry"))
            .sum::<f64>()
            / 15.0
    };
    let kab_expected = mean_over_sifted(&anticorrelation);
    let pe_expected = mean_over_sifted(&eve_correct);
    let mut kab_by_alice = [0.0; 5];
    for (i, slot) in kab_by_alice.iter_mut().enumerate() {
        *slot = sifted(i).map(|j| anticorrelation[i][j].unwrap()).sum::<f64>() / 3.0;
    }

    // Alice-Eve: pairs (i, k) in context, weighted by Eve's setting choice.
    let (mut kae_num, mut kae_den, mut kae_max) = (0.0, 0.0, 0.0f64);
    for i in 0..5 {
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let Some(a) = SiftCase::classify(i as u8, k as u8).alice_bit() else {
                continue;
            };
            let anti = if a == 0 { eve_click[i][k] } else { 1.0 - eve_click[i][k] };
            kae_num += w * anti;
            kae_den += w;
            kae_max = kae_max.max(anti);
        }
    }

    Ok(AttackExpectation {
        strategy: *strategy,
        kab_expected,
        pe_expected,
        kae_expected: kae_num / kae_den,
        kae_quoted_form: 0.6 * kae_max + 0.2,
        bob_click,
        anticorrelation,
        eve_correct,
        eve_click,
        kab_by_alice,
    })
}
