//! Key statistics and the security test.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::info::{binary_entropy, mutual_information, MIN_MI_SAMPLES};
use super::Transcript;
use crate::adversary::estimate_pe;
use crate::rng::RngStream;
use crate::{Error, Result};

/// Alice-Bob anti-correlation needed for a secure key.
pub const SECURITY_THRESHOLD: f64 = 5.0 / 8.0;

/// Smallest sacrificed sample that can produce a verdict.
pub const MIN_SACRIFICE: usize = 100;

/// Width of the confidence interval around the estimate, in standard errors.
pub const CONFIDENCE_SIGMAS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyStats {
    pub rounds: u64,
    pub sifted: u64,
    /// Rounds per case, C1..C3.
    pub case_counts: [u64; 3],
    pub sift_rate: f64,
    /// Fraction of sifted Alice bits equal to 0.
    pub p0: f64,
    pub p1: f64,
    /// Entropy of a sifted Alice bit, in bits.
    pub shannon: f64,
    pub key_rate_per_transmission: f64,
    /// Fraction of sifted rounds with `alice_bit != bob_bit`.
    pub anticorr_fraction: f64,
    /// Entangled pairs consumed (equals `rounds` in prepare-and-measure).
    pub attempts: u64,
    /// `rounds / attempts`: Alice's per-pair click rate.
    pub attempt_success_rate: f64,
}

pub fn key_stats(t: &Transcript) -> Result<KeyStats> {
    let mut case_counts = [0u64; 3];
    let (mut zeros, mut anti, mut attempts) = (0u64, 0u64, 0u64);
    for r in t.rounds() {
        case_counts[r.sift_case as usize] += 1;
        attempts += r.attempts as u64;
        if let (Some(a), Some(b)) = (r.alice_bit, r.bob_bit) {
            zeros += (a == 0) as u64;
            anti += (a != b) as u64;
        }
    }
    let sifted = case_counts[0] + case_counts[1];
    if sifted == 0 {
        return Err(Error::NoSiftedRounds);
    }
    let rounds = t.len() as u64;
    let sift_rate = sifted as f64 / rounds as f64;
    let p0 = zeros as f64 / sifted as f64;
    let shannon = binary_entropy(p0);
    Ok(KeyStats {
        rounds,
        sifted,
        case_counts,
        sift_rate,
        p0,
        p1: 1.0 - p0,
        shannon,
        key_rate_per_transmission: sift_rate * shannon,
        anticorr_fraction: anti as f64 / sifted as f64,
        attempts,
        attempt_success_rate: rounds as f64 / attempts as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Secure,
    Insecure,
    Inconclusive,
}

/// Secure iff the whole interval lies above the threshold, insecure iff it
/// lies below.
pub fn verdict_for(kab: f64, halfwidth: f64) -> Verdict {
    if kab - halfwidth > SECURITY_THRESHOLD {
        Verdict::Secure
    } else if kab + halfwidth < SECURITY_THRESHOLD {
        Verdict::Insecure
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecurityReport {
    /// Anti-correlation on the sacrificed rounds; Bob's guessing
    /// probability `P_B`.
    pub kab_estimate: f64,
    pub confidence_halfwidth: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    /// Number of sacrificed rounds.
    pub sample_size: u64,
    /// Sifted rounds left for the key.
    pub key_bits: u64,
    /// Eve's guessing rate over all intercepted sifted rounds (simulation
    /// only: needs Eve's records).
    pub pe_estimate: Option<f64>,
    /// `P_B > P_E` on the point estimates.
    pub pb_exceeds_pe: Option<bool>,
    pub mutual_info_ab: Option<f64>,
    pub mutual_info_ae: Option<f64>,
    pub note: Option<String>,
    /// Indices of the sacrificed rounds, ascending.
    #[serde(skip)]
    pub sacrificed: Vec<u64>,
}

/// The stream used to choose which sifted rounds are sacrificed. Round
/// streams use ids `0..rounds`, so the top id never collides.
pub fn sacrifice_stream(seed: u64) -> RngStream {
    RngStream::new(seed, u64::MAX)
}

/// Publishes a uniformly chosen `sacrifice_fraction` of the sifted rounds and
/// tests their anti-correlation against [`SECURITY_THRESHOLD`].
///
/// Unsifted rounds never enter the sample. With fewer than
/// [`MIN_SACRIFICE`] sacrificed rounds the verdict is `Inconclusive`.
pub fn estimate_security(t: &Transcript, sacrifice_fraction: f64, rng: &mut RngStream) -> Result<SecurityReport> {
    if !(0.0..=1.0).contains(&sacrifice_fraction) {
        return Err(Error::InvalidConfig(format!(
            "sacrifice fraction {sacrifice_fraction} outside [0, 1]"
        )));
    }
    let sifted: Vec<usize> = (0..t.len()).filter(|&i| t.rounds()[i].is_sifted()).collect();
    let m = (sacrifice_fraction * sifted.len() as f64).round() as usize;
    let mut chosen: Vec<usize> = index::sample(rng, sifted.len(), m).into_iter().map(|k| sifted[k]).collect();
    chosen.sort_unstable();

    let alice: Vec<u8> = chosen.iter().map(|&i| t.rounds()[i].alice_bit.unwrap()).collect();
    let bob: Vec<u8> = chosen.iter().map(|&i| t.rounds()[i].bob_bit.unwrap()).collect();
    let anti = alice.iter().zip(&bob).filter(|(a, b)| a != b).count();
    let kab = if m > 0 { anti as f64 / m as f64 } else { 0.0 };

    let (halfwidth, verdict, note) = if m < MIN_SACRIFICE {
        (
            1.0,
            Verdict::Inconclusive,
            Some(format!("only {m} sacrificed rounds; at least {MIN_SACRIFICE} are needed")),
        )
    } else {
        let m = m as f64;
        let hw = (CONFIDENCE_SIGMAS * (kab * (1.0 - kab) / m).sqrt()).max(1.0 / m);
        (hw, verdict_for(kab, hw), None)
    };

    let pe_estimate = match estimate_pe(t) {
        Ok(p) => Some(p),
        Err(Error::NoEveRecords) | Err(Error::NoSiftedRounds) => None,
        Err(e) => return Err(e),
    };
    let mutual_info_ab = mutual_information(&alice, &bob).ok();
    let (alice_e, eve): (Vec<u8>, Vec<u8>) = chosen
        .iter()
        .filter_map(|&i| {
            let r = &t.rounds()[i];
            Some((r.alice_bit?, r.eve?.guess))
        })
        .unzip();
    let mutual_info_ae = if eve.len() >= MIN_MI_SAMPLES {
        mutual_information(&alice_e, &eve).ok()
    } else {
        None
    };

    Ok(SecurityReport {
        kab_estimate: kab,
        confidence_halfwidth: halfwidth,
        threshold: SECURITY_THRESHOLD,
        verdict,
        sample_size: m as u64,
        key_bits: (sifted.len() - m) as u64,
        pe_estimate,
        pb_exceeds_pe: pe_estimate.map(|pe| kab > pe),
        mutual_info_ab,
        mutual_info_ae,
        note,
        sacrificed: chosen.iter().map(|&i| t.rounds()[i].index).collect(),
    })
}

/// Alice's and Bob's key strings: sifted rounds not sacrificed, in round
/// order. No error correction or privacy amplification is applied.
pub fn final_key(t: &Transcript, report: &SecurityReport) -> (Vec<u8>, Vec<u8>) {
    let mut sacrificed = report.sacrificed.iter().peekable();
    let mut alice = Vec::new();
    let mut bob = Vec::new();
    for r in t.rounds() {
        while sacrificed.next_if(|&&i| i < r.index).is_some() {}
        if sacrificed.next_if_eq(&&r.index).is_some() {
            continue;
        }
        if let (Some(a), Some(b)) = (r.alice_bit, r.bob_bit) {
            alice.push(a);
            bob.push(b);
        }
    }
    (alice, bob)
}
