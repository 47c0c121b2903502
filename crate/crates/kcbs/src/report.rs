//! Machine-readable outputs: the JSON simulation report and the per-round
//! CSV transcript.
//!
//! Reals in JSON are rounded to 15 significant digits before serialization,
//! so parsing a report and writing it again reproduces the same bytes.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::adversary::{attack_expectation, estimate_kae, AttackExpectation, EveStrategy};
use crate::graph::{paper_certificate, JointGraphMode};
use crate::protocol::{
    estimate_security, key_stats, sacrifice_stream, KeyStats, Mode, ProtocolConfig, SecurityReport, Transcript,
};
use crate::scenario::{constants, KcbsBasis, KcbsConstants};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The configuration as echoed into a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: Mode,
    pub rounds: u64,
    pub seed: u64,
    pub sacrifice_fraction: f64,
    pub eve: EveStrategy,
    pub eve_label: String,
    /// `"standard"` or the normalized vectors of a custom basis.
    pub basis: BasisEcho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisEcho {
    Named(String),
    Vectors(Vec<[[f64; 2]; 3]>),
}

impl BasisEcho {
    pub fn of(basis: &KcbsBasis) -> Self {
        if *basis == KcbsBasis::standard() {
            BasisEcho::Named("standard".into())
        } else {
            BasisEcho::Vectors(
                basis
                    .vectors()
                    .iter()
                    .map(|v| v.amplitudes().map(|a| [a.re, a.im]))
                    .collect(),
            )
        }
    }
}

impl From<&ProtocolConfig> for ConfigEcho {
    fn from(c: &ProtocolConfig) -> Self {
        Self {
            mode: c.mode,
            rounds: c.rounds,
            seed: c.seed,
            sacrifice_fraction: c.sacrifice_fraction,
            eve: c.eve,
            eve_label: c.eve.label(),
            basis: BasisEcho::of(&c.basis),
        }
    }
}

/// Summary of the monogamy certificate a report relies on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRef {
    pub mode: JointGraphMode,
    pub valid: bool,
    pub bound: f64,
    pub deterministic_max: usize,
    pub clique_cover: usize,
}

/// Estimates that are not bounded by the monogamy relation as computed
/// here; see the guide's adversary chapter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub kae_estimate: Option<f64>,
    /// `kab_estimate + kae_estimate`. Diagnostic only.
    pub kab_plus_kae: Option<f64>,
    /// Rate at which always guessing 1 matches Alice's sifted bits.
    pub constant_guess_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub key_stats: KeyStats,
    pub security_report: SecurityReport,
    pub oracle: Option<AttackExpectation>,
    pub kcbs_constants: KcbsConstants,
    pub monogamy_certificate: CertificateRef,
    pub diagnostics: Diagnostics,
}

impl SimulationReport {
    /// Assembles the report for a finished session. The sacrificed subset is
    /// drawn from [`sacrifice_stream`] of the session seed.
    pub fn build(t: &Transcript) -> Result<Self> {
        let cfg = t.config();
        let key_stats = key_stats(t)?;
        let security_report = estimate_security(t, cfg.sacrifice_fraction, &mut sacrifice_stream(cfg.seed))?;
        let oracle = if cfg.eve.is_present() {
            Some(attack_expectation(&cfg.eve, &cfg.basis)?)
        } else {
            None
        };
        let cert = paper_certificate(JointGraphMode::PaperAbstract);
        let kae_estimate = estimate_kae(t).ok();
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.into(),
            config: cfg.into(),
            key_stats,
            oracle,
            kcbs_constants: constants(&cfg.basis),
            monogamy_certificate: CertificateRef {
                mode: JointGraphMode::PaperAbstract,
                valid: cert.is_valid(),
                bound: cert.bound,
                deterministic_max: cert.deterministic_max,
                clique_cover: cert.clique_cover,
            },
            diagnostics: Diagnostics {
                kae_estimate,
                kab_plus_kae: kae_estimate.map(|k| k + security_report.kab_estimate),
                constant_guess_rate: crate::adversary::constant_guess_rate(t, 1).ok(),
            },
            security_report,
        })
    }

    pub fn to_json(&self) -> String {
        to_json_rounded(self)
    }
}

/// Rounds a finite real to 15 significant digits.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig15(n.as_f64().unwrap());
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every real rounded to 15 significant digits.
pub fn to_json_rounded<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

pub const TRANSCRIPT_HEADER: &str =
    "index,i,j,case,bob_outcome,alice_bit,bob_bit,eve_setting,eve_outcome,eve_guess";

/// Writes one CSV row per round; absent values are empty fields.
pub fn write_transcript_csv<W: Write>(t: &Transcript, mut out: W) -> io::Result<()> {
    fn opt(x: Option<u8>) -> String {
        x.map(|b| b.to_string()).unwrap_or_default()
    }
    writeln!(out, "{TRANSCRIPT_HEADER}")?;
    for r in t.rounds() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.alice_setting,
            r.bob_setting,
            r.sift_case.as_str(),
            r.bob_outcome,
            opt(r.alice_bit),
            opt(r.bob_bit),
            opt(r.eve.map(|e| e.setting)),
            opt(r.eve.map(|e| e.outcome)),
            opt(r.eve.map(|e| e.guess)),
        )?;
    }
    Ok(())
}
