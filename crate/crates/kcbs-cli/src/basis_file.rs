//! Custom bases: a JSON array of five vectors, each three amplitudes given
//! as reals or `[re, im]` pairs. Vectors are normalized on load.

use std::path::Path;

use anyhow::{bail, Context, Result};
use kcbs::qutrit::{Complex, QutritState};
use kcbs::scenario::KcbsBasis;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BasisFile {
    Bare(Vec<[Amplitude; 3]>),
    Wrapped { vectors: Vec<[Amplitude; 3]> },
}

/// Loads a basis without the pentagon check, so callers can report which
/// relation fails.
pub fn load(path: &Path) -> Result<KcbsBasis> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: BasisFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let vectors = match file {
        BasisFile::Bare(v) | BasisFile::Wrapped { vectors: v } => v,
    };
    if vectors.len() != 5 {
        bail!("{}: expected 5 vectors, found {}", path.display(), vectors.len());
    }
    let mut states = Vec::with_capacity(5);
    for (i, v) in vectors.iter().enumerate() {
        let amps = v.each_ref().map(|a| match *a {
            Amplitude::Real(re) => Complex::new(re, 0.0),
            Amplitude::Pair([re, im]) => Complex::new(re, im),
        });
        states.push(QutritState::new(amps).with_context(|| format!("vector {i}"))?);
    }
    Ok(KcbsBasis::new(states.try_into().expect("five vectors")))
}
