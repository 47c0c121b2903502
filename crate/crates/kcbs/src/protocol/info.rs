//! Plug-in entropy estimates over bit sequences, in bits.

use crate::{Error, Result};

/// Below this many samples the plug-in estimate is not trusted.
pub const MIN_MI_SAMPLES: usize = 100;

/// `−p log2 p − (1−p) log2 (1−p)`, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    h(p) + h(1.0 - p)
}

fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

pub fn entropy_of_bits(bits: &[u8]) -> f64 {
    if bits.is_empty() {
        return 0.0;
    }
    let ones = bits.iter().filter(|&&b| b != 0).count();
    binary_entropy(ones as f64 / bits.len() as f64)
}

/// Empirical mutual information `I(X;Y)` of two paired bit sequences.
pub fn mutual_information(x: &[u8], y: &[u8]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < MIN_MI_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_MI_SAMPLES,
            got: x.len(),
        });
    }
    let mut joint = [[0u64; 2]; 2];
    for (&a, &b) in x.iter().zip(y) {
        joint[(a != 0) as usize][(b != 0) as usize] += 1;
    }
    let n = x.len() as f64;
    let px = [(joint[0][0] + joint[0][1]) as f64 / n, (joint[1][0] + joint[1][1]) as f64 / n];
    let py = [(joint[0][0] + joint[1][0]) as f64 / n, (joint[0][1] + joint[1][1]) as f64 / n];
    let mut mi = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let pxy = joint[a][b] as f64 / n;
            if pxy > 0.0 {
                mi += pxy * (pxy / (px[a] * py[b])).log2();
            }
        }
    }
    Ok(mi.max(0.0))
}
