use std::path::PathBuf;

use anyhow::Result;
use kcbs::qutrit::QutritState;
use kcbs::report::{to_json_rounded, BasisEcho};
use kcbs::scenario::{bounds, constants, ktilde, ktilde_max, KcbsBasis, KcbsConstants};
use serde::Serialize;

use crate::output::print_fields;

#[derive(clap::Args)]
pub struct Args {
    /// JSON file with five vectors (reals or [re, im] pairs).
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Largest neighbour overlap accepted as orthogonal.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Print the machine-readable block instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    basis: BasisEcho,
    tolerance: f64,
    pentagon: bool,
    failure: Option<String>,
    /// `Tr(Π_i Π_{i+1})`.
    neighbour_overlaps: [f64; 5],
    /// `Tr(Π_i Π_{i+2})`.
    distance2_overlaps: [f64; 5],
    /// `|⟨v_i|v_{i+2}⟩|`.
    distance2_amplitudes: [f64; 5],
    noncontextual_bound: f64,
    ktilde_max: f64,
    ktilde_at_001: f64,
    kcbs_constants: KcbsConstants,
}

fn build(basis: &KcbsBasis, tol: f64) -> VerifyReport {
    let failure = basis.check_pentagon(tol).err().map(|e| e.to_string());
    let neighbour_overlaps = std::array::from_fn(|i| basis.overlap(i, (i + 1) % 5));
    let distance2_overlaps: [f64; 5] = std::array::from_fn(|i| basis.overlap(i, (i + 2) % 5));
    VerifyReport {
        basis: BasisEcho::of(basis),
        tolerance: tol,
        pentagon: failure.is_none(),
        failure,
        neighbour_overlaps,
        distance2_overlaps,
        distance2_amplitudes: distance2_overlaps.map(f64::sqrt),
        noncontextual_bound: bounds().noncontextual_projector_form,
        ktilde_max: ktilde_max(basis).0,
        ktilde_at_001: ktilde(&QutritState::basis(2), basis),
        kcbs_constants: constants(basis),
    }
}

pub fn run(args: &Args) -> Result<u8> {
    anyhow::ensure!(args.tol > 0.0 && args.tol < 1.0, "--tol must lie in (0, 1)");
    let basis = match &args.basis {
        Some(path) => crate::basis_file::load(path)?,
        None => KcbsBasis::standard(),
    };
    let report = build(&basis, args.tol);
    let json = to_json_rounded(&report);
    if args.json {
        print!("{json}");
    } else {
        let v: serde_json::Value = serde_json::from_str(&json)?;
        print_fields(
            &v,
            &[
                ("pentagon", "pentagon"),
                ("neighbour_overlaps", "neighbour_overlaps"),
                ("distance2_amplitudes", "distance2_amplitudes"),
                ("noncontextual_bound", "noncontextual_bound"),
                ("ktilde_max", "ktilde_max"),
                ("ktilde_at_001", "ktilde_at_001"),
            ],
        );
    }
    if let Some(f) = &report.failure {
        eprintln!("verify failed: {f}");
        return Ok(1);
    }
    Ok(0)
}
