use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use kcbs::graph::{monogamy_certificate, paper_certificate, CertificateMode, ContextGraph, JointGraphMode};
use kcbs::report::to_json_rounded;
use serde::Deserialize;

use crate::output::write_atomic;

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Every joint-graph edge is an exclusivity constraint.
    Paper,
    /// Eve's projector on Bob's setting commutes without being exclusive.
    Mimic,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum, default_value = "paper")]
    mode: ModeArg,
    /// Certify a custom graph instead: `{"graph": {...}, "parts": [[..], [..]]}`.
    #[arg(long, conflicts_with = "mode")]
    graph: Option<PathBuf>,
    /// Also write the certificate to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct CustomInstance {
    graph: ContextGraph,
    parts: [Vec<usize>; 2],
}

pub fn run(args: &Args) -> Result<u8> {
    let cert = match &args.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let inst: CustomInstance =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            monogamy_certificate(&inst.graph, inst.parts, CertificateMode::Custom)?
        }
        None => paper_certificate(match args.mode {
            ModeArg::Paper => JointGraphMode::PaperAbstract,
            ModeArg::Mimic => JointGraphMode::Mimic,
        }),
    };
    let json = to_json_rounded(&cert);
    if let Some(out) = &args.out {
        write_atomic(out, |w| w.write_all(json.as_bytes()))?;
    }
    print!("{json}");
    let failed: Vec<&str> = cert.failed_checks().collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("certificate check failed: {}", failed.join(", "));
        Ok(1)
    }
}
