use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use kcbs::adversary::{EveStrategy, ResendPolicy};
use kcbs::protocol::{run_session, run_session_with_threads, Mode, ProtocolConfig, Verdict};
use kcbs::report::{write_transcript_csv, SimulationReport};
use kcbs::scenario::KcbsBasis;

use crate::output::{print_fields, write_atomic};

pub const THREADS_VAR: &str = "KCBS_THREADS";

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Prepare,
    Entangled,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResendArg {
    Collapsed,
    Eigenstate,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    rounds: u64,
    /// Required: sessions are reproducible from their seed alone.
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "prepare")]
    mode: ModeArg,
    /// `absent`, `fixed:K` (K in 0..=4) or `random`.
    #[arg(long)]
    eve: Option<String>,
    /// What Eve sends on to Bob; needs an eavesdropper.
    #[arg(long, value_enum)]
    resend: Option<ResendArg>,
    /// Fraction of sifted rounds published for the security test.
    #[arg(long, default_value_t = 0.1)]
    sacrifice: f64,
    /// Custom basis file, as for `verify`.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-round CSV transcript here.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Print the JSON report on stdout instead of the summary.
    #[arg(long)]
    json: bool,
}

fn parse_eve(s: &str) -> Result<EveStrategy> {
    match s {
        "absent" => Ok(EveStrategy::absent()),
        "random" => Ok(EveStrategy::random()),
        _ => match s.strip_prefix("fixed:") {
            Some(k) => {
                let k: u8 = k.parse().with_context(|| format!("bad setting in --eve {s}"))?;
                if k > 4 {
                    bail!("--eve fixed:{k}: setting must be in 0..=4");
                }
                Ok(EveStrategy::fixed(k))
            }
            None => bail!("--eve must be absent, fixed:K or random, got {s:?}"),
        },
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{THREADS_VAR}: {e}"),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{THREADS_VAR} must be a positive integer, got {v:?}"),
        },
    }
}

fn config(args: &Args) -> Result<ProtocolConfig> {
    let mut eve = match &args.eve {
        Some(s) => parse_eve(s)?,
        None => EveStrategy::absent(),
    };
    if let Some(resend) = args.resend {
        if !eve.is_present() {
            bail!("--resend needs an eavesdropper (--eve fixed:K or random)");
        }
        eve = eve.with_resend(match resend {
            ResendArg::Collapsed => ResendPolicy::CollapsedState,
            ResendArg::Eigenstate => ResendPolicy::EigenstateOnClick,
        });
    }
    let basis = match &args.basis {
        Some(path) => {
            let b = crate::basis_file::load(path)?;
            b.check_pentagon(1e-10)?;
            b
        }
        None => KcbsBasis::standard(),
    };
    let mode = match args.mode {
        ModeArg::Prepare => Mode::PrepareMeasure,
        ModeArg::Entangled => Mode::Entangled,
    };
    let cfg = ProtocolConfig::new(args.rounds, args.seed)
        .with_mode(mode)
        .with_eve(eve)
        .with_basis(basis)
        .with_sacrifice(args.sacrifice);
    cfg.validate()?;
    Ok(cfg)
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Secure => 0,
        Verdict::Insecure => 2,
        Verdict::Inconclusive => 3,
    }
}

pub fn run(args: &Args) -> Result<u8> {
    let cfg = config(args)?;
    let threads = threads_from_env()?;
    let transcript = match threads {
        Some(n) => run_session_with_threads(&cfg, n)?,
        None => run_session(&cfg)?,
    };
    let report = SimulationReport::build(&transcript)?;
    let json = report.to_json();

    if let Some(path) = &args.transcript {
        write_atomic(path, |w| write_transcript_csv(&transcript, w))?;
    }
    if let Some(path) = &args.out {
        write_atomic(path, |w| w.write_all(json.as_bytes()))?;
    }
    if args.json {
        print!("{json}");
    } else {
        let v: serde_json::Value = serde_json::from_str(&json)?;
        let mut rows = vec![
            ("seed", "config/seed"),
            ("rounds", "key_stats/rounds"),
            ("eve", "config/eve_label"),
            ("sift_rate", "key_stats/sift_rate"),
            ("p0", "key_stats/p0"),
            ("shannon", "key_stats/shannon"),
            ("key_rate", "key_stats/key_rate_per_transmission"),
            ("anticorr_fraction", "key_stats/anticorr_fraction"),
            ("sacrificed", "security_report/sample_size"),
            ("kab_estimate", "security_report/kab_estimate"),
            ("halfwidth", "security_report/confidence_halfwidth"),
            ("threshold", "security_report/threshold"),
            ("verdict", "security_report/verdict"),
        ];
        if cfg.eve.is_present() {
            rows.extend([
                ("pe_estimate", "security_report/pe_estimate"),
                ("kab_expected", "oracle/kab_expected"),
                ("pe_expected", "oracle/pe_expected"),
            ]);
        }
        print_fields(&v, &rows);
        if let Some(note) = &report.security_report.note {
            println!("note {note}");
        }
    }
    Ok(exit_code(report.security_report.verdict))
}
