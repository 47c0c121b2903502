//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::time::{Duration, Instant};

use kcbs::adversary::{attack_expectation, estimate_pe, EveStrategy, ResendPolicy};
use kcbs::graph::{
    clique_cover_number, independence_number, is_chordal, noncontextual_max, paper_certificate, ContextGraph,
    EdgeKind, JointGraphMode,
};
use kcbs::protocol::{
    estimate_security, key_stats, run_session, run_session_with_threads, sacrifice_stream, Mode, ProtocolConfig,
    RoundRecord, SiftCase, Transcript, Verdict,
};
use kcbs::qutrit::{inner_product, QutritState};
use kcbs::report::SimulationReport;
use kcbs::rng::RngStream;
use kcbs::scenario::{ktilde, standard_raw_vectors, KcbsBasis};
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn close(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn criterion_1() -> Outcome {
    let basis = KcbsBasis::standard();
    let state = QutritState::basis(2);
    let start = Instant::now();
    let k = ktilde(&state, &basis);
    let elapsed = start.elapsed();
    check(
        close(k, 0.4472135955, 1e-9) && k > 0.4 && elapsed < Duration::from_millis(1),
        format!("ktilde(0,0,1) = {k:.10} > 0.4 in {elapsed:?}"),
    )
}

fn criterion_2() -> Outcome {
    let b = KcbsBasis::standard();
    let amp = |i: usize, j: usize| inner_product(b.vector(i), b.vector(j)).norm();
    let neighbour = (0..5).map(|i| amp(i, (i + 1) % 5)).fold(0.0, f64::max);
    let far: Vec<f64> = (0..5).map(|i| amp(i, (i + 2) % 5)).collect();
    check(
        neighbour <= 1e-10 && far.iter().all(|&x| close(x, 0.618034, 1e-6)),
        format!("max neighbour overlap {neighbour:.1e}, distance-2 overlaps {far:.6?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cert = paper_certificate(JointGraphMode::PaperAbstract);
    let elapsed = start.elapsed();
    check(
        cert.is_valid()
            && cert.chordal == [true, true]
            && cert.alpha == [2, 2]
            && cert.bound == 4.0 / 5.0
            && elapsed < Duration::from_secs(1),
        format!(
            "chordal {:?}, alpha {:?}, bound {}, deterministic max {}, clique cover {} in {elapsed:?}",
            cert.chordal, cert.alpha, cert.bound, cert.deterministic_max, cert.clique_cover
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let t = run_session(&ProtocolConfig::new(100_000, 2024)).unwrap();
    let s = key_stats(&t).unwrap();
    let elapsed = start.elapsed();
    check(
        close(s.sift_rate, 0.6, 0.006)
            && close(s.p0, 1.0 / 3.0, 0.01)
            && close(s.p1, 2.0 / 3.0, 0.01)
            && close(s.shannon, 0.9183, 0.002)
            && close(s.key_rate_per_transmission, 0.551, 0.005)
            && s.anticorr_fraction == 1.0
            && elapsed < Duration::from_secs(10),
        format!(
            "sift {:.4}, p0 {:.4}, S {:.4}, key rate {:.4}, anticorr {} in {elapsed:?}",
            s.sift_rate, s.p0, s.shannon, s.key_rate_per_transmission, s.anticorr_fraction
        ),
    )
}

/// Counts of `(i, j, outcome)` over a transcript.
fn cell_counts(t: &Transcript) -> Vec<u64> {
    let mut counts = vec![0u64; 50];
    for r in t.rounds() {
        counts[(r.alice_setting as usize * 5 + r.bob_setting as usize) * 2 + r.bob_outcome as usize] += 1;
    }
    counts
}

/// Two-sample chi-square homogeneity test; returns the p-value. Cells empty
/// in both samples are dropped.
fn homogeneity_p(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let n = na + nb;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (obs, row) in [(x as f64, na), (y as f64, nb)] {
            let expected = row * col / n;
            stat += (obs - expected).powi(2) / expected;
        }
    }
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

fn criterion_5() -> Outcome {
    let ent = run_session(&ProtocolConfig::new(100_000, 77).with_mode(Mode::Entangled)).unwrap();
    let pm = run_session(&ProtocolConfig::new(100_000, 78)).unwrap();
    let rate = key_stats(&ent).unwrap().attempt_success_rate;
    let p = homogeneity_p(&cell_counts(&ent), &cell_counts(&pm));
    check(
        close(rate, 1.0 / 3.0, 0.005) && p > 0.01,
        format!("per-attempt success {rate:.4}, chi-square p = {p:.3}"),
    )
}

/// Fixed-setting intercept-resend on the standard basis, from the raw
/// vectors: Alice sends `v_i`, Eve measures `v_k` and forwards the collapsed
/// state, Bob measures `v_j` on one of the three sifted settings.
fn closed_form_attack(k: usize) -> (f64, f64) {
    let raw = standard_raw_vectors();
    let unit: Vec<[f64; 3]> = raw
        .iter()
        .map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        })
        .collect();
    let dot = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (mut kab, mut pe) = (0.0, 0.0);
    for i in 0..5 {
        let c = dot(&unit[k], &unit[i]);
        let click = c * c;
        let rest: [f64; 3] = std::array::from_fn(|d| unit[i][d] - c * unit[k][d]);
        let rest_norm = dot(&rest, &rest);
        for (j, alice_bit) in [(i, 0u8), ((i + 1) % 5, 1), ((i + 4) % 5, 1)] {
            let bob_one = |psi: &[f64; 3], norm: f64| {
                if norm < 1e-300 {
                    0.0
                } else {
                    dot(&unit[j], psi).powi(2) / norm
                }
            };
            let p_b1 = click * bob_one(&unit[k], 1.0) + (1.0 - click) * bob_one(&rest, rest_norm);
            let anti = if alice_bit == 0 { p_b1 } else { 1.0 - p_b1 };
            // Eve guesses 0 on a click and 1 otherwise.
            let correct = if alice_bit == 0 { click } else { 1.0 - click };
            kab += anti / 15.0;
            pe += correct / 15.0;
        }
    }
    (kab, pe)
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = ProtocolConfig::new(1_000_000, 6)
        .with_eve(EveStrategy::fixed(1).with_resend(ResendPolicy::CollapsedState));
    let t = run_session(&cfg).unwrap();
    let report = SimulationReport::build(&t).unwrap();
    let elapsed = start.elapsed();

    let (kab_exact, pe_exact) = closed_form_attack(1);
    let oracle = attack_expectation(&cfg.eve, &cfg.basis).unwrap();
    let sec = &report.security_report;
    let sifted = key_stats(&t).unwrap().sifted as f64;
    let sigma = |p: f64, n: f64| (p * (1.0 - p) / n).sqrt();
    let pe = estimate_pe(&t).unwrap();
    let kab_z = (sec.kab_estimate - kab_exact) / sigma(kab_exact, sec.sample_size as f64);
    let pe_z = (pe - pe_exact) / sigma(pe_exact, sifted);
    check(
        close(oracle.kab_expected, kab_exact, 1e-12)
            && close(oracle.pe_expected, pe_exact, 1e-12)
            && kab_z.abs() < 4.0
            && pe_z.abs() < 4.0
            && sec.pb_exceeds_pe == Some(true)
            && sec.verdict == Verdict::Secure
            && elapsed < Duration::from_secs(60),
        format!(
            "kab {:.5} vs {kab_exact:.5} ({kab_z:+.2}σ), pe {pe:.5} vs {pe_exact:.5} ({pe_z:+.2}σ), \
             P_B > P_E, verdict {:?} in {elapsed:?}",
            sec.kab_estimate, sec.verdict
        ),
    )
}

/// `n` sifted C1 rounds of which the first `round(fraction · n)`, spread
/// evenly, are anti-correlated.
fn synthetic(n: u64, fraction: f64) -> Transcript {
    let anti = (fraction * n as f64).round() as u64;
    let rounds = (0..n)
        .map(|index| {
            let b = ((index + 1) * anti / n - index * anti / n) as u8;
            RoundRecord {
                index,
                alice_setting: 0,
                bob_setting: 0,
                bob_outcome: b,
                sift_case: SiftCase::C1,
                alice_bit: Some(0),
                bob_bit: Some(b),
                eve: None,
                attempts: 1,
            }
        })
        .collect();
    Transcript::from_rounds(ProtocolConfig::new(n, 0), rounds).unwrap()
}

fn criterion_7() -> Outcome {
    let mut seen = Vec::new();
    for fraction in [0.60, 0.625, 0.65] {
        let t = synthetic(200_000, fraction);
        let rep = estimate_security(&t, 0.5, &mut sacrifice_stream(7)).unwrap();
        seen.push((fraction, rep.kab_estimate, rep.confidence_halfwidth, rep.verdict));
    }
    let verdicts: Vec<Verdict> = seen.iter().map(|s| s.3).collect();
    check(
        verdicts == [Verdict::Insecure, Verdict::Inconclusive, Verdict::Secure],
        seen.iter()
            .map(|(f, k, h, v)| format!("{f} → {k:.4}±{h:.4} {v:?}"))
            .collect::<Vec<_>>()
            .join(", "),
    )
}

fn random_graph(rng: &mut RngStream, n: usize, density: f64) -> ContextGraph {
    let mut g = ContextGraph::with_vertices(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(density) {
                let kind = if rng.bernoulli(0.5) { EdgeKind::Exclusive } else { EdgeKind::Compatible };
                g.add_edge(u, v, kind).unwrap();
            }
        }
    }
    g
}

/// Largest vertex set with no `kind` edges, by trying every subset.
fn brute_independence(g: &ContextGraph, kind: EdgeKind) -> usize {
    let adj = g.adjacency(kind);
    (0u32..1 << g.n())
        .filter(|&s| (0..g.n()).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// Whether some vertex subset of size ≥ 4 induces a cycle.
fn has_induced_long_cycle(g: &ContextGraph) -> bool {
    let adj = g.adjacency(EdgeKind::Compatible);
    (0u32..1 << g.n()).filter(|s| s.count_ones() >= 4).any(|s| {
        let members: Vec<usize> = (0..g.n()).filter(|&v| s >> v & 1 == 1).collect();
        if members.iter().any(|&v| (adj[v] & s).count_ones() != 2) {
            return false;
        }
        // Two-regular: a cycle iff connected.
        let mut reached = 1u32 << members[0];
        loop {
            let next = members
                .iter()
                .filter(|&&v| reached >> v & 1 == 1)
                .fold(reached, |acc, &v| acc | (adj[v] & s));
            if next == reached {
                break;
            }
            reached = next;
        }
        reached == s
    })
}

fn criterion_8() -> Outcome {
    let mut rng = RngStream::new(8, 0);
    let mut failures = Vec::new();
    for case in 0..200 {
        let n = 4 + rng.below(6) as usize;
        let density = 0.2 + 0.6 * rng.uniform();
        let g = random_graph(&mut rng, n, density);
        let alpha = independence_number(&g, EdgeKind::Exclusive);
        if alpha != noncontextual_max(&g) || alpha != brute_independence(&g, EdgeKind::Exclusive) {
            failures.push(format!("case {case}: independence"));
        }
        if is_chordal(&g) == has_induced_long_cycle(&g) {
            failures.push(format!("case {case}: chordality"));
        }
        if clique_cover_number(&g).unwrap() < independence_number(&g, EdgeKind::Compatible) {
            failures.push(format!("case {case}: clique cover below alpha"));
        }
    }

    let configs = [
        ProtocolConfig::new(20_000, 31),
        ProtocolConfig::new(20_000, 32).with_eve(EveStrategy::random().with_resend(ResendPolicy::EigenstateOnClick)),
        ProtocolConfig::new(20_000, 33).with_mode(Mode::Entangled).with_eve(EveStrategy::fixed(3)),
    ];
    for (k, cfg) in configs.iter().enumerate() {
        let reports: Vec<String> = [1, 4]
            .iter()
            .map(|&threads| {
                let t = run_session_with_threads(cfg, threads).unwrap();
                SimulationReport::build(&t).unwrap().to_json()
            })
            .collect();
        if reports[0] != reports[1] {
            failures.push(format!("config {k}: report differs across thread counts"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "200 random graphs agree with brute force; 3 configurations byte-identical on 1 and 4 threads".into()
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("KCBS value", criterion_1),
        ("pentagon", criterion_2),
        ("monogamy certificate", criterion_3),
        ("ideal statistics", criterion_4),
        ("entangled mode", criterion_5),
        ("adversary oracle", criterion_6),
        ("security threshold", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        failed += !out.pass as usize;
        println!("criterion {} [{status}] {name}: {} ({:.2?})", i + 1, out.detail, start.elapsed());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
