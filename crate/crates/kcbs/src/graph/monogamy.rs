//! The joint commutation graph of the Alice-Bob and Alice-Eve KCBS tests and
//! the certificate that their values are monogamous.
//!
//! Vertices `0..5` are Bob's projectors `Π_i`, vertices `5..10` are Eve's
//! `Π^E_i`. Each `Π_i` is joined to `Π_{i±1}`, `Π^E_{i±1}` and `Π^E_i`, and
//! Eve's projectors form their own pentagon.
//!
//! The certificate splits the ten vertices into two chordal parts. A
//! chordal graph admits a joint distribution, so no assignment of
//! probabilities to a part can beat its independence number; summing the two
//! parts and normalizing by 5 bounds `K̃(A,B) + K̃(A,E)`.

use serde::{Deserialize, Serialize};

use super::{
    clique_cover_number, clique_cover_number_by, independence_number, is_chordal, noncontextual_max,
    ContextGraph, EdgeKind,
};
use crate::{Error, Result};

/// How the `Π_i – Π^E_i` edges are typed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointGraphMode {
    /// Every edge is an exclusivity constraint.
    PaperAbstract,
    /// Eve measures with Bob's own projectors, so `Π_i` and `Π^E_i` commute
    /// but are not exclusive.
    Mimic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    PaperAbstract,
    Mimic,
    Custom,
}

impl From<JointGraphMode> for CertificateMode {
    fn from(m: JointGraphMode) -> Self {
        match m {
            JointGraphMode::PaperAbstract => CertificateMode::PaperAbstract,
            JointGraphMode::Mimic => CertificateMode::Mimic,
        }
    }
}

/// The two-part decomposition used for the Alice-Bob / Alice-Eve bound:
/// `{Π^E_0, Π_2, Π^E_1, Π_1, Π^E_2}` and `{Π_0, Π_3, Π^E_3, Π_4, Π^E_4}`.
pub const PAPER_PARTS: [[usize; 5]; 2] = [[5, 2, 6, 1, 7], [0, 3, 8, 4, 9]];

pub fn joint_commutation_graph(mode: JointGraphMode) -> ContextGraph {
    let labels = (0..5)
        .map(|i| format!("Π_{i}"))
        .chain((0..5).map(|i| format!("Π^E_{i}")))
        .collect();
    let mut g = ContextGraph::new(labels).expect("ten vertices");
    let eve = |i: usize| 5 + i % 5;
    for i in 0..5 {
        let next = (i + 1) % 5;
        let prev = (i + 4) % 5;
        g.add_edge(i, next, EdgeKind::Exclusive).unwrap();
        g.add_edge(eve(i), eve(next), EdgeKind::Exclusive).unwrap();
        g.add_edge(i, eve(next), EdgeKind::Exclusive).unwrap();
        g.add_edge(i, eve(prev), EdgeKind::Exclusive).unwrap();
        let same = match mode {
            JointGraphMode::PaperAbstract => EdgeKind::Exclusive,
            JointGraphMode::Mimic => EdgeKind::Compatible,
        };
        g.add_edge(i, eve(i), same).unwrap();
    }
    g
}

/// One named predicate of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogamyCertificate {
    pub mode: CertificateMode,
    pub joint_graph: ContextGraph,
    pub parts: [Vec<usize>; 2],
    pub chordal: [bool; 2],
    /// Independence number of each part with respect to exclusive edges.
    pub alpha: [usize; 2],
    /// `(alpha[0] + alpha[1]) / 5`.
    pub bound: f64,
    /// Max number of ones over exclusivity-respecting assignments of the
    /// whole joint graph.
    pub deterministic_max: usize,
    /// Clique cover over all edges.
    pub clique_cover: usize,
    /// Clique cover using only exclusive edges.
    pub exclusive_clique_cover: usize,
    /// `n · α` for two pentagon tests: the clique cover the monogamy
    /// criterion asks for. Reported, not asserted.
    pub n_alpha: usize,
    /// Doubling `bound` through `K = 2K̃`.
    pub anticorr_bound_derived: f64,
    /// The anti-correlation bound as usually quoted (6/5).
    pub anticorr_bound_quoted: f64,
    pub checks: Vec<Check>,
}

impl MonogamyCertificate {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str())
    }
}

/// Builds a certificate for `graph` split into `parts`.
///
/// Structural checks (the parts partition the vertices, each part is chordal)
/// apply in every mode. In `PaperAbstract` mode the certificate additionally
/// requires both parts to have independence number 2 and the bound to be
/// exactly 4/5.
pub fn monogamy_certificate(
    graph: &ContextGraph,
    parts: [Vec<usize>; 2],
    mode: CertificateMode,
) -> Result<MonogamyCertificate> {
    let n = graph.n();
    let mut seen = vec![0u32; n];
    for &v in parts.iter().flatten() {
        if v >= n {
            return Err(Error::InvalidGraph(format!("part vertex {v} out of range")));
        }
        seen[v] += 1;
    }
    let partition = seen.iter().all(|&c| c == 1);

    let sub = [graph.induced(&parts[0])?, graph.induced(&parts[1])?];
    let chordal = [is_chordal(&sub[0]), is_chordal(&sub[1])];
    let alpha = [
        independence_number(&sub[0], EdgeKind::Exclusive),
        independence_number(&sub[1], EdgeKind::Exclusive),
    ];
    let bound = (alpha[0] + alpha[1]) as f64 / 5.0;
    let deterministic_max = noncontextual_max(graph);
    let (clique_cover, exclusive_clique_cover) = if n <= super::CLIQUE_COVER_LIMIT {
        (
            clique_cover_number(graph)?,
            clique_cover_number_by(graph, EdgeKind::Exclusive)?,
        )
    } else {
        (0, 0)
    };

    let mut checks = vec![
        Check {
            name: "parts partition the vertices".into(),
            passed: partition,
        },
        Check {
            name: "first part is chordal".into(),
            passed: chordal[0],
        },
        Check {
            name: "second part is chordal".into(),
            passed: chordal[1],
        },
        Check {
            name: "deterministic max within summed bound".into(),
            passed: deterministic_max <= alpha[0] + alpha[1],
        },
    ];
    if mode == CertificateMode::PaperAbstract {
        checks.push(Check {
            name: "both parts have independence number 2".into(),
            passed: alpha == [2, 2],
        });
        checks.push(Check {
            name: "normalized bound is 4/5".into(),
            passed: alpha[0] + alpha[1] == 4,
        });
    }

    Ok(MonogamyCertificate {
        mode,
        joint_graph: graph.clone(),
        parts,
        chordal,
        alpha,
        bound,
        deterministic_max,
        clique_cover,
        exclusive_clique_cover,
        n_alpha: 2 * 2,
        anticorr_bound_derived: 2.0 * bound,
        anticorr_bound_quoted: 6.0 / 5.0,
        checks,
    })
}

/// Certificate for the standard decomposition of the joint graph in `mode`.
pub fn paper_certificate(mode: JointGraphMode) -> MonogamyCertificate {
    let g = joint_commutation_graph(mode);
    monogamy_certificate(&g, PAPER_PARTS.map(|p| p.to_vec()), mode.into())
        .expect("standard parts are in range")
}

/// Builds and checks the standard certificate; any failed predicate is an
/// error naming it.
pub fn verify_monogamy_decomposition() -> Result<MonogamyCertificate> {
    let cert = paper_certificate(JointGraphMode::PaperAbstract);
    if let Some(name) = cert.failed_checks().next() {
        return Err(Error::CertificateCheck(name.to_string()));
    }
    Ok(cert)
}
