//! Exact algorithms over small measurement-compatibility graphs.
//!
//! Vertices are measurements. An edge is either `Compatible` (the two can be
//! measured jointly) or `Exclusive` (compatible, and the two outcomes "1"
//! can never occur together). Adjacency is stored as one bitmask per vertex,
//! so graphs are capped at 32 vertices.

mod chordal;
mod cover;
mod independence;
mod monogamy;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use chordal::{is_chordal, lex_bfs, perfect_elimination_ordering};
pub use cover::{clique_cover_number, clique_cover_number_by, CLIQUE_COVER_LIMIT};
pub use independence::{for_each_assignment, independence_number, noncontextual_max};
pub use monogamy::{
    joint_commutation_graph, monogamy_certificate, paper_certificate, verify_monogamy_decomposition, Check,
    CertificateMode, JointGraphMode, MonogamyCertificate, PAPER_PARTS,
};

pub const MAX_VERTICES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Exclusive,
    Compatible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextGraph {
    labels: Vec<String>,
    exclusive: Vec<u32>,
    compatible: Vec<u32>,
}

impl ContextGraph {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::InstanceTooLarge(n, MAX_VERTICES));
        }
        Ok(Self {
            labels,
            exclusive: vec![0; n],
            compatible: vec![0; n],
        })
    }

    /// Vertices labelled `0..n`.
    pub fn with_vertices(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Adds (or upgrades) the edge `{u, v}`. Adding an existing edge never
    /// creates a parallel edge; an `Exclusive` request upgrades a
    /// `Compatible` one.
    pub fn add_edge(&mut self, u: usize, v: usize, kind: EdgeKind) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
        }
        self.compatible[u] |= 1 << v;
        self.compatible[v] |= 1 << u;
        if kind == EdgeKind::Exclusive {
            self.exclusive[u] |= 1 << v;
            self.exclusive[v] |= 1 << u;
        }
        Ok(())
    }

    /// Kind of the edge `{u, v}`, if present.
    pub fn edge(&self, u: usize, v: usize) -> Option<EdgeKind> {
        if self.exclusive[u] >> v & 1 == 1 {
            Some(EdgeKind::Exclusive)
        } else if self.compatible[u] >> v & 1 == 1 {
            Some(EdgeKind::Compatible)
        } else {
            None
        }
    }

    /// Adjacency masks for edges of the given kind. `Compatible` includes
    /// every edge, since exclusive measurements are also compatible.
    pub fn adjacency(&self, kind: EdgeKind) -> &[u32] {
        match kind {
            EdgeKind::Exclusive => &self.exclusive,
            EdgeKind::Compatible => &self.compatible,
        }
    }

    pub fn degree(&self, v: usize, kind: EdgeKind) -> u32 {
        self.adjacency(kind)[v].count_ones()
    }

    /// All edges with `u < v`, tagged with their strongest kind.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeKind)> + '_ {
        (0..self.n()).flat_map(move |u| {
            (u + 1..self.n()).filter_map(move |v| self.edge(u, v).map(|k| (u, v, k)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// The subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<ContextGraph> {
        let mut g = ContextGraph::new(vertices.iter().map(|&v| self.labels[v].clone()).collect())?;
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if let Some(kind) = self.edge(u, v) {
                    g.add_edge(a, b, kind)?;
                }
            }
        }
        Ok(g)
    }

    /// Structural invariants: no self-loops, symmetric masks, exclusive
    /// edges contained in compatible edges, no bits beyond `n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let live = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for v in 0..n {
            let (ex, co) = (self.exclusive[v], self.compatible[v]);
            if (ex | co) >> v & 1 == 1 {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {v}")));
            }
            if ex & !co != 0 {
                return Err(Error::InvalidGraph(format!("vertex {v}: exclusive edge not compatible")));
            }
            if co & !live != 0 {
                return Err(Error::InvalidGraph(format!("vertex {v}: edge to missing vertex")));
            }
            for u in 0..n {
                if (co >> u & 1) != (self.compatible[u] >> v & 1)
                    || (ex >> u & 1) != (self.exclusive[u] >> v & 1)
                {
                    return Err(Error::InvalidGraph(format!("asymmetric edge ({u}, {v})")));
                }
            }
        }
        Ok(())
    }
}

/// The 5-cycle with exclusive edges `{i, i+1}`.
pub fn pentagon() -> ContextGraph {
    cycle(5, EdgeKind::Exclusive)
}

pub fn cycle(n: usize, kind: EdgeKind) -> ContextGraph {
    let mut g = ContextGraph::with_vertices(n).expect("small cycle");
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, kind).expect("valid cycle edge");
    }
    g
}

pub fn complete(n: usize, kind: EdgeKind) -> ContextGraph {
    let mut g = ContextGraph::with_vertices(n).expect("small clique");
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v, kind).expect("valid clique edge");
        }
    }
    g
}

/// A 0/1 value per vertex that never sets both ends of an exclusive edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    bits: u32,
    n: usize,
}

impl Assignment {
    /// Checks exclusivity against `g`.
    pub fn new(g: &ContextGraph, bits: u32) -> Result<Self> {
        let n = g.n();
        if n < 32 && bits >> n != 0 {
            return Err(Error::InvalidGraph("assignment sets a missing vertex".into()));
        }
        for v in 0..n {
            if bits >> v & 1 == 1 && g.adjacency(EdgeKind::Exclusive)[v] & bits != 0 {
                return Err(Error::InvalidGraph(format!(
                    "assignment sets vertex {v} together with an exclusive neighbor"
                )));
            }
        }
        Ok(Self { bits, n })
    }

    pub(crate) fn from_bits_unchecked(bits: u32, n: usize) -> Self {
        Self { bits, n }
    }

    pub fn value(&self, v: usize) -> u8 {
        (self.bits >> v & 1) as u8
    }

    pub fn values(&self) -> Vec<u8> {
        (0..self.n).map(|v| self.value(v)).collect()
    }

    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

/// Serialized form of a graph: labels plus a tagged edge list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub labels: Vec<String>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

impl From<&ContextGraph> for GraphDocument {
    fn from(g: &ContextGraph) -> Self {
        Self {
            labels: g.labels.clone(),
            edges: g.edges().map(|(u, v, kind)| EdgeDocument { u, v, kind }).collect(),
        }
    }
}

impl TryFrom<&GraphDocument> for ContextGraph {
    type Error = Error;

    fn try_from(doc: &GraphDocument) -> Result<Self> {
        let mut g = ContextGraph::new(doc.labels.clone())?;
        for e in &doc.edges {
            if e.u < g.n() && e.v < g.n() && e.u != e.v && g.edge(e.u, e.v).is_some() {
                return Err(Error::InvalidGraph(format!("parallel edge ({}, {})", e.u, e.v)));
            }
            g.add_edge(e.u, e.v, e.kind)?;
        }
        Ok(g)
    }
}

impl Serialize for ContextGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDocument::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContextGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GraphDocument::deserialize(d)?;
        ContextGraph::try_from(&doc).map_err(serde::de::Error::custom)
    }
}
