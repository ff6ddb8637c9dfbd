//! Materialized finite graphs.
//!
//! Vertices are `0..vertex_count`. Each vertex carries a `u64` label; for
//! Kneser instances the label is the colex rank of the k-subset, for
//! synthetic graphs it is the index itself.

use std::fmt::Write as _;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::combinatorics::{unrank_bits, KSubset};
use crate::error::{param, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitGraph {
    adj: Vec<VertexSet>,
    edge_count: usize,
    labels: Vec<u64>,
    kneser: Option<(u32, u32)>,
}

impl ExplicitGraph {
    /// Edgeless graph on `m` vertices.
    pub fn empty(m: usize) -> Self {
        Self {
            adj: (0..m).map(|_| VertexSet::new(m)).collect(),
            edge_count: 0,
            labels: (0..m as u64).collect(),
            kneser: None,
        }
    }

    /// Graph from an undirected edge list. Duplicate edges are merged.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(m);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let m = self.vertex_count();
        if u >= m || v >= m {
            return param(format!("edge ({u},{v}) outside vertex range 0..{m}"));
        }
        if u == v {
            return param(format!("self-loop at vertex {u}"));
        }
        if !self.adj[u].contains(v) {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
            self.edge_count += 1;
        }
        Ok(())
    }

    pub(crate) fn with_kneser_labels(mut self, n: u32, k: u32, ranks: Vec<u64>) -> Self {
        debug_assert_eq!(ranks.len(), self.vertex_count());
        self.labels = ranks;
        self.kneser = Some((n, k));
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// `(n, k)` when the vertices are k-subsets of `[n]` labelled by colex rank.
    pub fn kneser_shape(&self) -> Option<(u32, u32)> {
        self.kneser
    }

    /// The k-subset behind vertex `v`, for Kneser-labelled graphs.
    pub fn subset(&self, v: usize) -> Option<KSubset> {
        self.kneser
            .map(|(n, k)| KSubset::from_bits_unchecked(n, k, unrank_bits(self.labels[v], n, k)))
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `e(G[S])`
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2
    }

    /// `|N(v) ∩ S|`
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> usize {
        self.adj[v].intersection_len(s)
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        let s = VertexSet::from_indices(self.vertex_count(), vertices.iter().copied());
        vertices.iter().all(|&v| self.adj[v].is_disjoint(&s))
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, |s| s.len());
        self.adj.iter().all(|s| s.len() == d).then_some(d)
    }

    /// Subgraph induced on `keep` (in the given order); labels are carried over.
    pub fn induced(&self, keep: &[usize]) -> ExplicitGraph {
        let m = keep.len();
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = ExplicitGraph::empty(m);
        for (i, &v) in keep.iter().enumerate() {
            for w in self.adj[v].iter() {
                let j = pos[w];
                if j != usize::MAX && j > i {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                    g.edge_count += 1;
                }
            }
        }
        g.labels = keep.iter().map(|&v| self.labels[v]).collect();
        g.kneser = self.kneser;
        g
    }

    /// Number of triangles, by neighbourhood intersection over ordered pairs.
    pub fn triangle_count(&self) -> u64 {
        let m = self.vertex_count();
        let mut above = VertexSet::new(m);
        let mut total = 0u64;
        for v in (0..m).rev() {
            // above = {v+1, ..., m-1}
            for u in self.adj[v].iter().filter(|&u| u < v) {
                total += self.adj[u].intersection(&self.adj[v]).intersection_len(&above) as u64;
            }
            above.insert(v);
        }
        total
    }

    /// Plain-text edge list: `p <V> <E>` then one `e <u> <v>` per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {} {}", self.vertex_count(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut graph: Option<(ExplicitGraph, usize)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|t| t.parse::<usize>().map_err(|e| err(format!("bad integer {t:?}: {e}"))))
                .collect::<Result<_>>()?;
            match (tag, graph.as_mut()) {
                ("p", None) => {
                    let [v, e] = nums[..] else {
                        return Err(err("expected `p <vertex_count> <edge_count>`".into()));
                    };
                    graph = Some((ExplicitGraph::empty(v), e));
                }
                ("p", Some(_)) => return Err(err("duplicate header".into())),
                ("e", Some((g, _))) => {
                    let [u, v] = nums[..] else {
                        return Err(err("expected `e <u> <v>`".into()));
                    };
                    let before = g.edge_count;
                    g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
                    if g.edge_count == before {
                        return Err(err(format!("duplicate edge ({u},{v})")));
                    }
                }
                ("e", None) => return Err(err("edge before header".into())),
                _ => return Err(err(format!("unknown line tag {tag:?}"))),
            }
        }
        let (g, declared) = graph.ok_or(Error::Parse {
            line: 0,
            message: "missing header".into(),
        })?;
        if g.edge_count != declared {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {declared} edges, found {}", g.edge_count),
            });
        }
        Ok(g)
    }

    pub fn path(m: usize) -> Self {
        let edges: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
        Self::from_edges(m, &edges).expect("valid path")
    }

    pub fn cycle(m: usize) -> Self {
        let mut edges: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
        if m >= 3 {
            edges.push((m - 1, 0));
        }
        Self::from_edges(m, &edges).expect("valid cycle")
    }

    pub fn complete(m: usize) -> Self {
        let edges: Vec<_> = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
        Self::from_edges(m, &edges).expect("valid complete graph")
    }

    /// Star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// Uniform random graph `G(m, e)` with `e` distinct edges.
    pub fn gnm(m: usize, e: usize, seed: u64) -> Result<Self> {
        let pairs = m * m.saturating_sub(1) / 2;
        if e > pairs {
            return param(format!("G({m},{e}) needs at most {pairs} edges"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty(m);
        for idx in index::sample(&mut rng, pairs, e).into_vec() {
            // decode idx as a pair (u < v) in colex order: idx = C(v,2) + u
            let mut v = 1;
            while v * (v + 1) / 2 <= idx {
                v += 1;
            }
            let u = idx - v * (v - 1) / 2;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}
