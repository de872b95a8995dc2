//! Simple undirected graphs and the two system matrices built from them.
//!
//! Node indices are 0-based in the library. The text file format in the
//! companion crate is 1-based and converts at the boundary.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A simple undirected graph: no self-loops, no duplicate edges.
///
/// Edges are stored normalized (`i < j`) and sorted, so two graphs with the
/// same edge set compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Sorted edge list with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Node degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Dense 0/1 adjacency matrix `G`.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            g[(i, j)] = 1.0;
            g[(j, i)] = 1.0;
        }
        g
    }

    /// Whether every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Builds a validated graph on `n` nodes from 0-based pairs.
///
/// Pairs may be given in either orientation; they are normalized to `i < j`.
pub fn build_graph(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut set = BTreeSet::new();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange { i: a, j: b, n });
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        let e = if a < b { (a, b) } else { (b, a) };
        if !set.insert(e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
    }
    Ok(Graph {
        n,
        edges: set.into_iter().collect(),
    })
}

/// Cycle graph `C_n`.
pub fn generate_ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build_graph(n, &pairs)
}

/// Degree-proportional (Barabási-Albert) growth.
///
/// Starts from a star on `m + 1` nodes (node 0 at the center); every later
/// node attaches to `m` distinct existing nodes chosen with probability
/// proportional to their current degree. With `m = 1` the result is a tree.
/// Output depends only on `(n, m, seed)`.
pub fn generate_preferential_attachment(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 {
        return Err(Error::BadParameters(format!(
            "m must be at least 1, got {m}"
        )));
    }
    if n < m + 1 {
        return Err(Error::BadParameters(format!(
            "need n >= m + 1, got n = {n}, m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(m + (n - m - 1) * m);
    // every endpoint occurrence; sampling uniformly from it is degree-proportional
    let mut endpoints = Vec::new();
    for leaf in 1..=m {
        pairs.push((0, leaf));
        endpoints.push(0);
        endpoints.push(leaf);
    }
    let mut targets = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            pairs.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    build_graph(n, &pairs)
}

/// Which system matrix to build from a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LaplacianKind {
    /// `L = D - G`.
    Combinatorial,
    /// `D^-1 G`, the row-stochastic random-walk matrix.
    NormalizedRandomWalk,
}

/// A dense `n x n` Laplacian together with the degrees it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix {
    entries: DMatrix<f64>,
    kind: LaplacianKind,
    degrees: Vec<f64>,
}

impl SystemMatrix {
    /// The matrix entries.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// The Laplacian kind.
    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    /// Node degrees as floats.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Builds the system matrix of `g` for the given kind.
pub fn laplacian(g: &Graph, kind: LaplacianKind) -> Result<SystemMatrix> {
    let deg = g.degrees();
    let n = g.node_count();
    let entries = match kind {
        LaplacianKind::Combinatorial => {
            let mut l = -g.adjacency();
            for (i, &d) in deg.iter().enumerate() {
                l[(i, i)] = d as f64;
            }
            l
        }
        LaplacianKind::NormalizedRandomWalk => {
            if let Some(i) = deg.iter().position(|&d| d == 0) {
                return Err(Error::IsolatedNode(i));
            }
            let mut p = DMatrix::zeros(n, n);
            for &(i, j) in g.edges() {
                p[(i, j)] = 1.0 / deg[i] as f64;
                p[(j, i)] = 1.0 / deg[j] as f64;
            }
            p
        }
    };
    Ok(SystemMatrix {
        entries,
        kind,
        degrees: deg.into_iter().map(|d| d as f64).collect(),
    })
}
