//! Simple undirected graphs and the matrices derived from them.
//!
//! Vertices are 0-based. A graph owns its adjacency relation and is never
//! mutated after construction; the adjacency matrix `A`, the degree matrix `D`
//! and the Laplacian `L = A - D` are produced on demand as [`SymmetricMatrix`]
//! values.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Immutable simple graph: no self-loops, no multi-edges, undirected.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse into one.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = vec![false; n * n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop { u });
            }
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
        Ok(Graph { n, adj })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::from_edges(n, &edges)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedSize {
                n,
                reason: "a cycle needs at least 3 vertices",
            });
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// The Petersen graph (3-regular, 10 vertices).
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("static edge list")
    }

    pub(crate) fn from_raw(n: usize, adj: Vec<bool>) -> Self {
        debug_assert_eq!(adj.len(), n * n);
        Graph { n, adj }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[v * self.n..(v + 1) * self.n];
        row.iter().enumerate().filter_map(|(u, &e)| e.then_some(u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v * self.n..(v + 1) * self.n]
            .iter()
            .filter(|&&e| e)
            .count()
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count() / 2
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let is_regular = degrees.windows(2).all(|w| w[0] == w[1]);
        DegreeProfile {
            degrees,
            is_regular,
        }
    }

    pub fn is_regular(&self) -> bool {
        self.degree_profile().is_regular
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == self.n
    }

    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n);
        for (u, v) in self.edges() {
            m.set(u, v, 1.0);
        }
        m
    }

    /// `L = A - D`: off-diagonal entries from `A`, diagonal `-deg(i)`.
    pub fn laplacian(&self) -> SymmetricMatrix {
        let mut m = self.adjacency_matrix();
        for v in 0..self.n {
            m.set(v, v, -(self.degree(v) as f64));
        }
        m
    }

    /// Cartesian product `self □ other`. Vertex `(i, j)` maps to
    /// `i * other.n() + j`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut adj = vec![false; n * n];
        for i in 0..n1 {
            for j in 0..n2 {
                let a = i * n2 + j;
                for jj in other.neighbors(j) {
                    adj[a * n + i * n2 + jj] = true;
                }
                for ii in self.neighbors(i) {
                    adj[a * n + ii * n2 + j] = true;
                }
            }
        }
        Graph { n, adj }
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let n = self.n;
        let mut adj = vec![false; n * n];
        for (u, v) in self.edges() {
            let (a, b) = (perm[u], perm[v]);
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        Graph { n, adj }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Vertex degrees and whether they all coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub is_regular: bool,
}

/// Dense real symmetric matrix. Writes are mirrored so `m[i][j] == m[j][i]`
/// holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds from a row-major square array, symmetrising with the upper
    /// triangle as the source of truth.
    pub fn from_upper(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "expected {n}x{n} entries");
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, rows[i * n + j]);
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest absolute entry; zero for the empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
