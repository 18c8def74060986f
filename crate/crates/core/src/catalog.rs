//! Generation of connected-graph lists beyond the reach of the brute-force
//! oracle.
//!
//! Canonical labelling here follows the usual individualisation-refinement
//! scheme: refine an ordered partition to an equitable one, branch on the
//! first non-singleton cell, and keep the minimum leaf code. Automorphisms
//! discovered at equal leaves prune sibling branches in the same orbit.
//! Lists are produced by one-vertex extension of the connected classes of the
//! previous order (see [`crate::canon::connected_codes`] for why this is
//! complete) and written as graph6, sorted by canonical code.

use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;

use crate::canon::{graph_from_code, pair_index, CODE_MAX_N};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;

/// Adjacency as one bitmask per vertex.
#[derive(Clone, Copy)]
struct Bits {
    n: usize,
    rows: [u16; CODE_MAX_N],
}

impl Bits {
    fn new(g: &Graph) -> Self {
        let mut rows = [0u16; CODE_MAX_N];
        for (u, v) in g.edges() {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        Bits { n: g.n(), rows }
    }

    fn code(&self, label: &[usize]) -> u64 {
        let n = self.n;
        let m = n * n.saturating_sub(1) / 2;
        let mut code = 0u64;
        for u in 0..n {
            let mut row = self.rows[u] & !((2u16 << u) - 1);
            while row != 0 {
                let v = row.trailing_zeros() as usize;
                row &= row - 1;
                let (a, b) = (label[u].min(label[v]), label[u].max(label[v]));
                code |= 1 << (m - 1 - pair_index(a, b));
            }
        }
        code
    }
}

type Partition = Vec<Vec<usize>>;

/// Splits cells until every vertex in a cell has the same number of
/// neighbours in every cell. Sub-cells are ordered by ascending count
/// vectors, which depend only on the current ordered partition.
fn refine(g: &Bits, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<u16> = cells
            .iter()
            .map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v))
            .collect();
        let mut next: Partition = Vec::with_capacity(g.n);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let key = masks
                        .iter()
                        .map(|&m| (g.rows[v] & m).count_ones())
                        .collect();
                    (key, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

struct Search<'a> {
    g: &'a Bits,
    best: Option<(u64, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf_label(cells: &Partition, n: usize) -> Vec<usize> {
        let mut label = vec![0; n];
        for (i, cell) in cells.iter().enumerate() {
            label[cell[0]] = i;
        }
        label
    }

    fn visit(&mut self, cells: Partition, fixed: &mut Vec<usize>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let label = Self::leaf_label(&cells, self.g.n);
            let code = self.g.code(&label);
            match &self.best {
                Some((best, best_label)) if code == *best => {
                    // label^-1 ∘ best_label maps the graph onto itself
                    let mut inverse = vec![0; self.g.n];
                    for (v, &l) in label.iter().enumerate() {
                        inverse[l] = v;
                    }
                    let auto: Vec<usize> = best_label.iter().map(|&l| inverse[l]).collect();
                    if auto.iter().enumerate().any(|(i, &j)| i != j) {
                        self.automorphisms.push(auto);
                    }
                }
                Some((best, _)) if code > *best => {}
                _ => self.best = Some((code, label)),
            }
            return;
        };

        let candidates = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored.is_empty() && self.same_orbit(v, &explored, fixed) {
                continue;
            }
            let mut branch: Partition = Vec::with_capacity(cells.len() + 1);
            branch.extend(cells[..target].iter().cloned());
            branch.push(vec![v]);
            branch.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            branch.extend(cells[target + 1..].iter().cloned());
            let refined = refine(self.g, branch);
            fixed.push(v);
            self.visit(refined, fixed);
            fixed.pop();
            explored.push(v);
        }
    }

    /// Whether `v` shares an orbit with an explored vertex under the
    /// automorphisms found so far that fix every vertex in `fixed`.
    fn same_orbit(&self, v: usize, explored: &[usize], fixed: &[usize]) -> bool {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for auto in &self.automorphisms {
            if fixed.iter().any(|&f| auto[f] != f) {
                continue;
            }
            any = true;
            for (i, &j) in auto.iter().enumerate() {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = root(&mut parent, v);
        explored.iter().any(|&u| root(&mut parent, u) == rv)
    }
}

/// Canonical code via individualisation-refinement. Agrees with
/// [`crate::canon::canonical_min_code`] on isomorphism classes (two graphs
/// get equal codes iff they are isomorphic), though the codes themselves
/// differ because the search explores only refinement-compatible labellings.
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(
        g.n() <= CODE_MAX_N,
        "canonical codes need n <= {CODE_MAX_N}"
    );
    let bits = Bits::new(g);
    let start = refine(&bits, vec![(0..g.n()).collect()]);
    let mut search = Search {
        g: &bits,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(start, &mut Vec::new());
    search.best.expect("search reaches at least one leaf").0
}

/// Canonical codes of all connected graphs on `n` vertices, ascending.
pub fn connected_codes(n: usize) -> Result<Vec<u64>> {
    if !(1..=CODE_MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize {
            n,
            reason: "list generation supports 1 <= n <= 11",
        });
    }
    let mut classes = vec![canonical_code(&Graph::empty(1)?)];
    for order in 2..=n {
        let mut next: Vec<u64> = classes
            .par_iter()
            .fold(HashSet::new, |mut seen, &code| {
                let parent = graph_from_code(order - 1, code);
                let base = parent.edges();
                let mut edges = Vec::with_capacity(base.len() + order);
                for mask in 1u32..(1 << (order - 1)) {
                    edges.clear();
                    edges.extend_from_slice(&base);
                    edges.extend(
                        (0..order - 1)
                            .filter(|b| mask >> b & 1 == 1)
                            .map(|b| (b, order - 1)),
                    );
                    let child = Graph::from_edges(order, &edges).expect("valid extension");
                    seen.insert(canonical_code(&child));
                }
                seen
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            })
            .into_iter()
            .collect();
        next.sort_unstable();
        classes = next;
    }
    Ok(classes)
}

/// Writes the connected graphs on `n` vertices as graph6, one per line.
/// Returns the number of records written.
pub fn write_connected<W: Write>(n: usize, out: &mut W) -> Result<usize> {
    let codes = connected_codes(n)?;
    let io_err = |e: std::io::Error| Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    };
    for &code in &codes {
        let line = graph6::encode(&graph_from_code(n, code))?;
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(codes.len())
}
