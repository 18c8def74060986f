//! Brute-force canonical forms and the small-order enumeration oracle.
//!
//! The canonical code of a graph is the minimum, over all vertex
//! permutations, of its upper-triangle bit string read in graph6 column
//! order. It is slow (`n!` permutations) and deliberately free of any
//! cleverness so it can serve as ground truth for the refinement-based
//! labeller in [`crate::catalog`] and for ingested graph lists.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by [`enumerate_connected`].
pub const ORACLE_MAX_N: usize = 7;

/// Largest order whose code fits the 64-bit representation.
pub const CODE_MAX_N: usize = 11;

/// Index of the pair `(i, j)`, `i < j`, in graph6 column order.
#[inline]
pub(crate) fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Bit string of a labelled graph; the first pair is the most significant bit.
pub fn labelled_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= CODE_MAX_N, "code only defined for n <= {CODE_MAX_N}");
    let m = n * n.saturating_sub(1) / 2;
    g.edges()
        .into_iter()
        .fold(0, |acc, (u, v)| acc | 1 << (m - 1 - pair_index(u, v)))
}

/// Inverse of [`labelled_code`].
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let m = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code >> (m - 1 - pair_index(i, j)) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("code decodes to a simple graph")
}

/// Minimum labelled code over all `n!` relabellings.
pub fn canonical_min_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= CODE_MAX_N, "code only defined for n <= {CODE_MAX_N}");
    let m = n * n.saturating_sub(1) / 2;
    let edges = g.edges();
    let code_of = |perm: &[usize]| {
        edges.iter().fold(0u64, |acc, &(u, v)| {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            acc | 1 << (m - 1 - pair_index(a, b))
        })
    };

    // Heap's algorithm over all permutations.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = code_of(&perm);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(code_of(&perm));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Graph relabelled into its brute-force canonical form.
pub fn canonical_min_form(g: &Graph) -> Graph {
    graph_from_code(g.n(), canonical_min_code(g))
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && {
        let (mut da, mut db) = (a.degree_profile().degrees, b.degree_profile().degrees);
        da.sort_unstable();
        db.sort_unstable();
        da == db && canonical_min_code(a) == canonical_min_code(b)
    }
}

/// Canonical codes of all connected graphs on `n` vertices, ascending.
///
/// Every connected graph on `n >= 2` vertices has a vertex whose removal
/// leaves it connected, so the classes on `n` vertices are exactly the
/// canonical forms of the classes on `n - 1` vertices extended by one vertex
/// with a nonempty neighbourhood.
pub fn connected_codes(n: usize) -> Result<BTreeSet<u64>> {
    if !(1..=ORACLE_MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize {
            n,
            reason: "enumeration oracle supports 1 <= n <= 7",
        });
    }
    let mut classes = BTreeSet::from([canonical_min_code(&Graph::empty(1)?)]);
    for order in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &classes {
            let parent = graph_from_code(order - 1, code);
            let base = parent.edges();
            for mask in 1u32..(1 << (order - 1)) {
                let mut edges = base.clone();
                edges.extend(
                    (0..order - 1)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| (b, order - 1)),
                );
                let child = Graph::from_edges(order, &edges)?;
                next.insert(canonical_min_code(&child));
            }
        }
        classes = next;
    }
    Ok(classes)
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, in canonical form, ordered by canonical code.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>> {
    Ok(connected_codes(n)?
        .into_iter()
        .map(|code| graph_from_code(n, code))
        .collect())
}
