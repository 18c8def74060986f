//! Constructive infinite families of irregular graphs on which the two walks
//! agree from designated start vertices.
//!
//! Shared building blocks:
//!
//! * an odd cycle grown on an existing edge `(u, v)`: a path of `len - 2` new
//!   vertices from `u` to `v`; its *tip* is the middle path vertex, the one
//!   farthest from `{u, v}`;
//! * a chain of disjoint `K4` blocks, each with a left edge and a right edge,
//!   consecutive blocks joined by two parallel edges (a ladder rung pair);
//! * a tail pair: two vertices each adjacent to both ends of an edge.

use std::fmt;
use std::str::FromStr;

use crate::equivalence::classify_start_vertices;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;

/// Parameters selecting one family member.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Odd cycles on both ends of a chain of `K4` blocks; each cycle shares
    /// its base edge with the end block.
    F1 {
        left_cycle: usize,
        k4_count: usize,
        right_cycle: usize,
    },
    /// Odd cycle head, optional `K4` chain, and a tail pair.
    F2 { head_cycle: usize, k4_count: usize },
    /// Two tail gadgets whose hubs are joined by two equal-length paths.
    F3 { bridge_internal: usize },
    /// `M` independent exterior vertices fully joined to a `C_{M-2}`.
    F4 { exterior: usize },
    /// Three odd cycles through one shared edge.
    F5 { cycles: [usize; 3] },
    /// Cartesian product with `K2`. `base_starts` lists equivalent starts of
    /// the base; when absent they are computed by the classifier.
    F6 {
        base: Graph,
        base_starts: Option<Vec<usize>>,
    },
    /// Two `C4`s joined by an edge that is extended into an odd cycle.
    F7 { odd_cycle: usize },
    /// `K_i` core with `2i - 1` exterior vertices adjacent to the whole core.
    F8 { core: usize },
}

/// A generated graph with the start vertices its family designates.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub graph: Graph,
    pub designated_starts: Vec<usize>,
    pub label: String,
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Family(msg()))
    }
}

fn require_odd_cycle(name: &str, len: usize) -> Result<()> {
    require(len >= 3 && len % 2 == 1, || {
        format!("{name} must be an odd cycle length >= 3, got {len}")
    })
}

#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn vertices(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.vertex()).collect()
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn clique(&mut self, vs: &[usize]) {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.edge(u, v);
            }
        }
    }

    /// Closes an odd cycle of length `len` through edge `(u, v)` using the
    /// given `len - 2` path vertices; returns the tip.
    fn cycle_on_edge(&mut self, u: usize, v: usize, path: &[usize]) -> usize {
        self.edge(u, v);
        let mut prev = u;
        for &p in path {
            self.edge(prev, p);
            prev = p;
        }
        self.edge(prev, v);
        path[(path.len() - 1) / 2]
    }

    /// `count` complete blocks `[l1, l2, r1, r2]` joined `r1→l1`, `r2→l2`.
    fn k4_chain(&mut self, count: usize) -> Vec<[usize; 4]> {
        let mut blocks: Vec<[usize; 4]> = Vec::with_capacity(count);
        for _ in 0..count {
            let b = [self.vertex(), self.vertex(), self.vertex(), self.vertex()];
            self.clique(&b);
            if let Some(prev) = blocks.last().copied() {
                self.edge(prev[2], b[0]);
                self.edge(prev[3], b[1]);
            }
            blocks.push(b);
        }
        blocks
    }

    /// Two new vertices adjacent to both `u` and `v`.
    fn tail_pair(&mut self, u: usize, v: usize) -> [usize; 2] {
        let t = [self.vertex(), self.vertex()];
        for &x in &t {
            self.edge(x, u);
            self.edge(x, v);
        }
        t
    }

    fn finish(self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("builder emits valid edges")
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::F1 {
                left_cycle,
                k4_count,
                right_cycle,
            } => {
                require_odd_cycle("left cycle", *left_cycle)?;
                require_odd_cycle("right cycle", *right_cycle)?;
                require(*k4_count >= 1, || "F1 needs at least one K4".into())
            }
            FamilySpec::F2 { head_cycle, .. } => require_odd_cycle("head cycle", *head_cycle),
            FamilySpec::F3 { .. } => Ok(()),
            FamilySpec::F4 { exterior } => require(*exterior >= 5, || {
                format!("F4 needs at least 5 exterior vertices, got {exterior}")
            }),
            FamilySpec::F5 { cycles } => cycles
                .iter()
                .try_for_each(|&c| require_odd_cycle("F5 cycle", c)),
            FamilySpec::F6 { base, base_starts } => {
                require(base.is_connected(), || "F6 base must be connected".into())?;
                match base_starts {
                    Some(starts) => starts.iter().try_for_each(|&s| {
                        require(s < base.n(), || {
                            format!("F6 start {s} outside base vertices 0..{}", base.n())
                        })
                    }),
                    None => Ok(()),
                }
            }
            FamilySpec::F7 { odd_cycle } => require_odd_cycle("F7 cycle", *odd_cycle),
            FamilySpec::F8 { core } => require(*core >= 2, || {
                format!("F8 core must be K_i with i >= 2, got {core}")
            }),
        }
    }

    /// Vertex count of the generated graph.
    pub fn vertex_count(&self) -> usize {
        match self {
            FamilySpec::F1 {
                left_cycle,
                k4_count,
                right_cycle,
            } => left_cycle + 4 * k4_count + right_cycle - 4,
            FamilySpec::F2 {
                head_cycle,
                k4_count,
            } => head_cycle + 4 * k4_count + 2,
            FamilySpec::F3 { bridge_internal } => 8 + 2 * bridge_internal,
            FamilySpec::F4 { exterior } => 2 * exterior - 2,
            FamilySpec::F5 { cycles } => cycles.iter().sum::<usize>() - 4,
            FamilySpec::F6 { base, .. } => 2 * base.n(),
            FamilySpec::F7 { odd_cycle } => odd_cycle + 6,
            FamilySpec::F8 { core } => 3 * core - 1,
        }
    }

    pub fn generate(&self) -> Result<FamilyInstance> {
        self.validate()?;
        let mut b = Builder::default();
        let starts = match self {
            FamilySpec::F1 {
                left_cycle,
                k4_count,
                right_cycle,
            } => {
                let left = b.vertices(left_cycle - 2);
                let blocks = b.k4_chain(*k4_count);
                let right = b.vertices(right_cycle - 2);
                let (first, last) = (blocks[0], blocks[blocks.len() - 1]);
                vec![
                    b.cycle_on_edge(first[0], first[1], &left),
                    b.cycle_on_edge(last[2], last[3], &right),
                ]
            }
            FamilySpec::F2 {
                head_cycle,
                k4_count,
            } => {
                let head = b.vertices(head_cycle - 2);
                let (tip, (x, y)) = if *k4_count == 0 {
                    let (u, v) = (b.vertex(), b.vertex());
                    (b.cycle_on_edge(u, v, &head), (u, v))
                } else {
                    // The head shares its base edge with the first block; the
                    // last block is laddered to one more edge carrying the tail.
                    let blocks = b.k4_chain(*k4_count);
                    let (first, last) = (blocks[0], blocks[blocks.len() - 1]);
                    let tip = b.cycle_on_edge(first[0], first[1], &head);
                    let (x, y) = (b.vertex(), b.vertex());
                    b.edge(x, y);
                    b.edge(last[2], x);
                    b.edge(last[3], y);
                    (tip, (x, y))
                };
                let tails = b.tail_pair(x, y);
                vec![tip, tails[0], tails[1]]
            }
            FamilySpec::F3 { bridge_internal } => {
                let (a, bb) = (b.vertex(), b.vertex());
                b.edge(a, bb);
                let left_tails = b.tail_pair(a, bb);
                let (a2, b2) = (b.vertex(), b.vertex());
                b.edge(a2, b2);
                let right_tails = b.tail_pair(a2, b2);
                for (from, to) in [(a, a2), (bb, b2)] {
                    let mut prev = from;
                    for _ in 0..*bridge_internal {
                        let x = b.vertex();
                        b.edge(prev, x);
                        prev = x;
                    }
                    b.edge(prev, to);
                }
                vec![left_tails[0], left_tails[1], right_tails[0], right_tails[1]]
            }
            FamilySpec::F4 { exterior } => {
                let outer = b.vertices(*exterior);
                let inner = b.vertices(exterior - 2);
                for i in 0..inner.len() {
                    b.edge(inner[i], inner[(i + 1) % inner.len()]);
                }
                for &o in &outer {
                    for &i in &inner {
                        b.edge(o, i);
                    }
                }
                outer
            }
            FamilySpec::F5 { cycles } => {
                let (u, v) = (b.vertex(), b.vertex());
                cycles
                    .iter()
                    .map(|&len| {
                        let path = b.vertices(len - 2);
                        b.cycle_on_edge(u, v, &path)
                    })
                    .collect()
            }
            FamilySpec::F6 { base, base_starts } => {
                let starts = match base_starts {
                    Some(s) => s.clone(),
                    None => classify_start_vertices(base)?.equivalent_starts,
                };
                let k2 = Graph::complete(2)?;
                let graph = base.cartesian_product(&k2);
                return Ok(FamilyInstance {
                    designated_starts: starts.iter().flat_map(|&s| [2 * s, 2 * s + 1]).collect(),
                    graph,
                    label: self.to_string(),
                });
            }
            FamilySpec::F7 { odd_cycle } => {
                let left = b.vertices(4);
                let right = b.vertices(4);
                for sq in [&left, &right] {
                    for i in 0..4 {
                        b.edge(sq[i], sq[(i + 1) % 4]);
                    }
                }
                let path = b.vertices(odd_cycle - 2);
                vec![b.cycle_on_edge(left[0], right[0], &path)]
            }
            FamilySpec::F8 { core } => {
                let inner = b.vertices(*core);
                b.clique(&inner);
                let outer = b.vertices(2 * core - 1);
                for &o in &outer {
                    for &i in &inner {
                        b.edge(o, i);
                    }
                }
                outer
            }
        };
        let graph = b.finish();
        debug_assert_eq!(graph.n(), self.vertex_count());
        let mut designated_starts = starts;
        designated_starts.sort_unstable();
        Ok(FamilyInstance {
            graph,
            designated_starts,
            label: self.to_string(),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::F1 {
                left_cycle,
                k4_count,
                right_cycle,
            } => write!(f, "F1:{left_cycle},{k4_count},{right_cycle}"),
            FamilySpec::F2 {
                head_cycle,
                k4_count,
            } => write!(f, "F2:{head_cycle},{k4_count}"),
            FamilySpec::F3 { bridge_internal } => write!(f, "F3:{bridge_internal}"),
            FamilySpec::F4 { exterior } => write!(f, "F4:M={exterior}"),
            FamilySpec::F5 { cycles: [a, b, c] } => write!(f, "F5:{a},{b},{c}"),
            FamilySpec::F6 { base, base_starts } => {
                let g6 =
                    graph6::encode(base).unwrap_or_else(|_| format!("<{} vertices>", base.n()));
                write!(f, "F6:base={g6}")?;
                if let Some(starts) = base_starts {
                    let list: Vec<String> = starts.iter().map(ToString::to_string).collect();
                    write!(f, ";starts={}", list.join(","))?;
                }
                Ok(())
            }
            FamilySpec::F7 { odd_cycle } => write!(f, "F7:{odd_cycle}"),
            FamilySpec::F8 { core } => write!(f, "F8:i={core}"),
        }
    }
}

/// Parses positional parameters, each optionally written `name=value`.
fn numeric_params(family: &str, body: &str, names: &[&str]) -> Result<Vec<usize>> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != names.len() {
        return Err(Error::Family(format!(
            "{family} expects {} parameter(s) ({}), got {:?}",
            names.len(),
            names.join(","),
            body
        )));
    }
    parts
        .iter()
        .zip(names)
        .map(|(part, name)| {
            let value = match part.split_once('=') {
                Some((key, value)) if key.trim() == *name => value.trim(),
                Some((key, _)) => {
                    return Err(Error::Family(format!(
                        "{family}: expected parameter {name}, found {key}"
                    )))
                }
                None => part,
            };
            value.parse().map_err(|_| {
                Error::Family(format!(
                    "{family}: {name} must be an integer, got {value:?}"
                ))
            })
        })
        .collect()
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Grammar:
    ///
    /// ```text
    /// F1:<left>,<k4>,<right>      F2:<head>,<k4>      F3:<bridge>
    /// F4:M=<m>                    F5:<c1>,<c2>,<c3>   F7:<cycle>
    /// F8:i=<i>                    F6:base=<graph6>[;starts=<v>,<v>,...]
    /// ```
    ///
    /// Numeric parameters may be bare or `name=value` with the names shown.
    fn from_str(s: &str) -> Result<Self> {
        let (family, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Family(format!("descriptor {s:?} lacks ':'")))?;
        let family = family.trim().to_ascii_uppercase();
        let spec = match family.as_str() {
            "F1" => {
                let p = numeric_params("F1", body, &["left", "k4", "right"])?;
                FamilySpec::F1 {
                    left_cycle: p[0],
                    k4_count: p[1],
                    right_cycle: p[2],
                }
            }
            "F2" => {
                let p = numeric_params("F2", body, &["head", "k4"])?;
                FamilySpec::F2 {
                    head_cycle: p[0],
                    k4_count: p[1],
                }
            }
            "F3" => FamilySpec::F3 {
                bridge_internal: numeric_params("F3", body, &["bridge"])?[0],
            },
            "F4" => FamilySpec::F4 {
                exterior: numeric_params("F4", body, &["M"])?[0],
            },
            "F5" => {
                let p = numeric_params("F5", body, &["c1", "c2", "c3"])?;
                FamilySpec::F5 {
                    cycles: [p[0], p[1], p[2]],
                }
            }
            "F6" => {
                let mut base = None;
                let mut base_starts = None;
                for part in body.split(';') {
                    match part.split_once('=') {
                        Some(("base", g6)) => base = Some(graph6::decode(g6.trim())?),
                        Some(("starts", list)) => {
                            let starts = list
                                .split(',')
                                .map(|v| {
                                    v.trim().parse().map_err(|_| {
                                        Error::Family(format!("F6: bad start vertex {v:?}"))
                                    })
                                })
                                .collect::<Result<Vec<usize>>>()?;
                            base_starts = Some(starts);
                        }
                        _ => return Err(Error::Family(format!("F6: unexpected part {part:?}"))),
                    }
                }
                FamilySpec::F6 {
                    base: base.ok_or_else(|| Error::Family("F6 requires base=<graph6>".into()))?,
                    base_starts,
                }
            }
            "F7" => FamilySpec::F7 {
                odd_cycle: numeric_params("F7", body, &["cycle"])?[0],
            },
            "F8" => FamilySpec::F8 {
                core: numeric_params("F8", body, &["i"])?[0],
            },
            other => return Err(Error::Family(format!("unknown family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}
