//! Deciding whether the Laplacian and adjacency walks from a start vertex
//! have the same measurement statistics at every time.
//!
//! For a walk from `s`, the probability of finding the particle at `v` is a
//! finite cosine series `p_v(t) = Σ_d C_d cos(d t)` whose frequencies are
//! eigenvalue gaps. Grouping eigenvalues into clusters `c` with projector
//! weights `P_c = Σ_{k∈c} ψ_k(v) ψ_k(s)` makes the coefficients independent
//! of the eigenvector basis chosen inside degenerate eigenspaces:
//!
//! * `C_0 = Σ_c P_c²`
//! * `C_d = Σ_{c<c', λ̄_c'-λ̄_c = d} 2 P_c P_c'`
//!
//! Two walks agree for all `t` exactly when their series agree term by term,
//! which is what [`signatures_equal`] checks. A cheap sampled comparison
//! ([`sampled_filter`]) runs first and rejects almost every candidate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{Generator, SpectralDecomposition};

/// Numerical policy for classification. All fields are public so callers can
/// tighten or loosen them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Eigenvalues and gaps closer than `cluster_rel * max(1, max|λ|)` are
    /// treated as equal.
    pub cluster_rel: f64,
    /// Largest coefficient difference still considered equal.
    pub coeff_tol: f64,
    /// Coefficients smaller than this are dropped from a signature.
    pub drop_tol: f64,
    /// Sample times for the pre-filter.
    pub filter_times: Vec<f64>,
    /// Max-norm tolerance between sampled distributions.
    pub filter_tol: f64,
}

impl Default for Tolerances {
    // 2.718281828 is a sample time, not an approximation of e.
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        Tolerances {
            cluster_rel: 1e-8,
            coeff_tol: 1e-8,
            drop_tol: 1e-12,
            filter_times: vec![0.37, 1.0, 2.718281828, 7.0, 13.113],
            filter_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn cluster_tol(&self, dec: &SpectralDecomposition) -> f64 {
        self.cluster_rel * dec.spectral_scale().max(1.0)
    }
}

/// Merges of distinct values closer than this (relative to the spectral
/// scale) are attributed to rounding and are not reported.
const ROUNDING_REL: f64 = 1e-12;

/// Contiguous runs of sorted eigenvalues within `tol` of their neighbour.
#[derive(Debug, Clone)]
struct Clusters {
    means: Vec<f64>,
    ranges: Vec<std::ops::Range<usize>>,
    /// Clusters whose spread exceeds rounding level.
    suspicious: usize,
}

impl Clusters {
    fn new(dec: &SpectralDecomposition, tol: f64) -> Self {
        let values = dec.eigenvalues();
        let rounding = ROUNDING_REL * dec.spectral_scale().max(1.0);
        let mut means = Vec::new();
        let mut ranges = Vec::new();
        let mut suspicious = 0;
        let mut start = 0;
        for k in 1..=values.len() {
            if k == values.len() || values[k] - values[k - 1] > tol {
                let run = &values[start..k];
                means.push(run.iter().sum::<f64>() / run.len() as f64);
                if run[run.len() - 1] - run[0] > rounding {
                    suspicious += 1;
                }
                ranges.push(start..k);
                start = k;
            }
        }
        Clusters {
            means,
            ranges,
            suspicious,
        }
    }

    /// Projector weights `P_c` for the pair `(s, v)`.
    fn weights(&self, dec: &SpectralDecomposition, s: usize, v: usize) -> Vec<f64> {
        self.ranges
            .iter()
            .map(|r| {
                r.clone()
                    .map(|k| dec.vector_entry(k, v) * dec.vector_entry(k, s))
                    .sum()
            })
            .collect()
    }
}

/// Finite cosine expansion of one walk probability `p_v(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosineSignature {
    pub generator: Generator,
    pub start: usize,
    pub target: usize,
    /// `(gap, coefficient)` pairs, gaps ascending; a gap of 0 is the constant.
    pub terms: Vec<(f64, f64)>,
    /// Gaps within this distance were merged and are aligned when comparing.
    pub gap_tol: f64,
    /// Merges of gaps (or eigenvalues) that differed by more than rounding.
    pub suspicious_merges: usize,
}

impl CosineSignature {
    pub fn evaluate(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(d, c)| c * (d * t).cos()).sum()
    }

    /// Time-averaged probability (the `d = 0` coefficient).
    pub fn constant(&self) -> f64 {
        match self.terms.first() {
            Some(&(d, c)) if d <= self.gap_tol => c,
            _ => 0.0,
        }
    }
}

fn build_signature(
    dec: &SpectralDecomposition,
    clusters: &Clusters,
    s: usize,
    v: usize,
    tol: f64,
    drop_tol: f64,
) -> CosineSignature {
    let weights = clusters.weights(dec, s, v);
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(weights.len() * (weights.len() + 1) / 2);
    raw.push((0.0, weights.iter().map(|w| w * w).sum()));
    for (i, &wi) in weights.iter().enumerate() {
        if wi == 0.0 {
            continue;
        }
        for (j, &wj) in weights.iter().enumerate().skip(i + 1) {
            if wj != 0.0 {
                raw.push((clusters.means[j] - clusters.means[i], 2.0 * wi * wj));
            }
        }
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let rounding = ROUNDING_REL * dec.spectral_scale().max(1.0);
    let mut suspicious = clusters.suspicious;
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    let mut run_first = f64::NAN;
    let mut run_last = f64::NAN;
    for (gap, coeff) in raw {
        match terms.last_mut() {
            Some(last) if gap - run_last <= tol => {
                last.1 += coeff;
                run_last = gap;
            }
            _ => {
                if run_last - run_first > rounding {
                    suspicious += 1;
                }
                // the constant term keeps its exact zero gap
                terms.push((gap, coeff));
                run_first = gap;
                run_last = gap;
            }
        }
    }
    if run_last - run_first > rounding {
        suspicious += 1;
    }
    terms.retain(|&(_, c)| c.abs() >= drop_tol);
    CosineSignature {
        generator: dec.generator(),
        start: s,
        target: v,
        terms,
        gap_tol: tol,
        suspicious_merges: suspicious,
    }
}

/// Cosine expansion of `p_v(t)` for the walk from `s`, with eigenvalues and
/// gaps clustered at `cluster_tol` and negligible terms dropped.
pub fn cosine_signature(
    dec: &SpectralDecomposition,
    s: usize,
    v: usize,
    cluster_tol: f64,
) -> CosineSignature {
    let clusters = Clusters::new(dec, cluster_tol);
    build_signature(
        dec,
        &clusters,
        s,
        v,
        cluster_tol,
        Tolerances::default().drop_tol,
    )
}

/// First term at which two signatures disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignatureDifference {
    pub gap: f64,
    pub left: f64,
    pub right: f64,
}

/// Walks both term lists in gap order, pairing gaps within the larger of the
/// two gap tolerances; unmatched terms are compared against zero.
pub fn first_difference(
    x: &CosineSignature,
    y: &CosineSignature,
    coeff_tol: f64,
) -> Option<SignatureDifference> {
    let tol = x.gap_tol.max(y.gap_tol);
    let (mut i, mut j) = (0, 0);
    let check = |gap: f64, left: f64, right: f64| {
        ((left - right).abs() > coeff_tol).then_some(SignatureDifference { gap, left, right })
    };
    while i < x.terms.len() || j < y.terms.len() {
        let diff = match (x.terms.get(i), y.terms.get(j)) {
            (Some(&(gx, cx)), Some(&(gy, cy))) if (gx - gy).abs() <= tol => {
                i += 1;
                j += 1;
                check(gx, cx, cy)
            }
            (Some(&(gx, cx)), Some(&(gy, _))) if gx < gy => {
                i += 1;
                check(gx, cx, 0.0)
            }
            (Some(&(gx, cx)), None) => {
                i += 1;
                check(gx, cx, 0.0)
            }
            (_, Some(&(gy, cy))) => {
                j += 1;
                check(gy, 0.0, cy)
            }
            (None, None) => unreachable!(),
        };
        if diff.is_some() {
            return diff;
        }
    }
    None
}

pub fn signatures_equal(x: &CosineSignature, y: &CosineSignature, coeff_tol: f64) -> bool {
    first_difference(x, y, coeff_tol).is_none()
}

/// Largest `|p_L(v) - p_A(v)|` at `t` for walks from `s`, with the vertex
/// where it occurs.
fn sampled_gap(
    laplacian: &SpectralDecomposition,
    adjacency: &SpectralDecomposition,
    s: usize,
    t: f64,
) -> (usize, f64) {
    let pl = laplacian.amplitudes_with(&laplacian.phase_factors(t), s);
    let pa = adjacency.amplitudes_with(&adjacency.phase_factors(t), s);
    pl.iter()
        .zip(&pa)
        .map(|(l, a)| (l.norm_sqr() - a.norm_sqr()).abs())
        .enumerate()
        .fold(
            (0, 0.0),
            |best, (v, d)| if d > best.1 { (v, d) } else { best },
        )
}

/// True when both walks from `s` agree within `tol` (max norm) at every
/// sampled time. `false` is conclusive; `true` only nominates `s` for the
/// signature test.
pub fn sampled_filter(
    laplacian: &SpectralDecomposition,
    adjacency: &SpectralDecomposition,
    s: usize,
    times: &[f64],
    tol: f64,
) -> bool {
    times
        .iter()
        .all(|&t| sampled_gap(laplacian, adjacency, s, t).1 <= tol)
}

/// Outcome for one start vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartDetail {
    /// Same distribution at all times.
    Equivalent,
    /// The cosine series differ at `target` for frequency `gap`.
    Differs {
        target: usize,
        gap: f64,
        laplacian: f64,
        adjacency: f64,
    },
    /// Sampled distributions differ but no single coefficient exceeds the
    /// coefficient tolerance.
    FilterRejected {
        time: f64,
        target: usize,
        difference: f64,
    },
}

/// Classification of every start vertex of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    #[serde(skip)]
    pub graph: Graph,
    pub regular: bool,
    pub equivalent_starts: Vec<usize>,
    pub details: Vec<StartDetail>,
    /// Gap or eigenvalue merges wider than rounding level. Nonzero values
    /// mean the tolerance, not exact arithmetic, decided some equalities.
    pub suspicious_merges: usize,
}

/// Start-vertex classifier with a fixed numerical policy.
#[derive(Debug, Clone, Default)]
pub struct Classifier {
    pub tolerances: Tolerances,
}

/// Spectral data shared by all start vertices of one graph.
struct Prepared {
    laplacian: SpectralDecomposition,
    adjacency: SpectralDecomposition,
    l_clusters: Clusters,
    a_clusters: Clusters,
    l_tol: f64,
    a_tol: f64,
}

impl Classifier {
    pub fn new(tolerances: Tolerances) -> Self {
        Classifier { tolerances }
    }

    fn prepare(&self, g: &Graph) -> Result<Prepared> {
        let laplacian = SpectralDecomposition::of_graph(g, Generator::Laplacian)?;
        let adjacency = SpectralDecomposition::of_graph(g, Generator::Adjacency)?;
        let l_tol = self.tolerances.cluster_tol(&laplacian);
        let a_tol = self.tolerances.cluster_tol(&adjacency);
        Ok(Prepared {
            l_clusters: Clusters::new(&laplacian, l_tol),
            a_clusters: Clusters::new(&adjacency, a_tol),
            laplacian,
            adjacency,
            l_tol,
            a_tol,
        })
    }

    fn signatures(&self, p: &Prepared, s: usize, v: usize) -> (CosineSignature, CosineSignature) {
        let drop = self.tolerances.drop_tol;
        (
            build_signature(&p.laplacian, &p.l_clusters, s, v, p.l_tol, drop),
            build_signature(&p.adjacency, &p.a_clusters, s, v, p.a_tol, drop),
        )
    }

    /// Certifies start `s` against every target. Returns the first
    /// differing term, if any, and the suspicious-merge count seen.
    fn certify(&self, p: &Prepared, s: usize) -> (Option<StartDetail>, usize) {
        let mut merges = 0;
        for v in 0..p.laplacian.n() {
            let (l, a) = self.signatures(p, s, v);
            merges += l.suspicious_merges + a.suspicious_merges;
            if let Some(d) = first_difference(&l, &a, self.tolerances.coeff_tol) {
                let detail = StartDetail::Differs {
                    target: v,
                    gap: d.gap,
                    laplacian: d.left,
                    adjacency: d.right,
                };
                return (Some(detail), merges);
            }
        }
        (None, merges)
    }

    fn passes_filter(&self, p: &Prepared, s: usize) -> std::result::Result<(), StartDetail> {
        for &t in &self.tolerances.filter_times {
            let (target, difference) = sampled_gap(&p.laplacian, &p.adjacency, s, t);
            if difference > self.tolerances.filter_tol {
                return Err(StartDetail::FilterRejected {
                    time: t,
                    target,
                    difference,
                });
            }
        }
        Ok(())
    }

    fn check_connected(g: &Graph) -> Result<()> {
        if g.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Full per-vertex report. Regular graphs are accepted wholesale: their
    /// two generators differ by a multiple of the identity, which only adds
    /// a global phase.
    pub fn classify(&self, g: &Graph) -> Result<EquivalenceReport> {
        Self::check_connected(g)?;
        let n = g.n();
        if g.is_regular() {
            return Ok(EquivalenceReport {
                graph: g.clone(),
                regular: true,
                equivalent_starts: (0..n).collect(),
                details: vec![StartDetail::Equivalent; n],
                suspicious_merges: 0,
            });
        }
        let p = self.prepare(g)?;
        let mut details = Vec::with_capacity(n);
        let mut merges = 0;
        for s in 0..n {
            let filtered = self.passes_filter(&p, s);
            let (witness, m) = self.certify(&p, s);
            merges += m;
            details.push(match (filtered, witness) {
                (_, Some(w)) => w,
                (Err(rejected), None) => rejected,
                (Ok(()), None) => StartDetail::Equivalent,
            });
        }
        let equivalent_starts = details
            .iter()
            .enumerate()
            .filter_map(|(s, d)| (*d == StartDetail::Equivalent).then_some(s))
            .collect();
        Ok(EquivalenceReport {
            graph: g.clone(),
            regular: false,
            equivalent_starts,
            details,
            suspicious_merges: merges,
        })
    }

    /// Equivalent start vertices without per-vertex witnesses; the scan's
    /// hot path. Also returns the suspicious-merge count.
    pub fn equivalent_starts(&self, g: &Graph) -> Result<(Vec<usize>, usize)> {
        Self::check_connected(g)?;
        if g.is_regular() {
            return Ok(((0..g.n()).collect(), 0));
        }
        let p = self.prepare(g)?;
        let mut starts = Vec::new();
        let mut merges = 0;
        for s in 0..g.n() {
            if self.passes_filter(&p, s).is_err() {
                continue;
            }
            let (witness, m) = self.certify(&p, s);
            merges += m;
            if witness.is_none() {
                starts.push(s);
            }
        }
        Ok((starts, merges))
    }
}

/// [`Classifier::classify`] with default tolerances.
pub fn classify_start_vertices(g: &Graph) -> Result<EquivalenceReport> {
    Classifier::default().classify(g)
}
