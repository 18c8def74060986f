//! Real symmetric eigendecomposition and spectral-form walk evolution.
//!
//! A walk generated by a symmetric matrix `H` evolves as
//! `U(t) = exp(iHt) = Σ_k e^{iλ_k t} ψ_k ψ_kᵀ`. Evaluating the sum directly
//! keeps the error independent of `t`, provided the phases `λ_k t` are
//! accurate. Eigenvalues are therefore refined to double-double precision
//! with a compensated Rayleigh quotient, and each phase is reduced modulo
//! 2π in double-double before the sine and cosine are taken.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SymmetricMatrix};

/// Tolerance on unit norm and column sums of probability data.
pub const NORM_TOL: f64 = 1e-10;
/// Slack allowed above 1 for individual probabilities.
pub const PROBABILITY_TOL: f64 = 1e-12;
/// Sweep cap for the cyclic Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;

/// Which matrix generates the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `L = A - D`
    Laplacian,
    /// `A`
    Adjacency,
}

impl Generator {
    pub fn matrix(self, g: &Graph) -> SymmetricMatrix {
        match self {
            Generator::Laplacian => g.laplacian(),
            Generator::Adjacency => g.adjacency_matrix(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Laplacian => "L",
            Generator::Adjacency => "A",
        })
    }
}

// ---------------------------------------------------------------------------
// double-double arithmetic

#[derive(Debug, Clone, Copy, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    /// 2π to ~106 bits.
    const TWO_PI: Self = DoubleDouble {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };

    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn normalize(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        DoubleDouble { hi: s, lo: e }
    }

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Self::normalize(s, e + self.lo + other.lo)
    }

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        Self::normalize(p, e + self.lo * x)
    }

    fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self.add(other.mul_f64(q1).neg());
        let q2 = r.hi / other.hi;
        let r = r.add(other.mul_f64(q2).neg());
        let q3 = r.hi / other.hi;
        Self::normalize(q1, q2).add(Self::from_f64(q3))
    }

    /// Representative of `self` modulo 2π in `[-π, π]`, rounded to f64.
    fn reduce_two_pi(self) -> f64 {
        let k = (self.hi / Self::TWO_PI.hi).round();
        if k == 0.0 {
            return self.hi + self.lo;
        }
        let r = self.add(Self::TWO_PI.mul_f64(k).neg());
        r.hi + r.lo
    }
}

// ---------------------------------------------------------------------------
// eigensolver

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    /// Low-order parts of the double-double eigenvalues.
    eigenvalues_lo: Vec<f64>,
    /// Column `k` occupies `vectors[k * n..(k + 1) * n]`.
    vectors: Vec<f64>,
    generator: Generator,
    sweeps: usize,
}

/// Cyclic Jacobi diagonalisation. Returns the eigenvalues in diagonal order,
/// eigenvectors column-major, and the number of sweeps used.
fn jacobi(m: &SymmetricMatrix) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    // v[k * n + i]: component i of eigenvector k
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off == 0.0 || off <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // negligible next to both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vp = v[p * n + r];
                    let vq = v[q * n + r];
                    v[p * n + r] = vp - s * (vq + tau * vp);
                    v[q * n + r] = vq + s * (vp - tau * vq);
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v, sweeps))
}

/// Rayleigh quotient `xᵀMx / xᵀx` accumulated in double-double.
fn rayleigh_quotient(m: &SymmetricMatrix, x: &[f64]) -> DoubleDouble {
    let n = m.n();
    let mut num = DoubleDouble::ZERO;
    let mut den = DoubleDouble::ZERO;
    for i in 0..n {
        let row = m.row(i);
        let mut mx = DoubleDouble::ZERO;
        for j in 0..n {
            let (p, e) = two_prod(row[j], x[j]);
            mx = mx.add(DoubleDouble { hi: p, lo: e });
        }
        num = num.add(mx.mul_f64(x[i]));
        let (p, e) = two_prod(x[i], x[i]);
        den = den.add(DoubleDouble { hi: p, lo: e });
    }
    num.div(den)
}

impl SpectralDecomposition {
    pub fn new(m: &SymmetricMatrix, generator: Generator) -> Result<Self> {
        let n = m.n();
        let (_, vectors, sweeps) = jacobi(m)?;
        let refined: Vec<DoubleDouble> = (0..n)
            .map(|k| rayleigh_quotient(m, &vectors[k * n..(k + 1) * n]))
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (refined[i], refined[j]);
            a.hi.total_cmp(&b.hi).then(a.lo.total_cmp(&b.lo))
        });

        let mut sorted_vectors = Vec::with_capacity(n * n);
        let mut eigenvalues = Vec::with_capacity(n);
        let mut eigenvalues_lo = Vec::with_capacity(n);
        for &k in &order {
            eigenvalues.push(refined[k].hi);
            eigenvalues_lo.push(refined[k].lo);
            sorted_vectors.extend_from_slice(&vectors[k * n..(k + 1) * n]);
        }
        Ok(SpectralDecomposition {
            n,
            eigenvalues,
            eigenvalues_lo,
            vectors: sorted_vectors,
            generator,
            sweeps,
        })
    }

    /// Decomposes the chosen generator matrix of `g`.
    pub fn of_graph(g: &Graph, generator: Generator) -> Result<Self> {
        Self::new(&generator.matrix(g), generator)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `v` of eigenvector `k`.
    #[inline]
    pub fn vector_entry(&self, k: usize, v: usize) -> f64 {
        self.vectors[k * self.n + v]
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Largest `|λ|`.
    pub fn spectral_scale(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `λ_k t` reduced into `[-π, π]`.
    pub fn phase(&self, k: usize, t: f64) -> f64 {
        let lambda = DoubleDouble {
            hi: self.eigenvalues[k],
            lo: self.eigenvalues_lo[k],
        };
        if t.abs() * self.eigenvalues[k].abs() <= PI {
            return (lambda.mul_f64(t)).hi;
        }
        lambda.mul_f64(t).reduce_two_pi()
    }

    /// Max-entry deviation of `Σ_k λ_k ψ_k ψ_kᵀ` from `m`.
    pub fn reconstruction_error(&self, m: &SymmetricMatrix) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n)
                    .map(|k| {
                        self.eigenvalues[k] * self.vector_entry(k, i) * self.vector_entry(k, j)
                    })
                    .sum();
                worst = worst.max((s - m.get(i, j)).abs());
            }
        }
        worst
    }

    /// Max-entry deviation of the Gram matrix of eigenvectors from identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                let dot: f64 = self
                    .eigenvector(j)
                    .iter()
                    .zip(self.eigenvector(k))
                    .map(|(a, b)| a * b)
                    .sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).abs());
            }
        }
        worst
    }

    /// `e^{iλ_k t}` for every `k`.
    pub fn phase_factors(&self, t: f64) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let (s, c) = self.phase(k, t).sin_cos();
                Complex64::new(c, s)
            })
            .collect()
    }

    /// Amplitudes `⟨v|U(t)|start⟩` for all `v`, given precomputed phase factors.
    pub fn amplitudes_with(&self, phases: &[Complex64], start: usize) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, z) in phases.iter().enumerate() {
            let col = self.eigenvector(k);
            let w = z * col[start];
            for (o, &c) in out.iter_mut().zip(col) {
                *o += w * c;
            }
        }
        out
    }

    /// State at time `t` of the walk started at `start`.
    pub fn evolve(&self, start: usize, t: f64) -> Result<WalkState> {
        if start >= self.n {
            return Err(Error::VertexIndex {
                vertex: start,
                n: self.n,
            });
        }
        Ok(WalkState {
            time: t,
            amplitudes: self.amplitudes_with(&self.phase_factors(t), start),
        })
    }

    /// Measurement distributions at time `t` for every start vertex.
    pub fn mixing_matrix(&self, t: f64) -> MixingMatrix {
        let n = self.n;
        let phases = self.phase_factors(t);
        let mut entries = vec![0.0; n * n];
        for b in 0..n {
            for (a, z) in self.amplitudes_with(&phases, b).into_iter().enumerate() {
                entries[a * n + b] = z.norm_sqr();
            }
        }
        MixingMatrix {
            time: t,
            n,
            entries,
        }
    }
}

/// Amplitudes of a walk at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub time: f64,
    pub amplitudes: Vec<Complex64>,
}

impl WalkState {
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|amplitude_v|²` for every vertex.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// `M_ab(t) = |⟨a|U(t)|b⟩|²`; column `b` is the distribution of a walk
/// started at `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    pub time: f64,
    n: usize,
    entries: Vec<f64>,
}

impl MixingMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.n + b]
    }

    pub fn column(&self, b: usize) -> Vec<f64> {
        (0..self.n).map(|a| self.get(a, b)).collect()
    }

    /// Largest elementwise difference from another mixing matrix.
    pub fn max_abs_diff(&self, other: &MixingMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Worst deviation of a column sum from 1.
    pub fn column_sum_error(&self) -> f64 {
        (0..self.n)
            .map(|b| (self.column(b).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Worst `|M_ab - M_ba|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.n {
            for b in a + 1..self.n {
                worst = worst.max((self.get(a, b) - self.get(b, a)).abs());
            }
        }
        worst
    }

    pub fn entries_in_range(&self) -> bool {
        self.entries
            .iter()
            .all(|&p| (0.0..=1.0 + PROBABILITY_TOL).contains(&p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    fn capped_k4() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() <= tol, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn double_double_reduction() {
        // 5e12 mod 2π, reference from mpmath at 50 digits
        let r = DoubleDouble::from_f64(5e12).reduce_two_pi();
        assert!((r - 2.995_061_511_495_654).abs() < 1e-12, "{r}");
        let r = DoubleDouble::from_f64(-2e12).reduce_two_pi();
        assert!((r - 1.315_249_518_273_573).abs() < 1e-12, "{r}");
    }

    #[test]
    fn laplacian_spectrum_of_book() {
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Laplacian).unwrap();
        assert_close(dec.eigenvalues(), &[-5.0, -5.0, -2.0, -2.0, 0.0], 1e-12);
    }

    #[test]
    fn adjacency_spectrum_of_book() {
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Adjacency).unwrap();
        assert_close(dec.eigenvalues(), &[-2.0, -1.0, 0.0, 0.0, 3.0], 1e-12);
    }

    #[test]
    fn laplacian_spectrum_of_capped_k4() {
        let dec = SpectralDecomposition::of_graph(&capped_k4(), Generator::Laplacian).unwrap();
        let r = 17f64.sqrt();
        assert_close(
            dec.eigenvalues(),
            &[(-7.0 - r) / 2.0, -5.0, -5.0, -3.0, (-7.0 + r) / 2.0, 0.0],
            1e-12,
        );
    }

    #[test]
    fn decomposition_invariants() {
        for g in [
            book(),
            capped_k4(),
            Graph::petersen(),
            Graph::path(7).unwrap(),
        ] {
            for gen in [Generator::Laplacian, Generator::Adjacency] {
                let m = gen.matrix(&g);
                let dec = SpectralDecomposition::new(&m, gen).unwrap();
                let scale = dec.spectral_scale().max(1.0);
                assert!(dec.reconstruction_error(&m) <= 1e-10 * scale);
                assert!(dec.orthonormality_error() <= 1e-10);
                assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn single_vertex() {
        let dec = SpectralDecomposition::of_graph(&Graph::empty(1).unwrap(), Generator::Laplacian)
            .unwrap();
        assert_eq!(dec.eigenvalues(), &[0.0]);
        let p = dec.evolve(0, 3.0).unwrap().probabilities();
        assert_eq!(p, vec![1.0]);
    }

    #[test]
    fn laplacian_state_at_seven() {
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Laplacian).unwrap();
        let state = dec.evolve(0, 7.0).unwrap();
        let expected = [
            (0.1706660, -0.6033140),
            (0.3807380, -0.0856365),
            (0.3807380, -0.0856365),
            (0.0339286, 0.3872930),
            (0.0339286, 0.3872930),
        ];
        for (z, (re, im)) in state.amplitudes.iter().zip(expected) {
            assert!((z.re - re).abs() < 1e-6 && (z.im - im).abs() < 1e-6, "{z}");
        }
    }

    #[test]
    fn adjacency_state_at_seven() {
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Adjacency).unwrap();
        let state = dec.evolve(0, 7.0).unwrap();
        let expected = [
            (0.6209840, -0.0865674),
            (-0.136893, 0.3654530),
            (-0.136893, 0.3654530),
            (-0.379016, -0.0865674),
            (-0.379016, -0.0865674),
        ];
        for (z, (re, im)) in state.amplitudes.iter().zip(expected) {
            assert!((z.re - re).abs() < 1e-6 && (z.im - im).abs() < 1e-6, "{z}");
        }
    }

    #[test]
    fn identity_at_time_zero() {
        let dec = SpectralDecomposition::of_graph(&capped_k4(), Generator::Adjacency).unwrap();
        let m = dec.mixing_matrix(0.0);
        for a in 0..6 {
            for b in 0..6 {
                let e = if a == b { 1.0 } else { 0.0 };
                assert!((m.get(a, b) - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_entry_closed_form() {
        // b(t) = (18 - 18 cos 5t) / 225 at t = π/5
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Laplacian).unwrap();
        let m = dec.mixing_matrix(PI / 5.0);
        assert!((m.get(1, 0) - 36.0 / 225.0).abs() < 1e-10);
        assert!(m.column_sum_error() < NORM_TOL);
        assert!(m.asymmetry() < NORM_TOL);
        assert!(m.entries_in_range());
    }

    #[test]
    fn norm_preserved_for_large_times() {
        let dec = SpectralDecomposition::of_graph(&capped_k4(), Generator::Laplacian).unwrap();
        for t in [0.0, 1.0, 7.0, 1e6, 1e12] {
            assert!((dec.evolve(2, t).unwrap().norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn start_out_of_range() {
        let dec = SpectralDecomposition::of_graph(&book(), Generator::Laplacian).unwrap();
        assert_eq!(
            dec.evolve(5, 1.0),
            Err(Error::VertexIndex { vertex: 5, n: 5 })
        );
    }
}
