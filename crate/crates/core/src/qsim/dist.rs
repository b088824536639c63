use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tolerances::TOLERANCES;

/// Probability distribution over the `2^n` bitstrings of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    n: usize,
    p: Vec<f64>,
}

impl ProbDist {
    /// Validated constructor: `2^n` nonnegative entries summing to one.
    pub fn new(n: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: p.len(),
            });
        }
        if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {x} is negative or not finite")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > TOLERANCES.prob_sum {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(ProbDist { n, p })
    }

    pub(crate) fn from_raw(n: usize, p: Vec<f64>) -> Self {
        debug_assert_eq!(p.len(), 1 << n);
        ProbDist { n, p }
    }

    /// Empirical distribution from outcome counts.
    pub(crate) fn from_counts(n: usize, counts: &[u64], shots: usize) -> Self {
        let p = counts.iter().map(|&c| c as f64 / shots as f64).collect();
        ProbDist { n, p }
    }

    pub fn delta(n: usize, index: usize) -> Self {
        let mut p = vec![0.0; 1 << n];
        p[index] = 1.0;
        ProbDist { n, p }
    }

    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        ProbDist {
            n,
            p: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Indices whose probability is within `tol` of the maximum.
    pub fn argmax_set(&self, tol: f64) -> Vec<usize> {
        let max = self.p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (0..self.p.len()).filter(|&i| self.p[i] >= max - tol).collect()
    }

    /// Nonzero support (entries above `tol`).
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.p.len()).filter(|&i| self.p[i] > tol).collect()
    }

    pub fn max_abs_diff(&self, other: &ProbDist) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Distribution of the listed qubits; output bit `k` is `qubits[k]`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<ProbDist> {
        for &q in qubits {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        let mut p = vec![0.0; 1 << qubits.len()];
        for (i, &pi) in self.p.iter().enumerate() {
            let j = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            p[j] += pi;
        }
        Ok(ProbDist {
            n: qubits.len(),
            p,
        })
    }

    pub(crate) fn check_same_dim(&self, other: &ProbDist) -> Result<()> {
        if self.p.len() != other.p.len() {
            return Err(Error::DimensionMismatch {
                expected: self.p.len(),
                got: other.p.len(),
            });
        }
        Ok(())
    }

    /// Cumulative sums for inverse-CDF sampling.
    pub(crate) fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.p
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    }
}

/// Draws one index from a cumulative table.
pub(crate) fn draw<R: Rng>(cdf: &[f64], rng: &mut R) -> usize {
    let total = *cdf.last().expect("nonempty cdf");
    let u = rng.gen::<f64>() * total;
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Empirical distribution of `shots` independent draws from `dist`.
///
/// The result depends only on `dist`, `shots` and `seed`.
pub fn sample(dist: &ProbDist, shots: usize, seed: u64) -> Result<ProbDist> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf = dist.cdf();
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..shots {
        counts[draw(&cdf, &mut rng)] += 1;
    }
    Ok(ProbDist::from_counts(dist.n, &counts, shots))
}
