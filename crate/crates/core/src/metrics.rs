//! Similarity measures between circuits: the Bhattacharyya coefficient of
//! output distributions, the Hilbert-Schmidt gate fidelity of unitaries, and
//! the random-input average `B_ave`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{conventional_iqft, default_input_gates, random_input_state};
use crate::error::{Error, Result};
use crate::qsim::{
    measure_dist, run_circuit, run_noisy, Circuit, NoiseModel, ProbDist, StateVector,
    UnitaryMatrix,
};
use crate::seed::derive_seed;

/// `Σ_i √(p_i q_i)`.
pub fn bhattacharyya(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    p.check_same_dim(q)?;
    let b: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(b.min(1.0))
}

/// `|Tr(U†V)|² / d²`. Invariant under a global phase on either argument.
pub fn gate_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    let d = u.dim() as f64;
    Ok(u.hs_inner(v)?.norm_sqr() / (d * d))
}

/// The transform a candidate circuit is judged against, given by a reference
/// circuit simulated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    label: String,
    reference: Circuit,
}

impl Target {
    pub fn new(label: impl Into<String>, reference: Circuit) -> Self {
        Target {
            label: label.into(),
            reference,
        }
    }

    /// The textbook `n`-qubit inverse QFT.
    pub fn iqft(n: usize) -> Result<Self> {
        Ok(Target::new(format!("iqft-{n}"), conventional_iqft(n)?))
    }

    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        Target::new(format!("identity-{n}"), Circuit::new(n))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.reference.n()
    }

    pub fn reference(&self) -> &Circuit {
        &self.reference
    }

    /// Exact output distribution for `input`.
    pub fn output(&self, input: &StateVector) -> Result<ProbDist> {
        Ok(measure_dist(&run_circuit(&self.reference, input)?))
    }
}

/// How the candidate's output distribution is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMode {
    Exact,
    Sampled { shots: usize, noise: NoiseModel },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputResult {
    pub seed: u64,
    pub b: f64,
}

/// Per-input Bhattacharyya coefficients and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub inputs: Vec<InputResult>,
    pub mode: EvalMode,
    /// Filled in by callers that also compare unitaries.
    pub gate_fidelity: Option<f64>,
}

impl EvalReport {
    pub fn values(&self) -> Vec<f64> {
        self.inputs.iter().map(|r| r.b).collect()
    }

    /// Arithmetic mean of the per-input values.
    pub fn b_ave(&self) -> Result<f64> {
        mean(&self.values())
    }

    /// Rows `input,seed,b`, then a `b_ave` summary row and an optional
    /// `gate_fidelity` row. `preamble` lines are written first, prefixed by `#`.
    pub fn write_csv<W: Write>(&self, out: W, preamble: &[String]) -> Result<()> {
        let mut out = out;
        for line in preamble {
            writeln!(out, "# {line}").map_err(|e| Error::io("<csv>", e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "seed", "value"])?;
        for (i, r) in self.inputs.iter().enumerate() {
            w.write_record([format!("input_{i}"), r.seed.to_string(), format!("{:.12}", r.b)])?;
        }
        let shots = match self.mode {
            EvalMode::Exact => "exact".to_string(),
            EvalMode::Sampled { shots, .. } => shots.to_string(),
        };
        if let Ok(avg) = self.b_ave() {
            w.write_record(["b_ave".to_string(), shots.clone(), format!("{avg:.12}")])?;
        }
        if let Some(f) = self.gate_fidelity {
            w.write_record(["gate_fidelity".to_string(), shots, format!("{f:.12}")])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyAverage);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Standard error of the mean estimated by `resamples` bootstrap draws.
pub fn bootstrap_se(values: &[f64], resamples: usize, seed: u64) -> Result<f64> {
    if values.is_empty() || resamples < 2 {
        return Err(Error::EmptyAverage);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = values.len();
    let means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| values[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    let m = mean(&means)?;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    Ok(var.sqrt())
}

/// Seed of random input `index` in a run seeded with `seed`.
pub fn input_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

/// Average Bhattacharyya coefficient of `candidate` against `target` over
/// `num_inputs` random inputs, each prepared by `4n` random action-space gates
/// on `|0...0>`.
pub fn b_ave(
    candidate: &Circuit,
    target: &Target,
    num_inputs: usize,
    mode: EvalMode,
    seed: u64,
) -> Result<EvalReport> {
    if candidate.n() != target.n() {
        return Err(Error::DimensionMismatch {
            expected: target.n(),
            got: candidate.n(),
        });
    }
    let n = target.n();
    let mut inputs = Vec::with_capacity(num_inputs);
    for i in 0..num_inputs {
        let s = input_seed(seed, i);
        let psi = random_input_state(n, default_input_gates(n), s)?;
        let answer = target.output(&psi)?;
        let got = match mode {
            EvalMode::Exact => measure_dist(&run_circuit(candidate, &psi)?),
            EvalMode::Sampled { shots, noise } => {
                run_noisy(candidate, &psi, &noise, shots, derive_seed(s, 1))?
            }
        };
        inputs.push(InputResult {
            seed: s,
            b: bhattacharyya(&got, &answer)?,
        });
    }
    Ok(EvalReport {
        inputs,
        mode,
        gate_fidelity: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::generalized_iqft;
    use crate::qsim::{unitary_of, Gate};
    use num_complex::Complex64;

    #[test]
    fn bhattacharyya_examples() {
        let p = ProbDist::new(1, vec![0.3, 0.7]).unwrap();
        assert!((bhattacharyya(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        let a = ProbDist::delta(1, 0);
        let b = ProbDist::delta(1, 1);
        assert_eq!(bhattacharyya(&a, &b).unwrap(), 0.0);
        let half = ProbDist::uniform(1);
        assert!((bhattacharyya(&half, &a).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(bhattacharyya(&half, &ProbDist::uniform(2)).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let u = unitary_of(&generalized_iqft(3).unwrap()).unwrap();
        assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        let phased = u.scaled(Complex64::from_polar(1.0, 0.7));
        assert!((gate_fidelity(&u, &phased).unwrap() - 1.0).abs() < 1e-12);
        let x0 = unitary_of(&Circuit::from_gates(2, vec![Gate::Not(0)]).unwrap()).unwrap();
        assert!(gate_fidelity(&UnitaryMatrix::identity(4), &x0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn reference_scores_one_everywhere() {
        for n in 1..=4 {
            let t = Target::iqft(n).unwrap();
            let r = b_ave(t.reference(), &t, 10, EvalMode::Exact, 3).unwrap();
            assert!(r.values().iter().all(|b| (b - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn empty_report_has_no_mean() {
        let t = Target::iqft(2).unwrap();
        let r = b_ave(t.reference(), &t, 0, EvalMode::Exact, 3).unwrap();
        assert!(r.inputs.is_empty());
        assert!(matches!(r.b_ave(), Err(Error::EmptyAverage)));
    }

    #[test]
    fn exact_mode_is_reproducible() {
        let t = Target::iqft(3).unwrap();
        let g = generalized_iqft(3).unwrap();
        let a = b_ave(&g, &t, 8, EvalMode::Exact, 99).unwrap();
        let b = b_ave(&g, &t, 8, EvalMode::Exact, 99).unwrap();
        assert_eq!(a, b);
        assert!(b_ave(&generalized_iqft(2).unwrap(), &t, 1, EvalMode::Exact, 0).is_err());
    }

    #[test]
    fn bootstrap_of_constant_is_zero() {
        assert_eq!(bootstrap_se(&[0.5; 10], 100, 1).unwrap(), 0.0);
        let se = bootstrap_se(&[0.0, 1.0, 0.0, 1.0], 4000, 1).unwrap();
        // population sd 0.5, n = 4 -> 0.25
        assert!((se - 0.25).abs() < 0.02, "{se}");
    }

    #[test]
    fn csv_layout() {
        let t = Target::iqft(2).unwrap();
        let mut r = b_ave(t.reference(), &t, 2, EvalMode::Exact, 3).unwrap();
        r.gate_fidelity = Some(1.0);
        let mut buf = Vec::new();
        r.write_csv(&mut buf, &["config_hash=abc".to_string()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# config_hash=abc");
        assert_eq!(lines[1], "row,seed,value");
        assert!(lines[4].starts_with("b_ave,exact,1.0"));
        assert!(lines[5].starts_with("gate_fidelity,exact,1.0"));
    }
}
