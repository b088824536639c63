//! Builders for the circuit families used throughout the crate: the textbook
//! inverse QFT, the linear-size approximate IQFT, phase estimation, the
//! order-finding demo for 57, and random input-state preparation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distiller::ActionSpace;
use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate, ProbDist, StateVector};

/// Widest IQFT the builders produce.
pub const MAX_IQFT_QUBITS: usize = 10;
/// Widest register the closed-form QPE oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 20;

fn check_iqft_width(n: usize) -> Result<()> {
    if !(1..=MAX_IQFT_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 1,
            max: MAX_IQFT_QUBITS,
        });
    }
    Ok(())
}

fn cx(control: usize, target: usize) -> Gate {
    Gate::CNot { control, target }
}

/// Textbook inverse QFT: a swap layer reversing the register, then for each
/// qubit `j` the controlled phases `-2π/2^(j-k+1)` from every lower qubit `k`
/// followed by a Hadamard on `j`.
///
/// Its unitary is `ω^{-jk}/√2^n` with `ω = e^{2πi/2^n}` in the crate's
/// little-endian basis order, so `Σ_k e^{2πi t k/2^n}|k>/√2^n` maps to `|t>`.
pub fn conventional_iqft(n: usize) -> Result<Circuit> {
    check_iqft_width(n)?;
    let mut gates: Vec<Gate> = (0..n / 2).map(|q| Gate::Swap(q, n - 1 - q)).collect();
    for j in 0..n {
        for k in 0..j {
            gates.push(Gate::ControlledPhase {
                control: k,
                target: j,
                angle: -2.0 * PI / (1u64 << (j - k + 1)) as f64,
            });
        }
        gates.push(Gate::Hadamard(j));
    }
    Circuit::from_gates(n, gates)
}

/// Gate arrangement of the approximate IQFT. Both layouts implement the same
/// unitary: a Hadamard on every qubit followed by the basis permutation
/// `|c> -> |j>` with `j_q = c_{n-1} ⊕ ... ⊕ c_{n-1-q}` (register reversal
/// fused with a running parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneralizedLayout {
    /// Hadamards, then `2n - 2` CNOTs: `3n - 2` gates for every `n`.
    #[default]
    CnotNetwork,
    /// Hadamards, a reversing swap layer, then a CNOT ladder:
    /// `2n - 1 + ⌊n/2⌋` gates.
    SwapLadder,
}

/// Linear-size approximate IQFT, [`GeneralizedLayout::CnotNetwork`] layout.
pub fn generalized_iqft(n: usize) -> Result<Circuit> {
    generalized_iqft_with(n, GeneralizedLayout::CnotNetwork)
}

pub fn generalized_iqft_with(n: usize, layout: GeneralizedLayout) -> Result<Circuit> {
    check_iqft_width(n)?;
    let mut gates: Vec<Gate> = (0..n).map(Gate::Hadamard).collect();
    match layout {
        GeneralizedLayout::SwapLadder => {
            gates.extend((0..n / 2).map(|q| Gate::Swap(q, n - 1 - q)));
            gates.extend((1..n).map(|q| cx(q - 1, q)));
        }
        GeneralizedLayout::CnotNetwork if n >= 2 => {
            // Interior qubits visited from the outside in, alternating ends:
            // n-2, 1, n-3, 2, ...
            let mut order = Vec::with_capacity(n - 2);
            let (mut lo, mut hi, mut from_top) = (1usize, n - 2, true);
            while lo <= hi && hi >= 1 {
                if from_top {
                    order.push(hi);
                    hi -= 1;
                } else {
                    order.push(lo);
                    lo += 1;
                }
                from_top = !from_top;
            }
            // Nested parities: order[i] ends up holding c_{order[i]} ⊕ ... ⊕ c_{order[last]}.
            for i in (0..order.len().saturating_sub(1)).rev() {
                gates.push(cx(order[i + 1], order[i]));
            }
            // (x, y) -> (y, x ⊕ y) on the outer pair.
            gates.push(cx(0, n - 1));
            gates.push(cx(n - 1, 0));
            if n >= 3 {
                gates.push(cx(n - 2, n - 1));
            }
            let mut prev = 0;
            for &q in &order {
                gates.push(cx(prev, q));
                prev = q;
            }
        }
        GeneralizedLayout::CnotNetwork => {}
    }
    Circuit::from_gates(n, gates)
}

/// Phase estimation on an `n`-qubit counting register with the eigenstate
/// register elided: Hadamards, then `PhaseShift(q_j, 2πθ·2^j)` kicks producing
/// `Σ_k e^{2πiθk}|k>/√2^n`, then `iqft`.
pub fn qpe_circuit(n: usize, theta: f64, iqft: &Circuit) -> Result<Circuit> {
    if iqft.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: iqft.n(),
        });
    }
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::Hadamard(q))?;
    }
    for q in 0..n {
        c.push(Gate::PhaseShift {
            qubit: q,
            angle: 2.0 * PI * theta * (1u64 << q) as f64,
        })?;
    }
    c.concat(iqft)
}

/// `E_k^b = (1 ± e^{iπ 2^k θ}) / 2`.
fn e_factor(k: usize, bit: usize, theta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, PI * (1u64 << k) as f64 * theta);
    let one = Complex64::new(1.0, 0.0);
    if bit == 0 {
        (one + e) / 2.0
    } else {
        (one - e) / 2.0
    }
}

/// Closed-form output distribution of phase estimation when the IQFT is
/// replaced by the approximate circuit.
///
/// The amplitude of `|j_n ... j_2 j_1>` (with `j_1` on qubit 0) is
/// `E_n^{j_1} · E_{n-1}^{j_1⊕j_2} ··· E_1^{j_{n-1}⊕j_n}`.
pub fn qpe_generalized_oracle(n: usize, theta: f64) -> Result<ProbDist> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 0,
            max: MAX_ORACLE_QUBITS,
        });
    }
    let p = (0..1usize << n)
        .map(|x| {
            let bit = |q: usize| (x >> q) & 1;
            let mut amp = if n > 0 {
                e_factor(n, bit(0), theta)
            } else {
                Complex64::new(1.0, 0.0)
            };
            for q in 1..n {
                amp *= e_factor(n - q, bit(q - 1) ^ bit(q), theta);
            }
            amp.norm_sqr()
        })
        .collect();
    ProbDist::new(n, p)
}

/// Counting-register width of the order-finding demo.
pub const SHOR_COUNTING_QUBITS: usize = 4;
/// Work-register width; holds residues mod 57 in binary.
pub const SHOR_WORK_QUBITS: usize = 6;
pub const SHOR_MODULUS: u64 = 57;
pub const SHOR_BASE: u64 = 37;

/// Order finding for `37 mod 57` on a 4-qubit counting register (qubits 0..4)
/// and a 6-qubit work register (qubits 4..10), followed by `iqft` on the
/// counting register.
///
/// The work register starts in `|1>` (one NOT). Since `37^2 ≡ 1 (mod 57)`,
/// only counting qubit 0 controls a nontrivial power: multiplying by 37 maps
/// `1 = 0b000001` to `37 = 0b100101`, two CNOTs onto work bits 2 and 5.
pub fn shor57_circuit(iqft: &Circuit) -> Result<Circuit> {
    if iqft.n() != SHOR_COUNTING_QUBITS {
        return Err(Error::DimensionMismatch {
            expected: SHOR_COUNTING_QUBITS,
            got: iqft.n(),
        });
    }
    let work = |bit: usize| SHOR_COUNTING_QUBITS + bit;
    let mut c = Circuit::new(SHOR_COUNTING_QUBITS + SHOR_WORK_QUBITS);
    for q in 0..SHOR_COUNTING_QUBITS {
        c.push(Gate::Hadamard(q))?;
    }
    c.push(Gate::Not(work(0)))?;
    let one_to_base = 1 ^ SHOR_BASE;
    for bit in 0..SHOR_WORK_QUBITS {
        if (one_to_base >> bit) & 1 == 1 {
            c.push(cx(0, work(bit)))?;
        }
    }
    c.append_at(iqft, 0)?;
    Ok(c)
}

/// Counting-register marginal of a full demo-register distribution.
pub fn shor_counting_dist(full: &ProbDist) -> Result<ProbDist> {
    let qubits: Vec<usize> = (0..SHOR_COUNTING_QUBITS).collect();
    full.marginal(&qubits)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Denominators of the continued-fraction convergents of `num/den`.
fn convergent_denominators(mut num: u64, mut den: u64) -> Vec<u64> {
    let (mut q_prev, mut q) = (1u64, 0u64);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num % den);
        (q_prev, q) = (q, a * q + q_prev);
        out.push(q);
    }
    out
}

/// Result of classical post-processing of one counting-register outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderFindingOutcome {
    /// Outcome 0 carries no phase information.
    Trivial,
    /// A period was recovered but gave no nontrivial factor (odd order, or
    /// `x^{r/2} ≡ -1`).
    NoFactor { order: u64 },
    /// Period recovered and the modulus split.
    Factors { order: u64, factors: (u64, u64) },
    /// No convergent denominator is a valid order.
    NoOrder,
}

/// Recovers the order of `base mod modulus` from a measured counting value
/// via continued fractions, then splits `modulus` with
/// `gcd(base^{r/2} ± 1, modulus)`.
pub fn post_process_order(
    outcome: u64,
    counting_bits: u32,
    base: u64,
    modulus: u64,
) -> OrderFindingOutcome {
    if outcome == 0 {
        return OrderFindingOutcome::Trivial;
    }
    let den = 1u64 << counting_bits;
    let order = convergent_denominators(outcome, den)
        .into_iter()
        .filter(|&r| r > 0 && r < modulus)
        .find(|&r| pow_mod(base, r, modulus) == 1);
    let Some(order) = order else {
        return OrderFindingOutcome::NoOrder;
    };
    if order % 2 == 1 {
        return OrderFindingOutcome::NoFactor { order };
    }
    let half = pow_mod(base, order / 2, modulus);
    let a = gcd(half + modulus - 1, modulus);
    let b = gcd(half + 1, modulus);
    if a > 1 && a < modulus && b > 1 && b < modulus {
        OrderFindingOutcome::Factors {
            order,
            factors: (a.min(b), a.max(b)),
        }
    } else {
        OrderFindingOutcome::NoFactor { order }
    }
}

/// Number of random preparation gates used for an `n`-qubit input.
pub fn default_input_gates(n: usize) -> usize {
    4 * n
}

/// `m` gates drawn uniformly from the `n`-qubit action space.
pub fn random_input_circuit(n: usize, m: usize, seed: u64) -> Result<Circuit> {
    let space = ActionSpace::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..m)
        .map(|_| space.gate(rng.gen_range(0..space.len())))
        .collect();
    Circuit::from_gates(n, gates)
}

/// `random_input_circuit(n, m, seed)` applied to `|0...0>`.
pub fn random_input_state(n: usize, m: usize, seed: u64) -> Result<StateVector> {
    let prep = random_input_circuit(n, m, seed)?;
    crate::qsim::run_circuit(&prep, &StateVector::zero(n))
}

/// How [`gate_count`] treats composite gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountConvention {
    /// Gates as stored.
    Abstract,
    /// `ControlledPhase` as 2 CNOT + 3 phase shifts, `Swap` as 3 CNOT.
    Decomposed,
}

pub fn gate_count(circuit: &Circuit, convention: CountConvention) -> usize {
    match convention {
        CountConvention::Abstract => circuit.len(),
        CountConvention::Decomposed => circuit.gates().iter().map(|g| g.decompose().len()).sum(),
    }
}

/// `n + n(n-1)/2 + ⌊n/2⌋`.
pub fn conventional_iqft_gate_count(n: usize) -> usize {
    n + n * (n - 1) / 2 + n / 2
}

/// Abstract gate count of [`generalized_iqft_with`].
pub fn generalized_iqft_gate_count(n: usize, layout: GeneralizedLayout) -> usize {
    match layout {
        GeneralizedLayout::CnotNetwork => 3 * n - 2,
        GeneralizedLayout::SwapLadder => 2 * n - 1 + n / 2,
    }
}
