use num_complex::Complex64;

use super::circuit::Circuit;
use super::state::{run_circuit, StateVector};
use crate::error::{Error, Result};

/// Memory guard for dense unitaries.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryMatrix { dim, data }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        UnitaryMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        UnitaryMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        self.check_dim(rhs)?;
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        Ok(UnitaryMatrix { dim: d, data })
    }

    /// `Tr(self† · other)`.
    pub fn hs_inner(&self, other: &UnitaryMatrix) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self
            .dagger()
            .matmul(self)
            .expect("same dimension by construction");
        prod.max_abs_diff(&Self::identity(self.dim))
            .expect("same dimension by construction")
    }

    fn check_dim(&self, other: &UnitaryMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

/// The matrix of `circuit`; column `j` is the circuit applied to `|j>`.
pub fn unitary_of(circuit: &Circuit) -> Result<UnitaryMatrix> {
    let n = circuit.n();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 0,
            max: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let out = run_circuit(circuit, &StateVector::basis(n, col))?;
        for (row, a) in out.amps().iter().enumerate() {
            data[row * dim + col] = *a;
        }
    }
    Ok(UnitaryMatrix { dim, data })
}
