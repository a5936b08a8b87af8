use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    check_qubits, target_groups, QcoreError, Result, StateVector, ACCUMULATED_TOL, EXACT_TOL,
};

/// Density matrix of a small register, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity and unit trace within `1e-12`, and positive
    /// semidefiniteness with eigenvalues no lower than `-1e-10`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(QcoreError::NotPowerOfTwo(dim));
        }
        if entries.len() != dim * dim {
            return Err(QcoreError::InvalidDensity(format!(
                "{} entries for dimension {dim}",
                entries.len()
            )));
        }
        let rho = Self { dim, entries };
        for r in 0..dim {
            for c in 0..dim {
                if (rho.entry(r, c) - rho.entry(c, r).conj()).norm() > EXACT_TOL {
                    return Err(QcoreError::InvalidDensity(format!(
                        "not Hermitian at ({r}, {c})"
                    )));
                }
            }
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > EXACT_TOL || trace.im.abs() > EXACT_TOL {
            return Err(QcoreError::InvalidDensity(format!("trace {trace}")));
        }
        let lowest = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if lowest < -ACCUMULATED_TOL {
            return Err(QcoreError::InvalidDensity(format!(
                "negative eigenvalue {lowest}"
            )));
        }
        Ok(rho)
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let entries = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    Complex64::new(1.0 / dim as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::new(dim, entries)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let entries = a
            .iter()
            .flat_map(|x| a.iter().map(move |y| x * y.conj()))
            .collect();
        Self {
            dim: a.len(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.entry(k, k)).sum()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Eigenvalues (ascending is not guaranteed).
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }

    fn check_dim(&self, other: &DensityMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(QcoreError::SizeMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(dim, dim, entries);
    // Symmetrize away rounding so the Hermitian solver sees an exact Hermitian input.
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    m.symmetric_eigenvalues().iter().copied().collect()
}

/// Partial trace of `|ψ⟩⟨ψ|` onto `keep`; `keep[0]` is the most significant
/// qubit of the result.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(QcoreError::EmptyQubitList);
    }
    check_qubits(keep, state.num_qubits())?;
    let dim = 1usize << keep.len();
    let amps = state.amplitudes();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for group in target_groups(state.num_qubits(), keep) {
        for (r, &i) in group.iter().enumerate() {
            for (c, &j) in group.iter().enumerate() {
                entries[r * dim + c] += amps[i] * amps[j].conj();
            }
        }
    }
    Ok(DensityMatrix { dim, entries })
}

/// `½·Σ|λ|` over the eigenvalues of `a − b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.check_dim(b)?;
    let diff: Vec<Complex64> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x - y)
        .collect();
    let sum: f64 = hermitian_eigenvalues(a.dim, &diff)
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}
