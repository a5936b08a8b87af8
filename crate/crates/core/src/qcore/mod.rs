//! Dense state-vector simulation for registers of a few qubits.
//!
//! Qubit 0 is the leftmost tensor factor and the most significant bit of the
//! amplitude index: `|q0 q1 ... q(n-1)⟩` lives at index
//! `q0·2^(n-1) + q1·2^(n-2) + ... + q(n-1)`.
//!
//! Everything here is a pure function of its inputs (and of an explicit
//! random stream where sampling is involved).

mod bell;
mod density;
mod measure;
mod pauli;
mod state;
mod unitary;

pub use bell::{make_bell, BellLabel};
pub use density::{reduced_density, trace_distance, DensityMatrix};
pub use measure::{bell_measure, bell_probabilities, BellMeasurement};
pub use pauli::{apply_pauli, PauliOp};
pub use state::{fidelity, inner_product, tensor, StateVector};
pub use unitary::{apply_unitary, random_unitary, Unitary};

use thiserror::Error;

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for results that accumulate rounding over several products.
pub const ACCUMULATED_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("matrix of dimension {dim} does not act on {targets} target qubits")]
    DimensionMismatch { dim: usize, targets: usize },
    #[error("matrix is not unitary: max deviation of U·U† from identity is {0}")]
    NotUnitary(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("empty qubit list")]
    EmptyQubitList,
    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),
}

pub type Result<T> = std::result::Result<T, QcoreError>;

/// Checks that `indices` are distinct and all below `num_qubits`.
pub(crate) fn check_qubits(indices: &[usize], num_qubits: usize) -> Result<()> {
    for (k, &index) in indices.iter().enumerate() {
        if index >= num_qubits {
            return Err(QcoreError::QubitOutOfRange { index, num_qubits });
        }
        if indices[..k].contains(&index) {
            return Err(QcoreError::DuplicateQubit(index));
        }
    }
    Ok(())
}

/// Bit position (from the least significant end) of `qubit` in an index of an
/// `num_qubits`-qubit register.
#[inline]
pub(crate) fn bit_position(qubit: usize, num_qubits: usize) -> usize {
    num_qubits - 1 - qubit
}

/// Enumerates `(rest_index, local_indices)` groupings used by gather/scatter
/// style kernels: for every assignment of the qubits not in `targets`, the
/// `2^targets.len()` full indices obtained by ranging over the target bits,
/// with `targets[0]` as the most significant local bit.
pub(crate) fn target_groups(num_qubits: usize, targets: &[usize]) -> Vec<Vec<usize>> {
    let k = targets.len();
    let mask: usize = targets
        .iter()
        .map(|&q| 1usize << bit_position(q, num_qubits))
        .fold(0, |acc, bit| acc | bit);
    let local_dim = 1usize << k;
    (0..1usize << num_qubits)
        .filter(|base| base & mask == 0)
        .map(|base| {
            (0..local_dim)
                .map(|local| {
                    targets.iter().enumerate().fold(base, |idx, (j, &q)| {
                        if (local >> (k - 1 - j)) & 1 == 1 {
                            idx | 1 << bit_position(q, num_qubits)
                        } else {
                            idx
                        }
                    })
                })
                .collect()
        })
        .collect()
}
