use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bit_position, QcoreError, Result, StateVector};

/// Single-qubit Pauli operator modulo global phase.
///
/// `ZX` is the matrix product σ_z·σ_x (σ_x acts first), which equals iσ_y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    Identity,
    X,
    Z,
    ZX,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::Identity, PauliOp::X, PauliOp::Z, PauliOp::ZX];

    /// The operator σ_z^z · σ_x^x.
    pub const fn from_components(z: bool, x: bool) -> Self {
        match (z, x) {
            (false, false) => PauliOp::Identity,
            (false, true) => PauliOp::X,
            (true, false) => PauliOp::Z,
            (true, true) => PauliOp::ZX,
        }
    }

    pub const fn has_x(self) -> bool {
        matches!(self, PauliOp::X | PauliOp::ZX)
    }

    pub const fn has_z(self) -> bool {
        matches!(self, PauliOp::Z | PauliOp::ZX)
    }

    /// Product `self · other` up to global phase.
    pub const fn compose(self, other: PauliOp) -> PauliOp {
        PauliOp::from_components(self.has_z() ^ other.has_z(), self.has_x() ^ other.has_x())
    }

    /// Row-major 2×2 matrix.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            PauliOp::Identity => [[l, o], [o, l]],
            PauliOp::X => [[o, l], [l, o]],
            PauliOp::Z => [[l, o], [o, -l]],
            PauliOp::ZX => [[o, l], [-l, o]],
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PauliOp::Identity => "I",
            PauliOp::X => "X",
            PauliOp::Z => "Z",
            PauliOp::ZX => "ZX",
        };
        f.write_str(name)
    }
}

/// Applies `op` to qubit `target` and the identity elsewhere.
pub fn apply_pauli(state: &StateVector, op: PauliOp, target: usize) -> Result<StateVector> {
    let n = state.num_qubits();
    if target >= n {
        return Err(QcoreError::QubitOutOfRange {
            index: target,
            num_qubits: n,
        });
    }
    let bit = 1usize << bit_position(target, n);
    let input = state.amplitudes();
    let amplitudes = (0..input.len())
        .map(|idx| {
            // X first: the amplitude at idx comes from idx with the target bit flipped.
            let source = if op.has_x() { idx ^ bit } else { idx };
            let a = input[source];
            if op.has_z() && idx & bit != 0 {
                -a
            } else {
                a
            }
        })
        .collect();
    Ok(StateVector::from_raw(n, amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{apply_unitary, fidelity, make_bell, BellLabel, Unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zx_is_z_after_x() {
        let z = PauliOp::Z.matrix();
        let x = PauliOp::X.matrix();
        let zx = PauliOp::ZX.matrix();
        for r in 0..2 {
            for c in 0..2 {
                let product = z[r][0] * x[0][c] + z[r][1] * x[1][c];
                assert_eq!(product, zx[r][c]);
            }
        }
    }

    #[test]
    fn composition_forms_klein_group() {
        for a in PauliOp::ALL {
            assert_eq!(a.compose(a), PauliOp::Identity);
            assert_eq!(a.compose(PauliOp::Identity), a);
            for b in PauliOp::ALL {
                assert_eq!(a.compose(b), b.compose(a));
                for c in PauliOp::ALL {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
        assert_eq!(PauliOp::Z.compose(PauliOp::X), PauliOp::ZX);
    }

    #[test]
    fn kernel_matches_dense_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = StateVector::random(3, &mut rng);
        for op in PauliOp::ALL {
            let m = op.matrix();
            let dense = Unitary::new(vec![m[0][0], m[0][1], m[1][0], m[1][1]], vec![1]).unwrap();
            let expected = apply_unitary(&psi, &dense).unwrap();
            let got = apply_pauli(&psi, op, 1).unwrap();
            assert!(got.max_abs_diff(&expected).unwrap() < 1e-15, "{op}");
        }
    }

    #[test]
    fn z_on_first_qubit_flips_phase_bit() {
        let l = |a, b| BellLabel::new(a, b).unwrap();
        let z = apply_pauli(&make_bell(l(0, 0)), PauliOp::Z, 0).unwrap();
        assert!(z.max_abs_diff(&make_bell(l(1, 0))).unwrap() < 1e-12);
        let x = apply_pauli(&make_bell(l(0, 0)), PauliOp::X, 0).unwrap();
        assert!(x.max_abs_diff(&make_bell(l(0, 1))).unwrap() < 1e-12);
        // (−1)^{u_i} with u_i = 1
        let x = apply_pauli(&make_bell(l(1, 0)), PauliOp::X, 0).unwrap();
        let minus = make_bell(l(1, 1)).with_global_phase(std::f64::consts::PI);
        assert!(x.max_abs_diff(&minus).unwrap() < 1e-12);
        assert!((fidelity(&x, &make_bell(l(1, 1))).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_target() {
        let psi = StateVector::zeros(2);
        assert_eq!(
            apply_pauli(&psi, PauliOp::X, 2),
            Err(QcoreError::QubitOutOfRange {
                index: 2,
                num_qubits: 2
            })
        );
    }
}
