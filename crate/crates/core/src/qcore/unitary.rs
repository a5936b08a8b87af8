use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_qubits, target_groups, QcoreError, Result, StateVector, ACCUMULATED_TOL};

/// A unitary matrix bound to an ordered list of target qubits.
///
/// `targets[0]` is the most significant bit of the local matrix index.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    /// Row-major `dim × dim`.
    entries: Vec<Complex64>,
    targets: Vec<usize>,
}

impl Unitary {
    /// Validates shape, target distinctness and `U·U† = I` within `1e-10`.
    pub fn new(entries: Vec<Complex64>, targets: Vec<usize>) -> Result<Self> {
        if targets.is_empty() {
            return Err(QcoreError::EmptyQubitList);
        }
        let dim = 1usize << targets.len();
        if entries.len() != dim * dim {
            return Err(QcoreError::DimensionMismatch {
                dim: (entries.len() as f64).sqrt() as usize,
                targets: targets.len(),
            });
        }
        for (k, q) in targets.iter().enumerate() {
            if targets[..k].contains(q) {
                return Err(QcoreError::DuplicateQubit(*q));
            }
        }
        let u = Self {
            dim,
            entries,
            targets,
        };
        let deviation = u.unitarity_error();
        if deviation > ACCUMULATED_TOL || !deviation.is_finite() {
            return Err(QcoreError::NotUnitary(deviation));
        }
        Ok(u)
    }

    pub fn identity(targets: Vec<usize>) -> Result<Self> {
        let dim = 1usize << targets.len();
        let entries = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::new(entries, targets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Conjugate transpose, on the same targets.
    pub fn dagger(&self) -> Unitary {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|k| self.entries[(k % d) * d + k / d].conj())
            .collect();
        Unitary {
            dim: d,
            entries,
            targets: self.targets.clone(),
        }
    }

    /// Max entry-wise modulus of `U·U† − I`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let dot: Complex64 = (0..d)
                    .map(|k| self.entries[r * d + k] * self.entries[c * d + k].conj())
                    .sum();
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }

    /// Same matrix acting on a different set of qubits.
    pub fn retarget(&self, targets: Vec<usize>) -> Result<Unitary> {
        Unitary::new(self.entries.clone(), targets)
    }
}

/// Applies `u` to its target qubits of `state`, identity elsewhere.
pub fn apply_unitary(state: &StateVector, u: &Unitary) -> Result<StateVector> {
    let n = state.num_qubits();
    check_qubits(&u.targets, n)?;
    let input = state.amplitudes();
    let mut output = vec![Complex64::new(0.0, 0.0); input.len()];
    let d = u.dim;
    for group in target_groups(n, &u.targets) {
        for (row, &out_idx) in group.iter().enumerate() {
            output[out_idx] = group
                .iter()
                .enumerate()
                .map(|(col, &in_idx)| u.entries[row * d + col] * input[in_idx])
                .sum();
        }
    }
    Ok(StateVector::from_raw(n, output))
}

/// Haar-random unitary on `num_targets` qubits, targeting `0..num_targets`.
///
/// QR-decomposes a matrix of i.i.d. standard complex Gaussians and rescales
/// the columns of Q by the phases of the diagonal of R, which makes the
/// decomposition unique and the result Haar distributed.
pub fn random_unitary<R: Rng + ?Sized>(num_targets: usize, rng: &mut R) -> Unitary {
    assert!(num_targets >= 1, "random_unitary needs at least one qubit");
    let d = 1usize << num_targets;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    // Row-major draw order so a seed fixes the matrix independently of storage.
    let mut draws = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        draws.push(Complex64::new(re * scale, im * scale));
    }
    let gaussian = DMatrix::from_row_slice(d, d, &draws);
    let (q, r) = gaussian.qr().unpack();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for col in 0..d {
        let diag = r[(col, col)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            entries[row * d + col] = q[(row, col)] * phase;
        }
    }
    Unitary::new(entries, (0..num_targets).collect())
        .expect("QR of a Gaussian matrix yields a unitary Q")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x_gate(target: usize) -> Unitary {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Unitary::new(vec![o, l, l, o], vec![target]).unwrap()
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = StateVector::random(3, &mut rng);
        let out = apply_unitary(&psi, &Unitary::identity(vec![0]).unwrap()).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn x_on_second_qubit() {
        let out = apply_unitary(&StateVector::zeros(2), &x_gate(1)).unwrap();
        assert_eq!(out, StateVector::basis(2, 1).unwrap());
        let out = apply_unitary(&StateVector::zeros(2), &x_gate(0)).unwrap();
        assert_eq!(out, StateVector::basis(2, 2).unwrap());
    }

    #[test]
    fn target_order_is_respected() {
        // CNOT with control = first listed target.
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let cnot = vec![l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o];
        let forward = Unitary::new(cnot.clone(), vec![0, 2]).unwrap();
        let backward = Unitary::new(cnot, vec![2, 0]).unwrap();
        let q0_set = StateVector::basis(3, 0b100).unwrap();
        assert_eq!(
            apply_unitary(&q0_set, &forward).unwrap(),
            StateVector::basis(3, 0b101).unwrap()
        );
        assert_eq!(apply_unitary(&q0_set, &backward).unwrap(), q0_set);
    }

    #[test]
    fn round_trip_with_dagger() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 1..=3 {
            let psi = StateVector::random(4, &mut rng);
            let u = random_unitary(k, &mut rng)
                .retarget((4 - k..4).rev().collect())
                .unwrap();
            let there = apply_unitary(&psi, &u).unwrap();
            assert!((there.norm_sqr() - 1.0).abs() < 1e-12);
            let back = apply_unitary(&there, &u.dagger()).unwrap();
            assert!(back.max_abs_diff(&psi).unwrap() < 1e-10);
        }
    }

    #[test]
    fn random_unitary_is_unitary_and_seeded() {
        for k in 1..=4 {
            let a = random_unitary(k, &mut ChaCha8Rng::seed_from_u64(42));
            let b = random_unitary(k, &mut ChaCha8Rng::seed_from_u64(42));
            assert!(a.unitarity_error() < 1e-10);
            assert_eq!(a.dim(), 1 << k);
            for r in 0..a.dim() {
                for c in 0..a.dim() {
                    assert_eq!(a.entry(r, c).re.to_bits(), b.entry(r, c).re.to_bits());
                    assert_eq!(a.entry(r, c).im.to_bits(), b.entry(r, c).im.to_bits());
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        let l = Complex64::new(1.0, 0.0);
        let o = Complex64::new(0.0, 0.0);
        assert!(matches!(
            Unitary::new(vec![l, l, o, l], vec![0]),
            Err(QcoreError::NotUnitary(_))
        ));
        assert!(matches!(
            Unitary::new(vec![l, o, o, l], vec![0, 1]),
            Err(QcoreError::DimensionMismatch { .. })
        ));
        assert_eq!(
            Unitary::identity(vec![1, 1]),
            Err(QcoreError::DuplicateQubit(1))
        );
        assert_eq!(Unitary::identity(vec![]), Err(QcoreError::EmptyQubitList));
        let psi = StateVector::zeros(2);
        assert_eq!(
            apply_unitary(&psi, &x_gate(5)),
            Err(QcoreError::QubitOutOfRange {
                index: 5,
                num_qubits: 2
            })
        );
    }
}
