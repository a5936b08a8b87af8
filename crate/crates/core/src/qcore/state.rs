use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{QcoreError, Result, EXACT_TOL};

/// Normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes. The length must be a power of two
    /// and the squared norm must be 1 within `1e-12`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(QcoreError::NotPowerOfTwo(len));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(QcoreError::NotNormalized(norm_sqr));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Like [`StateVector::from_amplitudes`] but rescales to unit norm first.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QcoreError::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QcoreError::QubitOutOfRange { index, num_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// `|0...0⟩` on `num_qubits` qubits.
    pub fn zeros(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0).expect("index 0 is always in range")
    }

    /// The zero-qubit state, the unit of [`tensor`].
    pub fn empty() -> Self {
        Self::zeros(0)
    }

    /// Random state with i.i.d. complex Gaussian amplitudes, normalized.
    /// This is uniform on the unit sphere.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let amplitudes = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amplitudes).expect("a Gaussian vector is nonzero almost surely")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        same_size(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Constructs without validation; callers guarantee length and norm.
    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }
}

fn same_size(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.num_qubits != b.num_qubits {
        return Err(QcoreError::SizeMismatch {
            expected: a.num_qubits,
            found: b.num_qubits,
        });
    }
    Ok(())
}

/// Tensor product `a ⊗ b`; the qubits of `a` come first.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::from_raw(a.num_qubits + b.num_qubits, amplitudes)
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_size(a, b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|⟨a|b⟩|²`, insensitive to global phase.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_lengths_and_norms() {
        assert_eq!(
            StateVector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]),
            Err(QcoreError::NotPowerOfTwo(3))
        );
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0), c(1.0)]),
            Err(QcoreError::NotNormalized(_))
        ));
        assert!(StateVector::normalized(vec![c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let product = tensor(&zero, &one);
        assert_eq!(product, StateVector::basis(2, 1).unwrap());
        let product = tensor(&one, &zero);
        assert_eq!(product, StateVector::basis(2, 2).unwrap());
    }

    #[test]
    fn tensor_with_empty_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random(2, &mut rng);
        assert_eq!(tensor(&psi, &StateVector::empty()), psi);
        assert_eq!(tensor(&StateVector::empty(), &psi), psi);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let a = StateVector::from_amplitudes(vec![c(0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let b = StateVector::basis(1, 1).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(inner_product(&b, &a).unwrap(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = StateVector::random(3, &mut rng);
        assert!((inner_product(&psi, &psi).unwrap().re - 1.0).abs() < 1e-12);
        for theta in [0.3, 1.7, -2.9, std::f64::consts::PI] {
            let rotated = psi.with_global_phase(theta);
            assert!((fidelity(&psi, &rotated).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = StateVector::zeros(1);
        let b = StateVector::zeros(2);
        assert_eq!(
            inner_product(&a, &b),
            Err(QcoreError::SizeMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(fidelity(&a, &b).is_err());
    }
}
