use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{QcoreError, StateVector};

/// Index `(u_i, u_j)` of one of the four Bell states
/// `(|0⟩|u_j⟩ + (−1)^{u_i}|1⟩|1⊕u_j⟩)/√2`.
///
/// `u_i` selects the relative sign, `u_j` the parity of the two qubits.
/// The label is also what the committer announces when revealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellLabel {
    u_i: bool,
    u_j: bool,
}

impl BellLabel {
    /// All labels in measurement order (0,0), (0,1), (1,0), (1,1).
    pub const ALL: [BellLabel; 4] = [
        BellLabel::from_bools(false, false),
        BellLabel::from_bools(false, true),
        BellLabel::from_bools(true, false),
        BellLabel::from_bools(true, true),
    ];

    pub const fn from_bools(u_i: bool, u_j: bool) -> Self {
        Self { u_i, u_j }
    }

    /// Builds a label from two bits, each of which must be 0 or 1.
    pub fn new(u_i: u8, u_j: u8) -> Result<Self, QcoreError> {
        let bit = |b: u8| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(QcoreError::InvalidBit(other)),
        };
        Ok(Self::from_bools(bit(u_i)?, bit(u_j)?))
    }

    pub fn u_i(self) -> u8 {
        self.u_i as u8
    }

    pub fn u_j(self) -> u8 {
        self.u_j as u8
    }

    /// Position in [`BellLabel::ALL`].
    pub fn index(self) -> usize {
        2 * self.u_i() as usize + self.u_j() as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn flip_u_i(self) -> Self {
        Self::from_bools(!self.u_i, self.u_j)
    }

    pub fn flip_u_j(self) -> Self {
        Self::from_bools(self.u_i, !self.u_j)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.u_i(), self.u_j())
    }
}

impl FromStr for BellLabel {
    type Err = QcoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 {
            return Err(QcoreError::InvalidBit(bytes.first().copied().unwrap_or(0)));
        }
        let digit = |b: u8| b.checked_sub(b'0').ok_or(QcoreError::InvalidBit(b));
        Self::new(digit(bytes[0])?, digit(bytes[1])?)
    }
}

impl Serialize for BellLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BellLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Two-qubit Bell state for `label`, qubit 0 as the left factor.
pub fn make_bell(label: BellLabel) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if label.u_i { -h } else { h };
    let u_j = label.u_j();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 4];
    // |0⟩|u_j⟩
    amplitudes[u_j as usize] = Complex64::new(h, 0.0);
    // |1⟩|1⊕u_j⟩
    amplitudes[2 + (1 - u_j) as usize] = Complex64::new(sign, 0.0);
    StateVector::from_raw(2, amplitudes)
}
