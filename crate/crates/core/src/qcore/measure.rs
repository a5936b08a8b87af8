use num_complex::Complex64;
use rand::Rng;

use super::{check_qubits, make_bell, target_groups, BellLabel, Result, StateVector};

/// Outcome of a Bell-basis measurement on two qubits of a register.
#[derive(Debug, Clone)]
pub struct BellMeasurement {
    pub label: BellLabel,
    /// Probabilities of all four outcomes, indexed by [`BellLabel::index`].
    pub probabilities: [f64; 4],
    /// Renormalized state after projection onto `label`.
    pub post_state: StateVector,
}

impl BellMeasurement {
    pub fn probability_of(&self, label: BellLabel) -> f64 {
        self.probabilities[label.index()]
    }
}

/// Overlaps `⟨bell(L)|v⟩` of each local two-qubit slice, per label.
fn bell_components(
    state: &StateVector,
    pair: (usize, usize),
) -> Result<Vec<(Vec<usize>, [Complex64; 4])>> {
    let n = state.num_qubits();
    check_qubits(&[pair.0, pair.1], n)?;
    let bells: Vec<StateVector> = BellLabel::ALL.iter().map(|&l| make_bell(l)).collect();
    let amps = state.amplitudes();
    Ok(target_groups(n, &[pair.0, pair.1])
        .into_iter()
        .map(|group| {
            let mut overlaps = [Complex64::new(0.0, 0.0); 4];
            for (overlap, bell) in overlaps.iter_mut().zip(&bells) {
                *overlap = group
                    .iter()
                    .zip(bell.amplitudes())
                    .map(|(&idx, b)| b.conj() * amps[idx])
                    .sum();
            }
            (group, overlaps)
        })
        .collect())
}

/// Outcome probabilities of a Bell-basis measurement on `pair`, in label order.
pub fn bell_probabilities(state: &StateVector, pair: (usize, usize)) -> Result<[f64; 4]> {
    let mut probabilities = [0.0; 4];
    for (_, overlaps) in bell_components(state, pair)? {
        for (p, c) in probabilities.iter_mut().zip(overlaps) {
            *p += c.norm_sqr();
        }
    }
    Ok(probabilities)
}

/// Projectively measures qubits `pair` in the Bell basis, with `pair.0`
/// playing the role of the first qubit of [`make_bell`].
///
/// Consumes exactly one uniform draw from `rng` and picks the outcome by
/// inverse CDF over labels in the order (0,0), (0,1), (1,0), (1,1).
pub fn bell_measure<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<BellMeasurement> {
    let components = bell_components(state, pair)?;
    let mut probabilities = [0.0; 4];
    for (_, overlaps) in &components {
        for (p, c) in probabilities.iter_mut().zip(overlaps) {
            *p += c.norm_sqr();
        }
    }

    let draw: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut chosen = None;
    for (k, &p) in probabilities.iter().enumerate() {
        cumulative += p;
        if p > 0.0 && draw < cumulative {
            chosen = Some(k);
            break;
        }
    }
    // Rounding can leave the total a hair under the draw.
    let chosen = chosen.unwrap_or_else(|| {
        probabilities
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("a normalized state has some nonzero outcome")
    });
    let label = BellLabel::ALL[chosen];

    let bell = make_bell(label);
    let norm = probabilities[chosen].sqrt();
    let mut post = vec![Complex64::new(0.0, 0.0); state.dim()];
    for (group, overlaps) in &components {
        let c = overlaps[chosen] / norm;
        for (&idx, b) in group.iter().zip(bell.amplitudes()) {
            post[idx] = c * b;
        }
    }
    Ok(BellMeasurement {
        label,
        probabilities,
        post_state: StateVector::normalized(post)?,
    })
}
