//! Commit, reveal and verification for the Bell-pair commitment scheme.
//!
//! Alice prepares `N` identical Bell pairs whose label encodes the committed
//! value, keeps qubit 0 of each pair and hands qubit 1 to C. B and C may then
//! act on C's qubit and on up to [`MAX_ANCILLAS`] qubits of their own; those
//! operations are recorded. To reveal, Alice announces one label for all
//! pairs and hands her qubits to B. B undoes the recorded operations and
//! measures every pair in the Bell basis; the reveal is accepted only if
//! every outcome equals the announced label.
//!
//! Pairs never interact, so each one is simulated as its own register of
//! `2 + m` qubits: Alice's qubit at index 0, C's at index 1, ancillas after.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{
    apply_pauli, apply_unitary, bell_measure, make_bell, random_unitary, reduced_density, tensor,
    BellLabel, DensityMatrix, PauliOp, QcoreError, StateVector, Unitary,
};
use crate::seed;

pub const ALICE_QUBIT: usize = 0;
pub const C_QUBIT: usize = 1;
pub const MAX_ANCILLAS: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("a commitment needs at least one Bell pair")]
    NoPairs,
    #[error("{0} ancillas requested, at most {MAX_ANCILLAS} are supported")]
    TooManyAncillas(usize),
    #[error("entangling receiver operations need at least one ancilla")]
    EntangledWithoutAncilla,
    #[error("session already revealed")]
    AlreadyRevealed,
    #[error("session has not been revealed yet")]
    NotRevealed,
    #[error("{pairs} pairs but {records} operation records")]
    RecordMismatch { pairs: usize, records: usize },
    #[error("receiver operation targets Alice's qubit")]
    TouchesAliceQubit,
    #[error("Alice's qubits were not handed over")]
    NotTransferred,
    #[error("unknown {kind} `{value}`")]
    Unknown { kind: &'static str, value: String },
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

/// Value Alice can commit to: a classical bit or one of the qubits |±⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommitValue {
    Bit0,
    Bit1,
    Plus,
    Minus,
}

impl CommitValue {
    pub const ALL: [CommitValue; 4] = [
        CommitValue::Bit0,
        CommitValue::Bit1,
        CommitValue::Plus,
        CommitValue::Minus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommitValue::Bit0 => "bit0",
            CommitValue::Bit1 => "bit1",
            CommitValue::Plus => "plus",
            CommitValue::Minus => "minus",
        }
    }
}

impl fmt::Display for CommitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CommitValue {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self> {
        CommitValue::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ProtocolError::Unknown {
                kind: "commit value",
                value: s.to_string(),
            })
    }
}

/// Coding table: bit 0 ↦ (0,0), bit 1 ↦ (0,1), |+⟩ ↦ (1,0), |−⟩ ↦ (1,1).
pub fn commit_label(value: CommitValue) -> BellLabel {
    match value {
        CommitValue::Bit0 => BellLabel::from_bools(false, false),
        CommitValue::Bit1 => BellLabel::from_bools(false, true),
        CommitValue::Plus => BellLabel::from_bools(true, false),
        CommitValue::Minus => BellLabel::from_bools(true, true),
    }
}

/// Inverse of [`commit_label`].
pub fn value_of_label(label: BellLabel) -> CommitValue {
    match (label.u_i(), label.u_j()) {
        (0, 0) => CommitValue::Bit0,
        (0, 1) => CommitValue::Bit1,
        (1, 0) => CommitValue::Plus,
        _ => CommitValue::Minus,
    }
}

/// What B and C do to their side of each pair after the commit phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcPolicy {
    None,
    /// One Haar-random single-qubit unitary on C's qubit.
    RandomLocal,
    /// One Haar-random unitary jointly on C's qubit and all ancillas.
    RandomEntangled,
}

impl BcPolicy {
    pub const ALL: [BcPolicy; 3] = [
        BcPolicy::None,
        BcPolicy::RandomLocal,
        BcPolicy::RandomEntangled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BcPolicy::None => "none",
            BcPolicy::RandomLocal => "random-local",
            BcPolicy::RandomEntangled => "random-entangled",
        }
    }
}

impl fmt::Display for BcPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BcPolicy {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self> {
        BcPolicy::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ProtocolError::Unknown {
                kind: "receiver policy",
                value: s.to_string(),
            })
    }
}

/// One Bell pair plus the receiver-side ancillas that may get entangled with it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRegister {
    state: StateVector,
    ancillas: usize,
}

impl PairRegister {
    fn prepare(label: BellLabel, ancillas: usize) -> Self {
        Self {
            state: tensor(&make_bell(label), &StateVector::zeros(ancillas)),
            ancillas,
        }
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas
    }

    /// C's qubit followed by the ancillas.
    pub fn c_side_qubits(&self) -> Vec<usize> {
        (C_QUBIT..C_QUBIT + 1 + self.ancillas).collect()
    }

    /// Density matrix of everything on B and C's side.
    pub fn c_side_density(&self) -> Result<DensityMatrix> {
        Ok(reduced_density(&self.state, &self.c_side_qubits())?)
    }
}

/// Receiver-side operations applied to one pair, in order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BcRecord {
    ops: Vec<Unitary>,
}

impl BcRecord {
    /// Appends `op`, refusing anything that acts on Alice's qubit.
    pub fn push(&mut self, op: Unitary) -> Result<()> {
        if op.targets().contains(&ALICE_QUBIT) {
            return Err(ProtocolError::TouchesAliceQubit);
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn ops(&self) -> &[Unitary] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Committed,
    Revealed,
}

/// How Alice produced the pairs. An uncommitted session is physically a
/// bit-0 commitment that Alice intends to steer at reveal time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preparation {
    Honest,
    Uncommitted,
}

#[derive(Debug, Clone)]
pub struct CommitmentSession {
    committed: CommitValue,
    preparation: Preparation,
    ancillas: usize,
    pairs: Vec<PairRegister>,
    bc_records: Vec<BcRecord>,
    phase: Phase,
}

impl CommitmentSession {
    pub(crate) fn prepare(
        value: CommitValue,
        preparation: Preparation,
        n_pairs: usize,
        ancillas: usize,
    ) -> Result<Self> {
        if n_pairs == 0 {
            return Err(ProtocolError::NoPairs);
        }
        if ancillas > MAX_ANCILLAS {
            return Err(ProtocolError::TooManyAncillas(ancillas));
        }
        let label = commit_label(value);
        Ok(Self {
            committed: value,
            preparation,
            ancillas,
            pairs: (0..n_pairs)
                .map(|_| PairRegister::prepare(label, ancillas))
                .collect(),
            bc_records: vec![BcRecord::default(); n_pairs],
            phase: Phase::Committed,
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// The value the pairs were physically prepared for.
    pub fn committed(&self) -> CommitValue {
        self.committed
    }

    pub fn preparation(&self) -> Preparation {
        self.preparation
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn pairs(&self) -> &[PairRegister] {
        &self.pairs
    }

    pub fn bc_records(&self) -> &[BcRecord] {
        &self.bc_records
    }

    /// Applies `op` to Alice's qubit of every pair. Only possible while she
    /// still holds them.
    pub fn apply_alice_pauli(&mut self, op: PauliOp) -> Result<()> {
        self.require_committed()?;
        for pair in &mut self.pairs {
            pair.state = apply_pauli(&pair.state, op, ALICE_QUBIT)?;
        }
        Ok(())
    }

    /// Ends the commit phase and hands Alice's qubits to B with `announced`.
    pub(crate) fn hand_over(&mut self, announced: BellLabel) -> Result<RevealMessage> {
        self.require_committed()?;
        self.phase = Phase::Revealed;
        Ok(RevealMessage {
            announced,
            transferred: true,
        })
    }

    /// Per-pair states after B has undone every recorded receiver operation,
    /// i.e. what gets Bell-measured.
    pub fn unwound_states(&self) -> Result<Vec<StateVector>> {
        self.check_records()?;
        self.pairs
            .iter()
            .zip(&self.bc_records)
            .map(|(pair, record)| {
                record
                    .ops()
                    .iter()
                    .rev()
                    .try_fold(pair.state.clone(), |state, op| {
                        apply_unitary(&state, &op.dagger())
                    })
                    .map_err(ProtocolError::from)
            })
            .collect()
    }

    fn require_committed(&self) -> Result<()> {
        match self.phase {
            Phase::Committed => Ok(()),
            Phase::Revealed => Err(ProtocolError::AlreadyRevealed),
        }
    }

    fn check_records(&self) -> Result<()> {
        if self.pairs.len() != self.bc_records.len() {
            return Err(ProtocolError::RecordMismatch {
                pairs: self.pairs.len(),
                records: self.bc_records.len(),
            });
        }
        Ok(())
    }
}

/// Alice's reveal: one announced label covering all pairs, and the handover
/// of her qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealMessage {
    pub announced: BellLabel,
    pub transferred: bool,
}

/// Honest commit phase: `n_pairs` copies of the Bell state coding `value`,
/// each followed by `ancillas` receiver qubits in |0⟩.
pub fn alice_commit(
    value: CommitValue,
    n_pairs: usize,
    ancillas: usize,
) -> Result<CommitmentSession> {
    CommitmentSession::prepare(value, Preparation::Honest, n_pairs, ancillas)
}

/// B and C act on their side of every pair according to `policy`.
///
/// Takes one `u64` from `rng` and derives an independent stream per pair
/// from it, so pair `p` sees the same operation regardless of the others.
pub fn bc_apply_operations<R: RngCore + ?Sized>(
    session: &mut CommitmentSession,
    policy: BcPolicy,
    rng: &mut R,
) -> Result<()> {
    session.require_committed()?;
    if policy == BcPolicy::RandomEntangled && session.ancillas == 0 {
        return Err(ProtocolError::EntangledWithoutAncilla);
    }
    let base = rng.next_u64();
    for (p, (pair, record)) in session
        .pairs
        .iter_mut()
        .zip(&mut session.bc_records)
        .enumerate()
    {
        let mut stream = seed::substream(base, p as u64);
        let targets = match policy {
            BcPolicy::None => continue,
            BcPolicy::RandomLocal => vec![C_QUBIT],
            BcPolicy::RandomEntangled => pair.c_side_qubits(),
        };
        let op = random_unitary(targets.len(), &mut stream).retarget(targets)?;
        pair.state = apply_unitary(&pair.state, &op)?;
        record.push(op)?;
    }
    Ok(())
}

/// Honest reveal: announce the coding label of the committed value.
pub fn alice_reveal_honest(session: &mut CommitmentSession) -> Result<RevealMessage> {
    let announced = commit_label(session.committed);
    session.hand_over(announced)
}

/// Bell-measurement result for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairOutcome {
    pub label: BellLabel,
    /// Probability, before sampling, that this pair would match the
    /// announced label.
    pub announced_probability: f64,
}

/// B's verdict on a reveal, serializable as the session transcript.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub phase: Phase,
    /// Physically prepared value.
    pub value: CommitValue,
    pub preparation: Preparation,
    pub ancillas: usize,
    pub bc_ops_per_pair: Vec<usize>,
    pub announced: BellLabel,
    pub per_pair: Vec<PairOutcome>,
    pub accept: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revealed_value: Option<CommitValue>,
}

impl VerificationReport {
    pub fn measured_labels(&self) -> Vec<BellLabel> {
        self.per_pair.iter().map(|o| o.label).collect()
    }

    /// Smallest per-pair probability of matching the announcement.
    pub fn min_announced_probability(&self) -> f64 {
        self.per_pair
            .iter()
            .map(|o| o.announced_probability)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest per-pair probability of matching the announcement.
    pub fn max_announced_probability(&self) -> f64 {
        self.per_pair
            .iter()
            .map(|o| o.announced_probability)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// B undoes the recorded receiver operations in reverse order, Bell-measures
/// each pair and accepts only if every outcome equals the announcement.
///
/// Takes one `u64` from `rng` and derives one measurement stream per pair.
pub fn verify<R: RngCore + ?Sized>(
    session: CommitmentSession,
    reveal: &RevealMessage,
    rng: &mut R,
) -> Result<VerificationReport> {
    if session.phase != Phase::Revealed {
        return Err(ProtocolError::NotRevealed);
    }
    if !reveal.transferred {
        return Err(ProtocolError::NotTransferred);
    }
    let states = session.unwound_states()?;
    let base = rng.next_u64();
    let per_pair = states
        .iter()
        .enumerate()
        .map(|(p, state)| {
            let mut stream = seed::substream(base, p as u64);
            let m = bell_measure(state, (ALICE_QUBIT, C_QUBIT), &mut stream)?;
            Ok(PairOutcome {
                label: m.label,
                announced_probability: m.probability_of(reveal.announced),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let accept = per_pair.iter().all(|o| o.label == reveal.announced);
    Ok(VerificationReport {
        phase: session.phase,
        value: session.committed,
        preparation: session.preparation,
        ancillas: session.ancillas,
        bc_ops_per_pair: session.bc_records.iter().map(BcRecord::len).collect(),
        announced: reveal.announced,
        per_pair,
        accept,
        revealed_value: accept.then(|| value_of_label(reveal.announced)),
    })
}
