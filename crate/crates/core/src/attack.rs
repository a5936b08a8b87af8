//! Alice's cheating strategy.
//!
//! σ_z on Alice's qubit flips the sign bit `u_i` of a Bell label and σ_x
//! flips the parity bit `u_j` (up to a global sign of (−1)^{u_i}). Alice can
//! therefore move her pairs between any two Bell states without touching
//! C's qubits. She commits to the (0,0) state and picks the value to reveal
//! only at reveal time, flipping every kept qubit just before handing it
//! over. Because her Pauli acts on a different qubit than anything B and C
//! did, the two commute and the verifier sees exactly what an honest
//! commitment to the target would have produced.

use serde::Serialize;

use crate::protocol::{
    commit_label, CommitValue, CommitmentSession, Preparation, Result, RevealMessage,
};
use crate::qcore::{BellLabel, PauliOp};

/// The label every cheating session is physically prepared in.
pub const CHEAT_START: BellLabel = BellLabel::from_bools(false, false);

/// Pauli on the first qubit that maps `bell(from)` to `bell(to)` up to
/// global phase: Z iff the sign bits differ, X iff the parity bits differ.
pub fn pauli_for_flip(from: BellLabel, to: BellLabel) -> PauliOp {
    PauliOp::from_components(from.u_i() != to.u_i(), from.u_j() != to.u_j())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheatPlan {
    pub start_label: BellLabel,
    pub target: CommitValue,
    pub flip: PauliOp,
}

impl CheatPlan {
    pub fn new(target: CommitValue) -> Self {
        Self {
            start_label: CHEAT_START,
            target,
            flip: pauli_for_flip(CHEAT_START, commit_label(target)),
        }
    }
}

/// Commit phase of the cheater: physically identical to an honest bit-0
/// commitment, but Alice has not settled on a value.
pub fn alice_commit_cheating(n_pairs: usize, ancillas: usize) -> Result<CommitmentSession> {
    CommitmentSession::prepare(
        CommitValue::Bit0,
        Preparation::Uncommitted,
        n_pairs,
        ancillas,
    )
}

/// Applies the flip for `target` to every qubit Alice kept, then announces
/// the label of `target` and hands the qubits over.
pub fn alice_reveal_cheat(
    session: &mut CommitmentSession,
    target: CommitValue,
) -> Result<RevealMessage> {
    let plan = CheatPlan::new(target);
    session.apply_alice_pauli(plan.flip)?;
    session.hand_over(commit_label(target))
}

/// Announces `target` without flipping anything. Against pairs prepared for
/// a different value this must fail verification; it serves as a control
/// showing the verifier actually rejects.
pub fn alice_reveal_unflipped(
    session: &mut CommitmentSession,
    target: CommitValue,
) -> Result<RevealMessage> {
    session.hand_over(commit_label(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{
        alice_commit, alice_reveal_honest, bc_apply_operations, verify, BcPolicy, Phase,
        ProtocolError,
    };
    use crate::qcore::{apply_pauli, fidelity, make_bell};
    use crate::seed::stream;

    fn label(a: u8, b: u8) -> BellLabel {
        BellLabel::new(a, b).unwrap()
    }

    #[test]
    fn flips_named_in_the_attack() {
        assert_eq!(pauli_for_flip(label(0, 0), label(0, 1)), PauliOp::X);
        assert_eq!(pauli_for_flip(label(0, 0), label(1, 0)), PauliOp::Z);
        assert_eq!(pauli_for_flip(label(0, 0), label(1, 1)), PauliOp::ZX);
        for l in BellLabel::ALL {
            assert_eq!(pauli_for_flip(l, l), PauliOp::Identity);
        }
    }

    #[test]
    fn closed_form_matches_exhaustive_search() {
        for from in BellLabel::ALL {
            for to in BellLabel::ALL {
                let hits: Vec<PauliOp> = PauliOp::ALL
                    .into_iter()
                    .filter(|&p| {
                        let moved = apply_pauli(&make_bell(from), p, 0).unwrap();
                        (fidelity(&moved, &make_bell(to)).unwrap() - 1.0).abs() < 1e-12
                    })
                    .collect();
                assert_eq!(hits, vec![pauli_for_flip(from, to)], "{from} -> {to}");
            }
        }
    }

    #[test]
    fn cheating_commit_looks_like_bit0() {
        let cheat = alice_commit_cheating(4, 0).unwrap();
        let honest = alice_commit(CommitValue::Bit0, 4, 0).unwrap();
        assert_eq!(cheat.preparation(), Preparation::Uncommitted);
        assert_eq!(cheat.committed(), CommitValue::Bit0);
        for (a, b) in cheat.pairs().iter().zip(honest.pairs()) {
            assert_eq!(a.state(), &make_bell(label(0, 0)));
            assert!((fidelity(a.state(), b.state()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_cheat_equals_honest_reveal() {
        let mut cheat = alice_commit_cheating(2, 1).unwrap();
        let mut honest = alice_commit(CommitValue::Bit0, 2, 1).unwrap();
        let a = alice_reveal_cheat(&mut cheat, CommitValue::Bit0).unwrap();
        let b = alice_reveal_honest(&mut honest).unwrap();
        assert_eq!(a, b);
        for (x, y) in cheat.pairs().iter().zip(honest.pairs()) {
            assert_eq!(x.state(), y.state());
        }
    }

    #[test]
    fn cheat_reveal_announces_target() {
        let mut s = alice_commit_cheating(3, 0).unwrap();
        let msg = alice_reveal_cheat(&mut s, CommitValue::Bit1).unwrap();
        assert_eq!(msg.announced, label(0, 1));
        assert_eq!(s.phase(), Phase::Revealed);
        for pair in s.pairs() {
            assert!(pair.state().max_abs_diff(&make_bell(label(0, 1))).unwrap() < 1e-12);
        }
        assert_eq!(
            alice_reveal_cheat(&mut s, CommitValue::Minus).unwrap_err(),
            ProtocolError::AlreadyRevealed
        );

        let mut s = alice_commit_cheating(1, 0).unwrap();
        let msg = alice_reveal_cheat(&mut s, CommitValue::Minus).unwrap();
        assert_eq!(msg.announced, label(1, 1));
        assert!(
            s.pairs()[0]
                .state()
                .max_abs_diff(&make_bell(label(1, 1)))
                .unwrap()
                < 1e-12
        );
    }

    #[test]
    fn cheat_passes_after_entangling_receiver_ops() {
        for target in CommitValue::ALL {
            let mut s = alice_commit_cheating(5, 2).unwrap();
            bc_apply_operations(&mut s, BcPolicy::RandomEntangled, &mut stream(31)).unwrap();
            let msg = alice_reveal_cheat(&mut s, target).unwrap();
            let report = verify(s, &msg, &mut stream(32)).unwrap();
            assert!(report.accept, "{target}");
            assert_eq!(report.revealed_value, Some(target));
            assert!(report.min_announced_probability() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn unflipped_announcement_is_rejected() {
        let mut s = alice_commit_cheating(3, 1).unwrap();
        bc_apply_operations(&mut s, BcPolicy::RandomEntangled, &mut stream(4)).unwrap();
        let msg = alice_reveal_unflipped(&mut s, CommitValue::Plus).unwrap();
        let report = verify(s, &msg, &mut stream(5)).unwrap();
        assert!(!report.accept);
        assert!(report.max_announced_probability() <= 1e-9);
    }
}
