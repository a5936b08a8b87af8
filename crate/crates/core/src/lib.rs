//! Simulation of a Bell-pair commitment scheme between a committer (Alice),
//! a receiver (Bob) and the receiver's agent (C), together with a cheating
//! strategy in which Alice changes her committed value after the fact using
//! local Pauli operations on the qubits she kept.
//!
//! * [`qcore`]: dense state-vector simulation of small registers.
//! * [`protocol`]: the commit / reveal / verify state machine.
//! * [`attack`]: the Pauli-flip cheating reveal.
//! * [`harness`]: Monte Carlo experiments, reports and the CLI backend.

pub mod attack;
pub mod harness;
pub mod protocol;
pub mod qcore;
pub mod seed;
