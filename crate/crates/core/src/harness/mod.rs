//! Monte Carlo experiments over the commitment protocol.
//!
//! A trial is one full commit → receiver operations → reveal → verify run.
//! Trial `t` draws all its randomness from streams derived from
//! `mix(master_seed, t)`: child 0 feeds the receiver operations and child 1
//! the verifier's measurements. Trials are therefore independent of each
//! other and of execution order, and may run in parallel.

mod hiding;
mod matrix;
mod report;
pub mod selftest;

pub use hiding::{hiding_report, HidingReport};
pub use matrix::{acceptance_matrix, AcceptanceMatrix, MatrixCell};
pub use report::{OutputFormat, Report, REPORT_VERSION};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{alice_commit_cheating, alice_reveal_cheat, alice_reveal_unflipped};
use crate::protocol::{
    alice_commit, alice_reveal_honest, bc_apply_operations, verify, BcPolicy, CommitValue,
    ProtocolError, VerificationReport, MAX_ANCILLAS,
};
use crate::qcore::QcoreError;
use crate::seed;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error("report serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Who Alice is in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Commits to `commit_value` and reveals it.
    Honest,
    /// Prepares (0,0) pairs and flips them to `reveal_value` at reveal time.
    Cheat,
    /// Commits honestly to `commit_value` but announces a different
    /// `reveal_value` without flipping. Verification should always fail.
    Control,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Honest => "honest",
            Strategy::Cheat => "cheat",
            Strategy::Control => "control",
        }
    }

    pub fn expectation(self) -> Expectation {
        match self {
            Strategy::Honest | Strategy::Cheat => Expectation::AlwaysAccept,
            Strategy::Control => Expectation::AlwaysReject,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        [Strategy::Honest, Strategy::Cheat, Strategy::Control]
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::Config(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_pairs: usize,
    pub trials: usize,
    pub strategy: Strategy,
    pub commit_value: CommitValue,
    pub reveal_value: CommitValue,
    pub bc_policy: BcPolicy,
    pub m_ancillas: usize,
    pub master_seed: u64,
    /// Slack on per-pair outcome probabilities when checking expectations.
    pub tolerance: f64,
    pub output: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_pairs: 8,
            trials: 1000,
            strategy: Strategy::Honest,
            commit_value: CommitValue::Bit0,
            reveal_value: CommitValue::Bit0,
            bc_policy: BcPolicy::None,
            m_ancillas: 0,
            master_seed: 0,
            tolerance: 1e-9,
            output: OutputFormat::Text,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.n_pairs == 0 {
            return fail("at least one Bell pair is required".into());
        }
        if self.trials == 0 {
            return fail("at least one trial is required".into());
        }
        if self.m_ancillas > MAX_ANCILLAS {
            return fail(format!("at most {MAX_ANCILLAS} ancillas are supported"));
        }
        if self.bc_policy == BcPolicy::RandomEntangled && self.m_ancillas == 0 {
            return fail("random-entangled receiver operations need --ancillas >= 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return fail(format!("tolerance {} must lie in (0, 1)", self.tolerance));
        }
        match self.strategy {
            Strategy::Honest if self.reveal_value != self.commit_value => fail(format!(
                "an honest committer reveals the committed value ({} != {})",
                self.reveal_value, self.commit_value
            )),
            Strategy::Cheat if self.commit_value != CommitValue::Bit0 => fail(format!(
                "the cheater always prepares bit0 pairs, got commit {}",
                self.commit_value
            )),
            Strategy::Control if self.reveal_value == self.commit_value => {
                fail("a control run needs reveal != commit".into())
            }
            _ => Ok(()),
        }
    }
}

/// What a correct implementation must observe for a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// Every trial accepts and every pair matches with probability ≥ 1 − tol.
    AlwaysAccept,
    /// No trial accepts and every pair mismatches with probability ≥ 1 − tol.
    AlwaysReject,
}

/// Outcome of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial_index: usize,
    pub accept: bool,
    pub transcript: VerificationReport,
}

/// Runs trial `trial_index` of `config`; reproducible from those two alone.
pub fn run_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    config.validate()?;
    let trial_seed = seed::mix(config.master_seed, trial_index as u64);
    let mut bc_stream = seed::substream(trial_seed, 0);
    let mut verify_stream = seed::substream(trial_seed, 1);

    let mut session = match config.strategy {
        Strategy::Cheat => alice_commit_cheating(config.n_pairs, config.m_ancillas)?,
        Strategy::Honest | Strategy::Control => {
            alice_commit(config.commit_value, config.n_pairs, config.m_ancillas)?
        }
    };
    bc_apply_operations(&mut session, config.bc_policy, &mut bc_stream)?;
    let reveal = match config.strategy {
        Strategy::Honest => alice_reveal_honest(&mut session)?,
        Strategy::Cheat => alice_reveal_cheat(&mut session, config.reveal_value)?,
        Strategy::Control => alice_reveal_unflipped(&mut session, config.reveal_value)?,
    };
    let transcript = verify(session, &reveal, &mut verify_stream)?;
    Ok(TrialOutcome {
        trial_index,
        accept: transcript.accept,
        transcript,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionStats {
    pub trials: usize,
    pub accepts: usize,
    pub acceptance_rate: f64,
    /// Smallest per-pair probability of matching the announcement, over all
    /// pairs of all trials.
    pub min_match_probability: f64,
    /// Largest such probability.
    pub max_match_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial_outcomes: Option<Vec<bool>>,
}

impl DetectionStats {
    fn from_outcomes(outcomes: &[TrialOutcome], keep_detail: bool) -> Self {
        let trials = outcomes.len();
        let accepts = outcomes.iter().filter(|o| o.accept).count();
        let (min_p, max_p) =
            outcomes
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
                    (
                        lo.min(o.transcript.min_announced_probability()),
                        hi.max(o.transcript.max_announced_probability()),
                    )
                });
        Self {
            trials,
            accepts,
            acceptance_rate: accepts as f64 / trials as f64,
            min_match_probability: min_p,
            max_match_probability: max_p,
            per_trial_outcomes: keep_detail.then(|| outcomes.iter().map(|o| o.accept).collect()),
        }
    }

    /// Whether these statistics meet `expectation` at tolerance `tol`.
    pub fn meets(&self, expectation: Expectation, tol: f64) -> bool {
        match expectation {
            Expectation::AlwaysAccept => {
                self.accepts == self.trials && self.min_match_probability >= 1.0 - tol
            }
            Expectation::AlwaysReject => self.accepts == 0 && self.max_match_probability <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Runs all trials of `config` in parallel.
pub fn run_experiment(config: &ExperimentConfig) -> Result<DetectionStats> {
    run_experiment_with(config, Execution::Parallel, false)
}

/// Runs all trials; the result does not depend on `execution`.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
    keep_detail: bool,
) -> Result<DetectionStats> {
    config.validate()?;
    let outcomes: Vec<TrialOutcome> = match execution {
        Execution::Serial => (0..config.trials)
            .map(|t| run_trial(config, t))
            .collect::<Result<_>>()?,
        Execution::Parallel => (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect::<Result<_>>()?,
    };
    Ok(DetectionStats::from_outcomes(&outcomes, keep_detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(strategy: Strategy, commit: CommitValue, reveal: CommitValue) -> ExperimentConfig {
        ExperimentConfig {
            strategy,
            commit_value: commit,
            reveal_value: reveal,
            trials: 50,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn validation() {
        let ok = config(Strategy::Honest, CommitValue::Plus, CommitValue::Plus);
        assert!(ok.validate().is_ok());
        let bad = [
            config(Strategy::Honest, CommitValue::Plus, CommitValue::Minus),
            config(Strategy::Cheat, CommitValue::Plus, CommitValue::Minus),
            config(Strategy::Control, CommitValue::Plus, CommitValue::Plus),
            ExperimentConfig {
                trials: 0,
                ..ok.clone()
            },
            ExperimentConfig {
                n_pairs: 0,
                ..ok.clone()
            },
            ExperimentConfig {
                m_ancillas: 3,
                ..ok.clone()
            },
            ExperimentConfig {
                bc_policy: BcPolicy::RandomEntangled,
                ..ok.clone()
            },
            ExperimentConfig {
                tolerance: 0.0,
                ..ok.clone()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cfg.validate(), Err(HarnessError::Config(_))),
                "{cfg:?}"
            );
            assert!(run_experiment(&cfg).is_err());
        }
    }

    #[test]
    fn honest_trial_accepts() {
        let cfg = config(Strategy::Honest, CommitValue::Bit0, CommitValue::Bit0);
        assert!(run_trial(&cfg, 0).unwrap().accept);
    }

    #[test]
    fn cheat_trial_accepts_with_entangled_receivers() {
        let cfg = ExperimentConfig {
            bc_policy: BcPolicy::RandomEntangled,
            m_ancillas: 1,
            ..config(Strategy::Cheat, CommitValue::Bit0, CommitValue::Minus)
        };
        let outcome = run_trial(&cfg, 3).unwrap();
        assert!(outcome.accept);
        assert_eq!(outcome.transcript.revealed_value, Some(CommitValue::Minus));
    }

    #[test]
    fn trials_replay() {
        let cfg = ExperimentConfig {
            bc_policy: BcPolicy::RandomLocal,
            ..config(Strategy::Control, CommitValue::Bit1, CommitValue::Plus)
        };
        let a = run_trial(&cfg, 12).unwrap();
        let b = run_trial(&cfg, 12).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = ExperimentConfig {
            bc_policy: BcPolicy::RandomEntangled,
            m_ancillas: 2,
            ..config(Strategy::Cheat, CommitValue::Bit0, CommitValue::Plus)
        };
        let serial = run_experiment_with(&cfg, Execution::Serial, true).unwrap();
        let parallel = run_experiment_with(&cfg, Execution::Parallel, true).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial.acceptance_rate, 1.0);
        assert!(serial.meets(Expectation::AlwaysAccept, cfg.tolerance));
    }

    #[test]
    fn control_is_always_rejected() {
        let cfg = config(Strategy::Control, CommitValue::Minus, CommitValue::Bit1);
        let stats = run_experiment(&cfg).unwrap();
        assert_eq!(stats.accepts, 0);
        assert!(stats.meets(Expectation::AlwaysReject, cfg.tolerance));
        assert!(!stats.meets(Expectation::AlwaysAccept, cfg.tolerance));
    }

    #[test]
    fn strategy_names() {
        for s in [Strategy::Honest, Strategy::Cheat, Strategy::Control] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("liar".parse::<Strategy>().is_err());
    }
}
