use rayon::prelude::*;
use serde::Serialize;

use super::{ExperimentConfig, Result, Strategy};
use crate::protocol::{alice_commit, bc_apply_operations, BcPolicy, CommitValue, C_QUBIT};
use crate::qcore::{reduced_density, trace_distance, DensityMatrix};
use crate::seed;

/// How much C's side of the commitment reveals about the committed value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HidingReport {
    pub n_pairs: usize,
    pub m_ancillas: usize,
    pub bc_policy: BcPolicy,
    pub trials: usize,
    pub values: [CommitValue; 4],
    /// Max over trials and pairs of the trace distance between C-side states
    /// for two committed values, right after the commit phase.
    pub before_ops: [[f64; 4]; 4],
    /// Same, after B and C applied their operations with a shared seed.
    pub after_ops: [[f64; 4]; 4],
    pub max_distance: f64,
    /// Max entry-wise deviation of C's single-qubit marginal from I/2 after
    /// the commit phase.
    pub max_marginal_deviation: f64,
}

impl HidingReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_distance <= tol && self.max_marginal_deviation <= tol
    }
}

struct TrialView {
    before: [[f64; 4]; 4],
    after: [[f64; 4]; 4],
    marginal: f64,
}

fn pairwise(views: &[Vec<DensityMatrix>]) -> Result<[[f64; 4]; 4]> {
    let mut table = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut worst = 0.0f64;
            for (a, b) in views[i].iter().zip(&views[j]) {
                worst = worst.max(trace_distance(a, b)?);
            }
            table[i][j] = worst;
            table[j][i] = worst;
        }
    }
    Ok(table)
}

fn trial_view(base: &ExperimentConfig, trial: usize) -> Result<TrialView> {
    let trial_seed = seed::mix(base.master_seed, trial as u64);
    let half = DensityMatrix::maximally_mixed(2)?;
    let mut before = Vec::with_capacity(4);
    let mut after = Vec::with_capacity(4);
    let mut marginal = 0.0f64;
    for value in CommitValue::ALL {
        let mut session = alice_commit(value, base.n_pairs, base.m_ancillas)?;
        let mut views = Vec::with_capacity(base.n_pairs);
        for pair in session.pairs() {
            let c_only = reduced_density(pair.state(), &[C_QUBIT])?;
            marginal = marginal.max(c_only.max_abs_diff(&half)?);
            views.push(pair.c_side_density()?);
        }
        before.push(views);
        bc_apply_operations(
            &mut session,
            base.bc_policy,
            &mut seed::substream(trial_seed, 0),
        )?;
        after.push(
            session
                .pairs()
                .iter()
                .map(|p| p.c_side_density())
                .collect::<std::result::Result<Vec<_>, _>>()?,
        );
    }
    Ok(TrialView {
        before: pairwise(&before)?,
        after: pairwise(&after)?,
        marginal,
    })
}

fn elementwise_max(a: [[f64; 4]; 4], b: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = a;
    for (row, other) in out.iter_mut().zip(b) {
        for (x, y) in row.iter_mut().zip(other) {
            *x = x.max(y);
        }
    }
    out
}

/// Pairwise trace distances between what B and C hold for each committed
/// value, over `base.trials` trials of receiver operations.
pub fn hiding_report(base: &ExperimentConfig) -> Result<HidingReport> {
    // Strategy fields are irrelevant here; validate everything else.
    let mut checked = base.clone();
    checked.strategy = Strategy::Honest;
    checked.reveal_value = checked.commit_value;
    checked.validate()?;

    let views = (0..base.trials)
        .into_par_iter()
        .map(|t| trial_view(base, t))
        .collect::<Result<Vec<_>>>()?;
    let zero = [[0.0; 4]; 4];
    let (before, after, marginal) = views.iter().fold((zero, zero, 0.0f64), |(b, a, m), v| {
        (
            elementwise_max(b, v.before),
            elementwise_max(a, v.after),
            m.max(v.marginal),
        )
    });
    let max_distance = before
        .iter()
        .chain(after.iter())
        .flatten()
        .fold(0.0f64, |acc, &d| acc.max(d));
    Ok(HidingReport {
        n_pairs: base.n_pairs,
        m_ancillas: base.m_ancillas,
        bc_policy: base.bc_policy,
        trials: base.trials,
        values: CommitValue::ALL,
        before_ops: before,
        after_ops: after,
        max_distance,
        max_marginal_deviation: marginal,
    })
}
