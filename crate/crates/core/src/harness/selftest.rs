//! Quick invariant suite behind the `selftest` subcommand.

use serde::Serialize;

use super::{
    hiding_report, run_experiment_with, run_trial, Execution, ExperimentConfig, Result, Strategy,
};
use crate::attack::pauli_for_flip;
use crate::protocol::{BcPolicy, CommitValue};
use crate::qcore::{
    apply_pauli, apply_unitary, fidelity, inner_product, make_bell, random_unitary, BellLabel,
    PauliOp, StateVector, EXACT_TOL,
};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

fn bell_orthonormality() -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for a in BellLabel::ALL {
        for b in BellLabel::ALL {
            let overlap = inner_product(&make_bell(a), &make_bell(b))?.norm();
            worst = worst.max((overlap - f64::from(a == b)).abs());
        }
    }
    Ok(CheckResult::new(
        "bell-orthonormality",
        worst <= EXACT_TOL,
        format!("max deviation {worst:.3e} over 16 overlaps"),
    ))
}

fn flip_identities() -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for l in BellLabel::ALL {
        let z = apply_pauli(&make_bell(l), PauliOp::Z, 0)?;
        worst = worst.max(z.max_abs_diff(&make_bell(l.flip_u_i()))?);
        let x = apply_pauli(&make_bell(l), PauliOp::X, 0)?;
        let sign = if l.u_i() == 1 {
            std::f64::consts::PI
        } else {
            0.0
        };
        let expected = make_bell(l.flip_u_j()).with_global_phase(sign);
        worst = worst.max(x.max_abs_diff(&expected)?);
    }
    Ok(CheckResult::new(
        "pauli-flip-identities",
        worst <= EXACT_TOL,
        format!("max amplitude error {worst:.3e} over 8 identities"),
    ))
}

fn commutation(master_seed: u64) -> Result<CheckResult> {
    let mut rng = seed::substream(master_seed, 0xC0);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = 2 + k % 3;
        let psi = StateVector::random(n, &mut rng);
        let op = PauliOp::ALL[k % 4];
        let width = 1 + k % (n - 1);
        let targets: Vec<usize> = (n - width..n).collect();
        let v = random_unitary(width, &mut rng).retarget(targets)?;
        let pauli_last = apply_pauli(&apply_unitary(&psi, &v)?, op, 0)?;
        let pauli_first = apply_unitary(&apply_pauli(&psi, op, 0)?, &v)?;
        worst = worst.max(pauli_last.max_abs_diff(&pauli_first)?);
    }
    Ok(CheckResult::new(
        "alice-pauli-commutes-with-receiver-ops",
        worst <= EXACT_TOL,
        format!("max amplitude difference {worst:.3e} over 200 random cases"),
    ))
}

fn flip_oracle() -> Result<CheckResult> {
    let mut mismatches = 0;
    for from in BellLabel::ALL {
        for to in BellLabel::ALL {
            let mut found = Vec::new();
            for p in PauliOp::ALL {
                let moved = apply_pauli(&make_bell(from), p, 0)?;
                if (fidelity(&moved, &make_bell(to))? - 1.0).abs() <= EXACT_TOL {
                    found.push(p);
                }
            }
            if found != [pauli_for_flip(from, to)] {
                mismatches += 1;
            }
        }
    }
    Ok(CheckResult::new(
        "flip-closed-form-vs-search",
        mismatches == 0,
        format!("{mismatches} of 16 label pairs disagree"),
    ))
}

fn protocol_sweep(base: &ExperimentConfig) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for (strategy, name) in [
        (Strategy::Honest, "honest-completeness"),
        (Strategy::Cheat, "cheat-undetected"),
        (Strategy::Control, "control-rejected"),
    ] {
        let mut failures = Vec::new();
        let mut runs = 0;
        for policy in BcPolicy::ALL {
            for (commit, reveal) in pairs_for(strategy) {
                let config = ExperimentConfig {
                    strategy,
                    commit_value: commit,
                    reveal_value: reveal,
                    bc_policy: policy,
                    ..base.clone()
                };
                let stats = run_experiment_with(&config, Execution::Parallel, false)?;
                runs += 1;
                if !stats.meets(strategy.expectation(), base.tolerance) {
                    failures.push(format!("{commit}->{reveal} {policy}"));
                }
            }
        }
        let detail = if failures.is_empty() {
            format!("{runs} experiments of {} trials", base.trials)
        } else {
            format!("failed: {}", failures.join(", "))
        };
        checks.push(CheckResult::new(name, failures.is_empty(), detail));
    }
    Ok(checks)
}

fn pairs_for(strategy: Strategy) -> Vec<(CommitValue, CommitValue)> {
    let all = CommitValue::ALL;
    match strategy {
        Strategy::Honest => all.iter().map(|&v| (v, v)).collect(),
        Strategy::Cheat => all.iter().map(|&v| (CommitValue::Bit0, v)).collect(),
        Strategy::Control => all
            .iter()
            .flat_map(|&a| all.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
            .collect(),
    }
}

fn determinism(base: &ExperimentConfig) -> Result<CheckResult> {
    let config = ExperimentConfig {
        strategy: Strategy::Cheat,
        reveal_value: CommitValue::Minus,
        bc_policy: BcPolicy::RandomEntangled,
        ..base.clone()
    };
    let replay = run_trial(&config, 7)? == run_trial(&config, 7)?;
    let serial = run_experiment_with(&config, Execution::Serial, true)?;
    let parallel = run_experiment_with(&config, Execution::Parallel, true)?;
    Ok(CheckResult::new(
        "determinism",
        replay && serial == parallel,
        format!(
            "trial replay {replay}, serial == parallel {}",
            serial == parallel
        ),
    ))
}

/// Runs every check with a small protocol configuration derived from `seed`.
pub fn run_selftest(master_seed: u64) -> Result<Vec<CheckResult>> {
    let base = ExperimentConfig {
        n_pairs: 4,
        trials: 50,
        m_ancillas: 1,
        master_seed,
        ..ExperimentConfig::default()
    };
    let mut checks = vec![
        bell_orthonormality()?,
        flip_identities()?,
        commutation(master_seed)?,
        flip_oracle()?,
    ];
    checks.extend(protocol_sweep(&base)?);
    let hiding = hiding_report(&ExperimentConfig {
        bc_policy: BcPolicy::RandomEntangled,
        ..base.clone()
    })?;
    checks.push(CheckResult::new(
        "hiding",
        hiding.within(EXACT_TOL),
        format!(
            "max trace distance {:.3e}, max marginal deviation {:.3e}",
            hiding.max_distance, hiding.max_marginal_deviation
        ),
    ));
    checks.push(determinism(&base)?);
    Ok(checks)
}
