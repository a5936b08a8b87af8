use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::selftest::CheckResult;
use super::{
    AcceptanceMatrix, DetectionStats, ExperimentConfig, HarnessError, HidingReport, Result,
};
use crate::protocol::CommitValue;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Everything one CLI invocation produces.
///
/// Contains no timings or other run-dependent data, so identical configs
/// render to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub stats: Option<DetectionStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<AcceptanceMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hiding: Option<HidingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selftest: Option<Vec<CheckResult>>,
    /// Whether every assertion attached to this report held.
    pub passed: bool,
    pub version: &'static str,
}

impl Report {
    fn empty(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            stats: None,
            matrix: None,
            hiding: None,
            selftest: None,
            passed: false,
            version: REPORT_VERSION,
        }
    }

    pub fn for_run(config: &ExperimentConfig, stats: DetectionStats) -> Self {
        let passed = stats.meets(config.strategy.expectation(), config.tolerance);
        Self {
            stats: Some(stats),
            passed,
            ..Self::empty(config)
        }
    }

    pub fn for_matrix(config: &ExperimentConfig, matrix: AcceptanceMatrix) -> Self {
        Self {
            passed: matrix.all_passed(),
            matrix: Some(matrix),
            ..Self::empty(config)
        }
    }

    /// Hiding holds when every distance and marginal deviation is within
    /// `1e-12`.
    pub fn for_hiding(config: &ExperimentConfig, hiding: HidingReport) -> Self {
        Self {
            passed: hiding.within(crate::qcore::EXACT_TOL),
            hiding: Some(hiding),
            ..Self::empty(config)
        }
    }

    pub fn for_selftest(config: &ExperimentConfig, checks: Vec<CheckResult>) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            selftest: Some(checks),
            ..Self::empty(config)
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self)
                .map(|mut s| {
                    s.push('\n');
                    s
                })
                .map_err(|e| HarnessError::Serialize(e.to_string())),
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Text => Ok(self.render_text()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| HarnessError::Serialize(e.to_string());
        let c = &self.config;
        if let Some(stats) = &self.stats {
            w.write_record(RATE_HEADER).map_err(err)?;
            w.write_record(rate_row(
                c.strategy.name(),
                c.commit_value,
                c.reveal_value,
                c,
                stats,
            ))
            .map_err(err)?;
        }
        if let Some(matrix) = &self.matrix {
            w.write_record(RATE_HEADER).map_err(err)?;
            for cell in &matrix.cells {
                w.write_record(rate_row(
                    cell.strategy.name(),
                    cell.commit,
                    cell.reveal,
                    c,
                    &cell.stats,
                ))
                .map_err(err)?;
            }
        }
        if let Some(h) = &self.hiding {
            w.write_record([
                "value_a",
                "value_b",
                "policy",
                "distance_before_ops",
                "distance_after_ops",
            ])
            .map_err(err)?;
            for (i, a) in h.values.iter().enumerate() {
                for (j, b) in h.values.iter().enumerate() {
                    w.write_record([
                        a.name().to_string(),
                        b.name().to_string(),
                        h.bc_policy.name().to_string(),
                        h.before_ops[i][j].to_string(),
                        h.after_ops[i][j].to_string(),
                    ])
                    .map_err(err)?;
                }
            }
        }
        if let Some(checks) = &self.selftest {
            w.write_record(["check", "passed", "detail"]).map_err(err)?;
            for check in checks {
                w.write_record([
                    check.name.as_str(),
                    if check.passed { "true" } else { "false" },
                    &check.detail,
                ])
                .map_err(err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HarnessError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Serialize(e.to_string()))
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        if let Some(s) = &self.stats {
            let _ = writeln!(
                out,
                "strategy {}  commit {}  reveal {}  policy {}",
                c.strategy, c.commit_value, c.reveal_value, c.bc_policy
            );
            let _ = writeln!(
                out,
                "pairs {}  ancillas {}  trials {}  seed {}",
                c.n_pairs, c.m_ancillas, c.trials, c.master_seed
            );
            let _ = writeln!(
                out,
                "accepted {}/{}  rate {:.6}",
                s.accepts, s.trials, s.acceptance_rate
            );
            let _ = writeln!(
                out,
                "per-pair match probability  min {:.12}  max {:.12}",
                s.min_match_probability, s.max_match_probability
            );
        }
        if let Some(m) = &self.matrix {
            let _ = writeln!(
                out,
                "acceptance matrix  pairs {}  ancillas {}  policy {}  trials {}  seed {}",
                m.n_pairs, m.m_ancillas, m.bc_policy, m.trials, c.master_seed
            );
            let _ = writeln!(out, "{:<22}{}", "", header());
            let _ = writeln!(out, "{:<22}{}", "cheat (from bit0)", rates(&m.cheat_row));
            for (i, row) in m.honest_table.iter().enumerate() {
                let label = format!("commit {}", CommitValue::ALL[i]);
                let _ = writeln!(out, "{label:<22}{}", rates(row));
            }
            let _ = writeln!(
                out,
                "diagonal: honest reveal; off-diagonal: control (wrong label, no flip)"
            );
        }
        if let Some(h) = &self.hiding {
            let _ = writeln!(
                out,
                "hiding  pairs {}  ancillas {}  policy {}  trials {}",
                h.n_pairs, h.m_ancillas, h.bc_policy, h.trials
            );
            let _ = writeln!(
                out,
                "trace distance of C-side states after receiver operations"
            );
            let _ = writeln!(out, "{:<22}{}", "", header());
            for (i, row) in h.after_ops.iter().enumerate() {
                let cells: String = row.iter().map(|d| format!("{d:>10.2e}")).collect();
                let _ = writeln!(out, "{:<22}{cells}", CommitValue::ALL[i].name());
            }
            let _ = writeln!(
                out,
                "max distance {:.3e}  max deviation of C marginal from I/2 {:.3e}",
                h.max_distance, h.max_marginal_deviation
            );
        }
        if let Some(checks) = &self.selftest {
            for check in checks {
                let _ = writeln!(
                    out,
                    "[{}] {}: {}",
                    verdict(check.passed),
                    check.name,
                    check.detail
                );
            }
        }
        let _ = writeln!(out, "result: {}", verdict(self.passed));
        out
    }
}

const RATE_HEADER: [&str; 9] = [
    "strategy",
    "commit",
    "reveal",
    "policy",
    "pairs",
    "ancillas",
    "trials",
    "accepts",
    "acceptance_rate",
];

fn rate_row(
    strategy: &str,
    commit: CommitValue,
    reveal: CommitValue,
    config: &ExperimentConfig,
    stats: &DetectionStats,
) -> [String; 9] {
    [
        strategy.to_string(),
        commit.name().to_string(),
        reveal.name().to_string(),
        config.bc_policy.name().to_string(),
        config.n_pairs.to_string(),
        config.m_ancillas.to_string(),
        stats.trials.to_string(),
        stats.accepts.to_string(),
        stats.acceptance_rate.to_string(),
    ]
}

fn header() -> String {
    CommitValue::ALL
        .iter()
        .map(|v| format!("{:>10}", v.name()))
        .collect()
}

fn rates(row: &[f64; 4]) -> String {
    row.iter().map(|r| format!("{r:>10.4}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, Strategy};

    #[test]
    fn run_report_formats() {
        let config = ExperimentConfig {
            strategy: Strategy::Cheat,
            reveal_value: CommitValue::Minus,
            trials: 10,
            ..ExperimentConfig::default()
        };
        let report = Report::for_run(&config, run_experiment(&config).unwrap());
        assert!(report.passed);

        let json: serde_json::Value =
            serde_json::from_str(&report.render(OutputFormat::Json).unwrap()).unwrap();
        assert_eq!(json["config"]["strategy"], "cheat");
        assert_eq!(json["stats"]["acceptance_rate"], 1.0);
        assert_eq!(json["version"], REPORT_VERSION);
        assert!(json.get("matrix").is_none());

        let csv = report.render(OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], RATE_HEADER.join(","));
        assert_eq!(lines[1], "cheat,bit0,minus,none,8,0,10,10,1");

        let text = report.render(OutputFormat::Text).unwrap();
        assert!(text.contains("accepted 10/10"));
        assert!(text.ends_with("result: PASS\n"));
    }

    #[test]
    fn unmet_expectation_fails_the_report() {
        let config = ExperimentConfig {
            strategy: Strategy::Cheat,
            reveal_value: CommitValue::Plus,
            trials: 4,
            ..ExperimentConfig::default()
        };
        let stats = DetectionStats {
            trials: 4,
            accepts: 3,
            acceptance_rate: 0.75,
            min_match_probability: 0.0,
            max_match_probability: 1.0,
            per_trial_outcomes: None,
        };
        let report = Report::for_run(&config, stats);
        assert!(!report.passed);
        assert!(report
            .render(OutputFormat::Text)
            .unwrap()
            .ends_with("result: FAIL\n"));
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("yaml".parse::<OutputFormat>().is_err());
    }
}
