use serde::Serialize;

use super::{CliError, TOLERANCE_SIGMAS};
use crate::arith::Rational;
use crate::exact::exact_table;
use crate::mc::{run_mc, McConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub trials: u64,
    pub seed: u64,
    pub workers: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub n: u32,
    pub exact_final: Rational,
    pub exact_final_approx: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub symbolic_equals_closed: bool,
    pub sum_rule_holds: bool,
    pub mc_within_tolerance: bool,
}

impl VerifyRecord {
    pub fn passed(&self) -> bool {
        self.symbolic_equals_closed && self.sum_rule_holds && self.mc_within_tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n_range: (u32, u32),
    pub trials: u64,
    pub seed: u64,
    pub workers: u32,
    pub tolerance_sigmas: f64,
    pub per_n: Vec<VerifyRecord>,
    pub overall_pass: bool,
}

/// Runs the exact table and a Monte Carlo estimate for every `n` in range.
///
/// Every `n` uses the same seed. A Monte Carlo estimate passes when it lies
/// within [`TOLERANCE_SIGMAS`] of its own standard error of the exact value.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport, CliError> {
    let VerifyConfig {
        n_min,
        n_max,
        trials,
        seed,
        workers,
    } = *config;
    if n_min < 2 || n_min > n_max {
        return Err(CliError::Range { n_min, n_max });
    }
    let mc_configs: Vec<McConfig> = (n_min..=n_max)
        .map(|n| McConfig::new(n, trials, seed).with_workers(workers))
        .collect();
    for c in &mc_configs {
        c.validate()?;
    }

    let mut per_n = Vec::with_capacity(mc_configs.len());
    for mc_config in &mc_configs {
        let table = exact_table(mc_config.n)?;
        let mc = run_mc(mc_config)?;
        let exact = table.final_probability.to_f64();
        per_n.push(VerifyRecord {
            n: mc_config.n,
            exact_final_approx: super::approx(exact),
            exact_final: table.final_probability.clone(),
            mc_estimate: super::approx(mc.estimate),
            mc_stderr: super::approx(mc.stderr),
            symbolic_equals_closed: table.symbolic_equals_closed(),
            sum_rule_holds: table.sum_rule_holds(),
            mc_within_tolerance: (mc.estimate - exact).abs() <= TOLERANCE_SIGMAS * mc.stderr,
        });
    }
    let overall_pass = per_n.iter().all(VerifyRecord::passed);
    Ok(VerifyReport {
        n_range: (n_min, n_max),
        trials,
        seed,
        workers,
        tolerance_sigmas: TOLERANCE_SIGMAS,
        per_n,
        overall_pass,
    })
}
