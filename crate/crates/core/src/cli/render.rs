//! JSON, CSV and text output.
//!
//! Rationals are always written as exact `p/q` strings. Floating-point fields
//! are approximations rounded to 15 significant digits.
//!
//! CSV column orders are fixed:
//!
//! - `exact`: `n,ordered_probability,ordered_probability_approx,final_probability,final_probability_approx,symbolic_equals_closed`
//! - `exact --per-k`: `n,k,symbolic,closed_form,approx,symbolic_equals_closed`
//! - `mc`: `n,trials,seed,workers,feasible_count,estimate,stderr,exact_probability,exact_probability_approx,k_range_violations,predicate_disagreements`
//! - `mc --per-k`: `n,k,count,frequency_approx,exact_probability,exact_probability_approx`
//! - `verify`: `n,exact_final,exact_final_approx,mc_estimate,mc_stderr,symbolic_equals_closed,sum_rule_holds,mc_within_tolerance`

use std::io::Write;

use serde::Serialize;

use super::{CliError, Format, VerifyReport};
use crate::arith::Rational;
use crate::exact::{factorial, polygon_probability, ExactTable};
use crate::mc::McReport;

/// Rounds to 15 significant digits.
pub fn approx(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn approx_of(r: &Rational) -> f64 {
    approx(r.to_f64())
}

const FEASIBILITY_RULE: &str = "every piece strictly below 1/2";
const GENERATOR: &str = "pcg64-xsl-rr-128/64, splitmix64 per-worker seeding";

#[derive(Serialize)]
struct ExactKRow<'a> {
    k: u32,
    symbolic: &'a Rational,
    closed_form: &'a Rational,
    approx: f64,
}

#[derive(Serialize)]
struct ExactOut<'a> {
    n: u32,
    ordered_probability: &'a Rational,
    ordered_probability_approx: f64,
    final_probability: &'a Rational,
    final_probability_approx: f64,
    symbolic_equals_closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_k: Option<Vec<ExactKRow<'a>>>,
}

pub(super) fn exact(
    table: &ExactTable,
    per_k: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = || {
        table.per_k.iter().map(|row| ExactKRow {
            k: row.k,
            symbolic: &row.symbolic,
            closed_form: &row.closed_form,
            approx: approx_of(&row.symbolic),
        })
    };
    let agree = table.symbolic_equals_closed();
    match format {
        Format::Json => {
            let doc = ExactOut {
                n: table.n,
                ordered_probability: &table.ordered_probability,
                ordered_probability_approx: approx_of(&table.ordered_probability),
                final_probability: &table.final_probability,
                final_probability_approx: approx_of(&table.final_probability),
                symbolic_equals_closed: agree,
                per_k: per_k.then(|| rows().collect()),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if per_k {
                w.write_record([
                    "n",
                    "k",
                    "symbolic",
                    "closed_form",
                    "approx",
                    "symbolic_equals_closed",
                ])?;
                for row in rows() {
                    w.write_record([
                        table.n.to_string(),
                        row.k.to_string(),
                        row.symbolic.to_string(),
                        row.closed_form.to_string(),
                        row.approx.to_string(),
                        (row.symbolic == row.closed_form).to_string(),
                    ])?;
                }
            } else {
                w.write_record([
                    "n",
                    "ordered_probability",
                    "ordered_probability_approx",
                    "final_probability",
                    "final_probability_approx",
                    "symbolic_equals_closed",
                ])?;
                w.write_record([
                    table.n.to_string(),
                    table.ordered_probability.to_string(),
                    approx_of(&table.ordered_probability).to_string(),
                    table.final_probability.to_string(),
                    approx_of(&table.final_probability).to_string(),
                    agree.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "n = {}", table.n)?;
            writeln!(
                out,
                "ordered probability  {}  (~{})",
                table.ordered_probability,
                approx_of(&table.ordered_probability)
            )?;
            writeln!(
                out,
                "polygon probability  {}  (~{})",
                table.final_probability,
                approx_of(&table.final_probability)
            )?;
            writeln!(out, "symbolic == closed form: {agree}")?;
            if per_k {
                writeln!(
                    out,
                    "{:>4}  {:>28}  {:>28}  {:>22}",
                    "k", "symbolic", "closed form", "approx"
                )?;
                for row in rows() {
                    writeln!(
                        out,
                        "{:>4}  {:>28}  {:>28}  {:>22}",
                        row.k,
                        row.symbolic.to_string(),
                        row.closed_form.to_string(),
                        row.approx
                    )?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct McKRow {
    k: u32,
    count: u64,
    frequency_approx: f64,
    exact_probability: Rational,
    exact_probability_approx: f64,
}

#[derive(Serialize)]
struct McOut {
    n: u32,
    trials: u64,
    seed: u64,
    workers: u32,
    generator: &'static str,
    feasibility_rule: &'static str,
    feasible_count: u64,
    estimate: f64,
    stderr: f64,
    exact_probability: Rational,
    exact_probability_approx: f64,
    per_k: Vec<McKRow>,
    k_range_violations: u64,
    predicate_disagreements: u64,
}

fn mc_out(report: &McReport) -> McOut {
    let n = report.config.n;
    let n_fact = Rational::from(factorial(n));
    let per_k = (1..n)
        .map(|k| {
            // n! * I_{n,k}: the unconditional probability of the k-th bin
            let exact = crate::exact::closed_form_ink(n, k).expect("k in range") * &n_fact;
            McKRow {
                k,
                count: report.per_k_counts[k as usize - 1],
                frequency_approx: approx(report.per_k_frequency(k)),
                exact_probability_approx: approx_of(&exact),
                exact_probability: exact,
            }
        })
        .collect();
    let exact = polygon_probability(n).expect("validated n");
    McOut {
        n,
        trials: report.config.trials,
        seed: report.config.seed,
        workers: report.config.workers,
        generator: GENERATOR,
        feasibility_rule: FEASIBILITY_RULE,
        feasible_count: report.feasible_count,
        estimate: approx(report.estimate),
        stderr: approx(report.stderr),
        exact_probability_approx: approx_of(&exact),
        exact_probability: exact,
        per_k,
        k_range_violations: report.k_range_violations,
        predicate_disagreements: report.predicate_disagreements,
    }
}

pub(super) fn mc(
    report: &McReport,
    per_k: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = mc_out(report);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if per_k {
                w.write_record([
                    "n",
                    "k",
                    "count",
                    "frequency_approx",
                    "exact_probability",
                    "exact_probability_approx",
                ])?;
                for row in &doc.per_k {
                    w.write_record([
                        doc.n.to_string(),
                        row.k.to_string(),
                        row.count.to_string(),
                        row.frequency_approx.to_string(),
                        row.exact_probability.to_string(),
                        row.exact_probability_approx.to_string(),
                    ])?;
                }
            } else {
                w.write_record([
                    "n",
                    "trials",
                    "seed",
                    "workers",
                    "feasible_count",
                    "estimate",
                    "stderr",
                    "exact_probability",
                    "exact_probability_approx",
                    "k_range_violations",
                    "predicate_disagreements",
                ])?;
                w.write_record([
                    doc.n.to_string(),
                    doc.trials.to_string(),
                    doc.seed.to_string(),
                    doc.workers.to_string(),
                    doc.feasible_count.to_string(),
                    doc.estimate.to_string(),
                    doc.stderr.to_string(),
                    doc.exact_probability.to_string(),
                    doc.exact_probability_approx.to_string(),
                    doc.k_range_violations.to_string(),
                    doc.predicate_disagreements.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "n = {}, trials = {}, seed = {}, workers = {}",
                doc.n, doc.trials, doc.seed, doc.workers
            )?;
            writeln!(out, "generator: {}", doc.generator)?;
            writeln!(out, "feasible when {}", doc.feasibility_rule)?;
            writeln!(out, "feasible trials      {}", doc.feasible_count)?;
            writeln!(
                out,
                "estimate             {} ± {} (stderr)",
                doc.estimate, doc.stderr
            )?;
            writeln!(
                out,
                "exact                {}  (~{})",
                doc.exact_probability, doc.exact_probability_approx
            )?;
            writeln!(
                out,
                "{:>4}  {:>12}  {:>18}  {:>18}",
                "k", "count", "frequency", "exact"
            )?;
            for row in &doc.per_k {
                writeln!(
                    out,
                    "{:>4}  {:>12}  {:>18}  {:>18}",
                    row.k, row.count, row.frequency_approx, row.exact_probability_approx
                )?;
            }
            writeln!(
                out,
                "k-range violations: {}, predicate disagreements: {}",
                doc.k_range_violations, doc.predicate_disagreements
            )?;
        }
    }
    Ok(())
}

pub(super) fn verify(report: &VerifyReport, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "n",
                "exact_final",
                "exact_final_approx",
                "mc_estimate",
                "mc_stderr",
                "symbolic_equals_closed",
                "sum_rule_holds",
                "mc_within_tolerance",
            ])?;
            for r in &report.per_n {
                w.write_record([
                    r.n.to_string(),
                    r.exact_final.to_string(),
                    r.exact_final_approx.to_string(),
                    r.mc_estimate.to_string(),
                    r.mc_stderr.to_string(),
                    r.symbolic_equals_closed.to_string(),
                    r.sum_rule_holds.to_string(),
                    r.mc_within_tolerance.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "n in {}..={}, trials = {}, seed = {}, workers = {}, tolerance = {} stderr",
                report.n_range.0,
                report.n_range.1,
                report.trials,
                report.seed,
                report.workers,
                report.tolerance_sigmas
            )?;
            writeln!(
                out,
                "{:>4}  {:>14}  {:>18}  {:>18}  {:>8}  {:>8}  {:>8}",
                "n", "exact", "mc estimate", "mc stderr", "sym=cf", "sum", "mc"
            )?;
            for r in &report.per_n {
                writeln!(
                    out,
                    "{:>4}  {:>14}  {:>18}  {:>18}  {:>8}  {:>8}  {:>8}",
                    r.n,
                    r.exact_final.to_string(),
                    r.mc_estimate,
                    r.mc_stderr,
                    pass(r.symbolic_equals_closed),
                    pass(r.sum_rule_holds),
                    pass(r.mc_within_tolerance)
                )?;
            }
            writeln!(out, "overall: {}", pass(report.overall_pass))?;
        }
    }
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
