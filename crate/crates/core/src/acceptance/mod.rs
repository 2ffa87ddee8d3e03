//! The cross-validation suite: one runnable criterion per headline
//! property, used by the `succinct oracle` subcommand and the acceptance
//! integration test.

use std::fmt;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:2} [{}] {} ({:.2}s): {}",
            self.id,
            if self.pass { "pass" } else { "FAIL" },
            self.name,
            self.seconds,
            self.details
        )
    }
}

pub const NUM_CRITERIA: usize = 13;

/// Run one criterion by id (1-based).
pub fn run_criterion(id: usize, seed: u64) -> CriterionReport {
    let started = std::time::Instant::now();
    let (name, result) = dispatch(id, seed);
    let (pass, details) = result;
    CriterionReport { id, name, pass, details, seconds: started.elapsed().as_secs_f64() }
}

/// Run the whole suite.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=NUM_CRITERIA).map(|id| run_criterion(id, seed)).collect()
}

fn dispatch(id: usize, seed: u64) -> (&'static str, (bool, String)) {
    match id {
        1 => ("qbf bounded-model soundness", criteria::qbf_soundness(seed)),
        2 => ("hard validity family", criteria::hard_family()),
        3 => ("next-state satisfiability scan", criteria::sat_scan()),
        4 => ("time/action and next-action scans", criteria::action_scans()),
        5 => ("unique-plan instance", criteria::unique_plan()),
        6 => ("planning instance from qbf", criteria::qbf_instance(seed)),
        7 => ("conversion lattice", criteria::conversions(seed)),
        8 => ("streaming verification", criteria::streaming()),
        9 => ("ltl evaluator vs naive recursion", criteria::ltl_evaluator(seed)),
        10 => ("counting formula and lexicographic models", criteria::counting(seed)),
        11 => ("qbf-to-ltl ladder", criteria::ladder(seed)),
        12 => ("lasso model search", criteria::model_search(seed)),
        13 => ("unique-model embeddings", criteria::embeddings(seed)),
        _ => ("unknown", (false, format!("no criterion {id}"))),
    }
}

mod criteria;
