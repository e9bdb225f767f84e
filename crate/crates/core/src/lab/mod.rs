//! Every claim about coset leaders, ladders and dimensions as an executable
//! check against the residue oracle, plus a grid sweeper.
//!
//! Theorem and lemma checks yield `pass`/`fail`; conjecture probes yield
//! `consistent`/`counterexample` and never count as failures.

mod checks;
mod sweep;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::params::CodeParams;

pub use sweep::{sweep, sweep_with_jobs, GridSpec, SweepDocument, DEFAULT_CELL_TIME_BUDGET_MS, DEFAULT_MAX_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Theorem,
    Lemma,
    Conjecture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Consistent,
    Counterexample,
    Inapplicable,
    SkippedBudget,
}

impl Outcome {
    /// A theorem or lemma check that did not hold.
    pub fn is_failure(self) -> bool {
        self == Outcome::Fail
    }
}

/// A reproducible disagreement between a claim and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub q: u64,
    pub m: u32,
    /// The failing `x`, `δ`, rank or shift, depending on the claim.
    pub witness: u128,
    pub expected: String,
    pub observed: String,
}

/// Outcome of one claim on one `(q, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub q: u64,
    pub m: u32,
    pub n: String,
    pub outcome: Outcome,
    /// Smallest witnesses first, at most [`MAX_COUNTEREXAMPLES`].
    pub counterexamples: Vec<Counterexample>,
    pub note: Option<String>,
    pub wall_ms: u64,
}

/// One claim across a grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub kind: ClaimKind,
    pub statement: String,
    pub cells: Vec<CellResult>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_failure()).count()
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.cells.iter().filter(|c| c.outcome == outcome).count()
    }
}

pub const MAX_COUNTEREXAMPLES: usize = 16;

/// A registered claim.
pub struct Claim {
    pub id: &'static str,
    pub kind: ClaimKind,
    pub statement: &'static str,
    applies: fn(&CodeParams) -> bool,
    check: fn(&mut checks::Cell) -> checks::CheckResult,
}

impl Claim {
    pub fn applies(&self, params: &CodeParams) -> bool {
        (self.applies)(params)
    }
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .finish()
    }
}

/// All registered claims, sorted by id.
pub fn registry() -> &'static [Claim] {
    checks::REGISTRY
}

pub fn claim(id: &str) -> Option<&'static Claim> {
    registry().iter().find(|c| c.id.eq_ignore_ascii_case(id))
}

pub fn claim_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

/// Runs one claim on one parameter set with no time limit.
pub fn verify_claim(claim: &Claim, params: &CodeParams) -> CellResult {
    let mut cell = checks::Cell::new(params);
    run(claim, &mut cell, None)
}

pub(crate) fn run(claim: &Claim, cell: &mut checks::Cell, budget: Option<Duration>) -> CellResult {
    let params = cell.params().clone();
    let start = Instant::now();
    let mut result = CellResult {
        q: params.q(),
        m: params.m(),
        n: params.n_big().to_string(),
        outcome: Outcome::Inapplicable,
        counterexamples: Vec::new(),
        note: None,
        wall_ms: 0,
    };
    if !claim.applies(&params) {
        return result;
    }
    cell.set_deadline(budget.map(|b| start + b));
    let conjecture = claim.kind == ClaimKind::Conjecture;
    match (claim.check)(cell) {
        Ok(mut finding) => {
            finding.counterexamples.sort_by_key(|c| c.witness);
            let total = finding.counterexamples.len();
            finding.counterexamples.truncate(MAX_COUNTEREXAMPLES);
            result.outcome = match (total == 0, conjecture) {
                (true, false) => Outcome::Pass,
                (false, false) => Outcome::Fail,
                (true, true) => Outcome::Consistent,
                (false, true) => Outcome::Counterexample,
            };
            if total > MAX_COUNTEREXAMPLES {
                let more = format!("{total} counterexamples, first {MAX_COUNTEREXAMPLES} listed");
                finding.note = Some(match finding.note {
                    Some(n) => format!("{n}; {more}"),
                    None => more,
                });
            }
            result.counterexamples = finding.counterexamples;
            result.note = finding.note;
        }
        Err(checks::Abort::Budget(why)) => {
            result.outcome = Outcome::SkippedBudget;
            result.note = Some(why);
        }
        Err(checks::Abort::Error(e)) => {
            // A closed form that cannot be evaluated (inexact quotient,
            // negative difference) is itself a refutation.
            result.outcome = if conjecture { Outcome::Counterexample } else { Outcome::Fail };
            result.note = Some(e.to_string());
        }
    }
    result.wall_ms = start.elapsed().as_millis() as u64;
    result
}
