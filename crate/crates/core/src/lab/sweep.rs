use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::Cell;
use super::{run, CellResult, Claim, Outcome, VerificationReport};
use crate::error::{domain, Result};
use crate::params::{prime_power_decomposition, CodeParams};

pub const DEFAULT_MAX_N: u128 = 10_000_000;
pub const DEFAULT_CELL_TIME_BUDGET_MS: u64 = 300_000;

/// The `(q, m)` cells a sweep covers and its budgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub qs: Vec<u64>,
    pub ms: Vec<u32>,
    /// Cells with a larger `n` are reported as skipped.
    pub max_n: u128,
    /// Wall-clock guard per claim and cell.
    pub cell_time_budget_ms: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            qs: vec![3, 4, 5, 7, 8, 9],
            ms: (2..=7).collect(),
            max_n: DEFAULT_MAX_N,
            cell_time_budget_ms: DEFAULT_CELL_TIME_BUDGET_MS,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.qs.is_empty() || self.ms.is_empty() {
            return Err(domain("grid needs at least one q and one m"));
        }
        if let Some(q) = self.qs.iter().find(|&&q| prime_power_decomposition(q).is_none()) {
            return Err(domain(format!("q must be a prime power (got q = {q})")));
        }
        if let Some(m) = self.ms.iter().find(|&&m| m < 2) {
            return Err(domain(format!("m must be at least 2 (got m = {m})")));
        }
        if self.max_n == 0 || self.cell_time_budget_ms == 0 {
            return Err(domain("budgets must be positive"));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(u64, u32)> {
        let mut qs = self.qs.clone();
        let mut ms = self.ms.clone();
        qs.sort_unstable();
        qs.dedup();
        ms.sort_unstable();
        ms.dedup();
        qs.iter().flat_map(|&q| ms.iter().map(move |&m| (q, m))).collect()
    }
}

/// A sweep's serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub tool: String,
    pub version: String,
    pub grid: GridSpec,
    pub reports: Vec<VerificationReport>,
}

impl SweepDocument {
    pub fn new(grid: GridSpec, reports: Vec<VerificationReport>) -> Self {
        SweepDocument {
            tool: "antiprim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            grid,
            reports,
        }
    }

    /// Zeroes every timing field, for run-to-run comparison.
    pub fn strip_timings(&mut self) {
        for c in self.reports.iter_mut().flat_map(|r| r.cells.iter_mut()) {
            c.wall_ms = 0;
        }
    }

    /// Theorem and lemma cells that failed.
    pub fn failures(&self) -> usize {
        self.reports.iter().map(VerificationReport::failures).sum()
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.reports.iter().map(|r| r.count(outcome)).sum()
    }
}

/// Runs every claim on every grid cell using the global thread pool.
pub fn sweep(grid: &GridSpec, claims: &[&Claim]) -> Result<Vec<VerificationReport>> {
    grid.validate()?;
    let cells = grid.cells();
    let budget = Duration::from_millis(grid.cell_time_budget_ms);
    let per_cell: Vec<Vec<CellResult>> = cells
        .par_iter()
        .map(|&(q, m)| {
            let params = CodeParams::new(q, m).expect("validated grid");
            let too_big = params.n().is_none_or(|n| n > grid.max_n);
            let mut cell = Cell::new(&params);
            claims
                .iter()
                .map(|claim| {
                    if too_big && claim.applies(&params) {
                        skipped(&params, grid.max_n)
                    } else {
                        run(claim, &mut cell, Some(budget))
                    }
                })
                .collect()
        })
        .collect();
    let mut reports: Vec<VerificationReport> = claims
        .iter()
        .enumerate()
        .map(|(i, claim)| VerificationReport {
            claim: claim.id.to_string(),
            kind: claim.kind,
            statement: claim.statement.to_string(),
            cells: per_cell.iter().map(|row| row[i].clone()).collect(),
        })
        .collect();
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(reports)
}

/// As [`sweep`], on a dedicated pool of `jobs` workers (0 = one per core).
pub fn sweep_with_jobs(grid: &GridSpec, claims: &[&Claim], jobs: usize) -> Result<Vec<VerificationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| sweep(grid, claims))
}

fn skipped(params: &CodeParams, max_n: u128) -> CellResult {
    CellResult {
        q: params.q(),
        m: params.m(),
        n: params.n_big().to_string(),
        outcome: Outcome::SkippedBudget,
        counterexamples: Vec::new(),
        note: Some(format!("n exceeds max_n = {max_n}")),
        wall_ms: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::claim;

    fn grid(qs: &[u64], ms: &[u32]) -> GridSpec {
        GridSpec {
            qs: qs.to_vec(),
            ms: ms.to_vec(),
            ..GridSpec::default()
        }
    }

    #[test]
    fn empty_claim_list() {
        assert!(sweep(&GridSpec::default(), &[]).unwrap().is_empty());
    }

    #[test]
    fn two_claims_one_cell() {
        let claims = [claim("T12").unwrap(), claim("T10").unwrap()];
        let reports = sweep(&grid(&[3], &[5]), &claims).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].claim, "T10");
        for r in &reports {
            assert_eq!(r.cells.len(), 1);
            assert_eq!(r.cells[0].outcome, Outcome::Pass, "{r:?}");
        }
    }

    #[test]
    fn oversized_cells_are_skipped() {
        let mut g = grid(&[3], &[5, 7]);
        g.max_n = 1000;
        let reports = sweep(&g, &[claim("T10").unwrap()]).unwrap();
        let outcomes: Vec<_> = reports[0].cells.iter().map(|c| c.outcome).collect();
        assert_eq!(outcomes, vec![Outcome::Pass, Outcome::SkippedBudget]);
    }

    #[test]
    fn invalid_grids() {
        assert!(grid(&[6], &[3]).validate().is_err());
        assert!(grid(&[], &[3]).validate().is_err());
        assert!(grid(&[3], &[1]).validate().is_err());
    }

    #[test]
    fn cells_sorted_regardless_of_input_order() {
        let reports = sweep(&grid(&[5, 3], &[3, 2]), &[claim("LCD").unwrap()]).unwrap();
        let cells: Vec<_> = reports[0].cells.iter().map(|c| (c.q, c.m)).collect();
        assert_eq!(cells, vec![(3, 2), (3, 3), (5, 2), (5, 3)]);
    }
}
