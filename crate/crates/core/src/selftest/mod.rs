//! The acceptance criteria as a runnable suite, shared by the `acceptance`
//! test target and the `selftest` subcommand.

mod criteria;
pub mod oracles;

use std::fmt;
use std::time::{Duration, Instant};

use crate::knotdata::Atlas;

use criteria::CRITERIA;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub atlas: Atlas,
    /// Caps every `m` range of the lens-space criteria.
    pub m_cap: Option<i64>,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> SelftestConfig {
        SelftestConfig {
            atlas: Atlas::standard(),
            m_cap: None,
            seed: 0x5eed_c0de,
        }
    }
}

impl SelftestConfig {
    /// `1..=full`, shortened by the cap.
    pub(crate) fn m_range(&self, full: i64) -> std::ops::RangeInclusive<i64> {
        1..=self.m_cap.map_or(full, |c| c.min(full))
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub summary: String,
    /// Mismatches and other findings, one per line.
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {:>2} {}: {}",
            self.number, self.title, self.summary
        )
    }
}

/// Outcome of one criterion before timing is attached.
pub(crate) struct Outcome {
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
}

impl Outcome {
    pub fn new(passed: bool, summary: impl Into<String>, details: Vec<String>) -> Outcome {
        Outcome {
            passed,
            summary: summary.into(),
            details,
        }
    }
}

/// Number and title of every criterion, in order.
pub fn criteria() -> Vec<(u8, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1)).collect()
}

pub fn run_one(number: u8, cfg: &SelftestConfig) -> Option<CriterionResult> {
    let (_, title, f) = CRITERIA.iter().find(|c| c.0 == number)?;
    let start = Instant::now();
    let o = match f(cfg) {
        Ok(o) => o,
        Err(e) => Outcome::new(false, format!("error: {e}"), Vec::new()),
    };
    Some(CriterionResult {
        number,
        title,
        passed: o.passed,
        summary: o.summary,
        details: o.details,
        elapsed: start.elapsed(),
    })
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_one(c.0, cfg)).collect()
}
