use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default cap on the estimated element operations of a single scan.
pub const DEFAULT_BUDGET: u64 = 5_000_000_000;

/// Cost guard for the exhaustive scans.
///
/// Each guarded operation estimates its cost up front and refuses to run when
/// the estimate exceeds `limit`. Accepted estimates accumulate in `spent`, which
/// the reports echo back; since they are estimates rather than timings they are
/// reproducible across runs.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    spent: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            spent: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn spent(&self) -> u64 {
        self.spent.load(Ordering::Relaxed)
    }

    pub fn fits(&self, estimate: u64) -> bool {
        estimate <= self.limit
    }

    pub fn charge(&self, what: &str, estimate: u64) -> Result<()> {
        if !self.fits(estimate) {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                estimate,
                limit: self.limit,
            });
        }
        self.spent.fetch_add(estimate, Ordering::Relaxed);
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
