use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{CrispError, Result};

/// Bounds for refutation searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_rank: usize,
    pub max_degree: u32,
    pub max_candidates: usize,
    pub time_limit_ms: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_rank: 3,
            max_degree: 3,
            max_candidates: 500,
            time_limit_ms: 30_000,
        }
    }
}

impl SearchBudget {
    pub fn new(max_rank: usize, max_degree: u32, max_candidates: usize, time_limit_ms: u64) -> Result<Self> {
        if max_rank == 0 || max_degree == 0 || max_candidates == 0 || time_limit_ms == 0 {
            return Err(CrispError::InvalidBudget("budget bounds must be positive".into()));
        }
        Ok(SearchBudget {
            max_rank,
            max_degree,
            max_candidates,
            time_limit_ms,
        })
    }

    pub fn deadline(&self) -> Deadline {
        Deadline {
            end: Instant::now() + Duration::from_millis(self.time_limit_ms),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    end: Instant,
}

impl Deadline {
    pub fn passed(&self) -> bool {
        Instant::now() >= self.end
    }
}
