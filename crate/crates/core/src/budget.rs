//! Enumeration and loop caps shared by every module.
//!
//! Library operations enforce the default caps below. A [`Budget`] carries a
//! possibly lowered copy of them for callers (the CLI, the randomized suites)
//! that honour `RECIPRO_MAX_BUDGET`.

use crate::{Error, Result};

/// Largest group order any operation will enumerate element by element.
pub const GROUP_ENUMERATION_CAP: u64 = 1 << 22;
/// Largest group order for the `2g in Gamma` counting path.
pub const QUOTIENT_ENUMERATION_CAP: u64 = 1 << 18;
/// Largest `p * q` for the streamed transversal product.
pub const PIPELINE_PQ_CAP: u64 = 1 << 21;
/// Largest `p * q` for which the transversal is materialized.
pub const TRANSVERSAL_PQ_CAP: u64 = 200_000;
/// Longest running-product loop in factorial computations.
pub const FACTORIAL_LOOP_CAP: u64 = 10_000_000;
/// Largest prime for the square-enumeration Legendre oracle.
pub const SQUARE_ORACLE_CAP: u64 = 100_000;

/// Environment variable that may lower, never raise, every cap.
pub const BUDGET_ENV: &str = "RECIPRO_MAX_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub group_enumeration: u64,
    pub quotient_enumeration: u64,
    pub pipeline_pq: u64,
    pub transversal_pq: u64,
    pub factorial_loop: u64,
    pub square_oracle: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            group_enumeration: GROUP_ENUMERATION_CAP,
            quotient_enumeration: QUOTIENT_ENUMERATION_CAP,
            pipeline_pq: PIPELINE_PQ_CAP,
            transversal_pq: TRANSVERSAL_PQ_CAP,
            factorial_loop: FACTORIAL_LOOP_CAP,
            square_oracle: SQUARE_ORACLE_CAP,
        }
    }
}

impl Budget {
    /// Clamps every cap to at most `limit`.
    pub fn lowered_to(self, limit: u64) -> Self {
        Budget {
            group_enumeration: self.group_enumeration.min(limit),
            quotient_enumeration: self.quotient_enumeration.min(limit),
            pipeline_pq: self.pipeline_pq.min(limit),
            transversal_pq: self.transversal_pq.min(limit),
            factorial_loop: self.factorial_loop.min(limit),
            square_oracle: self.square_oracle.min(limit),
        }
    }

    /// Parses the raw value of [`BUDGET_ENV`]; `None` means unset.
    pub fn from_env_value(value: Option<&str>) -> Result<Self> {
        match value {
            None => Ok(Budget::default()),
            Some(raw) => {
                let limit: u64 = raw.trim().parse().map_err(|_| {
                    Error::domain(format!(
                        "{BUDGET_ENV} must be a nonnegative integer, got {raw:?}"
                    ))
                })?;
                Ok(Budget::default().lowered_to(limit))
            }
        }
    }

    pub fn from_env() -> Result<Self> {
        let value = std::env::var(BUDGET_ENV).ok();
        Budget::from_env_value(value.as_deref())
    }
}
