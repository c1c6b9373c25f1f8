//! Work caps that turn accidental paper-scale runs into errors.

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Default number of subspaces a single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 20_000_000;
/// Default number of replacements a single peeling run may perform.
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;
/// Vertex cap for exhaustive clique search. Not configurable.
pub const ORACLE_VERTEX_CAP: u64 = 1000;

/// Name of the environment variable overriding the enumeration cap.
pub const BUDGET_ENV: &str = "QPEEL_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub enumeration_cap: u64,
    pub step_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            step_cap: DEFAULT_STEP_CAP,
        }
    }
}

impl Budget {
    /// Defaults, with the enumeration cap taken from `QPEEL_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Budget::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            b.enumeration_cap = raw
                .trim()
                .parse()
                .map_err(|_| Error::pre(format!("{BUDGET_ENV}={raw:?} is not an integer")))?;
        }
        Ok(b)
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }

    /// Fails when `needed` items exceed the enumeration cap.
    pub fn admit(&self, what: &str, needed: &BigInt) -> Result<()> {
        if *needed > BigInt::from(self.enumeration_cap) {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed: needed.to_string(),
                cap: self.enumeration_cap,
            });
        }
        Ok(())
    }
}
