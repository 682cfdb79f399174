use std::path::PathBuf;

use flp_core::{ConvergencePolicy, Error, Family, Registry, Result, TruthValue};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Approx,
}

/// Settings shared by every command, checked by [`RunConfig::validate`]
/// before anything runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub program: PathBuf,
    /// Family for connectives written without a tag.
    pub family: String,
    pub mode: ArithmeticMode,
    #[serde(serialize_with = "as_string")]
    pub epsilon: Option<TruthValue>,
    pub grid: Option<u32>,
    pub max_iterations: usize,
    pub trace: bool,
    pub format: Format,
    pub partition: Option<String>,
}

fn as_string<S: serde::Serializer>(v: &Option<TruthValue>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub const DEFAULT_EPSILON: (i64, i64) = (1, 1_000_000);
pub const DEFAULT_GRID: u32 = 10;

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.epsilon.is_some() && self.mode == ArithmeticMode::Exact {
            return invalid("--epsilon needs --mode approx");
        }
        if let Some(e) = &self.epsilon {
            if e.is_zero() {
                return invalid("--epsilon must be positive");
            }
        }
        if self.grid == Some(0) {
            return invalid("--grid must be at least 1");
        }
        if self.max_iterations == 0 {
            return invalid("--max-iters must be at least 1");
        }
        if self.partition.is_some() && !matches!(self.command.as_str(), "strata" | "stable") {
            return invalid("--partition applies to strata and stable");
        }
        Registry::builtin().family(&self.family)?;
        Ok(())
    }

    pub fn default_family(&self, registry: &Registry) -> Result<Family> {
        registry.family(&self.family)
    }

    pub fn grid_or_default(&self) -> u32 {
        self.grid.unwrap_or(DEFAULT_GRID)
    }

    pub fn policy(&self) -> Result<ConvergencePolicy> {
        let base = match self.mode {
            ArithmeticMode::Exact => ConvergencePolicy::exact(),
            ArithmeticMode::Approx => {
                let (n, d) = DEFAULT_EPSILON;
                ConvergencePolicy::epsilon(self.epsilon.clone().unwrap_or_else(|| TruthValue::ratio(n, d)))?
            }
        };
        Ok(base.with_max_iterations(self.max_iterations)?.with_trace(self.trace))
    }
}
