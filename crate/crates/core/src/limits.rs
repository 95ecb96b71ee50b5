//! Size caps that keep vertex/halfspace conversion tractable.

use crate::error::{Error, Result};
use crate::formula::Formula;

/// Environment variable that raises both dimension caps.
pub const MAX_DIM_ENV: &str = "COH_MAX_DIM";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Events per query, i.e. the dimension of coherent sets.
    pub max_events: usize,
    /// Variables inside events.
    pub max_vars: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_events: 6,
            max_vars: 4,
            max_depth: 12,
        }
    }
}

impl Limits {
    /// No caps at all. Runtime and memory grow very quickly with dimension.
    pub fn unbounded() -> Self {
        Limits {
            max_events: usize::MAX,
            max_vars: usize::MAX,
            max_depth: usize::MAX,
        }
    }

    /// Defaults, with `COH_MAX_DIM` overriding both dimension caps.
    pub fn from_env() -> Result<Self> {
        let mut l = Self::default();
        if let Ok(v) = std::env::var(MAX_DIM_ENV) {
            let n: usize = v.trim().parse().map_err(|_| Error::InvalidLimit(v.clone()))?;
            l.max_events = n;
            l.max_vars = n;
        }
        Ok(l)
    }

    pub fn check_events(&self, k: usize) -> Result<()> {
        if k > self.max_events {
            return Err(Error::DimensionCap {
                dim: k,
                cap: self.max_events,
            });
        }
        Ok(())
    }

    pub fn check_vars(&self, n: usize) -> Result<()> {
        if n > self.max_vars {
            return Err(Error::DimensionCap {
                dim: n,
                cap: self.max_vars,
            });
        }
        Ok(())
    }

    pub fn check_depth<A>(&self, f: &Formula<A>) -> Result<()> {
        let depth = f.depth();
        if depth > self.max_depth {
            return Err(Error::DepthCap {
                depth,
                cap: self.max_depth,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_event;

    #[test]
    fn caps() {
        let l = Limits::default();
        assert!(l.check_events(6).is_ok());
        assert_eq!(l.check_events(7), Err(Error::DimensionCap { dim: 7, cap: 6 }));
        assert!(l.check_vars(5).is_err());
        let deep = parse_event(&format!("{}x", "~".repeat(13))).unwrap();
        assert_eq!(l.check_depth(&deep), Err(Error::DepthCap { depth: 13, cap: 12 }));
    }
}
