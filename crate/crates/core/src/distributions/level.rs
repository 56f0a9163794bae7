use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A probability level `p` in `(0, 1)` carried together with its complement
/// `q = 1 - p`, so that levels deep in the upper tail (where `1 - p` is not
/// representable as `p`) keep full precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    p: f64,
    q: f64,
}

impl Level {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Level { p, q: 1.0 - p })
        } else {
            Err(Error::domain(format!("probability level {p} outside (0, 1)")))
        }
    }

    /// The level whose complement is `q`, i.e. `p = 1 - q`.
    pub fn upper(q: f64) -> Result<Self> {
        Level::new(q).map(Level::mirror)
    }

    pub fn half() -> Self {
        Level { p: 0.5, q: 0.5 }
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn q(self) -> f64 {
        self.q
    }

    /// The level `1 - p`.
    pub fn mirror(self) -> Self {
        Level {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_lower(self) -> bool {
        self.p <= self.q
    }

    /// `ln p`, accurate also when `p` is close to one.
    pub fn ln_p(self) -> f64 {
        if self.p < 0.5 {
            self.p.ln()
        } else {
            (-self.q).ln_1p()
        }
    }

    /// `ln(1 - p)`, accurate also when `p` is tiny.
    pub fn ln_q(self) -> f64 {
        if self.q < 0.5 {
            self.q.ln()
        } else {
            (-self.p).ln_1p()
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_lower() || self.q > 1e-6 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "1-{:e}", self.q)
        }
    }
}
