use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::is_prime;
use crate::monomial::{MonomialOrder, MAX_VARS};

pub const DEFAULT_CHARACTERISTIC: u32 = 32003;

/// `K[x_{ij} : i ∈ [m], j ∈ [n]]` plus `extra` auxiliary variables after the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingContext {
    pub m: u32,
    pub n: u32,
    pub extra: u32,
    pub characteristic: u32,
    pub order: MonomialOrder,
}

impl RingContext {
    pub fn new(m: u32, n: u32, characteristic: u32) -> Result<Self> {
        let ring = RingContext { m, n, extra: 0, characteristic, order: MonomialOrder::Degrevlex };
        ring.validate()?;
        Ok(ring)
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_extra(mut self, extra: u32) -> Result<Self> {
        self.extra = extra;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.characteristic) {
            return Err(AlgebraError::UnsupportedCharacteristic(self.characteristic));
        }
        if self.nvars() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables { got: self.nvars(), max: MAX_VARS });
        }
        Ok(())
    }

    pub fn grid_vars(&self) -> usize {
        (self.m * self.n) as usize
    }

    pub fn nvars(&self) -> usize {
        self.grid_vars() + self.extra as usize
    }

    /// Index of `x_{ij}`, one-based `i` and `j`.
    pub fn var(&self, i: u32, j: u32) -> usize {
        debug_assert!((1..=self.m).contains(&i) && (1..=self.n).contains(&j));
        ((i - 1) * self.n + (j - 1)) as usize
    }

    pub fn var_name(&self, idx: usize) -> String {
        if idx < self.grid_vars() {
            let (i, j) = (idx as u32 / self.n + 1, idx as u32 % self.n + 1);
            format!("x[{i},{j}]")
        } else {
            format!("t[{}]", idx - self.grid_vars() + 1)
        }
    }

    /// Row and column of a grid variable, for the `Z^m × Z^n` grading.
    pub fn row_col(&self, idx: usize) -> Option<(u32, u32)> {
        (idx < self.grid_vars()).then(|| (idx as u32 / self.n, idx as u32 % self.n))
    }

    /// The same grid without auxiliary variables, in the given order.
    pub fn base(&self) -> RingContext {
        RingContext { extra: 0, ..*self }
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x; {}x{}", self.characteristic, self.m, self.n)?;
        if self.extra > 0 {
            write!(f, " + {}", self.extra)?;
        }
        write!(f, "], {}", self.order)
    }
}
