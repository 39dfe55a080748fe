use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stiffness values searched by leave-one-out tuning.
pub const DEFAULT_NU_GRID: [f64; 11] = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0];

/// KDTW kernel parameters.
///
/// `nu` scales the local weights `exp(-nu * d^2)`. The optional corridor
/// gates cells `(i, j)` with `|i - j| > corridor_radius` out of every
/// recursion; without it all cells are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    nu: f64,
    corridor_radius: Option<usize>,
}

impl KernelParams {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stiffness must be a strictly positive finite real, got {nu}"
            )));
        }
        Ok(Self {
            nu,
            corridor_radius: None,
        })
    }

    pub fn with_corridor(mut self, radius: usize) -> Self {
        self.corridor_radius = Some(radius);
        self
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn corridor_radius(&self) -> Option<usize> {
        self.corridor_radius
    }

    /// Corridor gate on 1-based cell coordinates.
    #[inline]
    pub fn admits(&self, i: usize, j: usize) -> bool {
        match self.corridor_radius {
            None => true,
            Some(r) => i.abs_diff(j) <= r,
        }
    }

    /// Checks that a `p x q` alignment can reach its end cell.
    pub fn check_feasible(&self, p: usize, q: usize) -> Result<()> {
        match self.corridor_radius {
            Some(radius) if p.abs_diff(q) > radius => {
                Err(Error::InfeasibleCorridor { radius, p, q })
            }
            _ => Ok(()),
        }
    }
}
