//! Limit-based finite-difference estimator of the specular directional
//! derivative.
//!
//! Works from objective values only. At step size h the estimate is the
//! weighted combination of the forward and backward difference quotients,
//!
//! ```text
//!   (f(x+hv)-f(x))/h * |U|/(|U|+|V|)  +  (f(x)-f(x-hv))/h * |V|/(|U|+|V|)
//! ```
//!
//! with U = (hv, f(x)-f(x-hv)) and V = (hv, f(x+hv)-f(x)) embedded in
//! R^(n+1). The estimator shrinks h geometrically until two successive
//! estimates agree; this is the cross-check for every exact specular
//! derivative in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::oracle::ProblemOracle;

/// Stopping-rule parameters for the h-shrinking iteration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FdConfig {
    /// Initial step.
    pub h0: f64,
    /// Geometric shrink factor in (0, 1).
    pub rho: f64,
    /// Successive-estimate agreement tolerance.
    pub tol: f64,
    /// Maximum number of shrinks before giving up.
    pub max_shrinks: u32,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { h0: 1e-3, rho: 0.5, tol: 1e-8, max_shrinks: 40 }
    }
}

impl FdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return Err(Error::Domain(format!("h0 must be positive, got {}", self.h0)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::Domain(format!("rho must lie in (0,1), got {}", self.rho)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_shrinks == 0 {
            return Err(Error::Domain("max_shrinks must be at least 1".into()));
        }
        Ok(())
    }
}

/// A stabilized finite-difference estimate.
#[derive(Debug, Clone, Copy)]
pub struct FdEstimate {
    pub value: f64,
    /// Number of shrinks performed before stabilizing.
    pub shrinks: u32,
    /// Step size at which the returned estimate was taken.
    pub final_h: f64,
}

fn estimate_at(oracle: &dyn ProblemOracle, x: &Vector, v: &Vector, h: f64) -> Result<f64> {
    let fx = oracle.value(x)?;
    let fp = oracle.value(&x.add_scaled(h, v))?;
    let fm = oracle.value(&x.step(h, v))?;
    let dplus = fp - fx;
    let dminus = fx - fm;
    let hv = h * v.norm();
    let u = (hv * hv + dminus * dminus).sqrt();
    let w = (hv * hv + dplus * dplus).sqrt();
    Ok((dplus * u + dminus * w) / (h * (u + w)))
}

/// Estimate the specular directional derivative of the oracle's objective at
/// `x` along `v` by shrinking h until two successive estimates differ by
/// less than `cfg.tol`. `v = 0` yields 0 by definition.
pub fn specular_directional_fd(
    oracle: &dyn ProblemOracle,
    x: &Vector,
    v: &Vector,
    cfg: &FdConfig,
) -> Result<FdEstimate> {
    cfg.validate()?;
    if x.len() != oracle.dim() || v.len() != oracle.dim() {
        return Err(Error::DimensionMismatch { expected: oracle.dim(), got: x.len().max(v.len()) });
    }
    if v.iter().all(|c| *c == 0.0) {
        return Ok(FdEstimate { value: 0.0, shrinks: 0, final_h: cfg.h0 });
    }
    let mut h = cfg.h0;
    let mut prev = estimate_at(oracle, x, v, h)?;
    for k in 1..=cfg.max_shrinks {
        h *= cfg.rho;
        let cur = estimate_at(oracle, x, v, h)?;
        if (cur - prev).abs() < cfg.tol {
            return Ok(FdEstimate { value: cur, shrinks: k, final_h: h });
        }
        if k == cfg.max_shrinks {
            return Err(Error::FdDidNotConverge { last: cur, previous: prev, shrinks: k });
        }
        prev = cur;
    }
    unreachable!("max_shrinks >= 1 is validated above")
}
