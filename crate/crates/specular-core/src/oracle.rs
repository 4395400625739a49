//! Problem oracles and specular-gradient assembly.
//!
//! A [`ProblemOracle`] exposes objective values and, when available, exact
//! one-sided partial derivatives, optionally split into `m` averaged
//! component functions for the stochastic methods. The specular gradient is
//! the vector of per-coordinate specular partial derivatives.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::specular::{angular_mean, OneSidedSlopes};

/// What an oracle can do. `exact_one_sided` oracles also evaluate values;
/// `value_only` oracles support nothing but evaluation (finite differences
/// are still applicable to them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub exact_one_sided: bool,
    pub value_only: bool,
}

impl Capabilities {
    pub fn exact() -> Self {
        Self { exact_one_sided: true, value_only: false }
    }

    pub fn value_only() -> Self {
        Self { exact_one_sided: false, value_only: true }
    }
}

/// Exact one-sided partial derivatives along every coordinate direction:
/// `plus[i]` and `minus[i]` are the forward and backward slopes along e_i.
#[derive(Debug, Clone)]
pub struct OneSidedGradient {
    pub plus: Vector,
    pub minus: Vector,
}

/// How a specular gradient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientSource {
    Exact,
    FiniteDifference,
}

/// The specular gradient of an objective at a point.
#[derive(Debug, Clone)]
pub struct SpecularGradient {
    pub g: Vector,
    pub at: Vector,
    pub source: GradientSource,
}

/// An objective with optional exact one-sided derivative information and an
/// optional finite-sum component structure `f = (1/m) sum_j f_j`.
///
/// Oracles are immutable after construction; every method is read-only and
/// safe to call from multiple threads.
pub trait ProblemOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn capabilities(&self) -> Capabilities;

    /// Objective value. Available for every bundled oracle.
    fn value(&self, x: &Vector) -> Result<f64>;

    /// Exact one-sided partials along all coordinate directions at once.
    fn one_sided_gradient(&self, x: &Vector) -> Result<OneSidedGradient> {
        let _ = x;
        Err(Error::Unsupported { operation: "exact one-sided partials" })
    }

    /// Exact one-sided partials along a single coordinate direction.
    fn one_sided_partial(&self, x: &Vector, i: usize) -> Result<OneSidedSlopes> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, len: self.dim() });
        }
        let g = self.one_sided_gradient(x)?;
        OneSidedSlopes::new(g.plus[i], g.minus[i])
    }

    /// Exact one-sided directional derivatives along an arbitrary direction.
    fn one_sided_directional(&self, x: &Vector, v: &Vector) -> Result<OneSidedSlopes> {
        let _ = (x, v);
        Err(Error::Unsupported { operation: "exact one-sided directional derivative" })
    }

    /// Number of component functions (1 for monolithic problems).
    fn components(&self) -> usize {
        1
    }

    /// Value of component j.
    fn component_value(&self, j: usize, x: &Vector) -> Result<f64> {
        if j >= self.components() {
            return Err(Error::IndexOutOfRange { index: j, len: self.components() });
        }
        self.value(x)
    }

    /// Exact one-sided partials of component j along all coordinates.
    fn component_one_sided_gradient(&self, j: usize, x: &Vector) -> Result<OneSidedGradient> {
        if j >= self.components() {
            return Err(Error::IndexOutOfRange { index: j, len: self.components() });
        }
        self.one_sided_gradient(x)
    }
}

fn check_point(oracle: &dyn ProblemOracle, x: &Vector) -> Result<()> {
    if x.len() != oracle.dim() {
        return Err(Error::DimensionMismatch { expected: oracle.dim(), got: x.len() });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { context: "evaluation point" });
    }
    Ok(())
}

fn assemble(plus: &Vector, minus: &Vector) -> Result<Vector> {
    let mut g = Vec::with_capacity(plus.len());
    for i in 0..plus.len() {
        let (p, m) = (plus[i], minus[i]);
        // Smooth coordinate: the common slope, untouched.
        g.push(if p == m { p } else { angular_mean(p, m)? });
    }
    Ok(Vector::from_raw(g))
}

/// Specular gradient of the full objective: the vector of specular partial
/// derivatives, assembled from exact one-sided partials.
pub fn specular_gradient(oracle: &dyn ProblemOracle, x: &Vector) -> Result<SpecularGradient> {
    check_point(oracle, x)?;
    if !oracle.capabilities().exact_one_sided {
        return Err(Error::Unsupported { operation: "specular gradient from exact partials" });
    }
    let os = oracle.one_sided_gradient(x)?;
    Ok(SpecularGradient {
        g: assemble(&os.plus, &os.minus)?,
        at: x.clone(),
        source: GradientSource::Exact,
    })
}

/// Specular gradient of component `j`. With a single component this is
/// identical to [`specular_gradient`].
pub fn component_specular_gradient(
    oracle: &dyn ProblemOracle,
    j: usize,
    x: &Vector,
) -> Result<SpecularGradient> {
    check_point(oracle, x)?;
    if !oracle.capabilities().exact_one_sided {
        return Err(Error::Unsupported { operation: "component specular gradient" });
    }
    let os = oracle.component_one_sided_gradient(j, x)?;
    Ok(SpecularGradient {
        g: assemble(&os.plus, &os.minus)?,
        at: x.clone(),
        source: GradientSource::Exact,
    })
}

/// Classical subgradient selection used by the gd/adam/subgradient
/// baselines: the midpoint of the one-sided partials. On |.|-type kinks
/// this is exactly the autodiff sign(0) = 0 convention; on smooth
/// coordinates it is the classical partial derivative.
pub fn classical_subgradient(oracle: &dyn ProblemOracle, x: &Vector) -> Result<Vector> {
    check_point(oracle, x)?;
    let os = oracle.one_sided_gradient(x)?;
    let mut g = Vec::with_capacity(os.plus.len());
    for i in 0..os.plus.len() {
        let (p, m) = (os.plus[i], os.minus[i]);
        g.push(if p == m { p } else { 0.5 * (p + m) });
    }
    Ok(Vector::from_raw(g))
}

/// Result of testing the subgradient inequality
/// `f(w) >= f(x) + g . (w - x)` with `g` the specular gradient at `x`.
#[derive(Debug, Clone, Copy)]
pub struct SubgradientCheck {
    pub holds: bool,
    /// `f(w) - f(x) - g . (w - x)`; nonnegative when the inequality holds.
    pub slack: f64,
}

pub const SUBGRADIENT_TOL: f64 = 1e-9;

/// Check that the specular gradient at `x` acts as a subgradient against the
/// probe point `w`, with slack tolerance `1e-9 * (1 + |f(w)|)`.
pub fn check_subgradient_inequality(
    oracle: &dyn ProblemOracle,
    x: &Vector,
    w: &Vector,
) -> Result<SubgradientCheck> {
    check_point(oracle, x)?;
    check_point(oracle, w)?;
    let g = specular_gradient(oracle, x)?;
    let fx = oracle.value(x)?;
    let fw = oracle.value(w)?;
    let mut inner = 0.0;
    for i in 0..x.len() {
        inner += g.g[i] * (w[i] - x[i]);
    }
    let slack = fw - fx - inner;
    Ok(SubgradientCheck { holds: slack >= -SUBGRADIENT_TOL * (1.0 + fw.abs()), slack })
}

/// Diagnostic for the stochastic methods' conditional-unbiasedness
/// assumption: `|| (1/m) sum_j specular_grad(f_j)(x) - specular_grad(f)(x) ||`.
/// Zero wherever every coordinate is smooth; can be positive at kinks, where
/// the angular mean is nonlinear in the components.
pub fn component_mean_gap(oracle: &dyn ProblemOracle, x: &Vector) -> Result<f64> {
    check_point(oracle, x)?;
    let m = oracle.components();
    let mut mean = vec![0.0; x.len()];
    for j in 0..m {
        let gj = component_specular_gradient(oracle, j, x)?;
        for (acc, v) in mean.iter_mut().zip(gj.g.iter()) {
            *acc += v;
        }
    }
    let scale = 1.0 / m as f64;
    let full = specular_gradient(oracle, x)?;
    let mut sq = 0.0;
    for (acc, v) in mean.iter().zip(full.g.iter()) {
        let d = *acc * scale - v;
        sq += d * d;
    }
    Ok(sq.sqrt())
}

/// Value-only oracle wrapping a closure; the target of the finite-difference
/// estimator in tests and ad-hoc use.
pub struct FnProblem<F: Fn(&Vector) -> f64 + Send + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(&Vector) -> f64 + Send + Sync> FnProblem<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&Vector) -> f64 + Send + Sync> ProblemOracle for FnProblem<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::value_only()
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok((self.f)(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Abs, ElasticNet};
    use crate::linalg::Matrix;

    #[test]
    fn abs_gradient_cases() {
        let p = Abs::new(1);
        let g = specular_gradient(&p, &Vector::new(vec![0.0]).unwrap()).unwrap();
        assert_eq!(g.g[0], 0.0);
        assert_eq!(g.source, GradientSource::Exact);
        let g = specular_gradient(&p, &Vector::new(vec![2.0]).unwrap()).unwrap();
        assert_eq!(g.g[0], 1.0);
    }

    #[test]
    fn elastic_net_kink_coordinates() {
        // 1-D instance with x = 0: smooth part s = -1 so the one-sided pair
        // is (0, -2); the specular partial is the angular mean of those.
        let p = ElasticNet::new(
            Matrix::from_rows(vec![vec![1.0]]).unwrap(),
            Vector::new(vec![1.0]).unwrap(),
            1.0,
            0.0,
        )
        .unwrap();
        let g = specular_gradient(&p, &Vector::new(vec![0.0]).unwrap()).unwrap();
        assert!((g.g[0] - angular_mean(0.0, -2.0).unwrap()).abs() < 1e-15);
        assert!((g.g[0] + 0.6180339887498949).abs() < 1e-15);
    }

    #[test]
    fn capability_gate() {
        let p = FnProblem::new(1, |x: &Vector| x[0] * x[0]);
        let x = Vector::new(vec![1.0]).unwrap();
        assert!(matches!(
            specular_gradient(&p, &x),
            Err(Error::Unsupported { .. })
        ));
        assert_eq!(p.value(&x).unwrap(), 1.0);
    }

    #[test]
    fn subgradient_check_equality_case() {
        let p = Abs::new(3);
        let x = Vector::new(vec![1.0, -2.0, 0.5]).unwrap();
        let c = check_subgradient_inequality(&p, &x, &x).unwrap();
        assert!(c.holds);
        assert_eq!(c.slack, 0.0);
    }

    #[test]
    fn classical_selection_is_sign_zero() {
        let p = Abs::new(2);
        let g = classical_subgradient(&p, &Vector::new(vec![0.0, -3.0]).unwrap()).unwrap();
        assert_eq!(g.as_slice(), &[0.0, -1.0]);
    }

    #[test]
    fn component_gradient_m1_degenerate() {
        let p = Abs::new(2);
        let x = Vector::new(vec![0.5, -0.25]).unwrap();
        let full = specular_gradient(&p, &x).unwrap();
        let comp = component_specular_gradient(&p, 0, &x).unwrap();
        assert_eq!(full.g, comp.g);
        assert!(component_specular_gradient(&p, 1, &x).is_err());
    }
}
