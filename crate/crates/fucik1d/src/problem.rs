//! Problem description shared by every solver: interval, boundary condition,
//! exponent, weight pair, and the curve-point record they produce.

use crate::error::{Error, Result};
use crate::weights::Weight;

/// A bounded open interval (a, b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::DegenerateInput(format!("interval ({a}, {b})")));
        }
        Ok(Interval { a, b })
    }

    pub const UNIT: Interval = Interval { a: 0.0, b: 1.0 };

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// Boundary condition of the 1D problem. The mixed variants name the
/// condition at the left endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// Neumann at the left endpoint, Dirichlet at the right.
    MixedND,
    /// Dirichlet at the left endpoint, Neumann at the right.
    MixedDN,
}

impl BoundaryCondition {
    pub fn label(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::MixedND => "mixed-nd",
            BoundaryCondition::MixedDN => "mixed-dn",
        }
    }

    pub fn dirichlet_left(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet | BoundaryCondition::MixedDN)
    }

    pub fn dirichlet_right(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet | BoundaryCondition::MixedND)
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Which solver produced a curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Shooting,
    NodeMatch,
    MountainPass,
    Oracle,
}

impl MethodTag {
    pub fn label(&self) -> &'static str {
        match self {
            MethodTag::Shooting => "shooting",
            MethodTag::NodeMatch => "node-match",
            MethodTag::MountainPass => "mountain-pass",
            MethodTag::Oracle => "oracle",
        }
    }
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Exponent p, interval, boundary condition and weight pair (m, n):
/// everything that determines an asymmetric eigenvalue problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub p: f64,
    pub interval: Interval,
    pub bc: BoundaryCondition,
    pub m: Weight,
    pub n: Weight,
}

impl ProblemSpec {
    pub fn new(p: f64, interval: Interval, bc: BoundaryCondition, m: Weight, n: Weight) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::DegenerateInput(format!("exponent p = {p}, need p > 1")));
        }
        Ok(ProblemSpec { p, interval, bc, m, n })
    }
}

/// A point (alpha, beta) = (alpha, s*alpha) on the first nontrivial curve,
/// with solver metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FucikPoint {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    /// Position of the single interior zero of the solution.
    pub node: f64,
    /// Normalized boundary residual of the returned solution.
    pub residual: f64,
    pub method: MethodTag,
}
