//! Node matching: a one-sign-change solution splits at its node t into a
//! positive sub-eigenfunction on (a, t) and a negative one on (t, b), both
//! Dirichlet at the node and carrying the outer condition at the boundary.
//! The node solves lambda1(n; (t,b)) = s * lambda1(m; (a,t)) and the curve
//! point is alpha = lambda1(m; (a,t)), beta = s * alpha.

use crate::error::{Error, Result};
use crate::problem::{BoundaryCondition, FucikPoint, Interval, MethodTag, ProblemSpec};

use super::{lambda1_fem_seeded, DiscreteFn, Mesh1D};

fn sub_bcs(bc: BoundaryCondition) -> Result<(BoundaryCondition, BoundaryCondition)> {
    match bc {
        BoundaryCondition::Dirichlet => Ok((BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet)),
        BoundaryCondition::Neumann => Ok((BoundaryCondition::MixedND, BoundaryCondition::MixedDN)),
        _ => Err(Error::DegenerateInput("node matching needs Dirichlet or Neumann".into())),
    }
}

/// Curve point at ratio s by bisection on the node position, with the
/// sub-eigenvalues computed by FEM Rayleigh minimization on `n_elems`
/// elements per side.
pub fn node_match_curve(spec: &ProblemSpec, s: f64, n_elems: usize) -> Result<FucikPoint> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DegenerateInput(format!("curve parameter s = {s}")));
    }
    let (left_bc, right_bc) = sub_bcs(spec.bc)?;
    let interval = spec.interval;
    let len = interval.len();

    let mut seed_left: Option<DiscreteFn> = None;
    let mut seed_right: Option<DiscreteFn> = None;

    // g(t) = lambda1(n; (t,b)) - s * lambda1(m; (a,t)): strictly increasing in t
    let eval = |t: f64,
                    seed_l: &mut Option<DiscreteFn>,
                    seed_r: &mut Option<DiscreteFn>|
     -> Result<(f64, f64)> {
        let mesh_l = Mesh1D::new(Interval::new(interval.a, t)?, n_elems)?;
        let mesh_r = Mesh1D::new(Interval::new(t, interval.b)?, n_elems)?;
        let (lam_l, ul) = lambda1_fem_seeded(&spec.m, spec.p, mesh_l, left_bc, seed_l.as_ref())?;
        let (lam_r, ur) = lambda1_fem_seeded(&spec.n, spec.p, mesh_r, right_bc, seed_r.as_ref())?;
        *seed_l = Some(ul);
        *seed_r = Some(ur);
        Ok((lam_l, lam_r))
    };

    let mut lo = interval.a + 1e-3 * len;
    let mut hi = interval.b - 1e-3 * len;
    {
        let (ll, lr) = eval(lo, &mut seed_left, &mut seed_right)?;
        if lr - s * ll >= 0.0 {
            return Err(Error::BracketFailure(format!(
                "node residual not negative at t = {lo}"
            )));
        }
        let (hl, hr) = eval(hi, &mut seed_left, &mut seed_right)?;
        if hr - s * hl <= 0.0 {
            return Err(Error::BracketFailure(format!(
                "node residual not positive at t = {hi}"
            )));
        }
    }

    let mut alpha = f64::NAN;
    let mut lam_right = f64::NAN;
    let mut steps = 0usize;
    while hi - lo > 1e-10 * len {
        if steps >= 100 {
            return Err(Error::NonConvergence("node_match_curve: bisection budget".into()));
        }
        let mid = 0.5 * (lo + hi);
        let (ll, lr) = eval(mid, &mut seed_left, &mut seed_right)?;
        if lr - s * ll > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        alpha = ll;
        lam_right = lr;
        steps += 1;
    }
    let node = 0.5 * (lo + hi);
    if !alpha.is_finite() {
        let (ll, lr) = eval(node, &mut seed_left, &mut seed_right)?;
        alpha = ll;
        lam_right = lr;
    }
    let residual = (lam_right - s * alpha).abs() / (s * alpha).max(f64::MIN_POSITIVE);
    Ok(FucikPoint { alpha, beta: s * alpha, s, node, residual, method: MethodTag::NodeMatch })
}
