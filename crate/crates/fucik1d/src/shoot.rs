//! Reference solver: integrates the asymmetric equation as the first-order
//! flux system
//!
//!   u' = sign(w) |w|^(1/(p-1)),   w' = -alpha m(x) (u+)^(p-1) + beta n(x) (u-)^(p-1)
//!
//! with fixed-step RK4, and locates eigenvalues and curve points by
//! bisection on monotone boundary/arc-count residuals. Works for arbitrary
//! bounded positive weights, including rapidly oscillating ones.

use crate::error::{Error, Result};
use crate::oracles;
use crate::problem::{BoundaryCondition, FucikPoint, Interval, MethodTag, ProblemSpec};
use crate::weights::Weight;

/// Integrator state: position, value, and flux w = |u'|^(p-2) u'.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotState {
    pub x: f64,
    pub u: f64,
    pub w: f64,
}

impl ShotState {
    /// Recover u' from the flux: the map w <-> u' is the strictly monotone
    /// bijection w = |u'|^(p-2) u'.
    pub fn u_prime(&self, p: f64) -> f64 {
        if self.w == 0.0 {
            0.0
        } else {
            self.w.signum() * self.w.abs().powf(1.0 / (p - 1.0))
        }
    }
}

/// Dense output of one shot plus the refined interior zeros of u.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<ShotState>,
    /// Strictly increasing interior zeros of u, refined to 1e-12 in x.
    pub zero_crossings: Vec<f64>,
    pub sup_u: f64,
    pub sup_w: f64,
    /// True when u touched zero without changing sign.
    pub degenerate_touch: bool,
}

impl Trajectory {
    pub fn end(&self) -> ShotState {
        *self.samples.last().expect("trajectory has at least the initial state")
    }
}

/// Default fixed step: 1e-4, refined to a twentieth of the fastest
/// oscillation scale of either weight.
pub fn default_step(m: &Weight, n: &Weight) -> f64 {
    let mut h = 1e-4_f64;
    for scale in [m.oscillation_scale(), n.oscillation_scale()].into_iter().flatten() {
        h = h.min(scale / 20.0);
    }
    h
}

fn step_limit(m: &Weight, n: &Weight) -> Option<f64> {
    [m.oscillation_scale(), n.oscillation_scale()]
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))))
        .map(|s| s / 10.0)
}

struct Field<'a> {
    p: f64,
    inv_pm1: f64,
    pm1: f64,
    alpha: f64,
    beta: f64,
    m: &'a Weight,
    n: &'a Weight,
}

impl Field<'_> {
    #[inline]
    fn u_prime(&self, w: f64) -> f64 {
        if self.p == 2.0 {
            w
        } else if w == 0.0 {
            0.0
        } else {
            w.signum() * w.abs().powf(self.inv_pm1)
        }
    }

    #[inline]
    fn deriv(&self, x: f64, u: f64, w: f64) -> Result<(f64, f64)> {
        let pos = if u > 0.0 {
            if self.p == 2.0 { u } else { u.powf(self.pm1) }
        } else {
            0.0
        };
        let neg = if u < 0.0 {
            if self.p == 2.0 { -u } else { (-u).powf(self.pm1) }
        } else {
            0.0
        };
        let force = -self.alpha * self.m.eval(x)? * pos + self.beta * self.n.eval(x)? * neg;
        Ok((self.u_prime(w), force))
    }

    #[inline]
    fn rk4(&self, x: f64, u: f64, w: f64, h: f64) -> Result<(f64, f64)> {
        let (k1u, k1w) = self.deriv(x, u, w)?;
        let (k2u, k2w) = self.deriv(x + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w)?;
        let (k3u, k3w) = self.deriv(x + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w)?;
        let (k4u, k4w) = self.deriv(x + h, u + h * k3u, w + h * k3w)?;
        Ok((
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
        ))
    }
}

struct ShotOutcome {
    zeros: Vec<f64>,
    end_u: f64,
    end_w: f64,
    sup_u: f64,
    sup_w: f64,
    degenerate_touch: bool,
}

/// Refine a sign change inside one step by bisection on sub-steps taken
/// from the saved left state.
fn refine_zero(field: &Field, x0: f64, u0: f64, w0: f64, h: f64) -> Result<f64> {
    let sign0 = u0 > 0.0;
    let mut lo = 0.0;
    let mut hi = h;
    for _ in 0..80 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (um, _) = field.rk4(x0, u0, w0, mid)?;
        if (um > 0.0) == sign0 && um != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(x0 + 0.5 * (lo + hi))
}

fn run_shot(
    field: &Field,
    interval: Interval,
    init: (f64, f64),
    h: f64,
    mut samples: Option<&mut Vec<ShotState>>,
) -> Result<ShotOutcome> {
    let length = interval.len();
    let n_steps = (length / h).ceil().max(1.0) as usize;
    let h_eff = length / n_steps as f64;

    let (mut u, mut w) = init;
    let mut x = interval.a;
    let mut zeros = Vec::new();
    let mut sup_u = u.abs();
    let mut sup_w = w.abs();
    let mut degenerate = false;
    // sign of u on the last sample where it was nonzero; 0 until then
    let mut last_sign = if u > 0.0 {
        1
    } else if u < 0.0 {
        -1
    } else {
        0
    };
    let mut pending_touch: Option<f64> = None;

    if let Some(buf) = samples.as_deref_mut() {
        buf.clear();
        buf.push(ShotState { x, u, w });
    }

    let edge = 1e-9 * length.max(1.0);
    for i in 0..n_steps {
        let (u1, w1) = field.rk4(x, u, w, h_eff)?;
        let x1 = interval.a + (i + 1) as f64 * h_eff;
        if !u1.is_finite() || !w1.is_finite() {
            return Err(Error::NonFinite { x: x1 });
        }
        let new_sign = if u1 > 0.0 {
            1
        } else if u1 < 0.0 {
            -1
        } else {
            0
        };
        if new_sign == 0 {
            // u landed exactly on zero: crossing or touch, decided when it
            // leaves zero again
            if last_sign != 0 && pending_touch.is_none() {
                pending_touch = Some(x1);
            }
        } else if let Some(xt) = pending_touch.take() {
            let interior = xt > interval.a + edge && xt < interval.b - edge;
            if interior {
                if new_sign != last_sign {
                    zeros.push(xt);
                } else {
                    degenerate = true;
                }
            }
        } else if last_sign != 0 && new_sign != last_sign {
            let z = refine_zero(field, x, u, w, h_eff)?;
            if z > interval.a + edge && z < interval.b - edge {
                zeros.push(z);
            }
        }
        if new_sign != 0 {
            last_sign = new_sign;
        }
        u = u1;
        w = w1;
        x = x1;
        sup_u = sup_u.max(u.abs());
        sup_w = sup_w.max(w.abs());
        if let Some(buf) = samples.as_deref_mut() {
            buf.push(ShotState { x, u, w });
        }
    }

    Ok(ShotOutcome { zeros, end_u: u, end_w: w, sup_u, sup_w, degenerate_touch: degenerate })
}

/// Integrate the asymmetric equation with the given (alpha, beta) and
/// initial data (u0, w0) at the left endpoint, using the default step policy.
pub fn integrate(spec: &ProblemSpec, alpha: f64, beta: f64, init: (f64, f64)) -> Result<Trajectory> {
    integrate_with_step(spec, alpha, beta, init, default_step(&spec.m, &spec.n))
}

/// Same as [`integrate`] with an explicit fixed step. Rejects steps coarser
/// than a tenth of the fastest weight oscillation.
pub fn integrate_with_step(
    spec: &ProblemSpec,
    alpha: f64,
    beta: f64,
    init: (f64, f64),
    h: f64,
) -> Result<Trajectory> {
    if alpha < 0.0 || beta < 0.0 {
        return Err(Error::DegenerateInput(format!("alpha = {alpha}, beta = {beta}")));
    }
    if !(h > 0.0) {
        return Err(Error::DegenerateInput(format!("step h = {h}")));
    }
    if let Some(limit) = step_limit(&spec.m, &spec.n) {
        if h > limit {
            return Err(Error::StepTooLarge { h, limit });
        }
    }
    let field = Field {
        p: spec.p,
        inv_pm1: 1.0 / (spec.p - 1.0),
        pm1: spec.p - 1.0,
        alpha,
        beta,
        m: &spec.m,
        n: &spec.n,
    };
    let mut samples = Vec::new();
    let out = run_shot(&field, spec.interval, init, h, Some(&mut samples))?;
    Ok(Trajectory {
        samples,
        zero_crossings: out.zeros,
        sup_u: out.sup_u,
        sup_w: out.sup_w,
        degenerate_touch: out.degenerate_touch,
    })
}

fn shot_init(bc: BoundaryCondition) -> (f64, f64) {
    if bc.dirichlet_left() {
        (0.0, 1.0)
    } else {
        (1.0, 0.0)
    }
}

/// Has the shot passed the state required at the right endpoint? Strictly
/// monotone in the spectral parameter by Sturm comparison.
fn past_right_condition(bc: BoundaryCondition, out: &ShotOutcome) -> bool {
    if !out.zeros.is_empty() {
        return true;
    }
    if bc.dirichlet_right() {
        out.end_u <= 0.0
    } else {
        out.end_w <= 0.0
    }
}

/// First eigenvalue of the weighted p-Laplacian by shooting: bracketing plus
/// bisection on the boundary residual, relative tolerance 1e-10. The pure
/// Neumann problem returns its principal eigenvalue 0.
pub fn lambda1_shoot(w: &Weight, p: f64, interval: Interval, bc: BoundaryCondition) -> Result<f64> {
    lambda1_shoot_with_step(w, p, interval, bc, None)
}

/// [`lambda1_shoot`] with an explicit fixed step override.
pub fn lambda1_shoot_with_step(
    w: &Weight,
    p: f64,
    interval: Interval,
    bc: BoundaryCondition,
    step: Option<f64>,
) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::DegenerateInput(format!("p = {p}")));
    }
    if bc == BoundaryCondition::Neumann {
        return Ok(0.0);
    }
    let h = checked_step(step, w, w)?;
    let field_for = |lambda: f64| Field {
        p,
        inv_pm1: 1.0 / (p - 1.0),
        pm1: p - 1.0,
        alpha: lambda,
        beta: lambda,
        m: w,
        n: w,
    };
    let init = shot_init(bc);
    let crossed = |lambda: f64| -> Result<bool> {
        let out = run_shot(&field_for(lambda), interval, init, h, None)?;
        Ok(past_right_condition(bc, &out))
    };

    // comparison with the constant bounds brackets the first eigenvalue
    let unweighted = plap_first_unweighted(p, interval.len(), bc)?;
    let mut lo = unweighted / w.upper_bound() * 0.999;
    let mut hi = unweighted / w.lower_bound() * 1.001;
    for _ in 0..8 {
        if crossed(lo)? {
            lo *= 0.5;
        } else {
            break;
        }
    }
    for _ in 0..8 {
        if !crossed(hi)? {
            hi *= 2.0;
        } else {
            break;
        }
    }
    if crossed(lo)? || !crossed(hi)? {
        return Err(Error::BracketFailure(format!("lambda1 bracket [{lo}, {hi}]")));
    }

    let mut steps = 0;
    while hi - lo > 1e-10 * hi {
        if steps >= 200 {
            return Err(Error::NonConvergence("lambda1_shoot: 200 bisection steps".into()));
        }
        let mid = 0.5 * (lo + hi);
        if crossed(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    Ok(0.5 * (lo + hi))
}

fn plap_first_unweighted(p: f64, length: f64, bc: BoundaryCondition) -> Result<f64> {
    oracles::plap_eigen(1, p, length, bc, 1.0)
}

/// Resolve an optional step override against the oscillation limit.
fn checked_step(step: Option<f64>, m: &Weight, n: &Weight) -> Result<f64> {
    match step {
        None => Ok(default_step(m, n)),
        Some(h) => {
            if !(h > 0.0) {
                return Err(Error::DegenerateInput(format!("step h = {h}")));
            }
            if let Some(limit) = step_limit(m, n) {
                if h > limit {
                    return Err(Error::StepTooLarge { h, limit });
                }
            }
            Ok(h)
        }
    }
}

#[derive(PartialEq, Clone, Copy, Debug)]
enum Classify {
    TooSmall,
    TooBig,
}

fn classify_curve_shot(bc: BoundaryCondition, out: &ShotOutcome) -> Classify {
    match out.zeros.len() {
        0 => Classify::TooSmall,
        1 => {
            let past = if bc.dirichlet_right() { out.end_u >= 0.0 } else { out.end_w >= 0.0 };
            if past {
                Classify::TooBig
            } else {
                Classify::TooSmall
            }
        }
        _ => Classify::TooBig,
    }
}

/// Point on the first nontrivial curve at ratio s = beta/alpha, found by
/// bisection on alpha with the one-interior-zero characterization:
/// the solution is positive before its single node and negative after,
/// and meets the boundary condition at both ends.
pub fn curve_point_shoot(spec: &ProblemSpec, s: f64) -> Result<FucikPoint> {
    curve_point_shoot_with_step(spec, s, None)
}

/// [`curve_point_shoot`] with an explicit fixed step override.
pub fn curve_point_shoot_with_step(
    spec: &ProblemSpec,
    s: f64,
    step: Option<f64>,
) -> Result<FucikPoint> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DegenerateInput(format!("curve parameter s = {s}")));
    }
    let bc = spec.bc;
    if !matches!(bc, BoundaryCondition::Dirichlet | BoundaryCondition::Neumann) {
        return Err(Error::DegenerateInput("curve points need Dirichlet or Neumann".into()));
    }
    let p = spec.p;
    let length = spec.interval.len();
    let h = checked_step(step, &spec.m, &spec.n)?;
    let init = shot_init(bc);

    let shoot = |alpha: f64| -> Result<ShotOutcome> {
        let field = Field {
            p,
            inv_pm1: 1.0 / (p - 1.0),
            pm1: p - 1.0,
            alpha,
            beta: s * alpha,
            m: &spec.m,
            n: &spec.n,
        };
        run_shot(&field, spec.interval, init, h, None)
    };

    // below the comparison curve of the upper-bound constants, the shot is
    // always slow; above the second-eigenvalue upper bound, always fast
    let (oracle_lo, _) =
        oracles::fucik_curve_const(s, p, length, spec.m.upper_bound(), spec.n.upper_bound(), bc)?;
    let mu2 = oracles::second_eigen_unweighted(p, length, bc)?;
    let tau = if s >= 1.0 { 1.0 } else { 1.0 / s };
    let eigen_cap = (1.0 / spec.m.lower_bound()).max(1.0 / spec.n.lower_bound()) * mu2 * tau;

    let mut lo = oracle_lo * 0.999;
    let mut hi = eigen_cap * 1.000_001;
    if classify_curve_shot(bc, &shoot(lo)?) != Classify::TooSmall {
        return Err(Error::BracketFailure(format!(
            "zero count not monotone: alpha = {lo} below the comparison curve already crossed"
        )));
    }
    if classify_curve_shot(bc, &shoot(hi)?) != Classify::TooBig {
        return Err(Error::BracketFailure(format!(
            "zero count not monotone: alpha = {hi} above the eigenvalue bound has not crossed"
        )));
    }

    let mut steps = 0;
    while hi - lo > 1e-12 * hi {
        if steps >= 200 {
            return Err(Error::NonConvergence("curve_point_shoot: 200 bisection steps".into()));
        }
        let mid = 0.5 * (lo + hi);
        match classify_curve_shot(bc, &shoot(mid)?) {
            Classify::TooSmall => lo = mid,
            Classify::TooBig => hi = mid,
        }
        steps += 1;
    }

    // extract node and residual from the from-below side, which carries the
    // single interior zero
    let out = shoot(lo)?;
    if out.degenerate_touch {
        return Err(Error::BracketFailure("degenerate touching zero at the solution".into()));
    }
    let node = match out.zeros.as_slice() {
        [z] => *z,
        other => {
            return Err(Error::NonConvergence(format!(
                "expected exactly one interior zero at convergence, got {}",
                other.len()
            )))
        }
    };
    let residual = if bc.dirichlet_right() {
        out.end_u.abs() / out.sup_u.max(f64::MIN_POSITIVE)
    } else {
        out.end_w.abs() / out.sup_w.max(f64::MIN_POSITIVE)
    };
    if residual >= 1e-9 {
        return Err(Error::NonConvergence(format!("curve point residual {residual:.3e} >= 1e-9")));
    }
    Ok(FucikPoint { alpha: lo, beta: s * lo, s, node, residual, method: MethodTag::Shooting })
}
