//! First eigenvalue by Rayleigh-quotient minimization: projected gradient
//! descent on the constraint B(u) = 1 with Armijo backtracking, started from
//! a sine-like profile. The descent direction is preconditioned by the
//! tangent stiffness (a regularized tridiagonal solve), without which the
//! plain gradient stalls at mesh-dependent conditioning.

use crate::error::{Error, Result};
use crate::problem::BoundaryCondition;
use crate::weights::Weight;

use super::{functional_a, grad_a, grad_b, panels_per_elem, require_resolved, solve_tridiag, DiscreteFn, Mesh1D};

const MAX_ITERS: usize = 100_000;
const STAGNATION_WINDOW: usize = 50;
const STAGNATION_TOL: f64 = 1e-12;

fn init_profile(mesh: Mesh1D, bc: BoundaryCondition) -> DiscreteFn {
    use std::f64::consts::PI;
    let a = mesh.interval.a;
    let len = mesh.interval.len();
    match bc {
        BoundaryCondition::Dirichlet => DiscreteFn::from_fn(mesh, |x| (PI * (x - a) / len).sin()),
        BoundaryCondition::MixedND => DiscreteFn::from_fn(mesh, |x| (0.5 * PI * (x - a) / len).cos()),
        BoundaryCondition::MixedDN => DiscreteFn::from_fn(mesh, |x| (0.5 * PI * (x - a) / len).sin()),
        BoundaryCondition::Neumann => DiscreteFn::from_fn(mesh, |_| 1.0),
    }
}

fn apply_constraints(values: &mut [f64], bc: BoundaryCondition) {
    if bc.dirichlet_left() {
        values[0] = 0.0;
    }
    if bc.dirichlet_right() {
        *values.last_mut().unwrap() = 0.0;
    }
}

/// Weighted mass integral of |u|^p and its gradient, sharing the quadrature
/// rule of [`super::functional_b`] with a symmetric weight.
fn mass_and_grad(u: &DiscreteFn, w: &Weight, p: f64, grad: Option<&mut [f64]>) -> Result<f64> {
    let mut b = super::functional_b(u, w, w, 1.0, p)?;
    if b == 0.0 {
        b = f64::MIN_POSITIVE;
    }
    if let Some(g) = grad {
        grad_b(u, w, w, 1.0, p, g)?;
    }
    Ok(b)
}

/// Tangent-stiffness preconditioner: tridiagonal with elementwise
/// coefficient (slope^2 + delta^2)^((p-2)/2), Dirichlet rows pinned.
fn build_preconditioner(
    u: &DiscreteFn,
    p: f64,
    bc: BoundaryCondition,
    diag: &mut Vec<f64>,
    off: &mut Vec<f64>,
) {
    let n = u.values.len();
    let h = u.mesh.h();
    diag.clear();
    diag.resize(n, 0.0);
    off.clear();
    off.resize(n - 1, 0.0);
    let max_slope = (0..u.mesh.n_elems).map(|e| u.slope(e).abs()).fold(0.0f64, f64::max);
    let delta = (1e-6 * max_slope).max(1e-300);
    for e in 0..u.mesh.n_elems {
        let d = u.slope(e);
        let coeff = if p == 2.0 { 1.0 } else { (d * d + delta * delta).powf(0.5 * (p - 2.0)) };
        let k = coeff / h;
        diag[e] += k;
        diag[e + 1] += k;
        off[e] -= k;
    }
    // pin constrained rows
    if bc.dirichlet_left() {
        diag[0] = 1.0;
        off[0] = 0.0;
    }
    if bc.dirichlet_right() {
        diag[n - 1] = 1.0;
        off[n - 2] = 0.0;
    }
    // keep strict diagonal dominance at free Neumann ends
    for d in diag.iter_mut() {
        *d += 1e-300;
    }
}

/// First eigenvalue of -(|u'|^{p-2}u')' = lambda w |u|^{p-2} u on the mesh
/// interval. Pure Neumann returns the principal eigenvalue 0.
pub fn lambda1_fem(w: &Weight, p: f64, mesh: Mesh1D, bc: BoundaryCondition) -> Result<f64> {
    lambda1_fem_seeded(w, p, mesh, bc, None).map(|(lam, _)| lam)
}

/// Same as [`lambda1_fem`], optionally seeded with a starting profile, and
/// returning the minimizer for reuse.
pub fn lambda1_fem_seeded(
    w: &Weight,
    p: f64,
    mesh: Mesh1D,
    bc: BoundaryCondition,
    seed: Option<&DiscreteFn>,
) -> Result<(f64, DiscreteFn)> {
    if !(p > 1.0) {
        return Err(Error::DegenerateInput(format!("p = {p}")));
    }
    if bc == BoundaryCondition::Neumann {
        return Ok((0.0, DiscreteFn::from_fn(mesh, |_| 1.0)));
    }
    require_resolved(mesh, &[w])?;
    panels_per_elem(mesh.h(), &[w])?;

    let mut u = match seed {
        Some(s) if s.values.len() == mesh.n_nodes() => {
            let mut u = s.clone();
            u.mesh = mesh;
            u
        }
        _ => init_profile(mesh, bc),
    };
    apply_constraints(&mut u.values, bc);

    let nn = mesh.n_nodes();
    let mut ga = vec![0.0; nn];
    let mut gb = vec![0.0; nn];
    let mut dir = vec![0.0; nn];
    let mut diag = Vec::new();
    let mut off = Vec::new();

    // project onto B(u) = 1; a degenerate seed falls back to the profile
    let mut b0 = mass_and_grad(&u, w, p, None)?;
    if b0 < 1e-280 {
        u = init_profile(mesh, bc);
        apply_constraints(&mut u.values, bc);
        b0 = mass_and_grad(&u, w, p, None)?;
    }
    u.scale(b0.powf(-1.0 / p));
    let mut rayleigh = functional_a(&u, p);
    let mut history = vec![rayleigh];
    let mut step = 1.0f64;
    let mut flat_streak = 0usize;

    for _ in 0..MAX_ITERS {
        grad_a(&u, p, &mut ga);
        mass_and_grad(&u, w, p, Some(&mut gb))?;
        for i in 0..nn {
            dir[i] = ga[i] - rayleigh * gb[i];
        }
        apply_constraints(&mut dir, bc);
        build_preconditioner(&u, p, bc, &mut diag, &mut off);
        let mut rhs = dir.clone();
        solve_tridiag(&mut diag, &mut off, &mut rhs);
        apply_constraints(&mut rhs, bc);
        let slope: f64 = dir.iter().zip(&rhs).map(|(g, d)| g * d).sum();

        // Armijo backtracking on the quotient
        let mut accepted = false;
        let mut t = step.min(1.0);
        for _ in 0..60 {
            let mut trial = u.clone();
            for i in 0..nn {
                trial.values[i] -= t * rhs[i];
            }
            apply_constraints(&mut trial.values, bc);
            let tb = mass_and_grad(&trial, w, p, None)?;
            if tb > 0.0 {
                trial.scale(tb.powf(-1.0 / p));
                let tr = functional_a(&trial, p);
                if tr <= rayleigh - 1e-4 * t * slope.max(0.0) && tr < rayleigh {
                    u = trial;
                    rayleigh = tr;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        step = if accepted { (t * 2.0).min(1.0) } else { 1.0 };

        history.push(rayleigh);
        let k = history.len();
        if k > STAGNATION_WINDOW {
            let drop = history[k - 1 - STAGNATION_WINDOW] - rayleigh;
            if drop < STAGNATION_TOL * rayleigh.abs().max(1e-300) {
                return Ok((rayleigh, u));
            }
        }
        // warm starts land at machine level immediately; three consecutive
        // machine-flat accepted steps mean there is nothing left to gain
        if accepted && history[k - 2] - rayleigh < 1e-14 * rayleigh.abs() {
            flat_streak += 1;
            if flat_streak >= 3 {
                return Ok((rayleigh, u));
            }
        } else {
            flat_streak = 0;
        }
        if !accepted {
            // no descent direction left at machine precision
            return Ok((rayleigh, u));
        }
    }
    Err(Error::NonConvergence(format!("lambda1_fem: {MAX_ITERS} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BoundaryCondition::*, Interval};
    use std::f64::consts::PI;

    #[test]
    fn dirichlet_p2_matches_oracle() {
        let mesh = Mesh1D::new(Interval::UNIT, 1024).unwrap();
        let w = Weight::constant(1.0).unwrap();
        let lam = lambda1_fem(&w, 2.0, mesh, Dirichlet).unwrap();
        assert!(
            (lam - PI * PI).abs() < 5e-5 * PI * PI,
            "lambda = {lam}, err = {}",
            (lam - PI * PI).abs() / (PI * PI)
        );

        let w2 = Weight::constant(2.0).unwrap();
        let lam2 = lambda1_fem(&w2, 2.0, mesh, Dirichlet).unwrap();
        assert!((lam2 - lam / 2.0).abs() < 1e-8 * lam);
    }

    #[test]
    fn neumann_is_zero_with_constant_minimizer() {
        let mesh = Mesh1D::new(Interval::UNIT, 64).unwrap();
        let w = Weight::constant(1.0).unwrap();
        let (lam, u) = lambda1_fem_seeded(&w, 2.0, mesh, Neumann, None).unwrap();
        assert_eq!(lam, 0.0);
        assert!(u.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn general_p_matches_oracle() {
        let mesh = Mesh1D::new(Interval::UNIT, 1024).unwrap();
        let w = Weight::constant(1.0).unwrap();
        for &p in &[1.5, 3.0] {
            let lam = lambda1_fem(&w, p, mesh, Dirichlet).unwrap();
            let want = crate::oracles::plap_eigen(1, p, 1.0, Dirichlet, 1.0).unwrap();
            assert!(
                (lam - want).abs() < 5e-4 * want,
                "p = {p}: {lam} vs {want}, rel {}",
                (lam - want).abs() / want
            );
        }
    }

    #[test]
    fn mixed_bcs_match_oracle() {
        let mesh = Mesh1D::new(Interval::UNIT, 1024).unwrap();
        let w = Weight::constant(1.0).unwrap();
        for &bc in &[MixedND, MixedDN] {
            let lam = lambda1_fem(&w, 2.0, mesh, bc).unwrap();
            let want = crate::oracles::plap_eigen(1, 2.0, 1.0, bc, 1.0).unwrap();
            assert!((lam - want).abs() < 5e-5 * want, "bc {bc:?}: {lam} vs {want}");
        }
    }

    #[test]
    fn subinterval_solve() {
        let mesh = Mesh1D::new(Interval::new(0.0, 2.0 / 3.0).unwrap(), 512).unwrap();
        let w = Weight::constant(1.0).unwrap();
        let lam = lambda1_fem(&w, 2.0, mesh, Dirichlet).unwrap();
        let want = (PI / (2.0 / 3.0)).powi(2);
        assert!((lam - want).abs() < 1e-4 * want);
    }
}
