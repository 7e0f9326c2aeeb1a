//! Discrete mountain-pass evaluation of the min-max value c(m, sn):
//! a path of K waypoints from a nonnegative to a nonpositive profile is
//! relaxed by descent on the log-sum-exp smoothed path maximum of A/B,
//! with annealed smoothing and string-style reparametrization. Waypoints
//! stay normalized (A = 1 for Dirichlet, the shifted energy A + B = 1 for
//! Neumann, where constants make A vanish); endpoints relax inside their
//! sign cones.

use crate::error::{Error, Result};
use crate::oracles;
use crate::problem::BoundaryCondition;
use crate::weights::Weight;

use super::{functional_a, functional_b, grad_a, grad_b, solve_tridiag, DiscreteFn, Mesh1D};

const MAX_ITERS: usize = 3000;
const ANNEAL_PERIOD: usize = 200;
const REPARAM_PERIOD: usize = 10;

/// Waypoint chain with sign-constrained endpoints.
#[derive(Debug, Clone)]
pub struct Path {
    pub waypoints: Vec<DiscreteFn>,
}

impl Path {
    /// Largest consecutive nodal distance relative to the mean one.
    pub fn chord_spread(&self) -> f64 {
        let chords: Vec<f64> = self
            .waypoints
            .windows(2)
            .map(|w| w[0].nodal_distance(&w[1]))
            .collect();
        let mean = chords.iter().sum::<f64>() / chords.len() as f64;
        if mean == 0.0 {
            return 1.0;
        }
        chords.iter().cloned().fold(0.0, f64::max) / mean
    }

    pub fn endpoint_signs_ok(&self) -> bool {
        let first = self.waypoints.first().unwrap();
        let last = self.waypoints.last().unwrap();
        first.values.iter().all(|&v| v >= 0.0) && last.values.iter().all(|&v| v <= 0.0)
    }
}

/// Converged mountain-pass data beyond the bare value.
#[derive(Debug, Clone)]
pub struct MountainPassOutcome {
    /// Path maximum of A/B at convergence (the curve value alpha = c(m, sn)).
    pub value: f64,
    /// Reciprocal cross-check: |1/min B - max N/B| relative, on the
    /// normalized path (the sup-inf form of the same min-max).
    pub inverse_check: f64,
    pub iterations: usize,
    pub path: Path,
}

struct MpContext<'a> {
    m: &'a Weight,
    n: &'a Weight,
    s: f64,
    p: f64,
    bc: BoundaryCondition,
    shifted: bool,
}

impl MpContext<'_> {
    /// B(u) with the s-scaled negative-part weight.
    fn b(&self, u: &DiscreteFn) -> Result<f64> {
        functional_b(u, self.m, self.n, self.s, self.p)
    }

    /// Normalization energy: A for Dirichlet, A + B for Neumann.
    fn norm_energy(&self, u: &DiscreteFn, b_val: f64) -> f64 {
        let a = functional_a(u, self.p);
        if self.shifted {
            a + b_val
        } else {
            a
        }
    }

    fn quotient(&self, u: &DiscreteFn) -> Result<f64> {
        let b = self.b(u)?;
        if b <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(functional_a(u, self.p) / b)
    }

    fn constrain(&self, u: &mut DiscreteFn) {
        if self.bc.dirichlet_left() {
            u.values[0] = 0.0;
        }
        if self.bc.dirichlet_right() {
            *u.values.last_mut().unwrap() = 0.0;
        }
    }

    /// Cone projection for the path endpoints, then renormalization.
    fn project(&self, u: &mut DiscreteFn, endpoint: Option<bool>) -> Result<()> {
        match endpoint {
            Some(true) => u.values.iter_mut().for_each(|v| *v = v.max(0.0)),
            Some(false) => u.values.iter_mut().for_each(|v| *v = v.min(0.0)),
            None => {}
        }
        self.constrain(u);
        let b = self.b(u)?;
        let energy = self.norm_energy(u, b);
        if !(energy > 1e-280) || !energy.is_finite() {
            return Err(Error::PathBroken("waypoint collapsed to zero energy".into()));
        }
        u.scale(energy.powf(-1.0 / self.p));
        Ok(())
    }
}

fn endpoint_role(i: usize, k: usize) -> Option<bool> {
    if i == 0 {
        Some(true)
    } else if i == k - 1 {
        Some(false)
    } else {
        None
    }
}

/// Initial sign-flip family built from first-eigenfunction profiles of the
/// two subintervals split at the averaged-weight oracle node.
fn initial_path(ctx: &MpContext, mesh: Mesh1D, k: usize) -> Result<Path> {
    use std::f64::consts::PI;
    let interval = mesh.interval;
    let (a, b) = (interval.a, interval.b);
    let len = interval.len();
    let m_bar = ctx.m.average(interval);
    let n_bar = ctx.n.average(interval);
    let t0 = a + oracles::fucik_node_const(ctx.s, ctx.p, len, m_bar, n_bar, ctx.bc)?;

    let left = t0 - a;
    let right = b - t0;
    let phi_l = DiscreteFn::from_fn(mesh, |x| {
        if x >= t0 {
            0.0
        } else if ctx.bc == BoundaryCondition::Neumann {
            (0.5 * PI * (x - a) / left).cos()
        } else {
            (PI * (x - a) / left).sin().max(0.0)
        }
    });
    let phi_r = DiscreteFn::from_fn(mesh, |x| {
        if x <= t0 {
            0.0
        } else if ctx.bc == BoundaryCondition::Neumann {
            (0.5 * PI * (x - t0) / right).sin()
        } else {
            (PI * (x - t0) / right).sin().max(0.0)
        }
    });

    let mut waypoints = Vec::with_capacity(k);
    for i in 0..k {
        let theta = 0.5 * PI * i as f64 / (k - 1) as f64;
        let mut u = DiscreteFn::zeros(mesh);
        for j in 0..u.values.len() {
            u.values[j] = theta.cos() * phi_l.values[j] - theta.sin() * phi_r.values[j];
        }
        ctx.project(&mut u, endpoint_role(i, k))?;
        waypoints.push(u);
    }
    Ok(Path { waypoints })
}

/// Redistribute waypoints uniformly along the polyline (string method).
fn reparametrize(ctx: &MpContext, path: &mut Path) -> Result<()> {
    let k = path.waypoints.len();
    let mut cum = vec![0.0; k];
    for i in 1..k {
        cum[i] = cum[i - 1] + path.waypoints[i - 1].nodal_distance(&path.waypoints[i]);
    }
    let total = cum[k - 1];
    if total <= 0.0 {
        return Ok(());
    }
    let old = path.waypoints.clone();
    for i in 1..k - 1 {
        let target = total * i as f64 / (k - 1) as f64;
        let seg = match cum.windows(2).position(|w| target <= w[1]) {
            Some(s) => s,
            None => k - 2,
        };
        let seg_len = cum[seg + 1] - cum[seg];
        let t = if seg_len > 0.0 { (target - cum[seg]) / seg_len } else { 0.0 };
        let mut blend = old[seg].clone();
        for j in 0..blend.values.len() {
            blend.values[j] = (1.0 - t) * old[seg].values[j] + t * old[seg + 1].values[j];
        }
        if ctx.project(&mut blend, None).is_ok() {
            path.waypoints[i] = blend;
        }
    }
    Ok(())
}

/// Tangent-stiffness-plus-mass preconditioner solve.
fn precondition(
    u: &DiscreteFn,
    p: f64,
    bc: BoundaryCondition,
    grad: &[f64],
    out: &mut Vec<f64>,
) {
    let n = u.values.len();
    let h = u.mesh.h();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let max_slope = (0..u.mesh.n_elems).map(|e| u.slope(e).abs()).fold(0.0f64, f64::max);
    let delta = (1e-6 * max_slope).max(1e-300);
    for e in 0..u.mesh.n_elems {
        let d = u.slope(e);
        let coeff = if p == 2.0 { 1.0 } else { (d * d + delta * delta).powf(0.5 * (p - 2.0)) };
        let kstiff = coeff / h;
        diag[e] += kstiff + 0.5 * h;
        diag[e + 1] += kstiff + 0.5 * h;
        off[e] -= kstiff;
    }
    if bc.dirichlet_left() {
        diag[0] = 1.0;
        off[0] = 0.0;
    }
    if bc.dirichlet_right() {
        diag[n - 1] = 1.0;
        off[n - 2] = 0.0;
    }
    out.clear();
    out.extend_from_slice(grad);
    solve_tridiag(&mut diag, &mut off, out);
}

/// Min-max value c(m, sn) = inf over paths of the path maximum of A/B,
/// evaluated on K waypoints. Returns the converged path maximum.
pub fn mountain_pass_c(
    m: &Weight,
    n: &Weight,
    s: f64,
    p: f64,
    mesh: Mesh1D,
    bc: BoundaryCondition,
    k_waypoints: usize,
) -> Result<f64> {
    mountain_pass_c_detailed(m, n, s, p, mesh, bc, k_waypoints).map(|o| o.value)
}

/// Full mountain-pass outcome including the reciprocal cross-check and the
/// converged path.
pub fn mountain_pass_c_detailed(
    m: &Weight,
    n: &Weight,
    s: f64,
    p: f64,
    mesh: Mesh1D,
    bc: BoundaryCondition,
    k_waypoints: usize,
) -> Result<MountainPassOutcome> {
    if k_waypoints < 16 {
        return Err(Error::DegenerateInput(format!(
            "mountain pass needs at least 16 waypoints, got {k_waypoints}"
        )));
    }
    if !(s > 0.0) || !(p > 1.0) {
        return Err(Error::DegenerateInput(format!("s = {s}, p = {p}")));
    }
    if !matches!(bc, BoundaryCondition::Dirichlet | BoundaryCondition::Neumann) {
        return Err(Error::DegenerateInput("mountain pass needs Dirichlet or Neumann".into()));
    }
    super::require_resolved(mesh, &[m, n])?;

    let ctx = MpContext { m, n, s, p, bc, shifted: bc == BoundaryCondition::Neumann };
    let k = k_waypoints;
    let mut path = initial_path(&ctx, mesh, k)?;
    let nn = mesh.n_nodes();

    let mut q = vec![0.0; k];
    for (i, u) in path.waypoints.iter().enumerate() {
        q[i] = ctx.quotient(u)?;
    }
    let q_max0 = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let q_min0 = q.iter().cloned().fold(f64::INFINITY, f64::min);
    let mu0 = (q_max0 - q_min0).max(1e-3 * q_max0.abs()).max(1e-12);

    let mut ga = vec![0.0; nn];
    let mut gb = vec![0.0; nn];
    let mut gq: Vec<Vec<f64>> = vec![vec![0.0; nn]; k];
    let mut dir = Vec::with_capacity(nn);
    let mut eta = 0.5f64;
    let mut best_value = f64::INFINITY;
    let mut best_iter = 0usize;
    let mut iterations = 0;

    for iter in 0..MAX_ITERS {
        iterations = iter + 1;
        let mu = (mu0 * 0.5f64.powi((iter / ANNEAL_PERIOD) as i32)).max(1e-10 * mu0);

        let q_max = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = {
            let raw: Vec<f64> = q.iter().map(|&qi| ((qi - q_max) / mu).exp()).collect();
            let sum: f64 = raw.iter().sum();
            raw.iter().map(|r| r / sum).collect()
        };

        // smoothed path energy and per-waypoint descent directions
        let lse = |qs: &[f64]| -> f64 {
            let qm = qs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            qm + mu * qs.iter().map(|&qi| ((qi - qm) / mu).exp()).sum::<f64>().ln()
        };
        let energy = lse(&q);

        for (i, u) in path.waypoints.iter().enumerate() {
            grad_a(u, p, &mut ga);
            grad_b(u, m, n, s, p, &mut gb)?;
            let b_val = functional_b(u, m, n, s, p)?;
            let qi = q[i];
            let g = &mut gq[i];
            for j in 0..nn {
                g[j] = (ga[j] - qi * gb[j]) / b_val;
            }
            if ctx.bc.dirichlet_left() {
                g[0] = 0.0;
            }
            if ctx.bc.dirichlet_right() {
                g[nn - 1] = 0.0;
            }
        }

        // preconditioned directions, then a shared backtracking step capped
        // so no waypoint moves more than half a mean chord: larger moves tear
        // the discrete path and fake a low maximum
        let h = mesh.h();
        let mut dirs: Vec<Option<Vec<f64>>> = vec![None; k];
        let mut max_disp = 0.0f64;
        for i in 0..k {
            if weights[i] < 1e-14 {
                continue;
            }
            precondition(&path.waypoints[i], p, bc, &gq[i], &mut dir);
            let norm = (h * dir.iter().map(|d| d * d).sum::<f64>()).sqrt() * weights[i];
            max_disp = max_disp.max(norm);
            dirs[i] = Some(dir.clone());
        }
        let mean_chord = {
            let total: f64 = path
                .waypoints
                .windows(2)
                .map(|w| w[0].nodal_distance(&w[1]))
                .sum();
            total / (k - 1) as f64
        };
        let t_cap = if max_disp > 0.0 && mean_chord > 0.0 {
            (0.5 * mean_chord / max_disp).min(1.0)
        } else {
            1.0
        };

        let mut accepted = false;
        let mut t = (eta * 2.0).min(t_cap);
        for _ in 0..40 {
            let mut trial = path.clone();
            let mut broke = false;
            for i in 0..k {
                let Some(d) = dirs[i].as_ref() else { continue };
                for j in 0..nn {
                    trial.waypoints[i].values[j] -= t * weights[i] * d[j];
                }
                if ctx.project(&mut trial.waypoints[i], endpoint_role(i, k)).is_err() {
                    broke = true;
                    break;
                }
            }
            if !broke {
                let mut q_trial = vec![0.0; k];
                let mut finite = true;
                for i in 0..k {
                    q_trial[i] = ctx.quotient(&trial.waypoints[i])?;
                    if !q_trial[i].is_finite() {
                        finite = false;
                        break;
                    }
                }
                if finite && lse(&q_trial) < energy {
                    path = trial;
                    q = q_trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        eta = if accepted { t } else { (eta * 0.5).max(1e-12) };

        if iter % REPARAM_PERIOD == REPARAM_PERIOD - 1 {
            reparametrize(&ctx, &mut path)?;
            for (i, u) in path.waypoints.iter().enumerate() {
                q[i] = ctx.quotient(u)?;
            }
            if path.chord_spread() > 6.0 {
                return Err(Error::PathBroken(format!(
                    "chord spread {:.2} exceeds the continuity budget",
                    path.chord_spread()
                )));
            }
        }

        // converged once the best path maximum has stopped improving for a
        // few anneal cycles
        let current = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if current < best_value - 1e-5 * best_value.abs().min(current.abs()) {
            best_value = current;
            best_iter = iter;
        }
        if iter > 800 && iter - best_iter > 600 {
            break;
        }
    }

    if !path.endpoint_signs_ok() {
        return Err(Error::PathBroken("endpoint sign cones violated".into()));
    }

    let value = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !value.is_finite() {
        return Err(Error::NonConvergence("mountain pass value not finite".into()));
    }

    // reciprocal identity on the converged normalized path: with N(u) = 1 the
    // path maximum of N/B equals 1 / (path minimum of B)
    let mut min_b = f64::INFINITY;
    for u in &path.waypoints {
        min_b = min_b.min(ctx.b(u)?);
    }
    let shift = if ctx.shifted { 1.0 } else { 0.0 };
    let max_shifted = value + shift;
    let inverse_check = (1.0 / min_b - max_shifted).abs() / max_shifted;

    Ok(MountainPassOutcome { value, inverse_check, iterations, path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BoundaryCondition::*, Interval};
    use std::f64::consts::PI;

    fn mesh(n: usize) -> Mesh1D {
        Mesh1D::new(Interval::UNIT, n).unwrap()
    }

    #[test]
    fn dirichlet_constant_weights_hits_second_eigenvalue() {
        let one = Weight::constant(1.0).unwrap();
        let out = mountain_pass_c_detailed(&one, &one, 1.0, 2.0, mesh(256), Dirichlet, 24).unwrap();
        let want = 4.0 * PI * PI;
        assert!(
            (out.value - want).abs() < 0.02 * want,
            "mountain pass {} vs {want}",
            out.value
        );
        assert!(out.inverse_check < 1e-10);
        assert!(out.path.endpoint_signs_ok());
    }

    #[test]
    fn neumann_constant_weights_hits_second_eigenvalue() {
        let one = Weight::constant(1.0).unwrap();
        let out = mountain_pass_c_detailed(&one, &one, 1.0, 2.0, mesh(256), Neumann, 24).unwrap();
        let want = PI * PI;
        assert!(
            (out.value - want).abs() < 0.02 * want,
            "mountain pass {} vs {want}",
            out.value
        );
        assert!(out.inverse_check < 1e-10);
    }

    #[test]
    fn constant_scaling() {
        let w = Weight::constant(2.0).unwrap();
        let v = mountain_pass_c(&w, &w, 1.0, 2.0, mesh(256), Dirichlet, 24).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 0.02 * 2.0 * PI * PI, "{v}");
    }

    #[test]
    fn off_diagonal_parameter_matches_oracle() {
        let one = Weight::constant(1.0).unwrap();
        for &s in &[0.5, 2.0] {
            let v = mountain_pass_c(&one, &one, s, 2.0, mesh(256), Dirichlet, 24).unwrap();
            let (want, _) = crate::oracles::fucik_curve_const(s, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
            assert!((v - want).abs() < 0.02 * want, "s = {s}: {v} vs {want}");
        }
    }

    #[test]
    fn monotone_in_weights() {
        // pointwise larger weights give a smaller min-max value
        let small_m = Weight::constant(1.0).unwrap();
        let small_n = Weight::constant(1.0).unwrap();
        let big_m = Weight::trig(2.0, 1.0, 1).unwrap(); // >= 1 pointwise
        let big_n = Weight::constant(1.5).unwrap();
        let c_small = mountain_pass_c(&small_m, &small_n, 1.0, 2.0, mesh(256), Dirichlet, 24).unwrap();
        let c_big = mountain_pass_c(&big_m, &big_n, 1.0, 2.0, mesh(256), Dirichlet, 24).unwrap();
        assert!(c_big <= c_small * 1.01, "{c_big} vs {c_small}");
    }

    fn three_way(bc: crate::problem::BoundaryCondition) {
        // shooting, node matching, and the mountain pass agree pairwise:
        // within 2% for the mountain pass, 0.1% for node matching
        let one = Weight::constant(1.0).unwrap();
        let spec = crate::problem::ProblemSpec::new(
            2.0,
            Interval::UNIT,
            bc,
            one.clone(),
            one.clone(),
        )
        .unwrap();
        for &s in &[0.5, 1.0, 2.0] {
            let sh = crate::shoot::curve_point_shoot(&spec, s).unwrap().alpha;
            let nm = crate::varfem::node_match_curve(&spec, s, 1024).unwrap().alpha;
            let mp = mountain_pass_c(&one, &one, s, 2.0, mesh(1024), bc, 24).unwrap();
            assert!((nm - sh).abs() < 1e-3 * sh, "s = {s}: node-match {nm} vs shooting {sh}");
            assert!((mp - sh).abs() < 0.02 * sh, "s = {s}: mountain pass {mp} vs shooting {sh}");
            assert!((mp - nm).abs() < 0.02 * nm);
        }
    }

    #[test]
    fn three_way_agreement_dirichlet() {
        three_way(crate::problem::BoundaryCondition::Dirichlet);
    }

    #[test]
    fn three_way_agreement_neumann() {
        three_way(crate::problem::BoundaryCondition::Neumann);
    }

    #[test]
    fn rejects_too_few_waypoints() {
        let one = Weight::constant(1.0).unwrap();
        assert!(mountain_pass_c(&one, &one, 1.0, 2.0, mesh(64), Dirichlet, 8).is_err());
    }
}
