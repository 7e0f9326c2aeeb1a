//! Variational solvers on P1 finite elements: the energy functionals of the
//! min-max characterization, first-eigenvalue Rayleigh minimization, a
//! discrete mountain-pass evaluation of the curve value, and 1D node
//! matching.

mod eigen;
mod mountain;
mod nodematch;

pub use eigen::{lambda1_fem, lambda1_fem_seeded};
pub use mountain::{mountain_pass_c, mountain_pass_c_detailed, MountainPassOutcome, Path};
pub use nodematch::node_match_curve;

use crate::error::{Error, Result};
use crate::problem::Interval;
use crate::weights::Weight;

/// Uniform 1D mesh with nodes a = x_0 < ... < x_n = b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub interval: Interval,
    pub n_elems: usize,
}

impl Mesh1D {
    pub fn new(interval: Interval, n_elems: usize) -> Result<Self> {
        if n_elems == 0 {
            return Err(Error::DegenerateInput("mesh needs at least one element".into()));
        }
        Ok(Mesh1D { interval, n_elems })
    }

    pub fn h(&self) -> f64 {
        self.interval.len() / self.n_elems as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.interval.a + self.interval.len() * i as f64 / self.n_elems as f64
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elems + 1
    }
}

/// Piecewise-linear function by nodal values (boundary nodes included).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFn {
    pub mesh: Mesh1D,
    pub values: Vec<f64>,
}

impl DiscreteFn {
    pub fn zeros(mesh: Mesh1D) -> Self {
        DiscreteFn { mesh, values: vec![0.0; mesh.n_nodes()] }
    }

    pub fn from_fn(mesh: Mesh1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..mesh.n_nodes()).map(|i| f(mesh.node(i))).collect();
        DiscreteFn { mesh, values }
    }

    pub fn from_values(mesh: Mesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_nodes() {
            return Err(Error::DegenerateInput(format!(
                "{} nodal values on a mesh with {} nodes",
                values.len(),
                mesh.n_nodes()
            )));
        }
        Ok(DiscreteFn { mesh, values })
    }

    /// Slope of element e (constant there).
    pub fn slope(&self, e: usize) -> f64 {
        (self.values[e + 1] - self.values[e]) / self.mesh.h()
    }

    /// Interpolated value at a point inside element e with barycentric t in [0,1].
    fn value_in_elem(&self, e: usize, t: f64) -> f64 {
        self.values[e] * (1.0 - t) + self.values[e + 1] * t
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    /// Discrete L2 distance between nodal vectors (same mesh assumed).
    pub fn nodal_distance(&self, other: &DiscreteFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            * self.mesh.h().sqrt()
    }
}

// 3-point Gauss-Legendre rule mapped to [0, 1]: degree-5 exactness
const GAUSS_OFFSET: f64 = 0.387_298_334_620_741_69; // sqrt(3/5)/2
const GAUSS_W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

#[inline]
fn gauss_points() -> [(f64, f64); 3] {
    [(0.5 - GAUSS_OFFSET, GAUSS_W[0]), (0.5, GAUSS_W[1]), (0.5 + GAUSS_OFFSET, GAUSS_W[2])]
}

/// The 3-point Gauss rule on [0, 1] used by every quadrature in this module.
pub(crate) fn gauss_points_01() -> [(f64, f64); 3] {
    [(0.5 - GAUSS_OFFSET, GAUSS_W[0]), (0.5, GAUSS_W[1]), (0.5 + GAUSS_OFFSET, GAUSS_W[2])]
}

const PANEL_BUDGET: usize = 1 << 24;

/// The P1 space must resolve the fastest weight oscillation: h <= scale/10.
pub(crate) fn require_resolved(mesh: Mesh1D, weights: &[&Weight]) -> Result<()> {
    for w in weights {
        if let Some(scale) = w.oscillation_scale() {
            if mesh.h() > scale / 10.0 {
                return Err(Error::StepTooLarge { h: mesh.h(), limit: scale / 10.0 });
            }
        }
    }
    Ok(())
}

/// Subpanels per element required to resolve the fastest weight oscillation:
/// at least ceil(10 h / scale) panels for scale-oscillating weights.
pub(crate) fn panels_per_elem(h: f64, weights: &[&Weight]) -> Result<usize> {
    let mut n_sub = 1usize;
    for w in weights {
        if let Some(scale) = w.oscillation_scale() {
            let need = (10.0 * h / scale).ceil();
            if need > PANEL_BUDGET as f64 {
                return Err(Error::QuadratureBudgetExceeded {
                    requested: need as usize,
                    budget: PANEL_BUDGET,
                });
            }
            n_sub = n_sub.max(need as usize);
        }
    }
    Ok(n_sub)
}

/// Dirichlet energy A(u) = integral of |u'|^p: exact elementwise since the
/// P1 gradient is constant per element.
pub fn functional_a(u: &DiscreteFn, p: f64) -> f64 {
    let h = u.mesh.h();
    let mut acc = 0.0;
    for e in 0..u.mesh.n_elems {
        acc += h * u.slope(e).abs().powf(p);
    }
    acc
}

/// Weighted asymmetric mass B(u) = integral of m (u+)^p + s n (u-)^p by
/// composite Gauss quadrature, with enough subpanels per element to resolve
/// oscillating weights. The sign of the P1 interpolant at each quadrature
/// point decides which branch it feeds.
pub fn functional_b(u: &DiscreteFn, m: &Weight, n: &Weight, s: f64, p: f64) -> Result<f64> {
    let h = u.mesh.h();
    let n_sub = panels_per_elem(h, &[m, n])?;
    u.mesh.n_elems.checked_mul(n_sub).filter(|t| *t <= PANEL_BUDGET).ok_or(
        Error::QuadratureBudgetExceeded { requested: usize::MAX, budget: PANEL_BUDGET },
    )?;
    let mut acc = 0.0;
    for e in 0..u.mesh.n_elems {
        let x_left = u.mesh.node(e);
        for sub in 0..n_sub {
            let t0 = sub as f64 / n_sub as f64;
            let dt = 1.0 / n_sub as f64;
            for (tq, wq) in gauss_points() {
                let t = t0 + dt * tq;
                let x = x_left + h * t;
                let uv = u.value_in_elem(e, t);
                let val = if uv > 0.0 {
                    m.eval(x)? * uv.powf(p)
                } else if uv < 0.0 {
                    s * n.eval(x)? * (-uv).powf(p)
                } else {
                    0.0
                };
                acc += wq * dt * h * val;
            }
        }
    }
    Ok(acc)
}

/// Shifted Neumann energy A(u) + integral of m (u+)^p + n (u-)^p.
pub fn functional_a_shifted(u: &DiscreteFn, m: &Weight, n: &Weight, p: f64) -> Result<f64> {
    Ok(functional_a(u, p) + functional_b(u, m, n, 1.0, p)?)
}

/// Gradient of A with respect to nodal values.
pub(crate) fn grad_a(u: &DiscreteFn, p: f64, out: &mut [f64]) {
    let h = u.mesh.h();
    out.iter_mut().for_each(|g| *g = 0.0);
    for e in 0..u.mesh.n_elems {
        let d = u.slope(e);
        let f = if d == 0.0 { 0.0 } else { p * d.abs().powf(p - 1.0) * d.signum() };
        out[e] -= f;
        out[e + 1] += f;
        let _ = h;
    }
}

/// Gradient of B with respect to nodal values (same panel rule as B).
pub(crate) fn grad_b(
    u: &DiscreteFn,
    m: &Weight,
    n: &Weight,
    s: f64,
    p: f64,
    out: &mut [f64],
) -> Result<()> {
    let h = u.mesh.h();
    let n_sub = panels_per_elem(h, &[m, n])?;
    out.iter_mut().for_each(|g| *g = 0.0);
    for e in 0..u.mesh.n_elems {
        let x_left = u.mesh.node(e);
        for sub in 0..n_sub {
            let t0 = sub as f64 / n_sub as f64;
            let dt = 1.0 / n_sub as f64;
            for (tq, wq) in gauss_points() {
                let t = t0 + dt * tq;
                let x = x_left + h * t;
                let uv = u.value_in_elem(e, t);
                let dval = if uv > 0.0 {
                    p * m.eval(x)? * uv.powf(p - 1.0)
                } else if uv < 0.0 {
                    -s * p * n.eval(x)? * (-uv).powf(p - 1.0)
                } else {
                    0.0
                };
                let scale = wq * dt * h * dval;
                out[e] += scale * (1.0 - t);
                out[e + 1] += scale * t;
            }
        }
    }
    Ok(())
}

/// Lp norm of the P1 function itself (weight one, no subpanels needed).
pub fn norm_lp(u: &DiscreteFn, p: f64) -> f64 {
    let h = u.mesh.h();
    let mut acc = 0.0;
    for e in 0..u.mesh.n_elems {
        for (tq, wq) in gauss_points() {
            acc += wq * h * u.value_in_elem(e, tq).abs().powf(p);
        }
    }
    acc.powf(1.0 / p)
}

/// Lp norm of the gradient.
pub fn norm_lp_grad(u: &DiscreteFn, p: f64) -> f64 {
    functional_a(u, p).powf(1.0 / p)
}

/// Mean value over the mesh interval.
pub fn mean_value(u: &DiscreteFn) -> f64 {
    let h = u.mesh.h();
    let mut acc = 0.0;
    for e in 0..u.mesh.n_elems {
        acc += 0.5 * h * (u.values[e] + u.values[e + 1]);
    }
    acc / u.mesh.interval.len()
}

/// Solve a symmetric tridiagonal system in place (Thomas algorithm).
/// `diag` and `off` are consumed as scratch.
pub(crate) fn solve_tridiag(diag: &mut [f64], off: &mut [f64], rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let w = off[i - 1] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Interval;

    fn unit_mesh(n: usize) -> Mesh1D {
        Mesh1D::new(Interval::UNIT, n).unwrap()
    }

    fn one() -> Weight {
        Weight::constant(1.0).unwrap()
    }

    #[test]
    fn functional_a_examples() {
        let mesh = unit_mesh(64);
        let ramp = DiscreteFn::from_fn(mesh, |x| x);
        assert!((functional_a(&ramp, 2.0) - 1.0).abs() < 1e-13);

        let zero = DiscreteFn::zeros(mesh);
        assert_eq!(functional_a(&zero, 2.0), 0.0);

        let hat = DiscreteFn::from_fn(mesh, |x| 1.0 - (2.0 * x - 1.0).abs());
        assert!((functional_a(&hat, 2.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn functional_b_examples() {
        let mesh = unit_mesh(64);
        let ramp = DiscreteFn::from_fn(mesh, |x| x);
        let b = functional_b(&ramp, &one(), &one(), 1.0, 2.0).unwrap();
        assert!((b - 1.0 / 3.0).abs() < 1e-12);

        let mut neg = ramp.clone();
        neg.scale(-1.0);
        let bn = functional_b(&neg, &one(), &one(), 1.0, 2.0).unwrap();
        assert!((bn - 1.0 / 3.0).abs() < 1e-12);

        let zero = DiscreteFn::zeros(mesh);
        assert_eq!(functional_b(&zero, &one(), &one(), 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn functional_a_shifted_examples() {
        let mesh = unit_mesh(64);
        let cst = DiscreteFn::from_fn(mesh, |_| 1.0);
        let v = functional_a_shifted(&cst, &one(), &one(), 2.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let zero = DiscreteFn::zeros(mesh);
        assert_eq!(functional_a_shifted(&zero, &one(), &one(), 2.0).unwrap(), 0.0);

        let ramp = DiscreteFn::from_fn(mesh, |x| x);
        let v = functional_a_shifted(&ramp, &one(), &one(), 2.0).unwrap();
        assert!((v - (1.0 + 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn homogeneity_of_a_and_b() {
        // A is |c|^p-homogeneous for any sign; B is positively homogeneous
        // (a sign flip swaps the positive and negative parts), which is what
        // the 0-homogeneity of A/B along rays uses.
        let mesh = unit_mesh(48);
        let m = Weight::trig(2.0, 1.0, 1).unwrap();
        let n = Weight::piecewise_periodic(vec![1.0, 3.0]).unwrap();
        let u = DiscreteFn::from_fn(mesh, |x| (7.3 * x).sin() - 0.3);
        let mut state = 99u64;
        for p in [1.5, 2.0, 3.0] {
            for _ in 0..20 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                let signed = ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 6.0;
                if signed.abs() < 1e-3 {
                    continue;
                }
                let mut su = u.clone();
                su.scale(signed);
                let a_ratio = functional_a(&su, p) / functional_a(&u, p);
                let expect = signed.abs().powf(p);
                assert!((a_ratio - expect).abs() < 1e-9 * expect);

                let c = signed.abs();
                let mut cu = u.clone();
                cu.scale(c);
                let b_ratio = functional_b(&cu, &m, &n, 2.0, p).unwrap()
                    / functional_b(&u, &m, &n, 2.0, p).unwrap();
                assert!((b_ratio - expect).abs() < 1e-9 * expect);
            }
        }
    }

    #[test]
    fn shift_identity_is_exact() {
        // A_{m,n}(u)/B(u) = A(u)/B(u) + 1 pointwise in u
        let mesh = unit_mesh(32);
        let m = Weight::trig(2.0, 1.0, 1).unwrap();
        let n = Weight::constant(2.0).unwrap();
        let u = DiscreteFn::from_fn(mesh, |x| (3.0 * x).cos() - 0.4);
        for p in [1.5, 2.0, 3.0] {
            let b = functional_b(&u, &m, &n, 1.0, p).unwrap();
            let lhs = functional_a_shifted(&u, &m, &n, p).unwrap() / b;
            let rhs = functional_a(&u, p) / b + 1.0;
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mesh = unit_mesh(16);
        let m = Weight::trig(2.0, 1.0, 1).unwrap();
        let n = Weight::constant(1.5).unwrap();
        let u = DiscreteFn::from_fn(mesh, |x| (2.9 * x).sin() - 0.2);
        for p in [1.6, 2.0, 2.7] {
            let mut ga = vec![0.0; u.values.len()];
            grad_a(&u, p, &mut ga);
            let mut gb = vec![0.0; u.values.len()];
            grad_b(&u, &m, &n, 2.0, p, &mut gb).unwrap();
            let eps = 1e-6;
            for i in [0usize, 5, 9, 16] {
                let mut up = u.clone();
                up.values[i] += eps;
                let mut dn = u.clone();
                dn.values[i] -= eps;
                let fa = (functional_a(&up, p) - functional_a(&dn, p)) / (2.0 * eps);
                let fb = (functional_b(&up, &m, &n, 2.0, p).unwrap()
                    - functional_b(&dn, &m, &n, 2.0, p).unwrap())
                    / (2.0 * eps);
                assert!((ga[i] - fa).abs() < 1e-5 * (1.0 + fa.abs()), "A grad at {i}: {} vs {fa}", ga[i]);
                assert!((gb[i] - fb).abs() < 1e-5 * (1.0 + fb.abs()), "B grad at {i}: {} vs {fb}", gb[i]);
            }
        }
    }

    #[test]
    fn oscillating_weight_quadrature_refines() {
        // B with a rapidly oscillating weight should integrate to the averaged
        // value on functions that vanish at the ends, up to O(eps^2)
        let mesh = unit_mesh(256);
        let eps = 1.0 / 64.0;
        let m = Weight::scaled(Weight::trig(2.0, 1.0, 1).unwrap(), eps).unwrap();
        let n = one();
        let u = DiscreteFn::from_fn(mesh, |x| (std::f64::consts::PI * x).sin());
        let b_osc = functional_b(&u, &m, &n, 1.0, 2.0).unwrap();
        let b_avg = functional_b(&u, &Weight::constant(2.0).unwrap(), &n, 1.0, 2.0).unwrap();
        assert!((b_osc - b_avg).abs() < 5e-3 * b_avg, "{b_osc} vs {b_avg}");
    }

    #[test]
    fn tridiag_solver() {
        let mut diag = vec![2.0; 5];
        let mut off = vec![-1.0; 4];
        let x_true = [1.0, -2.0, 3.0, 0.5, 1.5];
        // rhs = T x
        let mut rhs = vec![0.0; 5];
        for i in 0..5 {
            rhs[i] = 2.0 * x_true[i];
            if i > 0 {
                rhs[i] -= x_true[i - 1];
            }
            if i < 4 {
                rhs[i] -= x_true[i + 1];
            }
        }
        solve_tridiag(&mut diag, &mut off, &mut rhs);
        for i in 0..5 {
            assert!((rhs[i] - x_true[i]).abs() < 1e-12);
        }
    }
}
