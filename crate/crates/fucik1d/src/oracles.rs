//! Closed-form ground truth for constant-weight problems: generalized
//! p-trigonometry, exact eigenvalues of the 1D p-Laplacian, and the exact
//! first nontrivial asymmetric curve on an interval.
//!
//! Eigenvalues with constant weight w on an interval of length L:
//! lambda_k = (p-1) (k pi_p / L)^p / w, where pi_p is the generalized
//! half-period. Mixed conditions replace k by k - 1/2; Neumann adds the
//! principal eigenvalue 0 at k = 0.

use crate::error::{Error, Result};
use crate::problem::BoundaryCondition;

/// Generalized half-period pi_p = 2 pi / (p sin(pi/p)).
pub fn pi_p(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::DegenerateInput(format!("pi_p needs p > 1, got {p}")));
    }
    let pi = std::f64::consts::PI;
    Ok(2.0 * pi / (p * (pi / p).sin()))
}

/// Exponent p bundled with its half-period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTrig {
    pub p: f64,
    pub pi_p: f64,
}

impl PTrig {
    pub fn new(p: f64) -> Result<Self> {
        Ok(PTrig { p, pi_p: pi_p(p)? })
    }
}

/// k-th eigenvalue of the constant-weight p-Laplacian on an interval of
/// length `length`. Dirichlet and mixed conditions index from k = 1;
/// Neumann indexes arcs from k = 0 with lambda_0 = 0.
pub fn plap_eigen(k: u32, p: f64, length: f64, bc: BoundaryCondition, w: f64) -> Result<f64> {
    if !(p > 1.0) || !(length > 0.0) || !(w > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "plap_eigen(p = {p}, L = {length}, w = {w})"
        )));
    }
    let pip = pi_p(p)?;
    let arcs = match bc {
        BoundaryCondition::Dirichlet => {
            if k < 1 {
                return Err(Error::DegenerateInput("Dirichlet eigenvalue index k >= 1".into()));
            }
            k as f64
        }
        BoundaryCondition::Neumann => {
            if k == 0 {
                return Ok(0.0);
            }
            k as f64
        }
        BoundaryCondition::MixedND | BoundaryCondition::MixedDN => {
            if k < 1 {
                return Err(Error::DegenerateInput("mixed eigenvalue index k >= 1".into()));
            }
            k as f64 - 0.5
        }
    };
    Ok((p - 1.0) * (arcs * pip / length).powf(p) / w)
}

/// Second eigenvalue of the unweighted p-Laplacian for the given boundary
/// condition: two arcs for Dirichlet, one arc for Neumann (the first
/// eigenvalue being 0 there).
pub fn second_eigen_unweighted(p: f64, length: f64, bc: BoundaryCondition) -> Result<f64> {
    match bc {
        BoundaryCondition::Dirichlet => plap_eigen(2, p, length, bc, 1.0),
        BoundaryCondition::Neumann => plap_eigen(1, p, length, bc, 1.0),
        _ => Err(Error::DegenerateInput("second eigenvalue defined for Dirichlet/Neumann".into())),
    }
}

fn arc_sum(alpha: f64, s: f64, p: f64, m: f64, n: f64, kappa: f64, pip: f64) -> f64 {
    kappa * pip * (((p - 1.0) / (alpha * m)).powf(1.0 / p) + ((p - 1.0) / (s * alpha * n)).powf(1.0 / p))
}

/// First nontrivial curve point (alpha(s), beta(s)) for constant weights.
///
/// Solves, by bisection on alpha, the arc-length equation
/// kappa pi_p ((p-1)/(alpha m))^(1/p) + kappa pi_p ((p-1)/(s alpha n))^(1/p) = L
/// with kappa = 1 (Dirichlet: one positive plus one negative full arc) or
/// kappa = 1/2 (Neumann: two half arcs), and returns beta = s * alpha.
pub fn fucik_curve_const(
    s: f64,
    p: f64,
    length: f64,
    m: f64,
    n: f64,
    bc: BoundaryCondition,
) -> Result<(f64, f64)> {
    if !(s > 0.0) {
        return Err(Error::DegenerateInput(format!("curve parameter s = {s}")));
    }
    if !(p > 1.0) || !(length > 0.0) || !(m > 0.0) || !(n > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "fucik_curve_const(p = {p}, L = {length}, m = {m}, n = {n})"
        )));
    }
    let kappa = match bc {
        BoundaryCondition::Dirichlet => 1.0,
        BoundaryCondition::Neumann => 0.5,
        _ => {
            return Err(Error::DegenerateInput(
                "constant-weight curve defined for Dirichlet/Neumann".into(),
            ))
        }
    };
    let pip = pi_p(p)?;

    // The arc sum is strictly decreasing in alpha, so bisection is safe.
    let mut lo = 1e-12;
    let mut hi = 1e14;
    if arc_sum(lo, s, p, m, n, kappa, pip) < length || arc_sum(hi, s, p, m, n, kappa, pip) > length {
        return Err(Error::BracketFailure("arc-length bracket does not straddle L".into()));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if arc_sum(mid, s, p, m, n, kappa, pip) > length {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * mid.abs() {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    Ok((alpha, s * alpha))
}

/// Interior zero of the constant-weight curve solution, as an offset from
/// the left endpoint: the length of the (first) positive arc.
pub fn fucik_node_const(
    s: f64,
    p: f64,
    length: f64,
    m: f64,
    n: f64,
    bc: BoundaryCondition,
) -> Result<f64> {
    let (alpha, _) = fucik_curve_const(s, p, length, m, n, bc)?;
    let kappa = if bc == BoundaryCondition::Neumann { 0.5 } else { 1.0 };
    Ok(kappa * pi_p(p)? * ((p - 1.0) / (alpha * m)).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::BoundaryCondition::*;
    use std::f64::consts::PI;

    #[test]
    fn pi_p_values() {
        assert!((pi_p(2.0).unwrap() - PI).abs() < 1e-15);
        for p in [1.1, 1.5, 2.0, 3.0, 7.0] {
            assert!(pi_p(p).unwrap() > 0.0);
        }
        assert!(pi_p(1.0).is_err());
        let pt = PTrig::new(3.0).unwrap();
        assert!((pt.pi_p - 4.0 * PI / (3.0 * 3.0f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn plap_eigen_examples() {
        let v = plap_eigen(1, 2.0, 1.0, Dirichlet, 1.0).unwrap();
        assert!((v - PI * PI).abs() < 1e-12);

        assert_eq!(plap_eigen(0, 2.0, 1.0, Neumann, 1.0).unwrap(), 0.0);

        let v3 = plap_eigen(1, 3.0, 1.0, Dirichlet, 1.0).unwrap();
        let pi3 = 4.0 * PI / (3.0 * 3.0f64.sqrt());
        assert!((v3 - 2.0 * pi3.powi(3)).abs() < 1e-10);
        assert!((v3 - 28.29) < 0.01);

        // mixed: half-integer arc counts
        let vm = plap_eigen(1, 2.0, 1.0, MixedND, 1.0).unwrap();
        assert!((vm - (PI / 2.0).powi(2)).abs() < 1e-12);

        // constant weight divides the eigenvalue
        let vw = plap_eigen(1, 2.0, 1.0, Dirichlet, 2.0).unwrap();
        assert!((vw - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn plap_eigen_rejects_degenerate() {
        assert!(plap_eigen(1, 1.0, 1.0, Dirichlet, 1.0).is_err());
        assert!(plap_eigen(1, 2.0, 0.0, Dirichlet, 1.0).is_err());
        assert!(plap_eigen(1, 2.0, 1.0, Dirichlet, -1.0).is_err());
        assert!(plap_eigen(0, 2.0, 1.0, Dirichlet, 1.0).is_err());
    }

    #[test]
    fn fucik_curve_examples() {
        let (a, b) = fucik_curve_const(1.0, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
        assert!((a - 4.0 * PI * PI).abs() < 1e-8);
        assert!((b - 4.0 * PI * PI).abs() < 1e-8);

        let (a, b) = fucik_curve_const(4.0, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
        assert!((a - 2.25 * PI * PI).abs() < 1e-8);
        assert!((b - 9.0 * PI * PI).abs() < 1e-8);

        let (a, b) = fucik_curve_const(1.0, 2.0, 1.0, 1.0, 1.0, Neumann).unwrap();
        assert!((a - PI * PI).abs() < 1e-9);
        assert!((b - PI * PI).abs() < 1e-9);

        // closed form alpha(s) = pi^2 (1 + s^(-1/2))^2 for p = 2, m = n = 1
        for s in [0.25, 0.5, 2.0, 4.0, 10.0] {
            let (a, _) = fucik_curve_const(s, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
            let exact = PI * PI * (1.0 + s.powf(-0.5)).powi(2);
            assert!((a - exact).abs() < 1e-9 * exact, "s = {s}");
        }
        assert!(fucik_curve_const(0.0, 2.0, 1.0, 1.0, 1.0, Dirichlet).is_err());
    }

    #[test]
    fn curve_passes_through_second_eigenvalue() {
        for &p in &[1.5, 2.0, 3.0] {
            for &bc in &[Dirichlet, Neumann] {
                for &w in &[1.0, 2.0] {
                    let (a, b) = fucik_curve_const(1.0, p, 1.0, w, w, bc).unwrap();
                    let lam2 = second_eigen_unweighted(p, 1.0, bc).unwrap() / w;
                    assert!(
                        (a - lam2).abs() < 1e-10 * lam2,
                        "p = {p}, bc = {bc:?}: {a} vs {lam2}"
                    );
                    assert!((b - lam2).abs() < 1e-10 * lam2);
                }
            }
        }
    }

    #[test]
    fn alpha_decreasing_beta_increasing() {
        for &bc in &[Dirichlet, Neumann] {
            let grid: Vec<f64> = (0..40).map(|i| 0.05 * 1.25f64.powi(i)).collect();
            let mut prev: Option<(f64, f64)> = None;
            for &s in &grid {
                let (a, b) = fucik_curve_const(s, 2.5, 1.0, 1.0, 2.0, bc).unwrap();
                if let Some((pa, pb)) = prev {
                    assert!(a < pa, "alpha not decreasing at s = {s}");
                    assert!(b > pb, "beta not increasing at s = {s}");
                }
                prev = Some((a, b));
            }
        }
    }

    #[test]
    fn node_examples() {
        let t = fucik_node_const(4.0, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-9);
        let t = fucik_node_const(1.0, 2.0, 1.0, 1.0, 1.0, Neumann).unwrap();
        assert!((t - 0.5).abs() < 1e-9);
        // general closed form: t = sqrt(s)/(1 + sqrt(s)) for p = 2, m = n = 1
        for s in [0.25, 0.5, 2.0, 9.0] {
            let t = fucik_node_const(s, 2.0, 1.0, 1.0, 1.0, Dirichlet).unwrap();
            let exact = s.sqrt() / (1.0 + s.sqrt());
            assert!((t - exact).abs() < 1e-9);
        }
    }
}
