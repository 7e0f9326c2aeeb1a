//! The inequality toolbox behind the convergence rates: the oscillating
//! averaging estimate, the scaled-cell Poincare inequality with its sharp
//! constant, the piecewise rate factors, and the curve upper/lower bounds.
//!
//! ```bash
//! cargo run --release --example inequalities
//! ```

use fucik1d::bounds::{
    check_averaging_dirichlet, check_averaging_neumann, check_poincare_scaled,
    curve_bounds_check, rate_factor, RateKind, TheoremConstants,
};
use fucik1d::problem::{BoundaryCondition, Interval, ProblemSpec};
use fucik1d::shoot::curve_point_shoot;
use fucik1d::varfem::{DiscreteFn, Mesh1D};
use fucik1d::weights::Weight;

fn main() {
    let interval = Interval::UNIT;
    let tc = TheoremConstants::new(2.0, interval).unwrap();
    println!(
        "constants on (0,1), p = 2: c1 = {}, c_p = {:.6}, mu1 = {:.6}, mu2 = {:.6}",
        tc.c1, tc.c_p, tc.mu1, tc.mu2
    );

    println!("\nrate factors (tau_rate = tau_curve^2, omega * tau_curve = 1 below s = 1):");
    for s in [0.25, 0.5, 1.0, 2.0] {
        println!(
            "  s = {s}: tau_rate = {}, tau_curve = {}, omega = {}",
            rate_factor(s, RateKind::TauRate).unwrap(),
            rate_factor(s, RateKind::TauCurve).unwrap(),
            rate_factor(s, RateKind::Omega).unwrap()
        );
    }

    // averaging inequality on an off-center profile (a symmetric one pairs
    // to zero against whole-period oscillations)
    println!("\noscillating-average inequality, g = 2 + sin(2 pi y), u an off-center hat:");
    let g = Weight::trig(2.0, 1.0, 1).unwrap();
    let mesh = Mesh1D::new(interval, 2048).unwrap();
    let hat = DiscreteFn::from_fn(mesh, |x| if x <= 0.37 { x / 0.37 } else { (1.0 - x) / 0.63 });
    for eps in [0.1, 0.05, 0.01] {
        let chk = check_averaging_dirichlet(&g, eps, &hat, 2.0).unwrap();
        println!(
            "  eps = {eps}: lhs = {:.3e} <= rhs = {:.3e} ({}); gradient form rhs = {:.3e}",
            chk.lhs,
            chk.rhs,
            if chk.holds { "holds" } else { "VIOLATED" },
            chk.rhs_gradient_form
        );
    }

    println!("\nbilinear Neumann form, v = 1 (ratio stays bounded as eps shrinks):");
    let ramp = DiscreteFn::from_fn(mesh, |x| x);
    let one_fn = DiscreteFn::from_fn(mesh, |_| 1.0);
    for eps in [0.1, 0.05, 0.025] {
        let chk = check_averaging_neumann(&g, eps, &ramp, &one_fn, 2.0).unwrap();
        println!("  eps = {eps}: lhs = {:.3e}, lhs/(eps |u| |v|) = {:.4}", chk.lhs, chk.ratio);
    }

    println!("\nscaled-cell Poincare inequality, saturated by cos(pi x / eps):");
    for eps in [1.0, 0.25, 0.0625] {
        let cell_mesh = Mesh1D::new(Interval::new(0.0, eps).unwrap(), 4096).unwrap();
        let u = DiscreteFn::from_fn(cell_mesh, |x| (std::f64::consts::PI * x / eps).cos());
        let chk = check_poincare_scaled(2.0, eps, &u).unwrap();
        println!("  eps = {eps}: lhs/rhs = {:.9} (equality is sharp)", chk.lhs / chk.rhs);
    }

    println!("\ncurve bounds on shot points, m = 2 + sin(2 pi x), n = 1, Dirichlet:");
    let spec = ProblemSpec::new(
        2.0,
        interval,
        BoundaryCondition::Dirichlet,
        g.clone(),
        Weight::constant(1.0).unwrap(),
    )
    .unwrap();
    for s in [0.25, 1.0, 4.0] {
        let pt = curve_point_shoot(&spec, s).unwrap();
        let rep = curve_bounds_check(&pt, &spec.m, &spec.n, 2.0, interval, spec.bc).unwrap();
        print!("  s = {s}: alpha = {:.4};", pt.alpha);
        for e in &rep.entries {
            print!(" {} {}", e.name, if e.passed { "ok" } else { "FAIL" });
        }
        println!();
    }
}
