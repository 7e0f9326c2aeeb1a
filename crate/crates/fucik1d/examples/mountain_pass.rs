//! Discrete mountain pass for the min-max value c(m, sn): a waypoint path
//! from a nonnegative to a nonpositive profile is relaxed under annealed
//! log-sum-exp smoothing of the path maximum of A/B.
//!
//! ```bash
//! cargo run --release --example mountain_pass
//! ```

use fucik1d::oracles::fucik_curve_const;
use fucik1d::problem::{BoundaryCondition, Interval};
use fucik1d::varfem::{mountain_pass_c_detailed, Mesh1D};
use fucik1d::weights::Weight;

fn main() {
    let mesh = Mesh1D::new(Interval::UNIT, 512).unwrap();
    let one = Weight::constant(1.0).unwrap();

    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        println!("== {} conditions, p = 2, m = n = 1, K = 32 waypoints", bc.label());
        for s in [0.5, 1.0, 2.0] {
            let out = mountain_pass_c_detailed(&one, &one, s, 2.0, mesh, bc, 32).unwrap();
            let (want, _) = fucik_curve_const(s, 2.0, 1.0, 1.0, 1.0, bc).unwrap();
            println!(
                "  s = {s}: c = {:.6} (exact {:.6}, rel {:.2e}), {} iterations, \
                 sup-inf cross-check {:.1e}",
                out.value,
                want,
                (out.value - want).abs() / want,
                out.iterations,
                out.inverse_check
            );
        }
    }

    // monotonicity: pointwise larger weights lower the min-max value
    println!("\nmonotonicity in the weights (s = 1, Dirichlet):");
    let pairs: [(&str, Weight); 3] = [
        ("m = n = 1", Weight::constant(1.0).unwrap()),
        ("m = n = 2 + sin(2 pi x) (>= 1)", Weight::trig(2.0, 1.0, 1).unwrap()),
        ("m = n = 3 (>= 2 + sin)", Weight::constant(3.0).unwrap()),
    ];
    let mut prev = f64::INFINITY;
    for (label, w) in pairs {
        let out =
            mountain_pass_c_detailed(&w, &w, 1.0, 2.0, mesh, BoundaryCondition::Dirichlet, 32)
                .unwrap();
        let mark = if out.value <= prev * 1.001 { "decreases" } else { "VIOLATION" };
        println!("  {label}: c = {:.6}  [{mark}]", out.value);
        prev = out.value;
    }
}
