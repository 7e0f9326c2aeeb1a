//! First eigenvalues of the weighted 1D p-Laplacian, three ways:
//! the constant-weight closed form, shooting, and FEM Rayleigh
//! minimization.
//!
//! ```bash
//! cargo run --release --example eigenvalues
//! ```

use fucik1d::oracles::{pi_p, plap_eigen};
use fucik1d::problem::{BoundaryCondition, Interval};
use fucik1d::shoot::lambda1_shoot;
use fucik1d::varfem::{lambda1_fem, Mesh1D};
use fucik1d::weights::Weight;

fn main() {
    println!("generalized half-periods pi_p:");
    for p in [1.5, 2.0, 3.0, 5.0] {
        println!("  p = {p}: pi_p = {:.10}", pi_p(p).unwrap());
    }

    let interval = Interval::UNIT;
    let mesh = Mesh1D::new(interval, 1024).unwrap();
    println!("\nlambda_1 on (0,1), constant weight w:");
    println!(
        "{:>10} {:>6} {:>6} {:>14} {:>14} {:>14} {:>10}",
        "bc", "p", "w", "closed form", "shooting", "fem", "max rel err"
    );
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::MixedND, BoundaryCondition::MixedDN]
    {
        for p in [1.5, 2.0, 3.0] {
            for w in [1.0, 2.0] {
                let weight = Weight::constant(w).unwrap();
                let exact = plap_eigen(1, p, 1.0, bc, w).unwrap();
                let shot = lambda1_shoot(&weight, p, interval, bc).unwrap();
                let fem = lambda1_fem(&weight, p, mesh, bc).unwrap();
                let rel = ((shot - exact).abs() / exact).max((fem - exact).abs() / exact);
                println!(
                    "{:>10} {:>6} {:>6} {:>14.8} {:>14.8} {:>14.8} {:>10.2e}",
                    bc.label(),
                    p,
                    w,
                    exact,
                    shot,
                    fem,
                    rel
                );
            }
        }
    }

    // no closed form for oscillating weights; shooting and FEM agree and
    // land near the averaged-weight eigenvalue
    println!("\noscillating weight m(x) = 2 + sin(2 pi x / eps):");
    let cell = Weight::trig(2.0, 1.0, 1).unwrap();
    for eps in [1.0 / 4.0, 1.0 / 16.0, 1.0 / 64.0] {
        let w = Weight::scaled(cell.clone(), eps).unwrap();
        let shot = lambda1_shoot(&w, 2.0, interval, BoundaryCondition::Dirichlet).unwrap();
        let averaged = plap_eigen(1, 2.0, 1.0, BoundaryCondition::Dirichlet, 2.0).unwrap();
        println!(
            "  eps = {eps:>8}: lambda1 = {shot:.8} (averaged limit {averaged:.8}, gap {:.2e})",
            (shot - averaged).abs()
        );
    }
}
