//! The first nontrivial curve (alpha(s), s alpha(s)) of the asymmetric
//! spectrum, computed by shooting and by node matching, against the
//! constant-weight closed form.
//!
//! ```bash
//! cargo run --release --example fucik_curve
//! ```

use fucik1d::oracles::{fucik_curve_const, fucik_node_const};
use fucik1d::problem::{BoundaryCondition, Interval, ProblemSpec};
use fucik1d::shoot::curve_point_shoot;
use fucik1d::varfem::node_match_curve;
use fucik1d::weights::Weight;

fn main() {
    let s_grid = [0.25, 0.5, 1.0, 2.0, 4.0];

    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        println!("== {} conditions, p = 2, m = n = 1 on (0,1)", bc.label());
        println!(
            "{:>6} {:>12} {:>12} {:>12} {:>9} {:>9}",
            "s", "oracle", "shooting", "node-match", "node", "oracle t"
        );
        let spec = ProblemSpec::new(
            2.0,
            Interval::UNIT,
            bc,
            Weight::constant(1.0).unwrap(),
            Weight::constant(1.0).unwrap(),
        )
        .unwrap();
        for &s in &s_grid {
            let (alpha, _beta) = fucik_curve_const(s, 2.0, 1.0, 1.0, 1.0, bc).unwrap();
            let t = fucik_node_const(s, 2.0, 1.0, 1.0, 1.0, bc).unwrap();
            let sh = curve_point_shoot(&spec, s).unwrap();
            let nm = node_match_curve(&spec, s, 1024).unwrap();
            println!(
                "{s:>6} {alpha:>12.6} {:>12.6} {:>12.6} {:>9.5} {t:>9.5}",
                sh.alpha, nm.alpha, sh.node
            );
        }
        println!();
    }

    // a genuinely nonconstant weight pair: no closed form, two independent
    // methods agree
    println!("== nonconstant weights m = 2 + sin(2 pi x), n piecewise [1,3], Dirichlet");
    let spec = ProblemSpec::new(
        2.0,
        Interval::UNIT,
        BoundaryCondition::Dirichlet,
        Weight::trig(2.0, 1.0, 1).unwrap(),
        Weight::piecewise_periodic(vec![1.0, 3.0]).unwrap(),
    )
    .unwrap();
    println!("{:>6} {:>12} {:>12} {:>10}", "s", "shooting", "node-match", "rel gap");
    for &s in &s_grid {
        let sh = curve_point_shoot(&spec, s).unwrap();
        let nm = node_match_curve(&spec, s, 1024).unwrap();
        println!(
            "{s:>6} {:>12.6} {:>12.6} {:>10.2e}",
            sh.alpha,
            nm.alpha,
            (sh.alpha - nm.alpha).abs() / sh.alpha
        );
    }
}
