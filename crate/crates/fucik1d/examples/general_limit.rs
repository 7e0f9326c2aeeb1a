//! Weak* convergence without a rate: the family m_eps(x) = 2 + sin(2 pi
//! x/eps) + x converges weakly* to the nonconstant limit 2 + x, and the
//! curve values follow, with errors that decrease but no claimed rate.
//!
//! ```bash
//! cargo run --release --example general_limit
//! ```

use fucik1d::homog::{sweep_general, GeneralFamily, Quantity};
use fucik1d::problem::{BoundaryCondition, Interval};
use fucik1d::weights::Weight;

fn main() {
    let fam = GeneralFamily::new(Weight::trig(2.0, 1.0, 1).unwrap(), 0.0, 1.0).unwrap();
    let interval = Interval::UNIT;
    let eps: Vec<f64> = (3..=7).map(|k| 0.5f64.powi(k)).collect();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);

    println!("family m_eps(x) = 2 + sin(2 pi x / eps) + x, weak* limit 2 + x");
    println!("first-curve values alpha_eps(s) vs the limit problem's alpha_0(s):\n");
    let records = sweep_general(
        &fam,
        &fam,
        2.0,
        BoundaryCondition::Dirichlet,
        interval,
        &[0.5, 1.0, 2.0],
        &eps,
        jobs,
    )
    .unwrap();
    println!("{:>5} {:>10} {:>14} {:>14} {:>12}", "s", "eps", "alpha(eps)", "alpha_0", "error");
    for r in records.iter().filter(|r| r.quantity == Quantity::Alpha) {
        println!(
            "{:>5} {:>10.6} {:>14.7} {:>14.7} {:>12.3e}",
            r.s, r.epsilon, r.value_eps, r.value_limit, r.abs_error
        );
    }
    for s in [0.5, 1.0, 2.0] {
        let errs: Vec<f64> = records
            .iter()
            .filter(|r| r.s == s && r.quantity == Quantity::Alpha)
            .map(|r| r.abs_error)
            .collect();
        let monotone = errs.windows(2).all(|w| w[1] < w[0]);
        println!(
            "s = {s}: errors {} monotonically over eps",
            if monotone { "decrease" } else { "DO NOT decrease" }
        );
    }
}
