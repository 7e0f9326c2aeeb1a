//! Homogenization sweeps: eigenvalues and curve points of rapidly
//! oscillating weights m(x/eps) against the averaged limit problem, with
//! the explicit rate bounds certified per record and the empirical rate
//! fitted from the error decay.
//!
//! ```bash
//! cargo run --release --example homog_sweep
//! ```

use fucik1d::bounds::{constant_c_teo2, constant_cm};
use fucik1d::homog::{fit_rate, sweep_curve, sweep_lambda1, CurveMethod, Quantity};
use fucik1d::problem::{BoundaryCondition, Interval};
use fucik1d::weights::Weight;

fn main() {
    let cell = Weight::trig(2.0, 1.0, 1).unwrap();
    let interval = Interval::UNIT;
    let eps: Vec<f64> = (3..=7).map(|k| 0.5f64.powi(k)).collect();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);

    let cm = constant_cm(2.0, &cell, interval).unwrap();
    println!("cell m(y) = 2 + sin(2 pi y); rate constant C_m = {cm:.4}");
    println!("\nlambda1 sweep (Dirichlet):");
    println!(
        "{:>10} {:>14} {:>14} {:>12} {:>12} {:>7}",
        "eps", "lambda1(eps)", "lambda1(avg)", "error", "C_m eps", "within"
    );
    let records =
        sweep_lambda1(&cell, 2.0, BoundaryCondition::Dirichlet, interval, &eps, jobs).unwrap();
    for r in &records {
        println!(
            "{:>10.6} {:>14.8} {:>14.8} {:>12.3e} {:>12.4} {:>7}",
            r.epsilon, r.value_eps, r.value_limit, r.abs_error, r.bound_value, r.within_bound
        );
    }
    let fit = fit_rate(&records).unwrap();
    println!(
        "empirical rate: error ~ eps^{:.3} (r^2 = {:.5}); the linear bound holds with heavy margin",
        fit.slope, fit.r_squared
    );

    let c2 = constant_c_teo2(2.0, &cell, &cell, interval).unwrap();
    println!("\ncurve sweep at s in {{1/2, 1, 2}} (Dirichlet), rate constant c = {c2:.1}:");
    let records = sweep_curve(
        &cell,
        &cell,
        2.0,
        BoundaryCondition::Dirichlet,
        interval,
        &[0.5, 1.0, 2.0],
        &eps[..4],
        CurveMethod::Shooting,
        None,
        jobs,
    )
    .unwrap();
    println!(
        "{:>5} {:>10} {:>14} {:>14} {:>12} {:>12} {:>7}",
        "s", "eps", "alpha(eps)", "alpha(limit)", "error", "bound", "within"
    );
    for r in records.iter().filter(|r| r.quantity == Quantity::Alpha) {
        println!(
            "{:>5} {:>10.6} {:>14.7} {:>14.7} {:>12.3e} {:>12.4} {:>7}",
            r.s, r.epsilon, r.value_eps, r.value_limit, r.abs_error, r.bound_value, r.within_bound
        );
    }
    for s in [0.5, 1.0, 2.0] {
        let subset: Vec<_> = records
            .iter()
            .filter(|r| r.s == s && r.quantity == Quantity::Alpha)
            .cloned()
            .collect();
        let fit = fit_rate(&subset).unwrap();
        println!("  s = {s}: empirical rate eps^{:.3} (r^2 = {:.5})", fit.slope, fit.r_squared);
    }
}
