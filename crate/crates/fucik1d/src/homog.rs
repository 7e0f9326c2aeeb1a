//! The experiment engine: epsilon-sweeps of eigenvalues and curve points
//! for oscillating weights against their averaged limit problem, empirical
//! rate fits, and theorem-bound certification per record.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::bounds::{self, RateKind};
use crate::error::{Error, Result};
use crate::oracles;
use crate::problem::{BoundaryCondition, Interval, MethodTag, ProblemSpec};
use crate::shoot;
use crate::varfem::node_match_curve;
use crate::weights::Weight;

/// What a sweep record measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Lambda1,
    Alpha,
    Beta,
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::Lambda1 => "lambda1",
            Quantity::Alpha => "alpha",
            Quantity::Beta => "beta",
        }
    }
}

/// Which solver a curve sweep uses for the oscillating problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    Shooting,
    NodeMatch,
}

/// One row of a homogenization experiment. `bound_value` is infinite when
/// the theory claims no quantitative bound for the record (general weak*
/// families); for Neumann curve sweeps it carries the shape factor
/// (1+s) tau(s) eps with unit constant, since the constant there is not
/// explicit, and `within_bound` stays the mechanical comparison.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub quantity: Quantity,
    pub method: &'static str,
    pub bc: String,
    pub p: f64,
    pub s: f64,
    pub epsilon: f64,
    pub value_eps: f64,
    pub value_limit: f64,
    pub abs_error: f64,
    pub bound_value: f64,
    pub within_bound: bool,
    pub residual: f64,
    pub error: Option<String>,
}

impl SweepRecord {
    fn finish(mut self) -> Self {
        self.abs_error = (self.value_eps - self.value_limit).abs();
        self.within_bound = self.abs_error <= self.bound_value;
        self
    }

    fn failed(mut self, err: &Error) -> Self {
        self.value_eps = f64::NAN;
        self.abs_error = f64::NAN;
        self.within_bound = false;
        self.error = Some(err.to_string());
        self
    }
}

/// Least-squares fit of log(error) against log(eps).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

fn validate_eps_list(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return Err(Error::DegenerateInput("empty eps list".into()));
    }
    for pair in eps_list.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::DegenerateInput("eps list must be strictly decreasing".into()));
        }
    }
    for &e in eps_list {
        if !(e > 0.0) || e > 0.5 {
            return Err(Error::DegenerateInput(format!("eps = {e} outside (0, 0.5]")));
        }
    }
    Ok(())
}

/// Run `f` over the items on up to `jobs` threads, preserving input order
/// in the output.
pub fn par_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let n = items.len();
    if jobs <= 1 || n <= 1 {
        return items.into_iter().map(f).collect();
    }
    let work: Vec<Mutex<Option<T>>> = items.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let slots: Vec<Mutex<Option<R>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let item = work[i].lock().unwrap().take().unwrap();
                *slots[i].lock().unwrap() = Some(f(item));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().unwrap()).collect()
}

/// First-eigenvalue sweep: lambda1 of the scaled cell versus the averaged
/// weight, with the explicit rate bound C_m * eps per record.
pub fn sweep_lambda1(
    cell: &Weight,
    p: f64,
    bc: BoundaryCondition,
    interval: Interval,
    eps_list: &[f64],
    jobs: usize,
) -> Result<Vec<SweepRecord>> {
    validate_eps_list(eps_list)?;
    if !cell.is_cell_periodic() {
        return Err(Error::UnsupportedKind("lambda1 sweep needs a periodic cell"));
    }
    let avg = Weight::constant(cell.cell_average()?)?;
    let value_limit = shoot::lambda1_shoot(&avg, p, interval, bc)?;
    let c_m = bounds::constant_cm(p, cell, interval)?;

    let blank = |eps: f64| SweepRecord {
        quantity: Quantity::Lambda1,
        method: MethodTag::Shooting.label(),
        bc: bc.label().to_string(),
        p,
        s: 0.0,
        epsilon: eps,
        value_eps: f64::NAN,
        value_limit,
        abs_error: f64::NAN,
        bound_value: c_m * eps,
        within_bound: false,
        residual: 0.0,
        error: None,
    };

    Ok(par_map(jobs, eps_list.to_vec(), |eps| {
        let rec = blank(eps);
        match Weight::scaled(cell.clone(), eps)
            .and_then(|w| shoot::lambda1_shoot(&w, p, interval, bc))
        {
            Ok(v) => SweepRecord { value_eps: v, ..rec }.finish(),
            Err(e) => rec.failed(&e),
        }
    }))
}

fn curve_point(
    method: CurveMethod,
    spec: &ProblemSpec,
    s: f64,
    n_elems: usize,
) -> Result<crate::problem::FucikPoint> {
    match method {
        CurveMethod::Shooting => shoot::curve_point_shoot(spec, s),
        CurveMethod::NodeMatch => node_match_curve(spec, s, n_elems),
    }
}

/// Mesh size for node matching: the default 1024 elements, refined so each
/// sub-mesh resolves the weight oscillation with h <= scale/10.
pub fn node_match_elems(interval: Interval, weights: [&Weight; 2], override_n: Option<usize>) -> usize {
    let mut n = override_n.unwrap_or(1024);
    for scale in weights.iter().filter_map(|w| w.oscillation_scale()) {
        n = n.max((10.0 * interval.len() / scale).ceil() as usize);
    }
    n
}

/// Curve sweep at ratios `s_list`: alpha and beta records per (s, eps),
/// solved on the scaled weights and compared against the averaged limit
/// problem. Dirichlet records carry the explicit theorem bound
/// c (1+s) tau(s) eps; the Neumann constant is not explicit, so those
/// records carry the unit-constant shape factor, flagged by `bc`.
#[allow(clippy::too_many_arguments)]
pub fn sweep_curve(
    cell_m: &Weight,
    cell_n: &Weight,
    p: f64,
    bc: BoundaryCondition,
    interval: Interval,
    s_list: &[f64],
    eps_list: &[f64],
    method: CurveMethod,
    n_elems_override: Option<usize>,
    jobs: usize,
) -> Result<Vec<SweepRecord>> {
    validate_eps_list(eps_list)?;
    if s_list.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateInput("s list must be positive".into()));
    }
    let m_bar = cell_m.cell_average()?;
    let n_bar = cell_n.cell_average()?;
    let c = bounds::constant_c_teo2(p, cell_m, cell_n, interval)?;
    let dirichlet = bc == BoundaryCondition::Dirichlet;
    let method_tag = match method {
        CurveMethod::Shooting => MethodTag::Shooting,
        CurveMethod::NodeMatch => MethodTag::NodeMatch,
    };

    // limit values per s: exact oracle for Dirichlet, shooting on the
    // averaged constant weights for Neumann
    let mut limits = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let alpha0 = if dirichlet {
            oracles::fucik_curve_const(s, p, interval.len(), m_bar, n_bar, bc)?.0
        } else {
            let limit_spec = ProblemSpec::new(
                p,
                interval,
                bc,
                Weight::constant(m_bar)?,
                Weight::constant(n_bar)?,
            )?;
            shoot::curve_point_shoot(&limit_spec, s)?.alpha
        };
        limits.push(alpha0);
    }

    let mut tasks = Vec::new();
    for (si, &s) in s_list.iter().enumerate() {
        for &eps in eps_list {
            tasks.push((si, s, eps));
        }
    }

    let results = par_map(jobs, tasks, |(si, s, eps)| -> Vec<SweepRecord> {
        let alpha0 = limits[si];
        let tau = rate_factor_or_nan(s);
        let factor = (1.0 + s) * tau * eps;
        let (bound_alpha, bound_beta) =
            if dirichlet { (c * factor, c * s * factor) } else { (factor, s * factor) };
        let blank = |quantity: Quantity, value_limit: f64, bound_value: f64| SweepRecord {
            quantity,
            method: method_tag.label(),
            bc: bc.label().to_string(),
            p,
            s,
            epsilon: eps,
            value_eps: f64::NAN,
            value_limit,
            abs_error: f64::NAN,
            bound_value,
            within_bound: false,
            residual: 0.0,
            error: None,
        };
        let solved = Weight::scaled(cell_m.clone(), eps).and_then(|m| {
            let n = Weight::scaled(cell_n.clone(), eps)?;
            let n_elems = node_match_elems(interval, [&m, &n], n_elems_override);
            let spec = ProblemSpec::new(p, interval, bc, m, n)?;
            curve_point(method, &spec, s, n_elems)
        });
        match solved {
            Ok(pt) => vec![
                SweepRecord {
                    value_eps: pt.alpha,
                    residual: pt.residual,
                    ..blank(Quantity::Alpha, alpha0, bound_alpha)
                }
                .finish(),
                SweepRecord {
                    value_eps: pt.beta,
                    residual: pt.residual,
                    ..blank(Quantity::Beta, s * alpha0, bound_beta)
                }
                .finish(),
            ],
            Err(e) => vec![
                blank(Quantity::Alpha, alpha0, bound_alpha).failed(&e),
                blank(Quantity::Beta, s * alpha0, bound_beta).failed(&e),
            ],
        }
    });
    Ok(results.into_iter().flatten().collect())
}

fn rate_factor_or_nan(s: f64) -> f64 {
    bounds::rate_factor(s, RateKind::TauRate).unwrap_or(f64::NAN)
}

/// An eps-indexed family: a scaled periodic oscillation plus an affine
/// drift, whose weak* limit is the cell average plus the same drift.
#[derive(Debug, Clone)]
pub struct GeneralFamily {
    pub cell: Weight,
    pub drift_a: f64,
    pub drift_b: f64,
}

impl GeneralFamily {
    pub fn new(cell: Weight, drift_a: f64, drift_b: f64) -> Result<Self> {
        if !cell.is_cell_periodic() {
            return Err(Error::UnsupportedKind("general family needs a periodic cell"));
        }
        Ok(GeneralFamily { cell, drift_a, drift_b })
    }

    pub fn at_eps(&self, eps: f64, interval: Interval) -> Result<Weight> {
        Weight::affine_modulated(
            Weight::scaled(self.cell.clone(), eps)?,
            self.drift_a,
            self.drift_b,
            interval,
        )
    }

    /// The declared weak* limit: cell average plus the affine drift.
    pub fn limit(&self, interval: Interval) -> Result<Weight> {
        Weight::affine_modulated(
            Weight::constant(self.cell.cell_average()?)?,
            self.drift_a,
            self.drift_b,
            interval,
        )
    }
}

/// Curve sweep for general weak* families: the limit problem keeps its
/// non-constant limit weights and no rate bound is claimed.
#[allow(clippy::too_many_arguments)]
pub fn sweep_general(
    fam_m: &GeneralFamily,
    fam_n: &GeneralFamily,
    p: f64,
    bc: BoundaryCondition,
    interval: Interval,
    s_list: &[f64],
    eps_list: &[f64],
    jobs: usize,
) -> Result<Vec<SweepRecord>> {
    validate_eps_list(eps_list)?;
    if s_list.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateInput("s list must be positive".into()));
    }
    let limit_spec =
        ProblemSpec::new(p, interval, bc, fam_m.limit(interval)?, fam_n.limit(interval)?)?;
    let mut limits = Vec::with_capacity(s_list.len());
    for &s in s_list {
        limits.push(shoot::curve_point_shoot(&limit_spec, s)?.alpha);
    }

    let mut tasks = Vec::new();
    for (si, &s) in s_list.iter().enumerate() {
        for &eps in eps_list {
            tasks.push((si, s, eps));
        }
    }
    let results = par_map(jobs, tasks, |(si, s, eps)| -> Vec<SweepRecord> {
        let alpha0 = limits[si];
        let blank = |quantity: Quantity, value_limit: f64| SweepRecord {
            quantity,
            method: MethodTag::Shooting.label(),
            bc: bc.label().to_string(),
            p,
            s,
            epsilon: eps,
            value_eps: f64::NAN,
            value_limit,
            abs_error: f64::NAN,
            bound_value: f64::INFINITY,
            within_bound: false,
            residual: 0.0,
            error: None,
        };
        let solved = fam_m.at_eps(eps, interval).and_then(|m| {
            let n = fam_n.at_eps(eps, interval)?;
            let spec = ProblemSpec::new(p, interval, bc, m, n)?;
            shoot::curve_point_shoot(&spec, s)
        });
        match solved {
            Ok(pt) => vec![
                SweepRecord { value_eps: pt.alpha, residual: pt.residual, ..blank(Quantity::Alpha, alpha0) }
                    .finish(),
                SweepRecord {
                    value_eps: pt.beta,
                    residual: pt.residual,
                    ..blank(Quantity::Beta, s * alpha0)
                }
                .finish(),
            ],
            Err(e) => vec![
                blank(Quantity::Alpha, alpha0).failed(&e),
                blank(Quantity::Beta, s * alpha0).failed(&e),
            ],
        }
    });
    Ok(results.into_iter().flatten().collect())
}

/// Ordinary least squares of log(abs_error) on log(eps) over the usable
/// records (finite, positive error, no solver failure). When the first fit
/// has r^2 < 0.99 the largest eps is excluded once and the fit repeated,
/// provided at least four points remain.
pub fn fit_rate(records: &[SweepRecord]) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.error.is_none() && r.abs_error.is_finite() && r.abs_error > 0.0)
        .map(|r| (r.epsilon.ln(), r.abs_error.ln()))
        .collect();
    if usable.len() < 4 {
        return Err(Error::InsufficientData { got: usable.len(), need: 4 });
    }
    let first = ols(&usable);
    if first.r_squared < 0.99 && usable.len() > 4 {
        let max_eps = usable.iter().map(|&(x, _)| x).fold(f64::NEG_INFINITY, f64::max);
        let trimmed: Vec<(f64, f64)> = usable.iter().cloned().filter(|&(x, _)| x < max_eps).collect();
        return Ok(ols(&trimmed));
    }
    Ok(first)
}

fn ols(points: &[(f64, f64)]) -> RateFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let my = points.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = points.iter().map(|&(_, y)| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    RateFit { slope, intercept, r_squared, n_points: points.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::BoundaryCondition::*;
    use std::f64::consts::PI;

    fn trig_cell() -> Weight {
        Weight::trig(2.0, 1.0, 1).unwrap()
    }

    #[test]
    fn fit_rate_synthetic() {
        let mk = |eps: f64, err: f64| SweepRecord {
            quantity: Quantity::Lambda1,
            method: "shooting",
            bc: "dirichlet".into(),
            p: 2.0,
            s: 0.0,
            epsilon: eps,
            value_eps: err,
            value_limit: 0.0,
            abs_error: err,
            bound_value: f64::INFINITY,
            within_bound: true,
            residual: 0.0,
            error: None,
        };
        let linear: Vec<SweepRecord> = [0.5, 0.25, 0.125, 0.0625].iter().map(|&e| mk(e, 3.0 * e)).collect();
        let fit = fit_rate(&linear).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);

        let quad: Vec<SweepRecord> = [0.5, 0.25, 0.125, 0.0625].iter().map(|&e| mk(e, e * e)).collect();
        let fit = fit_rate(&quad).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);

        // zero-error records are excluded; fewer than 4 usable points is an error
        let few: Vec<SweepRecord> = vec![mk(0.5, 0.1), mk(0.25, 0.0), mk(0.125, 0.05), mk(0.0625, 0.01)];
        assert!(matches!(fit_rate(&few), Err(Error::InsufficientData { got: 3, need: 4 })));
    }

    #[test]
    fn sweep_lambda1_constant_cell_zero_error() {
        let cell = Weight::constant(2.0).unwrap();
        let recs = sweep_lambda1(&cell, 2.0, Dirichlet, Interval::UNIT, &[0.25, 0.125], 1).unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert!(r.error.is_none());
            assert_eq!(r.abs_error, 0.0);
            assert!(r.within_bound);
            assert_eq!(r.bound_value, 0.0); // zero deviation
            assert!((r.value_limit - PI * PI / 2.0).abs() < 1e-7);
        }
    }

    #[test]
    fn sweep_lambda1_neumann_trivial() {
        let recs = sweep_lambda1(&trig_cell(), 2.0, Neumann, Interval::UNIT, &[0.25, 0.125], 1).unwrap();
        for r in &recs {
            assert_eq!(r.value_eps, 0.0);
            assert_eq!(r.value_limit, 0.0);
            assert!(r.within_bound);
        }
    }

    #[test]
    fn sweep_lambda1_within_bound_and_limit() {
        let eps = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
        let recs = sweep_lambda1(&trig_cell(), 2.0, Dirichlet, Interval::UNIT, &eps, 2).unwrap();
        assert_eq!(recs.len(), 4);
        for r in &recs {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert!(r.within_bound, "error {} vs bound {}", r.abs_error, r.bound_value);
            assert!((r.value_limit - PI * PI / 2.0).abs() < 1e-7);
        }
    }

    #[test]
    fn sweep_eps_list_validation() {
        let cell = trig_cell();
        assert!(sweep_lambda1(&cell, 2.0, Dirichlet, Interval::UNIT, &[], 1).is_err());
        assert!(sweep_lambda1(&cell, 2.0, Dirichlet, Interval::UNIT, &[0.125, 0.25], 1).is_err());
        assert!(sweep_lambda1(&cell, 2.0, Dirichlet, Interval::UNIT, &[0.7, 0.25], 1).is_err());
    }

    #[test]
    fn sweep_curve_constant_cells_zero_error() {
        let cell = Weight::constant(1.0).unwrap();
        let recs = sweep_curve(
            &cell,
            &cell,
            2.0,
            Dirichlet,
            Interval::UNIT,
            &[2.0],
            &[0.25, 0.125],
            CurveMethod::Shooting,
            None,
            1,
        )
        .unwrap();
        assert_eq!(recs.len(), 4); // alpha and beta per eps
        for r in &recs {
            // the shot and the limit agree to solver tolerance; the bound is 0
            assert!(r.abs_error < 1e-9 * r.value_limit, "{}", r.abs_error);
        }
    }

    #[test]
    fn sweep_curve_symmetric_s_one_alpha_equals_beta() {
        let recs = sweep_curve(
            &trig_cell(),
            &trig_cell(),
            2.0,
            Dirichlet,
            Interval::UNIT,
            &[1.0],
            &[0.125],
            CurveMethod::Shooting,
            None,
            1,
        )
        .unwrap();
        let alpha = recs.iter().find(|r| r.quantity == Quantity::Alpha).unwrap();
        let beta = recs.iter().find(|r| r.quantity == Quantity::Beta).unwrap();
        assert_eq!(alpha.value_eps, beta.value_eps);
        assert_eq!(alpha.value_limit, beta.value_limit);
        // averaged limit: constant 2 divides the unweighted value
        assert!((alpha.value_limit - 2.0 * PI * PI).abs() < 1e-8);
        assert!(alpha.within_bound && beta.within_bound);
    }

    #[test]
    fn sweep_general_monotone_errors() {
        let fam = GeneralFamily::new(trig_cell(), 0.0, 1.0).unwrap();
        let eps = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0];
        let recs =
            sweep_general(&fam, &fam, 2.0, Dirichlet, Interval::UNIT, &[1.0], &eps, 2).unwrap();
        let alphas: Vec<&SweepRecord> =
            recs.iter().filter(|r| r.quantity == Quantity::Alpha).collect();
        assert_eq!(alphas.len(), 3);
        for w in alphas.windows(2) {
            assert!(
                w[1].abs_error < w[0].abs_error,
                "errors not decreasing: {} then {}",
                w[0].abs_error,
                w[1].abs_error
            );
        }
        assert!(recs.iter().all(|r| r.bound_value.is_infinite() && r.within_bound));
    }

    #[test]
    fn sweep_general_constant_family_zero_error() {
        let fam = GeneralFamily::new(Weight::constant(2.0).unwrap(), 0.5, 0.0).unwrap();
        let recs =
            sweep_general(&fam, &fam, 2.0, Dirichlet, Interval::UNIT, &[1.0], &[0.25, 0.125], 1)
                .unwrap();
        for r in &recs {
            assert_eq!(r.abs_error, 0.0);
        }
    }

    #[test]
    fn par_map_preserves_order() {
        let items: Vec<usize> = (0..37).collect();
        let out = par_map(4, items.clone(), |i| i * i);
        assert_eq!(out, items.iter().map(|i| i * i).collect::<Vec<_>>());
    }
}
