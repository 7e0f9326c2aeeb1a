//! Weight families for the coefficient pair (m, n): positive, bounded,
//! with exact cell averages and sup deviations where closed forms exist.
//!
//! All weights are immutable value objects; bounds are computed at
//! construction and stored, so the theorem constants can read them cheaply.

use crate::error::{Error, Result};
use crate::problem::Interval;

/// Concrete functional form of a weight.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// w(x) = c
    Constant(f64),
    /// w(x) = offset + amplitude * sin(2*pi*freq*x), 1-periodic cell function.
    Trig { offset: f64, amplitude: f64, freq: u32 },
    /// Equal subcells of the unit cell, one value per subcell, 1-periodic.
    PiecewisePeriodic(Vec<f64>),
    /// base(x) + a + b*x: a periodic part with an affine drift. Not periodic;
    /// exists to model families whose weak* limit is a non-constant function.
    AffineModulated { base: Box<Weight>, a: f64, b: f64 },
    /// Piecewise-linear interpolation of values on the uniform grid
    /// x0, x0+dx, ..., x0+(len-1)*dx.
    Sampled { x0: f64, dx: f64, values: Vec<f64> },
    /// cell(x/epsilon): an epsilon-scaled periodic cell function.
    Scaled { cell: Box<Weight>, epsilon: f64 },
}

/// A positive bounded weight function together with its pointwise bounds
/// 0 < lower_bound <= w(x) <= upper_bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    kind: WeightKind,
    lower_bound: f64,
    upper_bound: f64,
}

impl Weight {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::DegenerateInput(format!("constant weight {c}")));
        }
        Ok(Weight { kind: WeightKind::Constant(c), lower_bound: c, upper_bound: c })
    }

    pub fn trig(offset: f64, amplitude: f64, freq: u32) -> Result<Self> {
        let lo = offset - amplitude.abs();
        let hi = offset + amplitude.abs();
        if freq == 0 {
            return Err(Error::DegenerateInput("trig weight with freq = 0".into()));
        }
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::DegenerateInput(format!(
                "trig weight {offset} + {amplitude} sin: lower bound {lo} not positive"
            )));
        }
        Ok(Weight { kind: WeightKind::Trig { offset, amplitude, freq }, lower_bound: lo, upper_bound: hi })
    }

    pub fn piecewise_periodic(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateInput("piecewise weight with no values".into()));
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::DegenerateInput(format!("piecewise weight values in [{lo}, {hi}]")));
        }
        Ok(Weight { kind: WeightKind::PiecewisePeriodic(values), lower_bound: lo, upper_bound: hi })
    }

    /// Periodic part plus affine drift a + b*x; bounds are taken over `interval`,
    /// so the weight is only meant to be evaluated there.
    pub fn affine_modulated(base: Weight, a: f64, b: f64, interval: Interval) -> Result<Self> {
        if !matches!(
            base.kind,
            WeightKind::Constant(_)
                | WeightKind::Trig { .. }
                | WeightKind::PiecewisePeriodic(_)
                | WeightKind::Scaled { .. }
        ) {
            return Err(Error::UnsupportedKind("affine base must be periodic or scaled-periodic"));
        }
        let drift_a = a + b * interval.a;
        let drift_b = a + b * interval.b;
        let lo = base.lower_bound + drift_a.min(drift_b);
        let hi = base.upper_bound + drift_a.max(drift_b);
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::DegenerateInput(format!(
                "affine-modulated weight has bounds [{lo}, {hi}] on the interval"
            )));
        }
        Ok(Weight {
            kind: WeightKind::AffineModulated { base: Box::new(base), a, b },
            lower_bound: lo,
            upper_bound: hi,
        })
    }

    pub fn sampled(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(dx > 0.0) {
            return Err(Error::DegenerateInput("sampled weight needs >= 2 values and dx > 0".into()));
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::DegenerateInput(format!("sampled weight values in [{lo}, {hi}]")));
        }
        Ok(Weight { kind: WeightKind::Sampled { x0, dx, values }, lower_bound: lo, upper_bound: hi })
    }

    /// cell(x/epsilon) for a unit-cell-periodic `cell`. The average is the
    /// cell average, independent of epsilon.
    pub fn scaled(cell: Weight, epsilon: f64) -> Result<Self> {
        if !cell.is_cell_periodic() {
            return Err(Error::UnsupportedKind("scaled weight needs a periodic cell"));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::DegenerateInput(format!("epsilon = {epsilon}")));
        }
        let (lo, hi) = (cell.lower_bound, cell.upper_bound);
        Ok(Weight { kind: WeightKind::Scaled { cell: Box::new(cell), epsilon }, lower_bound: lo, upper_bound: hi })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    /// True for unit-cell-periodic kinds (constants count as trivially periodic).
    pub fn is_cell_periodic(&self) -> bool {
        matches!(
            self.kind,
            WeightKind::Constant(_) | WeightKind::Trig { .. } | WeightKind::PiecewisePeriodic(_)
        )
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, WeightKind::Constant(_))
    }

    /// The epsilon of a scaled weight (also looks through an affine drift).
    pub fn epsilon(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::Scaled { epsilon, .. } => Some(*epsilon),
            WeightKind::AffineModulated { base, .. } => base.epsilon(),
            _ => None,
        }
    }

    /// Shortest oscillation length scale, used by step-size and quadrature
    /// policies. None for weights without a fast scale.
    pub fn oscillation_scale(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::Scaled { cell, epsilon } => cell.cell_subscale().map(|s| s * epsilon),
            WeightKind::AffineModulated { base, .. } => base.oscillation_scale(),
            WeightKind::Trig { freq, .. } => Some(1.0 / *freq as f64),
            WeightKind::PiecewisePeriodic(v) => Some(1.0 / v.len() as f64),
            _ => None,
        }
    }

    /// Substructure scale within one unit cell: 1/freq for trig, subcell
    /// width for piecewise, None for constants.
    fn cell_subscale(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::Trig { freq, .. } => Some(1.0 / *freq as f64),
            WeightKind::PiecewisePeriodic(v) => Some(1.0 / v.len() as f64),
            WeightKind::Constant(_) => None,
            _ => None,
        }
    }

    /// Pointwise value. Exact (no interpolation) for all non-sampled kinds.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.kind {
            WeightKind::Constant(c) => Ok(*c),
            WeightKind::Trig { offset, amplitude, freq } => {
                Ok(offset + amplitude * (2.0 * std::f64::consts::PI * (*freq as f64) * x).sin())
            }
            WeightKind::PiecewisePeriodic(values) => {
                let y = x.rem_euclid(1.0);
                let n = values.len();
                let idx = ((y * n as f64).floor() as usize).min(n - 1);
                Ok(values[idx])
            }
            WeightKind::AffineModulated { base, a, b } => Ok(base.eval(x)? + a + b * x),
            WeightKind::Sampled { x0, dx, values } => {
                let span = (values.len() - 1) as f64 * dx;
                let t = (x - x0) / dx;
                if t < -1e-12 || t > (values.len() - 1) as f64 + 1e-12 {
                    return Err(Error::DomainError { x, lo: *x0, hi: x0 + span });
                }
                let i = (t.floor().max(0.0) as usize).min(values.len() - 2);
                let frac = (t - i as f64).clamp(0.0, 1.0);
                Ok(values[i] * (1.0 - frac) + values[i + 1] * frac)
            }
            WeightKind::Scaled { cell, epsilon } => cell.eval(x / epsilon),
        }
    }

    /// Exact cell average for periodic kinds (sine parts integrate to zero
    /// over the full cell; piecewise subcells have equal measure).
    pub fn cell_average(&self) -> Result<f64> {
        match &self.kind {
            WeightKind::Constant(c) => Ok(*c),
            WeightKind::Trig { offset, .. } => Ok(*offset),
            WeightKind::PiecewisePeriodic(values) => {
                Ok(values.iter().sum::<f64>() / values.len() as f64)
            }
            WeightKind::Scaled { cell, .. } => cell.cell_average(),
            _ => Err(Error::UnsupportedKind("cell average of a non-periodic weight")),
        }
    }

    /// Average of the weight over the given interval: cell average for
    /// periodic kinds, cell average plus the mean drift for affine kinds,
    /// trapezoid over the grid for sampled kinds.
    pub fn average(&self, interval: Interval) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::Trig { offset, .. } => *offset,
            WeightKind::PiecewisePeriodic(values) => {
                values.iter().sum::<f64>() / values.len() as f64
            }
            WeightKind::Scaled { cell, .. } => cell.average(interval),
            WeightKind::AffineModulated { base, a, b } => {
                base.average(interval) + a + b * interval.midpoint()
            }
            WeightKind::Sampled { values, .. } => {
                let n = values.len();
                let interior: f64 = values[1..n - 1].iter().sum();
                (0.5 * (values[0] + values[n - 1]) + interior) / (n - 1) as f64
            }
        }
    }

    /// Sup-norm deviation from the cell average, exact for trig and
    /// piecewise kinds.
    pub fn sup_deviation(&self) -> Result<f64> {
        match &self.kind {
            WeightKind::Constant(_) => Ok(0.0),
            WeightKind::Trig { amplitude, .. } => Ok(amplitude.abs()),
            WeightKind::PiecewisePeriodic(values) => {
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                Ok(values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
            }
            WeightKind::Scaled { cell, .. } => cell.sup_deviation(),
            WeightKind::Sampled { values, .. } => {
                let mean = self.average(Interval::UNIT);
                Ok(values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
            }
            WeightKind::AffineModulated { .. } => {
                Err(Error::UnsupportedKind("sup deviation of an affine-modulated weight"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn eval_examples() {
        let c = Weight::constant(2.0).unwrap();
        assert_eq!(c.eval(0.3).unwrap(), 2.0);

        let t = Weight::trig(2.0, 1.0, 1).unwrap();
        assert!((t.eval(0.25).unwrap() - 3.0).abs() < 1e-12);

        let s = Weight::scaled(Weight::trig(2.0, 1.0, 1).unwrap(), 0.1).unwrap();
        assert!((s.eval(0.025).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn average_examples() {
        assert_eq!(Weight::trig(2.0, 1.0, 1).unwrap().cell_average().unwrap(), 2.0);
        assert_eq!(
            Weight::piecewise_periodic(vec![1.0, 3.0]).unwrap().cell_average().unwrap(),
            2.0
        );
        assert_eq!(Weight::constant(5.0).unwrap().cell_average().unwrap(), 5.0);
    }

    #[test]
    fn sup_deviation_examples() {
        assert_eq!(Weight::trig(2.0, 1.0, 1).unwrap().sup_deviation().unwrap(), 1.0);
        assert_eq!(
            Weight::piecewise_periodic(vec![1.0, 3.0]).unwrap().sup_deviation().unwrap(),
            1.0
        );
        assert_eq!(Weight::constant(7.0).unwrap().sup_deviation().unwrap(), 0.0);
    }

    #[test]
    fn positivity_enforced_at_construction() {
        assert!(Weight::trig(1.0, 2.0, 1).is_err());
        assert!(Weight::piecewise_periodic(vec![1.0, 0.0]).is_err());
        assert!(Weight::constant(-1.0).is_err());
        assert!(Weight::constant(0.0).is_err());
    }

    #[test]
    fn bounds_hold_on_dense_sample() {
        let interval = Interval::UNIT;
        let weights = vec![
            Weight::trig(2.0, 1.0, 3).unwrap(),
            Weight::piecewise_periodic(vec![1.0, 3.0, 2.0]).unwrap(),
            Weight::scaled(Weight::trig(2.0, 1.0, 1).unwrap(), 0.05).unwrap(),
            Weight::affine_modulated(Weight::trig(2.0, 1.0, 1).unwrap(), 0.0, 1.0, interval).unwrap(),
            Weight::sampled(0.0, 0.25, vec![1.0, 2.0, 1.5, 1.0, 2.5]).unwrap(),
        ];
        for w in &weights {
            for i in 0..=100_000 {
                let x = i as f64 / 100_000.0;
                let v = w.eval(x).unwrap();
                assert!(
                    w.lower_bound() <= v + 1e-14 && v <= w.upper_bound() + 1e-14,
                    "bounds violated at x = {x}: {v} not in [{}, {}]",
                    w.lower_bound(),
                    w.upper_bound()
                );
            }
            let avg = w.average(interval);
            assert!(w.lower_bound() <= avg && avg <= w.upper_bound());
        }
    }

    #[test]
    fn periodicity_on_cell() {
        let t = Weight::trig(2.0, 0.5, 2).unwrap();
        let pw = Weight::piecewise_periodic(vec![1.0, 2.0, 4.0]).unwrap();
        let mut state = 42u64;
        for _ in 0..1000 {
            let y = lcg(&mut state);
            assert!((t.eval(y).unwrap() - t.eval(y + 1.0).unwrap()).abs() < 1e-12);
            assert_eq!(pw.eval(y).unwrap(), pw.eval(y + 1.0).unwrap());
        }
    }

    #[test]
    fn scaled_eval_matches_cell_substitution_exactly() {
        let cell = Weight::piecewise_periodic(vec![1.0, 3.0, 2.0, 5.0]).unwrap();
        let eps = 0.013;
        let scaled = Weight::scaled(cell.clone(), eps).unwrap();
        let mut state = 7u64;
        for _ in 0..10_000 {
            let x = lcg(&mut state);
            assert_eq!(scaled.eval(x).unwrap(), cell.eval(x / eps).unwrap());
        }
    }

    #[test]
    fn scaled_average_independent_of_epsilon() {
        let cell = Weight::trig(2.0, 1.0, 1).unwrap();
        let expect = cell.cell_average().unwrap();
        for eps in [0.5, 0.125, 0.01, 1e-4] {
            let s = Weight::scaled(cell.clone(), eps).unwrap();
            assert_eq!(s.cell_average().unwrap(), expect);
        }
    }

    #[test]
    fn sampled_domain_error() {
        let s = Weight::sampled(0.0, 0.5, vec![1.0, 2.0, 1.0]).unwrap();
        assert!(s.eval(0.7).is_ok());
        assert!(matches!(s.eval(1.5), Err(Error::DomainError { .. })));
        assert!(matches!(s.eval(-0.1), Err(Error::DomainError { .. })));
    }

    #[test]
    fn scaled_rejects_non_periodic_cell() {
        let samp = Weight::sampled(0.0, 0.5, vec![1.0, 2.0, 1.0]).unwrap();
        assert!(Weight::scaled(samp, 0.1).is_err());
        let cell = Weight::trig(2.0, 1.0, 1).unwrap();
        assert!(Weight::scaled(cell, 0.0).is_err());
    }

    #[test]
    fn affine_modulated_average_and_limit_shape() {
        let interval = Interval::UNIT;
        let base = Weight::scaled(Weight::trig(2.0, 1.0, 1).unwrap(), 0.125).unwrap();
        let w = Weight::affine_modulated(base, 0.0, 1.0, interval).unwrap();
        // average of 2 + sin(2 pi x / eps) + x over (0,1) with whole cells: 2 + 1/2
        assert!((w.average(interval) - 2.5).abs() < 1e-12);
        assert!(w.lower_bound() > 0.0);
        assert!(w.sup_deviation().is_err());
    }
}
