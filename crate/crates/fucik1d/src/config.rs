//! Experiment configuration: one TOML file fully describes one experiment.
//! Weights are tagged records, e.g. `{ kind = "trig", a = 2, b = 1, k = 1 }`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{BoundaryCondition, Interval};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub problem: ProblemSection,
    pub weights: WeightsSection,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub p: f64,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    pub bc: BcSpec,
}

fn default_interval() -> [f64; 2] {
    [0.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcSpec {
    Dirichlet,
    Neumann,
    MixedNd,
    MixedDn,
}

impl From<BcSpec> for BoundaryCondition {
    fn from(b: BcSpec) -> Self {
        match b {
            BcSpec::Dirichlet => BoundaryCondition::Dirichlet,
            BcSpec::Neumann => BoundaryCondition::Neumann,
            BcSpec::MixedNd => BoundaryCondition::MixedND,
            BcSpec::MixedDn => BoundaryCondition::MixedDN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub m: WeightSpec,
    pub n: WeightSpec,
}

/// Tagged weight description. `affine` is `base(x) + a + b x`; in a
/// `sweep` with target `general`, `base` is the periodic cell that gets the
/// x/eps scaling while the drift stays fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant { value: f64 },
    Trig { a: f64, b: f64, k: u32 },
    Piecewise { values: Vec<f64> },
    Affine { a: f64, b: f64, base: Box<WeightSpec> },
    Sampled { x0: f64, dx: f64, values: Vec<f64> },
    Scaled { epsilon: f64, cell: Box<WeightSpec> },
}

impl WeightSpec {
    pub fn build(&self, interval: Interval) -> Result<Weight> {
        match self {
            WeightSpec::Constant { value } => Weight::constant(*value),
            WeightSpec::Trig { a, b, k } => Weight::trig(*a, *b, *k),
            WeightSpec::Piecewise { values } => Weight::piecewise_periodic(values.clone()),
            WeightSpec::Affine { a, b, base } => {
                Weight::affine_modulated(base.build(interval)?, *a, *b, interval)
            }
            WeightSpec::Sampled { x0, dx, values } => Weight::sampled(*x0, *dx, values.clone()),
            WeightSpec::Scaled { epsilon, cell } => {
                Weight::scaled(cell.build(interval)?, *epsilon)
            }
        }
    }

    /// The periodic cell and affine drift of a family description, for
    /// general sweeps.
    pub fn family_parts(&self, interval: Interval) -> Result<(Weight, f64, f64)> {
        match self {
            WeightSpec::Affine { a, b, base } => Ok((base.build(interval)?, *a, *b)),
            other => Ok((other.build(interval)?, 0.0, 0.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Eigen,
    Curve,
    Sweep,
    Verify,
    Oracle,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::Eigen => "eigen",
            ExperimentKind::Curve => "curve",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Verify => "verify",
            ExperimentKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepTarget {
    Lambda1,
    Curve,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSpec {
    #[default]
    Shooting,
    NodeMatch,
    MountainPass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SweepTarget>,
    #[serde(default)]
    pub method: MethodSpec,
    #[serde(default)]
    pub s_list: Vec<f64>,
    #[serde(default)]
    pub eps_list: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_elems: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoints: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn interval(&self) -> Result<Interval> {
        Interval::new(self.problem.interval[0], self.problem.interval[1])
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.problem.bc.into()
    }

    /// Full validation: exponent, interval, weight positivity (through
    /// construction), positive ratios, and the reciprocal-integer rule for
    /// the epsilon list.
    pub fn validate(&self) -> Result<()> {
        if !(self.problem.p > 1.0) || !self.problem.p.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "p = {} but the exponent must exceed 1",
                self.problem.p
            )));
        }
        let interval = self.interval().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        self.weights
            .m
            .build(interval)
            .map_err(|e| Error::InvalidConfig(format!("weight m: {e}")))?;
        self.weights
            .n
            .build(interval)
            .map_err(|e| Error::InvalidConfig(format!("weight n: {e}")))?;
        for &s in &self.experiment.s_list {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidConfig(format!("s = {s} must be positive")));
            }
        }
        for pair in self.experiment.eps_list.windows(2) {
            if pair[1] >= pair[0] {
                return Err(Error::InvalidConfig("eps_list must be strictly decreasing".into()));
            }
        }
        for &e in &self.experiment.eps_list {
            if !(e > 0.0) || e > 0.5 {
                return Err(Error::InvalidConfig(format!("eps = {e} outside (0, 0.5]")));
            }
            let inv = 1.0 / e;
            if (inv - inv.round()).abs() > 1e-9 * inv {
                return Err(Error::InvalidConfig(format!(
                    "eps = {e} is not the reciprocal of an integer"
                )));
            }
        }
        match self.experiment.kind {
            ExperimentKind::Sweep => {
                if self.experiment.target.is_none() {
                    return Err(Error::InvalidConfig(
                        "sweep experiments need experiment.target".into(),
                    ));
                }
                if self.experiment.eps_list.is_empty() {
                    return Err(Error::InvalidConfig("sweep experiments need eps_list".into()));
                }
                if self.experiment.target != Some(SweepTarget::Lambda1)
                    && self.experiment.s_list.is_empty()
                {
                    return Err(Error::InvalidConfig("curve sweeps need s_list".into()));
                }
            }
            ExperimentKind::Curve => {
                if self.experiment.s_list.is_empty() {
                    return Err(Error::InvalidConfig("curve experiments need s_list".into()));
                }
            }
            _ => {}
        }
        if let Some(k) = self.experiment.waypoints {
            if k < 16 {
                return Err(Error::InvalidConfig(format!("waypoints = {k}, need at least 16")));
            }
        }
        if let Some(n) = self.experiment.n_elems {
            if n == 0 {
                return Err(Error::InvalidConfig("n_elems must be positive".into()));
            }
        }
        if let Some(h) = self.experiment.step {
            if !(h > 0.0) {
                return Err(Error::InvalidConfig(format!("step = {h} must be positive")));
            }
        }
        Ok(())
    }
}
