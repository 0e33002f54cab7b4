//! Experiment configuration files.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use lcagabor::density::{Ambient, PointSet};
use lcagabor::geometry::section;
use lcagabor::model::{ModelFunction, ModelSpace};
use lcagabor::random::{random_function, Rng64};
use lcagabor::{Error, GroupElement, GroupParams, Mode, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub window: Option<FunctionSpec>,
    /// The analyzed function for `stft` and `norms`; defaults to the window.
    #[serde(default)]
    pub signal: Option<FunctionSpec>,
    #[serde(default)]
    pub lambda: Option<LambdaSpec>,
    #[serde(default)]
    pub task: TaskSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub p: u32,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub m: u32,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `chi_{shift + A^scale H}`.
    Indicator {
        scale: i64,
        #[serde(default)]
        shift: Option<String>,
    },
    /// `p^{weight/2} chi_{shift + A^scale H}`.
    ScaledIndicator {
        scale: i64,
        #[serde(default)]
        shift: Option<String>,
        weight: i64,
    },
    /// Values on the cosets, in index order, as `[re, im]`.
    Coeffs { coeffs: Vec<[f64; 2]> },
    /// Gaussian coefficients from the task seed (or `--seed`).
    Random {
        #[serde(default)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientSpec {
    Group,
    Phase,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Group(String),
    Phase(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub outer: i64,
    pub inner: i64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LambdaSpec {
    Explicit {
        ambient: AmbientSpec,
        points: Vec<PointSpec>,
    },
    /// `section(outer, inner)` in `G`.
    Section {
        outer: i64,
        inner: i64,
    },
    ProductSections {
        x: SectionSpec,
        xi: SectionSpec,
    },
    Union {
        parts: Vec<LambdaSpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Named(InfName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum InfName {
    #[serde(rename = "inf")]
    Inf,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Named(InfName::Inf) => f64::INFINITY,
        }
    }

    pub fn label(self) -> String {
        match self {
            Exponent::Finite(v) => format!("{v}"),
            Exponent::Named(_) => "inf".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    #[serde(default)]
    pub n_range: Option<(i64, i64)>,
    #[serde(default)]
    pub region: Option<i64>,
    #[serde(default)]
    pub p_exp: Option<Exponent>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Automorphism power for the invariance report.
    #[serde(default)]
    pub power: Option<i64>,
    /// Include the frame operator matrix in `frame` output.
    #[serde(default)]
    pub export_operator: bool,
}

pub fn config_error(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error(format!("config: {e}")))
    }

    pub fn params(&self) -> Result<GroupParams> {
        GroupParams::new(self.group.p, self.group.mode)
    }

    pub fn space(&self) -> Result<ModelSpace> {
        let m = self.model.ok_or_else(|| config_error("config: `model` is required for this command"))?;
        ModelSpace::new(self.params()?, m.m, m.k)
    }

    pub fn element(&self, text: &str) -> Result<GroupElement> {
        self.params()?.parse(text)
    }

    pub fn window(&self, seed: u64) -> Result<ModelFunction> {
        let spec = self.window.as_ref().ok_or_else(|| config_error("config: `window` is required"))?;
        let f = self.function(spec, seed)?;
        if f.is_zero() {
            return Err(config_error("config: window must be nonzero"));
        }
        Ok(f)
    }

    pub fn signal(&self, seed: u64) -> Result<ModelFunction> {
        match &self.signal {
            Some(spec) => self.function(spec, seed),
            None => self.window(seed),
        }
    }

    fn function(&self, spec: &FunctionSpec, seed: u64) -> Result<ModelFunction> {
        let space = self.space()?;
        let shifted = |scale: i64, shift: &Option<String>| -> Result<ModelFunction> {
            let c = match shift {
                Some(t) => self.element(t)?,
                None => space.params().zero(),
            };
            ModelFunction::indicator(space, scale, &c)
        };
        match spec {
            FunctionSpec::Indicator { scale, shift } => shifted(*scale, shift),
            FunctionSpec::ScaledIndicator { scale, shift, weight } => {
                let w = (space.params().p() as f64).powf(*weight as f64 / 2.0);
                Ok(shifted(*scale, shift)?.scale(Complex64::new(w, 0.0)))
            }
            FunctionSpec::Coeffs { coeffs } => {
                ModelFunction::new(space, coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            }
            FunctionSpec::Random { seed: own } => Ok(random_function(space, &mut Rng64::new(own.unwrap_or(seed)))),
        }
    }

    pub fn lambda(&self) -> Result<PointSet> {
        let spec = self.lambda.as_ref().ok_or_else(|| config_error("config: `lambda` is required"))?;
        self.build_lambda(spec)
    }

    fn build_lambda(&self, spec: &LambdaSpec) -> Result<PointSet> {
        let params = self.params()?;
        match spec {
            LambdaSpec::Explicit { ambient, points } => {
                let mut group = Vec::new();
                let mut phase = Vec::new();
                for (i, p) in points.iter().enumerate() {
                    match (ambient, p) {
                        (AmbientSpec::Group, PointSpec::Group(x)) => group.push(self.element(x)?),
                        (AmbientSpec::Phase, PointSpec::Phase(x, xi)) => {
                            phase.push((self.element(x)?, self.element(xi)?))
                        }
                        _ => return Err(config_error(format!("config: point #{i} does not match the ambient"))),
                    }
                }
                match ambient {
                    AmbientSpec::Group => PointSet::group(params, group),
                    AmbientSpec::Phase => PointSet::phase_space(params, phase),
                }
            }
            LambdaSpec::Section { outer, inner } => {
                PointSet::group(params, section(params, *outer, *inner)?.elements().to_vec())
            }
            LambdaSpec::ProductSections { x, xi } => {
                let xs = section(params, x.outer, x.inner)?;
                let xis = section(params, xi.outer, xi.inner)?;
                PointSet::product(params, xs.elements(), xis.elements())
            }
            LambdaSpec::Union { parts } => {
                if parts.is_empty() {
                    return Err(config_error("config: union needs at least one part"));
                }
                let sets = parts.iter().map(|p| self.build_lambda(p)).collect::<Result<Vec<_>>>()?;
                PointSet::concat(&sets)
            }
        }
    }

    /// Union parts, for the additivity check.
    pub fn lambda_parts(&self) -> Result<Option<Vec<PointSet>>> {
        match &self.lambda {
            Some(LambdaSpec::Union { parts }) => {
                Ok(Some(parts.iter().map(|p| self.build_lambda(p)).collect::<Result<Vec<_>>>()?))
            }
            _ => Ok(None),
        }
    }

    pub fn ambient_of(lam: &PointSet) -> &'static str {
        match lam.ambient() {
            Ambient::Group => "group",
            Ambient::PhaseSpace => "phase",
        }
    }
}
