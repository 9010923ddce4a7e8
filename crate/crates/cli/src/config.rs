//! Reconstruction experiment configuration (TOML).
//!
//! ```toml
//! d = 3
//! k = 1.0
//! noise_std = 0.0          # std of the real and of the imaginary part
//! seed = 0                 # noise stream
//! lambda = 0.0             # or "auto" = max(1e-8, noise_std²)·ω_{d−1}
//! truncation = "auto"      # or an integer N
//! coefficient_orders = [2, 8]
//! direct_lambda = 1e-8
//! max_rel_error = 1e-3     # optional; exceeding it exits with status 1
//!
//! [source]
//! type = "plane_wave"      # plane_wave | interior_mode | superposition
//! direction = [0.7, 1.1]   # angles θ_1..θ_{d−1}
//!
//! [array]
//! type = "random_ball"     # random_ball | grid | explicit
//! count = 64
//! radius = 3.0
//! rng_seed = 1
//!
//! [eval_grid]
//! resolution = 11
//! radius = 3.0
//! ```

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub k: f64,
    pub source: Source,
    pub array: Array,
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub lambda: Lambda,
    pub eval_grid: EvalGrid,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default = "default_orders")]
    pub coefficient_orders: Vec<usize>,
    #[serde(default = "default_direct_lambda")]
    pub direct_lambda: f64,
    #[serde(default)]
    pub max_rel_error: Option<f64>,
}

fn default_orders() -> Vec<usize> {
    vec![2, 8]
}

fn default_direct_lambda() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    PlaneWave {
        direction: Vec<f64>,
        #[serde(default = "unit_amplitude")]
        amplitude: [f64; 2],
    },
    InteriorMode {
        n: usize,
        m: usize,
        #[serde(default = "unit_amplitude")]
        amplitude: [f64; 2],
    },
    Superposition {
        terms: Vec<Source>,
    },
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Array {
    RandomBall {
        count: usize,
        radius: f64,
        rng_seed: u64,
    },
    Grid {
        spacing: f64,
        radius: f64,
    },
    Explicit {
        points: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalGrid {
    /// Grid points per axis across `[−radius, radius]`.
    pub resolution: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Lambda {
    #[default]
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Truncation {
    #[default]
    Auto,
    Order(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrWord<T> {
    Num(T),
    Word(String),
}

impl<'de> Deserialize<'de> for Lambda {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match NumOrWord::<f64>::deserialize(de)? {
            NumOrWord::Num(v) => Ok(Lambda::Value(v)),
            NumOrWord::Word(w) if w == "auto" => Ok(Lambda::Auto),
            NumOrWord::Word(w) => Err(serde::de::Error::custom(format!(
                "lambda must be a number or \"auto\", got {w:?}"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for Truncation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match NumOrWord::<usize>::deserialize(de)? {
            NumOrWord::Num(v) => Ok(Truncation::Order(v)),
            NumOrWord::Word(w) if w == "auto" => Ok(Truncation::Auto),
            NumOrWord::Word(w) => Err(serde::de::Error::custom(format!(
                "truncation must be an integer or \"auto\", got {w:?}"
            ))),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("config: {}", msg.into()))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| usage(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if self.d < 2 {
            return Err(usage(format!("d must be at least 2, got {}", self.d)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(usage(format!("k must be positive, got {}", self.k)));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(usage(format!(
                "noise_std must be ≥ 0, got {}",
                self.noise_std
            )));
        }
        if let Lambda::Value(l) = self.lambda {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(usage(format!("lambda must be ≥ 0, got {l}")));
            }
        }
        if !(self.direct_lambda >= 0.0) {
            return Err(usage("direct_lambda must be ≥ 0"));
        }
        self.validate_source(&self.source)?;
        match &self.array {
            Array::RandomBall { count, radius, .. } => {
                if *count == 0 {
                    return Err(usage("array.count must be at least 1"));
                }
                positive("array.radius", *radius)?;
            }
            Array::Grid { spacing, radius } => {
                positive("array.spacing", *spacing)?;
                positive("array.radius", *radius)?;
            }
            Array::Explicit { points } => {
                if points.is_empty() {
                    return Err(usage("array.points must not be empty"));
                }
                if points.iter().any(|p| p.len() != self.d) {
                    return Err(usage(format!(
                        "every array point needs {} coordinates",
                        self.d
                    )));
                }
            }
        }
        if self.eval_grid.resolution < 2 {
            return Err(usage("eval_grid.resolution must be at least 2"));
        }
        positive("eval_grid.radius", self.eval_grid.radius)
    }

    fn validate_source(&self, s: &Source) -> CliResult<()> {
        match s {
            Source::PlaneWave { direction, .. } if direction.len() != self.d - 1 => Err(usage(
                format!("plane-wave direction needs {} angles", self.d - 1),
            )),
            Source::Superposition { terms } if terms.is_empty() => {
                Err(usage("superposition needs at least one term"))
            }
            Source::Superposition { terms } => {
                terms.iter().try_for_each(|t| self.validate_source(t))
            }
            _ => Ok(()),
        }
    }
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{name} must be positive, got {v}")))
    }
}
