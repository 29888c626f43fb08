//! Declarative scenario files: parsing, validation, and emission.
//!
//! The native format is flat key-value text in INI-style sections
//! `[model]`, `[prep]`, `[field]`, `[time]`, `[output]`; JSON carrying the
//! same structure is accepted as an alternative. `emit` produces the
//! canonical text form and round-trips exactly: `parse(emit(s)) == s`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sim_core::{binomial_amplitudes, coherent_amplitudes, number_state};
use sim_core::{AtomPrep, FieldState, ModelParams};
use std::fmt::Write as _;
use thiserror::Error;

pub const REQUIRED_KEYS: &[&str] = &[
    "model.k",
    "model.gamma2",
    "prep.theta1",
    "prep.theta2",
    "field.kind",
    "time.start",
    "time.stop",
    "time.steps",
    "output.<at least one of inversion, inversion_per_qubit, q_grid.at_time, concurrence_surface.theta_points>",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: unknown key '{key}' in section [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: key '{key}' appears before any [section] header")]
    KeyOutsideSection { line: usize, key: String },
    #[error("line {line}: cannot parse '{value}' as {expected} for key '{key}'")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("line {line}: {key} = {value} is out of range: {why}")]
    OutOfRange {
        line: usize,
        key: String,
        value: f64,
        why: &'static str,
    },
    #[error("missing required key '{key}'{hint}")]
    MissingKey { key: String, hint: String },
    #[error("scenario is empty; required keys: {}", REQUIRED_KEYS.join(", "))]
    Empty,
    #[error("{why}")]
    Invalid { why: String },
    #[error("JSON scenario: {0}")]
    Json(#[from] serde_json::Error),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Dispersive,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Dispersive => "dispersive",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Engine::Exact),
            "dispersive" => Ok(Engine::Dispersive),
            other => Err(format!(
                "unknown engine '{other}', expected 'exact' or 'dispersive'"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub k: u32,
    #[serde(default = "one")]
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(default)]
    pub delta: f64,
    /// Ground-level Stark coefficient, shared by both qubits (active for k > 1).
    #[serde(default)]
    pub beta1: f64,
    /// Excited-level Stark coefficient, shared by both qubits.
    #[serde(default)]
    pub beta2: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepSection {
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Binomial { eta: f64, m: usize },
    Number { m: usize },
    Coherent { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSection {
    /// Grid bounds in dimensionless gamma1*t.
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeSection {
    /// The gamma1*t sample points, inclusive of both ends.
    pub fn samples(&self) -> Vec<f64> {
        let dt = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + i as f64 * dt).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QGridRequest {
    /// Snapshot instant in gamma1*t.
    pub at_time: f64,
    #[serde(default = "default_half_extent")]
    pub half_extent: f64,
    #[serde(default = "default_grid_points")]
    pub points: usize,
}

fn default_half_extent() -> f64 {
    12.0
}

fn default_grid_points() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRequest {
    #[serde(default = "default_theta_min")]
    pub theta_min: f64,
    #[serde(default = "default_theta_max")]
    pub theta_max: f64,
    #[serde(default = "default_theta_points")]
    pub theta_points: usize,
}

fn default_theta_min() -> f64 {
    -std::f64::consts::FRAC_PI_2
}

fn default_theta_max() -> f64 {
    std::f64::consts::FRAC_PI_2
}

fn default_theta_points() -> usize {
    33
}

impl SurfaceRequest {
    pub fn theta_samples(&self) -> Vec<f64> {
        let dt = (self.theta_max - self.theta_min) / (self.theta_points - 1) as f64;
        (0..self.theta_points)
            .map(|i| self.theta_min + i as f64 * dt)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "is_false")]
    pub inversion: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub inversion_per_qubit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<QGridRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence_surface: Option<SurfaceRequest>,
}

impl OutputSection {
    pub fn is_empty(&self) -> bool {
        !self.inversion
            && !self.inversion_per_qubit
            && self.q_grid.is_none()
            && self.concurrence_surface.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub model: ModelSection,
    pub prep: PrepSection,
    pub field: FieldSpec,
    pub time: TimeSection,
    pub output: OutputSection,
    #[serde(default = "default_engine")]
    pub engine: Engine,
}

fn default_engine() -> Engine {
    Engine::Exact
}

impl Scenario {
    /// Physical model parameters; scenario couplings are real.
    pub fn model_params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams::new(
            m.k,
            Complex64::new(m.gamma1, 0.0),
            Complex64::new(m.gamma2, 0.0),
            m.delta,
        )
        .with_stark([m.beta1; 2], [m.beta2; 2])
    }

    pub fn atom_prep(&self) -> AtomPrep {
        AtomPrep::new(self.prep.theta1, self.prep.theta2)
    }

    pub fn field_state(&self) -> Result<FieldState, ScenarioError> {
        match self.field {
            FieldSpec::Binomial { eta, m } => binomial_amplitudes(eta, m),
            FieldSpec::Number { m } => Ok(number_state(m)),
            FieldSpec::Coherent { alpha } => {
                let a = Complex64::new(alpha, 0.0);
                let n_max = sim_core::field::coherent_required_n_max(a);
                coherent_amplitudes(a, n_max)
            }
        }
        .map_err(|e| ScenarioError::Invalid { why: e.to_string() })
    }

    /// Cross-field checks that cannot be attributed to a single line.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |why: String| Err(ScenarioError::Invalid { why });
        if self.time.steps < 2 {
            return fail(format!("time.steps = {} but at least 2 are required", self.time.steps));
        }
        if !(self.time.start >= 0.0 && self.time.stop > self.time.start) {
            return fail(format!(
                "time grid must satisfy stop > start >= 0, got start = {}, stop = {}",
                self.time.start, self.time.stop
            ));
        }
        if self.model.k < 1 {
            return fail("model.k must be a positive integer".into());
        }
        if self.model.gamma1 == 0.0 {
            return fail("model.gamma1 must be nonzero (it sets the time unit)".into());
        }
        for (key, value) in [
            ("model.gamma1", self.model.gamma1),
            ("model.gamma2", self.model.gamma2),
            ("model.delta", self.model.delta),
            ("model.beta1", self.model.beta1),
            ("model.beta2", self.model.beta2),
            ("prep.theta1", self.prep.theta1),
            ("prep.theta2", self.prep.theta2),
            ("time.start", self.time.start),
            ("time.stop", self.time.stop),
        ] {
            if !value.is_finite() {
                return fail(format!("{key} must be finite, got {value}"));
            }
        }
        match self.field {
            FieldSpec::Binomial { eta, .. } => {
                if !(0.0..=1.0).contains(&eta) {
                    return fail(format!("field.eta = {eta} is outside [0, 1]"));
                }
            }
            FieldSpec::Coherent { alpha } => {
                if !alpha.is_finite() {
                    return fail(format!("field.alpha must be finite, got {alpha}"));
                }
            }
            FieldSpec::Number { .. } => {}
        }
        if let Some(q) = &self.output.q_grid {
            if !q.at_time.is_finite() || q.at_time < 0.0 {
                return fail(format!("q_grid.at_time = {} must be finite and >= 0", q.at_time));
            }
            if q.half_extent <= 0.0 {
                return fail(format!("q_grid.half_extent = {} must be positive", q.half_extent));
            }
            if q.points < 2 {
                return fail(format!("q_grid.points = {} but at least 2 are required", q.points));
            }
        }
        if let Some(s) = &self.output.concurrence_surface {
            if s.theta_points < 2 {
                return fail(format!(
                    "concurrence_surface.theta_points = {} but at least 2 are required",
                    s.theta_points
                ));
            }
            if !(s.theta_max > s.theta_min) {
                return fail(format!(
                    "concurrence_surface needs theta_max > theta_min, got {} and {}",
                    s.theta_max, s.theta_min
                ));
            }
            if self.engine == Engine::Dispersive && self.prep.theta1 != 0.0 {
                return fail(format!(
                    "concurrence_surface with the dispersive engine requires prep.theta1 = 0 \
                     (the closed form covers an excited first qubit), got {}",
                    self.prep.theta1
                ));
            }
        }
        if self.output.is_empty() {
            return fail("no outputs requested; enable at least one key in [output]".into());
        }
        Ok(())
    }
}

/// Parse the JSON form of a scenario.
pub fn parse_scenario_json(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = serde_json::from_str(text)?;
    scenario.validate()?;
    Ok(scenario)
}

struct Slot<T> {
    value: Option<T>,
    line: usize,
}

impl<T> Default for Slot<T> {
    fn default() -> Self {
        Slot {
            value: None,
            line: 0,
        }
    }
}

impl<T> Slot<T> {
    fn set(&mut self, line: usize, key: &str, value: T) -> Result<(), ScenarioError> {
        if self.value.is_some() {
            return Err(ScenarioError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        self.value = Some(value);
        self.line = line;
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    k: Slot<u32>,
    gamma1: Slot<f64>,
    gamma2: Slot<f64>,
    delta: Slot<f64>,
    beta1: Slot<f64>,
    beta2: Slot<f64>,
    engine: Slot<Engine>,
    theta1: Slot<f64>,
    theta2: Slot<f64>,
    kind: Slot<String>,
    eta: Slot<f64>,
    field_m: Slot<usize>,
    alpha: Slot<f64>,
    start: Slot<f64>,
    stop: Slot<f64>,
    steps: Slot<usize>,
    inversion: Slot<bool>,
    inversion_per_qubit: Slot<bool>,
    q_at_time: Slot<f64>,
    q_half_extent: Slot<f64>,
    q_points: Slot<usize>,
    s_theta_min: Slot<f64>,
    s_theta_max: Slot<f64>,
    s_theta_points: Slot<usize>,
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ScenarioError> {
    value.parse().map_err(|_| ScenarioError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected: "a real number",
    })
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ScenarioError> {
    value.parse().map_err(|_| ScenarioError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected: "a nonnegative integer",
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ScenarioError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ScenarioError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
            expected: "'true' or 'false'",
        }),
    }
}

fn require<T>(slot: Slot<T>, key: &str, hint: &str) -> Result<T, ScenarioError> {
    slot.value.ok_or_else(|| ScenarioError::MissingKey {
        key: key.to_string(),
        hint: if hint.is_empty() {
            String::new()
        } else {
            format!(" ({hint})")
        },
    })
}

/// Parse the native INI-style scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut b = Builder::default();
    let mut section: Option<String> = None;
    let mut saw_anything = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        saw_anything = true;
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            match name {
                "model" | "prep" | "field" | "time" | "output" => {
                    section = Some(name.to_string());
                }
                other => {
                    return Err(ScenarioError::UnknownSection {
                        line,
                        section: other.to_string(),
                    })
                }
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ScenarioError::Malformed {
                line,
                text: trimmed.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let Some(section) = section.as_deref() else {
            return Err(ScenarioError::KeyOutsideSection {
                line,
                key: key.to_string(),
            });
        };
        let unknown = || {
            Err(ScenarioError::UnknownKey {
                line,
                section: section.to_string(),
                key: key.to_string(),
            })
        };
        match section {
            "model" => match key {
                "k" => {
                    let v = parse_usize(line, key, value)?;
                    if v < 1 || v > u32::MAX as usize {
                        return Err(ScenarioError::OutOfRange {
                            line,
                            key: key.into(),
                            value: v as f64,
                            why: "k must be a positive integer",
                        });
                    }
                    b.k.set(line, key, v as u32)?;
                }
                "gamma1" => b.gamma1.set(line, key, parse_f64(line, key, value)?)?,
                "gamma2" => b.gamma2.set(line, key, parse_f64(line, key, value)?)?,
                "delta" => b.delta.set(line, key, parse_f64(line, key, value)?)?,
                "beta1" => b.beta1.set(line, key, parse_f64(line, key, value)?)?,
                "beta2" => b.beta2.set(line, key, parse_f64(line, key, value)?)?,
                "engine" => {
                    let engine = value.parse().map_err(|_| ScenarioError::BadValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                        expected: "'exact' or 'dispersive'",
                    })?;
                    b.engine.set(line, key, engine)?;
                }
                _ => return unknown(),
            },
            "prep" => match key {
                "theta1" => b.theta1.set(line, key, parse_f64(line, key, value)?)?,
                "theta2" => b.theta2.set(line, key, parse_f64(line, key, value)?)?,
                _ => return unknown(),
            },
            "field" => match key {
                "kind" => {
                    if !["binomial", "number", "coherent"].contains(&value) {
                        return Err(ScenarioError::BadValue {
                            line,
                            key: key.to_string(),
                            value: value.to_string(),
                            expected: "'binomial', 'number' or 'coherent'",
                        });
                    }
                    b.kind.set(line, key, value.to_string())?;
                }
                "eta" => {
                    let v = parse_f64(line, key, value)?;
                    if !(0.0..=1.0).contains(&v) {
                        return Err(ScenarioError::OutOfRange {
                            line,
                            key: key.into(),
                            value: v,
                            why: "eta must lie in [0, 1]",
                        });
                    }
                    b.eta.set(line, key, v)?;
                }
                "m" => b.field_m.set(line, key, parse_usize(line, key, value)?)?,
                "alpha" => b.alpha.set(line, key, parse_f64(line, key, value)?)?,
                _ => return unknown(),
            },
            "time" => match key {
                "start" => b.start.set(line, key, parse_f64(line, key, value)?)?,
                "stop" => b.stop.set(line, key, parse_f64(line, key, value)?)?,
                "steps" => {
                    let v = parse_usize(line, key, value)?;
                    if v < 2 {
                        return Err(ScenarioError::OutOfRange {
                            line,
                            key: key.into(),
                            value: v as f64,
                            why: "at least 2 time samples are required",
                        });
                    }
                    b.steps.set(line, key, v)?;
                }
                _ => return unknown(),
            },
            "output" => match key {
                "inversion" => b.inversion.set(line, key, parse_bool(line, key, value)?)?,
                "inversion_per_qubit" => b
                    .inversion_per_qubit
                    .set(line, key, parse_bool(line, key, value)?)?,
                "q_grid.at_time" => b.q_at_time.set(line, key, parse_f64(line, key, value)?)?,
                "q_grid.half_extent" => {
                    b.q_half_extent.set(line, key, parse_f64(line, key, value)?)?
                }
                "q_grid.points" => b.q_points.set(line, key, parse_usize(line, key, value)?)?,
                "concurrence_surface.theta_min" => {
                    b.s_theta_min.set(line, key, parse_f64(line, key, value)?)?
                }
                "concurrence_surface.theta_max" => {
                    b.s_theta_max.set(line, key, parse_f64(line, key, value)?)?
                }
                "concurrence_surface.theta_points" => {
                    b.s_theta_points
                        .set(line, key, parse_usize(line, key, value)?)?
                }
                _ => return unknown(),
            },
            _ => unreachable!("section names are filtered above"),
        }
    }

    if !saw_anything {
        return Err(ScenarioError::Empty);
    }

    let kind_line = b.kind.line;
    let field = match require(b.kind, "field.kind", "binomial, number or coherent")?.as_str() {
        "binomial" => FieldSpec::Binomial {
            eta: require(b.eta, "field.eta", "required for the binomial field")?,
            m: require(b.field_m, "field.m", "required for the binomial field")?,
        },
        "number" => {
            if b.eta.value.is_some() || b.alpha.value.is_some() {
                return Err(ScenarioError::Invalid {
                    why: format!(
                        "field kind 'number' (line {kind_line}) takes only 'm'; remove eta/alpha"
                    ),
                });
            }
            FieldSpec::Number {
                m: require(b.field_m, "field.m", "required for the number field")?,
            }
        }
        "coherent" => {
            if b.eta.value.is_some() || b.field_m.value.is_some() {
                return Err(ScenarioError::Invalid {
                    why: format!(
                        "field kind 'coherent' (line {kind_line}) takes only 'alpha'; remove eta/m"
                    ),
                });
            }
            FieldSpec::Coherent {
                alpha: require(b.alpha, "field.alpha", "required for the coherent field")?,
            }
        }
        _ => unreachable!("kind values are filtered above"),
    };

    let q_grid = if b.q_at_time.value.is_some() {
        Some(QGridRequest {
            at_time: b.q_at_time.value.unwrap(),
            half_extent: b.q_half_extent.value.unwrap_or_else(default_half_extent),
            points: b.q_points.value.unwrap_or_else(default_grid_points),
        })
    } else {
        if b.q_half_extent.value.is_some() || b.q_points.value.is_some() {
            return Err(ScenarioError::MissingKey {
                key: "q_grid.at_time".into(),
                hint: " (other q_grid.* keys are present)".into(),
            });
        }
        None
    };

    let surface_requested = b.s_theta_min.value.is_some()
        || b.s_theta_max.value.is_some()
        || b.s_theta_points.value.is_some();
    let concurrence_surface = surface_requested.then(|| SurfaceRequest {
        theta_min: b.s_theta_min.value.unwrap_or_else(default_theta_min),
        theta_max: b.s_theta_max.value.unwrap_or_else(default_theta_max),
        theta_points: b.s_theta_points.value.unwrap_or_else(default_theta_points),
    });

    let scenario = Scenario {
        model: ModelSection {
            k: require(b.k, "model.k", "photon multiplicity")?,
            gamma1: b.gamma1.value.unwrap_or(1.0),
            gamma2: require(b.gamma2, "model.gamma2", "second-qubit coupling")?,
            delta: b.delta.value.unwrap_or(0.0),
            beta1: b.beta1.value.unwrap_or(0.0),
            beta2: b.beta2.value.unwrap_or(0.0),
        },
        prep: PrepSection {
            theta1: require(b.theta1, "prep.theta1", "radians")?,
            theta2: require(b.theta2, "prep.theta2", "radians")?,
        },
        field,
        time: TimeSection {
            start: require(b.start, "time.start", "gamma1*t")?,
            stop: require(b.stop, "time.stop", "gamma1*t")?,
            steps: require(b.steps, "time.steps", "sample count")?,
        },
        output: OutputSection {
            inversion: b.inversion.value.unwrap_or(false),
            inversion_per_qubit: b.inversion_per_qubit.value.unwrap_or(false),
            q_grid,
            concurrence_surface,
        },
        engine: b.engine.value.unwrap_or(Engine::Exact),
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Canonical text form; floats use the shortest round-trip representation.
pub fn emit(s: &Scenario) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "[model]").unwrap();
    writeln!(w, "k = {}", s.model.k).unwrap();
    writeln!(w, "gamma1 = {}", s.model.gamma1).unwrap();
    writeln!(w, "gamma2 = {}", s.model.gamma2).unwrap();
    writeln!(w, "delta = {}", s.model.delta).unwrap();
    writeln!(w, "beta1 = {}", s.model.beta1).unwrap();
    writeln!(w, "beta2 = {}", s.model.beta2).unwrap();
    writeln!(w, "engine = {}", s.engine.name()).unwrap();
    writeln!(w).unwrap();
    writeln!(w, "[prep]").unwrap();
    writeln!(w, "theta1 = {}", s.prep.theta1).unwrap();
    writeln!(w, "theta2 = {}", s.prep.theta2).unwrap();
    writeln!(w).unwrap();
    writeln!(w, "[field]").unwrap();
    match &s.field {
        FieldSpec::Binomial { eta, m } => {
            writeln!(w, "kind = binomial").unwrap();
            writeln!(w, "eta = {eta}").unwrap();
            writeln!(w, "m = {m}").unwrap();
        }
        FieldSpec::Number { m } => {
            writeln!(w, "kind = number").unwrap();
            writeln!(w, "m = {m}").unwrap();
        }
        FieldSpec::Coherent { alpha } => {
            writeln!(w, "kind = coherent").unwrap();
            writeln!(w, "alpha = {alpha}").unwrap();
        }
    }
    writeln!(w).unwrap();
    writeln!(w, "[time]").unwrap();
    writeln!(w, "start = {}", s.time.start).unwrap();
    writeln!(w, "stop = {}", s.time.stop).unwrap();
    writeln!(w, "steps = {}", s.time.steps).unwrap();
    writeln!(w).unwrap();
    writeln!(w, "[output]").unwrap();
    if s.output.inversion {
        writeln!(w, "inversion = true").unwrap();
    }
    if s.output.inversion_per_qubit {
        writeln!(w, "inversion_per_qubit = true").unwrap();
    }
    if let Some(q) = &s.output.q_grid {
        writeln!(w, "q_grid.at_time = {}", q.at_time).unwrap();
        writeln!(w, "q_grid.half_extent = {}", q.half_extent).unwrap();
        writeln!(w, "q_grid.points = {}", q.points).unwrap();
    }
    if let Some(c) = &s.output.concurrence_surface {
        writeln!(w, "concurrence_surface.theta_min = {}", c.theta_min).unwrap();
        writeln!(w, "concurrence_surface.theta_max = {}", c.theta_max).unwrap();
        writeln!(w, "concurrence_surface.theta_points = {}", c.theta_points).unwrap();
    }
    out
}
