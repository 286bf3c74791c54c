use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::DiagramSpec;
use crate::numeric::{int, parse_rational, Rational, TolerancePolicy};

/// Suite configuration as read from JSON or flags. Every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub suite: String,
    pub model: String,
    pub seed: u64,
    pub samples: usize,
    pub precision_bits: usize,
    pub abs_tol: String,
    pub t_values: Vec<String>,
    pub diagram: String,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".to_string(),
            model: "sl2".to_string(),
            seed: 0,
            samples: 1000,
            precision_bits: 128,
            abs_tol: TolerancePolicy::DEFAULT_ABS_TOL.to_string(),
            t_values: ["1/2", "1", "2", "4"].iter().map(|s| s.to_string()).collect(),
            diagram: "A2".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            field: Some(field.to_string()),
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " in field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteKind {
    Axioms,
    MatrixLemma,
    Commutator,
    So2Residuals,
    CentralExtension,
    Perfectness,
    Factorization,
    Cocone,
    All,
}

impl SuiteKind {
    pub const NAMES: [&'static str; 9] = [
        "axioms",
        "matrix-lemma",
        "commutator",
        "so2-residuals",
        "central-extension",
        "perfectness",
        "factorization",
        "cocone",
        "all",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn members(self) -> Vec<SuiteKind> {
        use SuiteKind::*;
        match self {
            All => vec![Axioms, MatrixLemma, Commutator, So2Residuals, CentralExtension, Perfectness, Factorization, Cocone],
            other => vec![other],
        }
    }
}

impl FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use SuiteKind::*;
        let all = [Axioms, MatrixLemma, Commutator, So2Residuals, CentralExtension, Perfectness, Factorization, Cocone, All];
        all.into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of {}", Self::NAMES.join(", ")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Geodesic,
    Sl2,
    Sl3,
    A2Diagram,
    /// Negative control whose reflection map is not involutive.
    BrokenSl2,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Geodesic => "geodesic",
            ModelKind::Sl2 => "sl2",
            ModelKind::Sl3 => "sl3",
            ModelKind::A2Diagram => "a2-diagram",
            ModelKind::BrokenSl2 => "broken-sl2",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geodesic" => Ok(ModelKind::Geodesic),
            "sl2" => Ok(ModelKind::Sl2),
            "sl3" => Ok(ModelKind::Sl3),
            "a2-diagram" => Ok(ModelKind::A2Diagram),
            "broken-sl2" => Ok(ModelKind::BrokenSl2),
            _ => Err(format!(
                "unknown model {s:?}; expected geodesic, sl2, sl3, a2-diagram or broken-sl2"
            )),
        }
    }
}

/// A configuration after parsing and validation.
#[derive(Clone, Debug)]
pub struct ValidatedConfig {
    pub raw: SuiteConfig,
    pub suite: SuiteKind,
    pub model: ModelKind,
    pub policy: TolerancePolicy,
    pub t_values: Vec<Rational>,
    pub diagram: DiagramSpec,
}

impl ValidatedConfig {
    pub fn seed(&self) -> u64 {
        self.raw.seed
    }

    pub fn samples(&self) -> usize {
        self.raw.samples
    }

    /// Sample budget for checks whose per-sample cost is high.
    pub fn heavy_samples(&self) -> usize {
        self.raw.samples.min(super::HEAVY_SAMPLE_CAP)
    }
}

impl SuiteConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        if text.trim().is_empty() {
            return Ok(SuiteConfig::default());
        }
        serde_json::from_str(text).map_err(|e| ConfigError {
            field: None,
            line: Some(e.line()),
            message: e.to_string(),
        })
    }

    pub fn validate(&self) -> Result<ValidatedConfig, ConfigError> {
        let suite = self.suite.parse().map_err(|e| ConfigError::field("suite", e))?;
        let model = self.model.parse().map_err(|e| ConfigError::field("model", e))?;
        if self.samples == 0 {
            return Err(ConfigError::field("samples", "must be at least 1"));
        }
        let policy = TolerancePolicy::new(&self.abs_tol, self.precision_bits).map_err(|e| {
            let field = if e.contains("precision") { "precision_bits" } else { "abs_tol" };
            ConfigError::field(field, e)
        })?;
        if self.t_values.is_empty() {
            return Err(ConfigError::field("t_values", "must not be empty"));
        }
        let mut t_values = Vec::with_capacity(self.t_values.len());
        for s in &self.t_values {
            let t = parse_rational(s).map_err(|e| ConfigError::field("t_values", format!("{s:?}: {e}")))?;
            if t == int(0) {
                return Err(ConfigError::field("t_values", format!("{s:?}: t must be nonzero")));
            }
            t_values.push(t);
        }
        let diagram = self
            .diagram
            .parse()
            .map_err(|e: crate::embedding::EmbeddingError| ConfigError::field("diagram", e.to_string()))?;
        Ok(ValidatedConfig {
            raw: self.clone(),
            suite,
            model,
            policy,
            t_values,
            diagram,
        })
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub suite: Option<String>,
    pub model: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub precision_bits: Option<usize>,
    pub abs_tol: Option<String>,
    /// Comma-separated rationals.
    pub t_values: Option<String>,
    pub diagram: Option<String>,
}

impl SuiteConfig {
    pub fn apply(mut self, o: &ConfigOverrides) -> Self {
        if let Some(v) = &o.suite {
            self.suite = v.clone();
        }
        if let Some(v) = &o.model {
            self.model = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.samples {
            self.samples = v;
        }
        if let Some(v) = o.precision_bits {
            self.precision_bits = v;
        }
        if let Some(v) = &o.abs_tol {
            self.abs_tol = v.clone();
        }
        if let Some(v) = &o.t_values {
            self.t_values = v.split(',').map(|s| s.trim().to_string()).collect();
        }
        if let Some(v) = &o.diagram {
            self.diagram = v.clone();
        }
        self
    }

    /// File contents (possibly empty) with overrides applied, then validated.
    pub fn resolve(file_text: Option<&str>, overrides: &ConfigOverrides) -> Result<ValidatedConfig, ConfigError> {
        let base = match file_text {
            Some(text) => SuiteConfig::from_json_str(text)?,
            None => SuiteConfig::default(),
        };
        base.apply(overrides).validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_documented_defaults() {
        let c = SuiteConfig::from_json_str("").unwrap().validate().unwrap();
        assert_eq!(c.model, ModelKind::Sl2);
        assert_eq!(c.seed(), 0);
        assert_eq!(c.samples(), 1000);
        assert_eq!(c.policy.precision_bits(), 128);
        assert_eq!(c.raw.abs_tol, "1e-9");
        assert_eq!(SuiteConfig::from_json_str("{}").unwrap(), SuiteConfig::default());
    }

    #[test]
    fn rationals_parse_exactly() {
        let c = SuiteConfig {
            t_values: vec!["1".into(), "1/2".into(), "2".into()],
            ..SuiteConfig::default()
        };
        let v = c.validate().unwrap();
        assert_eq!(v.t_values, vec![int(1), crate::numeric::ratio(1, 2), int(2)]);
    }

    #[test]
    fn malformed_rational_names_field() {
        let c = SuiteConfig {
            t_values: vec!["1/0".into()],
            ..SuiteConfig::default()
        };
        let e = c.validate().unwrap_err();
        assert_eq!(e.field.as_deref(), Some("t_values"));
    }

    #[test]
    fn flags_override_file() {
        let o = ConfigOverrides {
            seed: Some(9),
            t_values: Some("1, 1/2,2".into()),
            ..ConfigOverrides::default()
        };
        let v = SuiteConfig::resolve(Some("{\"seed\": 3, \"samples\": 10}"), &o).unwrap();
        assert_eq!(v.seed(), 9);
        assert_eq!(v.samples(), 10);
        assert_eq!(v.t_values, vec![int(1), crate::numeric::ratio(1, 2), int(2)]);
    }

    #[test]
    fn unknown_keys_are_rejected_with_line() {
        let e = SuiteConfig::from_json_str("{\n  \"seed\": 1,\n  \"colour\": 3\n}").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("colour"));
    }
}
