//! Run configuration: dotted-section TOML (or the JSON echoed into a summary).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::ClassifierConfig;
use crate::model::{InfectionResponse, InitialData, ModelParams, Shape};
use crate::solver::{Monitors, SolverConfig};
use crate::threshold::{BisectConfig, SweepGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub d: f64,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub mu: f64,
    pub h0: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        let p = ModelParams::unit();
        Self {
            d: p.d,
            a11: p.a11,
            a12: p.a12,
            a22: p.a22,
            mu: p.mu,
            h0: p.h0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseName {
    Monod,
    Linear,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseSection {
    pub kind: ResponseName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a21: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
}

impl Default for ResponseSection {
    fn default() -> Self {
        Self {
            kind: ResponseName::Monod,
            a21: Some(2.0),
            slope: None,
            z: None,
            g: None,
        }
    }
}

/// `"cosine"`, a list of samples on `[-h0, h0]`, or a full table such as
/// `{ kind = "skewed_cosine", skew = 0.5 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeSpec {
    Name(String),
    Samples(Vec<f64>),
    Full(Shape),
}

impl ShapeSpec {
    fn resolve(&self) -> std::result::Result<Shape, String> {
        match self {
            ShapeSpec::Name(n) if n == "cosine" => Ok(Shape::Cosine),
            ShapeSpec::Name(n) => Err(format!(
                "unknown shape `{n}` (expected \"cosine\", a sample list or a table with `kind`)"
            )),
            ShapeSpec::Samples(v) => Ok(Shape::Sampled { values: v.clone() }),
            ShapeSpec::Full(s) => Ok(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitSection {
    pub sigma: f64,
    pub phi: ShapeSpec,
    pub psi: ShapeSpec,
}

impl Default for InitSection {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            phi: ShapeSpec::Name("cosine".into()),
            psi: ShapeSpec::Name("cosine".into()),
        }
    }
}

/// Every field falls back to [`SolverConfig::defaults_for`] of the model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl_adv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_cfl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_stride: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub early_stop: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub svg: bool,
    /// Times at which `t, x, u, v` profiles are written.
    pub profiles: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    Sigma,
    Mu,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSection {
    pub target: Target,
    pub bisect: BisectConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub response: ResponseSection,
    pub init: InitSection,
    pub solver: SolverSection,
    pub monitors: Monitors,
    pub output: OutputSection,
    pub threshold: ThresholdSection,
    pub sweep: SweepGrid,
}

/// A configuration together with the text it came from, for line lookups.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub source: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: ModelParams,
    pub response: InfectionResponse,
    pub init: InitialData,
    pub solver: SolverConfig,
}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// 1-based line defining `section.key` in TOML text, accepting both
/// `[section]\nkey = ...` and `section.key = ...`; a bare section name
/// matches its header.
pub fn find_key_line(src: &str, dotted: &str) -> Option<usize> {
    let (section, key) = dotted.split_once('.').unwrap_or((dotted, ""));
    let mut current = String::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = h.trim().to_string();
            if key.is_empty() && current == section {
                return Some(i + 1);
            }
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else {
            continue;
        };
        let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
        let full = if current.is_empty() {
            lhs
        } else {
            format!("{current}.{lhs}")
        };
        if full == dotted || (!key.is_empty() && full.starts_with(&format!("{dotted}.")))
            || (key.is_empty() && full.starts_with(&format!("{section}.")))
        {
            return Some(i + 1);
        }
    }
    None
}

impl LoadedConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(src).map_err(|e| Error::Config {
            key: "<syntax>".into(),
            line: e.span().map(|s| line_of_offset(src, s.start)),
            message: e.message().to_string(),
        })?;
        Ok(Self {
            config,
            source: Some(src.to_string()),
        })
    }

    /// Accepts a bare configuration or a run summary with a `config` key.
    pub fn from_json_str(src: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(src)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        let config = serde_json::from_value(value).map_err(|e| Error::Config {
            key: "<json>".into(),
            line: None,
            message: e.to_string(),
        })?;
        Ok(Self {
            config,
            source: None,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&src)
        } else {
            Self::from_toml_str(&src)
        }
    }

    fn error(&self, key: String, message: String) -> Error {
        let line = self.source.as_deref().and_then(|s| find_key_line(s, &key));
        Error::Config { key, line, message }
    }

    /// Builds validated model objects; failures name the offending key.
    pub fn resolve(&self) -> Result<Resolved> {
        let c = &self.config;
        let m = &c.model;
        let params = ModelParams::new(m.d, m.a11, m.a12, m.a22, m.mu, m.h0).map_err(|e| match e {
            Error::InvalidParameter { name, .. } => self.error(format!("model.{name}"), e.to_string()),
            e => self.error("model".into(), e.to_string()),
        })?;

        let r = &c.response;
        let missing = |field: &str| {
            self.error(
                format!("response.{field}"),
                format!("required for kind = {:?}", r.kind).to_lowercase(),
            )
        };
        let response = match r.kind {
            ResponseName::Monod => InfectionResponse::monod(r.a21.ok_or_else(|| missing("a21"))?)
                .map_err(|e| self.error("response.a21".into(), e.to_string()))?,
            ResponseName::Linear => {
                InfectionResponse::linear(r.slope.ok_or_else(|| missing("slope"))?)
                    .map_err(|e| self.error("response.slope".into(), e.to_string()))?
            }
            ResponseName::Tabulated => InfectionResponse::tabulated(
                r.z.clone().ok_or_else(|| missing("z"))?,
                r.g.clone().ok_or_else(|| missing("g"))?,
            )
            .map_err(|e| self.error("response.z".into(), e.to_string()))?,
        };

        let phi = c.init.phi.resolve().map_err(|m| self.error("init.phi".into(), m))?;
        let psi = c.init.psi.resolve().map_err(|m| self.error("init.psi".into(), m))?;
        if !(c.init.sigma >= 0.0 && c.init.sigma.is_finite()) {
            return Err(self.error(
                "init.sigma".into(),
                format!("must be finite and non-negative, got {}", c.init.sigma),
            ));
        }
        let init = InitialData::new(c.init.sigma, phi, psi, params.h0)
            .map_err(|e| self.error("init".into(), e.to_string()))?;

        let solver = self.solver_config(&params)?;
        Ok(Resolved {
            params,
            response,
            init,
            solver,
        })
    }

    fn solver_config(&self, p: &ModelParams) -> Result<SolverConfig> {
        let s = &self.config.solver;
        let o = &self.config.output;
        let mut cfg = SolverConfig::defaults_for(p);
        if let Some(t_max) = s.t_max {
            cfg.t_max = t_max;
            cfg.frame_stride = t_max / 2000.0;
        }
        cfg.n_cells = s.n_cells.unwrap_or(cfg.n_cells);
        cfg.dt_max = s.dt_max.unwrap_or(cfg.dt_max);
        cfg.cfl_adv = s.cfl_adv.unwrap_or(cfg.cfl_adv);
        cfg.front_cfl = s.front_cfl.unwrap_or(cfg.front_cfl);
        cfg.frame_stride = s.frame_stride.unwrap_or(cfg.frame_stride);
        cfg.early_stop = s.early_stop.unwrap_or(cfg.early_stop);
        cfg.classifier = s.classifier.unwrap_or(cfg.classifier);
        cfg.snapshot_times = o.profiles.clone();
        cfg.validate().map_err(|e| match e {
            Error::InvalidParameter { name, .. } => self.error(format!("solver.{name}"), e.to_string()),
            e => self.error("solver".into(), e.to_string()),
        })?;
        if let Some(&t) = o.profiles.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(self.error("output.profiles".into(), format!("invalid time {t}")));
        }
        Ok(cfg)
    }

    /// The configuration with every solver default filled in, so that
    /// re-running it reproduces the run exactly.
    pub fn explicit(&self, resolved: &Resolved) -> RunConfig {
        let mut c = self.config.clone();
        let s = &resolved.solver;
        c.solver = SolverSection {
            n_cells: Some(s.n_cells),
            dt_max: Some(s.dt_max),
            cfl_adv: Some(s.cfl_adv),
            front_cfl: Some(s.front_cfl),
            t_max: Some(s.t_max),
            frame_stride: Some(s.frame_stride),
            early_stop: Some(s.early_stop),
            classifier: Some(s.classifier),
        };
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves_to_defaults() {
        let l = LoadedConfig::from_toml_str("").unwrap();
        let r = l.resolve().unwrap();
        assert_eq!(r.params, ModelParams::unit());
        assert_eq!(r.solver, SolverConfig::defaults_for(&r.params));
        assert_eq!(r.init.sigma, 1.0);
    }

    #[test]
    fn dotted_and_sectioned_keys_agree() {
        let a = LoadedConfig::from_toml_str("model.d = 2.0\ninit.sigma = 0.3\n").unwrap();
        let b = LoadedConfig::from_toml_str("[model]\nd = 2.0\n[init]\nsigma = 0.3\n").unwrap();
        assert_eq!(a.config, b.config);
    }

    #[test]
    fn invalid_parameter_names_key_and_line() {
        let src = "[model]\nd = 1.0\na11 = -1.0\n";
        let err = LoadedConfig::from_toml_str(src).unwrap().resolve().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("model.a11") && msg.contains("line 3"), "{msg}");
        let err = LoadedConfig::from_toml_str("solver.n_cells = 7\n")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("solver.n_cells"), "{err}");
    }

    #[test]
    fn syntax_and_unknown_keys_report_lines() {
        let err = LoadedConfig::from_toml_str("[model]\nd = 1.0\nbogus = 2\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: Some(3), .. }), "{err}");
        let err = LoadedConfig::from_toml_str("model.d = \n").unwrap_err();
        assert!(matches!(err, Error::Config { line: Some(1), .. }), "{err}");
    }

    #[test]
    fn shape_specs() {
        let src = r#"
init.phi = { kind = "skewed_cosine", skew = 0.5 }
init.psi = [0.0, 1.0, 0.0]
"#;
        let r = LoadedConfig::from_toml_str(src).unwrap().resolve().unwrap();
        assert_eq!(r.init.phi, Shape::SkewedCosine { skew: 0.5 });
        assert_eq!(r.init.psi, Shape::Sampled { values: vec![0.0, 1.0, 0.0] });
        let err = LoadedConfig::from_toml_str("init.phi = \"gauss\"")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("init.phi"));
    }

    #[test]
    fn response_kinds() {
        let lin = LoadedConfig::from_toml_str("response.kind = \"linear\"\nresponse.slope = 0.5")
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(lin.response.eval(2.0), 1.0);
        let err = LoadedConfig::from_toml_str("response.kind = \"tabulated\"")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("response.z"));
    }

    #[test]
    fn explicit_config_round_trips_through_json() {
        let l = LoadedConfig::from_toml_str("model.mu = 0.5\nsolver.n_cells = 64").unwrap();
        let r = l.resolve().unwrap();
        let explicit = l.explicit(&r);
        let json = serde_json::json!({ "config": explicit, "verdict": "spreading" }).to_string();
        let back = LoadedConfig::from_json_str(&json).unwrap();
        assert_eq!(back.config, explicit);
        let r2 = back.resolve().unwrap();
        assert_eq!(r2.solver, r.solver);
        assert_eq!(r2.params, r.params);
    }

    #[test]
    fn finds_key_lines() {
        let src = "# c\n[model]\nd = 1\n\n[solver]\nn_cells = 8\nmonitors.bounds = true\n";
        assert_eq!(find_key_line(src, "model.d"), Some(3));
        assert_eq!(find_key_line(src, "solver.n_cells"), Some(6));
        assert_eq!(find_key_line(src, "solver"), Some(5));
        assert_eq!(find_key_line(src, "model.a11"), None);
    }
}
