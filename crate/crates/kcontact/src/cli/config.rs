//! TOML run configuration and its resolution into a [`Plan`].

use crate::corpus::{self, ExampleSystem, GaugeSel, Params};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::hdw::Mode;
use crate::integrate::STEPS_PER_CELL;
use crate::sampling::DEFAULT_SAMPLES;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub example: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub section: Option<SectionConfig>,
    pub solution: Option<SolutionConfig>,
    #[serde(default)]
    pub check: CheckConfig,
    pub grid: Option<GridConfig>,
    pub output: Option<OutputConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    pub key: String,
    pub gauge: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionConfig {
    pub key: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub map_tol: Option<f64>,
    pub closed_tol: Option<f64>,
    pub pde_tol: Option<f64>,
    pub base_per_dim: Option<usize>,
    pub family_per_dim: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub counts: Vec<usize>,
    pub steps_per_cell: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAP_TOL: f64 = 1e-6;
pub const DEFAULT_CLOSED_TOL: f64 = 1e-8;
pub const DEFAULT_PDE_TOL: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 0x6b63;
pub const BASE_PER_DIM: usize = 9;
pub const FAMILY_PER_DIM: usize = 5;

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// Apply a `name=value` override: `section`, `solution`, `gauge`, `samples`,
    /// `tol`, `map_tol` and `steps_per_cell` are run settings, anything else an
    /// example parameter.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects name=value, got '{assignment}'"))
        })?;
        let (k, v) = (k.trim(), v.trim());
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("value of {k} is not a number: '{v}'")))
        };
        let count = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("value of {k} is not a count: '{v}'")))
        };
        match k {
            "section" => {
                let gauge = self.section.as_ref().and_then(|s| s.gauge.clone());
                self.section = Some(SectionConfig {
                    key: v.into(),
                    gauge,
                });
            }
            "gauge" => {
                let s = self.section.get_or_insert_with(SectionConfig::default);
                s.gauge = Some(v.into());
            }
            "solution" => self.solution = Some(SolutionConfig { key: v.into() }),
            "samples" => self.check.samples = Some(count(v)?),
            "tol" => self.check.tol = Some(num(v)?),
            "map_tol" => self.check.map_tol = Some(num(v)?),
            "steps_per_cell" => {
                let g = self.grid.get_or_insert_with(GridConfig::default);
                g.steps_per_cell = Some(count(v)?);
            }
            "" => return Err(Error::Config("empty parameter name in --set".into())),
            _ => {
                self.params.insert(k.into(), num(v)?);
            }
        }
        Ok(())
    }

    /// Resolve against the corpus into a runnable plan.
    pub fn resolve(&self) -> Result<Plan> {
        let key = self.example.as_deref().ok_or_else(|| {
            Error::Config("no example given (use --example or `example = ...`)".into())
        })?;
        let example = corpus::load(key)?;
        let params = example.merge(&self.params)?;
        let mode = match &self.mode {
            Some(m) => m.parse::<Mode>()?,
            None => Mode::Standard,
        };
        let section = match &self.section {
            Some(s) if !s.key.is_empty() => {
                example.section_info(&s.key)?;
                Some(s.key.clone())
            }
            _ => None,
        };
        let gauge = match self.section.as_ref().and_then(|s| s.gauge.as_deref()) {
            Some(g) => g.parse::<GaugeSel>()?,
            None => GaugeSel::Auto,
        };
        let solution = match &self.solution {
            Some(s) => {
                example.solution_info(&s.key)?;
                Some(s.key.clone())
            }
            None => None,
        };
        let grid = match &self.grid {
            Some(g) if !g.counts.is_empty() => {
                let spec = GridSpec::new(g.origin.clone(), g.spacing.clone(), g.counts.clone())
                    .map_err(|e| Error::Config(format!("[grid]: {e}")))?;
                if spec.k() != example.chart.k {
                    return Err(Error::Config(format!(
                        "[grid] has {} directions but {} needs k = {}",
                        spec.k(),
                        example.key,
                        example.chart.k
                    )));
                }
                Some(spec)
            }
            _ => None,
        };
        let c = &self.check;
        let positive = |name: &str, v: f64| -> Result<f64> {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("[check] {name} must be positive")))
            }
        };
        let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(Error::Config("[check] samples must be at least 1".into()));
        }
        let steps = self
            .grid
            .as_ref()
            .and_then(|g| g.steps_per_cell)
            .unwrap_or(STEPS_PER_CELL);
        if steps == 0 {
            return Err(Error::Config(
                "[grid] steps_per_cell must be at least 1".into(),
            ));
        }
        Ok(Plan {
            example,
            params,
            mode,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            section,
            gauge,
            solution,
            grid,
            steps_per_cell: steps,
            samples,
            tol: positive("tol", c.tol.unwrap_or(DEFAULT_TOL))?,
            map_tol: positive("map_tol", c.map_tol.unwrap_or(DEFAULT_MAP_TOL))?,
            closed_tol: positive("closed_tol", c.closed_tol.unwrap_or(DEFAULT_CLOSED_TOL))?,
            pde_tol: positive("pde_tol", c.pde_tol.unwrap_or(DEFAULT_PDE_TOL))?,
            base_per_dim: c.base_per_dim.unwrap_or(BASE_PER_DIM).max(1),
            family_per_dim: c.family_per_dim.unwrap_or(FAMILY_PER_DIM).max(1),
            out: self.output.as_ref().and_then(|o| o.dir.clone()),
        })
    }
}

/// Fully resolved run.
#[derive(Clone, Debug)]
pub struct Plan {
    pub example: ExampleSystem,
    pub params: Params,
    pub mode: Mode,
    pub seed: u64,
    pub section: Option<String>,
    pub gauge: GaugeSel,
    pub solution: Option<String>,
    pub grid: Option<GridSpec>,
    pub steps_per_cell: usize,
    pub samples: usize,
    pub tol: f64,
    pub map_tol: f64,
    pub closed_tol: f64,
    pub pde_tol: f64,
    pub base_per_dim: usize,
    pub family_per_dim: usize,
    pub out: Option<PathBuf>,
}

impl Plan {
    /// Plan for a corpus case of example `ex`.
    pub fn for_case(ex: &ExampleSystem, case: &corpus::ExpectedCase, seed: u64) -> Result<Plan> {
        let mut cfg = RunConfig {
            example: Some(ex.key.into()),
            mode: Some(case.mode.to_string()),
            seed: Some(seed),
            ..Default::default()
        };
        for (k, v) in &case.overrides {
            cfg.params.insert(k.to_string(), *v);
        }
        if let Some(s) = case.section {
            cfg.section = Some(SectionConfig {
                key: s.into(),
                gauge: case.gauge.map(String::from),
            });
        }
        if let Some(s) = case.solution {
            cfg.solution = Some(SolutionConfig { key: s.into() });
        }
        cfg.resolve()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::parse(
            r#"
example = "telegrapher"
mode = "evolution"
seed = 3
[params]
a = -0.5
[section]
key = "ansatz-linear"
[check]
samples = 10
tol = 1e-9
[grid]
origin = [0.0, 0.0]
spacing = [0.1, 0.1]
counts = [5, 5]
"#,
        )
        .unwrap();
        let plan = cfg.resolve().unwrap();
        assert_eq!(plan.mode, Mode::Evolution);
        assert_eq!(plan.params["a"], -0.5);
        assert_eq!(plan.samples, 10);
        assert_eq!(plan.grid.unwrap().len(), 25);
    }

    #[test]
    fn unknown_field_is_config_error() {
        let e = RunConfig::parse("exampel = \"x\"").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_parameter_rejected() {
        let mut cfg = RunConfig {
            example: Some("telegrapher".into()),
            ..Default::default()
        };
        cfg.set("bogus=1").unwrap();
        assert_eq!(cfg.resolve().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn set_routes_run_settings() {
        let mut cfg = RunConfig::default();
        cfg.set("section=zdep-family").unwrap();
        cfg.set("gauge=diagonal").unwrap();
        cfg.set("samples=7").unwrap();
        assert_eq!(
            cfg.section.as_ref().unwrap().gauge.as_deref(),
            Some("diagonal")
        );
        assert_eq!(cfg.check.samples, Some(7));
        assert!(cfg.set("novalue").is_err());
        assert!(cfg.set("a=x").is_err());
    }
}
