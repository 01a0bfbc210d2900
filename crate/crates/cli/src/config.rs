//! Run configuration files (TOML, one table per section).
//!
//! ```toml
//! [params]
//! lambda = 1.0
//! c = 0.0
//!
//! [grid]
//! length = 20.0
//! n = 512
//! bc = "dirichlet-odd"
//!
//! [initial]
//! kind = "black-soliton"
//!
//! [evolution]
//! dt = 4e-4
//! t_end = 5.0
//!
//! [output]
//! dir = "out"
//! name = "black"
//! ```

use std::path::{Path, PathBuf};

use loggp::evolution::Nonlinearity;
use loggp::{Boundary, EvolutionConfig, Params};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable that overrides the output directory of every command
/// (an explicit `--out-dir` flag still wins).
pub const OUTPUT_DIR_ENV: &str = "LOGGP_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsSection,
    pub grid: GridSection,
    pub initial: InitialSection,
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub lambda: f64,
    #[serde(default)]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub length: f64,
    pub n: usize,
    pub bc: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    BlackSoliton,
    TravelingWave,
    GpDarkSoliton,
    /// `1 + amplitude exp(-(x / width)^2)`
    Bump,
    /// Samples read from a CSV file in the grid layout.
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

fn default_amplitude() -> f64 {
    0.3
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    SplitStep,
    Galerkin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    #[serde(default)]
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub eps: f64,
    #[serde(default = "default_nonlinearity")]
    pub nonlinearity: Nonlinearity,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    /// Truncation order of the Galerkin scheme.
    #[serde(default)]
    pub m: Option<usize>,
    /// Write a CSV snapshot at every record.
    #[serde(default)]
    pub snapshots: bool,
}

fn default_nonlinearity() -> Nonlinearity {
    Nonlinearity::Log
}

fn default_record_every() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_name")]
    pub name: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: None, name: default_name() }
    }
}

fn default_name() -> String {
    "run".into()
}

fn positive(key: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{key} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> CliResult<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        positive("params.lambda", self.params.lambda)?;
        if !self.params.c.is_finite() {
            return Err(CliError::Config("params.c must be finite".into()));
        }
        positive("grid.length", self.grid.length)?;
        if self.grid.n < 8 {
            return Err(CliError::Config(format!("grid.n must be at least 8, got {}", self.grid.n)));
        }
        let ev = &self.evolution;
        positive("evolution.dt", ev.dt)?;
        if !(ev.t_end >= ev.dt) {
            return Err(CliError::Config(format!("evolution.t_end = {} must be at least evolution.dt", ev.t_end)));
        }
        if !(ev.eps >= 0.0) {
            return Err(CliError::Config(format!("evolution.eps must be non-negative, got {}", ev.eps)));
        }
        if ev.nonlinearity == Nonlinearity::LogRegularized && ev.eps == 0.0 {
            return Err(CliError::Config("evolution.eps must be positive for log-regularized".into()));
        }
        if ev.record_every == 0 {
            return Err(CliError::Config("evolution.record_every must be positive".into()));
        }
        match ev.scheme {
            Scheme::Galerkin => {
                if self.grid.bc != Boundary::Free {
                    return Err(CliError::Config("grid.bc must be \"free\" for the galerkin scheme".into()));
                }
                if !matches!(ev.m, Some(m) if m >= 1) {
                    return Err(CliError::Config("evolution.m must be set to at least 1 for the galerkin scheme".into()));
                }
                if ev.nonlinearity != Nonlinearity::Log {
                    return Err(CliError::Config("the galerkin scheme only supports evolution.nonlinearity = \"log\"".into()));
                }
            }
            Scheme::SplitStep => {
                if self.grid.bc == Boundary::Free {
                    return Err(CliError::Config("grid.bc = \"free\" needs evolution.scheme = \"galerkin\"".into()));
                }
                if ev.m.is_some() {
                    return Err(CliError::Config("evolution.m only applies to the galerkin scheme".into()));
                }
            }
        }
        let wave = matches!(
            self.initial.kind,
            InitialKind::BlackSoliton | InitialKind::TravelingWave | InitialKind::GpDarkSoliton
        );
        if wave && self.grid.bc == Boundary::Periodic && self.grid.n % 2 != 0 {
            return Err(CliError::Config("grid.n must be even for a wave on a periodic box".into()));
        }
        if wave && self.grid.bc == Boundary::Free {
            return Err(CliError::Config("wave initial data need grid.bc = \"periodic\" or \"dirichlet-odd\"".into()));
        }
        if self.initial.kind == InitialKind::BlackSoliton && self.params.c != 0.0 {
            return Err(CliError::Config("params.c must be 0 for kind = \"black-soliton\"".into()));
        }
        if self.grid.bc == Boundary::DirichletOdd {
            if self.initial.kind == InitialKind::Bump {
                return Err(CliError::Config("kind = \"bump\" is not odd, use grid.bc = \"periodic\"".into()));
            }
            if wave && self.params.c != 0.0 {
                return Err(CliError::Config("params.c must be 0 on a dirichlet-odd grid".into()));
            }
        }
        if self.initial.kind == InitialKind::Csv && self.initial.path.is_none() {
            return Err(CliError::Config("initial.path is required for kind = \"csv\"".into()));
        }
        if self.initial.kind == InitialKind::Bump {
            positive("initial.width", self.initial.width)?;
        }
        if self.output.name.is_empty() || self.output.name.contains(['/', '\\']) {
            return Err(CliError::Config("output.name must be a plain file stem".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<Params> {
        Ok(Params::new(self.params.lambda, self.params.c)?)
    }

    pub fn evolution_config(&self) -> CliResult<EvolutionConfig> {
        let ev = &self.evolution;
        Ok(EvolutionConfig {
            p: self.params()?,
            dt: ev.dt,
            t_end: ev.t_end,
            eps: ev.eps,
            nonlinearity: ev.nonlinearity,
            record_every: ev.record_every,
            snapshots: ev.snapshots,
        })
    }
}

/// Output directory: explicit flag, then [`OUTPUT_DIR_ENV`], then the configured value, then `.`.
pub fn resolve_output_dir(flag: Option<&Path>, configured: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    configured.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BLACK: &str = r#"
[params]
lambda = 1.0

[grid]
length = 20.0
n = 256
bc = "dirichlet-odd"

[initial]
kind = "black-soliton"

[evolution]
dt = 1e-3
t_end = 0.1
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_toml_str(BLACK).unwrap();
        assert_eq!(cfg.grid.bc, Boundary::DirichletOdd);
        assert_eq!(cfg.evolution.scheme, Scheme::SplitStep);
        assert_eq!(cfg.output.name, "run");
        assert_eq!(cfg.evolution_config().unwrap().steps(), 100);
    }

    #[test]
    fn missing_lambda_is_named() {
        let text = BLACK.replace("lambda = 1.0", "");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
        assert_eq!(err.exit_code(), crate::error::exit::CONFIG);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BLACK.replace("lambda = 1.0", "lambda = 1.0\nlamda = 2.0");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("lamda"), "{err}");
    }

    #[test]
    fn physical_values_are_checked() {
        for (from, to, key) in [
            ("lambda = 1.0", "lambda = -1.0", "params.lambda"),
            ("dt = 1e-3", "dt = 0.0", "evolution.dt"),
            ("t_end = 0.1", "t_end = 1e-4", "evolution.t_end"),
            ("n = 256", "n = 4", "grid.n"),
        ] {
            let err = RunConfig::from_toml_str(&BLACK.replace(from, to)).unwrap_err();
            assert!(err.to_string().contains(key), "{err}");
        }
    }

    #[test]
    fn scheme_and_boundary_must_agree() {
        let text = BLACK.replace("dt = 1e-3", "dt = 1e-3\nscheme = \"galerkin\"\nm = 8");
        assert!(RunConfig::from_toml_str(&text).is_err());
        let text = BLACK.replace("\"dirichlet-odd\"", "\"free\"");
        assert!(RunConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn explicit_flag_wins() {
        let dir = resolve_output_dir(Some(Path::new("a")), Some(Path::new("b")));
        assert_eq!(dir, PathBuf::from("a"));
    }
}
