//! Run configuration, range flags and output provenance.

use std::path::{Path, PathBuf};

use relquant_core::cone_symbol::{linspace, ConeConfig, Orientation, QuadParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_ENV: &str = "RELQUANT_OUT_DIR";

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Units {
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            mass: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }
}

/// `count` evenly spaced points on `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableSpec {
    pub s: AxisSpec,
    pub rho: AxisSpec,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            s: AxisSpec {
                min: -10.0,
                max: 10.0,
                count: 200,
            },
            rho: AxisSpec {
                min: 0.0,
                max: 6.0,
                count: 50,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Exact,
    Direct,
    Approximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Momentum,
    Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionSpec {
    pub points_per_axis: Vec<usize>,
    pub half_widths: Vec<f64>,
    pub center: [f64; 4],
    pub widths: Vec<f64>,
    pub symbol: SymbolKind,
    pub cone_cutoff: bool,
    pub taus: Vec<f64>,
    pub representation: Representation,
}

impl Default for EvolutionSpec {
    fn default() -> Self {
        Self {
            points_per_axis: vec![256, 256],
            half_widths: vec![6.0, 6.0],
            center: [3.0, 1.0, 0.0, 0.0],
            widths: vec![0.2, 0.2],
            symbol: SymbolKind::Exact,
            cone_cutoff: true,
            taus: vec![0.0, 0.25, 0.5],
            representation: Representation::Momentum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub units: Units,
    pub orientation: Orientation,
    pub quadrature: QuadParams,
    pub table: TableSpec,
    pub evolution: EvolutionSpec,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid run config: {e}")))
    }

    pub fn cone(&self) -> ConeConfig {
        ConeConfig {
            mass: self.units.mass,
            c: self.units.c,
            hbar: self.units.hbar,
            orientation: self.orientation,
        }
    }
}

/// Parses `min:max:step` or a single number.
pub fn parse_range(text: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError(format!("malformed range {text:?}; expected min:max:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    match parts[..] {
        [v] => Ok(vec![v]),
        [lo, hi, step] => {
            if step <= 0.0 || hi < lo {
                return Err(ConfigError(format!(
                    "range {text:?} needs max ≥ min and a positive step"
                )));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            if n > 1_000_000 {
                return Err(ConfigError(format!("range {text:?} has too many points")));
            }
            Ok((0..n).map(|i| lo + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(text: &str) -> Result<Vec<f64>, ConfigError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ConfigError(format!("malformed number {p:?} in list {text:?}")))
        })
        .collect()
}

/// Header fields written at the top of every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    /// Hashes the configuration together with the command line that
    /// consumed it. The output directory is excluded so that runs writing
    /// to different places still agree.
    pub fn new(config: &RunConfig, command: &impl Serialize) -> Self {
        let mut hashed = config.clone();
        hashed.output_dir = None;
        let canonical = serde_json::json!({ "command": command, "config": hashed });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        Self {
            tool: format!("relquant {}", env!("CARGO_PKG_VERSION")),
            config_sha256: hex::encode(digest),
            seed: config.seed,
        }
    }

    pub fn csv_header(&self) -> String {
        format!(
            "# tool: {}\n# config_sha256: {}\n# seed: {}\n",
            self.tool, self.config_sha256, self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1:1:0.5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0:4:1").unwrap().len(), 5);
        assert_eq!(parse_range("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_range("2.5").unwrap(), vec![2.5]);
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("a:b:c").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_list("0,,1").is_err());
        assert!(parse_list("nan").is_err());
    }

    #[test]
    fn config_defaults_and_strictness() {
        let c = RunConfig::parse("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.seed, 0);
        let c = RunConfig::parse(r#"{"units": {"c": 2.0}, "orientation": "past", "seed": 9}"#).unwrap();
        assert_eq!(c.cone().c, 2.0);
        assert_eq!(c.cone().mass, 1.0);
        assert_eq!(c.cone().orientation, Orientation::Past);
        assert!(RunConfig::parse(r#"{"unit": {}}"#).is_err());
        assert!(RunConfig::parse(r#"{"quadrature": {"rel_tol": 1e-8, "bogus": 1}}"#).is_err());
    }

    #[test]
    fn provenance_ignores_output_dir_only() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.output_dir = Some("/tmp/x".into());
        let mut c = a.clone();
        c.seed = 3;
        let h = |cfg: &RunConfig| Provenance::new(cfg, &"lambda").config_sha256;
        assert_eq!(h(&a), h(&b));
        assert_ne!(h(&a), h(&c));
        assert_ne!(h(&a), Provenance::new(&a, &"mu").config_sha256);
        assert_eq!(h(&a).len(), 64);
    }
}
