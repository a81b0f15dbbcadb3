use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PrecisionContext, DEFAULT_MAX_PRECISION, DEFAULT_PRECISION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquationConfig {
    pub a: u64,
    pub b: u64,
    /// Factors on each side.
    pub factors: [u32; 2],
}

impl Default for EquationConfig {
    fn default() -> Self {
        Self {
            a: 3,
            b: 5,
            factors: [2, 2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrecisionConfig {
    pub working: u32,
    pub max: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self {
            working: DEFAULT_PRECISION,
            max: DEFAULT_MAX_PRECISION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageToggles {
    pub matveev: bool,
    pub lll: bool,
    pub bd: bool,
    pub pairwise: bool,
    pub search: bool,
    pub special: bool,
}

impl Default for StageToggles {
    fn default() -> Self {
        Self {
            matveev: true,
            lll: true,
            bd: true,
            pairwise: true,
            search: true,
            special: true,
        }
    }
}

/// Floors for the case-family ranges; the families run over at least these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    pub case1_x1_ceiling: u64,
    pub case2_y1_ceiling: u64,
    pub sieve_modulus: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            case1_x1_ceiling: 118,
            case2_y1_ceiling: 81,
            sieve_modulus: 819,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub equation: EquationConfig,
    pub precision: PrecisionConfig,
    pub stages: StageToggles,
    pub families: FamilyConfig,
    pub cache_dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

pub const STAGE_NAMES: [&str; 6] = ["matveev", "lll", "bd", "pairwise", "search", "special"];

impl StageToggles {
    pub fn get(&self, name: &str) -> Option<bool> {
        Some(match name {
            "matveev" => self.matveev,
            "lll" => self.lll,
            "bd" => self.bd,
            "pairwise" => self.pairwise,
            "search" => self.search,
            "special" => self.special,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, on: bool) -> Result<()> {
        let slot = match name {
            "matveev" => &mut self.matveev,
            "lll" => &mut self.lll,
            "bd" => &mut self.bd,
            "pairwise" => &mut self.pairwise,
            "search" => &mut self.search,
            "special" => &mut self.special,
            _ => return Err(Error::Config(format!("unknown stage {name:?}"))),
        };
        *slot = on;
        Ok(())
    }

    /// Enables `name` and the stages it depends on, and nothing else.
    pub fn only_through(name: &str) -> Result<Self> {
        let mut t = StageToggles {
            matveev: false,
            lll: false,
            bd: false,
            pairwise: false,
            search: false,
            special: false,
        };
        if name == "special" {
            t.special = true;
            return Ok(t);
        }
        let idx = STAGE_NAMES[..5]
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| Error::Config(format!("unknown stage {name:?}")))?;
        for s in &STAGE_NAMES[..=idx] {
            t.set(s, true)?;
        }
        Ok(t)
    }
}

/// `(r, e)` with `n = r^e` and `e` maximal.
fn perfect_power_root(n: u64) -> (u64, u32) {
    for e in (2..=63u32).rev() {
        let r = (n as f64).powf(1.0 / e as f64).round() as u64;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand >= 2 && cand.checked_pow(e) == Some(n) {
                return (cand, e);
            }
        }
    }
    (n, 1)
}

/// Whether `a` and `b` are powers of one common integer.
pub fn multiplicatively_dependent(a: u64, b: u64) -> bool {
    perfect_power_root(a).0 == perfect_power_root(b).0
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let EquationConfig { a, b, factors } = self.equation;
        if a < 2 || b < 2 {
            return Err(Error::Config("bases must be at least 2".into()));
        }
        if a == b {
            return Err(Error::Config("bases must be distinct".into()));
        }
        if multiplicatively_dependent(a, b) {
            return Err(Error::Config(format!(
                "bases {a} and {b} are powers of a common integer, so log {a} / log {b} is rational"
            )));
        }
        if factors.iter().any(|&f| f == 0) {
            return Err(Error::Config("factor counts must be positive".into()));
        }
        self.precision_context()?;
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(())
    }

    pub fn precision_context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision.working, self.precision.max)
    }

    /// Whether the staged proof knows how to handle this equation.
    pub fn check_supported(&self) -> Result<()> {
        if self.equation.factors != [2, 2] {
            return Err(Error::Unsupported(format!(
                "{:?} factors per side; only 2 x 2 is implemented",
                self.equation.factors
            )));
        }
        if (self.equation.a, self.equation.b) != (3, 5) {
            return Err(Error::Unsupported(format!(
                "the staged proof is set up for bases (3, 5), got ({}, {})",
                self.equation.a, self.equation.b
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_roundtrip() {
        let cfg = PipelineConfig::default();
        assert!(cfg.validate().is_ok());
        let back = PipelineConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(PipelineConfig::from_toml_str("").unwrap(), cfg);
    }

    #[test]
    fn dependent_bases_rejected() {
        assert!(multiplicatively_dependent(3, 9));
        assert!(multiplicatively_dependent(8, 32));
        assert!(!multiplicatively_dependent(3, 5));
        assert!(!multiplicatively_dependent(6, 12));
        let err = PipelineConfig::from_toml_str("[equation]\na = 3\nb = 9\n").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = PipelineConfig::from_toml_str("[stages]\nsearch = false\n[precision]\nworking = 1024\n").unwrap();
        assert!(!cfg.stages.search);
        assert!(cfg.stages.matveev);
        assert_eq!(cfg.precision.working, 1024);
        assert_eq!(cfg.precision.max, DEFAULT_MAX_PRECISION);
        assert!(PipelineConfig::from_toml_str("[stages]\nbogus = true\n").is_err());
    }

    #[test]
    fn stage_selection() {
        let t = StageToggles::only_through("bd").unwrap();
        assert!(t.matveev && t.lll && t.bd && !t.pairwise && !t.special);
        assert!(StageToggles::only_through("nope").is_err());
    }
}
