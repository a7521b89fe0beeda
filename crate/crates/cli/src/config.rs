//! Experiment configuration: TOML or JSON, unknown keys rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum Task {
    Inverse,
    Walk,
    Reduce,
    Membership,
    FactorCheck,
    Entropy,
    OrdersTest,
    Reproduce,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub task: Option<Task>,
    /// Compact group syntax, e.g. `heisenberg(1)`.
    pub group: Option<String>,
    /// Order generators as words; the catalog defaults when absent.
    pub generators: Option<Vec<String>>,
    pub f: Option<String>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub caps: Caps,
    pub inverse: InverseKnobs,
    pub walk: WalkKnobs,
    pub reduce: AlphaList,
    pub membership: AlphaList,
    pub factor: FactorKnobs,
    pub entropy: EntropyKnobs,
    pub orders: OrdersKnobs,
    pub reproduce: ReproduceKnobs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub support_cap: usize,
    pub max_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { support_cap: 1_000_000, max_order: 128 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InverseKnobs {
    /// Truncation order; chosen adaptively when absent.
    #[serde(rename = "N")]
    pub order: Option<usize>,
    /// Radius of the ball on which both residuals are checked.
    pub window_radius: usize,
}

impl Default for InverseKnobs {
    fn default() -> Self {
        InverseKnobs { order: None, window_radius: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WalkKnobs {
    /// Symmetric probability element; the simple random walk when absent.
    pub x: Option<String>,
    #[serde(rename = "K")]
    pub k_max: usize,
    pub fit_window: [usize; 2],
    #[serde(rename = "Rmax")]
    pub r_max: usize,
}

impl Default for WalkKnobs {
    fn default() -> Self {
        WalkKnobs { x: None, k_max: 40, fit_window: [10, 40], r_max: 10 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlphaList {
    pub alpha: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FactorKnobs {
    /// Elements to test; a pinned member/non-member panel when empty.
    pub alpha: Vec<String>,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(rename = "nSamples")]
    pub samples: usize,
    pub shards: usize,
    pub prune_bias: f64,
    pub tolerance: f64,
    /// ν = build_nu(m); defaults to m = f(1).
    pub nu_m: Option<i64>,
    /// ν = build_nu_composite(M); overrides `nu_m`.
    pub nu_composite: Option<i64>,
    /// Points t at which ν̂ is tabulated.
    pub fourier_points: usize,
}

impl Default for FactorKnobs {
    fn default() -> Self {
        FactorKnobs {
            alpha: Vec::new(),
            order: 22,
            samples: 200_000,
            shards: 16,
            prune_bias: 2e-3,
            tolerance: 0.01,
            nu_m: None,
            nu_composite: None,
            fourier_points: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntropyKnobs {
    /// Terms of the Fuglede–Kadison series for x; skipped when zero.
    #[serde(rename = "K")]
    pub fk_terms: usize,
}

impl Default for EntropyKnobs {
    fn default() -> Self {
        EntropyKnobs { fk_terms: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OrdersKnobs {
    pub triples: usize,
    pub radius: usize,
}

impl Default for OrdersKnobs {
    fn default() -> Self {
        OrdersKnobs { triples: 10_000, radius: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReproduceKnobs {
    pub corrupt_nu: bool,
    #[serde(rename = "nSamples")]
    pub samples: usize,
    /// Criteria to run; all when empty.
    pub only: Vec<u8>,
}

impl Default for ReproduceKnobs {
    fn default() -> Self {
        ReproduceKnobs { corrupt_nu: false, samples: 200_000, only: Vec::new() }
    }
}

impl ExperimentConfig {
    /// JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<Self, String> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| format!("config (JSON): {e}"))
        } else {
            toml::from_str(text).map_err(|e| format!("config (TOML): {e}"))
        }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let toml = "group = \"heisenberg(1)\"\nf = \"3 - a - b\"\n[inverse]\nN = 6\n";
        let json = r#"{"group": "heisenberg(1)", "f": "3 - a - b", "inverse": {"N": 6}}"#;
        let a = ExperimentConfig::parse(toml).unwrap();
        let b = ExperimentConfig::parse(json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.inverse.order, Some(6));
    }

    #[test]
    fn round_trip_is_lossless() {
        let cfg = ExperimentConfig { f: Some("5 - a".into()), seed: 9, ..ExperimentConfig::default() };
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::parse("grop = \"z(1)\"").is_err());
        assert!(ExperimentConfig::parse("[walk]\nk = 3").is_err());
    }

    #[test]
    fn task_names() {
        assert_eq!(Task::FactorCheck.to_string(), "factor-check");
        let cfg = ExperimentConfig::parse("task = \"orders-test\"").unwrap();
        assert_eq!(cfg.task, Some(Task::OrdersTest));
    }

    #[test]
    fn shipped_configs_parse() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
        let mut seen = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(cfg.task.is_some(), "{}", path.display());
            seen += 1;
        }
        assert!(seen >= 4);
    }
}
