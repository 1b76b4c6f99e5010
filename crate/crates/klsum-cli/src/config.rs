//! The canonical experiment configuration: one serializable JSON
//! document that fully describes a run.
//!
//! Precedence is flags > config file > defaults.  `main` builds the
//! effective config by starting from [`ExperimentConfig::default`],
//! overlaying a `--config` file if given, then overlaying every flag
//! the user passed.  The effective config is echoed into every artifact
//! (embedded in JSON records, sidecar `.meta.json` for CSV files) so an
//! artifact always records how it was produced.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use klsum::bessel::TransformWeight;
use klsum::multiplier::MultiplierSpec;
use klsum::testfn::{self, PhiProfile, TestFunction};
use klsum::{Error, Result};

/// Everything a run needs, as one flat document.
///
/// Unknown JSON fields are rejected (a typo'd field name is an invalid
/// config, not a silent default), and serialization round-trips:
/// config -> JSON -> config is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Subcommand: sum | partial | window | tail | exact | phi | verify.
    pub command: String,
    /// Multiplier base: "eta" | "theta" | "trivial".
    pub multiplier: String,
    /// Group level (defaults per base: eta 1, theta 4, trivial 1).
    pub level: Option<u64>,
    /// Twist by the real character of this modulus.
    pub twist: Option<u64>,
    /// Use the complex-conjugate multiplier.
    pub conjugate: bool,
    /// Weight override in halves (1 = 1/2, 3 = 3/2; sign must match the
    /// conjugation flag).  Rarely needed: each base carries its weight.
    pub weight_halves: Option<i32>,
    /// First sum index.
    pub m: i64,
    /// Second sum index; also the coefficient index for `exact`.
    pub n: i64,
    /// Single modulus, for `sum`.
    pub c: Option<u64>,
    /// Upper bound on moduli: the sweep cutoff for `partial`, the
    /// truncation for `exact`, `c_max` for `tail`.
    pub x_max: Option<u64>,
    /// Modulus window `[y, x]` for `window`.
    pub window: Option<(u64, u64)>,
    /// Row sampling for `partial`: "all" | "dyadic" | "grid".
    pub sample: String,
    /// Row spacing when `sample` is "grid".
    pub grid_step: Option<u64>,
    /// Tail cut coefficient: `tail` sums moduli above
    /// `alpha * sqrt(|shifted m * shifted n|)`.
    pub alpha: Option<f64>,
    /// Tail Bessel kind: "I" | "J".
    pub kind: Option<String>,
    /// Half-integral Bessel index in halves (1 = 1/2, 3 = 3/2), for
    /// `tail` weights and the `phi` hat/quarter transforms.
    pub beta_halves: Option<i32>,
    /// Test-function amplitude scale `a` (`phi`).
    pub a: Option<f64>,
    /// Test-function center scale `x` (`phi`).
    pub x: Option<f64>,
    /// Ramp width `T` (`phi`); defaults to `x^(1-delta)/2`.
    pub t_big: Option<f64>,
    /// Relative ramp exponent `delta` (`phi`).
    pub delta: Option<f64>,
    /// Ramp profile: "smooth" | "linear".
    pub profile: String,
    /// Which transform `phi` evaluates: "tilde" | "hat" | "quarter".
    pub transform: Option<String>,
    /// Spectral parameter `r` for the tilde/hat transforms.
    pub r: Option<f64>,
    /// Artifact destination; stdout when absent.
    pub output: Option<PathBuf>,
    /// Result-cache file; overrides the `KLSUM_CACHE_DIR` default.
    pub cache: Option<PathBuf>,
    /// Worker threads for the sweep commands (0/absent: library default).
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            command: String::new(),
            multiplier: "trivial".into(),
            level: None,
            twist: None,
            conjugate: false,
            weight_halves: None,
            m: 0,
            n: 1,
            c: None,
            x_max: None,
            window: None,
            sample: "all".into(),
            grid_step: None,
            alpha: None,
            kind: None,
            beta_halves: None,
            a: None,
            x: None,
            t_big: None,
            delta: None,
            profile: "smooth".into(),
            transform: None,
            r: None,
            output: None,
            cache: None,
            threads: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl ExperimentConfig {
    /// Reads a config document from a JSON file.
    ///
    /// # Errors
    ///
    /// Unreadable files and malformed or unknown-field JSON are invalid
    /// configs.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| invalid(format!("malformed config {}: {e}", path.display())))
    }

    /// The canonical JSON rendering (pretty, stable field order).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Builds the multiplier the config describes.
    pub fn multiplier_spec(&self) -> Result<MultiplierSpec> {
        let base = match self.multiplier.as_str() {
            "eta" => MultiplierSpec::eta(self.level.unwrap_or(1))?,
            "theta" => MultiplierSpec::theta(self.level.unwrap_or(4))?,
            "trivial" => {
                if let Some(level) = self.level {
                    if level != 1 {
                        return Err(invalid(
                            "the trivial multiplier lives at level 1; \
                             drop the level field or use a twist",
                        ));
                    }
                }
                MultiplierSpec::trivial()
            }
            other => {
                return Err(invalid(format!(
                    "unknown multiplier base {other:?} (expected eta, theta, or trivial)"
                )))
            }
        };
        let twisted = match self.twist {
            Some(q) => base.twisted(q)?,
            None => base,
        };
        let conjugated = if self.conjugate {
            twisted.conjugated()
        } else {
            twisted
        };
        match self.weight_halves {
            Some(h) => conjugated.with_weight(h),
            None => Ok(conjugated),
        }
    }

    /// Builds the ramp test function for the `phi` command.
    pub fn test_function(&self) -> Result<TestFunction> {
        let a = self.a.unwrap_or(1.0);
        let x = self
            .x
            .ok_or_else(|| invalid("phi requires the center scale --x"))?;
        let delta = self.delta.unwrap_or(1.0 / 3.0);
        let t_big = match self.t_big {
            Some(t) => t,
            None => 0.5 * x.powf(1.0 - delta),
        };
        let profile = match self.profile.as_str() {
            "smooth" => PhiProfile::Smooth,
            "linear" => PhiProfile::Linear,
            other => {
                return Err(invalid(format!(
                    "unknown profile {other:?} (expected smooth or linear)"
                )))
            }
        };
        testfn::build_phi(a, x, t_big, delta, profile)
    }

    /// Decodes `beta_halves` into a transform weight (default 1/2).
    pub fn transform_weight(&self) -> Result<TransformWeight> {
        match self.beta_halves.unwrap_or(1) {
            1 => Ok(TransformWeight::OneHalf),
            3 => Ok(TransformWeight::ThreeHalves),
            other => Err(invalid(format!(
                "unsupported half-integral index {other}/2 (expected 1/2 or 3/2)"
            ))),
        }
    }

    /// Resolves the cache file: explicit config path first, else
    /// `$KLSUM_CACHE_DIR/sums.cache.csv`, else none (in-memory).
    pub fn cache_path(&self) -> Option<PathBuf> {
        if let Some(path) = &self.cache {
            return Some(path.clone());
        }
        std::env::var_os("KLSUM_CACHE_DIR")
            .map(|dir| PathBuf::from(dir).join("sums.cache.csv"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_identity() {
        let mut cfg = ExperimentConfig::default();
        cfg.command = "partial".into();
        cfg.multiplier = "eta".into();
        cfg.level = Some(3);
        cfg.twist = Some(3);
        cfg.conjugate = true;
        cfg.n = 1;
        cfg.x_max = Some(100_000);
        cfg.sample = "dyadic".into();
        cfg.window = Some((1000, 2000));
        cfg.output = Some(PathBuf::from("/tmp/out.csv"));
        cfg.threads = Some(4);
        let json = cfg.to_json();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(
            r#"{"command": "sum", "modulus": 7}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn multiplier_spec_matches_flags() {
        let mut cfg = ExperimentConfig::default();
        cfg.multiplier = "eta".into();
        cfg.level = Some(3);
        cfg.twist = Some(3);
        cfg.conjugate = true;
        let nu = cfg.multiplier_spec().unwrap();
        assert_eq!(nu.fingerprint(), "eta,conj=1,twist=3,k=-1/2,N=3");
    }

    #[test]
    fn trivial_multiplier_rejects_foreign_level() {
        let mut cfg = ExperimentConfig::default();
        cfg.level = Some(5);
        assert!(cfg.multiplier_spec().is_err());
        cfg.level = Some(1);
        assert!(cfg.multiplier_spec().is_ok());
    }

    #[test]
    fn test_function_defaults_ramp_width() {
        let mut cfg = ExperimentConfig::default();
        cfg.x = Some(1000.0);
        let tf = cfg.test_function().unwrap();
        assert_eq!(tf.a(), 1.0);
        assert_eq!(tf.big_t(), 0.5 * 1000f64.powf(1.0 - 1.0 / 3.0));
    }

    #[test]
    fn cache_path_prefers_explicit_file() {
        let mut cfg = ExperimentConfig::default();
        cfg.cache = Some(PathBuf::from("/tmp/explicit.csv"));
        assert_eq!(cfg.cache_path(), Some(PathBuf::from("/tmp/explicit.csv")));
    }
}
