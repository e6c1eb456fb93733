//! Run configuration and its flat TOML file form.
//!
//! Every key is optional; omitted keys take the defaults of
//! [`RunConfig::default_env`]. Unknown keys are rejected.
//!
//! ```toml
//! d_x = 2
//! d_k = 2
//! family = "peak"      # peak | dome
//! lambda = 0.5
//! c = 0.5
//! eta = 1.0
//! beta1 = 1.0
//! beta2 = 2.0
//! # alpha, gamma, l_x, l_k, l default from the dimensions and landscape
//! horizon = 10000
//! policy = "cbal"      # cbal | cbal_no_prior | always_query | oracle
//! seed = 1
//! replications = 20
//! arm_pick = "center"  # center | random
//! record_trace = false
//! out = "results"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cbal_core::params::{default_alpha, default_gamma, default_margin};
use cbal_core::{AlgoParams64, ArmPick, Family, Landscape64, PolicyKind};
use serde::Deserialize;

use crate::error::HarnessError;

/// Which decision rule a run simulates. `Oracle` plays the best arm for
/// every context and never queries; it exists to sanity-check accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contender {
    Learner(PolicyKind),
    Oracle,
}

impl Contender {
    pub fn as_str(self) -> &'static str {
        match self {
            Contender::Learner(k) => k.as_str(),
            Contender::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Contender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Contender {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "oracle" {
            return Ok(Contender::Oracle);
        }
        Ok(Contender::Learner(s.parse()?))
    }
}

pub fn parse_arm_pick(s: &str) -> Result<ArmPick, HarnessError> {
    match s {
        "center" => Ok(ArmPick::Center),
        "random" => Ok(ArmPick::Random),
        other => Err(HarnessError::Config(format!(
            "unknown arm_pick `{other}` (expected center or random)"
        ))),
    }
}

pub fn arm_pick_name(p: ArmPick) -> &'static str {
    match p {
        ArmPick::Center => "center",
        ArmPick::Random => "random",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AlgoParams64,
    pub landscape: Landscape64,
    pub horizon: u64,
    pub policy: Contender,
    pub seed: u64,
    pub replications: usize,
    pub out: Option<PathBuf>,
    pub arm_pick: ArmPick,
    pub record_trace: bool,
}

impl RunConfig {
    /// Two-dimensional contexts and arms, peak landscape with `lambda = 0.5`,
    /// `c = 0.5`, `eta = 1`, `beta1 = 1`, `beta2 = 2`, `T = 10^4`,
    /// 20 replications from seed 1.
    pub fn default_env() -> Self {
        ConfigFile::default()
            .into_config()
            .expect("built-in defaults are valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        file.into_config()
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.params.validate()?;
        if self.horizon == 0 {
            return Err(HarnessError::Config("horizon must be >= 1".into()));
        }
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be >= 1".into()));
        }
        if self.landscape.dims() != (self.params.d_x, self.params.d_k) {
            return Err(HarnessError::Config(format!(
                "landscape dimensions {:?} differ from policy dimensions ({}, {})",
                self.landscape.dims(),
                self.params.d_x,
                self.params.d_k
            )));
        }
        Ok(())
    }

    /// Seed of replication `rep`.
    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.seed.wrapping_add(rep as u64)
    }

    /// The same configuration under another decision rule.
    pub fn with_policy(&self, policy: Contender) -> Self {
        Self {
            policy,
            ..self.clone()
        }
    }

    /// `key = value` lines describing the configuration, in a fixed order.
    pub fn describe(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let kv = |k: &str, v: String| (k.to_string(), v);
        vec![
            kv("policy", self.policy.to_string()),
            kv("horizon", self.horizon.to_string()),
            kv("seed", self.seed.to_string()),
            kv("replications", self.replications.to_string()),
            kv("family", self.landscape.family().to_string()),
            kv("lambda", self.landscape.lambda().to_string()),
            kv("d_x", p.d_x.to_string()),
            kv("d_k", p.d_k.to_string()),
            kv("alpha", p.alpha.to_string()),
            kv("gamma", p.gamma.to_string()),
            kv("l_x", p.l_x.to_string()),
            kv("l_k", p.l_k.to_string()),
            kv("l", p.l.to_string()),
            kv("c", p.c.to_string()),
            kv("eta", p.eta.to_string()),
            kv("beta1", p.beta1.to_string()),
            kv("beta2", p.beta2.to_string()),
            kv("arm_pick", arm_pick_name(self.arm_pick).to_string()),
        ]
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    d_x: Option<usize>,
    d_k: Option<usize>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    l_x: Option<f64>,
    l_k: Option<f64>,
    l: Option<f64>,
    c: Option<f64>,
    eta: Option<f64>,
    beta1: Option<f64>,
    beta2: Option<f64>,
    family: Option<String>,
    lambda: Option<f64>,
    horizon: Option<u64>,
    policy: Option<String>,
    seed: Option<u64>,
    replications: Option<usize>,
    out: Option<PathBuf>,
    arm_pick: Option<String>,
    record_trace: Option<bool>,
}

impl ConfigFile {
    fn into_config(self) -> Result<RunConfig, HarnessError> {
        let d_x = self.d_x.unwrap_or(2);
        let d_k = self.d_k.unwrap_or(2);
        let family: Family = self.family.as_deref().unwrap_or("peak").parse()?;
        let landscape = Landscape64::new(family, self.lambda.unwrap_or(0.5), d_x, d_k)?;
        let l_x = self.l_x.unwrap_or_else(|| landscape.lipschitz_x());
        let l_k = self.l_k.unwrap_or_else(|| landscape.lipschitz_k());
        let params = AlgoParams64 {
            d_x,
            d_k,
            alpha: self.alpha.unwrap_or_else(|| default_alpha(d_x, d_k)),
            gamma: self.gamma.unwrap_or_else(|| default_gamma(d_x, d_k)),
            l_x,
            l_k,
            l: self.l.unwrap_or_else(|| default_margin(l_x, l_k)),
            c: self.c.unwrap_or(0.5),
            eta: self.eta.unwrap_or(1.0),
            beta1: self.beta1.unwrap_or(1.0),
            beta2: self.beta2.unwrap_or(2.0),
        };
        let cfg = RunConfig {
            params,
            landscape,
            horizon: self.horizon.unwrap_or(10_000),
            policy: self.policy.as_deref().unwrap_or("cbal").parse()?,
            seed: self.seed.unwrap_or(1),
            replications: self.replications.unwrap_or(20),
            out: self.out,
            arm_pick: parse_arm_pick(self.arm_pick.as_deref().unwrap_or("center"))?,
            record_trace: self.record_trace.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
