use std::path::Path;

use fastreact::experiments::{ExperimentConfig, LatticeSpec, TimeGrid};
use fastreact::{Gaussian, GaussianMixture, SystemParams};
use serde::{Deserialize, Serialize};

pub const DEFAULT_CONFIG: &str = include_str!("../configs/p1.toml");

pub const SCHEMA_HINT: &str = "\
expected a TOML file with these keys:

  [system]      alpha, beta, gamma, delta, mu, nu   (numbers; eps comes from the ladder)
  [lattice]     dim (integer), cutoff, dk           (wavevectors k in [-cutoff, cutoff]^dim, spacing dk)
  [ladder]      eps = [1e-1, 3e-2, 1e-2, 3e-3]      (strictly decreasing, at least 4 values)
  [data.u0]     amp, a                              (number or list: sum of amp*exp(-a|x|^2))
                on_critical = true                  (optional: u0 := h0(v0), amp/a not needed)
  [data.v0]     amp, a
  [time]        T, samples                          (samples log-spaced in (0, T])
  [checks]      random_sets, eigen_modes            (optional, default 20 and 50)";

/// A scalar or a list of scalars.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Scalars {
    One(f64),
    Many(Vec<f64>),
}

impl Scalars {
    fn values(&self) -> Vec<f64> {
        match self {
            Scalars::One(x) => vec![*x],
            Scalars::Many(xs) => xs.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystemKeys {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeKeys {
    pub dim: usize,
    pub cutoff: f64,
    pub dk: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LadderKeys {
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldKeys {
    pub amp: Option<Scalars>,
    pub a: Option<Scalars>,
    #[serde(default)]
    pub on_critical: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DataKeys {
    pub u0: FieldKeys,
    pub v0: FieldKeys,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeKeys {
    #[serde(rename = "T")]
    pub t_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CheckKeys {
    #[serde(default = "default_random_sets")]
    pub random_sets: usize,
    #[serde(default = "default_eigen_modes")]
    pub eigen_modes: usize,
}

fn default_random_sets() -> usize {
    20
}

fn default_eigen_modes() -> usize {
    50
}

impl Default for CheckKeys {
    fn default() -> Self {
        Self { random_sets: default_random_sets(), eigen_modes: default_eigen_modes() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemKeys,
    pub lattice: LatticeKeys,
    pub ladder: LadderKeys,
    pub data: DataKeys,
    pub time: TimeKeys,
    #[serde(default)]
    pub checks: CheckKeys,
}

/// The file could not be read or does not match the schema.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
        if !cfg.data.u0.on_critical {
            mixture_keys("data.u0", &cfg.data.u0)?;
        }
        if cfg.data.v0.on_critical {
            return Err(SchemaError(
                "data.v0.on_critical is not a valid key; only u0 can be placed on the critical manifold".into(),
            ));
        }
        mixture_keys("data.v0", &cfg.data.v0)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SchemaError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| SchemaError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|SchemaError(m)| SchemaError(format!("{}: {m}", path.display())))
    }

    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("shipped default config parses")
    }

    /// Hex SHA-256 of the canonical JSON form, so formatting and comments do not matter.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn experiment(&self, seed: u64) -> ExperimentConfig<f64> {
        let s = &self.system;
        ExperimentConfig {
            base: SystemParams::new(
                s.alpha,
                s.beta,
                s.gamma,
                s.delta,
                s.mu,
                s.nu,
                self.ladder.eps.first().copied().unwrap_or(1.0),
            ),
            eps_ladder: self.ladder.eps.clone(),
            lattice: LatticeSpec { dim: self.lattice.dim, cutoff: self.lattice.cutoff, spacing: self.lattice.dk },
            u0: mixture(&self.data.u0),
            v0: mixture(&self.data.v0),
            on_critical: self.data.u0.on_critical,
            time: TimeGrid { t_max: self.time.t_max, samples: self.time.samples },
            seed,
        }
    }
}

fn mixture_keys(name: &str, keys: &FieldKeys) -> Result<(), SchemaError> {
    let (Some(amp), Some(a)) = (&keys.amp, &keys.a) else {
        return Err(SchemaError(format!("{name} needs both amp and a")));
    };
    let (amp, a) = (amp.values(), a.values());
    if amp.len() != a.len() || amp.is_empty() {
        return Err(SchemaError(format!("{name}.amp and {name}.a must have the same nonzero length")));
    }
    Ok(())
}

fn mixture(keys: &FieldKeys) -> GaussianMixture<f64> {
    let amp = keys.amp.as_ref().map(Scalars::values).unwrap_or_default();
    let a = keys.a.as_ref().map(Scalars::values).unwrap_or_default();
    GaussianMixture { terms: amp.into_iter().zip(a).map(|(amp, a)| Gaussian { amp, a }).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_reference_experiment() {
        let cfg = RunConfig::default_config().experiment(0);
        let reference = ExperimentConfig::<f64>::reference();
        assert_eq!(cfg.base, reference.base);
        assert_eq!(cfg.eps_ladder, reference.eps_ladder);
        assert_eq!(cfg.lattice, reference.lattice);
        assert_eq!(cfg.v0, reference.v0);
        assert_eq!(cfg.time, reference.time);
        assert!(cfg.on_critical);
    }

    #[test]
    fn mixtures_accept_lists() {
        let text = DEFAULT_CONFIG.replace("amp = 1.0\na = 0.1", "amp = [1.0, 0.5]\na = [0.1, 0.3]");
        let cfg = RunConfig::parse(&text).unwrap().experiment(0);
        assert_eq!(cfg.v0.terms.len(), 2);
        assert_eq!(cfg.v0.terms[1], Gaussian { amp: 0.5, a: 0.3 });
    }

    #[test]
    fn schema_errors() {
        assert!(RunConfig::parse("[system]\nalpha = -1.0\n").is_err());
        assert!(RunConfig::parse(&DEFAULT_CONFIG.replace("[time]", "[time]\nextra = 1")).is_err());
        assert!(RunConfig::parse(&DEFAULT_CONFIG.replace("on_critical = true", "amp = 1.0")).is_err());
        assert!(RunConfig::parse(&DEFAULT_CONFIG.replace("a = 0.1", "a = [0.1, 0.2]")).is_err());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = RunConfig::default_config();
        let b = RunConfig::parse(&DEFAULT_CONFIG.replace("# Reference", "#   another comment\n# Reference")).unwrap();
        assert_eq!(a.hash(), b.hash());
        let mut c = a.clone();
        c.system.nu = 2.0;
        assert_ne!(a.hash(), c.hash());
    }
}
