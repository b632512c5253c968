//! Simulation parameters and their plain-text file format.
//!
//! A config file is a sequence of lines. Each line is blank, a comment
//! starting with `#`, or `key = value`. Keys are the stable names listed in
//! [`SwarmConfig::KEYS`]; an unknown key or a value that does not parse is an
//! error. Keys not present keep their defaults. Trailing `# ...` comments are
//! allowed after a value.
//!
//! ```text
//! # fast evasive target
//! degree = 20
//! target_speed = 0.2
//! target_policy = evasive
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
}

/// How targets move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetPolicy {
    /// Straight lines between uniformly drawn waypoints.
    NonEvasive,
    /// Waypoints until contact, then repulsion from agents and straight sprints.
    Evasive,
}

impl TargetPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetPolicy::NonEvasive => "non_evasive",
            TargetPolicy::Evasive => "evasive",
        }
    }
}

impl fmt::Display for TargetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "non_evasive" | "nonevasive" | "non-evasive" => Ok(TargetPolicy::NonEvasive),
            "evasive" => Ok(TargetPolicy::Evasive),
            other => Err(format!(
                "expected `evasive` or `non_evasive`, got `{other}`"
            )),
        }
    }
}

/// Agent update ordering within a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateMode {
    /// Every agent reads the state at `t`; all writes land at `t + 1`.
    Sync,
    /// Agents update in index order and later agents see earlier agents'
    /// new positions and memories within the same step.
    Async,
}

impl UpdateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdateMode::Sync => "sync",
            UpdateMode::Async => "async",
        }
    }
}

impl FromStr for UpdateMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sync" => Ok(UpdateMode::Sync),
            "async" => Ok(UpdateMode::Async),
            other => Err(format!("expected `sync` or `async`, got `{other}`")),
        }
    }
}

/// Every parameter of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub n_agents: usize,
    pub arena_side: f64,
    pub n_targets: usize,
    /// Out-degree of the k-nearest communication graph.
    pub degree: usize,
    pub agent_speed: f64,
    pub target_speed: f64,
    pub inertia: f64,
    pub social_weight: f64,
    pub repulsion_min: f64,
    pub repulsion_max: f64,
    pub repulsion_exponent: u32,
    pub delta_explore: f64,
    pub delta_track: f64,
    /// Steps a sighting stays usable.
    pub memory_length: u64,
    /// Detection radius of each target; `None` means `arena_side / 25`.
    pub target_radius: Option<f64>,
    /// Consecutive contact steps before an evasive target sprints.
    pub evasion_limit: u32,
    /// Length of an evasive sprint in steps.
    pub evasion_duration: u32,
    pub horizon: u64,
    /// Leading steps excluded from the metrics.
    pub warmup: u64,
    pub seed: u64,
    pub target_policy: TargetPolicy,
    pub update_mode: UpdateMode,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            n_agents: 50,
            arena_side: 25.0,
            n_targets: 1,
            degree: 20,
            agent_speed: 0.1,
            target_speed: 0.2,
            inertia: 1.0,
            social_weight: 0.5,
            repulsion_min: 2.0,
            repulsion_max: 12.0,
            repulsion_exponent: 6,
            delta_explore: 0.1,
            delta_track: 0.75,
            memory_length: 20,
            target_radius: None,
            evasion_limit: 10,
            evasion_duration: 50,
            horizon: 100_000,
            warmup: 0,
            seed: 0,
            target_policy: TargetPolicy::Evasive,
            update_mode: UpdateMode::Sync,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl SwarmConfig {
    /// Stable key names accepted by [`SwarmConfig::set`], in file order.
    pub const KEYS: &'static [&'static str] = &[
        "n_agents",
        "arena_side",
        "n_targets",
        "degree",
        "agent_speed",
        "target_speed",
        "inertia",
        "social_weight",
        "repulsion_min",
        "repulsion_max",
        "repulsion_exponent",
        "delta_explore",
        "delta_track",
        "memory_length",
        "target_radius",
        "evasion_limit",
        "evasion_duration",
        "horizon",
        "warmup",
        "seed",
        "target_policy",
        "update_mode",
    ];

    /// Detection radius in effect.
    pub fn radius(&self) -> f64 {
        self.target_radius.unwrap_or(self.arena_side / 25.0)
    }

    /// Checks every constraint and hands the config back untouched.
    pub fn validated(self) -> Result<Self, ConfigError> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        let positive = |name: &str, v: f64| -> Result<(), ConfigError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!(
                    "{name} must be a positive finite number, got {v}"
                )))
            }
        };
        let non_negative = |name: &str, v: f64| -> Result<(), ConfigError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!(
                    "{name} must be a non-negative finite number, got {v}"
                )))
            }
        };

        if self.n_agents < 3 {
            return fail(format!(
                "n_agents must be at least 3 so that k can lie in [2, N-1], got {}",
                self.n_agents
            ));
        }
        if self.degree < 2 || self.degree > self.n_agents - 1 {
            return fail(format!(
                "k out of range [2, N-1]: degree = {} with n_agents = {} (allowed 2..={})",
                self.degree,
                self.n_agents,
                self.n_agents - 1
            ));
        }
        if self.n_targets == 0 {
            return fail("n_targets must be at least 1".into());
        }
        positive("arena_side", self.arena_side)?;
        positive("agent_speed", self.agent_speed)?;
        non_negative("target_speed", self.target_speed)?;
        non_negative("inertia", self.inertia)?;
        non_negative("social_weight", self.social_weight)?;
        positive("repulsion_min", self.repulsion_min)?;
        positive("repulsion_max", self.repulsion_max)?;
        if self.repulsion_min > self.repulsion_max {
            return fail(format!(
                "repulsion bounds inverted: repulsion_min = {} > repulsion_max = {}",
                self.repulsion_min, self.repulsion_max
            ));
        }
        if self.repulsion_exponent == 0 {
            return fail("repulsion_exponent must be a positive integer".into());
        }
        positive("delta_explore", self.delta_explore)?;
        positive("delta_track", self.delta_track)?;
        let rho = self.radius();
        positive("target_radius", rho)?;
        if rho > self.arena_side {
            return fail(format!(
                "target_radius = {rho} exceeds arena_side = {}",
                self.arena_side
            ));
        }
        if self.evasion_limit == 0 {
            return fail("evasion_limit must be a positive integer".into());
        }
        if self.evasion_duration == 0 {
            return fail("evasion_duration must be a positive integer".into());
        }
        if self.warmup > self.horizon {
            return fail(format!(
                "warmup = {} exceeds horizon = {}",
                self.warmup, self.horizon
            ));
        }
        Ok(())
    }

    /// Assigns one field by its stable key name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "n_agents" => self.n_agents = parse_value(key, value)?,
            "arena_side" => self.arena_side = parse_value(key, value)?,
            "n_targets" => self.n_targets = parse_value(key, value)?,
            "degree" | "k" => self.degree = parse_value(key, value)?,
            "agent_speed" => self.agent_speed = parse_value(key, value)?,
            "target_speed" => self.target_speed = parse_value(key, value)?,
            "inertia" => self.inertia = parse_value(key, value)?,
            "social_weight" => self.social_weight = parse_value(key, value)?,
            "repulsion_min" => self.repulsion_min = parse_value(key, value)?,
            "repulsion_max" => self.repulsion_max = parse_value(key, value)?,
            "repulsion_exponent" => self.repulsion_exponent = parse_value(key, value)?,
            "delta_explore" => self.delta_explore = parse_value(key, value)?,
            "delta_track" => self.delta_track = parse_value(key, value)?,
            "memory_length" => self.memory_length = parse_value(key, value)?,
            "target_radius" => {
                self.target_radius = match value {
                    "auto" => None,
                    v => Some(parse_value(key, v)?),
                }
            }
            "evasion_limit" => self.evasion_limit = parse_value(key, value)?,
            "evasion_duration" => self.evasion_duration = parse_value(key, value)?,
            "horizon" => self.horizon = parse_value(key, value)?,
            "warmup" => self.warmup = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "target_policy" => self.target_policy = parse_value(key, value)?,
            "update_mode" => self.update_mode = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Applies a `key=value` override as given on a command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax {
                line: 0,
                text: assignment.to_string(),
            })?;
        self.set(key.trim(), value)
    }

    /// Parses a config file on top of the defaults.
    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = SwarmConfig::default();
        for (key, value, _) in key_values(text)? {
            cfg.set(&key, &value)?;
        }
        Ok(cfg)
    }

    /// Canonical file form listing every key. Parsing it back yields `self`.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for key in Self::KEYS {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&self.value_of(key));
            out.push('\n');
        }
        out
    }

    /// Canonical string form of a single field.
    pub fn value_of(&self, key: &str) -> String {
        match key {
            "n_agents" => self.n_agents.to_string(),
            "arena_side" => self.arena_side.to_string(),
            "n_targets" => self.n_targets.to_string(),
            "degree" => self.degree.to_string(),
            "agent_speed" => self.agent_speed.to_string(),
            "target_speed" => self.target_speed.to_string(),
            "inertia" => self.inertia.to_string(),
            "social_weight" => self.social_weight.to_string(),
            "repulsion_min" => self.repulsion_min.to_string(),
            "repulsion_max" => self.repulsion_max.to_string(),
            "repulsion_exponent" => self.repulsion_exponent.to_string(),
            "delta_explore" => self.delta_explore.to_string(),
            "delta_track" => self.delta_track.to_string(),
            "memory_length" => self.memory_length.to_string(),
            "target_radius" => match self.target_radius {
                Some(r) => r.to_string(),
                None => "auto".to_string(),
            },
            "evasion_limit" => self.evasion_limit.to_string(),
            "evasion_duration" => self.evasion_duration.to_string(),
            "horizon" => self.horizon.to_string(),
            "warmup" => self.warmup.to_string(),
            "seed" => self.seed.to_string(),
            "target_policy" => self.target_policy.to_string(),
            "update_mode" => self.update_mode.as_str().to_string(),
            _ => String::new(),
        }
    }
}

/// Splits config-grammar text into `(key, value, line_number)` triples.
pub(crate) fn key_values(text: &str) -> Result<Vec<(String, String, usize)>, ConfigError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: idx + 1,
            text: raw.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: idx + 1,
                text: raw.to_string(),
            });
        }
        out.push((key.to_string(), value.trim().to_string(), idx + 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SwarmConfig::default();
        assert_eq!(cfg.clone().validated().unwrap(), cfg);
        assert_eq!(cfg.n_agents, 50);
        assert_eq!(cfg.arena_side, 25.0);
        assert_eq!(cfg.radius(), 1.0);
        assert_eq!(cfg.repulsion_min, 2.0);
        assert_eq!(cfg.repulsion_max, 12.0);
        assert_eq!(cfg.repulsion_exponent, 6);
        assert_eq!((cfg.delta_explore, cfg.delta_track), (0.1, 0.75));
        assert_eq!((cfg.inertia, cfg.social_weight), (1.0, 0.5));
        assert_eq!(cfg.memory_length, 20);
        assert_eq!(cfg.horizon, 100_000);
    }

    #[test]
    fn degree_one_is_rejected() {
        let cfg = SwarmConfig {
            degree: 1,
            ..SwarmConfig::default()
        };
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("k out of range [2, N-1]"), "{err}");
    }

    #[test]
    fn degree_n_is_rejected() {
        let cfg = SwarmConfig {
            degree: 50,
            ..SwarmConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SwarmConfig {
            degree: 49,
            ..SwarmConfig::default()
        };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn inverted_repulsion_bounds_are_rejected() {
        let cfg = SwarmConfig {
            repulsion_min: 12.0,
            repulsion_max: 2.0,
            ..SwarmConfig::default()
        };
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("inverted"), "{err}");
    }

    #[test]
    fn radius_larger_than_arena_is_rejected() {
        let cfg = SwarmConfig {
            target_radius: Some(30.0),
            ..SwarmConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn radius_follows_arena_unless_set() {
        let mut cfg = SwarmConfig::from_config_str("arena_side = 50").unwrap();
        assert_eq!(cfg.radius(), 2.0);
        cfg.set("target_radius", "0.5").unwrap();
        assert_eq!(cfg.radius(), 0.5);
    }

    #[test]
    fn parses_file_with_comments() {
        let text =
            "# header\n\ndegree = 5  # sparse\ntarget_policy = non_evasive\nmemory_length=0\n";
        let cfg = SwarmConfig::from_config_str(text).unwrap();
        assert_eq!(cfg.degree, 5);
        assert_eq!(cfg.target_policy, TargetPolicy::NonEvasive);
        assert_eq!(cfg.memory_length, 0);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = SwarmConfig::from_config_str("speed = 3").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey("speed".into()));
    }

    #[test]
    fn missing_equals_is_a_syntax_error() {
        let err = SwarmConfig::from_config_str("degree 5").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
    }

    #[test]
    fn bad_value_names_the_key() {
        let err = SwarmConfig::from_config_str("degree = many").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { ref key, .. } if key == "degree"));
    }

    #[test]
    fn canonical_string_round_trips() {
        let cfg = SwarmConfig {
            degree: 7,
            target_speed: 0.15,
            target_radius: Some(0.75),
            update_mode: UpdateMode::Async,
            target_policy: TargetPolicy::NonEvasive,
            ..SwarmConfig::default()
        };
        let back = SwarmConfig::from_config_str(&cfg.to_config_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn override_syntax() {
        let mut cfg = SwarmConfig::default();
        cfg.apply_override("seed=42").unwrap();
        assert_eq!(cfg.seed, 42);
        assert!(cfg.apply_override("seed").is_err());
    }
}
