//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Every key has a default, unknown and repeated keys are rejected, and
//! every error names the offending line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use cilia_core::kernel::geometric_partition;
use cilia_core::reconstruction::{build_mesh, BaseRule, ReconstructionMesh, DEFAULT_MAX_DEPTH};
use cilia_core::{GeometricMeshSpec, HillParams, PhysicalParams, StepPartition};

use crate::error::{CliError, ConfigError};
use crate::french::FrenchParams;

/// A value that is either computed from the rest of the config or given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auto {
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d: f64,
    pub l: f64,
    pub c0: f64,
    pub j0: f64,
    pub hill_n: f64,
    pub hill_k: f64,
    pub beta: f64,
    pub beta0: f64,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub base: BaseRule,
    pub max_depth: usize,
    pub quad_tol: f64,
    pub t_samples: usize,
    pub t_end: Auto,
    pub gamma: Auto,
    pub s_max: Auto,
    pub s_samples: usize,
    pub lemma_n: u32,
    pub hill8_a: f64,
    pub hill8_length: f64,
    pub french: FrenchParams,
    /// Line on which each key was set.
    lines: BTreeMap<&'static str, usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: 1.0,
            l: 1.0,
            c0: 1.0,
            j0: 1.0,
            hill_n: 2.0,
            hill_k: 0.5,
            beta: 0.8,
            beta0: 1.0,
            m: 8,
            p: 20,
            q: 16,
            base: BaseRule::Uniform,
            max_depth: DEFAULT_MAX_DEPTH,
            quad_tol: 1e-10,
            t_samples: 2001,
            t_end: Auto::Auto,
            gamma: Auto::Auto,
            s_max: Auto::Auto,
            s_samples: 100_000,
            lemma_n: 30,
            hill8_a: 1.5,
            hill8_length: 3.0,
            french: FrenchParams::default(),
            lines: BTreeMap::new(),
        }
    }
}

const KEYS: &[&str] = &[
    "D",
    "L",
    "c0",
    "J0",
    "hill_n",
    "hill_k",
    "beta",
    "beta0",
    "m",
    "p",
    "q",
    "base",
    "max_depth",
    "quad_tol",
    "t_samples",
    "t_end",
    "gamma",
    "s_max",
    "s_samples",
    "lemma_n",
    "hill8_a",
    "hill8_length",
    "french_t_delay",
    "french_n",
    "french_i_max",
    "french_k",
];

fn positive(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects a number, got `{raw}`")))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(ConfigError::new(line, format!("`{key}` must be positive and finite, got {raw}")));
    }
    Ok(v)
}

fn count(line: usize, key: &str, raw: &str, min: usize) -> Result<usize, ConfigError> {
    let v: usize = raw
        .parse()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects an integer, got `{raw}`")))?;
    if v < min {
        return Err(ConfigError::new(line, format!("`{key}` must be at least {min}, got {v}")));
    }
    Ok(v)
}

fn auto_or(line: usize, key: &str, raw: &str, check: impl Fn(f64) -> bool, what: &str) -> Result<Auto, ConfigError> {
    if raw == "auto" {
        return Ok(Auto::Auto);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects `auto` or a number, got `{raw}`")))?;
    if !(v.is_finite() && check(v)) {
        return Err(ConfigError::new(line, format!("`{key}` must be {what}, got {raw}")));
    }
    Ok(Auto::Value(v))
}

fn base_rule(line: usize, raw: &str) -> Result<BaseRule, ConfigError> {
    if raw == "uniform" {
        return Ok(BaseRule::Uniform);
    }
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError::new(line, format!("`base` expects `uniform` or a comma list, got `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(BaseRule::Explicit)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::new(line, format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let known = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| ConfigError::new(line, format!("unknown key `{key}`")))?;
            if value.is_empty() {
                return Err(ConfigError::new(line, format!("`{key}` has no value")));
            }
            if let Some(prev) = cfg.lines.insert(known, line) {
                return Err(ConfigError::new(line, format!("`{key}` already set on line {prev}")));
            }
            cfg.set(line, known, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self::parse(&text)?)
    }

    fn set(&mut self, line: usize, key: &'static str, v: &str) -> Result<(), ConfigError> {
        match key {
            "D" => self.d = positive(line, key, v)?,
            "L" => self.l = positive(line, key, v)?,
            "c0" => self.c0 = positive(line, key, v)?,
            "J0" => self.j0 = positive(line, key, v)?,
            "hill_n" => self.hill_n = positive(line, key, v)?,
            "hill_k" => self.hill_k = positive(line, key, v)?,
            "beta" => {
                self.beta = positive(line, key, v)?;
                if self.beta >= 1.0 {
                    return Err(ConfigError::new(line, format!("`beta` must lie in (0, 1), got {v}")));
                }
            }
            "beta0" => self.beta0 = positive(line, key, v)?,
            "m" => self.m = count(line, key, v, 1)?,
            "p" => self.p = count(line, key, v, 1)?,
            "q" => self.q = count(line, key, v, 1)?,
            "base" => self.base = base_rule(line, v)?,
            "max_depth" => self.max_depth = count(line, key, v, 1)?,
            "quad_tol" => self.quad_tol = positive(line, key, v)?,
            "t_samples" => self.t_samples = count(line, key, v, 2)?,
            "t_end" => self.t_end = auto_or(line, key, v, |x| x > 0.0, "positive")?,
            "gamma" => self.gamma = auto_or(line, key, v, |_| true, "finite")?,
            "s_max" => self.s_max = auto_or(line, key, v, |x| x > 0.0, "positive")?,
            "s_samples" => self.s_samples = count(line, key, v, 1000)?,
            "lemma_n" => {
                let n = count(line, key, v, 1)?;
                self.lemma_n = u32::try_from(n).map_err(|_| ConfigError::new(line, "`lemma_n` is too large"))?;
            }
            "hill8_a" => self.hill8_a = positive(line, key, v)?,
            "hill8_length" => self.hill8_length = positive(line, key, v)?,
            "french_t_delay" => {
                self.french.t_delay = v
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite() && *x >= 0.0)
                    .ok_or_else(|| ConfigError::new(line, format!("`french_t_delay` must be a nonnegative number, got `{v}`")))?
            }
            "french_n" => self.french.n = positive(line, key, v)?,
            "french_i_max" => self.french.i_max = positive(line, key, v)?,
            "french_k" => self.french.k = positive(line, key, v)?,
            _ => unreachable!("key list and setter disagree on `{key}`"),
        }
        Ok(())
    }

    /// Line of `key`, or 0 when it kept its default.
    pub fn line_of(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(0)
    }

    /// Checks that the keys combine into a valid partition and mesh. Errors
    /// point at the last line among the keys involved.
    fn validate(&self) -> Result<(), ConfigError> {
        let involved = ["D", "L", "c0", "hill_n", "hill_k", "beta", "beta0", "m", "p", "q", "base"];
        let line = involved.iter().map(|k| self.line_of(k)).max().unwrap_or(0);
        let at = |line: usize| move |e: cilia_core::Error| ConfigError::new(line, e.to_string());
        self.partition().map_err(at(line))?;
        self.mesh().map_err(at(line))?;
        // The hill8 demo reruns the same mesh on its own length.
        let line8 = line.max(self.line_of("hill8_length"));
        let hill8 = self.with_length(self.hill8_length).map_err(at(line8))?;
        hill8.partition().map_err(at(line8))?;
        hill8.mesh().map_err(at(line8))?;
        Ok(())
    }

    /// Same config with a different cilium length. An explicit base is
    /// rescaled with the length, its first point pinned to `beta L`.
    pub fn with_length(&self, l: f64) -> Result<Self, cilia_core::Error> {
        let mut c = self.clone();
        if let BaseRule::Explicit(pts) = &mut c.base {
            let r = l / self.l;
            pts.iter_mut().for_each(|x| *x *= r);
            pts[0] = self.beta * l;
        }
        c.l = l;
        c.physical()?;
        Ok(c)
    }

    pub fn physical(&self) -> Result<PhysicalParams, cilia_core::Error> {
        PhysicalParams::new(self.d, self.l, self.c0, self.j0, HillParams::new(self.hill_n, self.hill_k)?)
    }

    pub fn mesh_spec(&self) -> Result<GeometricMeshSpec, cilia_core::Error> {
        GeometricMeshSpec::new(self.beta, self.beta0, self.m)
    }

    pub fn partition(&self) -> Result<StepPartition, cilia_core::Error> {
        geometric_partition(&self.mesh_spec()?, &self.physical()?)
    }

    pub fn mesh(&self) -> Result<ReconstructionMesh, cilia_core::Error> {
        build_mesh(&self.mesh_spec()?, &self.physical()?, self.p, self.q, &self.base)
    }

    /// End of the sampling grid: `t_end`, or `L_m^2` by default.
    pub fn time_end(&self, part: &StepPartition) -> f64 {
        match self.t_end {
            Auto::Value(v) => v,
            Auto::Auto => part.l_m() * part.l_m(),
        }
    }

    /// Uniform grid of `t_samples` points on `[0, t_end]`.
    pub fn time_grid(&self, part: &StepPartition) -> Vec<f64> {
        let end = self.time_end(part);
        let n = self.t_samples - 1;
        (0..=n).map(|i| if i == n { end } else { end * i as f64 / n as f64 }).collect()
    }

    /// The config in its own grammar, every key included.
    pub fn render(&self) -> String {
        let auto = |a: Auto| match a {
            Auto::Auto => "auto".to_string(),
            Auto::Value(v) => v.to_string(),
        };
        let base = match &self.base {
            BaseRule::Uniform => "uniform".to_string(),
            BaseRule::Explicit(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        };
        let pairs: [(&str, String); 26] = [
            ("D", self.d.to_string()),
            ("L", self.l.to_string()),
            ("c0", self.c0.to_string()),
            ("J0", self.j0.to_string()),
            ("hill_n", self.hill_n.to_string()),
            ("hill_k", self.hill_k.to_string()),
            ("beta", self.beta.to_string()),
            ("beta0", self.beta0.to_string()),
            ("m", self.m.to_string()),
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
            ("base", base),
            ("max_depth", self.max_depth.to_string()),
            ("quad_tol", self.quad_tol.to_string()),
            ("t_samples", self.t_samples.to_string()),
            ("t_end", auto(self.t_end)),
            ("gamma", auto(self.gamma)),
            ("s_max", auto(self.s_max)),
            ("s_samples", self.s_samples.to_string()),
            ("lemma_n", self.lemma_n.to_string()),
            ("hill8_a", self.hill8_a.to_string()),
            ("hill8_length", self.hill8_length.to_string()),
            ("french_t_delay", self.french.t_delay.to_string()),
            ("french_n", self.french.n.to_string()),
            ("french_i_max", self.french.i_max.to_string()),
            ("french_k", self.french.k.to_string()),
        ];
        let mut out = String::new();
        for (k, v) in pairs {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!((c.m, c.p, c.q), (8, 20, 16));
    }

    #[test]
    fn comments_and_whitespace() {
        let c = RunConfig::parse("# header\n\n  L = 3   # length\nq=4\n").unwrap();
        assert_eq!(c.l, 3.0);
        assert_eq!(c.q, 4);
        assert_eq!(c.line_of("L"), 3);
        assert_eq!(c.line_of("beta"), 0);
    }

    #[test]
    fn errors_name_their_line() {
        let cases = [
            ("L = 1\nfoo = 2\n", 2, "unknown key"),
            ("L = 1\nL = 2\n", 2, "already set on line 1"),
            ("\n\nbeta = 1.2\n", 3, "(0, 1)"),
            ("m = 0\n", 1, "at least 1"),
            ("D = -1\n", 1, "positive"),
            ("q = x\n", 1, "integer"),
            ("just words\n", 1, "key = value"),
            ("t_end = -3\n", 1, "positive"),
            ("base = 0.8, 0.9\np = 2\nq = 1\nL = 2\n", 4, "beta L"),
            ("s_samples = 10\n", 1, "at least 1000"),
        ];
        for (text, line, needle) in cases {
            let e = RunConfig::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn render_round_trips() {
        let c = RunConfig::parse("L = 2.5\nbase = 2,2.1\nq = 1\nt_end = 40\ngamma = 3\n").unwrap();
        let again = RunConfig::parse(&c.render()).unwrap();
        assert_eq!(c.physical(), again.physical());
        assert_eq!((c.base.clone(), c.t_end, c.gamma), (again.base.clone(), again.t_end, again.gamma));
    }

    #[test]
    fn default_grid_ends_at_last_horizon() {
        let c = RunConfig::default();
        let part = c.partition().unwrap();
        let grid = c.time_grid(&part);
        assert_eq!(grid.len(), 2001);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), part.l_m() * part.l_m());
    }
}
