//! Flat `key = value` run configuration.
//!
//! ```text
//! # investment and depreciation
//! gamma = 1
//! delta = 0.2
//! q_points = 401
//! out = results/
//! ```
//!
//! Blank lines and `#` comments are ignored; unknown keys and repeated keys
//! are errors. Command-line flags override values read from a file.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub qbar: Option<f64>,
    pub r0: Option<f64>,
    pub rate: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub max_step: Option<f64>,
    pub r_points: Option<usize>,
    pub q_points: Option<usize>,
    pub ratio_points: Option<usize>,
    pub ratio_max: Option<f64>,
    pub seed: Option<u64>,
    pub members: Option<usize>,
    pub economies: Option<usize>,
    pub activities: Option<usize>,
    pub capabilities: Option<usize>,
    pub q_low: Option<f64>,
    pub q_high: Option<f64>,
    pub r_low: Option<f64>,
    pub r_high: Option<f64>,
    pub q: Option<PathBuf>,
    pub r: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
}

pub const KEYS: &[&str] = &[
    "gamma",
    "delta",
    "qbar",
    "r0",
    "rate",
    "t_end",
    "dt",
    "max_step",
    "r_points",
    "q_points",
    "ratio_points",
    "ratio_max",
    "seed",
    "members",
    "economies",
    "activities",
    "capabilities",
    "q_low",
    "q_high",
    "r_low",
    "r_high",
    "q",
    "r",
    "out",
    "svg",
];

fn bad(line: usize, key: &str, value: &str, what: &str) -> Error {
    Error::Config(format!("line {line}: `{key} = {value}`: {what}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key.to_string()) {
                return Err(Error::Config(format!(
                    "line {line_no}: duplicate key `{key}`"
                )));
            }
            seen.push(key.to_string());
            cfg.set(key, value)
                .map_err(|what| bad(line_no, key, value, &what))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<Option<T>, String> {
            v.parse()
                .map(Some)
                .map_err(|_| "not a valid number".to_string())
        }
        match key {
            "gamma" => self.gamma = num(value)?,
            "delta" => self.delta = num(value)?,
            "qbar" => self.qbar = num(value)?,
            "r0" => self.r0 = num(value)?,
            "rate" => self.rate = num(value)?,
            "t_end" => self.t_end = num(value)?,
            "dt" => self.dt = num(value)?,
            "max_step" => self.max_step = num(value)?,
            "r_points" => self.r_points = num(value)?,
            "q_points" => self.q_points = num(value)?,
            "ratio_points" => self.ratio_points = num(value)?,
            "ratio_max" => self.ratio_max = num(value)?,
            "seed" => self.seed = num(value)?,
            "members" => self.members = num(value)?,
            "economies" => self.economies = num(value)?,
            "activities" => self.activities = num(value)?,
            "capabilities" => self.capabilities = num(value)?,
            "q_low" => self.q_low = num(value)?,
            "q_high" => self.q_high = num(value)?,
            "r_low" => self.r_low = num(value)?,
            "r_high" => self.r_high = num(value)?,
            "q" => self.q = Some(PathBuf::from(value)),
            "r" => self.r = Some(PathBuf::from(value)),
            "out" => self.out = Some(PathBuf::from(value)),
            "svg" => {
                self.svg = Some(match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err("expected true or false".into()),
                })
            }
            _ => return Err(format!("unknown key (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Field-wise: `overrides` wins wherever it is set.
    pub fn merged(self, overrides: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => {
                RunConfig { $($f: overrides.$f.or(self.$f)),* }
            };
        }
        pick!(
            gamma,
            delta,
            qbar,
            r0,
            rate,
            t_end,
            dt,
            max_step,
            r_points,
            q_points,
            ratio_points,
            ratio_max,
            seed,
            members,
            economies,
            activities,
            capabilities,
            q_low,
            q_high,
            r_low,
            r_high,
            q,
            r,
            out,
            svg
        )
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: Option<f64>, ok: fn(f64) -> bool, domain: &str| match v {
            Some(x) if !ok(x) => Err(Error::Config(format!("{name} = {x} outside {domain}"))),
            _ => Ok(()),
        };
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        check("gamma", self.gamma, |x| x > 0.0 && x <= 1.0, "(0, 1]")?;
        check(
            "delta",
            self.delta,
            |x| x >= 0.0 && x.is_finite(),
            "[0, inf)",
        )?;
        check("qbar", self.qbar, unit, "[0, 1]")?;
        check("r0", self.r0, unit, "[0, 1]")?;
        check("rate", self.rate, |x| x >= 0.0 && x.is_finite(), "[0, inf)")?;
        check(
            "t_end",
            self.t_end,
            |x| x >= 0.0 && x.is_finite(),
            "[0, inf)",
        )?;
        check("dt", self.dt, |x| x > 0.0 && x.is_finite(), "(0, inf)")?;
        check(
            "max_step",
            self.max_step,
            |x| x > 0.0 && x.is_finite(),
            "(0, inf)",
        )?;
        check(
            "ratio_max",
            self.ratio_max,
            |x| x > 0.0 && x.is_finite(),
            "(0, inf)",
        )?;
        for (name, v) in [
            ("q_low", self.q_low),
            ("q_high", self.q_high),
            ("r_low", self.r_low),
            ("r_high", self.r_high),
        ] {
            check(name, v, unit, "[0, 1]")?;
        }
        for (lo, hi, name) in [
            (self.q_low, self.q_high, "q_low > q_high"),
            (self.r_low, self.r_high, "r_low > r_high"),
        ] {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(Error::Config(name.into()));
                }
            }
        }
        for (name, v) in [
            ("r_points", self.r_points),
            ("q_points", self.q_points),
            ("ratio_points", self.ratio_points),
        ] {
            if matches!(v, Some(n) if n < 2) {
                return Err(Error::Config(format!("{name} must be at least 2")));
            }
        }
        for (name, v) in [
            ("members", self.members),
            ("economies", self.economies),
            ("activities", self.activities),
            ("capabilities", self.capabilities),
        ] {
            if v == Some(0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}
