//! Flat key-value experiment configuration files.
//!
//! The format is a TOML-ish list of `key = value` lines with `#` comments
//! and a mandatory `schema_version = 1`:
//!
//! ```text
//! schema_version = 1
//! dgp = ar1              # ar1 | white-noise | ma1 | maq | ar2-half
//! phi = 0.9
//! n = 50
//! replications = 3000
//! seed = 42
//! c = 0.8
//! methods = cv-c, cv-ar, cv-pz, am-pw, nw-pw
//! levels = 90, 95, 99
//! ```

use std::collections::BTreeMap;

use fdcv_core::sim::{DgpFamily, DgpSpec, ExperimentConfig, Method};

#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

pub fn parse_method(name: &str) -> Option<Method> {
    match name.trim().to_ascii_lowercase().as_str() {
        "cv-c" | "cv_c" | "cvc" => Some(Method::CvC),
        "cv-ar" | "cv_ar" | "cvar" => Some(Method::CvAr),
        "cv-pz" | "cv_pz" | "cvpz" => Some(Method::CvPz),
        "am-pw" | "am_pw" | "ampw" => Some(Method::AmPw),
        "nw-pw" | "nw_pw" | "nwpw" => Some(Method::NwPw),
        _ => None,
    }
}

/// Parse a config file body into an experiment description.
pub fn parse_experiment(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(
                &format!("line {}", idx + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        fields.insert(key.trim().to_string(), value.trim().to_string());
    }

    let get = |key: &str| fields.get(key).map(|s| s.as_str());
    let require = |key: &str| get(key).ok_or_else(|| err(key, "missing"));
    let parse_f64 = |key: &str| -> Result<f64, ConfigError> {
        require(key)?
            .parse()
            .map_err(|_| err(key, "expected a number"))
    };
    let parse_usize = |key: &str| -> Result<usize, ConfigError> {
        require(key)?
            .parse()
            .map_err(|_| err(key, "expected a nonnegative integer"))
    };

    let version: u32 = parse_usize("schema_version")? as u32;
    if version != 1 {
        return Err(err("schema_version", "this build understands version 1"));
    }

    let family = match require("dgp")?.to_ascii_lowercase().as_str() {
        "white-noise" | "white_noise" | "wn" => DgpFamily::WhiteNoise,
        "ar1" => DgpFamily::Ar1 {
            phi: parse_f64("phi")?,
        },
        "ma1" => DgpFamily::Ma1 {
            psi: parse_f64("psi")?,
        },
        "maq" => DgpFamily::Maq {
            alpha: parse_f64("alpha")?,
            beta: parse_f64("beta")?,
            q: parse_usize("q")?,
        },
        "ar2-half" | "ar2_half" | "ar2" => DgpFamily::Ar2HalfPhi {
            phi: parse_f64("phi")?,
        },
        other => {
            return Err(err(
                "dgp",
                format!("unknown process `{other}` (ar1, white-noise, ma1, maq, ar2-half)"),
            ))
        }
    };

    let n = parse_usize("n")?;
    let dgp = DgpSpec::new(family, n).map_err(|e| err("dgp", e.to_string()))?;

    let replications = parse_usize("replications")?;
    let seed: u64 = require("seed")?
        .parse()
        .map_err(|_| err("seed", "expected an unsigned integer"))?;

    let mut config = ExperimentConfig::new(dgp, Vec::new(), replications, seed);

    if let Some(value) = get("c") {
        config.c = value.parse().map_err(|_| err("c", "expected a number"))?;
        if !(config.c > 0.0 && config.c < 1.0) {
            return Err(err("c", "must lie strictly between 0 and 1"));
        }
    }

    let methods_raw = get("methods").unwrap_or("cv-c, cv-ar, cv-pz, am-pw, nw-pw");
    for token in methods_raw.split(',') {
        let method = parse_method(token)
            .ok_or_else(|| err("methods", format!("unknown method `{}`", token.trim())))?;
        if !config.methods.contains(&method) {
            config.methods.push(method);
        }
    }
    if config.methods.is_empty() {
        return Err(err("methods", "need at least one method"));
    }

    if let Some(value) = get("levels") {
        let mut levels = Vec::new();
        for token in value.split(',') {
            let pct: f64 = token
                .trim()
                .parse()
                .map_err(|_| err("levels", format!("bad level `{}`", token.trim())))?;
            let level = if pct > 1.0 { pct / 100.0 } else { pct };
            if !(level > 0.0 && level < 1.0) {
                return Err(err("levels", format!("level {pct} out of range")));
            }
            levels.push(level);
        }
        config.levels = levels;
    }

    Ok(config)
}
