//! Run configuration shared by the CLI and the verification suites.

use crate::error::{Error, Result};

/// Tolerances, budgets and reproducibility knobs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    /// Band half-width for treating a modulus as exactly 1.
    pub eps_circle: f64,
    /// Distance threshold for declaring numeric convergence to an invariant set.
    pub eps_converge: f64,
    /// Iteration budget for Green estimates and orbit classification.
    pub n_max: u32,
    pub escape_radius: f64,
    pub out_dir: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            eps_circle: 1e-8,
            eps_converge: 1e-6,
            n_max: 200,
            escape_radius: 1e8,
            out_dir: None,
        }
    }
}

impl RunConfig {
    /// Parse a `key = value` config file body. Unknown keys are rejected so
    /// typos do not silently fall back to defaults.
    pub fn apply_key_values(&mut self, body: &str) -> Result<()> {
        for (lineno, raw) in body.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &str| Error::Parse(format!("line {}: bad {key}: {e}", lineno + 1));
            match key {
                "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
                "eps_circle" => self.eps_circle = parse_pos(value).map_err(|e| bad(&e))?,
                "eps_converge" => self.eps_converge = parse_pos(value).map_err(|e| bad(&e))?,
                "n_max" => {
                    self.n_max = value.parse().map_err(|_| bad("integer"))?;
                    if self.n_max == 0 {
                        return Err(bad("must be positive"));
                    }
                }
                "escape_radius" => self.escape_radius = parse_pos(value).map_err(|e| bad(&e))?,
                "out" => self.out_dir = Some(value.to_string()),
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown config key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }
}

fn parse_pos(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| "number".to_string())?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}
