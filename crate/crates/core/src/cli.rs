//! Input parsing and configuration shared by the command-line driver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homology::DEFAULT_CLEARANCE;
use crate::norm::NormOptions;
use crate::oracle::DEFAULT_ORACLE_TOL;
use crate::periods::{DEFAULT_QUAD_TOL, DEFAULT_RIEMANN_TOL};
use crate::poly::Poly;
use crate::quaddiff::DEFAULT_ROOT_TOL;

pub const MIN_SWEEP_SAMPLES: usize = 8;
pub const THREADS_ENV: &str = "ROYDEN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub quad_tol: f64,
    pub oracle_tol: f64,
    pub root_tol: f64,
    pub clearance: f64,
    pub samples: usize,
    pub output_format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quad_tol: DEFAULT_QUAD_TOL,
            oracle_tol: DEFAULT_ORACLE_TOL,
            root_tol: DEFAULT_ROOT_TOL,
            clearance: DEFAULT_CLEARANCE,
            samples: 1000,
            output_format: OutputFormat::Json,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("quad-tol", self.quad_tol),
            ("oracle-tol", self.oracle_tol),
            ("root-tol", self.root_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.clearance > 0.0 && self.clearance < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "clearance must lie in (0, 0.5), got {}",
                self.clearance
            )));
        }
        Ok(())
    }

    pub fn validate_sweep(&self) -> Result<()> {
        self.validate()?;
        if self.samples < MIN_SWEEP_SAMPLES {
            return Err(Error::InvalidConfig(format!(
                "samples must be at least {MIN_SWEEP_SAMPLES}, got {}",
                self.samples
            )));
        }
        Ok(())
    }

    pub fn norm_options(&self) -> NormOptions {
        NormOptions {
            quad_tol: self.quad_tol,
            root_tol: self.root_tol,
            clearance: self.clearance,
            riemann_tol: DEFAULT_RIEMANN_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a complex number ({reason})")]
pub struct ParseComplexError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, ParseComplexError> {
    let err = |reason| ParseComplexError {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err("bad real part"));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| err("bad real part"))?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| err("bad imaginary part"))?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated coefficients, lowest degree first.
pub fn parse_coeffs(s: &str) -> std::result::Result<Poly, ParseComplexError> {
    let coeffs = s.split(',').map(parse_complex).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// Thread cap from `ROYDEN_THREADS`; `None` when unset.
pub fn thread_limit() -> std::result::Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
    }
}
