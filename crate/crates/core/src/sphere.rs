//! The unit sphere of `Q(X)` when `dim Q(X) = 2`.
//!
//! Every element is `(a + b x) / h dx^2`, so the sphere is the polar curve
//! `r(theta) = 1 / ||q_theta||` with `q_theta = (cos theta + sin theta x) / h`.
//! Directions where `a + b x` vanishes at a real root of `h` cancel a pole and
//! leave a differential with no zeros; the norm is not twice differentiable
//! there.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{royden_norm, Diagnostics, NormOptions, NormResult};
use crate::poly::{self, Poly};
use crate::quaddiff::{dimension_of_q, QuadDiff};

/// Samples this close to a zero-free angle snap onto it so the shared root
/// cancels exactly.
pub const SNAP_TOL: f64 = 1e-6;
/// Minimum grid size for the derivative stencils.
pub const MIN_DERIVATIVE_POINTS: usize = 7;

const REAL_ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSample {
    pub theta: f64,
    pub r: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub d3: Option<f64>,
    pub near_singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleFailure {
    pub theta: f64,
    pub error: Error,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    /// Successful samples in increasing `theta`.
    pub samples: Vec<SphereSample>,
    pub failures: Vec<SampleFailure>,
    /// Norm error estimate per successful sample.
    pub norm_errors: Vec<f64>,
    /// Period-matrix diagnostics per successful sample.
    pub diagnostics: Vec<Diagnostics>,
}

impl Sweep {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `theta` in `[0, pi)` with `cos theta + sin theta x_0 = 0` for each real
/// root `x_0` of `h`, sorted.
pub fn zero_free_angles(h: &Poly, tol: f64) -> Result<Vec<f64>> {
    let rs = poly::roots(h, tol)?;
    let mut out: Vec<f64> = rs
        .locations()
        .iter()
        .filter(|z| z.im.abs() <= REAL_ROOT_TOL * z.re.abs().max(1.0))
        .map(|z| 1f64.atan2(-z.re).rem_euclid(PI))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Distance from `theta` to the nearest of `angles` modulo `pi`.
pub fn angular_distance_mod_pi(theta: f64, angles: &[f64]) -> f64 {
    angles
        .iter()
        .map(|a| {
            let d = (theta - a).rem_euclid(PI);
            d.min(PI - d)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn direction(h: &Poly, theta: f64) -> (Poly, Poly) {
    (Poly::from_real(&[theta.cos(), theta.sin()]), h.clone())
}

/// Snaps `theta` onto a zero-free angle (or its `+pi` translate) within
/// [`SNAP_TOL`].
fn snapped(theta: f64, angles: &[f64]) -> f64 {
    for &a in angles {
        for cand in [a, a + PI] {
            if (theta - cand).abs() <= SNAP_TOL {
                return cand;
            }
        }
    }
    theta
}

fn sample_norm(h: &Poly, theta: f64, opts: &NormOptions) -> Result<NormResult> {
    let (g, h) = direction(h, theta);
    let q = QuadDiff::validate(&g, &h, opts.root_tol)?;
    royden_norm(&q, opts)
}

/// `samples` uniformly spaced directions on `[0, 2 pi)`.
pub fn sweep(h: &Poly, samples: usize, opts: &NormOptions) -> Result<Sweep> {
    let dim = dimension_of_q(h, opts.root_tol)?;
    if dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: dim,
        });
    }
    if samples == 0 {
        return Err(Error::GridTooSmall(0));
    }
    let angles = zero_free_angles(h, opts.root_tol)?;
    let step = TAU / samples as f64;
    let results: Vec<(f64, Result<NormResult>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let theta = snapped(i as f64 * step, &angles);
            (theta, sample_norm(h, theta, opts))
        })
        .collect();

    let mut out = Sweep {
        samples: Vec::with_capacity(samples),
        failures: Vec::new(),
        norm_errors: Vec::with_capacity(samples),
        diagnostics: Vec::with_capacity(samples),
    };
    for (theta, res) in results {
        match res {
            Ok(norm) => {
                out.samples.push(SphereSample {
                    theta,
                    r: 1.0 / norm.value,
                    d1: None,
                    d2: None,
                    d3: None,
                    near_singular: angular_distance_mod_pi(theta, &angles) < 0.5 * step,
                });
                out.norm_errors.push(norm.error_estimate);
                out.diagnostics.extend(norm.diagnostics);
            }
            Err(error) => out.failures.push(SampleFailure { theta, error }),
        }
    }
    Ok(out)
}

/// Periodic central differences on a uniform grid: `d1` and `d2` from `r`,
/// `d3` as the central difference of `d2`. Fills derivatives up to `order`.
pub fn finite_difference_derivatives(samples: &mut [SphereSample], order: usize) -> Result<()> {
    let n = samples.len();
    if n < MIN_DERIVATIVE_POINTS {
        return Err(Error::GridTooSmall(n));
    }
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidConfig(format!("derivative order must be 1..=3, got {order}")));
    }
    let h = TAU / n as f64;
    for (i, s) in samples.iter().enumerate() {
        let want = i as f64 * h;
        if (s.theta - want).abs() > SNAP_TOL + 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "samples are not on a uniform grid: theta[{i}] = {} (expected {want})",
                s.theta
            )));
        }
    }
    let r: Vec<f64> = samples.iter().map(|s| s.r).collect();
    let at = |v: &[f64], i: isize| v[i.rem_euclid(n as isize) as usize];
    let d1: Vec<f64> = (0..n as isize).map(|i| (at(&r, i + 1) - at(&r, i - 1)) / (2.0 * h)).collect();
    let d2: Vec<f64> = (0..n as isize)
        .map(|i| (at(&r, i + 1) - 2.0 * at(&r, i) + at(&r, i - 1)) / (h * h))
        .collect();
    let d3: Vec<f64> = (0..n as isize).map(|i| (at(&d2, i + 1) - at(&d2, i - 1)) / (2.0 * h)).collect();
    for (i, s) in samples.iter_mut().enumerate() {
        s.d1 = Some(d1[i]);
        s.d2 = (order >= 2).then_some(d2[i]);
        s.d3 = (order >= 3).then_some(d3[i]);
    }
    Ok(())
}

/// Writes the sample table with a header row; failures follow as `#` lines.
pub fn write_csv<W: Write>(out: W, samples: &[SphereSample], failures: &[SampleFailure]) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidConfig(format!("write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s).map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
    }
    w.flush().map_err(io)?;
    let mut inner = w.into_inner().map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
    for f in failures {
        writeln!(inner, "# failed theta={} error={}", f.theta, f.error).map_err(io)?;
    }
    Ok(())
}

/// Reads a table written by [`write_csv`], skipping `#` lines.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SphereSample>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = rd
        .headers()
        .map_err(|e| Error::InvalidConfig(format!("bad CSV header: {e}")))?
        .clone();
    let want = ["theta", "r", "d1", "d2", "d3", "near_singular"];
    if headers.iter().collect::<Vec<_>>() != want {
        return Err(Error::InvalidConfig(format!(
            "CSV header must be {}, got {}",
            want.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rd.deserialize()
        .map(|row| row.map_err(|e| Error::InvalidConfig(format!("bad CSV row: {e}"))))
        .collect()
}

/// `||scale * q_theta||`, for checking that samples lie on the unit sphere.
pub fn scaled_norm(h: &Poly, theta: f64, scale: f64, opts: &NormOptions) -> Result<f64> {
    let (g, h) = direction(h, theta);
    let q = QuadDiff::validate(&g.scale(Complex64::new(scale, 0.0)), &h, opts.root_tol)?;
    Ok(royden_norm(&q, opts)?.value)
}
