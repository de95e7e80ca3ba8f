//! Royden's norm `||q|| = int |q|` from the periods of the abelian double
//! cover.
//!
//! On the cover `q` pulls back to `omega^2` with `omega = g dx / z`, and the
//! area of `omega` is `sum_j Im(conj(x_j) y_j)` over `a`/`b` periods. The
//! cover has degree two, so `||q||` is half of that.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cover::DoubleCover;
use crate::error::{Error, Result, Stage};
use crate::homology::{build_path_system, chain_cycles, DEFAULT_CLEARANCE};
use crate::periods::{big_period_matrix, BigPeriodMatrix, DEFAULT_QUAD_TOL, DEFAULT_RIEMANN_TOL};
use crate::poly::Poly;
use crate::quaddiff::{QuadDiff, DEFAULT_ROOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    pub quad_tol: f64,
    pub root_tol: f64,
    pub clearance: f64,
    pub riemann_tol: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            quad_tol: DEFAULT_QUAD_TOL,
            root_tol: DEFAULT_ROOT_TOL,
            clearance: DEFAULT_CLEARANCE,
            riemann_tol: DEFAULT_RIEMANN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub symmetry_defect: f64,
    pub min_im_tau_eigenvalue: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    #[serde(rename = "norm")]
    pub value: f64,
    #[serde(rename = "error")]
    pub error_estimate: f64,
    pub genus: usize,
    pub orientation_flipped: bool,
    #[serde(skip)]
    pub diagnostics: Option<Diagnostics>,
}

/// Periods of `omega_q = g dx / z` over `a_1..a_g, b_1..b_g`, with their
/// error bounds.
pub fn omega_periods(bpm: &BigPeriodMatrix, cover: &DoubleCover) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let num = &cover.reduced_numerator;
    if num.degree() + 1 > bpm.genus {
        return Err(Error::DegreeOverflow {
            degree: num.degree(),
            max: bpm.genus as isize - 1,
        });
    }
    let pre = cover.scale.sqrt().inv();
    let coeffs = DMatrix::from_fn(1, bpm.genus, |_, k| num.coeff(k) * pre);
    let pers = &coeffs * &bpm.periods;
    let err = coeffs.map(|c| c.norm()) * &bpm.errors;
    Ok((pers.iter().copied().collect(), err.iter().copied().collect()))
}

/// `sum_{j <= g} Im(conj(pers_j) pers_{j+g})`.
pub fn norm_from_periods(pers: &[Complex64]) -> f64 {
    assert!(pers.len() % 2 == 0, "period vector must have even length");
    let g = pers.len() / 2;
    (0..g).map(|j| (pers[j].conj() * pers[j + g]).im).sum()
}

fn area_error(pers: &[Complex64], err: &[f64]) -> f64 {
    let g = pers.len() / 2;
    (0..g)
        .map(|j| pers[j].norm() * err[j + g] + pers[j + g].norm() * err[j] + err[j] * err[j + g])
        .sum()
}

/// Norm of an already validated differential.
pub fn royden_norm(q: &QuadDiff, opts: &NormOptions) -> Result<NormResult> {
    norm_with_periods(q, opts).map(|(r, _)| r)
}

/// Validates `g / h dx^2` and computes its norm.
pub fn norm_of(g: &Poly, h: &Poly, opts: &NormOptions) -> Result<NormResult> {
    let q = QuadDiff::validate(g, h, opts.root_tol).map_err(|e| e.at(Stage::Validate))?;
    royden_norm(&q, opts)
}

/// Norm together with the big period matrix it came from.
pub fn norm_with_periods(q: &QuadDiff, opts: &NormOptions) -> Result<(NormResult, BigPeriodMatrix)> {
    let cover = DoubleCover::build(q).map_err(|e| e.at(Stage::Cover))?;
    let ps = build_path_system(&cover, opts.clearance).map_err(|e| e.at(Stage::Paths))?;
    let cb = chain_cycles(&ps, &cover).map_err(|e| e.at(Stage::Cycles))?;
    let bpm = big_period_matrix(&cover, &ps, &cb, opts.quad_tol, opts.riemann_tol).map_err(|e| e.at(Stage::Periods))?;
    let (pers, err) = omega_periods(&bpm, &cover).map_err(|e| e.at(Stage::Norm))?;
    let raw = norm_from_periods(&pers);
    let result = NormResult {
        value: 0.5 * raw.abs(),
        error_estimate: 0.5 * area_error(&pers, &err),
        genus: cover.genus,
        orientation_flipped: bpm.orientation_flipped ^ (raw < 0.0),
        diagnostics: Some(Diagnostics {
            symmetry_defect: bpm.riemann.symmetry_defect,
            min_im_tau_eigenvalue: bpm.riemann.min_eigenvalue,
            evaluations: bpm.evaluations,
        }),
    };
    Ok((result, bpm))
}
