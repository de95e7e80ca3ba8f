//! Periods of the holomorphic forms `x^k dx / w` over the chain cycles.
//!
//! Along an edge the square root `w = prod_j sqrt(x - b_j)` is continued one
//! factor at a time. On a segment `P -> Q` that stays clear of `b_j` the
//! ratio `(x - b_j) / (P - b_j)` sweeps a line segment starting at 1 that
//! never meets the negative reals, so its principal root continues the factor
//! exactly. On an arc around `c` the ratio stays in a half-plane for every
//! `b_j` outside the disk, and the centre factor is `exp(i u sweep / 2)`.
//! No stepping is involved; [`track_factors`] is the general stepping
//! continuation, used to cross-check monodromy.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::cover::DoubleCover;
use crate::error::{Error, Result};
use crate::homology::symplectic::IntMatrix;
use crate::homology::{CycleBasis, Edge, PathSystem, Piece};
use crate::quadrature::tanh_sinh;

/// Default absolute/relative tolerance per edge integral.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// Default relative tolerance on the symmetry of `tau`.
pub const DEFAULT_RIEMANN_TOL: f64 = 1e-6;
/// Smallest admissible eigenvalue of `Im tau`.
pub const MIN_IM_TAU_EIGENVALUE: f64 = 1e-10;

const TRACK_INITIAL_STEPS: usize = 64;
const TRACK_MIN_STEP: f64 = 1e-12;
const TRACK_BUDGET: usize = 1_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Continues each factor `sqrt(x - b_j)` along `path` by small steps, picking
/// at every node the sign nearest the previous value. `start` holds the
/// factor values at the path's first point.
///
/// Returns the factor values at every accepted node, first node included.
pub fn track_factors(branch: &[Complex64], path: &[Piece], start: &[Complex64]) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    assert_eq!(branch.len(), start.len());
    let mut cur = start.to_vec();
    let Some(first) = path.first() else {
        return Ok(Vec::new());
    };
    let mut out = vec![(first.start(), cur.clone())];
    let mut budget = TRACK_BUDGET;
    for (idx, piece) in path.iter().enumerate() {
        let mut s = 0.0;
        let mut h = 1.0 / TRACK_INITIAL_STEPS as f64;
        while s < 1.0 {
            if budget == 0 {
                return Err(Error::TrackingLost { at: idx as f64 + s });
            }
            budget -= 1;
            let t = (s + h).min(1.0);
            let x = piece.point(t);
            let mut next = Vec::with_capacity(branch.len());
            let mut ok = true;
            for (b, prev) in branch.iter().zip(&cur) {
                let d = x - b;
                if d == ZERO {
                    return Err(Error::TrackingLost { at: idx as f64 + t });
                }
                let r = d.sqrt();
                let r = if (r - prev).norm() <= (r + prev).norm() { r } else { -r };
                if (r / prev).arg().abs() > FRAC_PI_2 {
                    ok = false;
                    break;
                }
                next.push(r);
            }
            if !ok {
                h *= 0.5;
                if h < TRACK_MIN_STEP {
                    return Err(Error::TrackingLost { at: idx as f64 + s });
                }
                continue;
            }
            cur = next;
            s = t;
            out.push((x, cur.clone()));
            h = (2.0 * h).min(1.0 / TRACK_INITIAL_STEPS as f64);
        }
    }
    Ok(out)
}

/// Values of `z = sqrt(scale) s(x) prod_j sqrt(x - b_j)` continued along
/// `path` from the principal factors at its start.
pub fn tracked_sqrt(cover: &DoubleCover, path: &[Piece]) -> Result<Vec<(Complex64, Complex64)>> {
    let Some(first) = path.first() else {
        return Ok(Vec::new());
    };
    let x0 = first.start();
    let start: Vec<Complex64> = cover.finite_branch.iter().map(|b| (x0 - b).sqrt()).collect();
    let pre = cover.scale.sqrt();
    Ok(track_factors(&cover.finite_branch, path, &start)?
        .into_iter()
        .map(|(x, f)| (x, pre * cover.square_factor.eval(x) * f.iter().product::<Complex64>()))
        .collect())
}

/// `int x^k dx / w` for `k < dim` along one edge, on the sheet fixed by the
/// principal factors at the start, plus the local germs of `w` at both ends.
#[derive(Debug, Clone)]
pub struct EdgeIntegral {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `w ~ start_germ * sqrt(|x - b_from|)` leaving the start point.
    pub start_germ: Complex64,
    /// `w ~ end_germ * sqrt(|x - b_to|)` arriving at the end point.
    pub end_germ: Complex64,
    pub evaluations: usize,
}

/// Where the two singular endpoint factors sit on a given piece.
struct PieceCtx {
    piece: Piece,
    /// Factor values at the piece start; the entry for the edge's first point
    /// is unused on the first piece.
    start: Vec<Complex64>,
    first: bool,
    last: bool,
}

impl PieceCtx {
    /// `(x, dx/du, w)` at parameter `u`, with `v = 1 - u` supplied separately.
    fn eval(&self, branch: &[Complex64], from: usize, to: usize, u: f64, v: f64) -> (Complex64, Complex64, Complex64) {
        match self.piece {
            Piece::Segment { from: p, to: q } => {
                let dq = q - p;
                let x = if u <= 0.5 { p + dq * u } else { q - dq * v };
                let mut w = ONE;
                for (j, b) in branch.iter().enumerate() {
                    let f = if self.first && j == from {
                        dq.sqrt() * u.sqrt()
                    } else if self.last && j == to {
                        self.start[j] * v.sqrt()
                    } else {
                        let num = if u <= 0.5 { (p - b) + dq * u } else { (q - b) - dq * v };
                        self.start[j] * (num / (p - b)).sqrt()
                    };
                    w *= f;
                }
                (x, dq, w)
            }
            Piece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let rel = Complex64::from_polar(radius, start_angle + u * sweep);
                let x = center + rel;
                let x0 = self.piece.start();
                let mut w = ONE;
                for (j, b) in branch.iter().enumerate() {
                    let f = if *b == center {
                        self.start[j] * Complex64::from_polar(1.0, 0.5 * u * sweep)
                    } else {
                        self.start[j] * ((x - b) / (x0 - b)).sqrt()
                    };
                    w *= f;
                }
                (x, Complex64::i() * sweep * rel, w)
            }
        }
    }

    /// Factor values at `u = 1`.
    fn end_factors(&self, branch: &[Complex64], from: usize, to: usize) -> Vec<Complex64> {
        let mut out = self.start.clone();
        let end = self.piece.end();
        for (j, b) in branch.iter().enumerate() {
            out[j] = match self.piece {
                Piece::Segment { from: p, to: q } => {
                    if self.first && j == from {
                        (q - p).sqrt()
                    } else if self.last && j == to {
                        ZERO
                    } else {
                        self.start[j] * ((end - b) / (p - b)).sqrt()
                    }
                }
                Piece::Arc { center, sweep, .. } => {
                    if *b == center {
                        self.start[j] * Complex64::from_polar(1.0, 0.5 * sweep)
                    } else {
                        self.start[j] * ((end - b) / (self.piece.start() - b)).sqrt()
                    }
                }
            };
        }
        out
    }
}

/// Integrates `x^k dx / w`, `k < dim`, along `edge` of a path system whose
/// points are the full branch set.
pub fn edge_integrals(branch: &[Complex64], edge: &Edge, dim: usize, tol: f64) -> Result<EdgeIntegral> {
    let (from, to) = (edge.from, edge.to);
    let a = branch[from];
    let n_pieces = edge.pieces.len();
    let mut factors: Vec<Complex64> = branch
        .iter()
        .enumerate()
        .map(|(j, b)| if j == from { ZERO } else { (a - b).sqrt() })
        .collect();

    let first_dir = edge.pieces[0].end() - a;
    let start_germ = (first_dir / first_dir.norm()).sqrt()
        * factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != from)
            .map(|(_, f)| f)
            .product::<Complex64>();

    let mut values = vec![ZERO; dim];
    let mut errors = vec![0.0; dim];
    let mut evaluations = 0;
    let piece_tol = tol / n_pieces as f64;
    let mut end_germ = ZERO;
    for (idx, piece) in edge.pieces.iter().enumerate() {
        let ctx = PieceCtx {
            piece: *piece,
            start: factors.clone(),
            first: idx == 0,
            last: idx + 1 == n_pieces,
        };
        let est = tanh_sinh(
            |u, v, out: &mut [Complex64]| {
                let (x, dx, w) = ctx.eval(branch, from, to, u, v);
                let mut term = dx / w;
                for o in out.iter_mut() {
                    *o = term;
                    term *= x;
                }
            },
            dim,
            piece_tol,
        )?;
        for k in 0..dim {
            values[k] += est.values[k];
            errors[k] += est.errors[k];
        }
        evaluations += est.evaluations;
        if ctx.last {
            let p = piece.start();
            let s_b = factors[to] / (p - branch[to]).norm().sqrt();
            end_germ = s_b
                * ctx
                    .end_factors(branch, from, to)
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != to)
                    .map(|(_, f)| f)
                    .product::<Complex64>();
        } else {
            factors = ctx.end_factors(branch, from, to);
        }
    }
    Ok(EdgeIntegral {
        values,
        errors,
        start_germ,
        end_germ,
        evaluations,
    })
}

/// Single basis integral `int x^k dx / w` along an edge of `ps`.
pub fn edge_integral(ps: &PathSystem, edge: &Edge, k: usize, tol: f64) -> Result<(Complex64, f64)> {
    let e = edge_integrals(&ps.points, edge, k + 1, tol)?;
    Ok((e.values[k], e.errors[k]))
}

/// Sheet signs `sigma_i` making `e_i . e_{i+1} = +1` for every consecutive
/// pair, where `e_i` runs out along edge `i` on sheet `sigma_i` and back on
/// the other.
///
/// Near the shared branch point take the local coordinate `zeta` with
/// `w = K zeta`. The cycle `e_i` passes through `zeta = 0` with velocity
/// along `-sigma_i end_germ_i` and `e_{i+1}` along `sigma_{i+1} start_germ_{i+1}`;
/// the intersection sign is the orientation of that pair of vectors.
pub fn sheet_signs(edges: &[EdgeIntegral]) -> Vec<f64> {
    let mut sigma = vec![1.0; edges.len()];
    for i in 1..edges.len() {
        let im = (edges[i - 1].end_germ.conj() * edges[i].start_germ).im;
        sigma[i] = -sigma[i - 1] * im.signum();
    }
    sigma
}

#[derive(Debug, Clone)]
pub struct RiemannCheck {
    pub tau: DMatrix<Complex64>,
    /// `max |tau - tau^T| / max(1, max |tau|)`.
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
}

impl RiemannCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.symmetry_defect <= tol && self.min_eigenvalue > MIN_IM_TAU_EIGENVALUE
    }
}

/// `tau = Pi_a^{-1} Pi_b` with the symmetry defect and the smallest
/// eigenvalue of the symmetric part of `Im tau`.
pub fn riemann_check(pi_a: &DMatrix<Complex64>, pi_b: &DMatrix<Complex64>) -> Option<RiemannCheck> {
    let tau = pi_a.clone().try_inverse()? * pi_b;
    let g = tau.nrows();
    let scale = tau.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut defect: f64 = 0.0;
    for i in 0..g {
        for j in 0..g {
            defect = defect.max((tau[(i, j)] - tau[(j, i)]).norm());
        }
    }
    let im = DMatrix::from_fn(g, g, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
    let min_eigenvalue = SymmetricEigen::new(im).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Some(RiemannCheck {
        tau,
        symmetry_defect: defect / scale,
        min_eigenvalue,
    })
}

#[derive(Debug, Clone)]
pub struct BigPeriodMatrix {
    pub genus: usize,
    /// `genus x 2 genus`: row `k` holds the periods of `x^k dx / w` over
    /// `a_1..a_g, b_1..b_g`.
    pub periods: DMatrix<Complex64>,
    pub errors: DMatrix<f64>,
    /// Periods over the chain cycles, before the symplectic change of basis.
    pub chain_periods: DMatrix<Complex64>,
    pub sheets: Vec<f64>,
    /// True when `Im tau` came out negative definite and the `b` cycles were
    /// reversed to restore the convention `a . b = +1`.
    pub orientation_flipped: bool,
    pub riemann: RiemannCheck,
    pub evaluations: usize,
}

impl BigPeriodMatrix {
    pub fn pi_a(&self) -> DMatrix<Complex64> {
        self.periods.columns(0, self.genus).into_owned()
    }

    pub fn pi_b(&self) -> DMatrix<Complex64> {
        self.periods.columns(self.genus, self.genus).into_owned()
    }
}

fn apply_basis(chain: &DMatrix<Complex64>, chain_err: &DMatrix<f64>, s: &IntMatrix, cols: usize) -> (DMatrix<Complex64>, DMatrix<f64>) {
    let sm = DMatrix::from_fn(s.len(), cols, |i, j| s[i][j] as f64);
    let abs = sm.map(f64::abs);
    (chain * sm.map(|x| Complex64::new(x, 0.0)), chain_err * abs)
}

pub fn big_period_matrix(cover: &DoubleCover, ps: &PathSystem, cb: &CycleBasis, tol: f64, riemann_tol: f64) -> Result<BigPeriodMatrix> {
    let g = cover.genus;
    let edges = ps
        .edges
        .iter()
        .map(|e| edge_integrals(&ps.points, e, g, tol))
        .collect::<Result<Vec<_>>>()?;
    let sheets = sheet_signs(&edges);
    let n = edges.len();
    let chain = DMatrix::from_fn(g, n, |k, i| edges[i].values[k] * (2.0 * sheets[i]));
    let chain_err = DMatrix::from_fn(g, n, |k, i| 2.0 * edges[i].errors[k]);
    let (mut periods, errors) = apply_basis(&chain, &chain_err, &cb.s, 2 * g);

    let bad = |c: Option<&RiemannCheck>| match c {
        Some(c) => Error::RiemannRelationViolation {
            symmetry: c.symmetry_defect,
            min_eig: c.min_eigenvalue,
        },
        None => Error::RiemannRelationViolation {
            symmetry: f64::NAN,
            min_eig: f64::NAN,
        },
    };
    let mut check = riemann_check(&periods.columns(0, g).into_owned(), &periods.columns(g, g).into_owned()).ok_or_else(|| bad(None))?;
    let mut orientation_flipped = false;
    let max_eig = {
        let t = &check.tau;
        let im = DMatrix::from_fn(g, g, |i, j| 0.5 * (t[(i, j)].im + t[(j, i)].im));
        SymmetricEigen::new(im).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    if max_eig < -MIN_IM_TAU_EIGENVALUE {
        for j in g..2 * g {
            for k in 0..g {
                periods[(k, j)] = -periods[(k, j)];
            }
        }
        check = riemann_check(&periods.columns(0, g).into_owned(), &periods.columns(g, g).into_owned()).ok_or_else(|| bad(None))?;
        orientation_flipped = true;
    }
    if !check.holds(riemann_tol) {
        return Err(bad(Some(&check)));
    }
    Ok(BigPeriodMatrix {
        genus: g,
        periods,
        errors,
        chain_periods: chain,
        sheets,
        orientation_flipped,
        riemann: check,
        evaluations: edges.iter().map(|e| e.evaluations).sum(),
    })
}
