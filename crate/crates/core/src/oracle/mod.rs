//! Direct evaluation of `||q|| = int |g / h| dA` over the plane.
//!
//! The square `[-R, R]^2` holding every pole and zero is refined by a global
//! adaptive quadtree. Cells near a pole or zero use a fan (Duffy) rule from
//! that point, which absorbs the `1/|x - p|` singularity into the Jacobian.
//! The exterior of the square goes through the chart `u = 1/x`, where the
//! integrand is smooth because `deg h - deg g >= 4`.
//!
//! This shares nothing with the period pipeline beyond polynomial
//! evaluation and root finding, so agreement between the two is a genuine
//! check.

pub mod agm;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::Poly;
use crate::quaddiff::QuadDiff;
use crate::quadrature::gauss_legendre;

pub const DEFAULT_ORACLE_TOL: f64 = 1e-5;
pub const DEFAULT_MAX_CELLS: usize = 400_000;
pub const DEFAULT_EXCLUSION: f64 = 0.05;
pub const DEFAULT_CHART_FACTOR: f64 = 2.0;

const CELL_ORDER: usize = 8;
const FAN_ORDER: usize = 10;
const EXTERIOR_ORDER: usize = 24;
const INITIAL_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Relative tolerance on the total.
    pub tol: f64,
    pub max_cells: usize,
    /// Fan-rule radius as a fraction of the distance to the nearest other
    /// singular point.
    pub exclusion: f64,
    /// Square half-width as a multiple of the largest singular point modulus.
    pub chart_factor: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            tol: DEFAULT_ORACLE_TOL,
            max_cells: DEFAULT_MAX_CELLS,
            exclusion: DEFAULT_EXCLUSION,
            chart_factor: DEFAULT_CHART_FACTOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub value: f64,
    /// Absolute error estimate.
    pub tolerance: f64,
    pub cells_used: usize,
    /// False when the cell budget ran out before the tolerance was met.
    pub certified: bool,
}

struct Integrand<'a> {
    g: &'a Poly,
    h: &'a Poly,
}

impl Integrand<'_> {
    fn at(&self, x: Complex64) -> f64 {
        self.g.eval(x).norm() / self.h.eval(x).norm()
    }
}

#[derive(Debug, Clone, Copy)]
struct Special {
    at: Complex64,
    radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct CellId {
    level: u32,
    ix: u64,
    iy: u64,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    id: CellId,
    lo: Complex64,
    size: f64,
}

impl Cell {
    fn children(&self) -> [Cell; 4] {
        let s = 0.5 * self.size;
        let id = self.id;
        let mk = |dx: u64, dy: u64| Cell {
            id: CellId {
                level: id.level + 1,
                ix: 2 * id.ix + dx,
                iy: 2 * id.iy + dy,
            },
            lo: self.lo + Complex64::new(dx as f64 * s, dy as f64 * s),
            size: s,
        };
        [mk(0, 0), mk(1, 0), mk(0, 1), mk(1, 1)]
    }

    fn contains(&self, p: Complex64) -> bool {
        p.re >= self.lo.re && p.re <= self.lo.re + self.size && p.im >= self.lo.im && p.im <= self.lo.im + self.size
    }

    fn distance(&self, p: Complex64) -> f64 {
        let dx = (self.lo.re - p.re).max(p.re - self.lo.re - self.size).max(0.0);
        let dy = (self.lo.im - p.im).max(p.im - self.lo.im - self.size).max(0.0);
        dx.hypot(dy)
    }

    /// Corners in counterclockwise order.
    fn corners(&self) -> [Complex64; 4] {
        let s = self.size;
        [
            self.lo,
            self.lo + Complex64::new(s, 0.0),
            self.lo + Complex64::new(s, s),
            self.lo + Complex64::new(0.0, s),
        ]
    }
}

/// Gauss nodes and weights mapped to `[0, 1]`.
fn unit_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (x.iter().map(|x| 0.5 * (x + 1.0)).collect(), w.iter().map(|w| 0.5 * w).collect())
}

fn cached_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CELL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static FAN: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        CELL_ORDER => CELL.get_or_init(|| unit_rule(CELL_ORDER)),
        FAN_ORDER => FAN.get_or_init(|| unit_rule(FAN_ORDER)),
        _ => unreachable!("no cached rule of order {n}"),
    }
}

struct Interior<'a> {
    f: Integrand<'a>,
    special: Vec<Special>,
}

impl Interior<'_> {
    fn tensor(&self, cell: &Cell) -> f64 {
        let (x, w) = cached_rule(CELL_ORDER);
        let mut sum = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            for (yj, wj) in x.iter().zip(w) {
                let p = cell.lo + Complex64::new(xi * cell.size, yj * cell.size);
                sum += wi * wj * self.f.at(p);
            }
        }
        sum * cell.size * cell.size
    }

    /// Signed sum over the triangles `(p, A, B)` for consecutive corners.
    fn fan(&self, cell: &Cell, p: Complex64) -> f64 {
        let (x, w) = cached_rule(FAN_ORDER);
        let c = cell.corners();
        let mut total = 0.0;
        for k in 0..4 {
            let (a, b) = (c[k], c[(k + 1) % 4]);
            let (pa, ab) = (a - p, b - a);
            let jac = pa.re * ab.im - pa.im * ab.re;
            if jac == 0.0 {
                continue;
            }
            let mut sum = 0.0;
            for (s, ws) in x.iter().zip(w) {
                let ray = pa + ab * *s;
                for (t, wt) in x.iter().zip(w) {
                    sum += ws * wt * t * self.f.at(p + ray * *t);
                }
            }
            total += jac * sum;
        }
        total
    }

    fn rule(&self, cell: &Cell) -> f64 {
        let mut inside = self.special.iter().filter(|s| cell.contains(s.at));
        let centre = cell.lo + Complex64::new(0.5 * cell.size, 0.5 * cell.size);
        match (inside.next(), inside.next()) {
            (Some(s), None) => self.fan(cell, s.at),
            (Some(_), Some(_)) => {
                let nearest = self
                    .special
                    .iter()
                    .filter(|s| cell.contains(s.at))
                    .min_by(|a, b| (a.at - centre).norm().total_cmp(&(b.at - centre).norm()))
                    .unwrap();
                self.fan(cell, nearest.at)
            }
            _ => match self
                .special
                .iter()
                .filter(|s| cell.distance(s.at) <= s.radius)
                .min_by(|a, b| cell.distance(a.at).total_cmp(&cell.distance(b.at)))
            {
                Some(s) => self.fan(cell, s.at),
                None => self.tensor(cell),
            },
        }
    }
}

struct Leaf {
    cell: Cell,
    children: [f64; 4],
    err: f64,
}

impl Leaf {
    fn new(cell: Cell, coarse: f64, interior: &Interior) -> Leaf {
        let kids = cell.children();
        let children = kids.map(|k| interior.rule(&k));
        let fine: f64 = children.iter().sum();
        Leaf {
            cell,
            children,
            err: (fine - coarse).abs(),
        }
    }

    fn value(&self) -> f64 {
        self.children.iter().sum()
    }
}

impl PartialEq for Leaf {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Leaf {}
impl PartialOrd for Leaf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Leaf {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.cell.id.cmp(&self.cell.id))
    }
}

/// Integral over `|x| > R` outside the square, with an error estimate from
/// doubling the Gauss order.
fn exterior(f: &Integrand, half: f64) -> (f64, f64) {
    let side = |n: usize| {
        let (x, w) = unit_rule(n);
        let mut total = 0.0;
        for k in 0..4 {
            let base = k as f64 * 2.0 * FRAC_PI_4;
            let mut sum = 0.0;
            for (a, wa) in x.iter().zip(&w) {
                let phi_rel = -FRAC_PI_4 + a * 2.0 * FRAC_PI_4;
                let rho_b = half / phi_rel.cos();
                let dir = Complex64::from_polar(1.0, base + phi_rel);
                // s = sigma / rho_b runs over (0, 1 / rho_b)
                for (sig, ws) in x.iter().zip(&w) {
                    let s = sig / rho_b;
                    sum += wa * ws * f.at(dir / s) / (s * s * s) / rho_b;
                }
            }
            total += sum * 2.0 * FRAC_PI_4;
        }
        total
    };
    let coarse = side(EXTERIOR_ORDER);
    let fine = side(2 * EXTERIOR_ORDER);
    (fine, (fine - coarse).abs())
}

pub fn direct_norm(q: &QuadDiff, tol: f64) -> Result<AreaEstimate> {
    direct_norm_with(
        q,
        &OracleOptions {
            tol,
            ..OracleOptions::default()
        },
    )
}

pub fn direct_norm_with(q: &QuadDiff, opts: &OracleOptions) -> Result<AreaEstimate> {
    let mut points = q.poles();
    points.extend(q.zeros().iter().map(|r| r.location));
    let special: Vec<Special> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let nearest = points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| (p - o).norm())
                .fold(f64::INFINITY, f64::min);
            Special {
                at: p,
                radius: opts.exclusion * nearest,
            }
        })
        .collect();
    let half = opts.chart_factor * points.iter().map(|p| p.norm()).fold(1.0, f64::max);

    let f = Integrand { g: q.g(), h: q.h() };
    let (ext_value, ext_err) = exterior(&f, half);
    let interior = Interior { f, special };

    let root = Cell {
        id: CellId { level: 0, ix: 0, iy: 0 },
        lo: Complex64::new(-half, -half),
        size: 2.0 * half,
    };
    let mut start = vec![root];
    for _ in 0..INITIAL_LEVEL {
        start = start.iter().flat_map(Cell::children).collect();
    }
    let mut heap: BinaryHeap<Leaf> = start
        .iter()
        .map(|c| {
            let coarse = interior.rule(c);
            Leaf::new(*c, coarse, &interior)
        })
        .collect();

    let mut total: f64 = heap.iter().map(Leaf::value).sum::<f64>() + ext_value;
    let mut err: f64 = heap.iter().map(|l| l.err).sum::<f64>() + ext_err;
    let mut certified = true;
    while err > opts.tol * total.abs() {
        if heap.len() + 3 > opts.max_cells {
            certified = false;
            break;
        }
        let worst = heap.pop().expect("heap never empties");
        total -= worst.value();
        err -= worst.err;
        for (k, child) in worst.cell.children().iter().enumerate() {
            let leaf = Leaf::new(*child, worst.children[k], &interior);
            total += leaf.value();
            err += leaf.err;
            heap.push(leaf);
        }
    }

    let mut leaves = heap.into_vec();
    leaves.sort_by_key(|l| l.cell.id);
    let value = leaves.iter().map(Leaf::value).sum::<f64>() + ext_value;
    let tolerance = leaves.iter().map(|l| l.err).sum::<f64>() + ext_err;
    Ok(AreaEstimate {
        value,
        tolerance,
        cells_used: leaves.len(),
        certified: certified && tolerance <= opts.tol * value.abs(),
    })
}
