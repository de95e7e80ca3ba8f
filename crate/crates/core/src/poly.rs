//! Complex univariate polynomials and root clusters.
//!
//! Roots are found all at once by Aberth–Ehrlich iteration started from a
//! deterministic circle of guesses, then grouped into clusters so that a
//! numerically split multiple root is reported once with its multiplicity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Relative size below which a leading coefficient is treated as zero.
pub const LEADING_CUTOFF: f64 = 1e-13;

/// Default merge radius for root clusters, relative to `max(1, |root|)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

const MAX_ABERTH_ITERATIONS: usize = 600;

/// Univariate polynomial with complex coefficients, lowest degree first.
///
/// Trailing exact zeros are dropped on construction, so the stored leading
/// coefficient is nonzero unless the polynomial is zero (empty `coeffs`).
#[derive(Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Complex64::new(1.0, 0.0))
    }

    /// `lead * prod (x - r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// `sum |a_i| |x|^i`, the natural scale of rounding error in `eval(x)`.
    pub fn magnitude_at(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv())
    }

    /// Drops leading coefficients below `rel * max|coeff|`.
    pub fn truncated(&self, rel: f64) -> Poly {
        let cutoff = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Poly::new(coeffs)
    }

    /// `p(a x + b)`.
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> Poly {
        let inner = Poly::new(vec![b, a]);
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(c);
        }
        acc
    }

    /// Taylor coefficients of `p` about `c`, i.e. `p(c + t) = sum t_k t^k`.
    pub fn taylor_coeffs(&self, c: Complex64) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for k in 0..n {
            for j in (k..n.saturating_sub(1)).rev() {
                let next = work[j + 1];
                work[j] += c * next;
            }
        }
        work
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(Poly::new(
            pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

/// One cluster of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub cluster_tolerance: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.location).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }

    /// Roots listed with repetition.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location, r.multiplicity))
            .collect()
    }
}

/// Fujiwara's bound on the modulus of the roots.
fn fujiwara_bound(p: &Poly) -> f64 {
    let n = p.degree();
    let lead = p.leading().norm();
    let c = p.coeffs();
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let a = c[n - k].norm() / lead;
        let a = if k == n { a / 2.0 } else { a };
        bound = bound.max(a.powf(1.0 / k as f64));
    }
    2.0 * bound
}

/// Raw Aberth–Ehrlich iteration; returns the unclustered roots.
fn aberth(p: &Poly) -> Vec<Complex64> {
    let n = p.degree();
    let radius = fujiwara_bound(p).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dp) = p.eval_with_derivative(z[k]);
            if pv.norm() <= 4.0 * EPS * p.magnitude_at(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= EPS * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    z
}

/// Spread below which `m` roots near `c` are indistinguishable from an
/// `m`-fold root at working precision.
fn noise_radius(p: &Poly, c: Complex64, m: usize) -> f64 {
    let taylor = p.taylor_coeffs(c);
    let tm = taylor.get(m).map_or(0.0, |t| t.norm());
    if tm == 0.0 {
        return f64::INFINITY;
    }
    let n = p.degree() as f64;
    (4.0 * EPS * n * p.magnitude_at(c) / tm).powf(1.0 / m as f64)
}

/// An `m`-fold root is a simple root of the `(m-1)`-th derivative; a few
/// Newton steps there recover the digits the cluster mean lacks.
fn polish_multiple(p: &Poly, c: Complex64, m: usize) -> Complex64 {
    if m < 2 {
        return c;
    }
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let start_radius = noise_radius(p, c, m).min(1e-2 * c.norm().max(1.0));
    let mut x = c;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(x);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.norm() <= 2.0 * EPS * x.norm() {
            break;
        }
    }
    if (x - c).norm() <= 10.0 * start_radius.max(EPS * c.norm()) {
        x
    } else {
        c
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

fn cluster(p: &Poly, z: &[Complex64], cluster_tol: f64) -> Vec<Root> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = (z[i] - z[j]).norm();
            if d <= 0.1 * z[i].norm().max(z[j].norm()).max(1.0) {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let center = |idx: &[usize]| -> Complex64 {
        idx.iter().map(|&i| z[i]).sum::<Complex64>() / idx.len() as f64
    };

    for &(_, i, j) in &pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let mut merged = members[ri].clone();
        merged.extend_from_slice(&members[rj]);
        let c = center(&merged);
        let spread = merged.iter().map(|&k| (z[k] - c).norm()).fold(0.0, f64::max);
        let hard = cluster_tol * c.norm().max(1.0);
        if spread <= hard || spread <= 10.0 * noise_radius(p, c, merged.len()) {
            parent[rj] = ri;
            members[ri] = merged;
            members[rj].clear();
        }
    }

    let mut roots: Vec<Root> = (0..n)
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| {
            let c = center(&members[i]);
            let m = members[i].len();
            Root {
                location: polish_multiple(p, c, m),
                multiplicity: m,
            }
        })
        .collect();

    // Distinct centers closer than the hard tolerance are merged outright.
    loop {
        let mut merged_any = false;
        'outer: for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let (ra, rb) = (roots[a], roots[b]);
                let scale = ra.location.norm().max(rb.location.norm()).max(1.0);
                if (ra.location - rb.location).norm() <= cluster_tol * scale {
                    let m = ra.multiplicity + rb.multiplicity;
                    roots[a] = Root {
                        location: (ra.location * ra.multiplicity as f64
                            + rb.location * rb.multiplicity as f64)
                            / m as f64,
                        multiplicity: m,
                    };
                    roots.remove(b);
                    merged_any = true;
                    break 'outer;
                }
            }
        }
        if !merged_any {
            break;
        }
    }

    roots.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    roots
}

/// Roots of `p` with the default cluster tolerance.
///
/// Every reported location satisfies `|p(r)| <= tol * sum |a_i||r|^i`.
pub fn roots(p: &Poly, tol: f64) -> Result<RootSet> {
    roots_with_cluster(p, tol, DEFAULT_CLUSTER_TOL)
}

pub fn roots_with_cluster(p: &Poly, tol: f64, cluster_tol: f64) -> Result<RootSet> {
    let p = p.truncated(LEADING_CUTOFF);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let raw = if p.degree() == 1 {
        vec![-p.coeff(0) / p.coeff(1)]
    } else {
        aberth(&p)
    };
    let roots = cluster(&p, &raw, cluster_tol);

    let worst = roots
        .iter()
        .map(|r| {
            let scale = p.magnitude_at(r.location).max(f64::MIN_POSITIVE);
            p.eval(r.location).norm() / scale
        })
        .fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::RootsDidNotConverge {
            worst_residual: worst,
        });
    }
    Ok(RootSet {
        roots,
        cluster_tolerance: cluster_tol,
    })
}

/// Monic polynomial whose roots are the clusters shared by `p` and `q`
/// (within `tol` relative to `max(1, |root|)`), each with the smaller
/// multiplicity. Returns `1` when nothing matches.
pub fn gcd_by_roots(p: &Poly, q: &Poly, tol: f64) -> Result<Poly> {
    let rp = roots(p, tol)?;
    let rq = roots(q, tol)?;
    Ok(common_roots(&rp, &rq, tol))
}

pub(crate) fn common_roots(rp: &RootSet, rq: &RootSet, tol: f64) -> Poly {
    let mut used = vec![false; rq.roots.len()];
    let mut shared = Vec::new();
    for a in &rp.roots {
        let best = rq
            .roots
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, b)| (j, (a.location - b.location).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        if let Some((j, d)) = best {
            let b = rq.roots[j];
            if d <= tol * a.location.norm().max(b.location.norm()).max(1.0) {
                used[j] = true;
                let mid = (a.location + b.location) * 0.5;
                shared.extend(std::iter::repeat_n(mid, a.multiplicity.min(b.multiplicity)));
            }
        }
    }
    Poly::from_roots(Complex64::new(1.0, 0.0), &shared)
}

/// Monic polynomial with the distinct roots of `p`, each once.
pub fn squarefree_part(p: &Poly, tol: f64) -> Result<Poly> {
    let p = p.truncated(LEADING_CUTOFF);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Ok(Poly::one());
    }
    let rs = roots(&p, tol)?;
    Ok(Poly::from_roots(Complex64::new(1.0, 0.0), &rs.locations()))
}
