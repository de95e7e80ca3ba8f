//! One-dimensional quadrature rules.
//!
//! [`tanh_sinh`] integrates vector-valued complex integrands over `[0, 1]`
//! whose components may blow up like `u^(-1/2)` at either end. The
//! integrand receives both `u` and `1 - u`, each computed without
//! cancellation, so factors such as `sqrt(u)` stay accurate right down to the
//! extreme nodes.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const T_MAX: f64 = 4.0;
const BASE_STEP: f64 = 0.5;
pub const MAX_LEVEL: usize = 9;
const MIN_LEVEL: usize = 3;
const MAX_SPLIT_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy)]
struct Node {
    u: f64,
    one_minus_u: f64,
    weight: f64,
}

fn node(t: f64) -> Node {
    let v = FRAC_PI_2 * t.sinh();
    let cv = v.cosh();
    Node {
        u: 1.0 / (1.0 + (-2.0 * v).exp()),
        one_minus_u: 1.0 / (1.0 + (2.0 * v).exp()),
        weight: 0.5 * FRAC_PI_2 * t.cosh() / (cv * cv),
    }
}

/// Nodes new at each level: level 0 holds every multiple of the base step,
/// level `l > 0` the odd multiples of `BASE_STEP / 2^l`.
fn levels() -> &'static [Vec<Node>] {
    static TABLE: OnceLock<Vec<Vec<Node>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(MAX_LEVEL + 1);
        let k0 = (T_MAX / BASE_STEP) as i64;
        table.push((-k0..=k0).map(|k| node(k as f64 * BASE_STEP)).collect());
        for level in 1..=MAX_LEVEL {
            let h = BASE_STEP / (1u64 << level) as f64;
            let kmax = (T_MAX / h) as i64;
            let nodes = (-kmax..=kmax)
                .filter(|k| k.rem_euclid(2) == 1)
                .map(|k| node(k as f64 * h))
                .collect();
            table.push(nodes);
        }
        table
    })
}

#[derive(Debug, Clone)]
pub struct Estimate {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
}

impl Estimate {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// `tol` is applied per component as `err <= tol * max(1, |value|)`.
fn within(values: &[Complex64], errors: &[f64], tol: f64) -> bool {
    values
        .iter()
        .zip(errors)
        .all(|(v, e)| *e <= tol * v.norm().max(1.0))
}

/// Tanh-sinh rule on the sub-interval `[lo, hi]` of `[0, 1]`, refining the
/// step until two successive levels agree.
fn tanh_sinh_interval<F>(f: &F, dim: usize, lo: f64, hi: f64, tol: f64) -> (Estimate, bool)
where
    F: Fn(f64, f64, &mut [Complex64]),
{
    let width = hi - lo;
    let upper_gap = 1.0 - hi;
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    let mut prev: Option<Vec<Complex64>> = None;
    let mut evaluations = 0;
    let mut last = Estimate {
        values: vec![Complex64::new(0.0, 0.0); dim],
        errors: vec![f64::INFINITY; dim],
        evaluations: 0,
    };
    for (level, nodes) in levels().iter().enumerate() {
        for nd in nodes {
            let u = lo + width * nd.u;
            let one_minus_u = upper_gap + width * nd.one_minus_u;
            f(u, one_minus_u, &mut buf);
            evaluations += 1;
            let w = nd.weight * width;
            for (s, b) in sum.iter_mut().zip(&buf) {
                if b.is_finite() {
                    *s += b * w;
                }
            }
        }
        let h = BASE_STEP / (1u64 << level) as f64;
        let current: Vec<Complex64> = sum.iter().map(|s| s * h).collect();
        if let Some(p) = &prev {
            let errors: Vec<f64> = current.iter().zip(p).map(|(a, b)| (a - b).norm()).collect();
            last = Estimate {
                values: current.clone(),
                errors,
                evaluations,
            };
            if level >= MIN_LEVEL && within(&last.values, &last.errors, tol) {
                return (last, true);
            }
        }
        prev = Some(current);
    }
    (last, false)
}

fn tanh_sinh_adaptive<F>(f: &F, dim: usize, lo: f64, hi: f64, tol: f64, depth: usize) -> Result<Estimate>
where
    F: Fn(f64, f64, &mut [Complex64]),
{
    let (est, ok) = tanh_sinh_interval(f, dim, lo, hi, tol);
    if ok {
        return Ok(est);
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::QuadratureStalled {
            estimate: est.max_error(),
            tol,
        });
    }
    let mid = 0.5 * (lo + hi);
    let left = tanh_sinh_adaptive(f, dim, lo, mid, 0.5 * tol, depth + 1)?;
    let right = tanh_sinh_adaptive(f, dim, mid, hi, 0.5 * tol, depth + 1)?;
    Ok(Estimate {
        values: left.values.iter().zip(&right.values).map(|(a, b)| a + b).collect(),
        errors: left.errors.iter().zip(&right.errors).map(|(a, b)| a + b).collect(),
        evaluations: est.evaluations + left.evaluations + right.evaluations,
    })
}

/// Integrates `f` over `[0, 1]`. `f(u, 1 - u, out)` fills `out` with the
/// `dim` integrand components.
pub fn tanh_sinh<F>(f: F, dim: usize, tol: f64) -> Result<Estimate>
where
    F: Fn(f64, f64, &mut [Complex64]),
{
    tanh_sinh_adaptive(&f, dim, 0.0, 1.0, tol, 0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn scalar<F: Fn(f64, f64) -> Complex64>(f: F, tol: f64) -> Estimate {
        tanh_sinh(move |u, v, out: &mut [Complex64]| out[0] = f(u, v), 1, tol).unwrap()
    }

    #[test]
    fn arcsine_integral() {
        // x = 2u - 1: int_{-1}^{1} dx / sqrt(1 - x^2) with 1 - x^2 = 4 u (1 - u)
        let est = scalar(|u, v| Complex64::new(2.0 / (4.0 * u * v).sqrt(), 0.0), 1e-12);
        assert!((est.values[0].re - PI).abs() < 1e-13, "{:?}", est);
    }

    #[test]
    fn x_squared_over_arcsine() {
        let est = scalar(
            |u, v| {
                let x = if u < 0.5 { 2.0 * u - 1.0 } else { 1.0 - 2.0 * v };
                Complex64::new(2.0 * x * x / (4.0 * u * v).sqrt(), 0.0)
            },
            1e-12,
        );
        assert!((est.values[0].re - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_polynomial_is_exact() {
        let est = scalar(|u, _| Complex64::new(3.0 * u * u, 0.0), 1e-14);
        assert!((est.values[0].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nearby_pole_forces_splitting_but_converges() {
        // int_0^1 du / (u - a) = log(1 - a) - log(-a), pole 0.02 off the interval
        let a = Complex64::new(0.0, 0.02);
        let est = scalar(move |u, _| (Complex64::new(u, 0.0) - a).inv(), 1e-12);
        let want = (Complex64::new(1.0, 0.0) - a).ln() - (-a).ln();
        assert!((est.values[0] - want).norm() < 1e-11);
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        for n in [1, 2, 5, 8, 16] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let want = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((got - want).abs() < 1e-13, "n={n}");
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }
}
