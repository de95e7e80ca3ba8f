//! Integrable quadratic differentials `g/h dx^2` on the punctured sphere
//! `P^1 \ Z(h)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, Poly, RootSet, LEADING_CUTOFF};

/// Roots of `g` lying within this distance (relative to `max(1, |root|)`)
/// of a root of `h` are treated as shared and cancelled.
pub const CANCELLATION_TOL: f64 = 1e-7;

/// Default residual tolerance used when rooting `g` and `h`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct QuadDiff {
    g: Poly,
    h: Poly,
    reduced: bool,
    g_roots: Option<RootSet>,
    h_roots: RootSet,
}

/// Wire form `{"g": [[re, im], ...], "h": [...]}`, coefficients low to high.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadDiffJson {
    pub g: Poly,
    pub h: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    pub points: Vec<(Point, i32)>,
}

impl Divisor {
    pub fn degree(&self) -> i32 {
        self.points.iter().map(|(_, k)| k).sum()
    }

    pub fn poles(&self) -> impl Iterator<Item = &(Point, i32)> {
        self.points.iter().filter(|(_, k)| *k < 0)
    }

    pub fn zeros(&self) -> impl Iterator<Item = &(Point, i32)> {
        self.points.iter().filter(|(_, k)| *k > 0)
    }

    pub fn order_at_infinity(&self) -> i32 {
        self.points
            .iter()
            .find(|(p, _)| *p == Point::Infinity)
            .map_or(0, |(_, k)| *k)
    }

    /// Points of odd order; these are the branch points of the double cover.
    pub fn odd_points(&self) -> Vec<Point> {
        self.points
            .iter()
            .filter(|(_, k)| k % 2 != 0)
            .map(|(p, _)| *p)
            .collect()
    }
}

fn check_degree_bound(g: &Poly, h: &Poly) -> Result<()> {
    let bound = h.degree() as isize - 4;
    if g.degree() as isize > bound {
        return Err(Error::DegreeBoundViolated {
            deg_g: g.degree(),
            bound,
        });
    }
    Ok(())
}

fn squarefree_roots(h: &Poly, tol: f64) -> Result<RootSet> {
    let rs = poly::roots(h, tol)?;
    if let Some(bad) = rs.roots.iter().find(|r| r.multiplicity > 1) {
        return Err(Error::NotSquarefree { root: bad.location });
    }
    Ok(rs)
}

impl QuadDiff {
    /// Checks integrability and cancels root clusters shared by `g` and `h`.
    pub fn validate(g: &Poly, h: &Poly, tol: f64) -> Result<QuadDiff> {
        let g = g.truncated(LEADING_CUTOFF);
        let h = h.truncated(LEADING_CUTOFF);
        if g.is_zero() {
            return Err(Error::ZeroNumerator);
        }
        if h.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        check_degree_bound(&g, &h)?;
        let h_roots = squarefree_roots(&h, tol)?;
        if g.degree() == 0 {
            return Ok(QuadDiff {
                g,
                h,
                reduced: true,
                g_roots: None,
                h_roots,
            });
        }
        let g_roots = poly::roots(&g, tol)?;

        let mut g_left: Vec<(Complex64, usize)> = g_roots
            .roots
            .iter()
            .map(|r| (r.location, r.multiplicity))
            .collect();
        let mut h_left = h_roots.locations();
        let mut cancelled = false;
        for (loc, mult) in g_left.iter_mut() {
            let hit = h_left.iter().position(|&p| {
                (p - *loc).norm() <= CANCELLATION_TOL * loc.norm().max(p.norm()).max(1.0)
            });
            if let Some(j) = hit {
                h_left.remove(j);
                *mult -= 1;
                cancelled = true;
            }
        }
        if !cancelled {
            return Ok(QuadDiff {
                g,
                h,
                reduced: true,
                g_roots: Some(g_roots),
                h_roots,
            });
        }

        g_left.retain(|(_, m)| *m > 0);
        let g_expanded: Vec<Complex64> = g_left
            .iter()
            .flat_map(|&(loc, m)| std::iter::repeat_n(loc, m))
            .collect();
        let g_new = Poly::from_roots(g.leading(), &g_expanded);
        let h_new = Poly::from_roots(h.leading(), &h_left);
        check_degree_bound(&g_new, &h_new)?;
        let g_roots = (!g_left.is_empty()).then(|| RootSet {
            roots: g_left
                .iter()
                .map(|&(location, multiplicity)| poly::Root {
                    location,
                    multiplicity,
                })
                .collect(),
            cluster_tolerance: g_roots.cluster_tolerance,
        });
        let h_roots = RootSet {
            roots: h_left
                .iter()
                .map(|&location| poly::Root {
                    location,
                    multiplicity: 1,
                })
                .collect(),
            cluster_tolerance: h_roots.cluster_tolerance,
        };
        Ok(QuadDiff {
            g: g_new,
            h: h_new,
            reduced: true,
            g_roots,
            h_roots,
        })
    }

    pub fn from_json(json: &QuadDiffJson, tol: f64) -> Result<QuadDiff> {
        QuadDiff::validate(&json.g, &json.h, tol)
    }

    pub fn to_json(&self) -> QuadDiffJson {
        QuadDiffJson {
            g: self.g.clone(),
            h: self.h.clone(),
        }
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Finite punctures, i.e. the roots of `h`.
    pub fn poles(&self) -> Vec<Complex64> {
        self.h_roots.locations()
    }

    /// Finite zeros with multiplicity.
    pub fn zeros(&self) -> Vec<poly::Root> {
        self.g_roots
            .as_ref()
            .map(|r| r.roots.clone())
            .unwrap_or_default()
    }

    pub fn divisor(&self) -> Divisor {
        let mut points: Vec<(Point, i32)> = self
            .h_roots
            .roots
            .iter()
            .map(|r| (Point::Finite(r.location), -1))
            .collect();
        points.extend(
            self.zeros()
                .iter()
                .map(|r| (Point::Finite(r.location), r.multiplicity as i32)),
        );
        // x = 1/u, dx^2 = du^2 / u^4
        let at_infinity = self.h.degree() as i32 - self.g.degree() as i32 - 4;
        if at_infinity != 0 {
            points.push((Point::Infinity, at_infinity));
        }
        Divisor { points }
    }

    /// `lambda * q`.
    pub fn scaled(&self, lambda: Complex64) -> QuadDiff {
        let mut out = self.clone();
        out.g = self.g.scale(lambda);
        out
    }

    /// Pullback under `x -> a x + b`, denominator renormalized to be monic.
    pub fn affine_pullback(&self, a: Complex64, b: Complex64, tol: f64) -> Result<QuadDiff> {
        if a.norm() == 0.0 {
            return Err(Error::InvalidAffineMap);
        }
        let h = self.h.compose_affine(a, b);
        let g = self.g.compose_affine(a, b).scale(a * a);
        let lead = h.leading().inv();
        QuadDiff::validate(&g.scale(lead), &h.scale(lead), tol)
    }

    /// Evaluates `g(x)/h(x)`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.g.eval(x) / self.h.eval(x)
    }
}

/// `dim Q(X) = deg h - 3` for the sphere punctured at the roots of `h`.
pub fn dimension_of_q(h: &Poly, tol: f64) -> Result<usize> {
    let h = h.truncated(LEADING_CUTOFF);
    if h.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if h.degree() < 4 {
        return Err(Error::DegreeTooSmall(h.degree()));
    }
    squarefree_roots(&h, tol)?;
    Ok(h.degree() - 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_h() -> Poly {
        Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0])
    }

    #[test]
    fn quartic_boundary_is_valid() {
        let q = QuadDiff::validate(&Poly::one(), &Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]), 1e-10)
            .unwrap();
        assert!(q.is_reduced());
        let d = q.divisor();
        assert_eq!(d.poles().count(), 4);
        assert_eq!(d.zeros().count(), 0);
        assert_eq!(d.order_at_infinity(), 0);
        assert_eq!(d.degree(), -4);
    }

    #[test]
    fn linear_numerator_over_example_quintic() {
        let q = QuadDiff::validate(&Poly::from_real(&[1.0, 3.0]), &example_h(), 1e-10).unwrap();
        let d = q.divisor();
        assert_eq!(d.poles().count(), 5);
        let zeros: Vec<_> = d.zeros().collect();
        assert_eq!(zeros.len(), 1);
        match zeros[0] {
            (Point::Finite(z), 1) => assert!((z - c(-1.0 / 3.0, 0.0)).norm() < 1e-12),
            other => panic!("unexpected zero {other:?}"),
        }
        assert_eq!(d.order_at_infinity(), 0);
        assert_eq!(d.degree(), -4);
    }

    #[test]
    fn constant_over_quintic_has_zero_at_infinity() {
        let q = QuadDiff::validate(&Poly::one(), &example_h(), 1e-10).unwrap();
        let d = q.divisor();
        assert_eq!(d.poles().count(), 5);
        assert_eq!(d.order_at_infinity(), 1);
        assert_eq!(d.degree(), -4);
    }

    #[test]
    fn shared_root_is_cancelled() {
        let q = QuadDiff::validate(&Poly::from_real(&[-2.0, 1.0]), &example_h(), 1e-10).unwrap();
        assert_eq!(q.g().degree(), 0);
        assert_eq!(q.h().degree(), 4);
        assert!(q.poles().iter().all(|p| (p - c(2.0, 0.0)).norm() > 0.1));
        // g/h agrees with the original away from the cancelled point.
        let x = c(0.3, 0.7);
        let want = (x - 2.0) / example_h().eval(x);
        assert!((q.eval(x) - want).norm() < 1e-12 * want.norm());
        assert_eq!(q.divisor().degree(), -4);
    }

    #[test]
    fn validation_errors() {
        let h = example_h();
        assert_eq!(
            QuadDiff::validate(&Poly::zero(), &h, 1e-10).unwrap_err(),
            Error::ZeroNumerator
        );
        assert!(matches!(
            QuadDiff::validate(&Poly::from_real(&[0.0, 0.0, 1.0]), &h, 1e-10).unwrap_err(),
            Error::DegreeBoundViolated { deg_g: 2, bound: 1 }
        ));
        assert!(matches!(
            QuadDiff::validate(&Poly::one(), &Poly::from_real(&[1.0, 1.0]), 1e-10).unwrap_err(),
            Error::DegreeBoundViolated { .. }
        ));
        let squared = Poly::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(matches!(
            QuadDiff::validate(&Poly::one(), &squared, 1e-10).unwrap_err(),
            Error::NotSquarefree { .. }
        ));
    }

    #[test]
    fn pullback_by_doubling() {
        let q = QuadDiff::validate(&Poly::one(), &Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]), 1e-10)
            .unwrap();
        let p = q.affine_pullback(c(2.0, 0.0), c(0.0, 0.0), 1e-10).unwrap();
        // 4 / (16 x^4 - 1) written with monic denominator
        let x = c(0.4, 0.9);
        let want = c(4.0, 0.0) / (x.powi(4) * 16.0 - 1.0);
        assert!((p.eval(x) - want).norm() < 1e-13);
        assert_eq!(p.h().leading(), c(1.0, 0.0));
    }

    #[test]
    fn pullback_identity_and_translation() {
        let q = QuadDiff::validate(&Poly::from_real(&[1.0, 2.0]), &example_h(), 1e-10).unwrap();
        let id = q.affine_pullback(c(1.0, 0.0), c(0.0, 0.0), 1e-10).unwrap();
        assert_eq!(id.g(), q.g());
        assert_eq!(id.h(), q.h());

        let b = c(0.5, -1.0);
        let t = q.affine_pullback(c(1.0, 0.0), b, 1e-10).unwrap();
        for p in q.poles() {
            assert!(t.poles().iter().any(|&s| (s - (p - b)).norm() < 1e-10));
        }
        assert_eq!(
            q.affine_pullback(c(0.0, 0.0), b, 1e-10).unwrap_err(),
            Error::InvalidAffineMap
        );
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension_of_q(&example_h(), 1e-10).unwrap(), 2);
        assert_eq!(
            dimension_of_q(&Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]), 1e-10).unwrap(),
            1
        );
        let seven: Vec<Complex64> = (0..7).map(|k| c(k as f64, 0.5)).collect();
        assert_eq!(dimension_of_q(&Poly::from_roots(c(1.0, 0.0), &seven), 1e-10).unwrap(), 4);
        assert_eq!(
            dimension_of_q(&Poly::from_real(&[1.0, 0.0, 1.0]), 1e-10).unwrap_err(),
            Error::DegreeTooSmall(2)
        );
    }

    #[test]
    fn json_round_trip() {
        let q = QuadDiff::validate(&Poly::from_real(&[1.0, 2.0]), &example_h(), 1e-10).unwrap();
        let s = serde_json::to_string(&q.to_json()).unwrap();
        assert!(s.starts_with("{\"g\":[[1.0,0.0],[2.0,0.0]]"));
        let back: QuadDiffJson = serde_json::from_str(&s).unwrap();
        let q2 = QuadDiff::from_json(&back, 1e-10).unwrap();
        assert_eq!(q2.g(), q.g());
        assert_eq!(q2.h(), q.h());
    }
}
