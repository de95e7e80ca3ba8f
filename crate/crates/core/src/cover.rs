//! The abelian double cover of `q = g/h dx^2`.
//!
//! On the curve `z^2 = g h` the form `omega = g dx / z` squares to the pullback
//! of `q`. Even-multiplicity factors of `g` are split off so the curve is
//! written in normalized form `w^2 = p` with `p` monic and squarefree:
//!
//! ```text
//! g h = c * s^2 * p,   z = sqrt(c) * s * w,   omega = (g / s) / sqrt(c) * dx / w
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quaddiff::QuadDiff;

#[derive(Debug, Clone)]
pub struct DoubleCover {
    /// Monic squarefree defining polynomial of `w^2 = p`.
    pub p: Poly,
    /// `c` in `g h = c s^2 p`.
    pub scale: Complex64,
    /// Roots of `p`.
    pub finite_branch: Vec<Complex64>,
    pub branched_at_infinity: bool,
    pub genus: usize,
    /// The numerator `g` of the differential.
    pub numerator_g: Poly,
    /// `s`, the square factor removed by normalization.
    pub square_factor: Poly,
    /// `g / s`; `omega = reduced_numerator / sqrt(scale) * dx / w`.
    pub reduced_numerator: Poly,
}

impl DoubleCover {
    pub fn build(q: &QuadDiff) -> Result<DoubleCover> {
        let one = Complex64::new(1.0, 0.0);
        let zeros = q.zeros();
        let mut branch = q.poles();
        let mut square = Vec::new();
        let mut kept = Vec::new();
        for z in &zeros {
            if z.multiplicity % 2 == 1 {
                branch.push(z.location);
            }
            square.extend(std::iter::repeat_n(z.location, z.multiplicity / 2));
            kept.extend(std::iter::repeat_n(z.location, z.multiplicity.div_ceil(2)));
        }
        let n = branch.len();
        if n < 3 {
            return Err(Error::DegenerateCover(n));
        }
        let branched_at_infinity = n % 2 == 1;
        let genus = n.div_ceil(2) - 1;

        let (square_factor, reduced_numerator) = if square.is_empty() {
            (Poly::one(), q.g().clone())
        } else {
            (
                Poly::from_roots(one, &square),
                Poly::from_roots(q.g().leading(), &kept),
            )
        };
        if reduced_numerator.degree() + 1 > genus {
            return Err(Error::DegreeOverflow {
                degree: reduced_numerator.degree(),
                max: genus as isize - 1,
            });
        }
        Ok(DoubleCover {
            p: Poly::from_roots(one, &branch),
            scale: q.g().leading() * q.h().leading(),
            finite_branch: branch,
            branched_at_infinity,
            genus,
            numerator_g: q.g().clone(),
            square_factor,
            reduced_numerator,
        })
    }

    /// Number of branch points, counting infinity.
    pub fn branch_count(&self) -> usize {
        self.finite_branch.len() + usize::from(self.branched_at_infinity)
    }

    /// Dimension of the holomorphic basis `x^k dx / w`, `0 <= k < genus`.
    pub fn holomorphic_basis_degree(&self) -> usize {
        self.genus
    }

    /// `z(x) = sqrt(c) s(x) w(x)` for one choice of `w = sqrt(p(x))`.
    pub fn z_value(&self, x: Complex64) -> Complex64 {
        self.scale.sqrt() * self.square_factor.eval(x) * self.p.eval(x).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaddiff::Point;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_h() -> Poly {
        Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0])
    }

    fn cover(g: Poly, h: Poly) -> DoubleCover {
        DoubleCover::build(&QuadDiff::validate(&g, &h, 1e-10).unwrap()).unwrap()
    }

    #[test]
    fn constant_over_quintic_is_branched_at_infinity() {
        let cv = cover(Poly::one(), example_h());
        assert_eq!(cv.p.degree(), 5);
        assert!(cv.branched_at_infinity);
        assert_eq!(cv.branch_count(), 6);
        assert_eq!(cv.genus, 2);
        assert_eq!(cv.holomorphic_basis_degree(), 2);
    }

    #[test]
    fn linear_over_quintic_is_even_sextic() {
        let cv = cover(Poly::from_real(&[0.7, -1.3]), example_h());
        assert_eq!(cv.p.degree(), 6);
        assert!(!cv.branched_at_infinity);
        assert_eq!(cv.genus, 2);
    }

    #[test]
    fn cancelled_direction_is_elliptic() {
        let cv = cover(Poly::from_real(&[-2.0, 1.0]), example_h());
        assert_eq!(cv.finite_branch.len(), 4);
        assert_eq!(cv.genus, 1);
        assert_eq!(cv.holomorphic_basis_degree(), 1);
    }

    #[test]
    fn septic_constant_is_genus_three() {
        let roots: Vec<_> = (0..7).map(|k| c(k as f64 - 3.0, 0.3 * k as f64)).collect();
        let cv = cover(Poly::one(), Poly::from_roots(c(1.0, 0.0), &roots));
        assert_eq!(cv.genus, 3);
        assert_eq!(cv.holomorphic_basis_degree(), 3);
    }

    #[test]
    fn omega_squared_is_q() {
        let q = QuadDiff::validate(&Poly::from_real(&[0.4, 1.1]), &example_h().scale(c(2.0, -1.0)), 1e-10)
            .unwrap();
        let cv = DoubleCover::build(&q).unwrap();
        for x in [c(0.3, 0.2), c(-5.0, 1.0), c(7.0, -3.0)] {
            let omega = q.g().eval(x) / cv.z_value(x);
            let got = omega * omega;
            let want = q.eval(x);
            assert!((got - want).norm() <= 1e-10 * want.norm(), "{got} vs {want}");
        }
    }

    #[test]
    fn square_factor_is_split_off() {
        // g = (x - 1)^2 over a sextic: x = 1 is a double zero, not a branch point.
        let roots: Vec<_> = (0..6).map(|k| c(k as f64 * 0.9 - 2.0, (k % 3) as f64 - 1.0)).collect();
        let h = Poly::from_roots(c(1.0, 0.0), &roots);
        let g = Poly::from_roots(c(3.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0)]);
        let q = QuadDiff::validate(&g, &h, 1e-10).unwrap();
        let cv = DoubleCover::build(&q).unwrap();
        assert_eq!(cv.finite_branch.len(), 6);
        assert_eq!(cv.genus, 2);
        assert_eq!(cv.square_factor.degree(), 1);
        assert_eq!(cv.reduced_numerator.degree(), 1);
        let x = c(0.25, 0.5);
        let omega = q.g().eval(x) / cv.z_value(x);
        assert!((omega * omega - q.eval(x)).norm() < 1e-10 * q.eval(x).norm());
    }

    #[test]
    fn branch_set_is_odd_part_of_divisor() {
        let q = QuadDiff::validate(&Poly::from_real(&[0.5, 2.0]), &example_h(), 1e-10).unwrap();
        let cv = DoubleCover::build(&q).unwrap();
        let odd = q.divisor().odd_points();
        let finite_odd: Vec<_> = odd
            .iter()
            .filter_map(|p| match p {
                Point::Finite(z) => Some(*z),
                Point::Infinity => None,
            })
            .collect();
        assert_eq!(finite_odd.len(), cv.finite_branch.len());
        for z in finite_odd {
            assert!(cv.finite_branch.iter().any(|b| (b - z).norm() < 1e-12));
        }
        assert_eq!(odd.contains(&Point::Infinity), cv.branched_at_infinity);
    }
}
