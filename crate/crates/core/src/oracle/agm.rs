//! Genus-one period lattices from the complex arithmetic-geometric mean.

use std::f64::consts::PI;

use num_complex::Complex64;

const AGM_MAX_ITER: usize = 100;

/// `M(a, b)` taking at each step the square root nearer `(a + b) / 2`.
pub fn agm(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..AGM_MAX_ITER {
        let m = 0.5 * (a + b);
        let mut r = (a * b).sqrt();
        if (m - r).norm() > (m + r).norm() {
            r = -r;
        }
        let done = (m - r).norm() <= 4.0 * f64::EPSILON * m.norm();
        a = m;
        b = r;
        if done {
            break;
        }
    }
    0.5 * (a + b)
}

/// Generators of the period lattice of `dt / y` on `y^2 = 4 prod (t - e_j)`.
pub fn cubic_lattice(e: [Complex64; 3]) -> [Complex64; 2] {
    let a = (e[0] - e[2]).sqrt();
    let mut b = (e[0] - e[1]).sqrt();
    let mut c = (e[1] - e[2]).sqrt();
    if (a - b).norm() > (a + b).norm() {
        b = -b;
    }
    if (a - c).norm() > (a + c).norm() {
        c = -c;
    }
    [PI / agm(a, b), Complex64::i() * PI / agm(a, c)]
}

/// Generators of the period lattice of `dx / w` on `w^2 = prod (x - e_j)` for
/// three or four distinct roots.
pub fn period_lattice(roots: &[Complex64]) -> [Complex64; 2] {
    match *roots {
        [e1, e2, e3] => cubic_lattice([e1, e2, e3]).map(|w| 2.0 * w),
        [e1, e2, e3, e4] => {
            // x = e4 + 1/t turns dx / w into -(2 / sqrt(C)) dt / y
            let t = [e1, e2, e3].map(|e| (e - e4).inv());
            let c: Complex64 = [e1, e2, e3].iter().map(|e| e4 - e).product();
            let s = 2.0 / c.sqrt();
            cubic_lattice(t).map(|w| s * w)
        }
        _ => panic!("period_lattice needs 3 or 4 roots, got {}", roots.len()),
    }
}

/// Real coordinates of `w` in the basis `(b1, b2)`.
pub fn lattice_coords(w: Complex64, b1: Complex64, b2: Complex64) -> [f64; 2] {
    let det = b1.re * b2.im - b1.im * b2.re;
    [(w.re * b2.im - w.im * b2.re) / det, (b1.re * w.im - b1.im * w.re) / det]
}

/// Worst deviation from an integer change of basis between two lattice
/// bases; the bases span the same lattice when this is small and the
/// coordinate matrix has determinant `+-1`.
pub fn lattice_mismatch(ours: [Complex64; 2], reference: [Complex64; 2]) -> f64 {
    let c1 = lattice_coords(ours[0], reference[0], reference[1]);
    let c2 = lattice_coords(ours[1], reference[0], reference[1]);
    let frac = c1
        .iter()
        .chain(&c2)
        .map(|x| (x - x.round()).abs())
        .fold(0.0, f64::max);
    let det = c1[0].round() * c2[1].round() - c1[1].round() * c2[0].round();
    if det.abs() != 1.0 {
        return f64::INFINITY;
    }
    frac
}
