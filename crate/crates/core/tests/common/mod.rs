#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use royden::poly::Poly;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `h(x) = (x - 2)(x^2 - 4x - 2)(x^2 + 4x + 6)`: real roots `2`, `2 +- sqrt 6`
/// and the pair `-2 +- i sqrt 2`.
pub fn example_h() -> Poly {
    Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0])
}

pub fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let z = c(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if z.norm() <= radius {
            return z;
        }
    }
}

/// `n` points in the disk of radius 2, pairwise at least `sep` apart.
pub fn separated_points(rng: &mut ChaCha8Rng, n: usize, sep: f64) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::with_capacity(n);
    while pts.len() < n {
        let z = random_complex(rng, 2.0);
        if pts.iter().all(|p| (p - z).norm() >= sep) {
            pts.push(z);
        }
    }
    pts
}

/// Random monic `h` of degree `deg` with well-separated roots and random
/// `g` of degree at most `deg - 4` whose roots stay clear of them.
pub fn random_differential(rng: &mut ChaCha8Rng, deg: usize) -> (Poly, Poly) {
    let pts = separated_points(rng, deg + deg - 4, 0.3);
    let h = Poly::from_roots(c(1.0, 0.0), &pts[..deg]);
    let g_deg = rng.gen_range(0..=deg - 4);
    let lead = random_complex(rng, 1.0) + c(0.5, 0.0);
    let g = Poly::from_roots(lead, &pts[deg..deg + g_deg]);
    (g, h)
}
