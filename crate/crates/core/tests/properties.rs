mod common;

use std::f64::consts::TAU;

use common::{c, random_complex, random_differential, separated_points};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use royden::cover::DoubleCover;
use royden::homology::symplectic::{congruence, determinant, standard_form};
use royden::homology::{symplectic_reduce, PathSystem, Piece, DEFAULT_CLEARANCE};
use royden::norm::{royden_norm, NormOptions};
use royden::oracle::direct_norm;
use royden::periods::tracked_sqrt;
use royden::poly::{self, Poly};
use royden::quaddiff::{QuadDiff, DEFAULT_ROOT_TOL};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn conj(p: &Poly) -> Poly {
    Poly::new(p.coeffs().iter().map(|z| z.conj()).collect())
}

fn norm(g: &Poly, h: &Poly) -> f64 {
    let q = QuadDiff::validate(g, h, DEFAULT_ROOT_TOL).unwrap();
    royden_norm(&q, &NormOptions::default()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_round_trip(seed in any::<u64>(), n in 1usize..9) {
        let mut r = rng(seed);
        let pts = separated_points(&mut r, n, 0.1);
        let lead = random_complex(&mut r, 1.0) + c(1.5, 0.0);
        let found = poly::roots(&Poly::from_roots(lead, &pts), DEFAULT_ROOT_TOL).unwrap();
        prop_assert!(found.is_simple());
        prop_assert_eq!(found.total_multiplicity(), n);
        for p in &pts {
            let d = found.locations().iter().map(|z| (z - p).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-9, "root {p} missed by {d}");
        }
    }

    #[test]
    fn reduction_is_unimodular_congruence(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n - 1 {
            let v = r.gen_range(-1..=1);
            m[i][i + 1] = v;
            m[i + 1][i] = -v;
        }
        let red = symplectic_reduce(&m).unwrap();
        prop_assert_eq!(congruence(&m, &red.basis), standard_form(n, red.genus));
        prop_assert_eq!(determinant(&red.basis).abs(), 1);
    }

    #[test]
    fn path_systems_keep_clearance(seed in any::<u64>(), n in 3usize..10, clearance in 0.05f64..0.45) {
        let pts = separated_points(&mut rng(seed), n, 0.05);
        let ps = PathSystem::build(&pts, clearance).unwrap();
        prop_assert_eq!(ps.edges.len(), n - 1);
        let mut order = ps.order.clone();
        order.sort_unstable();
        prop_assert_eq!(order, (0..n).collect::<Vec<_>>());
        ps.check().unwrap();
        for e in &ps.edges {
            prop_assert_eq!(e.pieces.first().unwrap().start(), ps.points[e.from]);
            prop_assert_eq!(e.pieces.last().unwrap().end(), ps.points[e.to]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homogeneous_of_degree_one(seed in any::<u64>(), deg in 4usize..8) {
        let mut r = rng(seed);
        let (g, h) = random_differential(&mut r, deg);
        let lambda = random_complex(&mut r, 4.0) + c(0.1, 0.0);
        let base = norm(&g, &h);
        let scaled = norm(&g.scale(lambda), &h);
        prop_assert!((scaled - lambda.norm() * base).abs() <= 1e-8 * scaled);
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), deg in 5usize..8) {
        let mut r = rng(seed);
        let (g1, h) = random_differential(&mut r, deg);
        let g2 = Poly::new((0..=deg - 4).map(|_| random_complex(&mut r, 1.0)).collect());
        let sum = &g1 + &g2;
        prop_assume!(!sum.is_zero());
        let lhs = norm(&sum, &h);
        prop_assert!(lhs <= norm(&g1, &h) + norm(&g2, &h) + 1e-8 * lhs);
    }

    #[test]
    fn invariant_under_affine_maps(seed in any::<u64>(), deg in 4usize..8) {
        let mut r = rng(seed);
        let (g, h) = random_differential(&mut r, deg);
        let q = QuadDiff::validate(&g, &h, DEFAULT_ROOT_TOL).unwrap();
        let a = Complex64::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..TAU));
        let b = random_complex(&mut r, 1.0);
        let moved = q.affine_pullback(a, b, DEFAULT_ROOT_TOL).unwrap();
        let opts = NormOptions::default();
        let (x, y) = (royden_norm(&q, &opts).unwrap().value, royden_norm(&moved, &opts).unwrap().value);
        prop_assert!((x - y).abs() <= 1e-6 * x);
    }

    #[test]
    fn conjugate_differential_has_same_norm(seed in any::<u64>(), deg in 4usize..7) {
        let (g, h) = random_differential(&mut rng(seed), deg);
        prop_assert!((norm(&g, &h) - norm(&conj(&g), &conj(&h))).abs() <= 1e-8 * norm(&g, &h));
    }

    #[test]
    fn loop_around_one_branch_point_flips_sheet(seed in any::<u64>(), deg in 4usize..8) {
        let (g, h) = random_differential(&mut rng(seed), deg);
        let cover = DoubleCover::build(&QuadDiff::validate(&g, &h, DEFAULT_ROOT_TOL).unwrap()).unwrap();
        let b = &cover.finite_branch;
        let spacing = |i: usize| b.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, z)| (z - b[i]).norm()).fold(f64::INFINITY, f64::min);
        let loop_around = |i: usize, turns: f64| {
            vec![Piece::Arc { center: b[i], radius: 0.5 * spacing(i), start_angle: 0.3, sweep: turns * TAU }]
        };
        let track = tracked_sqrt(&cover, &loop_around(0, 1.0)).unwrap();
        let (first, last) = (track.first().unwrap().1, track.last().unwrap().1);
        prop_assert!((first + last).norm() <= 1e-9 * first.norm());
        let track = tracked_sqrt(&cover, &loop_around(0, 2.0)).unwrap();
        let (first, last) = (track.first().unwrap().1, track.last().unwrap().1);
        prop_assert!((first - last).norm() <= 1e-9 * first.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn oracle_respects_conjugation(seed in any::<u64>()) {
        let (g, h) = random_differential(&mut rng(seed), 5);
        let area = |g: &Poly, h: &Poly| {
            direct_norm(&QuadDiff::validate(g, h, DEFAULT_ROOT_TOL).unwrap(), 1e-5).unwrap().value
        };
        let (a, b) = (area(&g, &h), area(&conj(&g), &conj(&h)));
        prop_assert!((a - b).abs() <= 3e-5 * a, "{a} vs {b}");
    }
}

#[test]
fn default_clearance_is_admissible() {
    let pts = separated_points(&mut rng(7), 6, 0.2);
    PathSystem::build(&pts, DEFAULT_CLEARANCE).unwrap().check().unwrap();
}
