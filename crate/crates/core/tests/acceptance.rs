//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{c, example_h, random_differential, separated_points};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use royden::cover::DoubleCover;
use royden::homology::symplectic::{congruence, determinant, standard_form};
use royden::homology::{build_path_system, chain_cycles, symplectic_reduce, DEFAULT_CLEARANCE};
use royden::norm::{norm_with_periods, royden_norm, Diagnostics, NormOptions};
use royden::oracle::agm::{lattice_mismatch, period_lattice};
use royden::oracle::{direct_norm, DEFAULT_ORACLE_TOL};
use royden::periods::big_period_matrix;
use royden::poly::Poly;
use royden::quaddiff::QuadDiff;
use royden::sphere::{angular_distance_mod_pi, finite_difference_derivatives, scaled_norm, sweep, zero_free_angles};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

#[derive(Default)]
struct Shared {
    diagnostics: Vec<Diagnostics>,
    covers: Vec<QuadDiff>,
}

fn riemann_ok(d: &Diagnostics) -> bool {
    d.symmetry_defect <= 1e-6 && d.min_im_tau_eigenvalue > 1e-10
}

fn criterion_1(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let h = example_h();
    let mut cases: Vec<(String, Poly, Poly)> = vec![(
        "dx^2/(x^4-1)".into(),
        Poly::one(),
        Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]),
    )];
    for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
        cases.push((format!("({a}+{b}x)/h"), Poly::from_real(&[a, b]), h.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (g, hr) = random_differential(&mut rng, 6);
    cases.push(("random deg-6".into(), g, hr));

    let opts = NormOptions::default();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g, h) in &cases {
        let q = match QuadDiff::validate(g, h, opts.root_tol) {
            Ok(q) => q,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        let (periods, oracle) = match (norm_with_periods(&q, &opts), direct_norm(&q, DEFAULT_ORACLE_TOL)) {
            (Ok((p, _)), Ok(o)) => (p, o),
            (Err(e), _) | (_, Err(e)) => return outcome(false, format!("{name}: {e}")),
        };
        let rel = (periods.value - oracle.value).abs() / oracle.value;
        worst = worst.max(rel);
        pass &= rel <= 1e-4 && oracle.certified;
        notes.push(format!("{name} {:.8}/{:.8}", periods.value, oracle.value));
        shared.diagnostics.extend(periods.diagnostics);
        shared.covers.push(q);
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= Duration::from_secs(60);
    outcome(pass, format!("worst rel diff {worst:.2e}, {elapsed:.2?} [{}]", notes.join("; ")))
}

fn criterion_2(shared: &mut Shared) -> Outcome {
    let h = example_h();
    let opts = NormOptions::default();
    let start = Instant::now();
    let sw = match sweep(&h, 1000, &opts) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    if !sw.is_complete() {
        return outcome(false, format!("{} samples failed, first: {:?}", sw.failures.len(), sw.failures[0]));
    }
    let positive = sw.samples.iter().all(|s| s.r > 0.0 && s.r.is_finite());
    let period = (0..500)
        .map(|i| (sw.samples[i].r - sw.samples[i + 500].r).abs())
        .fold(0.0, f64::max);
    let mut unit: f64 = 0.0;
    for s in &sw.samples {
        match scaled_norm(&h, s.theta, s.r, &opts) {
            Ok(n) => unit = unit.max((n - 1.0).abs()),
            Err(e) => return outcome(false, format!("unit check at {}: {e}", s.theta)),
        }
    }
    for d in [0, 137, 250, 500, 777] {
        let th = sw.samples[d].theta;
        if let Ok(q) = QuadDiff::validate(&Poly::from_real(&[th.cos(), th.sin()]), &h, opts.root_tol) {
            shared.covers.push(q);
        }
    }
    shared.diagnostics.extend(sw.diagnostics.iter().copied());
    let pass = elapsed <= Duration::from_secs(300) && positive && period <= 1e-7 && unit <= 1e-6;
    outcome(
        pass,
        format!(
            "1000 samples in {elapsed:.2?}, min r {:.6}, pi-period defect {period:.2e}, unit defect {unit:.2e}",
            sw.samples.iter().map(|s| s.r).fold(f64::INFINITY, f64::min)
        ),
    )
}

fn criterion_3(shared: &mut Shared) -> Outcome {
    let h = example_h();
    let opts = NormOptions::default();
    let angles = match zero_free_angles(&h, opts.root_tol) {
        Ok(a) => a,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut windows: Vec<Vec<f64>> = Vec::new();
    let mut complement = Vec::new();
    for n in [250, 500, 1000, 2000] {
        let mut sw = match sweep(&h, n, &opts) {
            Ok(s) if s.is_complete() => s,
            Ok(s) => return outcome(false, format!("{n}: {} failures", s.failures.len())),
            Err(e) => return outcome(false, format!("{n}: {e}")),
        };
        if let Err(e) = finite_difference_derivatives(&mut sw.samples, 2) {
            return outcome(false, e.to_string());
        }
        shared.diagnostics.extend(sw.diagnostics.iter().copied());
        let mut per = vec![0.0f64; angles.len()];
        let mut comp: f64 = 0.0;
        for s in &sw.samples {
            let d2 = s.d2.unwrap().abs();
            for (k, a) in angles.iter().enumerate() {
                if angular_distance_mod_pi(s.theta, &[*a]) <= 0.05 {
                    per[k] = per[k].max(d2);
                }
            }
            if angular_distance_mod_pi(s.theta, &angles) >= 0.2 {
                comp = comp.max(d2);
            }
        }
        windows.push(per);
        complement.push(comp);
    }
    let increasing = (0..angles.len()).all(|k| windows.windows(2).all(|w| w[1][k] > w[0][k]));
    let change = (complement[3] - complement[2]).abs() / complement[2];
    let table: Vec<String> = (0..angles.len())
        .map(|k| {
            let col: Vec<String> = windows.iter().map(|w| format!("{:.4}", w[k])).collect();
            format!("theta*={:.4}: {}", angles[k], col.join(" < "))
        })
        .collect();
    outcome(
        increasing && change < 0.05,
        format!("{}; complement change {:.3}%", table.join("; "), 100.0 * change),
    )
}

fn criterion_4(shared: &Shared) -> Outcome {
    let bad = shared.diagnostics.iter().filter(|d| !riemann_ok(d)).count();
    let sym = shared.diagnostics.iter().map(|d| d.symmetry_defect).fold(0.0, f64::max);
    let eig = shared.diagnostics.iter().map(|d| d.min_im_tau_eigenvalue).fold(f64::INFINITY, f64::min);
    outcome(
        bad == 0 && !shared.diagnostics.is_empty(),
        format!(
            "{} period matrices, worst symmetry defect {sym:.2e}, smallest Im tau eigenvalue {eig:.3e}",
            shared.diagnostics.len()
        ),
    )
}

fn criterion_5(shared: &Shared) -> Outcome {
    let mut checked = 0;
    for q in &shared.covers {
        let cover = match DoubleCover::build(q) {
            Ok(c) => c,
            Err(e) => return outcome(false, e.to_string()),
        };
        let cb = match build_path_system(&cover, DEFAULT_CLEARANCE).and_then(|ps| chain_cycles(&ps, &cover)) {
            Ok(cb) => cb,
            Err(e) => return outcome(false, e.to_string()),
        };
        let n = cb.m.len();
        if congruence(&cb.m, &cb.s) != standard_form(n, cb.genus) || determinant(&cb.s).abs() != 1 {
            return outcome(false, format!("cover with {n} cycles failed"));
        }
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..100 {
        let n = rng.gen_range(2..=9);
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n - 1 {
            let v = rng.gen_range(-1..=1);
            m[i][i + 1] = v;
            m[i + 1][i] = -v;
        }
        let red = match symplectic_reduce(&m) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{m:?}: {e}")),
        };
        if congruence(&m, &red.basis) != standard_form(n, red.genus) || determinant(&red.basis).abs() != 1 {
            return outcome(false, format!("{m:?} not reduced"));
        }
    }
    outcome(true, format!("{checked} covers and 100 random tridiagonal forms reduce exactly"))
}

fn criterion_6() -> Outcome {
    let opts = NormOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst_h: f64 = 0.0;
    for _ in 0..20 {
        let deg = rng.gen_range(4..=7);
        let (g, h) = random_differential(&mut rng, deg);
        let lambda = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let base = royden_norm(&QuadDiff::validate(&g, &h, opts.root_tol).unwrap(), &opts);
        let scaled = royden_norm(&QuadDiff::validate(&g.scale(lambda), &h, opts.root_tol).unwrap(), &opts);
        match (base, scaled) {
            (Ok(b), Ok(s)) => worst_h = worst_h.max((s.value - lambda.norm() * b.value).abs() / s.value),
            (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
        }
    }
    let mut worst_a: f64 = 0.0;
    for _ in 0..10 {
        let deg = rng.gen_range(4..=7);
        let (g, h) = random_differential(&mut rng, deg);
        let q = QuadDiff::validate(&g, &h, opts.root_tol).unwrap();
        let a = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let moved = match q.affine_pullback(a, b, opts.root_tol) {
            Ok(m) => m,
            Err(e) => return outcome(false, e.to_string()),
        };
        match (royden_norm(&q, &opts), royden_norm(&moved, &opts)) {
            (Ok(x), Ok(y)) => worst_a = worst_a.max((x.value - y.value).abs() / x.value),
            (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
        }
    }
    outcome(
        worst_h <= 1e-8 && worst_a <= 1e-6,
        format!("homogeneity worst {worst_h:.2e} (20 cases), affine worst {worst_a:.2e} (10 cases)"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let opts = NormOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let roots = separated_points(&mut rng, 4, 0.3);
        let q = QuadDiff::validate(&Poly::one(), &Poly::from_roots(c(1.0, 0.0), &roots), opts.root_tol).unwrap();
        let cover = DoubleCover::build(&q).unwrap();
        let ps = build_path_system(&cover, opts.clearance).unwrap();
        let cb = chain_cycles(&ps, &cover).unwrap();
        let bpm = match big_period_matrix(&cover, &ps, &cb, 1e-12, 1e-6) {
            Ok(b) => b,
            Err(e) => return outcome(false, e.to_string()),
        };
        let ours = [bpm.periods[(0, 0)], bpm.periods[(0, 1)]];
        worst = worst.max(lattice_mismatch(ours, period_lattice(&cover.finite_branch)));
    }
    outcome(worst <= 1e-10, format!("10 quartics, worst lattice coordinate defect {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let q = QuadDiff::validate(&Poly::from_real(&[1.0, 1.0]), &example_h(), 1e-10).unwrap();
    let norm = |tol| {
        royden_norm(
            &q,
            &NormOptions {
                quad_tol: tol,
                ..NormOptions::default()
            },
        )
    };
    match (norm(1e-8), norm(1e-10)) {
        (Ok(a), Ok(b)) => {
            let rel = (a.value - b.value).abs() / b.value;
            outcome(rel < 1e-8, format!("norm {:.14} vs {:.14}, rel change {rel:.2e}", a.value, b.value))
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

fn main() {
    let mut shared = Shared::default();
    let mut results = Vec::new();
    let mut run = |n: usize, name: &str, o: Outcome| {
        println!("{} criterion {n} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    run(1, "oracle agreement", criterion_1(&mut shared));
    run(2, "sweep reproduction", criterion_2(&mut shared));
    run(3, "smoothness breakdown", criterion_3(&mut shared));
    run(4, "Riemann relations", criterion_4(&shared));
    run(5, "symplectic exactness", criterion_5(&shared));
    run(6, "invariance suite", criterion_6());
    run(7, "genus-one AGM oracle", criterion_7());
    run(8, "quadrature convergence", criterion_8());
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
