//! Sample the unit sphere of Q(X) for the example quintic and locate the
//! directions where its curvature blows up.
//!
//! `cargo run --release --example sphere_sweep -- 2000 > sweep.csv`

use royden::norm::NormOptions;
use royden::poly::Poly;
use royden::sphere::{self, angular_distance_mod_pi};

fn main() -> royden::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let h = Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0]);
    let angles = sphere::zero_free_angles(&h, 1e-10)?;
    let mut sw = sphere::sweep(&h, samples, &NormOptions::default())?;
    sphere::finite_difference_derivatives(&mut sw.samples, 3)?;

    for a in &angles {
        let peak = sw
            .samples
            .iter()
            .filter(|s| angular_distance_mod_pi(s.theta, &[*a]) <= 0.05)
            .map(|s| s.d2.unwrap().abs())
            .fold(0.0, f64::max);
        eprintln!("theta* = {a:.6}: max |r''| nearby = {peak:.4}");
    }
    sphere::write_csv(std::io::stdout().lock(), &sw.samples, &sw.failures)
}
