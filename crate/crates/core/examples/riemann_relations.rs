//! Period matrix of a genus-3 hyperelliptic cover and its Riemann relations.

use num_complex::Complex64;
use royden::cover::DoubleCover;
use royden::homology::{build_path_system, chain_cycles, DEFAULT_CLEARANCE};
use royden::periods::big_period_matrix;
use royden::poly::Poly;
use royden::quaddiff::QuadDiff;

fn main() -> royden::Result<()> {
    let roots: Vec<Complex64> = (0..8)
        .map(|k| Complex64::from_polar(1.0 + 0.1 * k as f64, 0.7 * k as f64))
        .collect();
    let q = QuadDiff::validate(&Poly::one(), &Poly::from_roots(Complex64::new(1.0, 0.0), &roots), 1e-10)?;
    let cover = DoubleCover::build(&q)?;
    let ps = build_path_system(&cover, DEFAULT_CLEARANCE)?;
    let cb = chain_cycles(&ps, &cover)?;
    let bpm = big_period_matrix(&cover, &ps, &cb, 1e-12, 1e-6)?;

    println!("genus {}, {} chain edges", bpm.genus, ps.edges.len());
    println!("cycle basis S (columns are a1..ag, b1..bg, then the kernel):");
    for row in &cb.s {
        println!("  {row:?}");
    }
    println!("tau = {:.6}", bpm.riemann.tau);
    println!(
        "|tau - tau^T| = {:.2e}, smallest eigenvalue of Im tau = {:.4}",
        bpm.riemann.symmetry_defect, bpm.riemann.min_eigenvalue
    );
    Ok(())
}
