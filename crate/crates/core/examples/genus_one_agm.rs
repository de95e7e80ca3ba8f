//! Compare the computed periods of dx/sqrt(quartic) with the lattice from the
//! arithmetic-geometric mean.

use num_complex::Complex64;
use royden::cover::DoubleCover;
use royden::homology::{build_path_system, chain_cycles, DEFAULT_CLEARANCE};
use royden::oracle::agm::{lattice_coords, lattice_mismatch, period_lattice};
use royden::periods::big_period_matrix;
use royden::poly::Poly;
use royden::quaddiff::QuadDiff;

fn main() -> royden::Result<()> {
    let roots = [
        Complex64::new(-1.3, 0.2),
        Complex64::new(0.4, 1.1),
        Complex64::new(1.2, -0.3),
        Complex64::new(0.1, -1.4),
    ];
    let q = QuadDiff::validate(&Poly::one(), &Poly::from_roots(Complex64::new(1.0, 0.0), &roots), 1e-10)?;
    let cover = DoubleCover::build(&q)?;
    let ps = build_path_system(&cover, DEFAULT_CLEARANCE)?;
    let cb = chain_cycles(&ps, &cover)?;
    let bpm = big_period_matrix(&cover, &ps, &cb, 1e-12, 1e-6)?;

    let ours = [bpm.periods[(0, 0)], bpm.periods[(0, 1)]];
    let agm = period_lattice(&cover.finite_branch);
    println!("periods: {:.12} {:.12}", ours[0], ours[1]);
    println!("AGM    : {:.12} {:.12}", agm[0], agm[1]);
    for w in ours {
        let [m, n] = lattice_coords(w, agm[0], agm[1]);
        println!("  {w:.6} = {m:.12} w1 + {n:.12} w2");
    }
    println!("max distance from integer coordinates: {:.2e}", lattice_mismatch(ours, agm));
    Ok(())
}
