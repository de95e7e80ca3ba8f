//! Roots with multiplicity, and the dimension of the space of integrable
//! quadratic differentials they define.

use num_complex::Complex64;
use royden::poly::{self, Poly};
use royden::quaddiff::dimension_of_q;

fn main() -> royden::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let cases = [
        Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0]),
        Poly::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)]),
        Poly::from_roots(c(2.0, 0.0), &[c(0.5, 0.5), c(0.5, 0.5 + 1e-9)]),
    ];
    for p in &cases {
        let rs = poly::roots(p, 1e-10)?;
        println!("{p:?}");
        for r in &rs.roots {
            println!("  {:.10} (multiplicity {})", r.location, r.multiplicity);
        }
        match dimension_of_q(p, 1e-10) {
            Ok(d) => println!("  dim Q = {d}"),
            Err(e) => println!("  dim Q: {e}"),
        }
    }
    Ok(())
}
