//! Cross-check the period route against direct adaptive integration of |q|.

use std::time::Instant;

use royden::norm::{royden_norm, NormOptions};
use royden::oracle::{direct_norm_with, OracleOptions};
use royden::poly::Poly;
use royden::quaddiff::QuadDiff;

fn main() -> royden::Result<()> {
    let cases = [
        ("dx^2/(x^4 - 1)", Poly::one(), Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0])),
        ("(1 + x) dx^2/h", Poly::from_real(&[1.0, 1.0]), Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0])),
    ];
    for (label, g, h) in cases {
        let q = QuadDiff::validate(&g, &h, 1e-10)?;
        let periods = royden_norm(&q, &NormOptions::default())?;
        for tol in [1e-4, 1e-5, 1e-6] {
            let t = Instant::now();
            let area = direct_norm_with(&q, &OracleOptions { tol, ..OracleOptions::default() })?;
            println!(
                "{label}: periods {:.10}  direct {:.10} at tol {tol:.0e} ({} cells, {:.1?}, rel diff {:.1e})",
                periods.value,
                area.value,
                area.cells_used,
                t.elapsed(),
                (area.value - periods.value).abs() / periods.value
            );
        }
    }
    Ok(())
}
