//! Norm of a few differentials on the sphere punctured at the roots of the
//! example quintic, computed from the periods of the double cover.

use royden::norm::{norm_of, NormOptions};
use royden::poly::Poly;

fn main() -> royden::Result<()> {
    let h = Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0]);
    let opts = NormOptions::default();
    for (label, g) in [
        ("1", Poly::from_real(&[1.0])),
        ("x", Poly::from_real(&[0.0, 1.0])),
        ("1 + x", Poly::from_real(&[1.0, 1.0])),
        ("1 - x", Poly::from_real(&[1.0, -1.0])),
    ] {
        let r = norm_of(&g, &h, &opts)?;
        println!("g = {label:6} genus {} norm {:.12} (+- {:.1e})", r.genus, r.value, r.error_estimate);
    }
    Ok(())
}
