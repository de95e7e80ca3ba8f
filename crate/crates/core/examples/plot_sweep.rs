//! Render the polar and derivative plots of a small sweep into the working
//! directory.

use royden::norm::NormOptions;
use royden::poly::Poly;
use royden::{plot, sphere};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = Poly::from_real(&[24.0, 52.0, -8.0, -12.0, -2.0, 1.0]);
    let mut sw = sphere::sweep(&h, 720, &NormOptions::default())?;
    sphere::finite_difference_derivatives(&mut sw.samples, 3)?;
    std::fs::write("sphere_polar.svg", plot::polar_svg(&sw.samples))?;
    std::fs::write("sphere_derivatives.svg", plot::derivatives_svg(&sw.samples))?;
    println!("wrote sphere_polar.svg and sphere_derivatives.svg");
    Ok(())
}
