//! Dump the branch-cut chain for a set of points, including detours around
//! points that sit close to a segment.

use num_complex::Complex64;
use royden::homology::{PathSystem, Piece};

fn main() -> royden::Result<()> {
    let pts = [
        Complex64::new(-2.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 0.05),
        Complex64::new(0.0, 1.5),
    ];
    println!("greedy chain:");
    show(&PathSystem::build(&pts, 0.25)?)?;
    // forcing the long edge first makes it pass 0.05 from the third point
    println!("input order:");
    show(&PathSystem::with_order(&pts, &[0, 1, 3, 2], 0.25)?)?;
    Ok(())
}

fn show(ps: &PathSystem) -> royden::Result<()> {
    ps.check()?;
    for e in &ps.edges {
        print!("  {:.2} -> {:.2}:", ps.points[e.from], ps.points[e.to]);
        for p in &e.pieces {
            match p {
                Piece::Segment { .. } => print!(" segment"),
                Piece::Arc { radius, sweep, .. } => print!(" arc(r={radius:.3}, sweep={sweep:.3})"),
            }
        }
        println!();
    }
    Ok(())
}
