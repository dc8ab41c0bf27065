//! The totally geodesic complex hypersurface `P` and its shape operator for
//! normals around the normal circle.

use quadric_lab::hypersurfaces::build_p;

fn main() -> quadric_lab::Result<()> {
    let n = 4;
    for phi in [0.0, 0.7, std::f64::consts::PI] {
        let p = build_p(n, phi)?;
        println!("phi = {phi:.3}: dim T P = {}, spectrum {:?}", p.frame.len(), p.shape.spectrum.pattern());
        for c in &p.shape.checks {
            println!("  [{}] {} ({:.1e})", if c.pass { "ok" } else { "FAIL" }, c.name, c.residual);
        }
        println!("  eigenspaces: +1 dim {}, -1 dim {}", p.eigenspace(1.0).dim(), p.eigenspace(-1.0).dim());
    }
    Ok(())
}
