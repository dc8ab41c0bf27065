//! Ricci tensor of the Hopf family: eigenvalues, pseudo-Einstein property and
//! the constant scalar curvature.

use quadric_lab::contact::{expected_scalar, ricci};
use quadric_lab::hypersurfaces::HypersurfaceModel;

fn main() -> quadric_lab::Result<()> {
    let n = 5;
    println!("expected scalar curvature {}", expected_scalar(n));
    for alpha in [0.0, 1.0, 2.0, 4.0, 6.0] {
        let r = ricci(HypersurfaceModel::from_alpha(alpha)?, n)?;
        println!(
            "alpha = {alpha}: eigenvalues {:?}, pseudo-Einstein {}, scalar {:.10}, gauss residual {:.1e}",
            r.eigenvalues(),
            r.pseudo_einstein,
            r.scalar,
            r.gauss_residual
        );
    }
    Ok(())
}
