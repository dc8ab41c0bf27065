//! Almost contact structure induced on a Hopf hypersurface and the two
//! Hopf criteria.

use quadric_lab::contact::{contact_data, normal_jacobi_on_m};
use quadric_lab::hypersurfaces::{build_m, HypersurfaceModel};

fn main() -> quadric_lab::Result<()> {
    let h = build_m(4, HypersurfaceModel::tube(0.5)?)?;
    let c = contact_data(&h);
    for check in &c.checks {
        println!("[{}] {} ({:.1e})", if check.pass { "ok" } else { "FAIL" }, check.name, check.residual);
    }
    let (jacobi, checks) = normal_jacobi_on_m(&h)?;
    println!("normal Jacobi operator is {}x{}", jacobi.nrows(), jacobi.ncols());
    for check in checks {
        println!("[{}] {}", if check.pass { "ok" } else { "FAIL" }, check.name);
    }
    Ok(())
}
