//! Tubes and equidistant hypersurfaces by three routes: closed-form Jacobi
//! transport, Killing fields along the normal geodesic, and RK4 integration.

use quadric_lab::hypersurfaces::{jacobi_transport, jacobi_transport_shape, orbit_shape, HypersurfaceKind};
use quadric_lab::oracle::{integrate_transport, ODE_STEP};
use quadric_lab::spectrum::SpectrumReport;

fn main() -> quadric_lab::Result<()> {
    let n = 4;
    for kind in [HypersurfaceKind::TubeOfP, HypersurfaceKind::Equidistant] {
        for r in [0.25, 0.5, 1.0] {
            let jt = jacobi_transport(n, kind, r)?;
            let closed = jacobi_transport_shape(n, kind, r)?;
            let killing = orbit_shape(n, kind, r)?;
            let ode = integrate_transport(&jt, ODE_STEP)?;
            let sym = (&killing + killing.transpose()) * 0.5;
            println!("{kind} r = {r}");
            println!("  closed form  {:?}", closed.signed_spectrum.pattern());
            println!("  killing      {:?}", SpectrumReport::from_symmetric(&sym).pattern());
            println!("  |ode - closed| = {:.1e}", (&ode.shape - &jt.shape).amax());
        }
    }
    Ok(())
}
