//! The homogeneous Hopf family: shape operators and structural checks for
//! each model.

use quadric_lab::hypersurfaces::{build_m, HypersurfaceModel};

fn main() -> quadric_lab::Result<()> {
    let n = 4;
    let models = [
        HypersurfaceModel::minimal(),
        HypersurfaceModel::equidistant(0.5)?,
        HypersurfaceModel::horocyclic(),
        HypersurfaceModel::tube(0.5)?,
        HypersurfaceModel::from_alpha(4.0)?,
    ];
    for model in models {
        let h = build_m(n, model)?;
        let failed: Vec<_> = h.shape.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        println!(
            "{:<22} alpha = {:.6}, principal curvatures {:?}, {} checks, failed {:?}",
            model.label(),
            h.alpha(),
            h.shape.spectrum.pattern(),
            h.shape.checks.len(),
            failed
        );
        println!("  aligned real structure angle {:.6}", h.aligned_phi);
    }
    Ok(())
}
