//! Curvature of the quadric at the base point: Jacobi spectra of singular
//! and regular unit vectors, and the Einstein constant.

use quadric_lab::quadric::{
    classify_singular, jacobi_closed_form, jacobi_spectrum, ricci_operator, singular_vector,
};
use quadric_lab::spectrum::SpectrumReport;

fn main() -> quadric_lab::Result<()> {
    let n = 5;
    for t in [0.0, 0.3, std::f64::consts::FRAC_PI_4] {
        let v = singular_vector(n, t, 0, 1);
        let class = classify_singular(&v)?;
        let spec = jacobi_spectrum(&v)?;
        println!("t = {t:.4}: {:?}, t recovered {:.6}", class.kind, class.t);
        println!("  spectrum {:?}", spec.pattern());
        println!("  residual against closed form {:.1e}", spec.residual_against(&jacobi_closed_form(n, t)));
    }
    let ric = SpectrumReport::from_symmetric(&ricci_operator(n));
    println!("Ricci spectrum {:?}", ric.pattern());
    Ok(())
}
