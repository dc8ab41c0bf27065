//! Brackets, Cartan involution and Killing form in `so(2, n)`.

use quadric_lab::lie_core::{algebra_dim, k_subspace, p_subspace, standard_basis};
use quadric_lab::quadric::j_generator;

fn main() -> quadric_lab::Result<()> {
    let n = 4;
    let basis = standard_basis(n);
    println!("dim so(2,{n}) = {} (basis of {})", algebra_dim(n), basis.len());
    println!("dim k = {}, dim p = {}", k_subspace(n).dim(), p_subspace(n).dim());

    let (x, y) = (&basis[0], &basis[basis.len() - 1]);
    let xy = x.bracket(y)?;
    println!("|[X,Y] + [Y,X]| = {:.1e}", (&xy + &y.bracket(x)?).amax());
    println!("|theta[X,Y] - [theta X, theta Y]| = {:.1e}", (xy.theta() - x.theta().bracket(&y.theta())?).amax());

    let z = j_generator(n);
    println!("B(z, z) = {:.6}", z.killing(&z)?);
    println!("B_theta(z, z) = {:.6}", z.b_theta(&z)?);
    Ok(())
}
