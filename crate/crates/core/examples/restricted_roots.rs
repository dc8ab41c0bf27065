//! Restricted root system of type B2 and the solvable algebra `a + n`.

use quadric_lab::root_system::{build_named_subalgebras, center, is_nilpotent, is_solvable, RootSystem};

fn main() -> quadric_lab::Result<()> {
    for n in [3, 5] {
        let rs = RootSystem::new(n)?;
        println!("n = {n}");
        for r in rs.roots().iter().filter(|r| r.label.is_positive()) {
            println!("  {:<14} multiplicity {}", r.label.to_string(), r.multiplicity);
        }
        let (total, expected) = rs.dimension_audit();
        println!("  dimension audit: {total} / {expected}");
        let an = rs.an();
        println!("  a + n: dim {}, solvable {}", an.dim(), is_solvable(&an));
        let nil = rs.nilradical();
        println!("  n: nilpotent {}, center dim {}", is_nilpotent(nil), center(nil).dim());
        for (name, s) in build_named_subalgebras(n)? {
            println!("  {name}: dim {}", s.dim());
        }
    }
    Ok(())
}
