//! Build a verification report for one `n` and print its markdown summary.

use quadric_lab::hypersurfaces::HypersurfaceModel;
use quadric_lab::report::{collect, Meta, Target, VerificationReport};

fn main() {
    let n = 3;
    let seed = 7;
    let targets = [Target::Structure, Target::ComplexHypersurface, Target::Hopf(HypersurfaceModel::minimal())];
    let checks = targets.iter().flat_map(|t| collect(n, *t, seed)).collect();
    let meta = Meta {
        tool: "quadric-lab",
        version: env!("CARGO_PKG_VERSION"),
        command: "example".into(),
        seed,
        n: vec![n],
        targets: targets.iter().map(Target::label).collect(),
        tol_override: None,
    };
    let report = VerificationReport::new(meta, checks, None);
    println!("{}", report.to_markdown());
    println!("{} / {} passed", report.summary.passed, report.summary.total);
}
