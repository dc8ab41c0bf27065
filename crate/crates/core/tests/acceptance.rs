//! Acceptance suite: one PASS/FAIL line per criterion, written straight to
//! stdout so it shows up without `--nocapture`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use quadric_lab::cli::{cmd_report_all, default_grid, Format, RunConfig};
use quadric_lab::contact::{self, contact_data, expected_ricci, expected_ricci_clusters, expected_scalar};
use quadric_lab::hypersurfaces::{
    build_m, build_p, heisenberg_check, jacobi_transport, lie_triple_check, lie_triple_subspaces,
    reeb_jacobi_closed_form, HypersurfaceKind, HypersurfaceModel,
};
use quadric_lab::lie_core::standard_basis;
use quadric_lab::oracle::{integrate_transport, killing_by_trace, ricci_by_brackets, ODE_STEP};
use quadric_lab::quadric::{jacobi_closed_form, jacobi_spectrum, ricci_operator, singular_vector};
use quadric_lab::root_system::{is_solvable, named_subalgebra, RootSystem, SubalgebraName};

const RADII: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates as failure
    values.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn models(r_grid: &[f64]) -> Vec<HypersurfaceModel> {
    let mut m = vec![HypersurfaceModel::minimal(), HypersurfaceModel::horocyclic()];
    for &r in r_grid {
        m.push(HypersurfaceModel::tube(r).unwrap());
        m.push(HypersurfaceModel::equidistant(r).unwrap());
    }
    m
}

fn distinct(values: &[f64], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if !out.iter().any(|w| (w - v).abs() < tol) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

fn einstein_constant() -> Outcome {
    let mut res: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for n in 3..=8 {
        let t = Instant::now();
        let eye = DMatrix::identity(2 * n, 2 * n) * (-2.0 * n as f64);
        res = res.max((ricci_operator(n) - &eye).amax());
        slowest = slowest.max(t.elapsed());
        res = res.max((ricci_by_brackets(n) - &eye).amax());
    }
    Outcome {
        pass: res < 1e-9 && slowest < Duration::from_secs(1),
        detail: format!("Einstein constant -2n, n=3..8: residual {res:.2e}, slowest n {slowest:.2?}"),
    }
}

fn jacobi_spectra() -> Outcome {
    let mut grid: f64 = 0.0;
    for n in 3..=6 {
        for k in 0..20 {
            let t = FRAC_PI_4 * k as f64 / 19.0;
            let rep = jacobi_spectrum(&singular_vector(n, t, 0, 1)).unwrap();
            grid = worst([grid, rep.residual_against(&jacobi_closed_form(n, t))]);
        }
    }
    let n = 4;
    let cases: [(f64, Vec<f64>); 3] = [
        (0.0, vec![0.0, -2.0]),
        (FRAC_PI_4, vec![0.0, -1.0, -4.0]),
        (0.5f64.atan(), vec![0.0, -0.4, -1.6, -3.6]),
    ];
    let mut special: f64 = 0.0;
    let mut counts_ok = true;
    for (t, expected) in cases {
        let rep = jacobi_spectrum(&singular_vector(n, t, 0, 1)).unwrap();
        let got = distinct(&rep.eigenvalues, 1e-6);
        counts_ok &= got.len() == expected.len();
        if got.len() == expected.len() {
            special = worst(got.iter().zip(&expected).map(|(a, b)| (a - b).abs()).chain([special]));
        }
    }
    Outcome {
        pass: grid < 1e-8 && special < 1e-8 && counts_ok,
        detail: format!("Jacobi spectra: 20-point grid residual {grid:.2e}, special angles residual {special:.2e}"),
    }
}

fn p_spectrum() -> Outcome {
    let mut spec: f64 = 0.0;
    let mut failed = Vec::new();
    for n in 3..=10 {
        for phi in [0.0, FRAC_PI_4, FRAC_PI_2, PI] {
            let p = build_p(n, phi).unwrap();
            spec = worst([spec, p.shape.spectrum.residual_against(&[(0.0, 2), (1.0, n - 2), (-1.0, n - 2)])]);
            for c in p.shape.checks.iter().filter(|c| !c.pass) {
                failed.push(format!("n={n} phi={phi:.3}: {}", c.name));
            }
        }
    }
    Outcome {
        pass: spec < 1e-9 && failed.is_empty(),
        detail: format!(
            "P spectrum n=3..10: residual {spec:.2e}; half-angle eigenspaces at 4 normals: {} failures {failed:?}",
            failed.len()
        ),
    }
}

fn model_spectra() -> Outcome {
    let mut res: f64 = 0.0;
    for n in 3..=10 {
        for m in models(&RADII) {
            let h = build_m(n, m).unwrap();
            res = worst([res, h.shape.spectrum.residual_against(&m.expected_spectrum(n))]);
        }
    }
    Outcome {
        pass: res < 1e-9,
        detail: format!("model spectra (minimal, tube, equidistant, horocyclic), n=3..10, 4 radii: residual {res:.2e}"),
    }
}

fn ode_oracle() -> Outcome {
    let mut res: f64 = 0.0;
    let mut reeb: f64 = 0.0;
    for n in [3, 4] {
        for kind in [HypersurfaceKind::TubeOfP, HypersurfaceKind::Equidistant] {
            for r in [0.25, 0.5, 1.0] {
                let jt = jacobi_transport(n, kind, r).unwrap();
                let ode = integrate_transport(&jt, ODE_STEP).unwrap();
                res = worst([res, ode.residual]);
                let xi = &jt.reeb_direction;
                reeb = worst([reeb, (xi.dot(&(&ode.d * xi)) - reeb_jacobi_closed_form(kind, r)).abs()]);
            }
        }
    }
    Outcome {
        pass: res < 1e-6 && reeb < 1e-6,
        detail: format!("RK4 Jacobi equation vs closed form at r=0.25,0.5,1: D/D'/shape {res:.2e}, J zeta0 diagonal {reeb:.2e}"),
    }
}

fn hopf_identities() -> Outcome {
    const NAMES: [&str; 7] = [
        "(a) Hopf: A xi = alpha xi",
        "(b) A phi + phi A = 0",
        "(c) integrability: g((A phi + phi A) X, Y) = 0 on C",
        "(d) curvature-adapted: [K, A] = 0",
        "(g) J T1 = T-1",
        "(f) normal is A-isotropic",
        "(h) T1 in V(C) for the aligned real structure",
    ];
    let mut res: f64 = 0.0;
    let mut missing = 0;
    for n in 3..=10 {
        for m in models(&RADII) {
            let h = build_m(n, m).unwrap();
            for name in NAMES {
                match h.shape.check(name) {
                    Some(c) => res = worst([res, c.residual]),
                    None => missing += 1,
                }
            }
            let cd = contact_data(&h);
            res = worst([res, cd.d_eta.amax()]);
        }
    }
    Outcome {
        pass: res < 1e-9 && missing == 0,
        detail: format!("Hopf, A phi + phi A, d eta, [K, A], J T1 = T-1, isotropic normal over n=3..10: residual {res:.2e}"),
    }
}

fn ricci_curvature() -> Outcome {
    let alphas = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0];
    let (mut eig, mut phi_rel, mut gauss, mut spread): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut counts_ok = true;
    for n in 3..=6 {
        let mut scalars = Vec::new();
        for a in alphas {
            let r = contact::ricci(HypersurfaceModel::from_alpha(a).unwrap(), n).unwrap();
            eig = worst([eig, r.spectrum.residual_against(&expected_ricci(n, a))]);
            counts_ok &= r.spectrum.clusters.len() == expected_ricci_clusters(a);
            counts_ok &= (a == 0.0) == r.pseudo_einstein;
            phi_rel = worst([phi_rel, r.phi_relation_residual]);
            gauss = worst([gauss, r.gauss_residual]);
            scalars.push(r.scalar);
        }
        let lo = scalars.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = scalars.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        spread = worst([spread, hi - lo, (hi - expected_scalar(n)).abs()]);
    }
    Outcome {
        pass: eig < 1e-9 && counts_ok && spread < 1e-9 && phi_rel < 1e-9 && gauss < 1e-8,
        detail: format!(
            "Ricci: eigenvalues {eig:.2e}, cluster counts 2/3/4 {}, scalar 4-2n(2n-1) spread {spread:.2e}, phi relation {phi_rel:.2e}, Gauss oracle {gauss:.2e}",
            if counts_ok { "ok" } else { "WRONG" }
        ),
    }
}

fn structural_algebra() -> Outcome {
    let mut res: f64 = 0.0;
    let mut flags = true;
    for n in 3..=6 {
        let rs = RootSystem::new(n).unwrap();
        let (sum, dim) = rs.dimension_audit();
        flags &= sum == dim;
        flags &= heisenberg_check(&named_subalgebra(&rs, SubalgebraName::N1)).unwrap();
        for name in [SubalgebraName::D, SubalgebraName::S1, SubalgebraName::H1] {
            flags &= is_solvable(&named_subalgebra(&rs, name));
        }
        for (_, m) in lie_triple_subspaces(&rs) {
            res = worst([res, lie_triple_check(&m).residual]);
        }
        let basis = standard_basis(n);
        for x in basis.iter().step_by(3) {
            for y in &basis {
                let k = x.killing(y).unwrap();
                res = worst([res, (killing_by_trace(x, y).unwrap() - k).abs()]);
            }
        }
    }
    Outcome {
        pass: res < 1e-10 && flags,
        detail: format!(
            "dimension audit, Heisenberg n1, solvable d/s1/h1 {}; Lie triple systems and Killing oracle residual {res:.2e}",
            if flags { "ok" } else { "WRONG" }
        ),
    }
}

fn suite_runtime() -> Outcome {
    let config = RunConfig {
        command: "report-all".into(),
        ns: vec![3, 4, 5, 6],
        targets: default_grid(),
        tol: None,
        seed: 0,
        format: Format::Json,
    };
    let t = Instant::now();
    let report = cmd_report_all(&config).unwrap();
    let elapsed = t.elapsed();
    Outcome {
        pass: elapsed < Duration::from_secs(60) && report.all_pass(),
        detail: format!(
            "report-all default grid: {} checks, {} failed, {elapsed:.2?}",
            report.summary.total, report.summary.failed
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Einstein constant", einstein_constant),
        ("Jacobi spectra", jacobi_spectra),
        ("complex hypersurface spectrum", p_spectrum),
        ("Hopf model spectra", model_spectra),
        ("ODE oracle", ode_oracle),
        ("Hopf-family identities", hopf_identities),
        ("Ricci and scalar curvature", ricci_curvature),
        ("structural algebra", structural_algebra),
        ("suite runtime", suite_runtime),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} criterion {} ({name}): {}", i + 1, o.detail).unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
