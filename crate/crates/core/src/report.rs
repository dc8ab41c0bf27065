//! Collection of every check into flat, serializable records.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::contact::{self, contact_data, normal_jacobi_on_m, random_symmetric};
use crate::error::Result;
use crate::hypersurfaces::{
    self, build_m, build_p, jacobi_transport, HypersurfaceKind, HypersurfaceModel,
};
use crate::lie_core::{standard_basis, SoElement};
use crate::oracle::{self, integrate_transport, ODE_STEP, ODE_TOL};
use crate::quadric::{
    self, classify_singular, jacobi_closed_form, jacobi_spectrum, singular_vector, RealStructure,
    TangentVector, CLASSIFY_TOL, JACOBI_TOL,
};
use crate::root_system::{self, RootSystem, SubalgebraName};
use crate::spectrum::Check;

/// What to verify for one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Target {
    /// Ambient algebra and curvature identities.
    Structure,
    /// The complex hypersurface `P`.
    ComplexHypersurface,
    Hopf(HypersurfaceModel),
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Self::Structure => "structure".into(),
            Self::ComplexHypersurface => "P".into(),
            Self::Hopf(m) => m.label(),
        }
    }
}

fn f17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        RawValue::from_string(format!("{x:.16e}"))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    } else {
        s.serialize_str(&x.to_string())
    }
}

/// One check, flattened for output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    /// Topic the check belongs to; used as the sort key.
    pub anchor: String,
    pub n: usize,
    pub subject: String,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    #[serde(serialize_with = "f17")]
    pub residual: f64,
    #[serde(serialize_with = "f17")]
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn values(mut self, expected: String, computed: String) -> Self {
        self.expected = Some(expected);
        self.computed = Some(computed);
        self
    }
}

/// Accumulates records for one `(n, target)` pair.
struct Sink {
    n: usize,
    subject: String,
    out: Vec<CheckRecord>,
}

impl Sink {
    fn new(n: usize, subject: String) -> Self {
        Self { n, subject, out: Vec::new() }
    }

    fn push(&mut self, anchor: &str, c: &Check) -> &mut CheckRecord {
        self.out.push(CheckRecord {
            anchor: anchor.to_string(),
            n: self.n,
            subject: self.subject.clone(),
            name: c.name.clone(),
            expected: None,
            computed: None,
            residual: c.residual,
            tol: c.tol,
            pass: c.pass,
        });
        self.out.last_mut().expect("just pushed")
    }

    fn extend<'a>(&mut self, anchor: &str, cs: impl IntoIterator<Item = &'a Check>) {
        for c in cs {
            self.push(anchor, c);
        }
    }

    fn error(&mut self, anchor: &str, what: &str, e: &crate::Error) {
        let c = Check::new(format!("{what}: {e}"), f64::INFINITY, 0.0);
        self.push(anchor, &c);
    }
}

/// `a (x2), b (x1)` style rendering of a spectrum pattern.
pub fn format_pattern(p: &[(f64, usize)]) -> String {
    p.iter()
        .map(|(v, m)| format!("{} (x{m})", fmt_value(*v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_value(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    // avoid "-0"
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

fn sorted_pattern(p: &[(f64, usize)]) -> Vec<(f64, usize)> {
    let mut p: Vec<(f64, usize)> = p.iter().filter(|(_, m)| *m > 0).copied().collect();
    p.sort_by(|a, b| b.0.total_cmp(&a.0));
    p
}

/// All checks for `target` at rank `n`. `seed` drives the randomized controls.
pub fn collect(n: usize, target: Target, seed: u64) -> Vec<CheckRecord> {
    let mut sink = Sink::new(n, target.label());
    match target {
        Target::Structure => structure_checks(&mut sink, n, seed),
        Target::ComplexHypersurface => p_checks(&mut sink, n),
        Target::Hopf(m) => hopf_checks(&mut sink, n, m, seed),
    }
    sink.out
}

fn rng_for(seed: u64, n: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn structure_checks(sink: &mut Sink, n: usize, seed: u64) {
    let rs = match RootSystem::new(n) {
        Ok(rs) => rs,
        Err(e) => return sink.error("root system", "construction", &e),
    };
    let (sum, dim) = rs.dimension_audit();
    sink.push(
        "root system: dimension audit",
        &Check::new("2 sum m_alpha + dim g0 = dim so(2,n)", (sum as f64 - dim as f64).abs(), 0.5),
    )
    .expected = Some(dim.to_string());
    let for_mult: Vec<String> = root_system::RootLabel::POSITIVE
        .iter()
        .map(|l| format!("{l}: {}", rs.root(*l).multiplicity))
        .collect();
    sink.out.last_mut().expect("pushed").computed = Some(format!("{sum} ({})", for_mult.join(", ")));

    let n1 = root_system::named_subalgebra(&rs, SubalgebraName::N1);
    match hypersurfaces::heisenberg_check(&n1) {
        Ok(ok) => {
            sink.push("root system: Heisenberg algebra", &Check::flag("n1 is Heisenberg of dimension 2n-3", ok));
        }
        Err(e) => sink.error("root system: Heisenberg algebra", "n1", &e),
    }
    for name in [SubalgebraName::D, SubalgebraName::S1, SubalgebraName::H1] {
        let s = root_system::named_subalgebra(&rs, name);
        sink.push(
            "root system: subalgebras",
            &Check::new(format!("{} closed under bracket", name.as_str()), s.closure_residual(), 1e-10),
        );
        sink.push(
            "root system: subalgebras",
            &Check::flag(format!("{} solvable", name.as_str()), root_system::is_solvable(&s)),
        );
    }
    for (name, m) in hypersurfaces::lie_triple_subspaces(&rs) {
        let c = hypersurfaces::lie_triple_check(&m);
        sink.push("root system: Lie triple systems", &Check::new(format!("{name} is a Lie triple system"), c.residual, c.tol));
    }
    for (name, r) in hypersurfaces::bracket_relations(&rs) {
        sink.push("root system: bracket relations", &Check::new(name, r, 1e-10));
    }

    // Killing form: trace of adjoint matrices against n tr(XY)
    let basis = standard_basis(n);
    let mut rng = rng_for(seed, n, 1);
    let mut killing: f64 = 0.0;
    for _ in 0..6 {
        let x = random_element(n, &basis, &mut rng);
        let y = random_element(n, &basis, &mut rng);
        let a = oracle::killing_by_trace(&x, &y).expect("same n");
        let b = x.killing(&y).expect("same n");
        killing = killing.max((a - b).abs() / (1.0 + b.abs()));
    }
    sink.push("Killing form", &Check::new("tr(ad X ad Y) = n tr(XY)", killing, 1e-10));

    // Einstein constant, two routes
    let eye = DMatrix::identity(2 * n, 2 * n) * (-2.0 * n as f64);
    sink.push(
        "ambient curvature: Einstein constant",
        &Check::new("Ric = -2n id (curvature formula)", (quadric::ricci_operator(n) - &eye).amax(), 1e-9),
    );
    sink.push(
        "ambient curvature: Einstein constant",
        &Check::new("Ric = -2n id (double brackets)", (oracle::ricci_by_brackets(n) - &eye).amax(), 1e-9),
    );

    // Jacobi spectra on a t-grid and at the three special angles
    let mut grid: f64 = 0.0;
    let mut classify: f64 = 0.0;
    for k in 0..20 {
        let t = FRAC_PI_4 * k as f64 / 19.0;
        let v = singular_vector(n, t, 0, 1);
        let rep = jacobi_spectrum(&v).expect("unit vector");
        grid = grid.max(rep.residual_against(&jacobi_closed_form(n, t)));
        classify = classify.max((classify_singular(&v).expect("unit").t - t).abs());
    }
    sink.push("ambient curvature: Jacobi spectra", &Check::new("20-point t-grid matches closed form", grid, JACOBI_TOL));
    sink.push("ambient curvature: Jacobi spectra", &Check::new("classified t matches construction", classify, CLASSIFY_TOL));
    let specials: [(&str, f64, Vec<(f64, usize)>); 3] = [
        ("t = 0", 0.0, vec![(0.0, n), (-2.0, n)]),
        ("t = pi/4", FRAC_PI_4, vec![(0.0, 3), (-1.0, 2 * n - 4), (-4.0, 1)]),
        ("t = arctan(1/2)", 0.5f64.atan(), vec![(0.0, 2), (-0.4, n - 1), (-1.6, n - 2), (-3.6, 1)]),
    ];
    for (label, t, expected) in specials {
        let rep = jacobi_spectrum(&singular_vector(n, t, 0, 1)).expect("unit vector");
        let expected = sorted_pattern(&expected);
        let c = Check::new(format!("Jacobi spectrum at {label}"), rep.residual_against(&expected), JACOBI_TOL);
        let computed = format_pattern(&rep.pattern());
        sink.push("ambient curvature: Jacobi spectra", &c);
        let last = sink.out.pop().expect("pushed");
        sink.out.push(last.values(format_pattern(&expected), computed));
    }

    // randomized: singular vectors aligned with a random real structure
    let mut rng = rng_for(seed, n, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let t = rng.random_range(0.0..FRAC_PI_4);
        let phi = rng.random_range(0.0..2.0 * PI);
        let v = rotated_singular(n, t, phi, &mut rng);
        let rep = jacobi_spectrum(&v).expect("unit vector");
        worst = worst.max(rep.residual_against(&jacobi_closed_form(n, t)));
    }
    sink.push(
        "ambient curvature: Jacobi spectra",
        &Check::new("random singular vectors (seeded) match closed form", worst, JACOBI_TOL),
    );
}

fn random_element<R: Rng>(n: usize, basis: &[SoElement], rng: &mut R) -> SoElement {
    crate::lie_core::linear_combination(n, basis.iter().map(|b| (rng.random_range(-1.0..1.0), b)))
}

/// `cos(t) u + sin(t) J w` with `u, w` random orthonormal in `V(C_phi)`.
fn rotated_singular<R: Rng>(n: usize, t: f64, phi: f64, rng: &mut R) -> TangentVector {
    let c = RealStructure::new(phi);
    let v = c.v_space(n).orthonormal_basis();
    let pick = |rng: &mut R| {
        let e = crate::lie_core::linear_combination(n, v.iter().map(|b| (rng.random_range(-1.0..1.0), b)));
        TangentVector::project(&e)
    };
    let u = pick(rng).normalized();
    let w = pick(rng);
    let w = (&w - &(&u * quadric::g_metric(&u, &w))).normalized();
    &(&u * t.cos()) + &(&quadric::j_apply(&w) * t.sin())
}

fn p_checks(sink: &mut Sink, n: usize) {
    for phi in [0.0, FRAC_PI_4, FRAC_PI_2, PI] {
        match build_p(n, phi) {
            Ok(p) => {
                let expected = vec![(1.0, n - 2), (0.0, 2), (-1.0, n - 2)];
                let anchor = "complex hypersurface P";
                for c in &p.shape.checks {
                    let named = Check { name: format!("phi = {}: {}", fmt_value(phi), c.name), ..c.clone() };
                    let rec = sink.push(anchor, &named);
                    if c.name.starts_with("principal curvatures") {
                        rec.expected = Some(format_pattern(&expected));
                        rec.computed = Some(format_pattern(&p.shape.spectrum.pattern()));
                    }
                }
            }
            Err(e) => sink.error("complex hypersurface P", "construction", &e),
        }
    }
}

fn anchor_for(kind: HypersurfaceKind) -> &'static str {
    match kind {
        HypersurfaceKind::TubeOfP => "hopf family: tubes around P",
        HypersurfaceKind::Minimal => "hopf family: minimal orbit",
        HypersurfaceKind::Equidistant => "hopf family: equidistant to the minimal orbit",
        HypersurfaceKind::Horocyclic => "hopf family: horocyclic orbit",
    }
}

fn hopf_checks(sink: &mut Sink, n: usize, model: HypersurfaceModel, seed: u64) {
    let anchor = anchor_for(model.kind);
    let h = match build_m(n, model) {
        Ok(h) => h,
        Err(e) => return sink.error(anchor, "construction", &e),
    };
    let expected = sorted_pattern(&merge(&model.expected_spectrum(n)));
    let computed = format_pattern(&h.shape.spectrum.pattern());
    for c in &h.shape.checks {
        let rec = sink.push(anchor, c);
        if c.name.starts_with("principal curvatures") {
            rec.expected = Some(format_pattern(&expected));
            rec.computed = Some(computed.clone());
        }
    }
    let hopf = h.shape.matrix[(h.frame.blocks.xi, h.frame.blocks.xi)];
    sink.push(anchor, &Check::new("Hopf principal curvature", (hopf - model.alpha()).abs(), 1e-9))
        .expected = Some(fmt_value(model.alpha()));
    sink.out.last_mut().expect("pushed").computed = Some(format!("{hopf:.16e}"));

    let cd = contact_data(&h);
    sink.extend("almost contact structure", &cd.checks);
    match normal_jacobi_on_m(&h) {
        Ok((_, cs)) => sink.extend("normal Jacobi operator", &cs),
        Err(e) => sink.error("normal Jacobi operator", "isotropy", &e),
    }
    // a random symmetric operator must fail both Hopf criteria
    let mut rng = rng_for(seed, n, 3 + model.kind as u64);
    let a = random_symmetric(h.shape.matrix.nrows(), &mut rng);
    let (e, f) = contact::hopf_defects(&a, &h.frame.structure_phi, &h.frame.eta());
    sink.push(
        "almost contact structure",
        &Check::flag("random non-Hopf operator rejected by both criteria (seeded)", e > 1e-6 && f > 1e-6),
    );

    let ric = contact::ricci_from_hypersurface(&h);
    for c in &ric.checks {
        let rec = sink.push("Ricci curvature", c);
        if c.name.starts_with("Ricci eigenvalues") {
            rec.expected = Some(format_pattern(&sorted_pattern(&merge(&contact::expected_ricci(n, model.alpha())))));
            rec.computed = Some(format_pattern(&ric.eigenvalues()));
        } else if c.name.starts_with("scalar") {
            rec.expected = Some(fmt_value(contact::expected_scalar(n)));
            rec.computed = Some(format!("{:.16e}", ric.scalar));
        }
    }

    if model.kind.needs_radius() {
        match jacobi_transport(n, model.kind, model.r).and_then(|jt| Ok((integrate_transport(&jt, ODE_STEP)?, jt))) {
            Ok((ode, jt)) => {
                sink.push(
                    "Jacobi transport: ODE oracle",
                    &Check::new("RK4 D, D' and -D' D^-1 match the closed form", ode.residual, ODE_TOL),
                );
                let xi = &jt.reeb_direction;
                let reeb = xi.dot(&(&ode.d * xi));
                let closed = hypersurfaces::reeb_jacobi_closed_form(model.kind, model.r);
                sink.push(
                    "Jacobi transport: ODE oracle",
                    &Check::new("RK4 D(r) on J zeta0 matches closed form", (reeb - closed).abs(), ODE_TOL),
                )
                .expected = Some(format!("{closed:.16e}"));
                sink.out.last_mut().expect("pushed").computed = Some(format!("{reeb:.16e}"));
            }
            Err(e) => sink.error("Jacobi transport: ODE oracle", "integration", &e),
        }
    }
}

/// Merges equal values (e.g. `alpha = 0` with the zero eigenvalue).
fn merge(p: &[(f64, usize)]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &(v, m) in p {
        match out.iter_mut().find(|(w, _)| (w - v).abs() < 1e-9) {
            Some(e) => e.1 += m,
            None => out.push((v, m)),
        }
    }
    out
}

/// Checks that relate several models at one `n`.
pub fn cross_model_checks(n: usize, models: &[HypersurfaceModel]) -> Result<Vec<CheckRecord>> {
    let mut sink = Sink::new(n, "family".into());
    let scalars = models
        .iter()
        .map(|m| contact::scalar_curvature(*m, n))
        .collect::<Result<Vec<f64>>>()?;
    if scalars.len() > 1 {
        let lo = scalars.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = scalars.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        sink.push("Ricci curvature", &Check::new("scalar curvature independent of alpha", hi - lo, 1e-9))
            .expected = Some(fmt_value(contact::expected_scalar(n)));
    }
    let mut monotone = true;
    for kind in [HypersurfaceKind::TubeOfP, HypersurfaceKind::Equidistant] {
        let mut rs: Vec<&HypersurfaceModel> = models.iter().filter(|m| m.kind == kind).collect();
        rs.sort_by(|a, b| a.r.total_cmp(&b.r));
        for w in rs.windows(2) {
            let (a, b) = (w[0].alpha(), w[1].alpha());
            monotone &= match kind {
                HypersurfaceKind::TubeOfP => b < a && b > 2.0,
                _ => b > a && b < 2.0,
            };
        }
    }
    sink.push(
        "hopf family: parametrization",
        &Check::flag("alpha monotone in r, tubes above 2, equidistant below 2", monotone),
    );
    Ok(sink.out)
}

/// Top-level report.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub meta: Meta,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub n: Vec<usize>,
    pub targets: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_override: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    /// Sorts records deterministically and fills in the summary.
    pub fn new(meta: Meta, mut checks: Vec<CheckRecord>, tol_override: Option<f64>) -> Self {
        if let Some(t) = tol_override {
            for c in &mut checks {
                c.tol = t;
                c.pass = c.residual < t;
            }
        }
        checks.sort_by(|a, b| {
            (a.anchor.as_str(), a.n, a.subject.as_str()).cmp(&(b.anchor.as_str(), b.n, b.subject.as_str()))
        });
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Self { meta, checks, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} {}", self.meta.command, self.meta.version);
        let _ = writeln!(
            s,
            "\nn = {:?}, seed = {}, targets: {}\n",
            self.meta.n,
            self.meta.seed,
            self.meta.targets.join(", ")
        );
        let _ = writeln!(s, "| anchor | n | subject | check | expected | computed | residual | tol | pass |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {:.3e} | {:.0e} | {} |",
                c.anchor,
                c.n,
                c.subject,
                c.name.replace('|', "/"),
                c.expected.as_deref().unwrap_or(""),
                c.computed.as_deref().unwrap_or(""),
                c.residual,
                c.tol,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            s,
            "\n{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        s
    }
}
