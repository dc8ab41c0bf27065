//! Command-line front end: argument types, run configuration and the
//! `verify`, `spectrum` and `report-all` commands.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::contact::ricci_from_hypersurface;
use crate::hypersurfaces::{build_m, build_p, HypersurfaceKind, HypersurfaceModel};
use crate::report::{collect, cross_model_checks, format_pattern, CheckRecord, Meta, Target, VerificationReport};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QUADRIC_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "quadric-lab", version, about = "Verify Hopf hypersurfaces in the complex hyperbolic quadric")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check for one rank and one model (or all models).
    Verify(CommonArgs),
    /// Print principal curvatures, Ricci eigenvalues and scalar curvature.
    Spectrum(SpectrumArgs),
    /// Run the full check matrix over a grid of ranks and radii.
    ReportAll(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Tube,
    Minimal,
    Equidistant,
    Horocyclic,
    #[value(name = "P", alias = "p")]
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
pub enum Format {
    Json,
    #[default]
    Markdown,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Overrides the tolerance of every check.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Radius for tube and equidistant models.
    #[arg(long, conflicts_with = "alpha")]
    pub r: Option<f64>,
    /// Hopf principal curvature; selects the radius (and the model if none is given).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated radii; writes a CSV table over them instead.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Ranks to cover (comma-separated).
    #[arg(long = "n", value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
    pub ns: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failures of a command, mapped to exit codes by [`CliError::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub ns: Vec<usize>,
    pub targets: Vec<Target>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.ns.is_empty() {
            return Err(CliError::Usage("at least one n is required".into()));
        }
        if let Some(n) = self.ns.iter().find(|n| **n < 3) {
            return Err(CliError::Usage(format!("n must be >= 3, got {n}")));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        for t in &self.targets {
            if let Target::Hopf(m) = t {
                if m.kind.needs_radius() && !(m.r.is_finite() && m.r > 0.0) {
                    return Err(CliError::Usage(format!("radius must be positive, got {}", m.r)));
                }
            }
        }
        Ok(())
    }

    fn meta(&self) -> Meta {
        Meta {
            tool: "quadric-lab",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            seed: self.seed,
            n: self.ns.clone(),
            targets: self.targets.iter().map(Target::label).collect(),
            tol_override: self.tol,
        }
    }

    fn hopf_models(&self) -> Vec<HypersurfaceModel> {
        self.targets
            .iter()
            .filter_map(|t| match t {
                Target::Hopf(m) => Some(*m),
                _ => None,
            })
            .collect()
    }
}

/// Radii of the default grid for tubes and equidistant hypersurfaces.
pub const DEFAULT_RADII: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// Structure, `P`, the minimal and horocyclic orbits, tubes and equidistant
/// hypersurfaces at [`DEFAULT_RADII`], and the tube with `alpha = 4`.
pub fn default_grid() -> Vec<Target> {
    let mut t = vec![
        Target::Structure,
        Target::ComplexHypersurface,
        Target::Hopf(HypersurfaceModel::minimal()),
        Target::Hopf(HypersurfaceModel::horocyclic()),
    ];
    for r in DEFAULT_RADII {
        t.push(Target::Hopf(HypersurfaceModel::tube(r).expect("positive radius")));
        t.push(Target::Hopf(HypersurfaceModel::equidistant(r).expect("positive radius")));
    }
    t.push(Target::Hopf(HypersurfaceModel::from_alpha(4.0).expect("alpha > 2")));
    t
}

fn resolve_model(args: &CommonArgs) -> Result<Option<Target>, CliError> {
    let usage = |e: crate::Error| CliError::Usage(e.to_string());
    let kind = match args.model {
        None => {
            return match (args.alpha, args.r) {
                (Some(a), _) => Ok(Some(Target::Hopf(HypersurfaceModel::from_alpha(a).map_err(usage)?))),
                (None, Some(_)) => Err(CliError::Usage("--r requires --model tube or equidistant".into())),
                (None, None) => Ok(None),
            };
        }
        Some(ModelArg::P) => {
            if args.r.is_some() || args.alpha.is_some() {
                return Err(CliError::Usage("P takes no radius".into()));
            }
            return Ok(Some(Target::ComplexHypersurface));
        }
        Some(ModelArg::Tube) => HypersurfaceKind::TubeOfP,
        Some(ModelArg::Minimal) => HypersurfaceKind::Minimal,
        Some(ModelArg::Equidistant) => HypersurfaceKind::Equidistant,
        Some(ModelArg::Horocyclic) => HypersurfaceKind::Horocyclic,
    };
    let model = match (args.r, args.alpha) {
        (Some(r), _) => {
            if !kind.needs_radius() {
                return Err(CliError::Usage(format!("{kind} takes no radius")));
            }
            HypersurfaceModel::new(kind, r).map_err(usage)?
        }
        (None, Some(a)) => {
            let m = HypersurfaceModel::from_alpha(a).map_err(usage)?;
            if m.kind != kind {
                return Err(CliError::Usage(format!("alpha = {a} belongs to the {} model, not {kind}", m.kind)));
            }
            m
        }
        (None, None) => {
            if kind.needs_radius() {
                return Err(CliError::Usage(format!("{kind} needs --r or --alpha")));
            }
            HypersurfaceModel::new(kind, 0.0).map_err(usage)?
        }
    };
    Ok(Some(Target::Hopf(model)))
}

impl CommonArgs {
    /// Configuration for `verify`: the requested model, or the default
    /// models at `r = 0.5` when none is given.
    pub fn to_config(&self, command: &str) -> Result<RunConfig, CliError> {
        let targets = match resolve_model(self)? {
            Some(t) => vec![t],
            None => vec![
                Target::Structure,
                Target::ComplexHypersurface,
                Target::Hopf(HypersurfaceModel::minimal()),
                Target::Hopf(HypersurfaceModel::horocyclic()),
                Target::Hopf(HypersurfaceModel::tube(0.5).expect("positive")),
                Target::Hopf(HypersurfaceModel::equidistant(0.5).expect("positive")),
            ],
        };
        let c = RunConfig {
            command: command.to_string(),
            ns: vec![self.n],
            targets,
            tol: self.output.tol,
            seed: self.output.seed,
            format: self.output.format,
        };
        c.validate()?;
        Ok(c)
    }
}

impl ReportArgs {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut ns = self.ns.clone();
        ns.sort_unstable();
        ns.dedup();
        let c = RunConfig {
            command: "report-all".into(),
            ns,
            targets: default_grid(),
            tol: self.output.tol,
            seed: self.output.seed,
            format: self.output.format,
        };
        c.validate()?;
        Ok(c)
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let k: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if k == 0 {
            return Err(CliError::Usage(format!("{THREADS_ENV} must be positive")));
        }
        b = b.num_threads(k);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn run_checks(config: &RunConfig) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let jobs: Vec<(usize, Target)> = config
        .ns
        .iter()
        .flat_map(|&n| config.targets.iter().map(move |t| (n, *t)))
        .collect();
    let pool = thread_pool()?;
    let models = config.hopf_models();
    let (mut records, cross) = pool.install(|| {
        let records: Vec<CheckRecord> = jobs
            .par_iter()
            .map(|(n, t)| collect(*n, *t, config.seed))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        let cross: Vec<crate::Result<Vec<CheckRecord>>> = if models.len() > 1 {
            config.ns.par_iter().map(|&n| cross_model_checks(n, &models)).collect()
        } else {
            Vec::new()
        };
        (records, cross)
    });
    for c in cross {
        records.extend(c?);
    }
    Ok(VerificationReport::new(config.meta(), records, config.tol))
}

/// Runs every registered check for the configured ranks and models.
pub fn cmd_verify(config: &RunConfig) -> Result<VerificationReport, CliError> {
    run_checks(config)
}

/// [`cmd_verify`] over the default grid.
pub fn cmd_report_all(config: &RunConfig) -> Result<VerificationReport, CliError> {
    run_checks(config)
}

/// One row of the principal-curvature table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub value: f64,
    pub multiplicity: usize,
    pub eigenspace: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    pub n: usize,
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub rows: Vec<SpectrumRow>,
    pub ricci: Vec<(f64, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
}

impl SpectrumTable {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} (n = {})", self.model, self.n);
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "\nalpha = {a}");
        }
        let _ = writeln!(s, "\n| principal curvature | multiplicity | eigenspace |");
        let _ = writeln!(s, "|---|---|---|");
        for r in &self.rows {
            let _ = writeln!(s, "| {} | {} | {} |", clean(r.value), r.multiplicity, r.eigenspace);
        }
        if !self.ricci.is_empty() {
            let _ = writeln!(s, "\nRicci eigenvalues: {}", format_pattern(&self.ricci));
        }
        if let Some(sc) = self.scalar {
            let _ = writeln!(s, "scalar curvature: {}", clean(sc));
        }
        s
    }
}

fn clean(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Principal curvatures with eigenspace labels, plus Ricci data for `M_alpha`.
pub fn cmd_spectrum(n: usize, target: Target) -> Result<SpectrumTable, CliError> {
    match target {
        Target::ComplexHypersurface => {
            let p = build_p(n, 0.0)?;
            let rows = p
                .shape
                .spectrum
                .clusters
                .iter()
                .map(|c| SpectrumRow {
                    value: c.value,
                    multiplicity: c.multiplicity,
                    eigenspace: match clean(c.value) {
                        v if v == 0.0 => "T0".into(),
                        v if v > 0.0 => "T1".into(),
                        _ => "T-1".into(),
                    },
                })
                .collect();
            Ok(SpectrumTable { n, model: "P".into(), alpha: None, rows, ricci: Vec::new(), scalar: None })
        }
        Target::Hopf(m) => {
            let h = build_m(n, m)?;
            let b = &h.frame.blocks;
            let blocks = [
                ("C ⊖ Q", b.cq.clone()),
                ("T1", b.t1.clone()),
                ("T-1", b.t_minus1.clone()),
                ("R xi", b.xi..b.xi + 1),
            ];
            let rows = h
                .shape
                .spectrum
                .clusters
                .iter()
                .map(|c| {
                    let names: Vec<&str> = blocks
                        .iter()
                        .filter(|(_, r)| c.vectors.iter().any(|v| r.clone().map(|i| v[i] * v[i]).sum::<f64>() > 1e-6))
                        .map(|(name, _)| *name)
                        .collect();
                    SpectrumRow { value: c.value, multiplicity: c.multiplicity, eigenspace: names.join(" + ") }
                })
                .collect();
            let ric = ricci_from_hypersurface(&h);
            Ok(SpectrumTable {
                n,
                model: m.label(),
                alpha: Some(m.alpha()),
                rows,
                ricci: ric.eigenvalues(),
                scalar: Some(ric.scalar),
            })
        }
        Target::Structure => Err(CliError::Usage("spectrum needs a model".into())),
    }
}

/// CSV over radii: `r, alpha, hopf_curvature, principal_curvatures, ricci_clusters, scalar`.
pub fn spectrum_sweep(n: usize, kind: HypersurfaceKind, radii: &[f64]) -> Result<String, CliError> {
    if !kind.needs_radius() {
        return Err(CliError::Usage(format!("--sweep needs a tube or equidistant model, got {kind}")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "alpha", "hopf_curvature", "principal_curvatures", "ricci_clusters", "scalar"])?;
    for &r in radii {
        let m = HypersurfaceModel::new(kind, r).map_err(|e| CliError::Usage(e.to_string()))?;
        let h = build_m(n, m)?;
        let ric = ricci_from_hypersurface(&h);
        let hopf = h.shape.matrix[(h.frame.blocks.xi, h.frame.blocks.xi)];
        w.write_record([
            format!("{r}"),
            format!("{:.16e}", m.alpha()),
            format!("{hopf:.16e}"),
            format_pattern(&h.shape.spectrum.pattern()),
            ric.spectrum.clusters.len().to_string(),
            format!("{:.16e}", ric.scalar),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    }
}

/// Executes a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("quadric-lab: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify(args) => {
            let config = args.to_config("verify")?;
            let report = cmd_verify(&config)?;
            emit(&render(&report, config.format), args.output.out.as_ref())?;
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::ReportAll(args) => {
            let config = args.to_config()?;
            let report = cmd_report_all(&config)?;
            emit(&render(&report, config.format), args.output.out.as_ref())?;
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Spectrum(args) => {
            let common = &args.common;
            if common.n < 3 {
                return Err(CliError::Usage(format!("n must be >= 3, got {}", common.n)));
            }
            if let Some(radii) = &args.sweep {
                let kind = match common.model {
                    Some(ModelArg::Tube) => HypersurfaceKind::TubeOfP,
                    Some(ModelArg::Equidistant) => HypersurfaceKind::Equidistant,
                    _ => return Err(CliError::Usage("--sweep needs --model tube or equidistant".into())),
                };
                if common.r.is_some() || common.alpha.is_some() {
                    return Err(CliError::Usage("--sweep replaces --r and --alpha".into()));
                }
                emit(&spectrum_sweep(common.n, kind, radii)?, common.output.out.as_ref())?;
                return Ok(0);
            }
            let target = resolve_model(common)?.ok_or_else(|| CliError::Usage("spectrum needs --model or --alpha".into()))?;
            let table = cmd_spectrum(common.n, target)?;
            let text = match common.output.format {
                Format::Json => serde_json::to_string_pretty(&table).expect("table is serializable"),
                Format::Markdown => table.to_markdown(),
            };
            emit(&text, common.output.out.as_ref())?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("quadric-lab").chain(args.iter().copied())).unwrap()
    }

    fn common(cli: Cli) -> CommonArgs {
        match cli.command {
            Command::Verify(a) => a,
            Command::Spectrum(s) => s.common,
            _ => panic!("unexpected command"),
        }
    }

    #[test]
    fn model_resolution() {
        let a = common(parse(&["verify", "--n", "3", "--model", "tube", "--r", "0.5"]));
        let c = a.to_config("verify").unwrap();
        assert_eq!(c.targets, vec![Target::Hopf(HypersurfaceModel::tube(0.5).unwrap())]);
        let a = common(parse(&["verify", "--alpha", "1.0"]));
        match resolve_model(&a).unwrap() {
            Some(Target::Hopf(m)) => assert_eq!(m.kind, HypersurfaceKind::Equidistant),
            other => panic!("{other:?}"),
        }
        let a = common(parse(&["verify", "--model", "P"]));
        assert_eq!(resolve_model(&a).unwrap(), Some(Target::ComplexHypersurface));
    }

    #[test]
    fn usage_errors() {
        let a = common(parse(&["verify", "--n", "2"]));
        assert_eq!(a.to_config("verify").unwrap_err().exit_code(), 2);
        let a = common(parse(&["verify", "--model", "tube"]));
        assert_eq!(a.to_config("verify").unwrap_err().exit_code(), 2);
        let a = common(parse(&["verify", "--model", "tube", "--alpha", "1.0"]));
        assert_eq!(a.to_config("verify").unwrap_err().exit_code(), 2);
        assert!(Cli::try_parse_from(["quadric-lab", "verify", "--r", "1", "--alpha", "3"]).is_err());
    }

    #[test]
    fn horocyclic_table() {
        let t = cmd_spectrum(5, Target::Hopf(HypersurfaceModel::horocyclic())).unwrap();
        let rows: Vec<(f64, usize)> = t.rows.iter().map(|r| (clean(r.value), r.multiplicity)).collect();
        assert_eq!(rows, vec![(2.0, 1), (1.0, 3), (0.0, 2), (-1.0, 3)]);
        assert_eq!(t.rows[0].eigenspace, "R xi");
        assert_eq!(t.rows[2].eigenspace, "C ⊖ Q");
    }
}
