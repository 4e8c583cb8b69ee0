//! Command-line front end of the `crackspec` binary.

pub mod config;
mod svg;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{fit_coefficient, model, select_law};
use crate::capacity::additivity;
use crate::discretize::assemble;
use crate::domain::{CrackedDiskSpec, QuarterCase, SectorProblem};
use crate::eigensolve::{lowest_eigenpairs_with, Method, SolverOptions, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::spectra::{
    detect_crossings, eigenfunction, nodal_domains, sweep, EigenvalueCurve, MergedSpectrum, SweepConfig, SweepFamily,
    DEFAULT_ZERO_TOL,
};
use crate::specfun::{annulus_spectrum, choose_r1, disk_spectrum, verify_radii_condition};
use crate::SCHEMA_VERSION;

/// Version line, including the schema version shared by every emitted file.
pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (schemas: csv 1, run-file 1, bessel-zeros 1, matrix-market 1)"
);

#[derive(Debug, Parser)]
#[command(name = "crackspec", version = VERSION, about = "Dirichlet spectra of disks with symmetric cracks")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat `key = value` run file; flags on the command line override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the table here instead of standard output.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// `auto` or a radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum R1Choice {
    Auto,
    Value(f64),
}

impl FromStr for R1Choice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(R1Choice::Auto)
        } else {
            s.parse().map(R1Choice::Value).map_err(|e| format!("expected `auto` or a number: {e}"))
        }
    }
}

impl R1Choice {
    fn resolve(self, r2: f64) -> Result<f64> {
        match self {
            R1Choice::Auto => choose_r1(r2),
            R1Choice::Value(v) => Ok(v),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Radii {
    /// Crack circle radius, or `auto` for the radius balancing disk and annulus.
    #[arg(long, default_value = "auto")]
    pub r1: R1Choice,
    #[arg(long, default_value_t = 1.0)]
    pub r2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Solver {
    /// Cells per direction in each sector.
    #[arg(short = 'M', long = "m", default_value_t = 180)]
    pub m: usize,
    /// Eigenvalues per sector.
    #[arg(short, long, default_value_t = 6)]
    pub k: usize,
    /// Residual tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Krylov,
    Dense,
}

impl Solver {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            method: match self.method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Krylov => Method::Krylov,
                MethodArg::Dense => Method::Dense,
            },
            ..SolverOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Floquet,
    Quarter,
}

#[derive(Debug, Clone, Args)]
pub struct Openings {
    /// Explicit openings; overrides the range below.
    #[arg(long, value_delimiter = ',')]
    pub epsilon_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    pub eps_min: f64,
    /// Defaults to pi/N.
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
}

impl Openings {
    fn resolve(&self, n: u32) -> Result<Vec<f64>> {
        if let Some(list) = &self.epsilon_list {
            return Ok(list.clone());
        }
        let hi = self.eps_max.unwrap_or(PI / n as f64);
        if self.steps < 2 {
            return Err(Error::validation(format!("need at least 2 steps, got {}", self.steps)));
        }
        let s = self.steps - 1;
        Ok((0..=s).map(|i| self.eps_min + (hi - self.eps_min) * i as f64 / s as f64).collect())
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[command(flatten)]
    pub radii: Radii,
    #[command(flatten)]
    pub openings: Openings,
    #[command(flatten)]
    pub solver: Solver,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Floquet)]
    pub family: FamilyArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form Dirichlet eigenvalues of a disk.
    DiskRef {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
    /// Closed-form Dirichlet eigenvalues of the annulus R1 < r < R2 per angular order.
    AnnulusRef {
        #[command(flatten)]
        radii: Radii,
        /// Only this angular order.
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, default_value_t = 5)]
        ell_max: u32,
        #[arg(long, default_value_t = 2)]
        count: usize,
    },
    /// Merged spectrum of one cracked disk from its Floquet sectors.
    Solve {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        radii: Radii,
        #[command(flatten)]
        solver: Solver,
        /// Add the nodal-domain count of each eigenfunction.
        #[arg(long)]
        nodal: bool,
        /// Write each sector operator as Matrix Market into this directory.
        #[arg(long, value_name = "DIR")]
        export_matrix: Option<PathBuf>,
    },
    /// Sector eigenvalue curves over a range of openings.
    Sweep {
        #[command(flatten)]
        args: SweepArgs,
        /// Also draw the curves as SVG.
        #[arg(long)]
        plot: bool,
        /// SVG path (default: output path with `.svg`, else `crackspec-sweep.svg`).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Openings at which curves of different sectors cross.
    Crossings {
        #[command(flatten)]
        args: SweepArgs,
        /// Report crossings of levels up to this rank.
        #[arg(long, default_value_t = 3)]
        rank: usize,
    },
    /// Quarter-disk curves near the closed crack against the two-term expansions.
    Asymptotics {
        /// NND, DDD, NDD, DND (default: all four).
        #[arg(long, value_delimiter = ',')]
        case: Vec<QuarterCase>,
        /// Fit a previously computed `quarter` CSV instead of solving.
        #[arg(long, value_name = "CSV")]
        fit: Option<PathBuf>,
        #[command(flatten)]
        radii: Radii,
        #[arg(short = 'M', long = "m", default_value_t = 180)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Values of pi/2 - epsilon.
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.25,0.2,0.15,0.1,0.075,0.05,0.03,0.02,0.01")]
        deltas: Vec<f64>,
        /// Use the computed endpoint eigenvalue as the limit instead of the closed form.
        #[arg(long)]
        discrete_limit: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Condenser capacity of two antipodal arcs and of each arc alone.
    Capacity {
        #[command(flatten)]
        radii: Radii,
        #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
        delta_list: Vec<f64>,
        #[arg(short = 'M', long = "m", default_value_t = 180)]
        m: usize,
    },
    /// Quarter-disk problems of the two-crack disk.
    Quarter {
        /// NND, DDD, NDD, DND (default: all four).
        #[arg(long, value_delimiter = ',')]
        case: Vec<QuarterCase>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        epsilon_list: Option<Vec<f64>>,
        #[command(flatten)]
        radii: Radii,
        #[command(flatten)]
        solver: Solver,
        /// Emit lambda_1(NDD) - lambda_1(DND) instead of the spectra.
        #[arg(long)]
        gap: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Runs the binary on `argv` and returns the exit status.
pub fn run(argv: Vec<String>) -> i32 {
    let argv = match config::merge_args(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("crackspec: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("crackspec: {e}");
            e.exit_code()
        }
    }
}

/// Resolved configuration written as comment lines above every table.
struct Header {
    lines: Vec<String>,
}

impl Header {
    fn new(command: &str) -> Self {
        Header {
            lines: vec![format!(
                "crackspec {} schema={SCHEMA_VERSION} command={command}",
                env!("CARGO_PKG_VERSION")
            )],
        }
    }

    fn kv(mut self, pairs: &[(&str, String)]) -> Self {
        let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        self.lines.push(body.join(" "));
        self
    }

    fn line(mut self, text: String) -> Self {
        self.lines.push(text);
        self
    }

    fn render(&self) -> String {
        self.lines.iter().map(|l| format!("# {l}\n")).collect()
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn emit(cli: &Cli, header: Header, table: &str) -> Result<()> {
    let text = format!("{}{}", header.render(), table);
    match &cli.output {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::DiskRef { radius, count } => {
            let spec = disk_spectrum(*radius, *count)?;
            let mut t = String::from("lambda,ell,k,multiplicity\n");
            for e in &spec.entries {
                let _ = writeln!(t, "{},{},{},{}", e.eigenvalue, e.ell, e.k, e.multiplicity);
            }
            let h = Header::new("disk-ref").kv(&[("radius", radius.to_string()), ("count", count.to_string())]);
            emit(cli, h, &t)
        }
        Command::AnnulusRef { radii, ell, ell_max, count } => {
            let r1 = radii.r1.resolve(radii.r2)?;
            let cond = verify_radii_condition(r1, radii.r2)?;
            let orders = match ell {
                Some(l) => *l..=*l,
                None => 0..=*ell_max,
            };
            let mut t = String::from("lambda,ell,k,multiplicity\n");
            for ell in orders {
                let mult = if ell == 0 { 1 } else { 2 };
                for (k, v) in annulus_spectrum(r1, radii.r2, ell, *count)?.iter().enumerate() {
                    let _ = writeln!(t, "{v},{ell},{},{mult}", k + 1);
                }
            }
            let h = Header::new("annulus-ref")
                .kv(&[
                    ("r1", r1.to_string()),
                    ("r2", radii.r2.to_string()),
                    ("ell", ell.map_or_else(|| format!("0..={ell_max}"), |l| l.to_string())),
                    ("count", count.to_string()),
                ])
                .kv(&[
                    ("radii_condition_strict", cond.strict.to_string()),
                    ("radii_condition_weak", cond.weak.to_string()),
                    ("lambda1_inner", cond.lambda1_inner.to_string()),
                    ("lambda1_annulus", cond.lambda1_annulus.to_string()),
                ]);
            emit(cli, h, &t)
        }
        Command::Solve { n, epsilon, radii, solver, nodal, export_matrix } => {
            solve(cli, *n, *epsilon, radii, solver, *nodal, export_matrix.as_ref())
        }
        Command::Sweep { args, plot, svg } => {
            let (curve, r1) = run_sweep(args)?;
            let mut t = String::from("epsilon,sector,index,lambda,residual\n");
            for (ti, e) in curve.epsilon.iter().enumerate() {
                for c in &curve.sectors {
                    for (i, (l, r)) in c.values[ti].iter().zip(&c.residuals[ti]).enumerate() {
                        let _ = writeln!(t, "{e},{},{},{l},{r:e}", c.tag, i + 1);
                    }
                }
            }
            if *plot {
                let path = svg.clone().unwrap_or_else(|| match &cli.output {
                    Some(p) => p.with_extension("svg"),
                    None => PathBuf::from("crackspec-sweep.svg"),
                });
                std::fs::write(path, plot_curve(&curve))?;
            }
            emit(cli, sweep_header("sweep", args, r1, &curve), &t)
        }
        Command::Crossings { args, rank } => {
            let (curve, r1) = run_sweep(args)?;
            let events = detect_crossings(&curve, *rank)?;
            let mut t = String::from("epsilon_star,lambda_star,rank,multiplicity,sectorA,sectorB\n");
            for e in &events {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{}",
                    e.epsilon_star, e.lambda_star, e.rank, e.multiplicity, e.sectors.0, e.sectors.1
                );
            }
            let h = sweep_header("crossings", args, r1, &curve).kv(&[("rank", rank.to_string())]);
            emit(cli, h, &t)
        }
        Command::Asymptotics { case, fit, radii, m, tol, deltas, discrete_limit, jobs } => {
            let cases = if case.is_empty() { QuarterCase::ALL.to_vec() } else { case.clone() };
            let run = AsymptoticsRun { cases, radii, m: *m, tol: *tol, discrete_limit: *discrete_limit };
            match fit {
                Some(path) => asymptotics_from_file(cli, &run, path),
                None => asymptotics(cli, &run, deltas, *jobs),
            }
        }
        Command::Capacity { radii, delta_list, m } => {
            let r1 = radii.r1.resolve(radii.r2)?;
            let mut t = String::from("delta,cap_total,cap_plus,cap_minus,ratio\n");
            for &d in delta_list {
                let p = additivity(r1, radii.r2, d, *m)?;
                let _ = writeln!(t, "{d},{},{},{},{}", p.cap_total, p.cap_plus, p.cap_minus, p.ratio);
            }
            let h = Header::new("capacity").kv(&[
                ("r1", r1.to_string()),
                ("r2", radii.r2.to_string()),
                ("m", m.to_string()),
                ("m_theta", m.to_string()),
                ("delta_list", join(delta_list)),
            ]);
            emit(cli, h, &t)
        }
        Command::Quarter { case, epsilon, epsilon_list, radii, solver, gap, jobs } => {
            quarter(cli, case, *epsilon, epsilon_list.as_deref(), radii, solver, *gap, *jobs)
        }
    }
}

fn solve(
    cli: &Cli,
    n: u32,
    epsilon: f64,
    radii: &Radii,
    solver: &Solver,
    nodal: bool,
    export: Option<&PathBuf>,
) -> Result<()> {
    let r1 = radii.r1.resolve(radii.r2)?;
    let spec = CrackedDiskSpec::new(n, epsilon, r1, radii.r2)?;
    let opts = solver.options();
    let mut spectra = Vec::new();
    let mut ops = Vec::new();
    for (p, _) in crate::domain::reduce_to_sectors(&spec) {
        let op = assemble(&p, solver.m)?;
        if let Some(dir) = export {
            std::fs::create_dir_all(dir)?;
            let name = format!("sector_{}.mtx", p.tag().label().replace('=', ""));
            op.write_matrix_market(std::io::BufWriter::new(std::fs::File::create(dir.join(name))?))?;
        }
        spectra.push(lowest_eigenpairs_with(&op, solver.k, &opts)?);
        ops.push(op);
    }
    let snapped = spectra[0].epsilon_snapped;
    let merged = MergedSpectrum::from_sectors(spectra);
    let mut t = String::from(if nodal {
        "lambda,multiplicity,sector,sector_index,residual,nodal_domains\n"
    } else {
        "lambda,multiplicity,sector,sector_index,residual\n"
    });
    for e in &merged.entries {
        let _ = write!(t, "{},{},{},{},{:e}", e.eigenvalue, e.sector.weight, e.sector, e.index + 1, e.residual);
        if nodal {
            let s = merged.sectors.iter().position(|s| s.sector == e.sector).expect("sector present");
            let f = eigenfunction(&ops[s], &merged.sectors[s], e.index)?;
            let _ = write!(t, ",{}", nodal_domains(&f, DEFAULT_ZERO_TOL)?.domains);
        }
        t.push('\n');
    }
    let h = Header::new("solve")
        .kv(&[
            ("n", n.to_string()),
            ("epsilon", epsilon.to_string()),
            ("epsilon_snapped", snapped.to_string()),
            ("r1", r1.to_string()),
            ("r1_snapped", r1.to_string()),
            ("r2", radii.r2.to_string()),
        ])
        .kv(&solver_pairs(solver))
        .line(format!("levels={}", {
            let tol = merged.default_cluster_tol();
            merged
                .levels(tol)
                .iter()
                .map(|c| format!("{}x{}", c.eigenvalue, c.multiplicity))
                .collect::<Vec<_>>()
                .join(";")
        }));
    emit(cli, h, &t)
}

fn solver_pairs(s: &Solver) -> Vec<(&'static str, String)> {
    vec![
        ("m", s.m.to_string()),
        ("m_theta", s.m.to_string()),
        ("k", s.k.to_string()),
        ("tol", s.tol.to_string()),
        ("method", format!("{:?}", s.method).to_lowercase()),
    ]
}

fn run_sweep(args: &SweepArgs) -> Result<(EigenvalueCurve, f64)> {
    let r1 = args.radii.r1.resolve(args.radii.r2)?;
    let eps = args.openings.resolve(args.n)?;
    let template = CrackedDiskSpec::new(args.n, eps[0], r1, args.radii.r2)?;
    let config = SweepConfig {
        m: args.solver.m,
        k: args.solver.k,
        tol: args.solver.tol,
        jobs: args.jobs,
        family: match args.family {
            FamilyArg::Floquet => SweepFamily::Floquet,
            FamilyArg::Quarter => SweepFamily::Quarter,
        },
    };
    Ok((sweep(&template, &eps, &config)?, r1))
}

fn sweep_header(command: &str, args: &SweepArgs, r1: f64, curve: &EigenvalueCurve) -> Header {
    Header::new(command)
        .kv(&[
            ("n", args.n.to_string()),
            ("r1", r1.to_string()),
            ("r1_snapped", r1.to_string()),
            ("r2", args.radii.r2.to_string()),
            ("family", format!("{:?}", args.family).to_lowercase()),
            ("jobs", args.jobs.map_or("auto".into(), |j| j.to_string())),
        ])
        .kv(&solver_pairs(&args.solver))
        .line(format!("epsilon={}", join(&curve.epsilon)))
        .line(format!("epsilon_snapped={}", join(&curve.epsilon_snapped)))
}

fn plot_curve(curve: &EigenvalueCurve) -> String {
    let mut series = Vec::new();
    for c in &curve.sectors {
        let k = c.values.first().map_or(0, |v| v.len());
        for i in 0..k {
            series.push(svg::Series {
                group: format!("{} (x{})", c.tag, c.tag.weight),
                points: curve.epsilon_snapped.iter().zip(&c.values).map(|(&e, v)| (e, v[i])).collect(),
            });
        }
    }
    let lo = curve.epsilon_snapped.first().copied().unwrap_or(0.0);
    let hi = curve.epsilon_snapped.last().copied().unwrap_or(0.0);
    svg::line_plot(
        &format!(
            "N={}, R1={:.4}, R2={}: sector eigenvalues",
            curve.template.n(),
            curve.template.r1(),
            curve.template.r2()
        ),
        &format!("snapped epsilon in [{lo:.4}, {hi:.4}]"),
        "lambda",
        &series,
    )
}

struct AsymptoticsRun<'a> {
    cases: Vec<QuarterCase>,
    radii: &'a Radii,
    m: usize,
    tol: f64,
    discrete_limit: bool,
}

/// Lowest eigenvalue of one quarter case on ascending epsilon, the last point
/// being the endpoint pi/2.
struct CaseCurve {
    case: QuarterCase,
    epsilon: Vec<f64>,
    lambda: Vec<f64>,
}

fn asymptotics(cli: &Cli, run: &AsymptoticsRun, deltas: &[f64], jobs: Option<usize>) -> Result<()> {
    let r1 = run.radii.r1.resolve(run.radii.r2)?;
    let mut eps: Vec<f64> = deltas.iter().map(|d| PI / 2.0 - d).collect();
    eps.sort_by(f64::total_cmp);
    eps.push(PI / 2.0);
    let template = CrackedDiskSpec::new(2, eps[0], r1, run.radii.r2)?;
    let config = SweepConfig { m: run.m, k: 1, tol: run.tol, jobs, family: SweepFamily::Cases(run.cases.clone()) };
    let curve = sweep(&template, &eps, &config)?;
    let mut curves = Vec::new();
    for c in &curve.sectors {
        let crate::domain::SectorKind::Quarter(case) = c.tag.kind else { continue };
        curves.push(CaseCurve { case, epsilon: eps.clone(), lambda: c.values.iter().map(|v| v[0]).collect() });
    }
    let h = Header::new("asymptotics")
        .kv(&[
            ("r1", r1.to_string()),
            ("r2", run.radii.r2.to_string()),
            ("m", run.m.to_string()),
            ("tol", run.tol.to_string()),
            ("limit", if run.discrete_limit { "discrete" } else { "closed_form" }.into()),
        ])
        .line(format!("epsilon_snapped={}", join(&curve.epsilon_snapped)));
    emit(cli, h, &fit_table(&curves, r1, run.radii.r2, run.discrete_limit)?)
}

fn asymptotics_from_file(cli: &Cli, run: &AsymptoticsRun, path: &std::path::Path) -> Result<()> {
    let r1 = run.radii.r1.resolve(run.radii.r2)?;
    let text = std::fs::read_to_string(path)?;
    let mut curves = Vec::new();
    for &case in &run.cases {
        let points = read_quarter_csv(&text, case)?;
        if points.is_empty() {
            continue;
        }
        let (mut epsilon, mut lambda): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if (epsilon.last().copied().unwrap_or(0.0) - PI / 2.0).abs() > 1e-9 {
            // No endpoint row: the closed-form limit stands in.
            let limit = model(case, r1, run.radii.r2)?.lambda_limit;
            epsilon.push(PI / 2.0);
            lambda.push(limit);
        }
        curves.push(CaseCurve { case, epsilon, lambda });
    }
    if curves.is_empty() {
        return Err(Error::validation(format!("{} holds no index-1 rows for the requested cases", path.display())));
    }
    let h = Header::new("asymptotics").kv(&[
        ("r1", r1.to_string()),
        ("r2", run.radii.r2.to_string()),
        ("fit", path.display().to_string()),
        ("limit", if run.discrete_limit { "discrete" } else { "closed_form" }.into()),
    ]);
    emit(cli, h, &fit_table(&curves, r1, run.radii.r2, run.discrete_limit)?)
}

/// `(epsilon_snapped, lambda)` of the index-1 rows of `case` in a `quarter` CSV, ascending.
fn read_quarter_csv(text: &str, case: QuarterCase) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| h.trim() == name);
    let eps_col = col("epsilon_snapped")
        .or_else(|| col("epsilon"))
        .ok_or_else(|| Error::Parse("CSV lacks an epsilon column".into()))?;
    let lam_col = col("lambda").ok_or_else(|| Error::Parse("CSV lacks a lambda column".into()))?;
    let case_col = col("case");
    let index_col = col("index");
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (no, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("CSV row {}: {line:?}", no + 2));
        if f.len() != header.len() {
            return Err(bad());
        }
        if let Some(c) = case_col {
            if f[c].parse::<QuarterCase>().map_err(|_| bad())? != case {
                continue;
            }
        }
        if let Some(i) = index_col {
            if f[i] != "1" {
                continue;
            }
        }
        out.push((f[eps_col].parse().map_err(|_| bad())?, f[lam_col].parse().map_err(|_| bad())?));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn fit_table(curves: &[CaseCurve], r1: f64, r2: f64, discrete_limit: bool) -> Result<String> {
    let mut t = String::from(
        "case,law,status,lambda_limit,coefficient,delta_max,points,c_hat,ratio,rms_residual,preferred_law\n",
    );
    for c in curves {
        let md = model(c.case, r1, r2)?;
        let tail = c.epsilon.len() - 1;
        let limit = if discrete_limit { c.lambda[tail] } else { md.lambda_limit };
        let fit = fit_coefficient(&c.epsilon[..tail], &c.lambda[..tail], md.law, limit, Some(md.coefficient))?;
        let sel = select_law(&c.epsilon[..tail], &c.lambda[..tail], limit)?;
        for w in &fit.windows {
            let _ = writeln!(
                t,
                "{},{},{},{limit},{},{},{},{},{},{},{}",
                c.case,
                md.law,
                md.status.label(),
                md.coefficient,
                w.delta_max,
                w.points,
                w.c_hat,
                w.ratio,
                w.rms_residual,
                sel.preferred
            );
        }
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn quarter(
    cli: &Cli,
    cases: &[QuarterCase],
    epsilon: Option<f64>,
    epsilon_list: Option<&[f64]>,
    radii: &Radii,
    solver: &Solver,
    gap: bool,
    jobs: Option<usize>,
) -> Result<()> {
    let r1 = radii.r1.resolve(radii.r2)?;
    let eps: Vec<f64> = match (epsilon, epsilon_list) {
        (_, Some(l)) => l.to_vec(),
        (Some(e), None) => vec![e],
        (None, None) => return Err(Error::validation("quarter needs --epsilon or --epsilon-list")),
    };
    let cases: Vec<QuarterCase> = if gap {
        vec![QuarterCase::Ndd, QuarterCase::Dnd]
    } else if cases.is_empty() {
        QuarterCase::ALL.to_vec()
    } else {
        cases.to_vec()
    };
    let template = CrackedDiskSpec::new(2, eps[0], r1, radii.r2)?;
    // Validates the cases against the geometry before any solve.
    for &c in &cases {
        SectorProblem::quarter(template, c)?;
    }
    let config = SweepConfig {
        m: solver.m,
        k: if gap { 1 } else { solver.k },
        tol: solver.tol,
        jobs,
        family: SweepFamily::Cases(cases),
    };
    let curve = sweep(&template, &eps, &config)?;
    let mut t = String::new();
    if gap {
        t.push_str("epsilon,epsilon_snapped,ndd,dnd,gap\n");
        for ti in 0..curve.len() {
            let (a, b) = (curve.sectors[0].values[ti][0], curve.sectors[1].values[ti][0]);
            let _ = writeln!(t, "{},{},{a},{b},{}", curve.epsilon[ti], curve.epsilon_snapped[ti], a - b);
        }
    } else {
        t.push_str("epsilon,epsilon_snapped,case,index,lambda,residual\n");
        for ti in 0..curve.len() {
            for c in &curve.sectors {
                for (i, (l, r)) in c.values[ti].iter().zip(&c.residuals[ti]).enumerate() {
                    let _ = writeln!(
                        t,
                        "{},{},{},{},{l},{r:e}",
                        curve.epsilon[ti],
                        curve.epsilon_snapped[ti],
                        c.tag,
                        i + 1
                    );
                }
            }
        }
    }
    let h = Header::new("quarter")
        .kv(&[
            ("r1", r1.to_string()),
            ("r1_snapped", r1.to_string()),
            ("r2", radii.r2.to_string()),
            ("gap", gap.to_string()),
        ])
        .kv(&solver_pairs(solver))
        .line(format!("epsilon_snapped={}", join(&curve.epsilon_snapped)));
    emit(cli, h, &t)
}
