//! `fracrh` command line: `check`, `region`, `derive` and `oracle-compare` over a TOML
//! job file, with flags overriding file values.

pub mod job;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::anyhow;
use clap::Parser;

use fracrh::closed_forms::{
    compare_with_reference, corollary_verdict, derive_reduced_conditions, monomial_text,
    ConditionStatus, MALFORMED_TOKEN_LITERAL, MAX_DERIVE_ORDER,
};
use fracrh::export::{gnuplot_script, write_csv, write_pgm};
use fracrh::hurwitz::{is_degenerate, theorem1_verdict};
use fracrh::oracles::{argument_oracle, embedding_verdict};
use fracrh::region::{instantiate, scan_region, CellCode, ScanOptions, System};
use fracrh::sampling::{random_matrices, DEFAULT_SEED};
use fracrh::{Method, Outcome, RealPolynomial, SquareMatrix, StabilityVerdict};

use job::{
    build_system, fixed_values, point_values, square_matrix, DegenerateSpec, Format, JobSpec, Kind,
    MatrixLiteral, SystemSpec,
};

pub const EXIT_STABLE: i32 = 0;
pub const EXIT_NOT_STABLE: i32 = 1;
pub const EXIT_BOUNDARY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "fracrh",
    version,
    about = "Stability of fractional-order linear systems with order in [1, 2)"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Kind,
    /// TOML job file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Fractional order in [1, 2); overrides the job file.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Relative tolerance for treating a minor as zero.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Region scan threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Seed for random batches (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for region files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write a gnuplot script for the CSV.
    #[arg(long)]
    pub plot_script: bool,
    /// Random batch size for oracle-compare.
    #[arg(long)]
    pub random: Option<usize>,
    /// System order for derive and random batches.
    #[arg(long)]
    pub order: Option<usize>,
    /// Inline matrix, e.g. "[[-1, 3], [0, -1]]".
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// How cells with sin(nαπ/2) = 0 are reported.
    #[arg(long, value_enum)]
    pub degenerate: Option<DegenerateSpec>,
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

type CmdResult = std::result::Result<i32, Failure>;

fn input_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: e.into(),
    }
}

fn io_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_IO,
        error: e.into(),
    }
}

fn core_error(e: fracrh::Error) -> Failure {
    use fracrh::Error as E;
    let code = match e {
        E::NoConvergence { .. } | E::NoBracket(_) => EXIT_SOFTWARE,
        _ => EXIT_USAGE,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn report_io(e: io::Error) -> Failure {
    io_error(anyhow!(e).context("writing report"))
}

/// Parses `args` (including the program name), runs the command and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let req = Request::new(cli)?;
    match cli.command {
        Kind::Check => cmd_check(&req, out),
        Kind::Region => cmd_region(&req, out),
        Kind::Derive => cmd_derive(&req, out),
        Kind::OracleCompare => cmd_oracle_compare(&req, out),
    }
}

/// A job file merged with command-line overrides.
pub struct Request {
    pub job: JobSpec,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot_script: bool,
    pub random: Option<usize>,
    pub order: Option<usize>,
    pub degenerate: Option<DegenerateSpec>,
    pub tol: Option<f64>,
}

impl Request {
    pub fn new(cli: &Cli) -> std::result::Result<Self, Failure> {
        let mut job = match &cli.input {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    io_error(anyhow!(e).context(format!("reading {}", path.display())))
                })?;
                let job = JobSpec::parse(&text)
                    .map_err(|e| input_error(e.context(path.display().to_string())))?;
                if job.kind != cli.command {
                    return Err(input_error(anyhow!(
                        "field 'kind': job file is for '{}', command is '{}'",
                        kind_name(job.kind),
                        kind_name(cli.command)
                    )));
                }
                job
            }
            None => JobSpec::new(cli.command),
        };
        if let Some(a) = cli.alpha {
            fracrh::check_alpha(a)
                .map_err(|e| input_error(anyhow!(e).context("flag '--alpha'")))?;
            job.alpha = Some(a);
        }
        if let Some(text) = &cli.matrix {
            let lit = parse_matrix_flag(text).map_err(input_error)?;
            job.system = Some(SystemSpec {
                matrix: Some(lit),
                ..SystemSpec::default()
            });
        }
        if let Some(t) = cli.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(input_error(anyhow!(
                    "flag '--tol': must be a non-negative number"
                )));
            }
        }
        let scan = job.scan.clone().unwrap_or_default();
        let output = job.output.clone().unwrap_or_default();
        let random = job.random.clone();
        Ok(Self {
            workers: cli.workers.or(scan.workers),
            seed: cli.seed.or(random.as_ref().and_then(|r| r.seed)),
            out: cli.out.clone().or(output.dir.map(PathBuf::from)),
            format: cli.format.or(output.format),
            plot_script: cli.plot_script || output.plot_script.unwrap_or(false),
            random: cli.random.or(random.as_ref().map(|r| r.count)),
            order: cli
                .order
                .or(random.as_ref().map(|r| r.order))
                .or(job.derive.as_ref().map(|d| d.order)),
            degenerate: cli.degenerate.or(scan.degenerate),
            tol: cli.tol,
            job,
        })
    }

    pub fn boundary_tol(&self) -> f64 {
        self.tol
            .or(self.job.tolerances.as_ref().and_then(|t| t.boundary))
            .unwrap_or(fracrh::DEFAULT_BOUNDARY_TOL)
    }

    pub fn angle_tol(&self) -> f64 {
        self.job
            .tolerances
            .as_ref()
            .and_then(|t| t.angle)
            .unwrap_or(fracrh::DEFAULT_ANGLE_TOL)
    }

    fn alpha(&self) -> std::result::Result<f64, Failure> {
        self.job
            .alpha
            .ok_or_else(|| input_error(anyhow!("field 'alpha': required (or pass --alpha)")))
    }

    fn system_spec(&self) -> std::result::Result<&SystemSpec, Failure> {
        self.job
            .system
            .as_ref()
            .ok_or_else(|| input_error(anyhow!("field 'system': required (or pass --matrix)")))
    }

    fn degenerate_policy(&self) -> DegenerateSpec {
        self.degenerate.unwrap_or_default()
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Check => "check",
        Kind::Region => "region",
        Kind::Derive => "derive",
        Kind::OracleCompare => "oracle-compare",
    }
}

fn parse_matrix_flag(text: &str) -> anyhow::Result<MatrixLiteral> {
    #[derive(serde::Deserialize)]
    struct Wrap {
        m: MatrixLiteral,
    }
    let w: Wrap = toml::from_str(&format!("m = {text}"))
        .map_err(|e| anyhow!("flag '--matrix': {}", e.message()))?;
    square_matrix(&w.m, "--matrix")?;
    Ok(w.m)
}

/// `%.{digits}g`: shortest of fixed and scientific, trailing zeros removed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g12(x: f64) -> String {
    fmt_sig(x, 12)
}

fn join_g12(xs: &[f64]) -> String {
    xs.iter().map(|&x| g12(x)).collect::<Vec<_>>().join(" ")
}

fn outcome_code(o: Outcome) -> i32 {
    match o {
        Outcome::Stable => EXIT_STABLE,
        Outcome::NotStable => EXIT_NOT_STABLE,
        Outcome::Boundary => EXIT_BOUNDARY,
    }
}

/// Characteristic polynomial of the system at its `point`, with the point.
fn single_polynomial(
    req: &Request,
    alpha: f64,
) -> std::result::Result<(RealPolynomial, Vec<f64>), Failure> {
    let spec = req.system_spec()?;
    let sys = build_system(spec, Some(alpha)).map_err(input_error)?;
    let point = point_values(spec).map_err(input_error)?;
    Ok((sys.polynomial_at(alpha, &point).map_err(core_error)?, point))
}

fn write_point(out: &mut dyn Write, names: &[String], point: &[f64]) -> io::Result<()> {
    if !names.is_empty() {
        let parts: Vec<String> = names
            .iter()
            .zip(point)
            .map(|(p, v)| format!("{p} = {}", g12(*v)))
            .collect();
        writeln!(out, "point: {}", parts.join(", "))?;
    }
    Ok(())
}

fn write_verdict_values(out: &mut dyn Write, v: &StabilityVerdict, label: &str) -> io::Result<()> {
    for (i, m) in v.minors.iter().enumerate() {
        writeln!(out, "  {label}_{} = {}", i + 1, g12(*m))?;
    }
    Ok(())
}

/// Even-minor verdict for one system, with closed-form values for `n ≤ 4`.
pub fn cmd_check(req: &Request, out: &mut dyn Write) -> CmdResult {
    let alpha = req.alpha()?;
    let tol = req.boundary_tol();
    let (f, point) = single_polynomial(req, alpha)?;
    let f = &f;
    let n = f.degree();
    let v = theorem1_verdict(f, alpha, tol).map_err(core_error)?;
    let degenerate = is_degenerate(n, alpha);
    let w = &mut *out;
    (|| -> io::Result<()> {
        writeln!(w, "alpha: {}", g12(alpha))?;
        write_point(w, &req.system_spec().expect("checked above").params, &point)?;
        writeln!(w, "order: {n}")?;
        writeln!(w, "coefficients: {}", join_g12(f.coeffs()))?;
        if degenerate {
            writeln!(
                w,
                "degenerate: sin({n}*alpha*pi/2) = 0, decided by the eigenvalue arguments"
            )?;
            writeln!(w, "margins (|arg lambda| - alpha*pi/2):")?;
            write_verdict_values(w, &v, "margin")?;
        } else {
            writeln!(w, "minors:")?;
            write_verdict_values(w, &v, "nabla")?;
        }
        writeln!(w, "method: {}", v.method)?;
        writeln!(w, "outcome: {}", v.outcome)?;
        Ok(())
    })()
    .map_err(report_io)?;
    if n <= 4 {
        let c = corollary_verdict(f, alpha, tol).map_err(core_error)?;
        (|| -> io::Result<()> {
            writeln!(w, "closed form (s = {}):", g12(fracrh::s_of_alpha(alpha)))?;
            write_verdict_values(w, &c, "c")?;
            writeln!(w, "closed-form outcome: {}", c.outcome)
        })()
        .map_err(report_io)?;
    }
    if degenerate && req.degenerate_policy() == DegenerateSpec::Mark {
        writeln!(
            w,
            "status: Degenerate (pass --degenerate delegate to use the outcome above)"
        )
        .map_err(report_io)?;
        return Ok(EXIT_BOUNDARY);
    }
    Ok(outcome_code(v.outcome))
}

fn region_stem(req: &Request) -> String {
    req.job
        .output
        .as_ref()
        .and_then(|o| o.stem.clone())
        .unwrap_or_else(|| "region".into())
}

/// Rasters the stable region and writes CSV / PGM / gnuplot files.
pub fn cmd_region(req: &Request, out: &mut dyn Write) -> CmdResult {
    let spec = req.system_spec()?;
    let alpha_axis = req.job.alpha_axis().is_some();
    let alpha = if alpha_axis {
        if req.job.alpha.is_some() {
            return Err(input_error(anyhow!("field 'alpha': alpha is also an axis")));
        }
        None
    } else {
        Some(req.alpha()?)
    };
    if req.job.axes.is_empty() || req.job.axes.len() > 3 {
        return Err(input_error(anyhow!(
            "field 'axes': region scans take 1 to 3 axes, got {}",
            req.job.axes.len()
        )));
    }
    let axes = req
        .job
        .axes
        .iter()
        .map(|a| a.to_axis())
        .collect::<anyhow::Result<Vec<_>>>()
        .map_err(input_error)?;
    let sys = build_system(spec, alpha).map_err(input_error)?;
    let fixed: Vec<(String, f64)> = fixed_values(spec)
        .map_err(input_error)?
        .into_iter()
        .filter(|(k, _)| !axes.iter().any(|a| a.name == *k))
        .collect();
    let format = req.format.unwrap_or_default();
    if format == Format::Pgm && axes.len() != 2 {
        return Err(input_error(anyhow!(
            "field 'output.format': PGM output needs exactly two axes"
        )));
    }
    let opts = ScanOptions {
        tol: req.boundary_tol(),
        workers: req.workers.unwrap_or(0),
        degenerate: req.degenerate_policy().policy(),
        route: req
            .job
            .scan
            .as_ref()
            .and_then(|s| s.route)
            .unwrap_or_default()
            .route(),
    };
    let start = Instant::now();
    let raster = scan_region(&sys, &axes, &fixed, &opts).map_err(core_error)?;
    log::info!(
        "scanned {} cells in {:.3} s",
        raster.len(),
        start.elapsed().as_secs_f64()
    );

    let dir = req.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| io_error(anyhow!(e).context(format!("creating {}", dir.display()))))?;
    let stem = region_stem(req);
    let mut written = Vec::new();
    let csv_path = dir.join(format!("{stem}.csv"));
    if format != Format::Pgm {
        write_file(&csv_path, |w| write_csv(&raster, w))?;
        written.push(csv_path.clone());
    }
    if format != Format::Csv && axes.len() == 2 {
        let p = dir.join(format!("{stem}.pgm"));
        write_file(&p, |w| write_pgm(&raster, w))?;
        written.push(p);
    }
    if req.plot_script {
        if format == Format::Pgm {
            return Err(input_error(anyhow!(
                "flag '--plot-script': the plot script reads the CSV output"
            )));
        }
        let p = dir.join(format!("{stem}.gp"));
        let csv_name = csv_path
            .file_name()
            .expect("file name")
            .to_string_lossy()
            .into_owned();
        let script = gnuplot_script(&raster, &csv_name, &stem);
        fs::write(&p, script)
            .map_err(|e| io_error(anyhow!(e).context(format!("writing {}", p.display()))))?;
        written.push(p);
    }

    let w = &mut *out;
    (|| -> io::Result<()> {
        let names: Vec<&str> = raster.axes.iter().map(|a| a.name.as_str()).collect();
        let dims: Vec<String> = raster.axes.iter().map(|a| a.count.to_string()).collect();
        writeln!(w, "axes: {} ({} cells)", names.join(" x "), dims.join(" x "))?;
        match alpha {
            Some(a) => writeln!(w, "alpha: {}", g12(a))?,
            None => writeln!(w, "alpha: axis")?,
        }
        writeln!(w, "method: {}", raster.method)?;
        for code in [CellCode::Stable, CellCode::NotStable, CellCode::Boundary, CellCode::Degenerate] {
            writeln!(w, "{:?}: {}", code, raster.count(code))?;
        }
        writeln!(w, "stable fraction: {:.6}", raster.stable_fraction())?;
        match raster.stable_bounding_box() {
            Some(bbox) => {
                writeln!(w, "stable bounding box:")?;
                for (ax, (lo, hi)) in raster.axes.iter().zip(bbox) {
                    writeln!(w, "  {} in [{}, {}]", ax.name, g12(lo), g12(hi))?;
                }
            }
            None => writeln!(w, "warning: no stable cells in the scanned box")?,
        }
        if raster.count(CellCode::Degenerate) > 0 {
            writeln!(
                w,
                "note: degenerate cells (sin(n*alpha*pi/2) = 0) are marked; pass --degenerate delegate to decide them"
            )?;
        }
        if format == Format::Both && raster.axes.len() != 2 {
            writeln!(w, "note: PGM skipped; it needs exactly two axes")?;
        }
        for p in &written {
            writeln!(w, "wrote: {}", p.file_name().expect("file name").to_string_lossy())?;
        }
        Ok(())
    })()
    .map_err(report_io)?;
    Ok(0)
}

fn write_file<F>(path: &Path, body: F) -> std::result::Result<(), Failure>
where
    F: FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>,
{
    let ctx = || format!("writing {}", path.display());
    let file = fs::File::create(path).map_err(|e| io_error(anyhow!(e).context(ctx())))?;
    let mut w = io::BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| io_error(anyhow!(e).context(ctx())))
}

/// Symbolic reduced conditions for order `n`, diffed against the published forms for
/// `n ≤ 4`.
pub fn cmd_derive(req: &Request, out: &mut dyn Write) -> CmdResult {
    let n = req
        .order
        .ok_or_else(|| input_error(anyhow!("field 'derive.order': required (or pass --order)")))?;
    if !(2..=MAX_DERIVE_ORDER).contains(&n) {
        return Err(input_error(anyhow!(
            "field 'derive.order': {n} is outside 2..={MAX_DERIVE_ORDER}"
        )));
    }
    let start = Instant::now();
    let derived = derive_reduced_conditions(n).map_err(core_error)?;
    log::info!(
        "derived order {n} in {:.3} s",
        start.elapsed().as_secs_f64()
    );
    let names = derived.names();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let texts = derived.to_text();
    let comparison = if n <= 4 {
        Some(compare_with_reference(&derived).map_err(core_error)?)
    } else {
        None
    };
    let w = &mut *out;
    (|| -> io::Result<()> {
        writeln!(w, "order: {n}")?;
        writeln!(w, "variables: {} (s = cos^2(alpha*pi/2))", names.join(", "))?;
        for (i, ((text, p), k)) in texts.iter().zip(&derived.polys).zip(&derived.sin_power_removed).enumerate() {
            writeln!(
                w,
                "condition {}: {text} > 0    [{} terms, sin^{k}(alpha*pi/2) removed]",
                i + 1,
                p.len()
            )?;
        }
        let Some(cmp) = &comparison else {
            return writeln!(w, "published forms: none for order {n}");
        };
        writeln!(w, "published forms:")?;
        for c in cmp {
            match &c.status {
                ConditionStatus::Match { sign_flipped: false } => writeln!(w, "  condition {}: match", c.index)?,
                ConditionStatus::Match { sign_flipped: true } => {
                    writeln!(w, "  condition {}: match (published with the opposite sign)", c.index)?
                }
                ConditionStatus::Mismatch { diffs } => {
                    let token = diffs.iter().filter(|d| d.explained_by_token).count();
                    writeln!(
                        w,
                        "  condition {}: mismatch, {} differing terms ({} touched by the run-together product \"{}\")",
                        c.index,
                        diffs.len(),
                        token,
                        MALFORMED_TOKEN_LITERAL
                    )?;
                    for d in diffs {
                        writeln!(
                            w,
                            "    {}: derived {}, published {}{}",
                            monomial_text(&d.exponents, &refs),
                            d.derived,
                            d.published,
                            if d.explained_by_token { "  (token)" } else { "" }
                        )?;
                    }
                }
            }
        }
        Ok(())
    })()
    .map_err(report_io)?;
    Ok(0)
}

struct Comparison {
    label: String,
    verdicts: [StabilityVerdict; 3],
}

impl Comparison {
    fn boundary(&self) -> bool {
        self.verdicts.iter().any(|v| v.outcome == Outcome::Boundary)
    }

    fn disagree(&self) -> bool {
        !self.boundary()
            && self
                .verdicts
                .iter()
                .any(|v| v.outcome != self.verdicts[0].outcome)
    }
}

fn compare_matrix(
    label: String,
    a: &SquareMatrix,
    alpha: f64,
    tol: f64,
    angle_tol: f64,
) -> std::result::Result<Comparison, Failure> {
    let f = fracrh::charpoly::char_poly(a);
    Ok(Comparison {
        label,
        verdicts: [
            theorem1_verdict(&f, alpha, tol).map_err(core_error)?,
            argument_oracle(a, alpha, angle_tol).map_err(core_error)?,
            embedding_verdict(a, alpha, tol).map_err(core_error)?,
        ],
    })
}

/// Corners of the job's axis box, or the job's point when there are no axes.
fn compare_points(
    req: &Request,
    spec: &SystemSpec,
) -> std::result::Result<Vec<(String, Vec<f64>)>, Failure> {
    let fixed = fixed_values(spec).map_err(input_error)?;
    let mut base: Vec<f64> = spec
        .params
        .iter()
        .map(|p| fixed.iter().find(|(k, _)| k == p).map_or(0.0, |(_, v)| *v))
        .collect();
    if req.job.axes.is_empty() {
        let point = if spec.params.is_empty() {
            Vec::new()
        } else {
            point_values(spec).map_err(input_error)?
        };
        return Ok(vec![(point_label(spec, &point), point)]);
    }
    let slots = req
        .job
        .axes
        .iter()
        .map(|ax| {
            spec.params
                .iter()
                .position(|p| *p == ax.name)
                .ok_or_else(|| {
                    input_error(anyhow!("field 'axes': '{}' is not a parameter", ax.name))
                })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let k = slots.len();
    let mut pts = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        for (bit, (&slot, ax)) in slots.iter().zip(&req.job.axes).enumerate() {
            base[slot] = if mask >> bit & 1 == 1 { ax.hi } else { ax.lo };
        }
        pts.push((point_label(spec, &base), base.clone()));
    }
    Ok(pts)
}

fn point_label(spec: &SystemSpec, point: &[f64]) -> String {
    if spec.params.is_empty() {
        return "system".into();
    }
    let parts: Vec<String> = spec
        .params
        .iter()
        .zip(point)
        .map(|(n, v)| format!("{n}={}", g12(*v)))
        .collect();
    parts.join(" ")
}

/// The even-minor test, the eigenvalue-argument oracle and the embedding test on one system or a
/// seeded random batch. Exit code 1 when two methods disagree away from Boundary.
pub fn cmd_oracle_compare(req: &Request, out: &mut dyn Write) -> CmdResult {
    let alpha = req.alpha()?;
    let (tol, angle_tol) = (req.boundary_tol(), req.angle_tol());
    let mut rows = Vec::new();
    let mut batch = None;
    if let Some(count) = req.random {
        let n = req.order.ok_or_else(|| {
            input_error(anyhow!(
                "field 'random.order': required with a random batch (or pass --order)"
            ))
        })?;
        if n == 0 {
            return Err(input_error(anyhow!(
                "field 'random.order': must be at least 1"
            )));
        }
        let seed = req.seed.unwrap_or(DEFAULT_SEED);
        for (i, a) in random_matrices(seed, n, count).iter().enumerate() {
            rows.push(compare_matrix(format!("#{i}"), a, alpha, tol, angle_tol)?);
        }
        batch = Some((count, n, seed));
    } else {
        let spec = req.system_spec()?;
        let sys = build_system(spec, Some(alpha)).map_err(input_error)?;
        for (label, point) in compare_points(req, spec)? {
            let a = match &sys {
                System::Matrix(m) => instantiate(m, &point).map_err(core_error)?,
                System::Poly(p) => p
                    .polynomial_at(alpha, &point)
                    .map_err(core_error)?
                    .companion_matrix(),
            };
            rows.push(compare_matrix(label, &a, alpha, tol, angle_tol)?);
        }
    }
    let disagreements: Vec<&Comparison> = rows.iter().filter(|c| c.disagree()).collect();
    let boundary = rows.iter().filter(|c| c.boundary()).count();
    let methods = [Method::Theorem1, Method::ArgumentOracle, Method::Embedding];
    let w = &mut *out;
    (|| -> io::Result<()> {
        writeln!(w, "alpha: {}", g12(alpha))?;
        if let Some((count, n, seed)) = batch {
            writeln!(
                w,
                "random batch: {count} matrices of order {n}, seed {seed}"
            )?;
        }
        if rows.len() <= 16 {
            for c in &rows {
                let parts: Vec<String> = c
                    .verdicts
                    .iter()
                    .map(|v| {
                        let via = v
                            .delegated_from
                            .map_or(String::new(), |_| format!(" via {}", v.method));
                        format!("{}{} ({} values)", v.outcome, via, v.minors.len())
                    })
                    .collect();
                writeln!(w, "{}:", c.label)?;
                for (m, p) in methods.iter().zip(parts) {
                    writeln!(w, "  {m}: {p}")?;
                }
            }
        } else {
            for (k, m) in methods.iter().enumerate() {
                let count = |o: Outcome| rows.iter().filter(|c| c.verdicts[k].outcome == o).count();
                writeln!(
                    w,
                    "{m}: Stable {}, NotStable {}, Boundary {}",
                    count(Outcome::Stable),
                    count(Outcome::NotStable),
                    count(Outcome::Boundary)
                )?;
            }
        }
        if let Some(first) = rows.first() {
            let n = first.verdicts[0].minors.len();
            writeln!(
                w,
                "indicator counts: theorem1 {} even minors, embedding {} classical minors",
                n,
                first.verdicts[2].minors.len()
            )?;
        }
        writeln!(
            w,
            "cases: {}, with a Boundary verdict: {boundary}",
            rows.len()
        )?;
        writeln!(w, "disagreements: {}", disagreements.len())?;
        for c in &disagreements {
            let o: Vec<String> = c.verdicts.iter().map(|v| v.outcome.to_string()).collect();
            writeln!(w, "  {}: {}", c.label, o.join(" / "))?;
        }
        Ok(())
    })()
    .map_err(report_io)?;
    Ok(if disagreements.is_empty() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(2f64.sqrt(), 12), "1.41421356237");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(-0.5, 12), "-0.5");
        assert_eq!(fmt_sig(1e-7, 12), "1e-07");
        assert_eq!(fmt_sig(1.5e13, 12), "1.5e+13");
        assert_eq!(fmt_sig(123456.0, 12), "123456");
        assert_eq!(fmt_sig(0.0001234, 3), "0.000123");
        assert_eq!(fmt_sig(999999999999.7, 12), "1e+12");
    }

    #[test]
    fn matrix_flag_parses() {
        let m = parse_matrix_flag("[[-1, \"3/2\"], [0, -1.5]]").unwrap();
        let a = square_matrix(&m, "m").unwrap();
        assert_eq!(a.get(0, 1), 1.5);
        assert!(parse_matrix_flag("[[1, 2]]").is_err());
    }
}
