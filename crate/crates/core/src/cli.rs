//! The `bincs` command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 for usage errors, 2 for runtime errors. The
//! resolved configuration goes to stderr as `# key=value` lines (suppressed
//! by `--quiet`); results go to stdout or to `--out`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{analyze, spectral, verify_nullspace_bound, DEFAULT_ZERO_THRESHOLD};
use crate::bounds::{
    c_prime, kbar, max_k_rip, max_k_rnsp, measurement_bounds, moore_bound, rnsp_certificate, rnsp_girth_certificate,
    BoundParams, MeasurementBoundReport,
};
use crate::experiments::{run_phase_sweep, timing_comparison, PhaseConfig, TIMING_HEADER};
use crate::matrices::{
    devore_degree_for, export_matrix, import_matrix, mtx::to_matrix_market, read_vector, write_vector,
    ConstructionParams, Family, Matrix,
};
use crate::report::report_tables;
use crate::solver::{evaluate_recovery, lp_oracle_op, Decoder, SolverConfig};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "bincs", version, about = "Sparse binary compressed-sensing matrices: construct, certify, recover, sweep")]
pub struct Cli {
    /// Seed for every random choice of the subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file or directory, depending on the subcommand.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Do not print the resolved configuration.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a measurement matrix and write it in Matrix Market format.
    Construct {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Prime field size (array, devore, euler).
        #[arg(long)]
        q: Option<usize>,
        /// Column weight (array, euler).
        #[arg(long)]
        l: Option<usize>,
        /// Polynomial degree (devore); defaults to the smallest covering --n.
        #[arg(long)]
        r: Option<usize>,
        /// Rows (gaussian).
        #[arg(long)]
        m: Option<usize>,
        /// Columns; binary matrices keep their first n.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Degrees, girth, overlap, spectrum and recovery certificates of a matrix.
    Analyze {
        file: PathBuf,
        /// Random null-space vectors checked against the column bound.
        #[arg(long, default_value_t = 0)]
        nullspace_samples: usize,
        /// Sparsity order of the printed certificates (default: largest certified).
        #[arg(long)]
        k: Option<usize>,
        /// Also print the CSV header and row.
        #[arg(long)]
        csv: bool,
    },
    /// Measurement counts for comma-separated lists of n and k.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 1e-9)]
        xi: f64,
        /// Stable-recovery constant of the universal bound (default 2(k+1)).
        #[arg(long = "capC", alias = "cap-c")]
        cap_c: Option<f64>,
        /// RIP order of the Gaussian bound (default ceil(3k/2)).
        #[arg(long)]
        rip_order: Option<usize>,
    },
    /// Solve basis pursuit for one measurement vector.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// True signal, for the relative error.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Cross-check the objective with the simplex oracle (epsilon = 0 only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
    },
    /// Run a phase-transition sweep described by a key=value config file.
    Phase {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's trial count.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Regenerate tables and the phase diagram from a results directory.
    Report {
        #[arg(long)]
        results: PathBuf,
    },
    /// Mean solve time per family on certified matrices of order k.
    Timing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "array,devore,gaussian")]
        families: Vec<Family>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Context { quiet: cli.quiet, out: stdout, err: stderr };
    let result = execute(&cli, &mut ctx);
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            1
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            2
        }
    }
}

struct Context<'a> {
    quiet: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn config(&mut self, pairs: &[(&str, String)]) {
        if self.quiet {
            return;
        }
        for (k, v) in pairs {
            let _ = writeln!(self.err, "# {k}={v}");
        }
    }

    fn print(&mut self, text: &str) -> Outcome {
        self.out.write_all(text.as_bytes()).map_err(|e| Failure::Runtime(format!("cannot write output: {e}")))
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".to_string(), T::to_string)
}

fn path_str(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or("-".to_string(), |p| p.display().to_string())
}

/// Four significant digits, switching to scientific notation outside [1e-4, 1e6).
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (3 - e).max(0) as usize, x)
    } else {
        format!("{x:.3e}")
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: Family) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --family {family}")))
}

fn execute(cli: &Cli, ctx: &mut Context) -> Outcome {
    match &cli.command {
        Command::Construct { family, q, l, r, m, n } => construct(cli, ctx, *family, *q, *l, *r, *m, *n),
        Command::Analyze { file, nullspace_samples, k, csv } => analyze_cmd(cli, ctx, file, *nullspace_samples, *k, *csv),
        Command::Bounds { n, k, delta, xi, cap_c, rip_order } => {
            let params = BoundParams { delta: *delta, xi: *xi, rip_order: *rip_order, cap_c: *cap_c };
            bounds_cmd(cli, ctx, n, k, params)
        }
        Command::Recover { matrix, y, epsilon, truth, oracle, max_iterations, threshold } => {
            let config = SolverConfig { max_iterations: *max_iterations, success_threshold: *threshold, ..SolverConfig::default() };
            recover_cmd(cli, ctx, matrix, y, *epsilon, truth.as_deref(), *oracle, config)
        }
        Command::Phase { config, trials } => phase_cmd(cli, ctx, config, *trials),
        Command::Report { results } => {
            let out = cli.out.clone().unwrap_or_else(|| results.clone());
            ctx.config(&[
                ("subcommand", "report".into()),
                ("results", results.display().to_string()),
                ("out", out.display().to_string()),
            ]);
            let written = report_tables(results, &out)?;
            let mut text = String::new();
            for p in written {
                let _ = writeln!(text, "wrote {}", p.display());
            }
            ctx.print(&text)
        }
        Command::Timing { n, k, families, trials } => {
            let seed = cli.seed.unwrap_or(1);
            let names: Vec<&str> = families.iter().map(|f| f.name()).collect();
            ctx.config(&[
                ("subcommand", "timing".into()),
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("families", names.join(",")),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
                ("out", path_str(&cli.out)),
            ]);
            let rows = timing_comparison(*n, *k, families, *trials, seed)?;
            let mut csv = format!("{TIMING_HEADER}\n");
            let mut text = format!("{:>9} {:>6} {:>9} {:>12} {:>9}\n", "family", "m", "successes", "mean_s", "G/family");
            for r in &rows {
                csv.push_str(&r.csv_line());
                csv.push('\n');
                let ratio = r.gaussian_over_family.map_or("NA".into(), sig4);
                let _ = writeln!(
                    text,
                    "{:>9} {:>6} {:>9} {:>12} {:>9}",
                    r.family.name(),
                    r.m,
                    format!("{}/{}", r.successes, r.trials),
                    sig4(r.mean_seconds),
                    ratio
                );
            }
            write_or_print(ctx, &cli.out, &text, &csv)
        }
    }
}

/// Prints `text`; the CSV goes to `out` when given and is printed otherwise.
fn write_or_print(ctx: &mut Context, out: &Option<PathBuf>, text: &str, csv: &str) -> Outcome {
    ctx.print(text)?;
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Failure::Runtime(Error::io(path, e).to_string())),
        None => ctx.print(&format!("\n{csv}")),
    }
}

#[allow(clippy::too_many_arguments)]
fn construct(
    cli: &Cli,
    ctx: &mut Context,
    family: Family,
    q: Option<usize>,
    l: Option<usize>,
    r: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
) -> Outcome {
    let seed = cli.seed.unwrap_or(1);
    let params = match family {
        Family::ArrayCode => ConstructionParams::ArrayCode { q: require(q, "q", family)?, l: require(l, "l", family)? },
        Family::EulerSquare => {
            ConstructionParams::EulerSquare { q: require(q, "q", family)?, l: require(l, "l", family)? }
        }
        Family::DeVore => {
            let q = require(q, "q", family)?;
            let r = match (r, n) {
                (Some(r), _) => r,
                (None, Some(n)) => devore_degree_for(q, n),
                (None, None) => return Err(Failure::Usage("--r or --n is required for --family devore".into())),
            };
            ConstructionParams::DeVore { q, r }
        }
        Family::Gaussian => {
            ConstructionParams::Gaussian { m: require(m, "m", family)?, n: require(n, "n", family)?, seed }
        }
    };
    ctx.config(&[
        ("subcommand", "construct".into()),
        ("family", family.to_string()),
        ("params", format!("{params:?}")),
        ("n", opt(&n)),
        ("seed", seed.to_string()),
        ("out", path_str(&cli.out)),
    ]);
    let mut matrix = params.construct()?;
    if let (Some(n), true) = (n, family.is_binary()) {
        if n > matrix.cols() {
            return Err(Failure::Usage(format!("--n {n} exceeds the {} columns of the construction", matrix.cols())));
        }
        matrix = matrix.truncate_columns(n)?;
    }
    match &cli.out {
        Some(path) => {
            export_matrix(&matrix, path)?;
            ctx.print(&format!("wrote {}x{} matrix to {}\n", matrix.rows(), matrix.cols(), path.display()))
        }
        None => ctx.print(&to_matrix_market(&matrix)),
    }
}

fn analyze_cmd(cli: &Cli, ctx: &mut Context, file: &Path, samples: usize, k: Option<usize>, csv: bool) -> Outcome {
    let seed = cli.seed.unwrap_or(1);
    ctx.config(&[
        ("subcommand", "analyze".into()),
        ("file", file.display().to_string()),
        ("nullspace_samples", samples.to_string()),
        ("k", opt(&k)),
        ("seed", seed.to_string()),
        ("out", path_str(&cli.out)),
    ]);
    let matrix = import_matrix(file)?;
    let b = match &matrix {
        Matrix::Binary(b) => b,
        Matrix::Dense(d) => {
            let s = spectral(d, DEFAULT_ZERO_THRESHOLD)?;
            let text = format!(
                "rows            {}\ncols            {}\nrank            {}\nsigma_min       {}\nsigma_max       {}\n",
                d.rows(),
                d.cols(),
                s.rank,
                sig4(s.sigma_min),
                sig4(s.sigma_max)
            );
            return ctx.print(&text);
        }
    };
    let a = analyze(b)?;
    let mut text = String::new();
    let mut kv = |key: &str, value: String| {
        let _ = writeln!(text, "{key:<26}{value}");
    };
    kv("rows", a.rows.to_string());
    kv("cols", a.cols.to_string());
    kv("girth", a.girth.to_string());
    kv("left_degree", format!("{}..{} (avg {})", a.min_left_degree, a.max_left_degree, sig4(a.avg_left_degree)));
    kv("right_degree", format!("{}..{} (avg {})", a.min_right_degree, a.max_right_degree, sig4(a.avg_right_degree)));
    kv("left_regular", a.left_regular.to_string());
    kv("right_regular", a.right_regular.to_string());
    kv("lambda", a.lambda.to_string());
    kv("coherence", sig4(a.mu));
    kv("rank", a.rank.to_string());
    kv("sigma_min", sig4(a.sigma_min));
    kv("max_k_rip", max_k_rip(a.mu).to_string());
    if let Some(d_l) = a.left_degree() {
        let k_max = max_k_rnsp(d_l, a.lambda);
        kv("max_k_rnsp", k_max.to_string());
        let order = k.unwrap_or(k_max);
        if order >= 1 {
            match rnsp_certificate(&a, order) {
                Ok(c) => {
                    kv("rnsp_k", c.k.to_string());
                    kv("rnsp_rho", sig4(c.rho));
                    kv("rnsp_tau", sig4(c.tau));
                    kv("rnsp_C", sig4(c.cap_c));
                    kv("rnsp_D", sig4(c.cap_d));
                }
                Err(e) => kv("rnsp", format!("not certified: {e}")),
            }
        }
        if let Some(g) = a.girth.finite().filter(|&g| g >= 6) {
            let cp = c_prime(g, d_l as u64)?;
            kv("c_prime", cp.to_string());
            kv("kbar", kbar(d_l, g)?.to_string());
            kv("moore_bound", sig4(moore_bound(a.avg_left_degree, a.avg_right_degree, g)?));
            let order = k.unwrap_or(((cp - 1) / 2) as usize);
            if order >= 1 {
                let beta = crate::bounds::rnsp_beta(d_l, a.lambda, a.cols, a.sigma_min, 1.0);
                match rnsp_girth_certificate(d_l, g, order, beta) {
                    Ok(c) => {
                        kv("girth_cert_k", order.to_string());
                        kv("girth_cert_rho", sig4(c.rho));
                        kv("girth_cert_tau", sig4(c.tau));
                        kv("girth_cert_tau_printed", sig4(c.tau_printed));
                    }
                    Err(e) => kv("girth_cert", format!("not certified: {e}")),
                }
            }
        }
    }
    if samples > 0 {
        match verify_nullspace_bound(b, samples, seed) {
            Ok(r) => {
                kv("nullspace_samples", r.samples.to_string());
                kv("nullity", r.nullity.to_string());
                kv("nullspace_max_ratio", sig4(r.max_ratio));
                kv("nullspace_passed", r.passed.to_string());
                if let (Some(ratio), Some(ok)) = (r.max_c_prime_ratio, r.c_prime_passed) {
                    kv("nullspace_c_prime_ratio", sig4(ratio));
                    kv("nullspace_c_prime_passed", ok.to_string());
                }
            }
            Err(e) => kv("nullspace", format!("skipped: {e}")),
        }
    }
    ctx.print(&text)?;
    let row = format!("{}\n{}\n", crate::analysis::MatrixAnalysis::CSV_HEADER, a.csv_row());
    if let Some(path) = &cli.out {
        std::fs::write(path, &row).map_err(|e| Failure::Runtime(Error::io(path, e).to_string()))?;
    }
    if csv {
        ctx.print(&format!("\n{row}"))?;
    }
    Ok(())
}

fn bounds_cmd(cli: &Cli, ctx: &mut Context, ns: &[usize], ks: &[usize], params: BoundParams) -> Outcome {
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    ctx.config(&[
        ("subcommand", "bounds".into()),
        ("n", list(ns)),
        ("k", list(ks)),
        ("delta", params.delta.to_string()),
        ("xi", params.xi.to_string()),
        ("rip_order", opt(&params.rip_order)),
        ("capC", opt(&params.cap_c)),
        ("out", path_str(&cli.out)),
    ]);
    if !(params.delta > 0.0 && params.delta < 1.0) {
        return Err(Failure::Usage(format!("--delta must lie in (0, 1), got {}", params.delta)));
    }
    if !(params.xi > 0.0 && params.xi < 1.0) {
        return Err(Failure::Usage(format!("--xi must lie in (0, 1), got {}", params.xi)));
    }
    let mut reports = Vec::new();
    for &n in ns {
        for &k in ks {
            let r = measurement_bounds(n, k, params).map_err(|e| Failure::Runtime(format!("n={n}, k={k}: {e}")))?;
            reports.push(r);
        }
    }
    let mut text = format!(
        "{:>9} {:>5} {:>5} {:>9} {:>6} {:>9} {:>11} {:>8} {:>6}\n",
        "n", "k", "q_D", "m_D", "q_A", "m_A", "m_G", "m_Moore", "m_LB"
    );
    let mut csv = format!("{}\n", MeasurementBoundReport::CSV_HEADER);
    for r in &reports {
        let _ = writeln!(
            text,
            "{:>9} {:>5} {:>5} {:>9} {:>6} {:>9} {:>11} {:>8} {:>6}",
            r.n, r.k, r.q_devore, r.m_devore, r.q_array, r.m_array, r.m_gaussian, r.m_moore, r.m_universal
        );
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_or_print(ctx, &cli.out, &text, &csv)
}

#[allow(clippy::too_many_arguments)]
fn recover_cmd(
    cli: &Cli,
    ctx: &mut Context,
    matrix_path: &Path,
    y_path: &Path,
    epsilon: f64,
    truth: Option<&Path>,
    oracle: bool,
    config: SolverConfig,
) -> Outcome {
    ctx.config(&[
        ("subcommand", "recover".into()),
        ("matrix", matrix_path.display().to_string()),
        ("y", y_path.display().to_string()),
        ("epsilon", epsilon.to_string()),
        ("truth", truth.map_or("-".into(), |p| p.display().to_string())),
        ("oracle", oracle.to_string()),
        ("max_iterations", config.max_iterations.to_string()),
        ("threshold", config.success_threshold.to_string()),
        ("out", path_str(&cli.out)),
    ]);
    if !(epsilon >= 0.0) {
        return Err(Failure::Usage(format!("--epsilon must be non-negative, got {epsilon}")));
    }
    if oracle && epsilon != 0.0 {
        return Err(Failure::Usage("--oracle requires --epsilon 0".into()));
    }
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let matrix = import_matrix(matrix_path)?;
    let y = read_vector(y_path)?;
    if y.len() != matrix.rows() {
        return Err(Failure::Runtime(format!(
            "{}: {} values, but the matrix has {} rows",
            y_path.display(),
            y.len(),
            matrix.rows()
        )));
    }
    let truth = match truth {
        Some(p) => {
            let t = read_vector(p)?;
            if t.len() != matrix.cols() {
                return Err(Failure::Runtime(format!(
                    "{}: {} values, but the matrix has {} columns",
                    p.display(),
                    t.len(),
                    matrix.cols()
                )));
            }
            Some(t)
        }
        None => None,
    };
    let decoder = Decoder::new(matrix.as_operator(), &config)?;
    let result = decoder.solve(&y, epsilon, &config)?;
    let mut summary = format!(
        "status={} objective={} residual={} iterations={} seconds={}",
        result.status,
        sig4(result.l1_objective),
        sig4(result.residual_norm),
        result.iterations,
        sig4(result.wall_time)
    );
    if let Some(t) = &truth {
        let (err, ok) = evaluate_recovery(&result.x_hat, t, config.success_threshold)?;
        let _ = write!(summary, " rel_error={} success={ok}", sig4(err));
    }
    if oracle {
        let lp = lp_oracle_op(matrix.as_operator(), &y)?;
        let gap = (result.l1_objective - lp.l1_objective).abs();
        let _ = write!(summary, " oracle_objective={} oracle_gap={}", sig4(lp.l1_objective), sig4(gap));
    }
    match &cli.out {
        Some(path) => {
            write_vector(path, &result.x_hat)?;
            ctx.print(&format!("{summary}\n"))
        }
        None => {
            let mut text = String::new();
            for v in &result.x_hat {
                let _ = writeln!(text, "{v:?}");
            }
            let _ = writeln!(text, "# {summary}");
            ctx.print(&text)
        }
    }
}

fn phase_cmd(cli: &Cli, ctx: &mut Context, config_path: &Path, trials: Option<usize>) -> Outcome {
    let Some(out) = &cli.out else {
        return Err(Failure::Usage("--out DIR is required for phase".into()));
    };
    let mut config = PhaseConfig::load(config_path)?;
    if let Some(seed) = cli.seed {
        config.base_seed = seed;
    }
    if let Some(t) = trials {
        if t == 0 {
            return Err(Failure::Usage("--trials must be at least 1".into()));
        }
        config.trials = t;
    }
    ctx.config(&[("subcommand", "phase".into()), ("config", config_path.display().to_string())]);
    if !ctx.quiet {
        for line in config.to_text().lines() {
            let _ = writeln!(ctx.err, "# {line}");
        }
        let _ = writeln!(ctx.err, "# out={}", out.display());
    }
    let (grid, summary) = run_phase_sweep(&config, out)?;
    let na = |v: Option<f64>| v.map_or("NA".to_string(), sig4);
    let mut text = format!("{} cells written to {}\n", grid.cells.len(), out.join("cells.csv").display());
    let _ = writeln!(text, "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}", "m", "theta", "phi95", "phi50", "phi5", "width");
    for r in &summary.rows {
        let _ = writeln!(
            text,
            "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}",
            r.m,
            sig4(r.theta),
            na(r.phi95),
            na(r.phi50),
            na(r.phi5),
            na(r.width)
        );
    }
    let _ = writeln!(text, "mean_width={} c1={}", na(summary.mean_width), na(summary.c1));
    for issue in summary.issues() {
        let _ = writeln!(text, "warning: {issue}");
    }
    ctx.print(&text)
}
