//! The `neq` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification checks, 2 infeasible
//! problem, 3 numerical failure, 4 bad input or I/O error.

use crate::cost::{self, CurvePoint, PointStatus, TradeoffCurve, Variant};
use crate::error::Error;
use crate::qmat::{self, CMatrix, MatrixJson};
use crate::quantum::{ChoiChannel, GibbsContext, Hamiltonian};
use crate::tasks::{self, CloningSpec, Task};
use crate::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;

pub const CSV_HEADER: [&str; 5] = ["fidelity", "cost_bits", "lower_bound_bits", "variant", "status"];

#[derive(Parser, Debug)]
#[command(
    name = "neq",
    version,
    about = "Minimum nonequilibrium cost of accuracy for quantum tasks",
    after_help = "Tasks are builtin URIs such as 'builtin:cloning;n=1;m=2;d=2' or paths to task JSON files.\n\
                  NEQ_SOLVER_GAP overrides the solver's relative gap tolerance."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reverse entropy of a task.
    Kappa {
        #[command(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Minimum cost of reaching a worst-case accuracy.
    Cost {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long, short = 'F')]
        fidelity: f64,
        /// Include the optimal channel in the JSON report.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Maximum accuracy within a cost budget (unbounded when omitted).
    Accuracy {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long, allow_hyphen_values = true)]
        cost: Option<f64>,
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Sample the accuracy-cost tradeoff.
    Curve {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long, value_delimiter = ',', default_value = "quantum")]
        variants: Vec<Variant>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
        format: CurveFormat,
        #[command(flatten)]
        plot: PlotArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the oracle-versus-solver verification suites.
    Verify {
        /// `all`, or a comma-separated list of suite names or numbers.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regenerate the cloning figure datasets (degenerate qubits).
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        id: u8,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        plot: PlotArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Cost of a given channel, `D_max(M(ΠΓΠ) || Γ_B)`.
    ChannelCost {
        /// Channel JSON: {"choi": matrix, "dims": {"d_a":..,"d_b":..}}.
        #[arg(long)]
        choi: PathBuf,
        /// Input projector JSON (identity when omitted).
        #[arg(long)]
        projector: Option<PathBuf>,
        /// Take the thermal context and input projector from this task.
        #[arg(long, conflicts_with_all = ["energies", "energies_out", "degenerate"])]
        task: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "degenerate")]
        energies: Option<Vec<f64>>,
        /// Output energies when they differ from the input ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "degenerate")]
        energies_out: Option<Vec<f64>>,
        #[arg(long)]
        degenerate: bool,
        #[command(flatten)]
        out: ReportArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TaskArgs {
    /// Builtin URI or task JSON file.
    #[arg(long)]
    pub task: String,
    /// Inverse temperature for builtin tasks (default 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Single-system energy levels, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "degenerate")]
    pub energies: Option<Vec<f64>>,
    /// Fully degenerate levels (the default for builtin tasks).
    #[arg(long)]
    pub degenerate: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    /// Print the JSON report instead of the summary line.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    #[arg(long, value_enum, default_value_t = Plot::None)]
    pub plot: Plot,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plot {
    None,
    Gnuplot,
    Svg,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        bad_input(format!("i/o: {e}"))
    }
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_BAD_INPUT, message: message.into() }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::NumericalFailure(_) | Error::ConstructionFailed(_) => EXIT_NUMERICAL,
        _ => EXIT_BAD_INPUT,
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("neq: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command) -> CliResult {
    match cmd {
        Command::Kappa { task, out } => {
            let t = load_task(&task)?;
            let r = cost::reverse_entropy(&t)?;
            let line = format!("kappa = {} bits ({}) [{}]", fmt6(r.value_bits), method_note(&r.method, r.solver_gap), t.label);
            emit(&out, &r, &line)
        }
        Command::Cost { task, fidelity, witness, out } => {
            let t = load_task(&task)?;
            let mut r = cost::cost_of_accuracy(&t, fidelity)?;
            if !witness {
                r.witness = None;
            }
            let mut line = format!(
                "cost = {} bits at F = {} (work {} kT; {}) [{}]",
                fmt6(r.value_bits),
                fmt6(fidelity),
                fmt6(r.work_kt()),
                method_note(&r.method, r.solver_gap),
                t.label
            );
            for n in &r.notes {
                let _ = write!(line, "; {n}");
            }
            emit(&out, &r, &line)
        }
        Command::Accuracy { task, cost: budget, witness, out } => {
            let t = load_task(&task)?;
            let mut r = cost::accuracy_of_cost(&t, budget)?;
            if !witness {
                r.witness = None;
            }
            let at = budget.map_or("unbounded cost".to_string(), |c| format!("cost {} bits", fmt6(c)));
            let mut line = format!("fidelity = {} at {at} ({}) [{}]", fmt6(r.fidelity), method_note(&r.method, r.solver_gap), t.label);
            for n in &r.notes {
                let _ = write!(line, "; {n}");
            }
            emit(&out, &r, &line)
        }
        Command::Curve { task, points, variants, out, format, plot, jobs } => {
            let t = load_task(&task)?;
            let curves = cost::scan_curve(&t, points, &variants, jobs)?;
            let rows: Vec<(String, CurvePoint)> =
                curves.iter().flat_map(|c| c.points.iter().map(move |p| (c.variant.as_str().to_string(), *p))).collect();
            let body = match format {
                CurveFormat::Csv => csv_string(&rows)?,
                CurveFormat::Json => json_string(&curves)?,
            };
            let to_file = out.is_some();
            match &out {
                Some(path) => write_file(path, &body)?,
                None => print!("{body}"),
            }
            if plot.plot != Plot::None {
                let csv_path = match (&out, format) {
                    (Some(p), CurveFormat::Csv) => p.clone(),
                    _ => return Err(bad_input("--plot needs --out with CSV output")),
                };
                write_plot(plot.plot, &csv_path, &rows)?;
            }
            for c in &curves {
                let line = curve_summary(c);
                if to_file {
                    println!("{line}");
                } else {
                    eprintln!("{line}");
                }
            }
            Ok(worst_status(rows.iter().map(|(_, p)| p.status)))
        }
        Command::Verify { suite, tol, report } => {
            let r = verify::run(&suite, tol)?;
            for c in &r.checks {
                println!(
                    "{} {:>2} {} ({} comparisons, max error {:.2e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.name,
                    c.comparisons,
                    c.max_error
                );
                for f in c.failures.iter().take(5) {
                    println!("     {f}");
                }
            }
            let passed = r.checks.iter().filter(|c| c.passed).count();
            println!("verify: {passed}/{} checks passed", r.checks.len());
            if let Some(path) = report {
                write_file(&path, &json_string(&r)?)?;
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_CHECKS_FAILED })
        }
        Command::Figure { id, points, out_dir, plot, jobs } => figure(id, points, &out_dir, plot.plot, jobs),
        Command::ChannelCost { choi, projector, task, beta, energies, energies_out, degenerate: _, out } => {
            let ch: ChoiChannel = read_json(&choi)?;
            let ch = ChoiChannel::new(ch.choi, ch.dims)?;
            let (ctx, default_pi) = match task {
                Some(uri) => {
                    let t = load_task(&TaskArgs { task: uri, beta, energies: None, degenerate: false })?;
                    (t.ctx, t.input_projector)
                }
                None => {
                    let (d_a, d_b) = (ch.dims.d_a, ch.dims.d_b);
                    let levels = |e: Option<&Vec<f64>>, d: usize| -> std::result::Result<Hamiltonian, Failure> {
                        match e {
                            Some(v) if v.len() == d => Ok(Hamiltonian::new(v.clone())?),
                            Some(v) => Err(bad_input(format!("{} energies given for dimension {d}", v.len()))),
                            None => Ok(Hamiltonian::degenerate(d)),
                        }
                    };
                    let h_a = levels(energies.as_ref(), d_a)?;
                    let h_b = match (&energies_out, &energies) {
                        (Some(_), _) => levels(energies_out.as_ref(), d_b)?,
                        (None, Some(_)) if d_a == d_b => h_a.clone(),
                        (None, Some(_)) => return Err(bad_input("--energies-out is required when input and output dimensions differ")),
                        (None, None) => Hamiltonian::degenerate(d_b),
                    };
                    (GibbsContext::new(beta.unwrap_or(1.0), &h_a, &h_b)?, qmat::identity(d_a))
                }
            };
            let pi = match projector {
                Some(p) => CMatrix::try_from(&read_json::<MatrixJson>(&p)?).map_err(Error::from)?,
                None => default_pi,
            };
            let r = cost::channel_cost(&ch, &pi, &ctx)?;
            let line =
                format!("cost = {} bits (work {} kT; {})", fmt6(r.value_bits), fmt6(r.work_kt()), method_note(&r.method, r.solver_gap));
            emit(&out, &r, &line)
        }
    }
}

fn method_note(method: &cost::Method, gap: Option<f64>) -> String {
    let name = serde_json::to_value(method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    match gap {
        Some(g) => format!("{name}, gap {g:.1e}"),
        None => name,
    }
}

fn curve_summary(c: &TradeoffCurve) -> String {
    let bad = c
        .points
        .iter()
        .filter(|p| matches!(p.status, PointStatus::Infeasible | PointStatus::NumericalFailure | PointStatus::Error))
        .count();
    let mut s = format!(
        "{}: {} points on [{}, {}], kappa = {} bits, c_min = {} bits [{}]",
        c.variant.as_str(),
        c.points.len(),
        fmt6(c.f_min),
        fmt6(c.f_max),
        fmt6(c.kappa),
        fmt6(c.c_min),
        c.task_label
    );
    if bad > 0 {
        let _ = write!(s, "; {bad} failed points");
    }
    s
}

fn worst_status(statuses: impl Iterator<Item = PointStatus>) -> i32 {
    statuses
        .map(|s| match s {
            PointStatus::Infeasible => EXIT_INFEASIBLE,
            PointStatus::NumericalFailure => EXIT_NUMERICAL,
            PointStatus::Error => EXIT_BAD_INPUT,
            _ => EXIT_OK,
        })
        .max()
        .unwrap_or(EXIT_OK)
}

fn emit<T: serde::Serialize>(out: &ReportArgs, report: &T, line: &str) -> CliResult {
    let json = json_string(report)?;
    if let Some(path) = &out.report {
        write_file(path, &json)?;
    }
    if out.json {
        print!("{json}");
    } else {
        println!("{line}");
    }
    Ok(EXIT_OK)
}

/// Loads a builtin URI or a task JSON file.
pub fn load_task(args: &TaskArgs) -> std::result::Result<Task, Failure> {
    if args.task.starts_with("builtin:") {
        if args.beta.is_some_and(|b| !(b > 0.0 && b.is_finite())) {
            return Err(bad_input("--beta must be positive and finite"));
        }
        let energies = if args.degenerate { None } else { args.energies.as_deref() };
        return Ok(tasks::builtin_task(&args.task, args.beta.unwrap_or(1.0), energies)?);
    }
    if args.beta.is_some() || args.energies.is_some() || args.degenerate {
        return Err(bad_input("--beta, --energies and --degenerate apply to builtin tasks only; task files carry their context"));
    }
    let t: Task = read_json(Path::new(&args.task))?;
    t.validate()?;
    Ok(t)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn json_string<T: serde::Serialize>(v: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| bad_input(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, body: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| bad_input(format!("cannot write {}: {e}", path.display())))
}

/// Fixed six-decimal formatting with `inf`, `-inf` and `nan` spelled out.
pub fn fmt6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Curve rows as CSV with the fixed header.
pub fn csv_string(rows: &[(String, CurvePoint)]) -> std::result::Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| bad_input(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for (variant, p) in rows {
        w.write_record([fmt6(p.fidelity), fmt6(p.cost_bits), fmt6(p.lower_bound_bits), variant.clone(), p.status.as_str().to_string()])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| bad_input(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| bad_input(format!("csv: {e}")))
}

fn figure(id: u8, points: usize, dir: &Path, plot: Plot, jobs: usize) -> CliResult {
    let h = Hamiltonian::degenerate(2);
    let (pairs, variants): (&[(usize, usize)], [Variant; 2]) = match id {
        2 => (&[(1, 2), (1, 3), (1, 4)], [Variant::Quantum, Variant::Classical]),
        _ => (&[(1, 2), (1, 3), (2, 3)], [Variant::Quantum, Variant::Eb]),
    };
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &(n, m) in pairs {
        let t = tasks::cloning_task(&CloningSpec::new(n, m, 2)?, &h, 1.0, true)?;
        for c in cost::scan_curve(&t, points, &variants, jobs)? {
            println!("{}", curve_summary(&c));
            let label = format!("{}_{n}to{m}", c.variant.as_str());
            for p in c.points {
                if p.cost_bits < p.lower_bound_bits - 1e-6 {
                    violations.push(format!("{label} at F = {}", fmt6(p.fidelity)));
                }
                rows.push((label.clone(), p));
            }
        }
    }
    std::fs::create_dir_all(dir).map_err(|e| bad_input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(format!("fig{id}.csv"));
    write_file(&path, &csv_string(&rows)?)?;
    if plot != Plot::None {
        write_plot(plot, &path, &rows)?;
    }
    if !violations.is_empty() {
        return Err(Failure {
            code: EXIT_NUMERICAL,
            message: format!("bound violated on {} rows: {}", violations.len(), violations.join(", ")),
        });
    }
    println!("figure {id}: wrote {} ({} rows); every row respects the lower bound", path.display(), rows.len());
    Ok(worst_status(rows.iter().map(|(_, p)| p.status)))
}

fn series(rows: &[(String, CurvePoint)]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for (v, p) in rows {
        if !p.cost_bits.is_finite() {
            continue;
        }
        match out.iter_mut().find(|(name, _)| name == v) {
            Some((_, pts)) => pts.push((p.fidelity, p.cost_bits)),
            None => out.push((v.clone(), vec![(p.fidelity, p.cost_bits)])),
        }
    }
    out
}

fn write_plot(plot: Plot, csv_path: &Path, rows: &[(String, CurvePoint)]) -> std::result::Result<(), Failure> {
    let body = match plot {
        Plot::None => return Ok(()),
        Plot::Gnuplot => gnuplot_script(csv_path, rows),
        Plot::Svg => svg_plot(rows),
    };
    let ext = if plot == Plot::Gnuplot { "gp" } else { "svg" };
    let path = csv_path.with_extension(ext);
    write_file(&path, &body)?;
    let _ = writeln!(std::io::stdout(), "plot: wrote {}", path.display());
    Ok(())
}

/// A gnuplot script reading the CSV next to it.
pub fn gnuplot_script(csv_path: &Path, rows: &[(String, CurvePoint)]) -> String {
    let file = csv_path.file_name().map_or_else(|| csv_path.display().to_string(), |f| f.to_string_lossy().into_owned());
    let mut s =
        String::from("set datafile separator \",\"\nset xlabel \"fidelity\"\nset ylabel \"cost (bits)\"\nset key left top\nset grid\n");
    let plots: Vec<String> = series(rows)
        .iter()
        .map(|(name, _)| format!("'{file}' every ::1 using 1:(strcol(4) eq \"{name}\" ? $2 : 1/0) with linespoints title \"{name}\""))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// A static SVG with one polyline per variant.
pub fn svg_plot(rows: &[(String, CurvePoint)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"];
    let all = series(rows);
    let pts = all.iter().flat_map(|(_, p)| p.iter().copied());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n");
    let _ = writeln!(s, "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>", W - 2.0 * M, H - 2.0 * M);
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">fidelity</text>", W / 2.0, H - 15.0);
    let _ = writeln!(
        s,
        "<text x=\"15\" y=\"{}\" font-size=\"14\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">cost (bits)</text>",
        H / 2.0,
        H / 2.0
    );
    for (x, y, anchor, label) in [
        (M, H - M + 18.0, "start", fmt6(x0)),
        (W - M, H - M + 18.0, "end", fmt6(x1)),
        (M - 6.0, H - M, "end", fmt6(y0)),
        (M - 6.0, M + 10.0, "end", fmt6(y1)),
    ] {
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-size=\"11\">{label}</text>");
    }
    for (i, (name, p)) in all.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>", coords.join(" "));
        let ly = M + 18.0 + 16.0 * i as f64;
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{ly:.2}\" fill=\"{color}\" font-size=\"12\">{name}</text>", M + 10.0);
    }
    s.push_str("</svg>\n");
    s
}
