use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fig8_jones::checks::{self, Outcome};
use fig8_jones::error::Error;
use fig8_jones::extended::{colored_jones_adaptive, Precision, DEFAULT_MAX_BITS};
use fig8_jones::jones_fig8::EvaluationPoint;
use fig8_jones::limits::{branch_calibration, convergence_table, limit_v, limit_w, ConvergenceRecord};
use fig8_jones::mahler::{
    homology_order, jones_mahler_growth, log_mahler_quadrature_report, mahler_report, silver_williams_convergence,
    CircleSampler, ConstantSampler, JonesSampler, LaurentPolynomialZ,
};
use fig8_jones::satellite::cable_profile;
use fig8_jones::special_functions::{fig8_volume, lobachevsky, Angle};

mod format;

use format::g15;

const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_NUMERIC: u8 = 70;

#[derive(Parser)]
#[command(name = "jones", version, about = "Colored Jones polynomial of the figure-eight knot on the unit circle")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "JONES_THREADS")]
    threads: Option<usize>,

    /// Run the acceptance checks tied to the command and exit non-zero on failure.
    #[arg(long, global = true)]
    check: bool,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Lobachevsky function Λ(θ).
    Lobachevsky {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1e-14, allow_hyphen_values = true)]
        tol: f64,
    },
    /// Volume of the figure-eight knot complement.
    Volume,
    /// J_N(E; e^{2πix}) at one point, by r = N·x or by x.
    Eval {
        #[arg(long = "N", short = 'N')]
        n: u64,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "x", required_unless_present = "x")]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// CSV data for one figure.
    #[command(long_about = FIGURE_HELP)]
    Figure(FigureArgs),
    /// Mahler measures and branched-cover homology.
    Mahler {
        #[command(subcommand)]
        command: MahlerCommand,
    },
    /// Per-branch agreement of V and W with finite-N data.
    Calibrate {
        #[arg(long = "N", short = 'N', default_value_t = 4000)]
        n: u64,
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Run every acceptance check.
    Acceptance,
}

const FIGURE_HELP: &str = "CSV data for one figure.

Ids and grids (step 0.001, endpoints included):
  V         x in [0, 1], predicted = V(x)
  W         x in [0, 1], predicted = W(x)
  conv1..5  r in [k-1, k] for conv<k>, finite = 2rπ·log|J_N(E; e^{2πir/N})|/N, N defaults to 2000
  conv8000  r in [4, 5] with N defaults to 8000
  cable     odd c <= 2N-1, value = 2π·log|J_c(E; e^{2πir/N})|/N, N defaults to 800, r to 1

The header is r,finite,predicted,delta (c,value for cable). Empty fields mark
values that vanish or are not defined.";

#[derive(Args)]
struct FigureArgs {
    id: String,
    #[arg(long = "N", short = 'N')]
    n: Option<u64>,
    /// Fixed r of the cable profile.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    r: f64,
}

#[derive(Subcommand)]
enum MahlerCommand {
    /// m(f) from the roots of f.
    Roots {
        /// Laurent polynomial `c0,c1,...,ck@low`.
        #[arg(long, allow_hyphen_values = true)]
        poly: LaurentPolynomialZ,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// ∫₀¹ log|g(e^{2πix})| dx by the midpoint rule.
    Quad {
        #[arg(long = "const", allow_hyphen_values = true, group = "sampler")]
        constant: Option<f64>,
        #[arg(long, allow_hyphen_values = true, group = "sampler")]
        poly: Option<LaurentPolynomialZ>,
        /// J_N of the figure-eight knot.
        #[arg(long, group = "sampler")]
        jones: Option<u64>,
        #[arg(long, short = 'n', default_value_t = 4096)]
        n: usize,
    },
    /// |H₁| of the N-fold cyclic branched cover.
    Homology {
        #[arg(long = "N", short = 'N')]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<LaurentPolynomialZ>,
    },
    /// log|H₁(M_N)|/N against m(f).
    Sw {
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<LaurentPolynomialZ>,
        #[arg(long = "N", short = 'N', value_delimiter = ',', default_values_t = [2u64, 5, 10, 20, 50, 100, 200, 500])]
        n: Vec<u64>,
    },
    /// m(J_N) and m(J_N)/log N.
    JonesGrowth {
        #[arg(long = "N", short = 'N', value_delimiter = ',', default_values_t = [100u64, 300, 1000])]
        n: Vec<u64>,
        #[arg(long, default_value_t = 4096)]
        n_quad: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(Error::InvalidArgument(_) | Error::Domain { .. }) => EXIT_DOMAIN,
            Failure::Lib(_) => EXIT_NUMERIC,
            Failure::Io(_) => 1,
        }
    }
}

type Out = Box<dyn Write>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is built once");
    }
    let Some(command) = cli.command else {
        if cli.check {
            return report_checks(&(1..=checks::CRITERIA).collect::<Vec<_>>());
        }
        eprintln!("error: no command given; see --help");
        return ExitCode::from(EXIT_USAGE);
    };
    let criteria = criteria_for(&command);
    let result = open(cli.out.as_ref()).map_err(Failure::from).and_then(|mut out| {
        run(command, &mut out)?;
        out.flush()?;
        Ok(())
    });
    if let Err(e) = result {
        match &e {
            Failure::Usage(m) => eprintln!("error: {m}"),
            Failure::Lib(err) => eprintln!("error: {err}"),
            Failure::Io(err) => eprintln!("error: {err}"),
        }
        return ExitCode::from(e.code());
    }
    if cli.check {
        return report_checks(&criteria);
    }
    ExitCode::SUCCESS
}

fn open(path: Option<&PathBuf>) -> io::Result<Out> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn criteria_for(command: &Command) -> Vec<u8> {
    match command {
        Command::Lobachevsky { .. } | Command::Volume => vec![1],
        Command::Eval { .. } => vec![2, 3, 4, 5, 6],
        Command::Figure(f) if f.id == "cable" => vec![11],
        Command::Figure(f) if f.id == "V" || f.id == "W" => vec![8],
        Command::Figure(_) | Command::Calibrate { .. } => vec![7],
        Command::Mahler { .. } => vec![9, 10, 12],
        Command::Acceptance => (1..=checks::CRITERIA).collect(),
    }
}

fn report_checks(ids: &[u8]) -> ExitCode {
    let outcomes: Vec<Outcome> = ids.iter().filter_map(|&id| checks::run(id)).collect();
    for o in &outcomes {
        eprintln!("{o}");
    }
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(g15).unwrap_or_default()
}

fn run(command: Command, out: &mut Out) -> Result<(), Failure> {
    match command {
        Command::Lobachevsky { theta, tol } => writeln!(out, "{}", g15(lobachevsky(Angle(theta), tol)?))?,
        Command::Volume => writeln!(out, "{}", g15(fig8_volume()))?,
        Command::Eval { n, r, x } => eval(n, r, x, out)?,
        Command::Figure(args) => figure(&args, out)?,
        Command::Mahler { command } => mahler(command, out)?,
        Command::Calibrate { n, samples } => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "table", "lo", "hi", "shifted", "samples", "resolved", "truncated",
                "max_delta_x1", "max_delta_x2", "max_peak_delta_x2",
            ])?;
            for v in branch_calibration(n, samples)? {
                w.write_record([
                    v.table.to_string(),
                    g15(v.lo),
                    g15(v.hi),
                    v.shifted.to_string(),
                    v.samples.to_string(),
                    v.resolved.to_string(),
                    v.truncated.to_string(),
                    g15(v.max_delta_scale1),
                    g15(v.max_delta_scale2),
                    g15(v.max_peak_delta_scale2),
                ])?;
            }
            w.flush()?;
        }
        Command::Acceptance => {
            let outcomes = checks::run_all();
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            writeln!(out, "{passed}/{} criteria passed", outcomes.len())?;
        }
    }
    Ok(())
}

fn eval(n: u64, r: Option<f64>, x: Option<f64>, out: &mut Out) -> Result<(), Failure> {
    let p = match (r, x) {
        (Some(r), _) => EvaluationPoint::from_r(n, r)?,
        (None, Some(x)) => EvaluationPoint::new(n, x)?,
        (None, None) => return Err(Failure::Usage("one of --r or --x is required".into())),
    };
    let e = colored_jones_adaptive(&p, DEFAULT_MAX_BITS);
    writeln!(out, "N = {}", p.n())?;
    writeln!(out, "x = {}", g15(p.x()))?;
    writeln!(out, "r = {}", g15(p.r()))?;
    if e.value.is_zero() {
        writeln!(out, "value = 0")?;
    } else {
        writeln!(out, "sign = {}", e.value.sign())?;
        writeln!(out, "log|J| = {}", g15(e.value.logabs()))?;
        writeln!(out, "value = {}", g15(e.value.to_f64()))?;
        writeln!(out, "2rπ·log|J|/N = {}", g15(2.0 * std::f64::consts::PI * p.r() * e.value.logabs() / n as f64))?;
    }
    writeln!(out, "resolved = {}", e.resolved)?;
    let precision = match e.precision {
        Precision::Double => "double".to_string(),
        Precision::Extended { bits } => format!("{bits} bits"),
    };
    writeln!(out, "precision = {precision}")?;
    Ok(())
}

fn unit_grid(offset: u32) -> Vec<f64> {
    (0..=1000u32).map(|i| f64::from(1000 * offset + i) / 1000.0).collect()
}

fn figure(args: &FigureArgs, out: &mut Out) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    match args.id.as_str() {
        "V" | "W" => {
            let f = if args.id == "V" { limit_v } else { limit_w };
            w.write_record(["r", "finite", "predicted", "delta"])?;
            for x in unit_grid(0) {
                w.write_record([g15(x), String::new(), g15(f(x)?), String::new()])?;
            }
        }
        "cable" => {
            let profile = cable_profile(args.n.unwrap_or(800), args.r)?;
            w.write_record(["c", "value"])?;
            for row in &profile.rows {
                w.write_record([row.c.to_string(), opt(row.value)])?;
            }
        }
        id => {
            let (offset, default_n) = match id {
                "conv8000" => (4, 8000),
                _ => match id.strip_prefix("conv").and_then(|k| k.parse::<u32>().ok()) {
                    Some(k @ 1..=5) => (k - 1, 2000),
                    _ => return Err(Failure::Usage(format!("unknown figure id `{id}`; see `jones figure --help`"))),
                },
            };
            let rows = convergence_table(&unit_grid(offset), args.n.unwrap_or(default_n))?;
            write_records(&mut w, "r", &rows, |r| r.r.expect("grid rows carry r"))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_records<W: Write>(
    w: &mut csv::Writer<W>,
    key: &str,
    rows: &[ConvergenceRecord],
    key_of: impl Fn(&ConvergenceRecord) -> f64,
) -> Result<(), Failure> {
    w.write_record([key, "finite", "predicted", "delta"])?;
    for row in rows {
        w.write_record([g15(key_of(row)), opt(row.finite_value), g15(row.predicted), opt(row.delta)])?;
    }
    Ok(())
}

fn mahler(command: MahlerCommand, out: &mut Out) -> Result<(), Failure> {
    let fig8 = LaurentPolynomialZ::figure_eight;
    match command {
        MahlerCommand::Roots { poly, tol } => {
            let report = mahler_report(&poly, tol)?;
            writeln!(out, "{}", g15(report.value))?;
            if report.near_unit_circle > 0 {
                eprintln!("note: {} roots lie within {tol} of the unit circle", report.near_unit_circle);
            }
        }
        MahlerCommand::Quad { constant, poly, jones, n } => {
            let sampler: Box<dyn CircleSampler> = match (constant, poly, jones) {
                (Some(c), _, _) => Box::new(ConstantSampler(c)),
                (_, Some(p), _) => Box::new(p),
                (_, _, Some(n)) => Box::new(JonesSampler { n, extended: true }),
                _ => return Err(Failure::Usage("one of --const, --poly or --jones is required".into())),
            };
            let report = log_mahler_quadrature_report(sampler.as_ref(), n)?;
            writeln!(out, "{}", g15(report.value))?;
            if report.unresolved_samples > 0 {
                eprintln!("note: {} of {} samples below the rounding floor", report.unresolved_samples, report.samples);
            }
        }
        MahlerCommand::Homology { n, poly } => {
            writeln!(out, "{}", homology_order(&poly.unwrap_or_else(fig8), n)?)?;
        }
        MahlerCommand::Sw { poly, n } => {
            let rows = silver_williams_convergence(&poly.unwrap_or_else(fig8), &n)?;
            let mut w = csv::Writer::from_writer(out);
            write_records(&mut w, "N", &rows, |r| r.n as f64)?;
            w.flush()?;
        }
        MahlerCommand::JonesGrowth { n, n_quad } => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["N", "mahler", "ratio", "scaled_ratio"])?;
            for row in jones_mahler_growth(&n, n_quad)? {
                w.write_record([row.n.to_string(), g15(row.mahler), opt(row.ratio), opt(row.scaled_ratio)])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
