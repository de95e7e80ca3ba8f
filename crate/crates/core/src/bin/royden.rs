use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use royden::cli::{parse_coeffs, thread_limit, Config, OutputFormat};
use royden::cover::DoubleCover;
use royden::homology::build_path_system;
use royden::norm::royden_norm;
use royden::oracle::direct_norm;
use royden::poly::{self, Poly};
use royden::quaddiff::{QuadDiff, QuadDiffJson};
use royden::{plot, sphere, Error};

#[derive(Parser)]
#[command(name = "royden", version, about = "Royden's norm of quadratic differentials on punctured spheres")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Tolerances {
    /// Per-edge quadrature tolerance
    #[arg(long, default_value_t = royden::periods::DEFAULT_QUAD_TOL)]
    quad_tol: f64,
    /// Relative tolerance of the direct area integration
    #[arg(long, default_value_t = royden::oracle::DEFAULT_ORACLE_TOL)]
    oracle_tol: f64,
    /// Root-finding residual tolerance
    #[arg(long, default_value_t = royden::quaddiff::DEFAULT_ROOT_TOL)]
    root_tol: f64,
    /// Path clearance as a fraction of branch-point spacing
    #[arg(long, default_value_t = royden::homology::DEFAULT_CLEARANCE)]
    clearance: f64,
}

impl Tolerances {
    fn config(&self, samples: usize, output_format: OutputFormat) -> Config {
        Config {
            quad_tol: self.quad_tol,
            oracle_tol: self.oracle_tol,
            root_tol: self.root_tol,
            clearance: self.clearance,
            samples,
            output_format,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Periods,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Polar,
    Derivatives,
}

#[derive(Subcommand)]
enum Cmd {
    /// Norm of g/h dx^2, printed as JSON
    Norm {
        /// Numerator coefficients, lowest degree first
        #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
        g: Option<String>,
        /// Denominator coefficients, lowest degree first
        #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
        h: Option<String>,
        /// JSON file {"g": [[re, im], ...], "h": [[re, im], ...]}
        #[arg(long, conflicts_with_all = ["g", "h"])]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Periods)]
        method: Method,
        /// Write the path system as JSON
        #[arg(long)]
        dump_paths: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Sample the unit sphere of Q(X) for dim Q(X) = 2, as CSV
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Output file (stdout if omitted)
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Recompute the finite-difference columns of a sweep CSV
    Derivatives {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Render a sweep CSV as SVG
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PlotKind::Polar)]
        kind: PlotKind,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Roots of a polynomial with multiplicities
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, default_value_t = royden::quaddiff::DEFAULT_ROOT_TOL)]
        root_tol: f64,
    },
}

enum Failure {
    Input(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| input(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_sweep(path: &PathBuf) -> Result<Vec<sphere::SphereSample>, Failure> {
    let f = File::open(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    sphere::read_csv(BufReader::new(f)).map_err(input)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("result serializes")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Norm {
            g,
            h,
            input: json,
            method,
            dump_paths,
            tol,
        } => {
            let cfg = tol.config(0, OutputFormat::Json);
            cfg.validate()?;
            let (g, h): (Poly, Poly) = match json {
                Some(path) => {
                    let f = File::open(&path).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    let q: QuadDiffJson = serde_json::from_reader(BufReader::new(f)).map_err(input)?;
                    (q.g, q.h)
                }
                None => (
                    parse_coeffs(g.as_deref().unwrap_or_default()).map_err(input)?,
                    parse_coeffs(h.as_deref().unwrap_or_default()).map_err(input)?,
                ),
            };
            let q = QuadDiff::validate(&g, &h, cfg.root_tol)?;
            if let Some(path) = dump_paths {
                let cover = DoubleCover::build(&q)?;
                let ps = build_path_system(&cover, cfg.clearance)?;
                std::fs::write(&path, ps.to_json()).map_err(|e| input(format!("{}: {e}", path.display())))?;
            }
            let line = match method {
                Method::Periods => to_json(&royden_norm(&q, &cfg.norm_options())?),
                Method::Direct => to_json(&direct_norm(&q, cfg.oracle_tol)?),
            };
            println!("{line}");
        }
        Cmd::Sphere { h, samples, output, tol } => {
            let cfg = tol.config(samples, OutputFormat::Csv);
            cfg.validate_sweep()?;
            let h = parse_coeffs(&h).map_err(input)?;
            let threads = thread_limit().map_err(Failure::Input)?;
            let pool = {
                let mut b = rayon::ThreadPoolBuilder::new();
                if let Some(n) = threads {
                    b = b.num_threads(n);
                }
                b.build().map_err(input)?
            };
            let mut sw = pool.install(|| sphere::sweep(&h, cfg.samples, &cfg.norm_options()))?;
            if sw.is_complete() {
                sphere::finite_difference_derivatives(&mut sw.samples, 3)?;
            }
            let out = open_out(&output)?;
            sphere::write_csv(out, &sw.samples, &sw.failures).map_err(input)?;
            if let Some(f) = sw.failures.first() {
                return Err(Failure::Compute(f.error.clone()));
            }
        }
        Cmd::Derivatives { input: path, output, order } => {
            let mut samples = read_sweep(&path)?;
            sphere::finite_difference_derivatives(&mut samples, order)?;
            sphere::write_csv(open_out(&output)?, &samples, &[]).map_err(input)?;
        }
        Cmd::Plot { input: path, kind, output } => {
            let samples = read_sweep(&path)?;
            let svg = match kind {
                PlotKind::Polar => plot::polar_svg(&samples),
                PlotKind::Derivatives => plot::derivatives_svg(&samples),
            };
            open_out(&output)?.write_all(svg.as_bytes()).map_err(input)?;
        }
        Cmd::Roots { p, root_tol } => {
            let p = parse_coeffs(&p).map_err(input)?;
            let rs = poly::roots(&p, root_tol)?;
            for r in &rs.roots {
                println!("{} {} {}", r.location.re, r.location.im, r.multiplicity);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
