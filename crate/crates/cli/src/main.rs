//! `kcurve`: validate, classify, reduce and deform curvature-bounded curves.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand};
use kappa_curves::dubins::{normalize, solve_csc, DEFAULT_LAMBDA};
use kappa_curves::geom::{random_curve, Config, Curve, KappaParams, Point2};
use kappa_curves::homotopy::{build_homotopy_with, reduce_with, verify_trace, HomotopyTrace, ReduceOptions};
use kappa_curves::io::{self as kio, ErrorCategory, ParseError};
use kappa_curves::regions::{build_lens, class_count, class_label};
use kappa_curves::svg::{render_curve, render_lens, render_trace, SvgOptions};
use kappa_curves::validation::validate;

#[derive(Parser)]
#[command(name = "kcurve", version, about = "Curvature-bounded plane curves between two points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of homotopy classes for the endpoints, with the lens regions.
    Classify {
        #[arg(long, value_parser = parse_point)]
        x: Point2,
        #[arg(long, value_parser = parse_point)]
        y: Point2,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
    /// Homotopy class of each curve document.
    Label {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Replace a curve by its fragment-wise CSC normalization.
    Normalize {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Reduce a curve to a length minimizer of its class, emitting the trace.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        out: Out,
    },
    /// Explicit homotopy between two curves of the same class.
    Homotope {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        out: Out,
    },
    /// Check the curvature bound and joints of each curve document.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check each trace document frame by frame.
    VerifyTrace {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Shortest CSC path between two configurations.
    Csc {
        #[arg(long, value_parser = parse_config)]
        start: Config,
        #[arg(long, value_parser = parse_config)]
        end: Config,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Random valid curve between two points.
    Random {
        #[arg(long, value_parser = parse_point)]
        x: Point2,
        #[arg(long, value_parser = parse_point)]
        y: Point2,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 8)]
        complexity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// SVG of a curve or trace document, or of the lens of `--x`, `--y`.
    Render {
        file: Option<PathBuf>,
        #[arg(long)]
        regions: bool,
        #[arg(long, value_parser = parse_point, requires = "y", conflicts_with = "file")]
        x: Option<Point2>,
        #[arg(long, value_parser = parse_point, requires = "x")]
        y: Option<Point2>,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 600.0)]
        width: f64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Tuning {
    /// Minimum number of frames per elementary move.
    #[arg(long)]
    steps: Option<usize>,
    /// Required relative length decrease per reduction step.
    #[arg(long)]
    tol: Option<f64>,
}

impl Tuning {
    fn options(&self) -> ReduceOptions {
        let mut o = ReduceOptions::default();
        if let Some(s) = self.steps {
            o.min_steps = s.max(1);
        }
        if let Some(t) = self.tol {
            o.tol_factor = t;
        }
        o
    }
}

#[derive(Args)]
struct Out {
    /// Output file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl Out {
    fn write(&self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.out {
            Some(p) => fs::write(p, bytes).map_err(|e| Failure::io(p, e)),
            None => io::stdout().write_all(bytes).map_err(|e| Failure::io(Path::new("-"), e)),
        }
    }
}

/// A failed command with its exit status: 1 for domain and class errors,
/// 2 for I/O and malformed documents.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl ToString) -> Self {
        Self { code: 1, message: message.to_string() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self { code: 2, message: format!("{}: {e}", path.display()) }
    }

    fn parse(path: &Path, e: ParseError) -> Self {
        let code = if e.category == ErrorCategory::Validation { 1 } else { 2 };
        Self { code, message: format!("{}: {e}", path.display()) }
    }
}

impl From<kappa_curves::Error> for Failure {
    fn from(e: kappa_curves::Error) -> Self {
        Self::domain(e)
    }
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; N] = v.try_into().map_err(|_| format!("expected {N} comma-separated numbers"))?;
    if arr.iter().all(|a| a.is_finite()) {
        Ok(arr)
    } else {
        Err("numbers must be finite".into())
    }
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let [x, y] = parse_numbers::<2>(s)?;
    Ok(Point2::new(x, y))
}

fn parse_config(s: &str) -> Result<Config, String> {
    let [x, y, t] = parse_numbers::<3>(s)?;
    Ok(Config::new(Point2::new(x, y), t))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| Failure::io(path, e))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn read_curve(path: &Path) -> Result<Curve, Failure> {
    kio::parse_curve(&read(path)?).map_err(|e| Failure::parse(path, e))
}

fn read_trace(path: &Path) -> Result<HomotopyTrace, Failure> {
    kio::parse_trace(&read(path)?).map_err(|e| Failure::parse(path, e))
}

fn kappa(k: f64) -> Result<KappaParams, Failure> {
    Ok(KappaParams::new(k)?)
}

/// Runs `f` on every file concurrently and prints the results in order.
fn each_file(files: &[PathBuf], f: impl Fn(&Path) -> Result<String, Failure> + Sync) -> Result<(), Failure> {
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(|| f(p))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut code = 0;
    let mut out = String::new();
    for (p, r) in files.iter().zip(results) {
        match r {
            Ok(line) => out.push_str(&format!("{}: {line}\n", p.display())),
            Err(e) => {
                eprintln!("error: {}", e.message);
                code = code.max(e.code);
            }
        }
    }
    print!("{out}");
    match code {
        0 => Ok(()),
        c => Err(Failure { code: c, message: String::new() }),
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Classify { x, y, kappa: k } => {
            let k = kappa(k)?;
            let d = x.dist(y);
            println!("classes: {}", class_count(x, y, k));
            println!("d: {d}");
            println!("r: {}", k.radius());
            match build_lens(x, y, k) {
                Ok(l) => {
                    println!("lens: c1 = ({}, {}), c2 = ({}, {})", l.c1.x, l.c1.y, l.c2.x, l.c2.y);
                    println!("regions: lens I, lobes E, outside U");
                }
                Err(_) if d == 0.0 => println!("lens: none (closed curves)"),
                Err(_) => println!("lens: none (d >= 2r)"),
            }
            Ok(())
        }
        Command::Label { files } => each_file(&files, |p| {
            let c = read_curve(p)?;
            Ok(class_label(&c)?.to_string())
        }),
        Command::Normalize { file, lambda, out } => {
            let c = read_curve(&file)?;
            out.write(&kio::emit_cs(&normalize(&c, lambda)?))
        }
        Command::Reduce { file, tuning, out } => {
            let c = read_curve(&file)?;
            let t = reduce_with(&c, &tuning.options())?;
            out.write(&kio::emit_trace(&t))
        }
        Command::Homotope { a, b, tuning, out } => {
            let (a, b) = (read_curve(&a)?, read_curve(&b)?);
            let t = build_homotopy_with(&a, &b, &tuning.options())?;
            out.write(&kio::emit_trace(&t))
        }
        Command::Verify { files } => each_file(&files, |p| {
            let c = kio::parse_curve_unchecked(&read(p)?).map_err(|e| Failure::parse(p, e))?;
            let rep = validate(&c);
            match rep.first_violation() {
                None => Ok(format!("valid (max curvature {:.6e})", rep.max_curvature)),
                Some(v) => Err(Failure::domain(format!(
                    "{}: invalid, {} violation of {:.3e} at s = {}",
                    p.display(),
                    v.kind,
                    v.magnitude,
                    v.location
                ))),
            }
        }),
        Command::VerifyTrace { files } => each_file(&files, |p| {
            let t = read_trace(p)?;
            let rep = verify_trace(&t);
            match rep.first_violation() {
                None => Ok(format!("valid ({} frames)", t.frames.len())),
                Some(v) => Err(Failure::domain(format!(
                    "{}: invalid, {} violation of {:.3e} at frame {} (p = {})",
                    p.display(),
                    v.kind,
                    v.magnitude,
                    v.frame.map_or("-".into(), |f| f.to_string()),
                    v.location
                ))),
            }
        }),
        Command::Csc { start, end, kappa: k, out } => {
            let k = kappa(k)?;
            let sol = solve_csc(start, end, k)?;
            let mut words: Vec<_> = sol.candidates.iter().collect();
            words.sort_by(|a, b| a.length().total_cmp(&b.length()));
            for w in words {
                eprintln!("{:?}: {:.16e}", w.kind, w.length());
            }
            out.write(&kio::emit_cs(&sol.best.to_curve(k)?))
        }
        Command::Random { x, y, kappa: k, complexity, seed, out } => {
            let c = random_curve(x, y, kappa(k)?, complexity, seed)?;
            out.write(&kio::emit_cs(&c))
        }
        Command::Render { file, regions, x, y, kappa: k, width, out } => {
            let opts = SvgOptions { regions, width };
            let svg = match (file, x, y) {
                (Some(f), _, _) => {
                    let bytes = read(&f)?;
                    // trace documents are recognised by their frames
                    let is_trace = serde_json::from_slice::<serde_json::Value>(&bytes)
                        .map(|v| v.get("frames").is_some())
                        .unwrap_or(false);
                    if is_trace {
                        render_trace(&kio::parse_trace(&bytes).map_err(|e| Failure::parse(&f, e))?, &opts)
                    } else {
                        render_curve(&kio::parse_curve(&bytes).map_err(|e| Failure::parse(&f, e))?, &opts)
                    }
                }
                (None, Some(x), Some(y)) => render_lens(&build_lens(x, y, kappa(k)?)?, &opts),
                _ => return Err(Failure { code: 2, message: "render needs a document or --x and --y".into() }),
            };
            out.write(svg.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
