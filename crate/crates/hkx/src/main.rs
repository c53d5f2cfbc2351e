//! `hkx`: command-line front end for the harmonic-kernels library.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use harmonic_kernels::bergman_chain::bergman_chain;
use harmonic_kernels::kernel_transform::{default_weight, symbol_kernel_expansion, KernelExpansion};
use harmonic_kernels::numeric_oracle::{self, fit_boundary_expansion, BasisTerm, SpectralBall};
use harmonic_kernels::poisson_recursion::compute_poisson_symbols;
use harmonic_kernels::reference_kernels::{
    eval_bergman_closed, eval_poisson_closed, eval_weighted_halfspace, ClosedKind, PointPair,
};
use harmonic_kernels::symbol_algebra::{DomainSpec, JetPoly};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Lib(#[from] harmonic_kernels::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

type Res<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "hkx", version, about = "Boundary expansions and numeric oracles for Poisson and harmonic Bergman kernels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Symbolic kernel expansion near the boundary.
    Expand {
        #[arg(value_enum)]
        kernel: KernelKind,
        #[command(flatten)]
        args: ExpandArgs,
    },
    /// Closed-form reference kernels at one point pair (CSV row or JSON).
    ClosedForm(ClosedArgs),
    /// Regression suite of the explicit formulas.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include wall-clock times (makes output non-deterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Numerical oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Least-squares fit of `d,value` samples from a CSV file.
    Fit(FitArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelKind {
    Poisson,
    Bergman,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct ExpandArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Jet entries Φ^(k)(0), k = 1, 2, …: exact rationals or polynomials in a1, a2, …
    /// (default: symbolic a1 … a_grades).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    jet: Option<Vec<String>>,
    #[arg(long, default_value_t = 3)]
    grades: usize,
    /// x′-truncation weight (default: the grade count).
    #[arg(long)]
    weight: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClosedKindArg {
    PoissonHalfspace,
    PoissonBall,
    BergmanHalfspace,
    BergmanBall,
    WeightedHalfspace,
}

#[derive(clap::Args, Debug)]
struct ClosedArgs {
    #[arg(long, value_enum)]
    kind: ClosedKindArg,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    y: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Value of g at the boundary point (weight e^{−g}).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    g0: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// FD convergence on the unit ball and a fit of the numeric Poisson kernel.
    Fd {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0 / 16.0)]
        h0: f64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Mesh width of the Poisson-kernel solve; 0 skips the fit.
        #[arg(long, default_value_t = 1.0 / 256.0)]
        fit_h: f64,
        /// Half-width of the boundary bump.
        #[arg(long, default_value_t = 1.0 / 64.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        d_lo: f64,
        #[arg(long, default_value_t = 0.3)]
        d_hi: f64,
        /// Smallest accepted observed order.
        #[arg(long, default_value_t = 1.9)]
        min_order: f64,
        /// Accepted relative error of the leading fitted coefficient.
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Spectral harmonic Bergman kernel of the unit ball against the closed form.
    Ball {
        #[arg(long, default_value_t = 60)]
        lmax: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
struct FitArgs {
    /// CSV with header `d,value`.
    #[arg(long)]
    input: PathBuf,
    /// Basis terms such as `d^-2,d^-1,1,d log d`.
    #[arg(long, value_delimiter = ',', required = true)]
    basis: Vec<String>,
    /// Predicted coefficients, one per basis term (`-` for none).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    predicted: Option<Vec<String>>,
    /// Accepted relative error against the predictions.
    #[arg(long)]
    tol: Option<f64>,
}

/// Outcome of a successful run: the artifact was written; `false` means a mismatch.
type Verdict = bool;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("hkx: {e}");
        return ExitCode::from(2);
    }
    let mut out = std::io::stdout().lock();
    match run(cli.cmd, &mut out).and_then(|v| out.flush().map(|_| v).map_err(CliError::from)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hkx: {e}");
            ExitCode::from(2)
        }
    }
}

/// Thread count from `HKX_THREADS`.
fn init_threads() -> Res<()> {
    let Ok(v) = std::env::var("HKX_THREADS") else {
        return Ok(());
    };
    let t: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("HKX_THREADS must be a positive integer, got `{v}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = t;
    Ok(())
}

fn run(cmd: Cmd, out: &mut impl Write) -> Res<Verdict> {
    match cmd {
        Cmd::Expand { kernel, args } => expand(kernel, &args, out).map(|_| true),
        Cmd::ClosedForm(a) => closed_form(&a, out).map(|_| true),
        Cmd::Verify { suite: Suite::Paper, format, timings } => verify_paper(format, timings, out),
        Cmd::Oracle { which } => match which {
            OracleCmd::Fd { n, h0, levels, fit_h, eps, d_lo, d_hi, min_order, tol } => {
                oracle_fd(n, h0, levels, fit_h, eps, (d_lo, d_hi), min_order, tol, out)
            }
            OracleCmd::Ball { lmax, x, y, tol, format } => oracle_ball(lmax, x, y, tol, format, out),
        },
        Cmd::Fit(a) => fit(&a, out),
    }
}

fn domain(a: &ExpandArgs) -> Res<DomainSpec> {
    if a.grades > 8 {
        return Err(CliError::Config(format!("--grades {} is out of range (at most 8)", a.grades)));
    }
    if !(2..=16).contains(&a.n) {
        return Err(CliError::Config(format!("--n {} is out of range (2..=16)", a.n)));
    }
    Ok(match &a.jet {
        None => DomainSpec::symbolic(a.n, a.grades)?,
        Some(entries) => {
            let jet = entries.iter().map(|s| JetPoly::parse(s)).collect::<harmonic_kernels::Result<Vec<_>>>()?;
            DomainSpec::from_jet(a.n, jet)?
        }
    })
}

fn expansion(kernel: KernelKind, a: &ExpandArgs) -> Res<KernelExpansion> {
    let dom = domain(a)?;
    let w = a.weight.unwrap_or_else(|| default_weight(a.grades));
    if w < default_weight(a.grades) {
        return Err(CliError::Config(format!("--weight {w} is below the grade count {}", a.grades)));
    }
    let sym = match kernel {
        KernelKind::Poisson => compute_poisson_symbols(&dom, a.grades, w)?,
        KernelKind::Bergman => bergman_chain(&dom, a.grades, w)?.g,
    };
    Ok(symbol_kernel_expansion(&sym, a.grades)?)
}

fn expand(kernel: KernelKind, a: &ExpandArgs, out: &mut impl Write) -> Res<()> {
    let e = expansion(kernel, a)?;
    match a.format {
        Format::Text => writeln!(out, "{e}")?,
        Format::Json => writeln!(out, "{}", e.to_json()?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["power", "log", "pi_power", "coefficient"])?;
            for t in e.terms() {
                w.write_record([
                    t.power.to_string(),
                    t.log.to_string(),
                    t.pi_power.to_string(),
                    harmonic_kernels::kernel_transform::fmt_tpoly(&t.coeff, "t"),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn closed_form(a: &ClosedArgs, out: &mut impl Write) -> Res<()> {
    let pp = PointPair::new(a.x.clone(), a.y.clone())?;
    let ball = ClosedKind::Ball { radius: a.radius };
    let (name, value) = match a.kind {
        ClosedKindArg::PoissonHalfspace => ("poisson-halfspace", eval_poisson_closed(ClosedKind::HalfSpace, &pp)?),
        ClosedKindArg::PoissonBall => ("poisson-ball", eval_poisson_closed(ball, &pp)?),
        ClosedKindArg::BergmanHalfspace => ("bergman-halfspace", eval_bergman_closed(ClosedKind::HalfSpace, &pp)?),
        ClosedKindArg::BergmanBall => ("bergman-ball", eval_bergman_closed(ball, &pp)?),
        ClosedKindArg::WeightedHalfspace => ("weighted-halfspace", eval_weighted_halfspace(a.alpha, a.g0, &pp)?),
    };
    let n = pp.n();
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["kind".to_string(), "n".into(), "alpha".into()];
            header.extend((1..=n).map(|i| format!("x{i}")));
            header.extend((1..=n).map(|i| format!("y{i}")));
            header.push("value".into());
            w.write_record(&header)?;
            let mut row = vec![name.to_string(), n.to_string(), a.alpha.to_string()];
            row.extend(a.x.iter().chain(&a.y).map(f64::to_string));
            row.push(value.to_string());
            w.write_record(&row)?;
            w.flush()?;
        }
        Format::Json => {
            let j = serde_json::json!({"kind": name, "n": n, "alpha": a.alpha, "x": a.x, "y": a.y, "value": value});
            writeln!(out, "{}", serde_json::to_string_pretty(&j).map_err(harmonic_kernels::Error::from)?)?;
        }
        Format::Text => writeln!(out, "{name} n={n} alpha={} value={value}", a.alpha)?,
    }
    Ok(())
}

fn verify_paper(format: Format, timings: bool, out: &mut impl Write) -> Res<Verdict> {
    let mut checks = harmonic_kernels::verify::paper_checks();
    if !timings {
        for c in &mut checks {
            c.seconds = 0.0;
        }
    }
    let ok = checks.iter().all(|c| c.passed);
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&checks).map_err(harmonic_kernels::Error::from)?)?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "status", "detail"])?;
            for c in &checks {
                w.write_record([c.name.as_str(), if c.passed { "PASS" } else { "FAIL" }, c.detail.as_str()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if timings {
                    writeln!(out, "{status} {} ({:.2}s)", c.name, c.seconds)?;
                } else {
                    writeln!(out, "{status} {}", c.name)?;
                }
                if !c.passed {
                    writeln!(out, "    {}", c.detail)?;
                }
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            writeln!(out, "{passed}/{} checks passed", checks.len())?;
        }
    }
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn oracle_fd(
    n: usize,
    h0: f64,
    levels: usize,
    fit_h: f64,
    eps: f64,
    (d_lo, d_hi): (f64, f64),
    min_order: f64,
    tol: f64,
    out: &mut impl Write,
) -> Res<Verdict> {
    if !(2..=3).contains(&n) {
        return Err(CliError::Config(format!("--n {n}: finite differences support n = 2, 3")));
    }
    if !(h0 > 0.0 && h0 <= 0.5) || !(2..=8).contains(&levels) {
        return Err(CliError::Config("need 0 < --h0 ≤ 1/2 and 2 ≤ --levels ≤ 8".into()));
    }
    let conv = numeric_oracle::fd_convergence(n, h0, levels)?;
    let mut ok = conv.orders.iter().all(|&o| o >= min_order);
    let fit = if fit_h > 0.0 {
        if !(eps > 2.0 * fit_h && d_lo > 2.0 * eps && d_hi > d_lo && d_hi < 1.0) {
            return Err(CliError::Config("need --eps > 2·--fit-h, --d-lo > 2·--eps and --d-lo < --d-hi < 1".into()));
        }
        let r = numeric_oracle::numeric_poisson_fit(n, fit_h, eps, d_lo, d_hi)?;
        // the leading coefficient is c_n; the others are reported, not judged
        ok &= r.relative_error[1].is_some_and(|e| e <= tol);
        Some(r)
    } else {
        None
    };
    let j = serde_json::json!({"convergence": conv, "poisson_fit": fit, "passed": ok});
    writeln!(out, "{}", serde_json::to_string_pretty(&j).map_err(harmonic_kernels::Error::from)?)?;
    Ok(ok)
}

fn oracle_ball(lmax: usize, x: Vec<f64>, y: Vec<f64>, tol: f64, format: Format, out: &mut impl Write) -> Res<Verdict> {
    if lmax > 10_000 {
        return Err(CliError::Config(format!("--lmax {lmax} is out of range (at most 10000)")));
    }
    let sb = SpectralBall::new(lmax, x.len())?;
    let spectral = sb.bergman(&x, &y)?;
    let closed = eval_bergman_closed(ClosedKind::unit_ball(), &PointPair::new(x.clone(), y.clone())?)?;
    let rel = ((spectral - closed) / closed).abs();
    let ok = rel <= tol;
    match format {
        Format::Json => {
            let j = serde_json::json!({"n": x.len(), "l_max": lmax, "x": x, "y": y,
                "spectral": spectral, "closed_form": closed, "relative_error": rel, "passed": ok});
            writeln!(out, "{}", serde_json::to_string_pretty(&j).map_err(harmonic_kernels::Error::from)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["l_max", "spectral", "closed_form", "relative_error"])?;
            w.write_record([lmax.to_string(), spectral.to_string(), closed.to_string(), rel.to_string()])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "spectral     {spectral}")?;
            writeln!(out, "closed form  {closed}")?;
            writeln!(out, "relative     {rel:e}")?;
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(ok)
}

fn fit(a: &FitArgs, out: &mut impl Write) -> Res<Verdict> {
    let basis = a.basis.iter().map(|b| BasisTerm::parse(b)).collect::<harmonic_kernels::Result<Vec<_>>>()?;
    let predicted = match &a.predicted {
        None => Vec::new(),
        Some(p) => p
            .iter()
            .map(|s| match s.trim() {
                "-" | "" => Ok(None),
                v => v.parse::<f64>().map(Some).map_err(|_| CliError::Config(format!("bad prediction `{v}`"))),
            })
            .collect::<Res<Vec<_>>>()?,
    };
    let mut rdr = csv::Reader::from_path(&a.input)?;
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| -> Res<f64> {
            rec.get(k)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| CliError::Config(format!("{}: row {} needs numeric d,value", a.input.display(), i + 2)))
        };
        let d = field(0)?;
        if d <= 0.0 {
            return Err(CliError::Config(format!("{}: row {}: d must be positive", a.input.display(), i + 2)));
        }
        samples.push((d, field(1)?));
    }
    let report = fit_boundary_expansion(&samples, &basis, &predicted)?;
    writeln!(out, "{}", report.to_json()?)?;
    Ok(match a.tol {
        Some(t) => report.relative_error.iter().flatten().all(|&e| e <= t),
        None => true,
    })
}
