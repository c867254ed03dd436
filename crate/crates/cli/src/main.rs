//! `hornich-lab`: classify, scan and verify the integral operators
//! `C[f,g](z) = ∫ (f/w)^α (g')^β dw` built from Hornich operations.
//!
//! Exit codes: 0 success, 1 verification failure (mismatches or failed
//! checks), 2 usage error, 3 numerical abort.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use hornich_core::catalog::{self, AnalyticFunction};
use hornich_core::criteria::{
    kaplan_arc_minimum, Criterion, OperatorEvaluator, SamplingProfile, Verdict,
};
use hornich_core::operators::{apply_family, Family, OperatorSpec};
use hornich_core::regions::{
    sharpness_check, GridSpec, RegionVariant, ScanReport, TheoremId, TheoremInstance,
};
use hornich_core::report::{write_report, Format};
use hornich_core::verify;

#[derive(Parser)]
#[command(
    name = "hornich-lab",
    about = "Numerical workbench for integral operators built from Hornich operations",
    version
)]
struct Cli {
    /// Sampling profile file (key = value lines: radii, sharp_radii,
    /// samples, eps, band)
    #[arg(long, global = true)]
    profile: Option<PathBuf>,

    /// Circle radii, comma separated (overrides the profile)
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    radii: Option<Vec<f64>>,

    /// Sharp radii, comma separated (overrides the profile)
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    sharp_radii: Option<Vec<f64>>,

    /// Angular samples per circle (overrides the profile)
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Strict-inequality tolerance (overrides the profile)
    #[arg(long, global = true)]
    eps: Option<f64>,

    /// Indeterminacy band width (overrides the profile)
    #[arg(long, global = true)]
    band: Option<f64>,

    /// Worker thread cap (fallback: HORNICH_LAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one membership criterion on C[f,g] and print the verdict
    Classify(ClassifyArgs),
    /// Print coefficients and sampled values of a transformed function
    OpEval(OpEvalArgs),
    /// Print the minimum Kaplan arc integral per radius for a function
    Kaplan(KaplanArgs),
    /// Grid-scan the inclusion direction of a theorem region
    Scan(ScanArgs),
    /// Grid-scan the sharpness direction with the proof witnesses
    Sharpness(ScanArgs),
    /// Run the built-in verification suite
    VerifyAll(VerifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Target class: K, Kl (needs --lambda), G, Gg (needs --gamma), C
    #[arg(long)]
    class: String,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Function spec, e.g. `cayley` or `kscale(lambda=0.5,base=halfplane)`
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
}

#[derive(Args)]
struct OpEvalArgs {
    /// Operator family: c, i, j, alexander, hornich-sum, hornich-scale
    #[arg(long, default_value = "c")]
    family: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long)]
    f: String,
    #[arg(long, default_value = "identity")]
    g: String,
    /// How many leading Taylor coefficients to print
    #[arg(long, default_value_t = 8)]
    coeffs: usize,
    /// Series truncation order
    #[arg(long, default_value_t = 256)]
    order: usize,
}

#[derive(Args)]
struct KaplanArgs {
    #[arg(long)]
    f: String,
    /// Radii to probe (defaults to the profile's radii plus sharp radii)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    r: Option<Vec<f64>>,
}

#[derive(Args)]
struct ScanArgs {
    /// Theorem id, e.g. K.KK, C.KK, Kl.GKl, JG.Gg (see README for the list)
    #[arg(long)]
    theorem: String,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Grid ranges alpha_min,alpha_max,beta_min,beta_max
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.25)]
    step: f64,
    /// Use the rederived region variant instead of the stated lists
    #[arg(long)]
    rederived: bool,
    /// Write the full report to this path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json, csv or pgm
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also sweep every theorem id (scan + sharpness) after the criteria
    #[arg(long)]
    full: bool,
    /// Class parameter λ for the full sweep
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Class parameter γ for the full sweep
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Numerical(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli.threads.or_else(|| {
        std::env::var("HORNICH_LAB_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }

    let profile = match load_profile(&cli) {
        Ok(p) => p,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };

    let outcome = match &cli.command {
        Command::Classify(args) => run_classify(args, &profile),
        Command::OpEval(args) => run_op_eval(args),
        Command::Kaplan(args) => run_kaplan(args, &profile),
        Command::Scan(args) => run_scan(args, &profile, false),
        Command::Sharpness(args) => run_scan(args, &profile, true),
        Command::VerifyAll(args) => run_verify(args, &profile),
    };

    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(message)) => {
            eprintln!("numerical abort: {message}");
            ExitCode::from(3)
        }
    }
}

/// Config precedence: defaults < profile file < individual flags.
fn load_profile(cli: &Cli) -> Result<SamplingProfile, String> {
    let mut prof = match &cli.profile {
        Some(path) => SamplingProfile::from_config_file(path).map_err(|e| e.to_string())?,
        None => SamplingProfile::default(),
    };
    if let Some(radii) = &cli.radii {
        prof.radii = radii.clone();
    }
    if let Some(sharp) = &cli.sharp_radii {
        prof.sharp_radii = sharp.clone();
    }
    if let Some(samples) = cli.samples {
        prof.angular_samples = samples;
    }
    if let Some(eps) = cli.eps {
        prof.eps = eps;
    }
    if let Some(band) = cli.band {
        prof.band = band;
    }
    prof.validate().map_err(|e| e.to_string())?;
    Ok(prof)
}

fn parse_function(spec: &str) -> Result<AnalyticFunction, CliError> {
    catalog::parse(spec).map_err(|e| CliError::Usage(format!("in `{spec}`: {e}")))
}

fn criterion_for(
    class: &str,
    lambda: Option<f64>,
    gamma: Option<f64>,
) -> Result<Criterion, CliError> {
    match class.to_ascii_lowercase().as_str() {
        "k" => Ok(Criterion::ConvexOrder(0.0)),
        "kl" | "klam" => {
            let l = lambda.ok_or(CliError::Usage("class Kl needs --lambda".into()))?;
            Ok(Criterion::ConvexOrder(l))
        }
        "g" => Ok(Criterion::Ozaki(1.0)),
        "gg" | "ggam" => {
            let g = gamma.ok_or(CliError::Usage("class Gg needs --gamma".into()))?;
            Ok(Criterion::Ozaki(g))
        }
        "c" => Ok(Criterion::CloseToConvex),
        other => Err(CliError::Usage(format!("unknown class `{other}`"))),
    }
}

fn describe_verdict(v: &Verdict) -> String {
    let mut out = format!("verdict: {:?}\nmargin: {:.6e}", v.outcome, v.margin);
    if let Some(w) = &v.witness {
        out.push_str(&format!(
            "\nwitness: r = {}, theta = {:.6}{}, value = {:.6}",
            w.radius,
            w.theta,
            w.theta_end.map(|t| format!(" .. {t:.6}")).unwrap_or_default(),
            w.value
        ));
    }
    out
}

fn run_classify(args: &ClassifyArgs, prof: &SamplingProfile) -> Result<ExitCode, CliError> {
    let f = parse_function(&args.f)?;
    let g = parse_function(&args.g)?;
    let criterion = criterion_for(&args.class, args.lambda, args.gamma)?;
    let eval = OperatorEvaluator {
        spec: OperatorSpec::c(args.alpha, args.beta),
        f: &f,
        g: &g,
    };
    let verdict = criterion.run(&eval, prof, false).map_err(|e| CliError::Numerical(e.to_string()))?;
    println!("operator: C[alpha={}, beta={}] of ({}, {})", args.alpha, args.beta, f.name(), g.name());
    println!("criterion: {criterion}");
    println!("{}", describe_verdict(&verdict));
    Ok(ExitCode::SUCCESS)
}

fn format_complex(c: Complex64) -> String {
    let fmt = |x: f64| {
        let snapped = x.round();
        if (x - snapped).abs() < 1e-12 && snapped.abs() < 1e15 {
            format!("{}", snapped as i64)
        } else {
            format!("{x}")
        }
    };
    if c.im.abs() < 1e-12 {
        fmt(c.re)
    } else {
        let im = fmt(c.im);
        let sign = if im.starts_with('-') { "" } else { "+" };
        format!("{}{sign}{im}i", fmt(c.re))
    }
}

fn run_op_eval(args: &OpEvalArgs) -> Result<ExitCode, CliError> {
    let family = Family::parse(&args.family)
        .ok_or_else(|| CliError::Usage(format!("unknown family `{}`", args.family)))?;
    let f = parse_function(&args.f)?;
    let g = parse_function(&args.g)?;
    if args.coeffs < 1 || args.order < args.coeffs {
        return Err(CliError::Usage("need 1 <= --coeffs <= --order".into()));
    }
    let spec = OperatorSpec::new(family, args.alpha, args.beta);
    let series = apply_family(&spec, &f, &g, args.order)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let rendered: Vec<String> =
        (0..args.coeffs).map(|k| format_complex(series.coeff(k))).collect();
    println!("operator: {:?}[alpha={}, beta={}] of ({}, {})", family, args.alpha, args.beta, f.name(), g.name());
    println!("coefficients: {}", rendered.join(", "));
    for &(re, im) in &[(0.3, 0.0), (0.0, 0.3), (-0.5, 0.2), (0.55, 0.55)] {
        let z = Complex64::new(re, im);
        let eval = series.evaluate(z).map_err(|e| CliError::Numerical(e.to_string()))?;
        println!(
            "value at {}: {} (series tail bound {:.2e})",
            format_complex(z),
            format_complex(eval.value),
            eval.tail_bound
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_kaplan(args: &KaplanArgs, prof: &SamplingProfile) -> Result<ExitCode, CliError> {
    let f = parse_function(&args.f)?;
    let radii = args.r.clone().unwrap_or_else(|| prof.kaplan_radii());
    for &r in &radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(CliError::Usage(format!("radius {r} outside (0,1)")));
        }
    }
    println!("function: {}", f.name());
    println!("threshold: -pi = {:.6}", -std::f64::consts::PI);
    let mut worst = f64::INFINITY;
    for &r in &radii {
        let (arc, m) =
            kaplan_arc_minimum(&f, r, prof).map_err(|e| CliError::Numerical(e.to_string()))?;
        let margin = arc.value + std::f64::consts::PI;
        worst = worst.min(margin);
        let verdict = if margin >= prof.band.max(prof.eps) {
            "pass"
        } else if margin <= -prof.band.max(prof.eps) {
            "FAIL"
        } else {
            "indeterminate"
        };
        println!(
            "r = {:<6} min arc integral = {:>12.6}  (arc {:.4} .. {:.4}, {} samples)  {}",
            r,
            arc.value,
            arc.theta_start(m),
            arc.theta_end(m),
            m,
            verdict
        );
    }
    println!("overall margin: {worst:.6e}");
    Ok(ExitCode::SUCCESS)
}

fn instance_from(args: &ScanArgs) -> Result<TheoremInstance, CliError> {
    let id: TheoremId = args
        .theorem
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown theorem id `{}`", args.theorem)))?;
    TheoremInstance::new(id, args.lambda, args.gamma)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn grid_from(args: &ScanArgs) -> Result<GridSpec, CliError> {
    let mut grid = GridSpec { step: args.step, boundary_exemption: args.step, ..GridSpec::default() };
    if let Some(values) = &args.grid {
        if values.len() != 4 {
            return Err(CliError::Usage(format!(
                "--grid needs alpha_min,alpha_max,beta_min,beta_max (got {} values)",
                values.len()
            )));
        }
        grid.alpha_min = values[0];
        grid.alpha_max = values[1];
        grid.beta_min = values[2];
        grid.beta_max = values[3];
    }
    grid.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(grid)
}

fn print_scan_summary(report: &ScanReport) {
    println!("theorem: {}", report.theorem);
    println!("direction: {:?}", report.direction);
    print!("region:\n{}", report.region);
    println!(
        "grid: alpha [{}, {}], beta [{}, {}], step {} ({} x {} cells)",
        report.grid.alpha_min,
        report.grid.alpha_max,
        report.grid.beta_min,
        report.grid.beta_max,
        report.grid.step,
        report.grid.cols(),
        report.grid.rows()
    );
    let battery: Vec<String> =
        report.battery.iter().map(|(f, g)| format!("({f},{g})")).collect();
    println!("battery: {}", battery.join(", "));
    println!(
        "tested {} cells: {} mismatches, {} indeterminate",
        report.tested_count,
        report.mismatches.len(),
        report.indeterminate_count
    );
    for &idx in report.mismatches.iter().take(10) {
        let c = &report.cells[idx];
        println!(
            "  mismatch at (alpha={}, beta={}): {:?}, margin {:?}, pair {}",
            c.alpha,
            c.beta,
            c.status,
            c.margin,
            c.pair.as_deref().unwrap_or("-")
        );
    }
    if report.mismatches.len() > 10 {
        println!("  ... and {} more", report.mismatches.len() - 10);
    }
    println!("elapsed: {:.2} s", report.elapsed_seconds);
}

fn run_scan(args: &ScanArgs, prof: &SamplingProfile, outside: bool) -> Result<ExitCode, CliError> {
    let inst = instance_from(args)?;
    let grid = grid_from(args)?;
    let variant = if args.rederived { RegionVariant::Rederived } else { RegionVariant::Stated };
    let report = if outside {
        sharpness_check(&inst, &grid, prof, variant)
    } else {
        let battery = inst.default_battery().map_err(|e| CliError::Numerical(e.to_string()))?;
        hornich_core::regions::scan(&inst, &battery, &grid, prof, variant)
    }
    .map_err(|e| CliError::Numerical(e.to_string()))?;

    print_scan_summary(&report);

    if let Some(path) = &args.out {
        let format = Format::parse(&args.format)
            .ok_or_else(|| CliError::Usage(format!("unknown format `{}`", args.format)))?;
        write_report(&report, format, path).map_err(|e| CliError::Numerical(e.to_string()))?;
        println!("report written to {}", path.display());
    }

    Ok(if report.passes() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_verify(args: &VerifyArgs, prof: &SamplingProfile) -> Result<ExitCode, CliError> {
    println!(
        "verification suite (battery seed 0x{:X}, {} angular samples, eps {:.1e}, band {:.1e})",
        verify::BATTERY_SEED,
        prof.angular_samples,
        prof.eps,
        prof.band
    );
    let mut all_passed = true;
    for result in verify::run_acceptance(prof) {
        println!("{}", result.line());
        all_passed &= result.passed;
    }
    if args.full {
        println!(
            "theorem sweep at lambda = {}, gamma = {} (stated lists; the three \
             inconsistent parts must be flagged and their rederived regions must be clean):",
            args.lambda, args.gamma
        );
        let grid = GridSpec::default();
        let sweep = verify::theorem_sweep(&grid, prof, args.lambda, args.gamma)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        for (label, result) in sweep {
            println!("{label}: {} — {}", if result.passed { "PASS" } else { "FAIL" }, result.details);
            all_passed &= result.passed;
        }
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
