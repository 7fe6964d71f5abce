//! Command-line front end: spectral decompositions, commutation reports,
//! solver runs, the check suite, and canned demos.
//!
//! Exit codes: 0 = success / all checks passed, 1 = check failures,
//! 2 = usage or configuration error, 3 = numeric or solver failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ejalab::json;
use ejalab::solvers::{
    fan_trace_max, maximize_over_orbit, solve_cone_cp, solve_convex_min,
    solve_linear_spectral_max, solve_linear_spectral_min, sum_k_largest, ObjectiveSpec,
    SolveOptions, VectorField,
};
use ejalab::spectral::{Orbit, QRep, SpectralFunction, SpectralSet};
use ejalab::suite::{run_check_suite, CheckName, SuiteConfig};
use ejalab::{strong_commute, Algebra, AlgebraSpec, EjaError, Element, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "ejalab", version, about = "Spectral optimization lab for Euclidean Jordan algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the eigenvalues and Jordan frame of an element.
    Spectrum {
        /// Element JSON file (coordinate or natural matrix form).
        element: PathBuf,
    },
    /// Print the commutation report for a pair of elements.
    Commute {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run a solver and print its report.
    Solve(SolveArgs),
    /// Run the verification suite and write a JSON report.
    Check(CheckArgs),
    /// Run a canned worked example with a human-readable trace.
    Demo {
        #[arg(value_parser = ["fan", "kyfan", "example1", "cp"])]
        name: String,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Solver kind: linear_max | linear_min | convex_min | orbit_max.
    #[arg(value_parser = ["linear_max", "linear_min", "convex_min", "orbit_max"])]
    kind: String,
    /// Spectral set JSON: {"algebra": ..., "variant": ..., ...}.
    #[arg(long)]
    set: PathBuf,
    /// Objective JSON: {"h":"linear","c":...} | {"h":"quadratic",...}.
    #[arg(long)]
    objective: PathBuf,
    /// Spectral-function JSON for the linear solvers, e.g. {"phi":"sum"}.
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Solver options JSON; omitted fields take their defaults.
    #[arg(long)]
    options: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite config JSON mirroring SuiteConfig field-for-field.
    #[arg(long, conflicts_with = "suite")]
    config: Option<PathBuf>,
    /// "all" or a comma-separated list of check names.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Seed precedence: this flag > EJALAB_SEED env var > config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Report output path (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a one-row-per-check CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Omit wall-clock timing so repeated runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Usage/config errors → 2; numeric/solver errors → 3.
fn exit_code_for(e: &EjaError) -> u8 {
    match e {
        EjaError::EigenNonConvergence { .. }
        | EjaError::NonFinite(_)
        | EjaError::NotInSet(_)
        | EjaError::InvalidFrame(_)
        | EjaError::NotSymmetric(_)
        | EjaError::BadGradient(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode, EjaError> {
    match cli.command {
        Command::Spectrum { element } => {
            let x = json::element_from_str(&fs::read_to_string(element)?)?;
            let dec = x.spectral_decomposition()?;
            println!("{}", serde_json::to_string_pretty(&dec)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Commute { a, b, tol } => {
            let a = json::element_from_str(&fs::read_to_string(a)?)?;
            let b = json::element_from_str(&fs::read_to_string(b)?)?;
            let report = strong_commute(&a, &b, tol)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Demo { name } => cmd_demo(&name),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, EjaError> {
    let set = json::spectral_set_from_str(&fs::read_to_string(&args.set)?)?;
    let objective = json::objective_from_str(&fs::read_to_string(&args.objective)?)?;
    let phi = match &args.phi {
        Some(p) => {
            let kind = json::phi_from_str(&fs::read_to_string(p)?)?;
            SpectralFunction::builtin(set.algebra().clone(), kind)?
        }
        None => SpectralFunction::zero(set.algebra().clone())?,
    };
    let opts: SolveOptions = match &args.options {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => SolveOptions::default(),
    };
    let report = match args.kind.as_str() {
        "linear_max" | "linear_min" => {
            let c = match &objective {
                ObjectiveSpec::Linear { c } => c.clone(),
                _ => {
                    return Err(EjaError::BadConfig(
                        "linear_max/linear_min need a linear objective".into(),
                    ))
                }
            };
            if args.kind == "linear_max" {
                solve_linear_spectral_max(&c, &set, &phi)?
            } else {
                solve_linear_spectral_min(&c, &set, &phi)?
            }
        }
        "convex_min" => solve_convex_min(&objective, &set, &opts)?,
        "orbit_max" => {
            let lambdas = match set.q_rep() {
                QRep::FiniteOrbits { lambdas } if lambdas.len() == 1 => lambdas[0].clone(),
                _ => {
                    return Err(EjaError::BadConfig(
                        "orbit_max needs a single-orbit finite_orbits set".into(),
                    ))
                }
            };
            let orbit = Orbit::new(set.algebra().clone(), lambdas)?;
            maximize_over_orbit(&objective, &orbit, &opts)?
        }
        _ => unreachable!("kind is validated by clap"),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, EjaError> {
    let mut config: SuiteConfig = match &args.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => SuiteConfig::default(),
    };
    if let Some(suite) = &args.suite {
        config.checks = if suite == "all" {
            CheckName::ALL.to_vec()
        } else {
            suite
                .split(',')
                .map(|s| CheckName::parse(s.trim()))
                .collect::<Result<_, _>>()?
        };
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(t) = args.tol {
        config.tol = t;
    }
    // Seed precedence: flag > env > config.
    if let Ok(env_seed) = std::env::var("EJALAB_SEED") {
        config.seed = env_seed
            .parse()
            .map_err(|_| EjaError::BadConfig(format!("EJALAB_SEED is not an integer: {env_seed}")))?;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let report = run_check_suite(&config, !args.no_timestamp)?;
    let rendered = serde_json::to_string_pretty(&report)?;
    let out_path = args.out.clone().or(config.out_path.clone().map(PathBuf::from));
    match &out_path {
        Some(p) => fs::write(p, rendered + "\n")?,
        None => println!("{rendered}"),
    }
    if let Some(p) = &args.csv {
        fs::write(p, report.csv_summary())?;
    }
    for rec in &report.checks {
        eprintln!(
            "{}: {} trials, {} failures, {} inconclusive, worst_gap {:.3e}",
            rec.name.label(),
            rec.trials,
            rec.failures,
            rec.inconclusive,
            rec.worst_gap
        );
    }
    Ok(if report.total_failures() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_demo(name: &str) -> Result<ExitCode, EjaError> {
    match name {
        "example1" => demo_example1(),
        "fan" => demo_fan(),
        "kyfan" => demo_kyfan(),
        "cp" => demo_cp(),
        _ => unreachable!("name is validated by clap"),
    }
}

/// Two-point maximization where the optimizer's gradient operator commutes
/// but does not strongly commute with it.
fn demo_example1() -> Result<ExitCode, EjaError> {
    let alg = Algebra::new(AlgebraSpec::RealVec { n: 2 })?;
    let h = |x: f64, y: f64| 0.5 * x * x - x + x * (y * y + y);
    let grad = |x: f64, y: f64| (x - 1.0 + y * y + y, x * (2.0 * y + 1.0));
    println!("maximize h(x,y) = x²/2 − x + x(y² + y) over E = {{(1,0), (0,1)}}");
    println!();
    println!("  point   h         h′");
    for (x, y) in [(1.0, 0.0), (0.0, 1.0)] {
        let (gx, gy) = grad(x, y);
        println!("  ({x:.0},{y:.0})   {:+.3}    ({gx:.0},{gy:.0})", h(x, y));
    }
    let a = alg.element(vec![0.0, 1.0])?;
    let g = alg.element(vec![1.0, 0.0])?;
    let rep = strong_commute(&a, &g, 1e-12)?;
    println!();
    println!("maximizer a = (0,1) with h(a) = 0; h′(a) = (1,0)");
    println!(
        "commutation of a with h′(a): operator: {}, strong: {} (inner gap {:.1})",
        yes_no(rep.operator),
        yes_no(rep.strong),
        rep.inner_gap
    );
    expect(rep.operator && !rep.strong, "operator-yes / strong-no verdict")
}

/// Trace maximization over an orbit: max tr(C·UAU*) = Σ λᵢ(C)λᵢ(A).
fn demo_fan() -> Result<ExitCode, EjaError> {
    let c = Element::from_sym_matrix(&[vec![2.0, 0.0], vec![0.0, 1.0]], 1e-12)?;
    let a = Element::from_sym_matrix(&[vec![3.0, 0.0], vec![0.0, -1.0]], 1e-12)?;
    let value = fan_trace_max(&c, &a)?;
    println!("max tr(C·UAUᵀ) over orthogonal U with λ(C) = (2,1), λ(A) = (3,−1)");
    println!("  Σ λᵢ(C)λᵢ(A) = 2·3 + 1·(−1) = {value}");
    let e = SpectralSet::new(
        c.algebra().clone(),
        QRep::FiniteOrbits { lambdas: vec![a.eigenvalues()?] },
    )?;
    let report = solve_linear_spectral_max(&c, &e, &SpectralFunction::zero(c.algebra().clone())?)?;
    println!(
        "  reduction solver: value {}, strong commute: {}",
        report.value,
        yes_no(report.commutation.strong)
    );
    expect((value - 5.0).abs() < 1e-10 && report.commutation.strong, "Fan bound = 5")
}

/// Sum of the k largest eigenvalues as a maximum over rank-k idempotents.
fn demo_kyfan() -> Result<ExitCode, EjaError> {
    let c = Element::from_sym_matrix(
        &[
            vec![5.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ],
        1e-12,
    )?;
    let value = sum_k_largest(&c, 2)?;
    println!("sum of the 2 largest eigenvalues of c, λ(c) = (5,2,−1):");
    println!("  λ₁ + λ₂ = {value}");
    println!("  equals max ⟨c,x⟩ over rank-2 idempotents (cross-checked by the reduction solver)");
    expect((value - 7.0).abs() < 1e-10, "k-sum = 7")
}

/// Cone complementarity on the nonnegative orthant of ℝ².
fn demo_cp() -> Result<ExitCode, EjaError> {
    let alg = Algebra::new(AlgebraSpec::RealVec { n: 2 })?;
    let target = alg.element(vec![1.0, -1.0])?;
    let f = VectorField::new(move |x: &Element| x.sub(&target).unwrap(), true, Some(1.0));
    let k = SpectralSet::new(alg.spec().clone(), QRep::NonnegCone)?;
    let (report, cert) = solve_cone_cp(&f, &k, &SolveOptions::default())?;
    let a = &report.optimizer;
    println!("CP(f, K): f(x) = x − (1,−1), K = nonnegative orthant of ℝ²");
    println!(
        "  a = ({:.6}, {:.6}), b = f(a), residual {:.3e}",
        a.coords()[0],
        a.coords()[1],
        report.residual
    );
    println!(
        "  ⟨a,b⟩ = {:.3e}, ⟨λ(a),λ̃(b)⟩ = {:.3e}, strong commute with −f(a): {}",
        cert.inner_ab,
        cert.eig_complementarity,
        yes_no(report.commutation.strong)
    );
    expect(
        report.converged && cert.inner_ab < 1e-7 && cert.eig_complementarity < 1e-7,
        "complementarity at a = (1,0)",
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn expect(ok: bool, what: &str) -> Result<ExitCode, EjaError> {
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("demo check failed: {what}");
        Ok(ExitCode::from(3))
    }
}
