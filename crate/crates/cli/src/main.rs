//! `sturm`: compute Sturm-Liouville spectra and verify eigenvalue-ratio
//! bounds from the command line.
//!
//! Exit codes: 0 success (and verification passed), 1 verification failed
//! (report still emitted), 2 usage or input errors, 3 numerical failure
//! or output I/O failure.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sturm_core::eigensolver::{self, BoundaryCondition, EigenvalueRecord, Method, SolveError};
use sturm_core::oracle::{self, OracleError};
use sturm_core::potential::Potential;
use sturm_core::theorems::{
    self, CitedBound, HarnessConfig, HarnessError, L0Result, Subject, TheoremId,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "sturm",
    version,
    about = "Sturm-Liouville eigenvalues and eigenvalue-ratio bound verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenvalues by phase shooting (nonpositive ones are
    /// filled from the finite-difference oracle)
    Eigs(ProblemArgs),
    /// Compute eigenvalues from the finite-difference discretization
    /// with Richardson refinement
    Oracle(ProblemArgs),
    /// Verify a ratio-bound theorem and emit its report
    Verify(VerifyArgs),
    /// Find the interval length l0 below which every index pair is
    /// eligible for the ratio bound
    FindL0(FindL0Args),
    /// List the potential families and their flag syntax
    Families,
}

#[derive(Args)]
struct ProblemArgs {
    /// Analytic family, e.g. constant:-3 or barrier_sin:-5,4
    #[arg(long, conflicts_with = "csv")]
    family: Option<String>,
    /// File with x,q sample lines describing the potential on [0, 1]
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Boundary conditions: y(l) = 0 or y'(l) = 0
    #[arg(long, value_enum, default_value_t = BcArg::Dirichlet)]
    bc: BcArg,
    /// Right endpoint of the interval (0 < ell <= 1)
    #[arg(long, default_value_t = 1.0)]
    ell: f64,
    /// Number of eigenvalues, or the largest index for pair checks
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Phase integrator relative tolerance
    #[arg(long, env = "STURM_REL_TOL", default_value_t = 1e-10)]
    rel_tol: f64,
    /// Finite-difference grid nodes
    #[arg(long, default_value_t = 100_000)]
    grid_n: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    /// Right endpoint of the phase-derivative checks (t1 only);
    /// defaults to ell
    #[arg(long)]
    x0: Option<f64>,
    /// Size of the z-grid for t1
    #[arg(long, default_value_t = 64)]
    z_count: usize,
    /// Margin slack: a check passes when margin >= -slack * max(1, |rhs|).
    /// Negative values demand strictly positive margins.
    #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
    slack: f64,
}

#[derive(Args)]
struct FindL0Args {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Initial scan resolution before bisection
    #[arg(long, default_value_t = 32)]
    grid: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Dirichlet,
    Dn,
}

impl BcArg {
    fn to_core(self) -> BoundaryCondition {
        match self {
            BcArg::Dirichlet => BoundaryCondition::Dirichlet,
            BcArg::Dn => BoundaryCondition::DirichletNeumann,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BcArg::Dirichlet => "dirichlet",
            BcArg::Dn => "dirichlet_neumann",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    T1,
    T2,
    T3,
    T4,
    AbN2,
    AbCeil,
    ChenFloor,
    HkSinglewell,
}

enum CliError {
    Usage(String),
    Numeric(String),
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m.clone(),
            CliError::Io(e) => format!("output failed: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Command::Families => {
            emit(&None, FAMILIES_HELP.as_bytes())?;
            Ok(0)
        }
        Command::Eigs(args) => {
            let p = load_potential(&args)?;
            let records = eigensolver::solve_range_with(
                &p,
                args.n,
                args.bc.to_core(),
                args.ell,
                &solver_options(&args)?,
            )
            .map_err(solve_err)?;
            let bytes = render_records(&args, &p, &records);
            emit(&args.out, &bytes)?;
            Ok(0)
        }
        Command::Oracle(args) => {
            let p = load_potential(&args)?;
            let refined =
                oracle::refined_spectrum(&p, args.ell, args.n, args.grid_n, args.bc.to_core())
                    .map_err(oracle_err)?;
            let records: Vec<EigenvalueRecord> = refined
                .iter()
                .enumerate()
                .map(|(i, r)| EigenvalueRecord {
                    n: i + 1,
                    z: (r.lambda > 0.0).then(|| r.lambda.sqrt()),
                    lambda: r.lambda,
                    residual: r.gap,
                    method: Method::Oracle,
                })
                .collect();
            let bytes = render_records(&args, &p, &records);
            emit(&args.out, &bytes)?;
            Ok(0)
        }
        Command::Verify(v) => {
            let p = bounded_potential(&v.problem)?;
            let cfg = harness_config(&v.problem, v.slack)?;
            let n = v.problem.n;
            let report = match v.theorem {
                TheoremArg::T1 => {
                    let x0 = v.x0.unwrap_or(v.problem.ell);
                    theorems::check_theorem1_with(&p, x0, v.z_count, &cfg)
                }
                TheoremArg::T2 => theorems::check_theorem2_with(&p, n, &cfg),
                TheoremArg::T3 => theorems::check_theorem3_with(&p, n, &cfg),
                TheoremArg::T4 => theorems::check_theorem4_with(&p, n, &cfg),
                TheoremArg::AbN2 => {
                    theorems::check_cited_bounds_with(&p, n, CitedBound::AbN2, &cfg)
                }
                TheoremArg::AbCeil => {
                    theorems::check_cited_bounds_with(&p, n, CitedBound::AbCeil, &cfg)
                }
                TheoremArg::ChenFloor => {
                    theorems::check_cited_bounds_with(&p, n, CitedBound::ChenFloor, &cfg)
                }
                TheoremArg::HkSinglewell => {
                    theorems::check_cited_bounds_with(&p, n, CitedBound::HkSingleWell, &cfg)
                }
            }
            .map_err(harness_err)?;
            let bytes = render_report(v.problem.format, &report);
            emit(&v.problem.out, &bytes)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::FindL0(f) => {
            let p = bounded_potential(&f.problem)?;
            let cfg = harness_config(&f.problem, theorems::DEFAULT_SLACK)?;
            let result = theorems::find_l0_with(&p, f.grid, &cfg).map_err(harness_err)?;
            let bytes = render_l0(f.problem.format, &p, &result);
            emit(&f.problem.out, &bytes)?;
            Ok(0)
        }
    }
}

const FAMILIES_HELP: &str = "\
Potential families (use with --family NAME:PARAMS):

  constant:c          q(x) = c
  barrier_sin:a,b     q(x) = a + b sin(pi x)
  ramp:a,b            q(x) = a + b x
  poly:c0,c1,...      q(x) = c0 + c1 x + c2 x^2 + ...

Sampled potentials: --csv FILE, one 'x,q' pair per line with x strictly
increasing from 0 to 1; blank lines are skipped and '#' starts a comment.
";

fn load_potential(args: &ProblemArgs) -> Result<Potential, CliError> {
    let p = match (&args.family, &args.csv) {
        (Some(spec), None) => parse_family(spec)?,
        (None, Some(path)) => {
            let file = File::open(path).map_err(|e| {
                CliError::Usage(format!("cannot open {}: {e}", path.display()))
            })?;
            Potential::load_samples(BufReader::new(file)).map_err(|e| {
                CliError::Usage(format!("{}: {e}", path.display()))
            })?
        }
        _ => {
            return Err(CliError::Usage(
                "one of --family or --csv is required (see `sturm families`)".into(),
            ))
        }
    };
    if !(args.ell.is_finite() && args.ell > 0.0 && args.ell <= 1.0) {
        return Err(CliError::Usage(format!("--ell {} outside (0, 1]", args.ell)));
    }
    Ok(p)
}

fn bounded_potential(args: &ProblemArgs) -> Result<Potential, CliError> {
    load_potential(args)?
        .with_domain_end(args.ell)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_family(spec: &str) -> Result<Potential, CliError> {
    let usage = |msg: String| CliError::Usage(msg);
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n, p),
        None => (spec, ""),
    };
    let values: Vec<f64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| usage(format!("invalid parameter {tok:?} in {spec:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let arity = |k: usize| {
        if values.len() == k {
            Ok(())
        } else {
            Err(usage(format!(
                "family {name:?} takes {k} parameter(s), got {}",
                values.len()
            )))
        }
    };
    match name {
        "constant" => {
            arity(1)?;
            Ok(Potential::constant(values[0]))
        }
        "barrier_sin" => {
            arity(2)?;
            Ok(Potential::barrier_sin(values[0], values[1]))
        }
        "ramp" => {
            arity(2)?;
            Ok(Potential::ramp(values[0], values[1]))
        }
        "poly" => {
            if values.is_empty() {
                return Err(usage("family \"poly\" needs at least one coefficient".into()));
            }
            Ok(Potential::poly(values))
        }
        other => Err(usage(format!(
            "unknown family {other:?}; run `sturm families` for the list"
        ))),
    }
}

fn solver_options(args: &ProblemArgs) -> Result<eigensolver::SolverOptions, CliError> {
    if !(args.rel_tol.is_finite() && args.rel_tol > 0.0) {
        return Err(CliError::Usage(format!("--rel-tol {} not positive", args.rel_tol)));
    }
    Ok(eigensolver::SolverOptions {
        rel_tol: args.rel_tol,
        oracle_nodes: args.grid_n,
        ..Default::default()
    })
}

fn harness_config(args: &ProblemArgs, slack: f64) -> Result<HarnessConfig, CliError> {
    let opts = solver_options(args)?;
    if !slack.is_finite() {
        return Err(CliError::Usage(format!("--slack {slack} is not finite")));
    }
    Ok(HarnessConfig {
        slack,
        rel_tol: opts.rel_tol,
        z_rel_tol: opts.z_rel_tol,
        oracle_nodes: opts.oracle_nodes,
        shape_tol: None,
    })
}

fn solve_err(e: SolveError) -> CliError {
    match e {
        SolveError::InvalidParameter { .. } | SolveError::Potential(_) | SolveError::Oracle(_) => {
            CliError::Usage(e.to_string())
        }
        _ => CliError::Numeric(e.to_string()),
    }
}

fn oracle_err(e: OracleError) -> CliError {
    CliError::Usage(e.to_string())
}

fn harness_err(e: HarnessError) -> CliError {
    match e {
        HarnessError::IneligiblePotential { .. }
        | HarnessError::InvalidParameter { .. }
        | HarnessError::Potential(_)
        | HarnessError::Oracle(_) => CliError::Usage(e.to_string()),
        HarnessError::Solve(s) => solve_err(s),
        HarnessError::Integration(_) => CliError::Numeric(e.to_string()),
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(CliError::Io),
        None => io::stdout().write_all(bytes).map_err(CliError::Io),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Shooting => "shooting",
        Method::Oracle => "oracle",
    }
}

fn render_records(args: &ProblemArgs, p: &Potential, records: &[EigenvalueRecord]) -> Vec<u8> {
    let mut out = String::new();
    match args.format {
        FormatArg::Table => {
            out.push_str(&format!(
                "potential: {p}   bc: {}   ell: {}\n\n",
                args.bc.name(),
                args.ell
            ));
            out.push_str(&format!(
                "{:>4}  {:>22}  {:>22}  {:>12}  {}\n",
                "n", "z", "lambda", "residual", "method"
            ));
            for r in records {
                let z = r.z.map_or_else(|| "-".into(), |z| z.to_string());
                out.push_str(&format!(
                    "{:>4}  {:>22}  {:>22}  {:>12.3e}  {}\n",
                    r.n,
                    z,
                    r.lambda,
                    r.residual,
                    method_name(r.method)
                ));
            }
        }
        FormatArg::Json => {
            let doc = serde_json::json!({
                "potential": p.to_string(),
                "bc": args.bc.name(),
                "ell": args.ell,
                "records": records,
            });
            out = serde_json::to_string_pretty(&doc).expect("records serialize");
            out.push('\n');
        }
        FormatArg::Csv => {
            out.push_str("n,z,lambda,residual,method\n");
            for r in records {
                let z = r.z.map_or_else(String::new, |z| z.to_string());
                out.push_str(&format!(
                    "{},{z},{},{},{}\n",
                    r.n,
                    r.lambda,
                    r.residual,
                    method_name(r.method)
                ));
            }
        }
    }
    out.into_bytes()
}

fn render_report(format: FormatArg, report: &VerificationReport) -> Vec<u8> {
    let mut out = String::new();
    match format {
        FormatArg::Json => {
            out = report.to_json();
            out.push('\n');
        }
        FormatArg::Csv => {
            let mut bytes = Vec::new();
            report
                .write_plot_csv(&mut bytes)
                .expect("writing to a Vec cannot fail");
            return bytes;
        }
        FormatArg::Table => {
            out.push_str(&format!("theorem:   {}\n", report.theorem));
            out.push_str(&format!("potential: {}\n", report.potential));
            out.push_str(&format!("ell:       {}\n", report.ell));
            out.push_str(&format!(
                "checks:    {} eligible, {} ineligible\n",
                report.eligible_count,
                report.ineligible.len()
            ));
            out.push_str(&format!("pass:      {}\n\n", report.pass));
            if report.theorem == TheoremId::T1 {
                out.push_str(&format!("{:>22}  {:>24}\n", "z", "theta_dot"));
                for c in &report.checks {
                    if let Subject::Z { z } = c.subject {
                        out.push_str(&format!("{:>22}  {:>24}\n", z, c.rhs));
                    }
                }
            } else {
                out.push_str(&format!(
                    "{:>3} {:>3}  {:>22}  {:>22}  {:>12}\n",
                    "m", "n", "lhs", "rhs", "margin"
                ));
                for c in &report.checks {
                    if let Subject::Pair { m, n } = c.subject {
                        out.push_str(&format!(
                            "{:>3} {:>3}  {:>22}  {:>22}  {:>12.3e}\n",
                            m, n, c.lhs, c.rhs, c.margin
                        ));
                    }
                }
            }
        }
    }
    out.into_bytes()
}

fn render_l0(format: FormatArg, p: &Potential, r: &L0Result) -> Vec<u8> {
    let out = match format {
        FormatArg::Json => {
            let doc = serde_json::json!({
                "potential": p.to_string(),
                "ell0": r.ell0,
                "lambda1": r.lambda1,
                "gap": r.gap,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            format!("ell0,lambda1,gap\n{},{},{}\n", r.ell0, r.lambda1, r.gap)
        }
        FormatArg::Table => {
            format!(
                "potential: {p}\nell0:      {}\nlambda1:   {}\ngap:       {}\n",
                r.ell0, r.lambda1, r.gap
            )
        }
    };
    out.into_bytes()
}
