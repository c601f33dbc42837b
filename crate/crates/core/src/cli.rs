//! Command-line front end: `solve`, `convergence` and `check-stencil`.
//!
//! Exit codes: 0 success, 1 numeric failure (CFL refusal, Howard or linear
//! solver failure), 2 usage error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{self, BenchmarkSpec};
use crate::error::{Error, Result};
use crate::report;
use crate::scheme::{check_cfl, write_diagnostics_csv, write_howard_trace_csv, Scheme, SchemeConfig};
use crate::stencil::{build_displacements, check_y1, check_y2, StencilVariant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lisl", version, about = "Monotone semi-Lagrangian HJB solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solve and write field, diagnostics and manifest.
    Solve(SolveArgs),
    /// Run a mesh-halving convergence study.
    Convergence(ConvergenceArgs),
    /// Check the moment conditions of a stencil variant at random points.
    CheckStencil(CheckStencilArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Benchmark name: convergence-superrep, pricing-superrep, smooth-1d.
    #[arg(long)]
    pub problem: String,
    /// Mesh size (coarsest level for convergence studies).
    #[arg(long)]
    pub dx: Option<f64>,
    /// Stencil parameter; defaults to sqrt(dx).
    #[arg(long)]
    pub k: Option<f64>,
    /// Time-stepping weight in [0, 1].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Stencil variant, by name or number 1-5.
    #[arg(long)]
    pub variant: Option<StencilVariant>,
    /// Samples per control parameter; defaults to the benchmark's.
    #[arg(long)]
    pub controls: Option<usize>,
    /// Evaluation budget for refining the sampled control in Howard's method
    /// (single-parameter control sets); defaults to the benchmark's.
    #[arg(long)]
    pub refine: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "lisl-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of time steps; defaults to round(T / dx).
    #[arg(long, conflicts_with = "auto_dt")]
    pub steps: Option<usize>,
    /// Choose dt as 0.9 of the largest admissible step.
    #[arg(long)]
    pub auto_dt: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of halving levels.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CheckStencilArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long, default_value = "crandall-lions")]
    pub variant: StencilVariant,
    #[arg(long, default_value_t = 0.1)]
    pub k: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub controls: usize,
}

fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

/// Runs a parsed command, printing to `out` and errors to standard error.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Convergence(a) => cmd_convergence(&a, out),
        Command::CheckStencil(a) => cmd_check_stencil(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_NUMERIC,
                ref other => exit_code(other),
            }
        }
    }
}

/// Configuration at `dx` from the benchmark defaults and the flags.
fn configure(spec: &BenchmarkSpec, common: &CommonArgs, dx: f64) -> SchemeConfig {
    let mut cfg = spec.config(dx);
    if let Some(k) = common.k {
        cfg.k = k;
    }
    if let Some(theta) = common.theta {
        cfg.theta = theta;
    }
    if let Some(v) = common.variant {
        cfg.variant = v;
    }
    if let Some(c) = common.controls {
        cfg.control_resolution = c;
    }
    if let Some(r) = common.refine {
        cfg.howard.control_refinement = r;
    }
    cfg
}

fn manifest_lines(spec: &BenchmarkSpec, cfg: &SchemeConfig, outputs: &[&Path]) -> Vec<(String, String)> {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut lines = vec![
        ("problem".into(), spec.name.to_string()),
        ("version".into(), env!("CARGO_PKG_VERSION").to_string()),
        ("timestamp".into(), stamp.to_string()),
        ("theta".into(), format!("{:?}", cfg.theta)),
        ("k".into(), format!("{:?}", cfg.k)),
        ("dx".into(), format!("{:?}", cfg.dx)),
        ("time_steps".into(), cfg.time_steps.to_string()),
        ("dt".into(), format!("{:?}", cfg.dt(spec.problem.horizon))),
        ("horizon".into(), format!("{:?}", spec.problem.horizon)),
        ("variant".into(), cfg.variant.name().to_string()),
        ("control_set".into(), spec.problem.control_set.describe()),
        ("control_resolution".into(), cfg.control_resolution.to_string()),
        ("control_refinement".into(), cfg.howard.control_refinement.to_string()),
        ("howard_tolerance_factor".into(), format!("{:?}", cfg.howard.tolerance_factor)),
        ("howard_max_iterations".into(), cfg.howard.max_iterations.to_string()),
        ("linear_rtol".into(), format!("{:?}", cfg.howard.linear.rtol)),
        ("linear_restart".into(), cfg.howard.linear.restart.to_string()),
    ];
    for (i, p) in outputs.iter().enumerate() {
        lines.push((format!("output_{i}"), p.display().to_string()));
    }
    lines
}

fn write_manifest(path: &Path, lines: &[(String, String)]) -> io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for (k, v) in lines {
        writeln!(f, "{k}={v}")?;
    }
    f.flush()
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = bench::by_name(&args.common.problem)?;
    let dx = args.common.dx.unwrap_or(spec.parameters.base_dx);
    let mut cfg = configure(&spec, &args.common, dx);
    if let Some(n) = args.steps {
        cfg.time_steps = n;
    } else if args.auto_dt {
        let report = check_cfl(&spec.problem, &cfg)?;
        if let Some(max_dt) = report.max_allowed_dt {
            cfg.time_steps = (spec.problem.horizon / (0.9 * max_dt)).ceil().max(1.0) as usize;
        }
    }
    let scheme = Scheme::new(spec.problem.clone(), cfg.clone())?;
    let solution = scheme.solve(false)?;

    fs::create_dir_all(&args.common.out)?;
    let field_path = args.common.out.join("field.csv");
    let diag_path = args.common.out.join("diagnostics.csv");
    let trace_path = args.common.out.join("howard_trace.csv");
    let manifest_path = args.common.out.join("manifest.txt");
    {
        let mut f = create(&field_path)?;
        solution.final_field.write_csv(&mut f)?;
        f.flush()?;
        let mut d = create(&diag_path)?;
        write_diagnostics_csv(&solution.diagnostics, &mut d)?;
        d.flush()?;
        let mut h = create(&trace_path)?;
        write_howard_trace_csv(&solution.diagnostics, &mut h)?;
        h.flush()?;
    }
    write_manifest(
        &manifest_path,
        &manifest_lines(&spec, &cfg, &[&field_path, &diag_path, &trace_path]),
    )?;

    let iters: usize = solution.diagnostics.iter().map(|d| d.howard_iterations).sum();
    write!(
        out,
        "problem={} dx={} k={:.6} theta={} steps={} t={} howard_iterations={}",
        spec.name, cfg.dx, cfg.k, cfg.theta, cfg.time_steps, solution.final_time, iters
    )?;
    if spec.problem.exact_solution.is_some() {
        let e = report::sup_error(&solution.final_field, &spec.problem, solution.final_time)?;
        write!(out, " sup_error={e:.3e}")?;
    }
    writeln!(out)?;
    Ok(EXIT_OK)
}

pub fn cmd_convergence(args: &ConvergenceArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = bench::by_name(&args.common.problem)?;
    if spec.problem.exact_solution.is_none() {
        return Err(Error::Unsupported(format!("`{}` has no exact solution", spec.name)));
    }
    if args.levels == 0 {
        return Err(crate::error::precondition("at least one level required"));
    }
    let base = args.common.dx.unwrap_or(spec.parameters.base_dx);
    let levels = bench::halving_levels(base, args.levels);
    let study = report::convergence_study_with(&spec, &levels, |cfg| {
        let dx = cfg.dx;
        *cfg = configure(&spec, &args.common, dx);
        if let Some(k) = args.common.k {
            // a fixed k is used only at the first level; refine with sqrt(dx)
            cfg.k = k * (dx / base).sqrt();
        }
    })?;
    report::write_table(&study.rows, &mut *out)?;
    fs::create_dir_all(&args.common.out)?;
    let csv_path = args.common.out.join("convergence.csv");
    let mut f = create(&csv_path)?;
    report::write_csv(&study.rows, &mut f)?;
    f.flush()?;
    let cfg = configure(&spec, &args.common, base);
    let mut lines = manifest_lines(&spec, &cfg, &[&csv_path]);
    lines.push((
        "levels".into(),
        levels.iter().map(|l| format!("{l:?}")).collect::<Vec<_>>().join(";"),
    ));
    write_manifest(&args.common.out.join("manifest.txt"), &lines)?;
    match study.failure {
        Some(e) => Err(e),
        None => Ok(EXIT_OK),
    }
}

pub fn cmd_check_stencil(args: &CheckStencilArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = bench::by_name(&args.problem)?;
    let problem = &spec.problem;
    let controls = problem.control_set.sample(args.controls)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let d = &problem.domain;
    let point = |rng: &mut ChaCha8Rng| {
        let mut x = [0.0; 2];
        for (a, xa) in x.iter_mut().enumerate().take(d.dim) {
            *xa = rng.gen_range(d.lo[a]..=d.hi[a]);
        }
        x
    };
    let mut y1_fail = 0usize;
    let mut y2_fail = 0usize;
    let mut worst = [0.0f64; 4];
    let mut worst_ratio = 0.0f64;
    for _ in 0..args.samples {
        let t = rng.gen_range(0.0..=problem.horizon);
        let x = point(&mut rng);
        let y = point(&mut rng);
        let a = &controls[rng.gen_range(0..controls.len())];
        let c = problem.evaluate_coefficients(t, &x, a)?;
        let ds = build_displacements(args.variant, &c.sigma, &c.drift, args.k)?;
        let (sigma, drift) = args.variant.target_coefficients(&c.sigma, &c.drift);
        let r = check_y1(&ds, &sigma, &drift);
        for (w, v) in worst.iter_mut().zip([r.first, r.second, r.third, r.fourth]) {
            *w = w.max(v);
        }
        let max_moment = r.first.max(r.second).max(r.third).max(r.fourth);
        worst_ratio = worst_ratio.max(max_moment / r.threshold);
        if !r.pass {
            y1_fail += 1;
        }
        if !check_y2(args.variant, problem, a, t, &x, &y, args.k)?.pass {
            y2_fail += 1;
        }
    }
    writeln!(
        out,
        "variant={} ({}) problem={} k={} samples={}",
        args.variant.number(),
        args.variant.name(),
        spec.name,
        args.k,
        args.samples
    )?;
    writeln!(
        out,
        "Y1: {} ({} failures); max residuals first={:.3e} second={:.3e} third={:.3e} fourth={:.3e}; max residual/threshold={:.3e}",
        if y1_fail == 0 { "pass" } else { "FAIL" },
        y1_fail,
        worst[0],
        worst[1],
        worst[2],
        worst[3],
        worst_ratio
    )?;
    writeln!(
        out,
        "Y2: {} ({} failures, diagnostic only)",
        if y2_fail == 0 { "pass" } else { "FAIL" },
        y2_fail
    )?;
    Ok(if y1_fail == 0 { EXIT_OK } else { EXIT_NUMERIC })
}
