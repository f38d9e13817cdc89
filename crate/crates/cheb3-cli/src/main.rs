//! Command-line surface: every library capability as a reproducible,
//! file-emitting command. All numeric output is printed with 17 significant
//! digits, so identical commands with identical seeds produce byte-identical
//! output. Exit codes: 0 success, 1 verification or numerical failure,
//! 2 usage error.

use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cheb3::config::RunConfig;
use cheb3::emit::{fmt_f64, json_str};
use cheb3::error::Error;

mod point;
mod render;

use point::parse_point;
use render::*;

#[derive(Parser)]
#[command(name = "cheb3", version, about = "Generalized Chebyshev dynamics on projective 3-space (type A3)")]
struct Cli {
    /// key = value config file; flags win over file values
    #[arg(long, global = true)]
    config: Option<String>,
    /// RNG seed for randomized commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// generic tolerance override (Green increments, convergence distance)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// output directory for file artifacts; stdout when omitted
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the exact degree-d map as canonical JSON
    Gen(GenArgs),
    /// Run a named property suite (semiconjugacy, symmetry, jacobian-d3,
    /// rays, critical, bridge, all)
    Verify(VerifyArgs),
    /// Classify points from a CSV file (t/z/c rows)
    Classify(ClassifyArgs),
    /// Iterate a point and emit the orbit trace as JSON
    Orbit(OrbitArgs),
    /// Green function estimate at a point
    Green(GreenArgs),
    /// Enumerate periodic points on the alcove
    Periodic(PeriodicArgs),
    /// Monte Carlo mass of the maximal-entropy measure
    Measure(MeasureArgs),
    /// Triangulate a surface patch and export OBJ or PLY
    Mesh(MeshArgs),
    /// Sample an external or internal ray as JSON
    Rays(RaysArgs),
    /// Critical-value branches: sample CSV or the no-solution search
    Critical(CriticalArgs),
    /// Degenerate-quartic sheet onto the developable; rims to the strip
    Bridge(BridgeArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(short = 'd', long = "degree")]
    degree: u32,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
}

#[derive(Args)]
struct ClassifyArgs {
    /// input CSV path, or '-' for stdin
    #[arg(long)]
    input: String,
    #[arg(short = 'd', long = "degree", default_value_t = 2)]
    degree: u32,
    /// iteration budget for the numeric classifier
    #[arg(long, default_value_t = 200)]
    budget: u32,
}

#[derive(Args)]
struct OrbitArgs {
    /// point spec: "t,re,im,re,im,re,im", "z,z1re,z1im,q,z3re,z3im" or
    /// "c,re,im,re,im,re,im"
    #[arg(long)]
    point: String,
    #[arg(short = 'd', long = "degree", default_value_t = 2)]
    degree: u32,
    #[arg(short = 'n', long = "period", default_value_t = 10)]
    steps: u32,
}

#[derive(Args)]
struct GreenArgs {
    #[arg(long)]
    point: String,
    #[arg(short = 'd', long = "degree", default_value_t = 2)]
    degree: u32,
}

#[derive(Args)]
struct PeriodicArgs {
    #[arg(short = 'd', long = "degree")]
    degree: u32,
    #[arg(short = 'n', long = "period")]
    period: u32,
    /// subdivision level for equidistribution statistics
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// add a Lyapunov exponent estimate to the summary
    #[arg(long, default_value_t = false)]
    exponents: bool,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// also write this many sampled points of K as CSV (p1, p2, q)
    #[arg(long)]
    emit_points: Option<u64>,
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 64)]
    nu: u32,
    #[arg(long, default_value_t = 16)]
    nv: u32,
    /// obj or ply
    #[arg(long, default_value = "obj")]
    format: String,
    /// cap for unbounded parameter directions
    #[arg(long, default_value_t = 6.0)]
    v_cap: f64,
}

#[derive(Args)]
struct RaysArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 33)]
    samples: u32,
    #[arg(long, default_value_t = 100.0)]
    r_max: f64,
    /// sample the internal ray (theta sweep) instead of the external one
    #[arg(long, default_value_t = false)]
    internal: bool,
}

#[derive(Args)]
struct CriticalArgs {
    /// branch to sample: astroidalhedron, top-bowl, lower-bowl,
    /// top-whiskers, lower-whiskers
    #[arg(long)]
    branch: Option<String>,
    #[arg(long, default_value_t = 256)]
    samples: u32,
    /// run the off-branch no-solution search with this many trials
    #[arg(long)]
    search: Option<u64>,
}

#[derive(Args)]
struct BridgeArgs {
    #[arg(long, default_value_t = 256)]
    nu: u32,
    #[arg(long, default_value_t = 64)]
    nv: u32,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        match std::fs::read_to_string(path) {
            Ok(body) => {
                if let Err(e) = cfg.apply_key_values(&body) {
                    return usage_error(&format!("{path}: {e}"));
                }
            }
            Err(e) => return usage_error(&format!("{path}: {e}")),
        }
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        if tol <= 0.0 {
            return usage_error("--tol must be positive");
        }
        cfg.eps_converge = tol;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = Some(out.clone());
    }
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, &cfg),
        Command::Verify(a) => cmd_verify(a, &cfg),
        Command::Classify(a) => cmd_classify(a, &cfg),
        Command::Orbit(a) => cmd_orbit(a, &cfg),
        Command::Green(a) => cmd_green(a, &cfg),
        Command::Periodic(a) => cmd_periodic(a, &cfg),
        Command::Measure(a) => cmd_measure(a, &cfg),
        Command::Mesh(a) => cmd_mesh(a, &cfg),
        Command::Rays(a) => cmd_rays(a, &cfg),
        Command::Critical(a) => cmd_critical(a, &cfg),
        Command::Bridge(a) => cmd_bridge(a, &cfg),
    };
    match result {
        Ok(code) => code,
        Err(Error::Domain(m)) | Err(Error::Parse(m)) => usage_error(&m),
        Err(e) => run_error(&e.to_string()),
    }
}

type CmdResult = cheb3::Result<ExitCode>;

/// Write `content` to `<out>/<name>` when an output directory is set,
/// otherwise to stdout.
fn write_artifact(cfg: &RunConfig, name: &str, content: &str) -> cheb3::Result<Option<String>> {
    match &cfg.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = format!("{dir}/{name}");
            std::fs::File::create(&path)?.write_all(content.as_bytes())?;
            Ok(Some(path))
        }
        None => {
            print!("{content}");
            Ok(None)
        }
    }
}

fn cmd_gen(a: &GenArgs, cfg: &RunConfig) -> CmdResult {
    let map = cheb3::poly::build_map(a.degree)?;
    let json = format!("{}\n", map.to_json());
    write_artifact(cfg, &format!("map_d{}.json", a.degree), &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> CmdResult {
    if a.suite != "all" && !cheb3::verify::SUITES.contains(&a.suite.as_str()) {
        return Err(Error::Domain(format!("unknown suite {:?}", a.suite)));
    }
    let reports = cheb3::verify::run_suite(&a.suite, cfg)?;
    let mut all_ok = true;
    let mut body = String::from("{\"suites\":[");
    for (i, rep) in reports.iter().enumerate() {
        if i > 0 {
            body.push(',');
        }
        all_ok &= rep.passed();
        body.push_str(&format!(
            "{{\"name\":{},\"passed\":{},\"checks\":[",
            json_str(rep.name),
            rep.passed()
        ));
        for (j, check) in rep.checks.iter().enumerate() {
            if j > 0 {
                body.push(',');
            }
            body.push_str(&format!(
                "{{\"label\":{},\"observed\":{},\"threshold\":{},\"passed\":{}}}",
                json_str(&check.label),
                fmt_f64(check.observed),
                fmt_f64(check.threshold),
                check.passed
            ));
        }
        body.push_str("]}");
    }
    body.push_str(&format!("],\"passed\":{all_ok}}}\n"));
    write_artifact(cfg, &format!("verify_{}.json", a.suite), &body)?;
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_classify(a: &ClassifyArgs, cfg: &RunConfig) -> CmdResult {
    let body = if a.input == "-" {
        use std::io::Read;
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&a.input)?
    };
    let map = cheb3::poly::build_map(a.degree)?;
    let mut out = String::from("input,exact,numeric\n");
    let mut had_errors = false;
    for raw in body.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_point(line) {
            Ok((z, torus)) => {
                let exact = torus
                    .map(|t| cheb3::dynamics::classify_exact(&t, cfg.eps_circle))
                    .transpose()?
                    .map(|c| c.label().to_string())
                    .unwrap_or_default();
                let numeric = cheb3::dynamics::classify_numeric(&map, z, a.budget, cfg)?;
                out.push_str(&format!("{},{},{}\n", json_str(line), exact, numeric.label()));
            }
            Err(e) => {
                had_errors = true;
                out.push_str(&format!("{},error,{}\n", json_str(line), json_str(&e.to_string())));
            }
        }
    }
    write_artifact(cfg, "classify.csv", &out)?;
    Ok(if had_errors {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_orbit(a: &OrbitArgs, cfg: &RunConfig) -> CmdResult {
    let (z, _) = parse_point(&a.point)?;
    let map = cheb3::poly::build_map(a.degree)?;
    let trace = cheb3::dynamics::iterate(&map, z, a.steps)?;
    let body = render_orbit(a.degree, &trace);
    write_artifact(cfg, "orbit.json", &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_green(a: &GreenArgs, cfg: &RunConfig) -> CmdResult {
    let (z, _) = parse_point(&a.point)?;
    let map = cheb3::poly::build_map(a.degree)?;
    let est = cheb3::dynamics::green(&map, z, cfg, cfg.eps_converge.min(1e-9))?;
    let body = format!(
        "{{\"degree\":{},\"value\":{},\"n_used\":{},\"error_bound\":{}}}\n",
        a.degree,
        fmt_f64(est.value),
        est.n_used,
        fmt_f64(est.error_bound)
    );
    write_artifact(cfg, "green.json", &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_periodic(a: &PeriodicArgs, cfg: &RunConfig) -> CmdResult {
    let set = cheb3::dynamics::periodic_points(a.degree, a.period)?;
    let mut csv = String::from("s1,s2,s3,residual\n");
    for (p, r) in set.points.iter().zip(&set.residuals) {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(p.s[0]),
            fmt_f64(p.s[1]),
            fmt_f64(p.s[2]),
            fmt_f64(*r)
        ));
    }
    let stats = if a.level >= 1 && a.level <= a.period {
        Some(cheb3::dynamics::equidistribution_stats(&set, a.level)?)
    } else {
        None
    };
    let exponents = if a.exponents {
        let map = cheb3::poly::build_map(a.degree)?;
        Some(cheb3::dynamics::lyapunov_estimate(&map, 100, 100, cfg.seed)?)
    } else {
        None
    };
    let summary = render_periodic_summary(&set, stats.as_ref(), exponents);
    match &cfg.out_dir {
        Some(_) => {
            write_artifact(cfg, &format!("periodic_d{}_n{}.csv", a.degree, a.period), &csv)?;
            write_artifact(cfg, &format!("periodic_d{}_n{}.json", a.degree, a.period), &summary)?;
        }
        None => {
            print!("{csv}");
            print!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_measure(a: &MeasureArgs, cfg: &RunConfig) -> CmdResult {
    let estimate = cheb3::dynamics::mu_integral_mc(a.samples, cfg.seed, cfg.eps_circle)?;
    let body = format!(
        "{{\"samples\":{},\"seed\":{},\"integral\":{}}}\n",
        a.samples,
        cfg.seed,
        fmt_f64(estimate)
    );
    if let Some(n) = a.emit_points {
        let csv = render_k_samples(n, cfg.seed);
        write_artifact(cfg, "k_samples.csv", &csv)?;
    }
    write_artifact(cfg, "measure.json", &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mesh(a: &MeshArgs, cfg: &RunConfig) -> CmdResult {
    let kind = cheb3::surfaces::SurfaceKind::parse(&a.kind)?;
    let patch = cheb3::surfaces::SurfacePatch::full(kind, a.v_cap)?;
    let mesh = cheb3::surfaces::mesh(&patch, a.nu, a.nv)?;
    let mut buf: Vec<u8> = Vec::new();
    let ext = match a.format.as_str() {
        "obj" => {
            cheb3::surfaces::write_obj(&mesh, &mut buf)?;
            "obj"
        }
        "ply" => {
            cheb3::surfaces::write_ply(&mesh, &mut buf)?;
            "ply"
        }
        other => return Err(Error::Domain(format!("unknown mesh format {other:?}"))),
    };
    let content = String::from_utf8(buf).expect("mesh text is ascii");
    write_artifact(cfg, &format!("mesh_{}.{ext}", kind.label()), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_rays(a: &RaysArgs, cfg: &RunConfig) -> CmdResult {
    if a.samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    let gamma = a.gamma.unwrap_or(a.alpha);
    let ray = if a.internal {
        cheb3::surfaces::Ray::internal(a.alpha, a.beta)
    } else {
        cheb3::surfaces::Ray::external(a.alpha, a.beta, gamma)
    };
    let mut pts = Vec::with_capacity(a.samples as usize);
    if a.internal {
        for k in 0..a.samples {
            pts.push(ray.point(2.0 * PI * k as f64 / a.samples as f64)?);
        }
    } else {
        if a.r_max <= 1.0 {
            return Err(Error::Domain("--r-max must exceed 1".into()));
        }
        for k in 0..a.samples {
            pts.push(ray.point(a.r_max.powf(k as f64 / (a.samples - 1) as f64))?);
        }
    }
    let body = render_ray(
        if a.internal { "internal" } else { "external" },
        ray.alpha,
        ray.beta,
        ray.gamma,
        &pts,
    );
    write_artifact(cfg, "ray.json", &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_critical(a: &CriticalArgs, cfg: &RunConfig) -> CmdResult {
    match (&a.branch, a.search) {
        (Some(branch), None) => {
            let csv = render_branch_samples(branch, a.samples)?;
            write_artifact(cfg, &format!("critical_{branch}.csv"), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(trials)) => {
            let report = cheb3::critical::off_branch_search(trials, cfg.seed, 1e-8);
            let body = format!(
                "{{\"trials\":{},\"threshold\":{},\"best_residual\":{},\"best_point\":[{},{},{},{}],\"solution_found\":{}}}\n",
                report.trials,
                fmt_f64(report.threshold),
                fmt_f64(report.best_residual),
                fmt_f64(report.best_point[0]),
                fmt_f64(report.best_point[1]),
                fmt_f64(report.best_point[2]),
                fmt_f64(report.best_point[3]),
                report.any_below
            );
            write_artifact(cfg, "critical_search.json", &body)?;
            // finding a solution would contradict the no-solution statement
            Ok(if report.any_below {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        _ => Err(Error::Domain(
            "use exactly one of --branch KIND or --search TRIALS".into(),
        )),
    }
}

fn cmd_bridge(a: &BridgeArgs, cfg: &RunConfig) -> CmdResult {
    if a.nu < 2 || a.nv < 2 {
        return Err(Error::Domain("grid must be at least 2x2".into()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..a.nu {
        let phi = 2.0 * PI * i as f64 / a.nu as f64;
        for j in 0..a.nv {
            let gamma = -6.0 + 12.0 * j as f64 / (a.nv - 1) as f64;
            let z = cheb3::critical::ps_to_dynamics(cheb3::critical::q0_beta(phi, gamma), gamma);
            let p = cheb3::torus::to_p1p2q(&z);
            worst = worst.max(cheb3::surfaces::surface_distance(
                p,
                cheb3::surfaces::SurfaceKind::TangentDevelopable,
            ));
        }
    }
    let mut rim_worst: f64 = 0.0;
    for (which, x) in [
        (cheb3::surfaces::Sheet::Top, 2.0),
        (cheb3::surfaces::Sheet::Lower, -2.0),
    ] {
        for k in 0..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            let z = cheb3::surfaces::bowl_point(which, theta, 1e6)?;
            let p = cheb3::dynamics::ProjectivePoint::from_affine(z);
            let target = cheb3::surfaces::mobius(-2.0 * theta, x)?;
            rim_worst = rim_worst.max(p.distance(&target));
        }
    }
    let pass = worst < 1e-6 && rim_worst < 1e-4;
    let body = format!(
        "{{\"grid\":[{},{}],\"sheet_to_developable_max\":{},\"rim_to_strip_max\":{},\"passed\":{}}}\n",
        a.nu,
        a.nv,
        fmt_f64(worst),
        fmt_f64(rim_worst),
        pass
    );
    write_artifact(cfg, "bridge.json", &body)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
