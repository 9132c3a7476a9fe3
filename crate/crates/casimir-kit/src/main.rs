//! Command-line harness over the library: deterministic CSV/JSON emission
//! and a full verification suite.
//!
//! Exit codes: 0 = pass, 1 = numerical check failure, 2 = usage or
//! configuration error.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use casimir_kit::config::RunConfig;
use casimir_kit::cavity::Trajectory;
use casimir_kit::error::Error;
use casimir_kit::symplectic::{
    self, hamiltonian_matrix, propagate, propagate_fn, HamiltonianSpec, PropagationOptions,
    SymplecticPropagation,
};
use casimir_kit::{analytic, ermakov, fock, twomode, units};

#[derive(Parser)]
#[command(name = "casimir-kit", version, about = "Photon production in a non-stationary cavity")]
struct Cli {
    /// TOML run configuration; flags override individual fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/JSON files (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Photon number vs time: closed form, symplectic, and Fock oracles.
    Photons(PhotonArgs),
    /// Alias of `photons` for the resonantly driven cavity.
    Resonance(PhotonArgs),
    /// Lowest ten two-mode eigenvalues over a velocity sweep.
    Spectrum(SpectrumArgs),
    /// Shortcut-to-adiabaticity ramp design and diagnostics.
    Ermakov(ErmakovArgs),
    /// Run the full verification suite and emit a JSON report.
    Verify,
}

#[derive(Args)]
struct PhotonArgs {
    /// Uniform mirror velocity (selects the uniform trajectory).
    #[arg(long)]
    beta: Option<f64>,
    /// Modulation amplitude (selects the parametric trajectory).
    #[arg(long)]
    epsilon: Option<f64>,
    /// End of the time window.
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Fock basis cutoff.
    #[arg(long)]
    cutoff: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Velocity sweep (repeatable or comma-separated); must be non-empty.
    #[arg(long, required = true, value_delimiter = ',')]
    beta: Vec<f64>,
    /// Root branch used for the per-velocity diagnostics.
    #[arg(long, value_enum, default_value_t = BranchArg::Minus)]
    branch: BranchArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for twomode::Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => twomode::Branch::Plus,
            BranchArg::Minus => twomode::Branch::Minus,
        }
    }
}

#[derive(Args)]
struct ErmakovArgs {
    /// Initial trap frequency.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    omega0: f64,
    /// Final trap frequency.
    #[arg(long, default_value_t = std::f64::consts::PI / 2.0)]
    omega_f: f64,
    /// Ramp duration.
    #[arg(long, default_value_t = 5.0)]
    tf: f64,
    /// Number of grid samples.
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("CASIMIR_KIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let out = Output {
        dir: cli.out.clone(),
    };
    let result = match &cli.cmd {
        Cmd::Photons(args) => cmd_photons(&cli, args, &out, false),
        Cmd::Resonance(args) => cmd_photons(&cli, args, &out, true),
        Cmd::Spectrum(args) => cmd_spectrum(args, &out),
        Cmd::Ermakov(args) => cmd_ermakov(args, &out),
        Cmd::Verify => cmd_verify(&cli, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for configuration/usage problems, 1 for numerical check failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Domain(_)
        | Error::VelocityBound { .. }
        | Error::InvalidModeIndex { .. }
        | Error::EqualModeIndices { .. }
        | Error::Dimension { .. }
        | Error::MirrorCollision { .. } => 2,
        _ => 1,
    }
}

type Result<T> = std::result::Result<T, Error>;

// ---------------------------------------------------------------------------
// output plumbing

struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    fn emit(&self, name: &str, content: &str) -> Result<Option<PathBuf>> {
        match &self.dir {
            None => {
                print!("{content}");
                std::io::stdout().flush().ok();
                Ok(None)
            }
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
                let path = dir.join(name);
                std::fs::write(&path, content)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Ok(Some(path))
            }
        }
    }

    fn manifest(&self, manifest: &RunManifest) -> Result<()> {
        if self.dir.is_some() {
            let text = serde_json::to_string_pretty(manifest)
                .map_err(|e| Error::Config(e.to_string()))?;
            self.emit("manifest.json", &(text + "\n"))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    config: String,
    content_hash: String,
    outputs: Vec<String>,
    summary: Vec<String>,
}

impl RunManifest {
    fn new(subcommand: &str, config: &RunConfig) -> Result<Self> {
        let snapshot = config.to_toml()?;
        Ok(RunManifest {
            subcommand: subcommand.into(),
            content_hash: format!("{:016x}", fnv1a(snapshot.as_bytes())),
            config: snapshot,
            outputs: Vec::new(),
            summary: Vec::new(),
        })
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Fixed 17-significant-digit scientific formatting: deterministic and
/// round-trippable.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid_of(cfg: &RunConfig) -> Vec<f64> {
    let n = cfg.samples;
    (0..n)
        .map(|i| cfg.t0 + (cfg.tf - cfg.t0) * i as f64 / (n - 1) as f64)
        .collect()
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

// ---------------------------------------------------------------------------
// photons | resonance

fn cmd_photons(cli: &Cli, args: &PhotonArgs, out: &Output, force_parametric: bool) -> Result<()> {
    let mut cfg = load_config(cli)?;
    if let Some(beta) = args.beta {
        cfg.trajectory.kind = casimir_kit::config::TrajectoryKind::Uniform;
        cfg.trajectory.beta = Some(beta);
    }
    if let Some(eps) = args.epsilon {
        cfg.trajectory.kind = casimir_kit::config::TrajectoryKind::Parametric;
        cfg.trajectory.epsilon = Some(eps);
    }
    if force_parametric {
        cfg.trajectory.kind = casimir_kit::config::TrajectoryKind::Parametric;
        if cfg.trajectory.epsilon.is_none() {
            cfg.trajectory.epsilon = Some(0.15);
        }
    }
    if let Some(t) = args.tmax {
        cfg.tf = t;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    if let Some(c) = args.cutoff {
        cfg.fock.cutoff = c;
    }
    cfg.to_cavity_config()?;
    let grid = grid_of(&cfg);
    let mut manifest = RunManifest::new("photons", &cfg)?;

    let mut csv = String::from("t,n_analytic,n_symplectic,n_fock,rel_err_sym,rel_err_fock\n");
    match cfg.trajectory()? {
        Trajectory::Uniform { beta } => {
            let ana: Vec<f64> = grid
                .iter()
                .map(|&t| analytic::photons_uniform(t, beta))
                .collect::<Result<_>>()?;
            let prop = propagate(
                &HamiltonianSpec::SingleModeUniform { beta },
                &grid,
                &PropagationOptions::default(),
            )?;
            let sym: Vec<f64> = prop
                .photon_numbers(&[units::omega_static(1)])?
                .into_iter()
                .map(|row| row[0])
                .collect();
            let fock_n = fock::photons_uniform(beta, &grid, cfg.fock.cutoff)?;
            let mut max_sym = 0.0f64;
            let mut max_fock = 0.0f64;
            for i in 0..grid.len() {
                let (a, s, f) = (ana[i], sym[i], fock_n[i]);
                max_sym = max_sym.max((s - a).abs());
                max_fock = max_fock.max((f - a).abs());
                let denom = a.abs().max(1e-12);
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt(grid[i]),
                    fmt(a),
                    fmt(s),
                    fmt(f),
                    fmt((s - a).abs() / denom),
                    fmt((f - a).abs() / denom),
                ));
            }
            manifest
                .summary
                .push(format!("max|n_sym - n_ana| = {max_sym:e}"));
            manifest
                .summary
                .push(format!("max|n_fock - n_ana| = {max_fock:e}"));
            if let Some(p) = out.emit("photons.csv", &csv)? {
                manifest.outputs.push(p.display().to_string());
            }
            out.manifest(&manifest)?;
            if max_sym > 1e-6 {
                return Err(Error::Accuracy(format!(
                    "symplectic oracle disagrees with closed form: {max_sym:e} > 1e-6"
                )));
            }
            if max_fock > 1e-4 {
                return Err(Error::Accuracy(format!(
                    "Fock oracle disagrees with closed form: {max_fock:e} > 1e-4"
                )));
            }
        }
        Trajectory::Parametric { epsilon, .. } => {
            let run = fock::photons_resonance(epsilon, &grid, cfg.fock.cutoff, 5e-4)?;
            let mut worst_rel = 0.0f64;
            for (i, &t) in grid.iter().enumerate() {
                let a = analytic::photons_resonance(t, epsilon)?;
                let f = run.photons[i];
                if t >= 1.0 {
                    worst_rel = worst_rel.max((f - a).abs() / a);
                }
                let denom = a.abs().max(1e-12);
                csv.push_str(&format!(
                    "{},{},,{},,{}\n",
                    fmt(t),
                    fmt(a),
                    fmt(f),
                    fmt((f - a).abs() / denom),
                ));
            }
            manifest.summary.push(format!(
                "max relative deviation from hyperbolic law (t >= 1) = {worst_rel:e}"
            ));
            manifest
                .summary
                .push(format!("norm drift = {:e}, leakage = {:e}", run.norm_drift, run.leakage));
            if let Some(p) = out.emit("photons.csv", &csv)? {
                manifest.outputs.push(p.display().to_string());
            }
            out.manifest(&manifest)?;
            if worst_rel > 0.1 {
                return Err(Error::Accuracy(format!(
                    "resonant Fock run deviates from hyperbolic law: {worst_rel:e} > 0.1"
                )));
            }
        }
        Trajectory::Custom(_) => {
            return Err(Error::Config(
                "photons subcommand supports uniform and parametric trajectories".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum

fn cmd_spectrum(args: &SpectrumArgs, out: &Output) -> Result<()> {
    use rayon::prelude::*;
    if args.beta.is_empty() {
        return Err(Error::Config("spectrum requires a non-empty beta sweep".into()));
    }
    for &beta in &args.beta {
        twomode::gamma(beta)?;
    }
    let per_beta: Vec<(f64, Vec<twomode::SpectrumLevel>)> = args
        .beta
        .par_iter()
        .map(|&beta| twomode::spectrum(beta, 10).map(|levels| (beta, levels)))
        .collect::<Result<_>>()?;

    let mut csv = String::from("beta,rank,m,n,E_coupled,E_uncoupled\n");
    let mut summary = Vec::new();
    for (beta, levels) in &per_beta {
        for l in levels {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(*beta),
                l.rank,
                l.m,
                l.n,
                fmt(l.coupled),
                fmt(l.uncoupled),
            ));
        }
        let energies: Vec<f64> = levels.iter().map(|l| l.coupled).collect();
        let distinct = twomode::distinct_count(&energies, 1e-6);
        summary.push(format!("beta = {beta}: {distinct} distinct values among 10"));
        if *beta != 0.0 {
            let branch: twomode::Branch = args.branch.into();
            let (chi, xi) = twomode::chi_xi(*beta, branch)?;
            summary.push(format!("beta = {beta}: chi = {chi:e}, xi = {xi:e}"));
        }
    }
    for line in &summary {
        eprintln!("{line}");
    }
    let mut manifest = RunManifest::new("spectrum", &RunConfig::default())?;
    manifest.summary = summary;
    if let Some(p) = out.emit("spectrum.csv", &csv)? {
        manifest.outputs.push(p.display().to_string());
    }
    out.manifest(&manifest)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// ermakov

fn cmd_ermakov(args: &ErmakovArgs, out: &Output) -> Result<()> {
    let ramp = ermakov::design_sta(args.omega0, args.omega_f, args.tf)?;
    if args.samples < 2 {
        return Err(Error::Config("samples must be >= 2".into()));
    }
    let grid: Vec<f64> = (0..args.samples)
        .map(|i| args.tf * i as f64 / (args.samples - 1) as f64)
        .collect();

    let inverted = ramp.inverted_intervals(2000);
    for (a, b) in &inverted {
        eprintln!("warning: omega^2 < 0 on [{a:.4}, {b:.4}] (transiently inverted potential)");
    }

    let opts = PropagationOptions {
        defect_tol: 1e-8,
        ..Default::default()
    };
    let prop = propagate_fn(
        1,
        |t| {
            Ok(nalgebra::DMatrix::from_row_slice(
                2,
                2,
                &[ramp.omega_sq(t), 0.0, 0.0, 1.0],
            ))
        },
        &grid,
        &opts,
    )?;
    let v0 = SymplecticPropagation::vacuum_covariance(&[args.omega0]);
    let covs = prop.evolve_covariance(&v0);
    let h_of = |t: f64, v: &nalgebra::DMatrix<f64>| 0.5 * (ramp.omega_sq(t) * v[(0, 0)] + v[(1, 1)]);
    let e0 = h_of(0.0, &covs[0]);
    let lewis0 = ermakov::lewis_invariant_form(ramp.rho(0.0), ramp.rho_dot(0.0), args.omega0)?
        .energy(&covs[0]);

    let mut csv =
        String::from("t,rho,rho_dot,omega_induced,lewis_drift,energy_ratio_running\n");
    let mut final_ratio = 1.0;
    for (i, &t) in grid.iter().enumerate() {
        let w2 = ramp.omega_sq(t);
        let omega_induced = w2.signum() * w2.abs().sqrt();
        let lewis = ermakov::lewis_invariant_form(ramp.rho(t), ramp.rho_dot(t), args.omega0)?
            .energy(&covs[i]);
        let ratio = h_of(t, &covs[i]) / e0;
        final_ratio = ratio;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(t),
            fmt(ramp.rho(t)),
            fmt(ramp.rho_dot(t)),
            fmt(omega_induced),
            fmt((lewis - lewis0).abs()),
            fmt(ratio),
        ));
    }

    let mut manifest = RunManifest::new("ermakov", &RunConfig::default())?;
    manifest.summary.push(format!(
        "final energy ratio = {final_ratio:e} (target {})",
        args.omega_f / args.omega0
    ));
    if !inverted.is_empty() {
        manifest
            .summary
            .push(format!("{} inverted-potential window(s)", inverted.len()));
    }
    if let Some(p) = out.emit("ermakov.csv", &csv)? {
        manifest.outputs.push(p.display().to_string());
    }
    out.manifest(&manifest)?;

    let target = args.omega_f / args.omega0;
    if (final_ratio - target).abs() > 1e-3 {
        return Err(Error::Accuracy(format!(
            "final energy ratio {final_ratio} misses {target} by more than 1e-3"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Report {
    passed: bool,
    checks: Vec<Check>,
}

fn cmd_verify(cli: &Cli, out: &Output) -> Result<()> {
    let cfg = load_config(cli)?;
    cfg.to_cavity_config()?;
    // reject unusable velocities before any numerics run
    if let Trajectory::Uniform { beta } = cfg.trajectory()? {
        twomode::gamma(beta)?;
    }

    let mut checks = Vec::new();
    checks.push(check_closed_forms(&cfg)?);
    checks.push(check_triple_oracle(&cfg)?);
    checks.push(check_resonance(&cfg));
    checks.push(check_two_mode_diagonalization()?);
    checks.push(check_spectrum_structure()?);
    checks.push(check_sta_stroke()?);
    checks.push(check_symplectic_invariants()?);
    checks.push(check_frame_map()?);
    checks.push(check_two_mode_boundedness()?);

    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let report = Report { passed, checks };
    let json =
        serde_json::to_string_pretty(&report).map_err(|e| Error::Config(e.to_string()))?;
    let mut manifest = RunManifest::new("verify", &cfg)?;
    if let Some(p) = out.emit("verify.json", &(json + "\n"))? {
        manifest.outputs.push(p.display().to_string());
    }
    manifest.summary = report
        .checks
        .iter()
        .map(|c| format!("{}: {}", c.name, if c.passed { "pass" } else { "fail" }))
        .collect();
    out.manifest(&manifest)?;
    if passed {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(Error::Accuracy(format!(
            "verification failed: {}",
            failing.join(", ")
        )))
    }
}

fn uniform_beta(cfg: &RunConfig) -> f64 {
    match cfg.trajectory() {
        Ok(Trajectory::Uniform { beta }) if beta != 0.0 => beta,
        _ => 0.5,
    }
}

fn check_closed_forms(cfg: &RunConfig) -> Result<Check> {
    let beta = uniform_beta(cfg);
    let grid = grid_of(cfg);
    let mut worst = 0.0f64;
    for &t in &grid {
        let a = analytic::photons_uniform(t, beta)?;
        let b = analytic::photons_planck_form(t, beta)?;
        worst = worst.max((a - b).abs());
    }
    Ok(Check {
        name: "planck_form_identity".into(),
        passed: worst < 1e-12,
        detail: format!("max deviation {worst:e} (tol 1e-12), beta = {beta}"),
    })
}

fn check_triple_oracle(cfg: &RunConfig) -> Result<Check> {
    let beta = uniform_beta(cfg);
    let grid = grid_of(cfg);
    let ana: Vec<f64> = grid
        .iter()
        .map(|&t| analytic::photons_uniform(t, beta))
        .collect::<Result<_>>()?;
    let prop = propagate(
        &HamiltonianSpec::SingleModeUniform { beta },
        &grid,
        &PropagationOptions::default(),
    )?;
    let sym = prop.photon_numbers(&[units::omega_static(1)])?;
    let fock_n = fock::photons_uniform(beta, &grid, cfg.fock.cutoff)?;
    let max_sym = ana
        .iter()
        .zip(&sym)
        .map(|(a, row)| (row[0] - a).abs())
        .fold(0.0f64, f64::max);
    let max_fock = ana
        .iter()
        .zip(&fock_n)
        .map(|(a, f)| (f - a).abs())
        .fold(0.0f64, f64::max);
    Ok(Check {
        name: "triple_oracle".into(),
        passed: max_sym < 1e-6 && max_fock < 1e-4,
        detail: format!(
            "beta = {beta}: |sym - analytic| {max_sym:e} (tol 1e-6), |fock - analytic| {max_fock:e} (tol 1e-4, cutoff {})",
            cfg.fock.cutoff
        ),
    })
}

fn check_resonance(cfg: &RunConfig) -> Check {
    let epsilon = match cfg.trajectory() {
        Ok(Trajectory::Parametric { epsilon, .. }) => epsilon,
        _ => 0.15,
    };
    let n = 25;
    let grid: Vec<f64> = (0..n).map(|i| 6.0 * i as f64 / (n - 1) as f64).collect();
    let run = match fock::photons_resonance(epsilon, &grid, cfg.fock.cutoff, 5e-4) {
        Ok(run) => run,
        Err(e) => {
            return Check {
                name: "resonance_convergence".into(),
                passed: false,
                detail: format!("evolution failed: {e}"),
            }
        }
    };
    let mut worst = 0.0f64;
    for (&t, &nph) in grid.iter().zip(&run.photons) {
        if t < 1.0 {
            continue;
        }
        let expect = match analytic::photons_resonance(t, epsilon) {
            Ok(v) => v,
            Err(e) => {
                return Check {
                    name: "resonance_convergence".into(),
                    passed: false,
                    detail: format!("closed form failed: {e}"),
                }
            }
        };
        worst = worst.max((nph - expect).abs() / expect);
    }
    let passed = worst < 0.1 && run.norm_drift < 1e-8 && run.leakage < 1e-2;
    Check {
        name: "resonance_convergence".into(),
        passed,
        detail: format!(
            "epsilon = {epsilon}, cutoff {}: max relative deviation {worst:e} (tol 0.1), norm drift {:e} (tol 1e-8), leakage {:e} (tol 1e-2)",
            cfg.fock.cutoff, run.norm_drift, run.leakage
        ),
    }
}

fn check_two_mode_diagonalization() -> Result<Check> {
    let betas = [0.1, -0.1, 0.5, -0.5, 0.9, -0.9, 0.99, -0.99];
    let mut worst_eta = 0.0f64;
    let mut worst_closed = 0.0f64;
    let mut worst_numeric = 0.0f64;
    for &beta in &betas {
        let (n1, n2) = twomode::normal_frequencies_numeric(beta)?;
        let (w1, w2) = twomode::normal_frequencies(beta)?;
        worst_numeric = worst_numeric.max((w1 - n1).abs()).max((w2 - n2).abs());
        for branch in [twomode::Branch::Plus, twomode::Branch::Minus] {
            let sub = twomode::coefficients(beta, branch)?;
            let cf = twomode::diagonal_closed_form(beta, branch)?;
            worst_eta = worst_eta.max(sub.eta12.abs()).max(sub.eta21.abs());
            worst_closed = worst_closed
                .max((sub.mu1 - cf.mu1).abs())
                .max((sub.mu2 - cf.mu2).abs())
                .max((sub.nu1 - cf.nu1).abs())
                .max((sub.nu2 - cf.nu2).abs());
        }
    }
    Ok(Check {
        name: "two_mode_diagonalization".into(),
        passed: worst_eta < 1e-10 && worst_closed < 1e-10 && worst_numeric < 1e-8,
        detail: format!(
            "residual coupling {worst_eta:e} (tol 1e-10), closed-form gap {worst_closed:e} (tol 1e-10), numeric gap {worst_numeric:e} (tol 1e-8)"
        ),
    })
}

fn check_spectrum_structure() -> Result<Check> {
    let near = twomode::spectrum(1e-4, 10)?;
    let worst = near
        .iter()
        .map(|l| (l.coupled - l.uncoupled).abs())
        .fold(0.0f64, f64::max);
    let near_e: Vec<f64> = near.iter().map(|l| l.coupled).collect();
    let near_distinct = twomode::distinct_count(&near_e, 1e-6);
    let fast: Vec<f64> = twomode::spectrum(0.9, 10)?
        .iter()
        .map(|l| l.coupled)
        .collect();
    let min_gap = fast
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let passed = worst < 1e-6 && near_distinct == 6 && min_gap > 1e-6;
    Ok(Check {
        name: "spectrum_structure".into(),
        passed,
        detail: format!(
            "beta = 1e-4: gap to uncoupled {worst:e} (tol 1e-6), {near_distinct} distinct (want 6); beta = 0.9: min gap {min_gap:e} (> 1e-6)"
        ),
    })
}

fn check_sta_stroke() -> Result<Check> {
    let pi = std::f64::consts::PI;
    let ramp = ermakov::design_sta(pi, pi / 2.0, 5.0)?;
    let v0 = SymplecticPropagation::vacuum_covariance(&[pi]);
    let res = ermakov::sta_energy_check(&ramp, &v0)?;
    let passed = (res.energy_ratio - 0.5).abs() < 1e-3
        && (res.variance_ratio - 2.0).abs() < 1e-2
        && res.lewis_drift < 1e-6;
    Ok(Check {
        name: "sta_stroke".into(),
        passed,
        detail: format!(
            "energy ratio {:.6} (want 0.5 +- 1e-3), variance ratio {:.6} (want 2.0 +- 1e-2), Lewis drift {:e} (tol 1e-6)",
            res.energy_ratio, res.variance_ratio, res.lewis_drift
        ),
    })
}

fn check_symplectic_invariants() -> Result<Check> {
    let beta = 0.5;
    let grid: Vec<f64> = (0..101).map(|i| 5.0 * i as f64 / 100.0).collect();
    let opts = PropagationOptions::default();

    // defect + energy scaling along the factorized flow
    let spec = HamiltonianSpec::FactorizedUniform { n_modes: 2, beta };
    let prop = propagate(&spec, &grid, &opts)?;
    let defect = prop.max_defect();
    let v0 = SymplecticPropagation::vacuum_covariance(&[
        units::omega_static(1),
        units::omega_static(2),
    ]);
    let covs = prop.evolve_covariance(&v0);
    let mut scale_drift = 0.0f64;
    let mut reference = None;
    for (&t, v) in grid.iter().zip(&covs) {
        let form = hamiltonian_matrix(&spec, t)?;
        let scaled = form.energy(v) * (1.0 + beta * t);
        let r = *reference.get_or_insert(scaled);
        scale_drift = scale_drift.max((scaled - r).abs());
    }

    // Fock-side energy scaling: q(t) <H(t)> constant under RK4 evolution
    let space = fock::FockSpace::new(vec![24], vec![units::omega_static(1)])?;
    let h0 = space.hamiltonian(&hamiltonian_matrix(
        &HamiltonianSpec::SingleModeUniform { beta },
        0.0,
    )?)?;
    let fgrid: Vec<f64> = (0..26).map(|i| 3.0 * i as f64 / 25.0).collect();
    let run = fock::evolve(
        |t| Ok(h0.map(|x| x / num_complex::Complex64::new(1.0 + beta * t, 0.0))),
        &space.vacuum(),
        &fgrid,
        5e-4,
        1e-8,
    )?;
    let mut fock_drift = 0.0f64;
    let mut fref = None;
    for i in 0..fgrid.len() {
        // H(t) = H0 / q(t), so q(t) <H(t)> = <H0>, conserved by the dynamics
        let e = run.expectation(&h0, i)?;
        let r = *fref.get_or_insert(e);
        fock_drift = fock_drift.max((e - r).abs());
    }

    // linear invariant with a deterministic pseudo-random family
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let tm = HamiltonianSpec::TwoMode { beta: 0.9 };
    let mut max_drift = 0.0f64;
    for _ in 0..10 {
        let f0: Vec<f64> = (0..4).map(|_| next()).collect();
        let drift = symplectic::linear_invariant_check(&tm, &f0, &grid, &opts)?;
        max_drift = max_drift.max(drift);
    }

    let passed =
        defect < 1e-10 && scale_drift < 1e-8 && fock_drift < 1e-6 && max_drift < 1e-6
            && run.norm_drift < 1e-8;
    Ok(Check {
        name: "symplectic_invariants".into(),
        passed,
        detail: format!(
            "defect {defect:e} (tol 1e-10), energy scaling {scale_drift:e} (tol 1e-8), Fock energy scaling {fock_drift:e} (tol 1e-6), Fock norm drift {:e} (tol 1e-8), linear invariant {max_drift:e} (tol 1e-6)",
            run.norm_drift
        ),
    })
}

fn check_frame_map() -> Result<Check> {
    let beta = 0.5;
    let grid: Vec<f64> = (0..41).map(|i| 2.0 * i as f64 / 40.0).collect();
    let opts = PropagationOptions::default();
    let mut worst = 0.0f64;
    for n_modes in [1usize, 2] {
        let fact = HamiltonianSpec::FactorizedUniform { n_modes, beta };
        let lab = HamiltonianSpec::LabFrame {
            n_modes,
            trajectory: Trajectory::uniform(beta),
        };
        let mapped = propagate(&fact, &grid, &opts)?.frame_map(beta)?;
        let direct = propagate(&lab, &grid, &opts)?;
        for (a, b) in mapped.matrices().iter().zip(direct.matrices()) {
            for (x, y) in a.iter().zip(b.iter()) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(Check {
        name: "frame_map_consistency".into(),
        passed: worst < 1e-6,
        detail: format!("max elementwise gap {worst:e} (tol 1e-6), N in {{1, 2}}, beta = 0.5"),
    })
}

fn check_two_mode_boundedness() -> Result<Check> {
    let beta = 0.9;
    let grid: Vec<f64> = (0..201).map(|i| 20.0 * i as f64 / 200.0).collect();
    let prop = propagate(
        &HamiltonianSpec::TwoMode { beta },
        &grid,
        &PropagationOptions::default(),
    )?;
    let totals: Vec<f64> = prop
        .photon_numbers(&[units::omega_static(1), units::omega_static(2)])?
        .iter()
        .map(|row| row[0] + row[1])
        .collect();
    let ceiling = totals.iter().fold(0.0f64, |a, &x| a.max(x));
    let late = totals[totals.len() * 3 / 4..]
        .iter()
        .fold(0.0f64, |a, &x| a.max(x));

    let fock_pairs = fock::photons_two_mode(beta, &grid, 12)?;
    let fock_ceiling = fock_pairs
        .iter()
        .map(|(a, b)| a + b)
        .fold(0.0f64, f64::max);
    let rel = (fock_ceiling - ceiling).abs() / ceiling;

    let passed = late <= ceiling + 1e-12 && rel < 0.05;
    Ok(Check {
        name: "two_mode_boundedness".into(),
        passed,
        detail: format!(
            "symplectic ceiling {ceiling:e}, late-window max {late:e}, Fock ceiling {fock_ceiling:e} (rel gap {rel:e}, tol 0.05)"
        ),
    })
}
