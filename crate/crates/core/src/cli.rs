//! `cliffsolve <command> --config <file> [--out <dir>] [--seed <u64>]`.
//!
//! Every run prints one JSON document on stdout and writes it to
//! `<out>/report.json`. Exit status: 0 pass, 2 check failure, 1 bad
//! invocation or configuration.

use crate::clifford::Signature;
use crate::config::{ModelKind, RunConfig};
use crate::error::{Error, Result};
use crate::genform::anticommutator_residual;
use crate::models::{
    self, build_dirac_hestenes, build_equipped, build_model_dirac, check_hestenes_k, AssembledSystem,
    TheoremOptions,
};
use crate::report::to_json;
use crate::sampling;
use crate::solver::{
    boundary_flux_matrix, cfl_time, energy, fit_time, io as field_io, validate_friedrichs, CauchySolver, Grid,
};
use crate::spinor_ideals::{canonical_idempotents, is_hermitian_idempotent, CANONICAL_NAMES};
use clap::{Parser, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Friedrichs conditions and boundary flux for the configured model
    Validate,
    /// The five canonical Hermitian idempotents of (1,3) and their residuals
    Idempotents,
    /// Cauchy run writing field CSVs
    Solve,
    /// Ideal-preservation harness for the model Dirac system
    Theorem,
    /// Plane-wave spectrum and time-domain phase study
    Dispersion,
    /// Cauchy run with per-step energy log
    Energy,
}

#[derive(Debug, Parser)]
#[command(name = "cliffsolve", version, about = "Covariantly equipped Dirac-type systems on Clifford algebras")]
pub struct Args {
    pub command: Command,
    /// TOML run configuration; defaults apply when omitted
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for report.json, fields/ and energy.csv
    #[arg(long, default_value = "cliffsolve-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Result of one command: exit status and the JSON document.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Config(_) | Error::Parse(_) => "config",
        Error::Io(_) => "io",
        Error::Membership(_) | Error::NotIdempotent(_) => "membership",
        Error::NotHyperbolic(_) => "not_hyperbolic",
        Error::Cfl { .. } => "cfl",
        Error::NonFinite { .. } => "non_finite",
        Error::Parity(_) => "parity",
        _ => "precondition",
    }
}

pub fn error_report(command: Option<Command>, e: &Error) -> Value {
    json!({
        "command": command,
        "status": "error",
        "error": { "kind": error_kind(e), "message": e.to_string() },
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn assemble(cfg: &RunConfig, grid: Option<&Grid>) -> Result<AssembledSystem> {
    match cfg.model.kind {
        ModelKind::Dirac => build_model_dirac(&cfg.dirac_spec()?, grid),
        ModelKind::Hestenes => build_dirac_hestenes(&cfg.hestenes_spec()?, grid),
        ModelKind::Equipped => build_equipped(&cfg.equipped_spec()?, grid),
    }
}

/// Attaches a time step: explicit `dt`, `final_time` fitted under the CFL
/// bound, or `steps` at the CFL limit.
fn timed_grid(cfg: &RunConfig, sys: &AssembledSystem, grid: Grid) -> Result<Grid> {
    match (cfg.grid.dt, cfg.grid.final_time) {
        (Some(_), Some(_)) => Err(Error::Config("grid: give dt or final_time, not both".into())),
        (Some(dt), None) => Ok(grid.with_time(dt, cfg.grid.steps)),
        (None, Some(t)) => fit_time(&sys.system, grid, t),
        (None, None) => cfl_time(&sys.system, grid, cfg.grid.steps),
    }
}

fn checked_system(sys: AssembledSystem) -> Result<AssembledSystem> {
    let r = validate_friedrichs(&sys.system);
    if !r.pass {
        return Err(Error::NotHyperbolic(format!(
            "hermiticity residuals {:?}, γ = {:e}",
            r.hermiticity_residuals, r.gamma
        )));
    }
    Ok(sys)
}

fn validate(cfg: &RunConfig) -> Result<(bool, Value)> {
    let tetrad = cfg.tetrad()?;
    let grid = cfg.grid()?;
    let sys = assemble(cfg, Some(&grid))?;
    let friedrichs = validate_friedrichs(&sys.system);
    let n = tetrad.signature().dim();
    let normals = if cfg.validate.normals.is_empty() {
        let mut tau = vec![0.0; n];
        tau[0] = 1.0;
        vec![tau]
    } else {
        cfg.validate.normals.clone()
    };
    let boundary = normals
        .iter()
        .map(|tau| {
            let (_, min) = boundary_flux_matrix(&sys.system, tau)?;
            Ok(json!({ "normal": tau, "min_eigenvalue": min, "positive": min > crate::tol::POSITIVE }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = json!({
        "kind": cfg.model.kind_name(),
        "signature": tetrad.signature().to_string(),
        "tetrad": {
            "max_deviation": tetrad.max_deviation(),
            "anticommutator_residual": anticommutator_residual(&tetrad),
        },
        "friedrichs": to_value(&friedrichs),
        "gamma": friedrichs.gamma,
        "hermiticity_residuals": friedrichs.hermiticity_residuals,
        "lower_antihermiticity": sys.system.lower_antihermiticity(),
        "boundary": boundary,
    });
    let mut pass = friedrichs.pass;
    match cfg.model.kind {
        ModelKind::Dirac => {
            let spec = cfg.dirac_spec()?;
            report["ideal_invariance"] = json!(models::ideal_invariance_residual(&sys, &spec.idempotent)?);
        }
        ModelKind::Hestenes => {
            let k = check_hestenes_k(&cfg.hestenes_spec()?.k)?;
            pass &= k.pass;
            report["k_check"] = to_value(&k);
        }
        ModelKind::Equipped => {}
    }
    Ok((pass, report))
}

fn idempotents(cfg: &RunConfig) -> Result<(bool, Value)> {
    let sig = cfg.signature()?;
    if sig != Signature::new(1, 3)? {
        return Err(Error::Config(format!(
            "canonical idempotents are listed for signature (1,3), got {sig}"
        )));
    }
    let mut pass = true;
    let entries = canonical_idempotents(sig)?
        .iter()
        .zip(CANONICAL_NAMES)
        .map(|(t, name)| {
            let check = is_hermitian_idempotent(t.element())?;
            let ok = check.square_residual <= crate::tol::IDEMPOTENT && check.hermitian_residual <= crate::tol::IDEMPOTENT;
            pass &= ok;
            Ok(json!({
                "name": name,
                "value": t.element().to_string(),
                "dual": t.dual_element().to_string(),
                "rank": t.rank(),
                "square_residual": check.square_residual,
                "hermitian_residual": check.hermitian_residual,
                "pass": ok,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((pass, json!({ "signature": sig.to_string(), "idempotents": entries })))
}

fn evolve(cfg: &RunConfig, out: &Path, log_energy: bool) -> Result<(bool, Value)> {
    let grid = cfg.grid()?;
    let sys = checked_system(assemble(cfg, Some(&grid))?)?;
    let grid = timed_grid(cfg, &sys, grid)?;
    let init = cfg.initial()?;
    let mut field = sys.sample(&init, &grid)?;
    let mut solver = CauchySolver::new(&sys.system, &grid)?;
    let fields_dir = out.join("fields");
    fs::create_dir_all(&fields_dir)?;
    let every = cfg.grid.sample_every;
    let steps = grid.steps;
    let mut energies = Vec::new();
    let mut written = 0usize;
    solver.run(&mut field, |f| {
        let keep = f.step == 0 || f.step == steps || (every > 0 && f.step % every == 0);
        if keep {
            let file = fs::File::create(fields_dir.join(format!("step_{:04}.csv", f.step)))?;
            field_io::write_field_csv(BufWriter::new(file), f, &grid)?;
            written += 1;
        }
        if log_energy {
            energies.push((f.step, f.time, energy(&sys.system, f, &grid)));
        }
        Ok(())
    })?;
    let mut report = json!({
        "kind": cfg.model.kind_name(),
        "points": grid.num_points(),
        "steps": steps,
        "dt": grid.dt,
        "final_time": grid.final_time(),
        "slices_written": written,
        "final_max_abs": field.max_abs(),
    });
    let mut pass = true;
    if log_energy {
        field_io::write_energy_csv(BufWriter::new(fs::File::create(out.join("energy.csv"))?), &energies)?;
        let e0 = energies[0].2;
        let drift = energies
            .iter()
            .map(|r| if e0 > 0.0 { (r.2 - e0).abs() / e0 } else { r.2.abs() })
            .fold(0.0, f64::max);
        let conservative = sys.system.lower_antihermiticity() <= crate::tol::ALGEBRA
            && matches!(sys.system.source(), crate::solver::Source::Zero);
        if conservative {
            pass = drift <= cfg.tolerances.energy_drift;
        }
        report["energy_initial"] = json!(e0);
        report["energy_drift"] = json!(drift);
        report["conservative"] = json!(conservative);
    }
    Ok((pass, report))
}

fn theorem(cfg: &RunConfig, seed: u64) -> Result<(bool, Value)> {
    if cfg.model.kind != ModelKind::Dirac {
        return Err(Error::Config("theorem runs the model Dirac system; set model.kind = \"dirac\"".into()));
    }
    let spec = cfg.dirac_spec()?;
    let grid = cfg.grid()?;
    let sys = models::assemble_model_dirac(&spec, Some(&grid))?;
    let grid = timed_grid(cfg, &sys, grid)?;
    let opts = TheoremOptions {
        seed,
        tolerances: cfg.tolerances.theorem,
    };
    let r = models::verify_theorem(&spec, &cfg.initial()?, &grid, &opts)?;
    let mut report = to_value(&r);
    report["convergence_orders"] = json!([]);
    Ok((r.pass, report))
}

fn dispersion(cfg: &RunConfig, seed: u64) -> Result<(bool, Value)> {
    let with_mass = |m: f64| -> Result<AssembledSystem> {
        match cfg.model.kind {
            ModelKind::Dirac => {
                let mut spec = cfg.dirac_spec()?;
                if !spec.gauge_is_zero() {
                    return Err(Error::Model("dispersion needs A = 0".into()));
                }
                spec.mass = m;
                models::assemble_model_dirac(&spec, None)
            }
            ModelKind::Hestenes => {
                let mut spec = cfg.hestenes_spec()?;
                if spec.covector.components.iter().any(|a| *a != 0.0) {
                    return Err(Error::Model("dispersion needs a = 0".into()));
                }
                spec.mass = m;
                models::assemble_dirac_hestenes(&spec, None)
            }
            ModelKind::Equipped => Err(Error::Config("dispersion supports the dirac and hestenes models".into())),
        }
    };
    let n = cfg.signature()?.dim();
    let mut pairs: Vec<(f64, Vec<f64>)> = cfg.dispersion.pairs.iter().map(|p| (p.mass, p.k.clone())).collect();
    let mut rng = sampling::rng(seed);
    let (mm, mk) = (cfg.dispersion.max_mass, cfg.dispersion.max_k);
    for _ in 0..cfg.dispersion.random_pairs {
        let m = rng.random_range(0.0..=mm);
        let k = (1..n).map(|_| rng.random_range(-mk..=mk)).collect();
        pairs.push((m, k));
    }
    let tol = cfg.tolerances.dispersion;
    let mut pass = true;
    let mut max_deviation = 0.0f64;
    let mut checks = Vec::with_capacity(pairs.len());
    for (m, k) in &pairs {
        let r = models::dispersion_check(&with_mass(*m)?.system, *m, k, tol)?;
        pass &= r.pass;
        max_deviation = max_deviation.max(r.max_deviation);
        checks.push(to_value(&r));
    }
    let base = with_mass(cfg.model.mass)?;
    let friedrichs = validate_friedrichs(&base.system);
    let mut report = json!({
        "kind": cfg.model.kind_name(),
        "pairs": checks,
        "max_deviation": max_deviation,
        "gamma": friedrichs.gamma,
        "hermiticity_residuals": friedrichs.hermiticity_residuals,
        "convergence_orders": [],
    });
    if let Some(p) = &cfg.dispersion.phase {
        let order = cfg.grid()?.order;
        let study = models::phase_study(&base.system, p.axis, p.q, p.length, p.final_time, &p.levels, cfg.grid.cfl, order)?;
        pass &= study.orders.iter().all(|o| *o >= cfg.tolerances.min_order);
        report["convergence_orders"] = json!(study.orders);
        report["phase"] = to_value(&study);
    }
    Ok((pass, report))
}

/// Runs one command; failures come back as JSON error reports.
pub fn run(command: Command, cfg: &RunConfig, out: &Path, seed: Option<u64>) -> Outcome {
    let seed = cfg.seed(seed);
    let result = match command {
        Command::Validate => validate(cfg),
        Command::Idempotents => idempotents(cfg),
        Command::Solve => evolve(cfg, out, false),
        Command::Energy => evolve(cfg, out, true),
        Command::Theorem => theorem(cfg, seed),
        Command::Dispersion => dispersion(cfg, seed),
    };
    match result {
        Ok((pass, mut report)) => {
            report["command"] = json!(command);
            report["seed"] = json!(seed);
            report["status"] = json!(status(pass));
            Outcome {
                code: if pass { 0 } else { 2 },
                report,
            }
        }
        Err(e) => Outcome {
            code: error_code(&e),
            report: error_report(Some(command), &e),
        },
    }
}

/// Writes `<out>/report.json`, creating the directory.
pub fn write_report(out: &Path, report: &Value) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("report.json"), to_json(report) + "\n")?;
    Ok(())
}

/// Full entry point: parse arguments, run, print and store the report.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let report = json!({
                "command": null,
                "status": "error",
                "error": { "kind": "usage", "message": e.render().to_string().trim_end() },
            });
            println!("{}", to_json(&report));
            return 1;
        }
    };
    let cfg = match &args.config {
        Some(path) => RunConfig::from_file(path),
        None => Ok(RunConfig::default()),
    };
    let outcome = match cfg {
        Ok(cfg) => run(args.command, &cfg, &args.out, args.seed),
        Err(e) => Outcome {
            code: error_code(&e),
            report: error_report(Some(args.command), &e),
        },
    };
    println!("{}", to_json(&outcome.report));
    if let Err(e) = write_report(&args.out, &outcome.report) {
        let report = error_report(Some(args.command), &e);
        println!("{}", to_json(&report));
        return 1;
    }
    outcome.code
}
