//! The `profile`, `evolve` and `sweep` subcommands.

use std::path::{Path, PathBuf};

use loggp::energy::energy_report;
use loggp::evolution::{evolve as split_step, make_pair_box, PairBox};
use loggp::galerkin::galerkin_evolve;
use loggp::profiles::{black_soliton, gp_dark_soliton, stationary_residual, traveling_wave, WaveProfile};
use loggp::scalars::find_critical_points;
use loggp::{Boundary, Complex64, Grid, GridFunction, Params};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{InitialKind, RunConfig, Scheme};
use crate::error::{CliError, CliResult};
use crate::report::{write_json, GalerkinSummary, ProfileReport, TrajectoryReport};

fn prepare_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_field(path: &Path, u: &GridFunction) -> CliResult<()> {
    loggp::grid::write_csv(path, u).map_err(|e| match e {
        loggp::Error::Io(io) => CliError::io(path, io),
        other => other.into(),
    })
}

#[derive(Debug, Clone)]
pub struct ProfileArgs {
    pub lambda: f64,
    pub c: f64,
    pub length: f64,
    pub n: usize,
    pub theta0: f64,
    pub out_dir: PathBuf,
    pub name: String,
}

/// Compute a traveling wave on `[-length/2, length/2]` and write `<name>.csv` and `<name>.json`.
pub fn profile(args: &ProfileArgs) -> CliResult<ProfileReport> {
    let p = Params::new(args.lambda, args.c)?;
    let grid = Grid::symmetric(args.length, args.n)?;
    let w = traveling_wave(&p, &grid, args.theta0)?;
    prepare_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join(format!("{}.csv", args.name));
    let file = std::fs::File::create(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
    w.write_csv_to(file)?;
    let report = ProfileReport {
        lambda: p.lambda,
        c: p.c,
        theta0: args.theta0,
        length: args.length,
        n: args.n,
        y0: w.y0,
        min_modulus: w.min_modulus(),
        stationary_residual: stationary_residual(&w)?,
        energy: w.energy()?,
        phase_winding: w.phase_winding(),
        csv: csv_path.display().to_string(),
    };
    write_json(&args.out_dir.join(format!("{}.json", args.name)), &report)?;
    Ok(report)
}

/// Initial field of a run, with the pair box when the datum is a wave on a periodic box.
fn initial_state(cfg: &RunConfig) -> CliResult<(GridFunction, Option<PairBox>)> {
    let p = cfg.params()?;
    let (length, n, bc) = (cfg.grid.length, cfg.grid.n, cfg.grid.bc);
    let wave = |grid: &Grid| -> CliResult<WaveProfile> {
        Ok(match cfg.initial.kind {
            InitialKind::BlackSoliton => black_soliton(&p, grid)?,
            InitialKind::TravelingWave => traveling_wave(&p, grid, cfg.initial.theta0)?,
            InitialKind::GpDarkSoliton => gp_dark_soliton(p.c, grid)?,
            InitialKind::Bump | InitialKind::Csv => unreachable!("not a wave"),
        })
    };
    let bump = |grid: Grid| {
        let (a, s) = (cfg.initial.amplitude, cfg.initial.width);
        GridFunction::from_fn(grid, |x| Complex64::new(1.0 + a * (-(x / s) * (x / s)).exp(), 0.0))
    };
    match (cfg.initial.kind, bc) {
        (InitialKind::Csv, _) => {
            let path = cfg.initial.path.as_ref().expect("validated");
            let u = loggp::grid::read_csv(path, bc)?;
            if u.len() != n {
                return Err(CliError::Config(format!(
                    "initial.path has {} samples but grid.n = {n}",
                    u.len()
                )));
            }
            Ok((u, None))
        }
        (InitialKind::Bump, Boundary::Periodic) => Ok((bump(Grid::periodic(-0.5 * length, length, n)?), None)),
        (InitialKind::Bump, _) => Ok((bump(Grid::symmetric(length, n)?), None)),
        (_, Boundary::Periodic) => {
            // the wave sits on [-S/2, S/2] and its mirror image fills the rest of the box
            let separation = 0.5 * length;
            let w = wave(&Grid::symmetric(separation, n / 2 + 1)?)?;
            let pb = make_pair_box(&w, separation)?;
            Ok((pb.field.clone(), Some(pb)))
        }
        (_, Boundary::DirichletOdd) => Ok((wave(&Grid::dirichlet_odd(length, n)?)?.to_grid_function(), None)),
        (_, Boundary::Free) => Err(CliError::Config("wave data need a periodic or dirichlet-odd grid".into())),
    }
}

fn boundary_name(bc: Boundary) -> String {
    serde_json::to_value(bc).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Run the configured evolution and write `<name>.json`, `<name>_final.csv`
/// and, when requested, `<name>_snap_<k>.csv`.
pub fn evolve(cfg: &RunConfig, out_dir: &Path) -> CliResult<TrajectoryReport> {
    let ecfg = cfg.evolution_config()?;
    ecfg.validate()?;
    let (u0, pair) = initial_state(cfg)?;
    let grid = *u0.grid();
    prepare_dir(out_dir)?;
    let name = &cfg.output.name;
    let is_wave = matches!(
        cfg.initial.kind,
        InitialKind::BlackSoliton | InitialKind::TravelingWave | InitialKind::GpDarkSoliton
    );

    let mut report = TrajectoryReport {
        scheme: match cfg.evolution.scheme {
            Scheme::SplitStep => "split-step".into(),
            Scheme::Galerkin => "galerkin".into(),
        },
        lambda: ecfg.p.lambda,
        c: ecfg.p.c,
        nonlinearity: serde_json::to_value(ecfg.nonlinearity)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        eps: ecfg.eps,
        boundary: boundary_name(grid.bc),
        length: grid.length(),
        n: grid.n,
        dt: ecfg.dt,
        t_end: ecfg.t_end,
        steps: ecfg.steps(),
        resonance_number: None,
        times: Vec::new(),
        energy_series: Vec::new(),
        mass_defect_series: Vec::new(),
        l2_series: Vec::new(),
        energy_drift: 0.0,
        deviation: 0.0,
        translate_error: None,
        galerkin: None,
        final_csv: String::new(),
        snapshots: Vec::new(),
    };

    let (final_state, snapshots) = match cfg.evolution.scheme {
        Scheme::SplitStep => {
            let spectral_grid = if grid.bc == Boundary::DirichletOdd { grid.odd_extension()? } else { grid };
            report.resonance_number = Some(ecfg.resonance_number(&spectral_grid));
            let traj = split_step(&u0, &ecfg)?;
            let t_final = *traj.times.last().unwrap_or(&0.0);
            if is_wave {
                let reference = match &pair {
                    Some(pb) => pb.translated(t_final)?,
                    None => u0.clone(),
                };
                report.translate_error = Some(traj.final_state.l2_distance(&reference)?);
            }
            report.times = traj.times;
            report.energy_series = traj.energy_series;
            report.mass_defect_series = traj.mass_defect_series;
            report.l2_series = traj.l2_series;
            report.energy_drift = traj.energy_drift;
            (traj.final_state, traj.snapshots)
        }
        Scheme::Galerkin => {
            let m = cfg.evolution.m.expect("validated");
            let (state, traj) = galerkin_evolve(&u0, m, &ecfg)?;
            let snapshots = if ecfg.snapshots {
                traj.coeff_series
                    .iter()
                    .map(|g| GridFunction::new(grid, state.field_with(g)))
                    .collect::<loggp::Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            report.mass_defect_series = traj.perturbation_series.iter().map(|v| v * v).collect();
            report.galerkin = Some(GalerkinSummary {
                m,
                gradient_bound_holds: traj.gradient_bound_holds(),
                holder_constant: traj.holder_constant(&state),
                gradient_series: traj.gradient_series,
                gradient_bound: traj.gradient_bound,
                perturbation_series: traj.perturbation_series,
                stiffness_min_singular: traj.stiffness_min_singular,
            });
            report.times = traj.times;
            report.energy_series = traj.energy_series;
            report.energy_drift = traj.energy_drift;
            (traj.final_state, snapshots)
        }
    };
    report.deviation = final_state.l2_distance(&u0)?;

    let final_path = out_dir.join(format!("{name}_final.csv"));
    write_field(&final_path, &final_state)?;
    report.final_csv = final_path.display().to_string();
    for (k, snap) in snapshots.iter().enumerate() {
        let path = out_dir.join(format!("{name}_snap_{k:04}.csv"));
        write_field(&path, snap)?;
        report.snapshots.push(path.display().to_string());
    }
    write_json(&out_dir.join(format!("{name}.json")), &report)?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub lambda: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub steps: usize,
    pub length: f64,
    pub n: usize,
    pub out_dir: PathBuf,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    BlackSoliton,
    Threshold,
    Error,
}

/// One row of the sweep table; empty cells for values that do not exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub y0: Option<f64>,
    pub y1: Option<f64>,
    pub y2: Option<f64>,
    pub min_modulus: Option<f64>,
    pub phase_winding: Option<f64>,
    pub total_loggp: Option<f64>,
    pub status: RowStatus,
}

pub fn sweep_velocities(args: &SweepArgs) -> CliResult<Vec<f64>> {
    if args.steps == 0 {
        return Err(CliError::Config("--steps must be at least 1".into()));
    }
    if !(args.c_min <= args.c_max) {
        return Err(CliError::Config(format!("empty range: --c-min {} > --c-max {}", args.c_min, args.c_max)));
    }
    if args.steps == 1 {
        if args.c_min != args.c_max {
            return Err(CliError::Config("--steps 1 needs --c-min equal to --c-max".into()));
        }
        return Ok(vec![args.c_min]);
    }
    let h = (args.c_max - args.c_min) / (args.steps - 1) as f64;
    Ok((0..args.steps).map(|k| args.c_min + k as f64 * h).collect())
}

fn sweep_row(lambda: f64, c: f64, grid: &Grid) -> SweepRow {
    let empty = SweepRow {
        c,
        y0: None,
        y1: None,
        y2: None,
        min_modulus: None,
        phase_winding: None,
        total_loggp: None,
        status: RowStatus::Error,
    };
    let Ok(p) = Params::new(lambda, c) else { return empty };
    if c != 0.0 && !p.is_subsonic() {
        return SweepRow { status: RowStatus::Threshold, ..empty };
    }
    let Ok(w) = traveling_wave(&p, grid, 0.0) else { return empty };
    let Ok(energy) = energy_report(&w.to_grid_function(), &p) else { return empty };
    let mut row = SweepRow {
        min_modulus: Some(w.min_modulus()),
        phase_winding: Some(w.phase_winding()),
        total_loggp: Some(energy.total_loggp),
        ..empty
    };
    if c == 0.0 {
        row.y0 = Some(0.0);
        row.status = RowStatus::BlackSoliton;
    } else if let Ok(cp) = find_critical_points(&p) {
        row.y0 = Some(cp.y0);
        row.y1 = Some(cp.y1);
        row.y2 = Some(cp.y2);
        row.status = RowStatus::Ok;
    }
    row
}

/// Rows of the sweep, computed in parallel and returned in velocity order.
pub fn sweep_rows(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    Params::new(args.lambda, 0.0)?;
    let cs = sweep_velocities(args)?;
    let grid = Grid::symmetric(args.length, args.n)?;
    Ok(cs.par_iter().map(|&c| sweep_row(args.lambda, c, &grid)).collect())
}

pub fn write_sweep_csv<W: std::io::Write>(writer: W, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Config(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| CliError::io("sweep csv", e))
}

/// Run the sweep and write `<name>.csv`.
pub fn sweep(args: &SweepArgs) -> CliResult<(PathBuf, Vec<SweepRow>)> {
    let rows = sweep_rows(args)?;
    prepare_dir(&args.out_dir)?;
    let path = args.out_dir.join(format!("{}.csv", args.name));
    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_sweep_csv(file, &rows)?;
    Ok((path, rows))
}
