use std::f64::consts::{PI, TAU};

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pzphase::adiabatic::{adiabatic_fidelity, evolve, geometric_phase_from_trajectory, DriveSpec, Ramp};
use pzphase::manybody::{filled_band_phase, slater_cycle_oracle, FilledBandSpec, MAX_ORACLE_PARTICLES};
use pzphase::models::{ssh_obc_hamiltonian, translate, zero_mode_count, MAX_OBC_CELLS};
use pzphase::numerics::{herm_eig_n, JacobiOptions};
use pzphase::phase::{apply_gauge, chain_phase, ChainFlag, GaugeFunction};
use pzphase::{
    build_chain, wrap_angle, zak_phase, Angle, BargmannChain, BasisConvention, BlochModel, Error, ZakEndpoint,
};

use crate::config::{ModelKind, RunConfig};
use crate::output::{emit, Field, Table};
use crate::CliError;

const INVARIANCE_TOL: f64 = 1e-9;
const TRANSLATION_TOL: f64 = 1e-6;
const MANYBODY_TOL: f64 = 1e-6;
const ADIABATIC_TOL: f64 = 0.05;

fn write(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    emit(&table.render(cfg.format), cfg.out.as_deref()).map_err(|e| CliError {
        code: 4,
        kind: "Io",
        message: e.to_string(),
    })
}

/// Phases within this of 0 or pi are printed as exactly 0 or pi.
const SNAP: f64 = 1e-12;

fn snapped(a: Angle) -> f64 {
    if a.distance(Angle::PI) < SNAP {
        PI
    } else if a.distance(Angle::ZERO) < SNAP {
        0.0
    } else {
        a.value()
    }
}

fn angle(a: Option<Angle>) -> Field {
    Field::opt(a.map(snapped))
}

fn pi_units(a: Option<Angle>) -> Field {
    Field::opt(a.map(|a| snapped(a) / PI))
}

/// Everything `phase` and `sweep` report about one chain.
struct ChainReport {
    gamma_g: Option<Angle>,
    zak_raw: Option<Angle>,
    zak_periodic: Option<Angle>,
    min_gap: Option<f64>,
    min_overlap: f64,
    flags: Vec<ChainFlag>,
    status: &'static str,
}

fn report_chain(chain: &BargmannChain) -> Result<ChainReport, CliError> {
    let boundary = chain.has_flag(ChainFlag::BoundaryFlag);
    let tolerate = |r: Result<Angle, Error>| -> Result<Option<Angle>, CliError> {
        match r {
            Ok(a) => Ok(Some(a)),
            Err(Error::ZeroOverlap(_)) if boundary => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let gamma_g = tolerate(chain_phase(chain).map(|r| r.gamma))?;
    let zak_raw = tolerate(zak_phase(chain, ZakEndpoint::RawEigenvector).map(|r| r.gamma))?;
    let zak_periodic = tolerate(zak_phase(chain, ZakEndpoint::PeriodicGauge).map(|r| r.gamma))?;
    Ok(ChainReport {
        status: if gamma_g.is_none() { "BOUNDARY" } else { "OK" },
        gamma_g,
        zak_raw,
        zak_periodic,
        min_gap: chain.min_gap,
        min_overlap: chain.min_overlap(),
        flags: chain.flags.clone(),
    })
}

fn flags_text(flags: &[ChainFlag]) -> String {
    flags.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

pub fn phase(cfg: &RunConfig) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    let chain = build_chain(&model, cfg.band, cfg.m)?;
    let r = report_chain(&chain)?;
    let table = Table::record(
        &[
            "model",
            "band",
            "gamma_g",
            "pi_units",
            "gamma_z_raw",
            "gamma_z_periodic",
            "min_gap",
            "min_overlap",
            "M",
            "flags",
            "status",
        ],
        vec![
            model.describe().into(),
            cfg.band.into(),
            angle(r.gamma_g),
            pi_units(r.gamma_g),
            angle(r.zak_raw),
            angle(r.zak_periodic),
            Field::opt(r.min_gap),
            r.min_overlap.into(),
            cfg.m.into(),
            flags_text(&r.flags).into(),
            r.status.into(),
        ],
    );
    write(cfg, &table)
}

pub const SWEEP_PARAMS: [&str; 7] = ["v", "w", "b", "eps", "J", "Delta", "V0"];

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// One of v, w, b, eps, J, Delta, V0
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
}

pub fn sweep(cfg: &RunConfig, args: &SweepArgs) -> Result<(), CliError> {
    if !SWEEP_PARAMS.contains(&args.param.as_str()) {
        return Err(CliError::usage(format!(
            "--param must be one of {}",
            SWEEP_PARAMS.join(", ")
        )));
    }
    if !(args.from.is_finite() && args.to.is_finite() && args.from < args.to) {
        return Err(CliError::usage("sweep needs finite --from < --to"));
    }
    if args.steps < 2 {
        return Err(CliError::usage("sweep needs --steps >= 2"));
    }
    let span = args.to - args.from;
    let points: Vec<(f64, BlochModel)> = (0..args.steps)
        .map(|i| {
            let x = args.from + i as f64 * span / (args.steps - 1) as f64;
            Ok((x, cfg.with_param(&args.param, x)?.build_model()?))
        })
        .collect::<Result<_, CliError>>()?;

    let rows: Vec<Vec<Field>> = points
        .par_iter()
        .map(|(x, model)| sweep_row(*x, model, cfg))
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new(&[
        "param",
        "gamma_g",
        "gamma_z_raw",
        "gamma_z_periodic",
        "min_gap",
        "min_overlap",
        "M",
        "status",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    write(cfg, &table)
}

fn sweep_row(x: f64, model: &BlochModel, cfg: &RunConfig) -> Result<Vec<Field>, CliError> {
    let row = match build_chain(model, cfg.band, cfg.m) {
        Ok(chain) => {
            let r = report_chain(&chain)?;
            vec![
                x.into(),
                angle(r.gamma_g),
                angle(r.zak_raw),
                angle(r.zak_periodic),
                Field::opt(r.min_gap),
                r.min_overlap.into(),
                cfg.m.into(),
                r.status.into(),
            ]
        }
        Err(Error::GapClosure { min_gap, .. }) => vec![
            x.into(),
            Field::Empty,
            Field::Empty,
            Field::Empty,
            min_gap.into(),
            Field::Empty,
            cfg.m.into(),
            "GAP_CLOSURE".into(),
        ],
        Err(Error::OverlapTooSmall { overlap, .. }) => vec![
            x.into(),
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Empty,
            overlap.into(),
            cfg.m.into(),
            "OVERLAP_TOO_SMALL".into(),
        ],
        Err(e) => return Err(e.into()),
    };
    Ok(row)
}

#[derive(Debug, Clone, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

pub fn gauge_fuzz(cfg: &RunConfig, args: &FuzzArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let model = cfg.build_model()?;
    let chain = build_chain(&model, cfg.band, cfg.m)?;
    let g0 = chain_phase(&chain)?.gamma;
    let z0 = zak_phase(&chain, ZakEndpoint::RawEigenvector)?.gamma;
    let deviations: Vec<(f64, f64)> = (0..args.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial));
            // uniform on (-pi, pi]
            let values = (0..chain.states.len()).map(|_| -rng.gen_range(-PI..PI)).collect();
            let gauge = GaugeFunction::new(values)?;
            let gauged = apply_gauge(&chain, &gauge)?;
            let dg = chain_phase(&gauged)?.gamma.distance(g0);
            let dz = zak_phase(&gauged, ZakEndpoint::RawEigenvector)?.gamma;
            Ok((dg, (dz - z0).distance(gauge.zak_shift())))
        })
        .collect::<Result<_, Error>>()?;
    let max_dg = deviations.iter().map(|d| d.0).fold(0.0, f64::max);
    let max_dz = deviations.iter().map(|d| d.1).fold(0.0, f64::max);
    let pass = max_dg < INVARIANCE_TOL && max_dz < INVARIANCE_TOL;
    let table = Table::record(
        &[
            "model",
            "M",
            "trials",
            "seed",
            "max_delta_gamma_g",
            "max_zak_residual",
            "status",
        ],
        vec![
            model.describe().into(),
            cfg.m.into(),
            args.trials.into(),
            Field::Text(cfg.seed.to_string()),
            max_dg.into(),
            max_dz.into(),
            if pass { "PASS" } else { "FAIL" }.into(),
        ],
    );
    write(cfg, &table)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::violation(format!(
            "gauge fuzz: max |d gamma_g| {max_dg:e}, max Zak residual {max_dz:e}"
        )))
    }
}

#[derive(Debug, Clone, Args)]
pub struct TranslateArgs {
    /// Explicit shifts (comma separated); overrides --count
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub d: Vec<f64>,
    /// Number of seeded random shifts in (0, a)
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

pub fn translate_test(cfg: &RunConfig, args: &TranslateArgs) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    if !model.supports_translation() {
        return Err(CliError::usage("translation is not defined for the Kitaev model"));
    }
    let a = model.lattice_constant();
    let shifts: Vec<f64> = if args.d.is_empty() {
        if args.count == 0 {
            return Err(CliError::usage("--count must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..args.count)
            .map(|_| loop {
                let d = rng.gen_range(0.0..a);
                if d > 0.0 {
                    break d;
                }
            })
            .collect()
    } else {
        args.d.clone()
    };
    // The periodic-gauge image follows the orbitals only when they move with the origin.
    let moves_with_origin =
        !matches!(model, BlochModel::Ssh(ref s) if s.convention == BasisConvention::LatticePeriodic);

    let chain = build_chain(&model, cfg.band, cfg.m)?;
    let g0 = chain_phase(&chain)?.gamma;
    let z0 = zak_phase(&chain, ZakEndpoint::PeriodicGauge)?.gamma;
    let rows: Vec<(f64, Angle, f64, Angle, Angle, f64)> = shifts
        .par_iter()
        .map(|&d| {
            let moved = build_chain(&translate(&model, d), cfg.band, cfg.m)?;
            let g1 = chain_phase(&moved)?.gamma;
            let dz = zak_phase(&moved, ZakEndpoint::PeriodicGauge)?.gamma - z0;
            let predicted = wrap_angle(if moves_with_origin { TAU * d / a } else { 0.0 });
            Ok((d, g1, g1.distance(g0), dz, predicted, dz.distance(predicted)))
        })
        .collect::<Result<_, Error>>()?;

    let mut table = Table::new(&[
        "d",
        "gamma_g",
        "gamma_g_translated",
        "delta_gamma_g",
        "delta_gamma_z",
        "predicted_zak_shift",
        "zak_residual",
        "status",
    ]);
    let mut failures = 0;
    for (d, g1, dg, dz, predicted, residual) in rows {
        let ok = dg < TRANSLATION_TOL && residual < TRANSLATION_TOL;
        failures += usize::from(!ok);
        table.push(vec![
            d.into(),
            angle(Some(g0)),
            angle(Some(g1)),
            dg.into(),
            dz.value().into(),
            predicted.value().into(),
            residual.into(),
            if ok { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    write(cfg, &table)?;
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::violation(format!(
            "translation test: {failures} of {} shifts failed",
            shifts.len()
        )))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ManyBodyArgs {
    /// Particles, equal to the number of cells
    #[arg(long = "N", default_value_t = 4)]
    pub n: usize,
    /// Sub-chain intervals per pumping step in the oracle
    #[arg(long = "m-per-step", default_value_t = 64)]
    pub m_per_step: usize,
}

pub fn manybody(cfg: &RunConfig, args: &ManyBodyArgs) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    let spec = FilledBandSpec::new(model.clone(), cfg.band, args.n, args.m_per_step)?;
    let chain = build_chain(&model, cfg.band, cfg.m)?;
    let gamma_g = chain_phase(&chain)?.gamma;
    let formula = filled_band_phase(gamma_g, args.n);
    let oracle = if args.n <= MAX_ORACLE_PARTICLES {
        Some(slater_cycle_oracle(&spec)?)
    } else {
        None
    };
    let difference = oracle.map(|o| o.distance(formula));
    let pass = difference.is_none_or(|d| d < MANYBODY_TOL);
    let status = match difference {
        None => "NO_ORACLE",
        Some(_) if pass => "PASS",
        Some(_) => "FAIL",
    };
    let table = Table::record(
        &["N", "gamma_g", "formula", "oracle", "difference", "status"],
        vec![
            args.n.into(),
            angle(Some(gamma_g)),
            angle(Some(formula)),
            angle(oracle),
            Field::opt(difference),
            status.into(),
        ],
    );
    write(cfg, &table)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::violation(format!(
            "oracle and formula differ by {:e}",
            difference.unwrap_or(f64::NAN)
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RampArg {
    Linear,
    Smooth,
}

#[derive(Debug, Clone, Args)]
pub struct AdiabaticArgs {
    /// Sweep times (comma separated)
    #[arg(long = "T", value_delimiter = ',', default_value = "200,400,800")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = RampArg::Linear)]
    pub ramp: RampArg,
}

pub fn adiabatic(cfg: &RunConfig, args: &AdiabaticArgs) -> Result<(), CliError> {
    if args.t.is_empty() {
        return Err(CliError::usage("--T needs at least one sweep time"));
    }
    let model = cfg.build_model()?;
    let reference = chain_phase(&build_chain(&model, cfg.band, cfg.m)?)?.gamma;
    let ramp = match args.ramp {
        RampArg::Linear => Ramp::Linear,
        RampArg::Smooth => Ramp::Smooth,
    };
    let drives: Vec<DriveSpec> = args
        .t
        .iter()
        .map(|&t| Ok(DriveSpec::new(model.clone(), cfg.band, t, args.dt)?.with_ramp(ramp)))
        .collect::<Result<_, Error>>()?;
    let results: Vec<(Angle, f64, f64)> = drives
        .par_iter()
        .map(|drive| {
            let traj = evolve(drive)?;
            let phase = geometric_phase_from_trajectory(&traj)?;
            Ok((
                phase.gamma,
                adiabatic_fidelity(drive, &traj)?,
                traj.min_gap.unwrap_or(f64::NAN),
            ))
        })
        .collect::<Result<_, Error>>()?;

    let mut table = Table::new(&[
        "T",
        "steps",
        "gamma_adiabatic",
        "gamma_g",
        "deviation",
        "fidelity",
        "min_gap",
    ]);
    let mut deviations = Vec::new();
    for (drive, (gamma, fidelity, gap)) in drives.iter().zip(results) {
        let deviation = gamma.distance(reference);
        deviations.push(deviation);
        table.push(vec![
            drive.sweep_time.into(),
            drive.steps.into(),
            angle(Some(gamma)),
            angle(Some(reference)),
            deviation.into(),
            fidelity.into(),
            gap.into(),
        ]);
    }
    write(cfg, &table)?;
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let last = *deviations.last().unwrap();
    if monotone && last < ADIABATIC_TOL {
        Ok(())
    } else {
        Err(CliError::violation(format!(
            "deviations {deviations:?} are not nonincreasing or the last exceeds {ADIABATIC_TOL}"
        )))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ObcArgs {
    #[arg(long, default_value_t = 40)]
    pub cells: usize,
}

pub fn obc(cfg: &RunConfig, args: &ObcArgs) -> Result<(), CliError> {
    if cfg.model != ModelKind::Ssh {
        return Err(CliError::usage("obc is defined for the SSH model only"));
    }
    if args.cells == 0 || args.cells > MAX_OBC_CELLS {
        return Err(CliError::usage(format!("--cells must be in 1..={MAX_OBC_CELLS}")));
    }
    let model = cfg.build_model()?;
    let BlochModel::Ssh(ssh) = &model else {
        unreachable!("checked above")
    };
    let h = ssh_obc_hamiltonian(ssh, args.cells)?;
    let spectrum: Vec<f64> = herm_eig_n(&h, JacobiOptions::default())?
        .into_iter()
        .map(|p| p.energy)
        .collect();
    let threshold = 1e-3 * ssh.v.abs().max(ssh.w.abs());
    let zero_modes = zero_mode_count(&spectrum, threshold)?;
    let smallest = spectrum.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);

    let (gamma_g, status) = match build_chain(&model, cfg.band, cfg.m) {
        Ok(chain) => {
            let r = report_chain(&chain)?;
            (r.gamma_g, r.status)
        }
        Err(Error::GapClosure { .. }) => (None, "GAP_CLOSURE"),
        Err(e) => return Err(e.into()),
    };
    let table = Table::record(
        &[
            "cells",
            "v",
            "w",
            "threshold",
            "zero_modes",
            "e_min",
            "e_max",
            "smallest_abs",
            "gamma_g",
            "pi_units",
            "status",
        ],
        vec![
            args.cells.into(),
            ssh.v.into(),
            ssh.w.into(),
            threshold.into(),
            zero_modes.into(),
            spectrum[0].into(),
            spectrum[spectrum.len() - 1].into(),
            smallest.into(),
            angle(gamma_g),
            pi_units(gamma_g),
            status.into(),
        ],
    );
    write(cfg, &table)
}
