//! Time evolution of one conserved wave-vector sector under a uniform field.
//!
//! The field shifts the wave vector as `k0 + alpha(t)`; a full sweep moves
//! `alpha` from `0` to `2 pi / a`. The state is integrated with RK4 and the
//! geometric phase is read off the stored trajectory as the total phase minus
//! the dynamical phase.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::models::{band_gap, check_band, BlochModel};
use crate::numerics::{inner, norm, wrap_angle, HermitianMatrix, C64};
use crate::phase::{pancharatnam_total, ChainOptions, PhaseKind, PhaseResult};

/// Per-step norm deviation (before renormalization) that aborts a run.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

/// Largest allowed `spectral radius * dt`.
pub const MAX_STEP_PHASE: f64 = 0.1;

/// Samples of `alpha` used for the gap and step-size checks.
pub const GAP_SAMPLES: usize = 256;

/// Minimum `|<psi(0)|psi(T)>|` for phase extraction.
pub const MIN_RETURN_OVERLAP: f64 = 1e-6;

/// Shape of `alpha(t) = (2 pi / a) r(t / T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ramp {
    #[default]
    Linear,
    /// `u - sin(2 pi u) / (2 pi)`: starts and stops with zero velocity.
    Smooth,
    /// `alpha = 0` throughout.
    Frozen,
}

impl Ramp {
    pub fn profile(self, u: f64) -> f64 {
        match self {
            Ramp::Linear => u,
            Ramp::Smooth => u - (TAU * u).sin() / TAU,
            Ramp::Frozen => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    pub model: BlochModel,
    pub band: usize,
    pub k0: f64,
    pub sweep_time: f64,
    pub steps: usize,
    pub ramp: Ramp,
}

impl DriveSpec {
    /// Linear sweep from `k0 = 0` with `steps = ceil(T / dt)`.
    pub fn new(model: BlochModel, band: usize, sweep_time: f64, dt: f64) -> Result<Self> {
        if !(sweep_time.is_finite() && sweep_time > 0.0 && dt > 0.0) {
            return Err(Error::InvalidInput("sweep time and dt must be positive".into()));
        }
        let steps = (sweep_time / dt).ceil().max(1.0) as usize;
        let spec = Self {
            model,
            band,
            k0: 0.0,
            sweep_time,
            steps,
            ramp: Ramp::Linear,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_ramp(mut self, ramp: Ramp) -> Self {
        self.ramp = ramp;
        self
    }

    fn validate(&self) -> Result<()> {
        check_band(&self.model, self.band)?;
        if !(self.sweep_time.is_finite() && self.sweep_time > 0.0) {
            return Err(Error::InvalidInput("sweep time must be positive".into()));
        }
        if self.steps == 0 {
            return Err(Error::InvalidInput("steps must be positive".into()));
        }
        if !self.k0.is_finite() {
            return Err(Error::InvalidInput("k0 must be finite".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.sweep_time / self.steps as f64
    }

    pub fn alpha(&self, t: f64) -> f64 {
        self.model.zone_length() * self.ramp.profile(t / self.sweep_time)
    }

    /// Field equivalent to a linear sweep, `alpha-dot = E` with `e = hbar = 1`.
    pub fn field_strength(&self) -> f64 {
        self.model.zone_length() / self.sweep_time
    }

    /// Period `tau` for a ring of `cells` cells under the equivalent field.
    pub fn tau(&self, cells: usize) -> f64 {
        tau_period(self.field_strength(), cells as f64 * self.model.lattice_constant())
    }

    fn hamiltonian(&self, t: f64) -> HermitianMatrix {
        self.model.bloch_matrix(self.k0 + self.alpha(t))
    }
}

/// `2 pi / (E L)`: the time for the field to advance `k` by `2 pi / L`.
pub fn tau_period(field: f64, length: f64) -> f64 {
    TAU / (field * length)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    /// `<psi(t_j)|H(t_j)|psi(t_j)>`.
    pub energies: Vec<f64>,
    pub min_gap: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `psi_j -> e^{i L_j} psi_j`.
    pub fn with_gauge(&self, lambda: impl Fn(f64) -> f64) -> Trajectory {
        let mut out = self.clone();
        for (state, &t) in out.states.iter_mut().zip(&self.times) {
            let phase = C64::cis(lambda(t));
            state.iter_mut().for_each(|c| *c *= phase);
        }
        out
    }
}

/// Integrates `i psi' = H(k0 + alpha(t)) psi` from the band eigenvector at
/// `k0`.
pub fn evolve(drive: &DriveSpec) -> Result<Trajectory> {
    drive.validate()?;
    let dt = drive.dt();
    let (min_gap, radius) = scan_sweep(drive)?;
    if radius * dt > MAX_STEP_PHASE {
        return Err(Error::StepTooLarge(radius * dt));
    }

    let start = drive.model.eigenpairs(drive.k0)?;
    let mut psi = start[drive.band].vector.clone();
    let mut times = Vec::with_capacity(drive.steps + 1);
    let mut states = Vec::with_capacity(drive.steps + 1);
    let mut energies = Vec::with_capacity(drive.steps + 1);

    let mut h = drive.hamiltonian(0.0);
    for j in 0..=drive.steps {
        let t = drive.sweep_time * j as f64 / drive.steps as f64;
        times.push(t);
        energies.push(h.expectation(&psi));
        states.push(psi.clone());
        if j == drive.steps {
            break;
        }
        let mid = drive.hamiltonian(t + 0.5 * dt);
        let end = drive.hamiltonian(t + dt);
        psi = rk4_step(&h, &mid, &end, &psi, dt)?;
        h = end;
    }
    Ok(Trajectory {
        times,
        states,
        energies,
        min_gap: Some(min_gap),
    })
}

/// Minimum gap and maximum spectral radius over the swept `alpha` values.
fn scan_sweep(drive: &DriveSpec) -> Result<(f64, f64)> {
    let floor = ChainOptions::default().gap_floor;
    let mut min_gap = f64::INFINITY;
    let mut radius: f64 = 0.0;
    for s in 0..=GAP_SAMPLES {
        let t = drive.sweep_time * s as f64 / GAP_SAMPLES as f64;
        let kappa = drive.k0 + drive.alpha(t);
        let energies = drive.model.energies(kappa).map_err(|e| match e {
            Error::DegenerateSpectrum(split) => Error::GapClosure { min_gap: split, kappa },
            other => other,
        })?;
        let gap = band_gap(&energies, drive.band);
        if gap < floor {
            return Err(Error::GapClosure { min_gap: gap, kappa });
        }
        min_gap = min_gap.min(gap);
        radius = energies.iter().fold(radius, |r, e| r.max(e.abs()));
    }
    Ok((min_gap, radius))
}

fn rk4_step(
    h0: &HermitianMatrix,
    hm: &HermitianMatrix,
    h1: &HermitianMatrix,
    psi: &[C64],
    dt: f64,
) -> Result<Vec<C64>> {
    let minus_i = C64::new(0.0, -1.0);
    let deriv =
        |h: &HermitianMatrix, v: &[C64]| -> Vec<C64> { h.mul_vec(v).into_iter().map(|c| c * minus_i).collect() };
    let axpy = |v: &[C64], k: &[C64], s: f64| -> Vec<C64> { v.iter().zip(k).map(|(a, b)| a + b * s).collect() };

    let k1 = deriv(h0, psi);
    let k2 = deriv(hm, &axpy(psi, &k1, 0.5 * dt));
    let k3 = deriv(hm, &axpy(psi, &k2, 0.5 * dt));
    let k4 = deriv(h1, &axpy(psi, &k3, dt));
    let mut next: Vec<C64> = (0..psi.len())
        .map(|i| psi[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
        .collect();
    let n = norm(&next);
    if (n - 1.0).abs() > NORM_DRIFT_TOL {
        return Err(Error::NormDrift((n - 1.0).abs()));
    }
    next.iter_mut().for_each(|c| *c /= n);
    Ok(next)
}

/// How the connection integral `i \int <psi|d psi/dt> dt` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectionQuadrature {
    /// `-sum_j Arg <psi_j|psi_{j+1}>`. Exact for stationary states and for
    /// any sampled gauge.
    #[default]
    OverlapPhase,
    /// Trapezoid rule on `Re i <psi_j|psi-dot_j>` with central differences,
    /// one-sided at the ends.
    CentralDifference,
}

/// Geometric phase of a trajectory with the default quadrature.
pub fn geometric_phase_from_trajectory(traj: &Trajectory) -> Result<PhaseResult> {
    geometric_phase_with(traj, ConnectionQuadrature::default())
}

pub fn geometric_phase_with(traj: &Trajectory, quadrature: ConnectionQuadrature) -> Result<PhaseResult> {
    let n = traj.len();
    if n < 2 || traj.times.len() != n {
        return Err(Error::InvalidInput("trajectory needs at least two samples".into()));
    }
    let (first, last) = (&traj.states[0], &traj.states[n - 1]);
    let ret = inner(first, last).norm();
    if ret <= MIN_RETURN_OVERLAP {
        return Err(Error::OrthogonalStates(ret));
    }
    let total = pancharatnam_total(first, last)?;
    let min_overlap = traj
        .states
        .windows(2)
        .map(|w| inner(&w[0], &w[1]).norm())
        .fold(f64::INFINITY, f64::min);

    let connection = match quadrature {
        ConnectionQuadrature::OverlapPhase => -traj.states.windows(2).map(|w| inner(&w[0], &w[1]).arg()).sum::<f64>(),
        ConnectionQuadrature::CentralDifference => {
            let integrand: Vec<f64> = (0..n)
                .map(|j| {
                    let (lo, hi) = (j.saturating_sub(1), (j + 1).min(n - 1));
                    let span = traj.times[hi] - traj.times[lo];
                    let diff: Vec<C64> = traj.states[hi]
                        .iter()
                        .zip(&traj.states[lo])
                        .map(|(a, b)| (a - b) / span)
                        .collect();
                    (C64::i() * inner(&traj.states[j], &diff)).re
                })
                .collect();
            (0..n - 1)
                .map(|j| 0.5 * (integrand[j] + integrand[j + 1]) * (traj.times[j + 1] - traj.times[j]))
                .sum()
        }
    };
    let raw = total.value() + connection;
    Ok(PhaseResult {
        gamma: wrap_angle(raw),
        raw,
        kind: PhaseKind::Adiabatic,
        m: n - 1,
        min_overlap,
        min_gap: traj.min_gap,
        convention: match quadrature {
            ConnectionQuadrature::OverlapPhase => "overlap-phase connection".into(),
            ConnectionQuadrature::CentralDifference => "central-difference connection".into(),
        },
    })
}

/// `|<u_band(k0 + alpha(T))|psi(T)>|^2`.
pub fn adiabatic_fidelity(drive: &DriveSpec, traj: &Trajectory) -> Result<f64> {
    let last = traj
        .states
        .last()
        .ok_or_else(|| Error::InvalidInput("empty trajectory".into()))?;
    let pairs = drive.model.eigenpairs(drive.k0 + drive.alpha(drive.sweep_time))?;
    Ok(inner(&pairs[drive.band].vector, last).norm_sqr())
}

/// Evolves and extracts the phase in one call.
pub fn adiabatic_phase(drive: &DriveSpec) -> Result<(Trajectory, PhaseResult)> {
    let traj = evolve(drive)?;
    let phase = geometric_phase_from_trajectory(&traj)?;
    Ok((traj, phase))
}
