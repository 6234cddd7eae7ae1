//! Filled-band phase of `N` non-interacting fermions on `N` cells.
//!
//! Pumping every occupied Bloch state by one step `2 pi / (N a)` maps the
//! occupied set onto itself with the labels cyclically shifted. The
//! geometric phase of the Slater determinant is therefore the band phase
//! plus the sign of an `N`-cycle, `(-1)^(N-1)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{band_gap, check_band, BlochModel};
use crate::numerics::{inner, wrap_angle, Angle, ComplexMatrix, C64};
use crate::phase::{pancharatnam_zak, ChainOptions, PhaseKind, PhaseResult, MIN_CHAIN_INTERVALS};

/// Largest particle number the determinant oracle accepts.
pub const MAX_ORACLE_PARTICLES: usize = 8;

/// Below this `|det|` the overlap matrix is treated as singular.
pub const SINGULAR_DET: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FilledBandSpec {
    pub model: BlochModel,
    pub band: usize,
    /// Number of particles, equal to the number of cells.
    pub n: usize,
    /// Sub-chain intervals per pumping step.
    pub m_per_step: usize,
}

impl FilledBandSpec {
    pub fn new(model: BlochModel, band: usize, n: usize, m_per_step: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("filled band needs N >= 1".into()));
        }
        if m_per_step == 0 {
            return Err(Error::InvalidInput("M_per_step must be positive".into()));
        }
        check_band(&model, band)?;
        Ok(Self {
            model,
            band,
            n,
            m_per_step,
        })
    }

    /// `k_l = 2 pi l / (N a)`.
    pub fn wave_vector(&self, l: usize) -> f64 {
        self.model.zone_length() * l as f64 / self.n as f64
    }
}

/// `wrap(gamma_g + ((N - 1) mod 2) pi)`.
pub fn filled_band_phase(gamma_g: Angle, n: usize) -> Angle {
    let statistics = if n.saturating_sub(1) % 2 == 1 { PI } else { 0.0 };
    wrap_angle(gamma_g.value() + statistics)
}

/// Single-particle phase from the Bargmann chain and the filled-band phase
/// derived from it. The chain uses `max(N * M_per_step, 8)` intervals.
pub fn many_body_phase(spec: &FilledBandSpec) -> Result<(PhaseResult, PhaseResult)> {
    let m = (spec.n * spec.m_per_step).max(MIN_CHAIN_INTERVALS);
    let single = pancharatnam_zak(&spec.model, spec.band, m)?;
    let many = PhaseResult {
        gamma: filled_band_phase(single.gamma, spec.n),
        raw: single.raw + if (spec.n - 1) % 2 == 1 { PI } else { 0.0 },
        kind: PhaseKind::ManyBody,
        convention: format!("filled band, N = {}", spec.n),
        ..single.clone()
    };
    Ok((single, many))
}

/// Determinant oracle for the filled-band phase.
pub fn slater_cycle_oracle(spec: &FilledBandSpec) -> Result<Angle> {
    slater_cycle_oracle_with_gauge(spec, &vec![0.0; spec.n])
}

/// As [`slater_cycle_oracle`], with occupied state `l` multiplied by
/// `e^{i theta_l}` before anything else happens.
pub fn slater_cycle_oracle_with_gauge(spec: &FilledBandSpec, theta: &[f64]) -> Result<Angle> {
    let n = spec.n;
    if n > MAX_ORACLE_PARTICLES {
        return Err(Error::InvalidInput(format!(
            "oracle limited to N <= {MAX_ORACLE_PARTICLES}, got {n}"
        )));
    }
    if theta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: theta.len(),
        });
    }
    let opts = ChainOptions::default();

    let occupied: Vec<Vec<C64>> = (0..n)
        .map(|l| {
            let u = band_state(spec, spec.wave_vector(l), opts)?;
            let phase = C64::cis(theta[l]);
            Ok(u.into_iter().map(|c| c * phase).collect())
        })
        .collect::<Result<_>>()?;

    let transported: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|l| transport(spec, &occupied[l], l, opts))
        .collect::<Result<_>>()?;

    let orbitals = spec.model.band_count();
    let dim = n * orbitals;
    let a = spec.model.lattice_constant();
    let scale = 1.0 / (n as f64).sqrt();
    let embed = |k: f64, u: &[C64]| -> Vec<C64> {
        let mut out = Vec::with_capacity(dim);
        for cell in 0..n {
            let bloch = C64::cis(k * cell as f64 * a) * scale;
            out.extend(u.iter().map(|c| c * bloch));
        }
        out
    };
    let initial: Vec<Vec<C64>> = (0..n).map(|l| embed(spec.wave_vector(l), &occupied[l])).collect();
    let pumped: Vec<Vec<C64>> = (0..n)
        .map(|l| embed(spec.wave_vector(l + 1), &transported[l]))
        .collect();

    let overlap = ComplexMatrix::from_fn(n, |i, j| inner(&initial[i], &pumped[j]));
    let det = overlap.determinant();
    if det.norm() < SINGULAR_DET {
        return Err(Error::SingularOverlapMatrix(det.norm()));
    }
    Ok(Angle::arg(det))
}

fn band_state(spec: &FilledBandSpec, kappa: f64, opts: ChainOptions) -> Result<Vec<C64>> {
    let pairs = spec.model.eigenpairs(kappa).map_err(|e| match e {
        Error::DegenerateSpectrum(split) => Error::GapClosure { min_gap: split, kappa },
        other => other,
    })?;
    let energies: Vec<f64> = pairs.iter().map(|p| p.energy).collect();
    let gap = band_gap(&energies, spec.band);
    if gap < opts.gap_floor {
        return Err(Error::GapClosure { min_gap: gap, kappa });
    }
    Ok(pairs.into_iter().nth(spec.band).expect("band index checked").vector)
}

/// Parallel transport of `start` from `k_l` to `k_{l+1}` through the band's
/// eigenvectors, rotating only by the phase of each successive overlap.
fn transport(spec: &FilledBandSpec, start: &[C64], l: usize, opts: ChainOptions) -> Result<Vec<C64>> {
    let k0 = spec.wave_vector(l);
    let step = spec.model.zone_length() / spec.n as f64;
    let mut state = start.to_vec();
    for j in 1..=spec.m_per_step {
        let kappa = if j == spec.m_per_step && l + 1 == spec.n {
            TAU / spec.model.lattice_constant()
        } else {
            k0 + step * j as f64 / spec.m_per_step as f64
        };
        let next = band_state(spec, kappa, opts)?;
        let ov = inner(&next, &state);
        if ov.norm() <= opts.overlap_floor {
            return Err(Error::OverlapTooSmall {
                index: l * spec.m_per_step + j - 1,
                overlap: ov.norm(),
            });
        }
        let phase = ov / ov.norm();
        state = next.into_iter().map(|c| c * phase).collect();
    }
    Ok(state)
}
