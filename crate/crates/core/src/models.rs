//! Bloch Hamiltonian families `H(kappa)` for the SSH chain, the Kitaev chain
//! (Majorana basis) and a 1D continuum crystal in a plane-wave basis, plus the
//! open-boundary SSH chain.
//!
//! Units: hbar = e = 1. The lattice constant `a` and the continuum mass `mu`
//! default to 1.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{herm_eig2, herm_eig_n, herm_eigvals2, Eigenpair, HermitianMatrix, JacobiOptions, C64};

/// Plane-wave cutoff used when none is given: harmonics `-16..=16`.
pub const DEFAULT_N_MAX: usize = 16;

/// How SSH orbital amplitudes are embedded in real space.
///
/// Both conventions share the same Bloch matrix
/// `h(kappa) = -v e^{i kappa b} - w e^{i kappa (b - a)}`, which depends on the
/// intracell separation `b` only. They differ in where the two orbitals sit:
/// `CellPeriodic` places them at the absolute positions `r_alpha` and
/// `r_alpha + b`, `LatticePeriodic` measures positions from the first orbital
/// (`0` and `b`). The embedding fixes the periodic-gauge image used by the Zak
/// phase and nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisConvention {
    CellPeriodic,
    LatticePeriodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SshModel {
    pub v: f64,
    pub w: f64,
    pub a: f64,
    pub b: f64,
    pub r_alpha: f64,
    pub convention: BasisConvention,
}

impl SshModel {
    pub fn new(v: f64, w: f64, a: f64, b: f64, r_alpha: f64, convention: BasisConvention) -> Result<Self> {
        if ![v, w, a, b, r_alpha].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("SSH parameters must be finite".into()));
        }
        if a <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "lattice constant must be positive, got {a}"
            )));
        }
        if !(b > 0.0 && b < a) {
            return Err(Error::InvalidInput(format!(
                "intracell separation b = {b} must lie in (0, a)"
            )));
        }
        if v < 0.0 || w < 0.0 || (v == 0.0 && w == 0.0) {
            return Err(Error::InvalidInput(
                "hoppings must be non-negative and not both zero".into(),
            ));
        }
        Ok(Self {
            v,
            w,
            a,
            b,
            r_alpha,
            convention,
        })
    }

    /// `a = 1`, `r_alpha = 0`, cell-periodic embedding.
    pub fn with_hoppings(v: f64, w: f64, b: f64) -> Result<Self> {
        Self::new(v, w, 1.0, b, 0.0, BasisConvention::CellPeriodic)
    }

    pub fn off_diagonal(&self, kappa: f64) -> C64 {
        -self.v * C64::cis(kappa * self.b) - self.w * C64::cis(kappa * (self.b - self.a))
    }

    /// `E(kappa) = sqrt(v^2 + w^2 + 2 v w cos(kappa a))`.
    pub fn band_energy(&self, kappa: f64) -> f64 {
        (self.v * self.v + self.w * self.w + 2.0 * self.v * self.w * (kappa * self.a).cos())
            .max(0.0)
            .sqrt()
    }

    pub fn orbital_positions(&self) -> [f64; 2] {
        match self.convention {
            BasisConvention::CellPeriodic => [self.r_alpha, self.r_alpha + self.b],
            BasisConvention::LatticePeriodic => [0.0, self.b],
        }
    }

    /// `b = a/2` sits between the two regimes in which the phase is known.
    pub fn on_boundary(&self) -> bool {
        (self.b - 0.5 * self.a).abs() <= 1e-12 * self.a
    }
}

/// Kitaev chain in the Majorana basis. `delta == 0` is accepted (flagged by
/// [`KitaevModel::is_pairing_free`]) even though the gap then closes.
#[derive(Debug, Clone, PartialEq)]
pub struct KitaevModel {
    pub eps: f64,
    pub j: f64,
    pub delta: f64,
    pub a: f64,
}

impl KitaevModel {
    pub fn new(eps: f64, j: f64, delta: f64, a: f64) -> Result<Self> {
        if ![eps, j, delta, a].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("Kitaev parameters must be finite".into()));
        }
        if a <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "lattice constant must be positive, got {a}"
            )));
        }
        Ok(Self { eps, j, delta, a })
    }

    pub fn is_pairing_free(&self) -> bool {
        self.delta == 0.0
    }

    /// `X(kappa) = (delta/2) sin(kappa a)`, `Y(kappa) = eps/4 - (J/2) cos(kappa a)`.
    pub fn xy(&self, kappa: f64) -> (f64, f64) {
        let ka = kappa * self.a;
        (0.5 * self.delta * ka.sin(), 0.25 * self.eps - 0.5 * self.j * ka.cos())
    }

    pub fn band_energy(&self, kappa: f64) -> f64 {
        let (x, y) = self.xy(kappa);
        x.hypot(y)
    }
}

/// A particle in the periodic potential `V(x) = sum_g V_g e^{i g (2 pi / a) x}`
/// expanded in plane waves `e^{i G_m x}`, `G_m = 2 pi m / a`, `|m| <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumModel {
    pub a: f64,
    pub mu: f64,
    pub n_max: usize,
    fourier: BTreeMap<i64, C64>,
}

impl ContinuumModel {
    /// Each supplied `(g, V_g)` also fixes `V_{-g} = conj(V_g)`, so `V(x)` is
    /// real. `V_0` must be real. Conflicting entries are rejected.
    pub fn new(a: f64, mu: f64, n_max: usize, fourier: &[(i64, C64)]) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidInput("continuum a and mu must be positive".into()));
        }
        if n_max == 0 {
            return Err(Error::InvalidInput("plane-wave cutoff n_max must be positive".into()));
        }
        let mut map: BTreeMap<i64, C64> = BTreeMap::new();
        for &(g, vg) in fourier {
            if !vg.re.is_finite() || !vg.im.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite Fourier coefficient for g = {g}"
                )));
            }
            if g.unsigned_abs() as usize > 2 * n_max {
                return Err(Error::InvalidInput(format!(
                    "harmonic g = {g} exceeds 2 * n_max = {}",
                    2 * n_max
                )));
            }
            if g == 0 && vg.im.abs() > 1e-12 {
                return Err(Error::InvalidInput("V_0 must be real".into()));
            }
            for (key, val) in [(g, vg), (-g, vg.conj())] {
                if let Some(prev) = map.insert(key, val) {
                    if (prev - val).norm() > 1e-12 {
                        return Err(Error::InvalidInput(format!(
                            "conflicting Fourier coefficients for g = {key}"
                        )));
                    }
                }
            }
        }
        if let Some(v0) = map.get_mut(&0) {
            v0.im = 0.0;
        }
        Ok(Self {
            a,
            mu,
            n_max,
            fourier: map,
        })
    }

    /// `V(x) = v0 cos(2 pi x / a)`, i.e. `V_{+1} = V_{-1} = v0/2`.
    pub fn single_harmonic(a: f64, mu: f64, n_max: usize, v0: f64) -> Result<Self> {
        Self::new(a, mu, n_max, &[(1, C64::new(0.5 * v0, 0.0))])
    }

    pub fn fourier(&self, g: i64) -> C64 {
        self.fourier.get(&g).copied().unwrap_or_default()
    }

    pub fn fourier_coefficients(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.fourier.iter().map(|(&g, &v)| (g, v))
    }

    pub fn basis_size(&self) -> usize {
        2 * self.n_max + 1
    }

    /// True when every `V_g` is real, i.e. `V(-x) = V(x)`.
    pub fn is_inversion_symmetric(&self) -> bool {
        self.fourier.values().all(|v| v.im.abs() <= 1e-12 * v.norm().max(1.0))
    }
}

/// Position-space embedding of the basis states, which fixes the image of a
/// cell-periodic state under `e^{-i (2 pi / a) x}` (the periodic gauge).
#[derive(Debug, Clone, PartialEq)]
pub enum Embedding {
    /// Localized orbitals at the given positions within a cell of length `a`.
    Orbitals { a: f64, positions: Vec<f64> },
    /// Plane waves `e^{i G_m x}` for `m = -n_max..=n_max`.
    PlaneWaves { n_max: usize },
}

impl Embedding {
    /// Applies `e^{-i (2 pi / a) x}` to the cell-periodic amplitudes `u`.
    ///
    /// For plane waves this shifts `G_m -> G_{m-1}`; the component pushed past
    /// the cutoff is dropped.
    pub fn periodic_image(&self, u: &[C64]) -> Vec<C64> {
        match self {
            Embedding::Orbitals { a, positions } => u
                .iter()
                .zip(positions)
                .map(|(c, &x)| c * C64::cis(-TAU * x / a))
                .collect(),
            Embedding::PlaneWaves { .. } => {
                let mut out = vec![C64::new(0.0, 0.0); u.len()];
                out[..u.len() - 1].copy_from_slice(&u[1..]);
                out
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Embedding::Orbitals { a, positions } => {
                let pos: Vec<String> = positions.iter().map(|x| format!("{}", x / a)).collect();
                format!("orbitals at [{}]a", pos.join(", "))
            }
            Embedding::PlaneWaves { n_max } => format!("plane waves |m| <= {n_max}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlochModel {
    Ssh(SshModel),
    Kitaev(KitaevModel),
    Continuum(ContinuumModel),
}

impl From<SshModel> for BlochModel {
    fn from(m: SshModel) -> Self {
        BlochModel::Ssh(m)
    }
}

impl From<KitaevModel> for BlochModel {
    fn from(m: KitaevModel) -> Self {
        BlochModel::Kitaev(m)
    }
}

impl From<ContinuumModel> for BlochModel {
    fn from(m: ContinuumModel) -> Self {
        BlochModel::Continuum(m)
    }
}

impl BlochModel {
    pub fn name(&self) -> &'static str {
        match self {
            BlochModel::Ssh(_) => "ssh",
            BlochModel::Kitaev(_) => "kitaev",
            BlochModel::Continuum(_) => "continuum",
        }
    }

    pub fn lattice_constant(&self) -> f64 {
        match self {
            BlochModel::Ssh(m) => m.a,
            BlochModel::Kitaev(m) => m.a,
            BlochModel::Continuum(m) => m.a,
        }
    }

    /// Length of the Brillouin zone, `2 pi / a`.
    pub fn zone_length(&self) -> f64 {
        TAU / self.lattice_constant()
    }

    pub fn band_count(&self) -> usize {
        match self {
            BlochModel::Ssh(_) | BlochModel::Kitaev(_) => 2,
            BlochModel::Continuum(m) => m.basis_size(),
        }
    }

    pub fn bloch_matrix(&self, kappa: f64) -> HermitianMatrix {
        match self {
            BlochModel::Ssh(m) => two_band(m.off_diagonal(kappa)),
            BlochModel::Kitaev(m) => {
                let (x, y) = m.xy(kappa);
                two_band(C64::new(x, y))
            }
            BlochModel::Continuum(m) => {
                let n = m.n_max as i64;
                let g = TAU / m.a;
                HermitianMatrix::from_upper(m.basis_size(), |i, j| {
                    let mi = i as i64 - n;
                    let mj = j as i64 - n;
                    let mut z = m.fourier(mi - mj);
                    if i == j {
                        let q = g * mi as f64 + kappa;
                        z += q * q / (2.0 * m.mu);
                    }
                    z
                })
            }
        }
    }

    /// Ascending eigenpairs of `H(kappa)`. Two-band models use the closed form
    /// and fail with `DegenerateSpectrum` at band touchings.
    pub fn eigenpairs(&self, kappa: f64) -> Result<Vec<Eigenpair>> {
        let h = self.bloch_matrix(kappa);
        match self {
            BlochModel::Ssh(_) | BlochModel::Kitaev(_) => {
                let (lo, hi) = herm_eig2(&h)?;
                Ok(vec![lo, hi])
            }
            BlochModel::Continuum(_) => herm_eig_n(&h, JacobiOptions::default()),
        }
    }

    /// Ascending band energies at `kappa`; never fails for two-band models.
    pub fn energies(&self, kappa: f64) -> Result<Vec<f64>> {
        match self {
            BlochModel::Ssh(_) | BlochModel::Kitaev(_) => Ok(herm_eigvals2(&self.bloch_matrix(kappa)).to_vec()),
            BlochModel::Continuum(_) => Ok(self.eigenpairs(kappa)?.into_iter().map(|p| p.energy).collect()),
        }
    }

    pub fn embedding(&self) -> Embedding {
        match self {
            BlochModel::Ssh(m) => Embedding::Orbitals {
                a: m.a,
                positions: m.orbital_positions().to_vec(),
            },
            BlochModel::Kitaev(m) => Embedding::Orbitals {
                a: m.a,
                positions: vec![0.0, 0.0],
            },
            BlochModel::Continuum(m) => Embedding::PlaneWaves { n_max: m.n_max },
        }
    }

    /// SSH at `b = a/2`.
    pub fn on_boundary(&self) -> bool {
        matches!(self, BlochModel::Ssh(m) if m.on_boundary())
    }

    /// Whether [`translate`] acts non-trivially on this model.
    pub fn supports_translation(&self) -> bool {
        !matches!(self, BlochModel::Kitaev(_))
    }

    pub fn translate(&self, d: f64) -> BlochModel {
        match self {
            BlochModel::Ssh(m) => BlochModel::Ssh(SshModel {
                r_alpha: m.r_alpha + d,
                ..m.clone()
            }),
            // Single-site Majorana cell: no intracell offsets to move.
            BlochModel::Kitaev(m) => BlochModel::Kitaev(m.clone()),
            BlochModel::Continuum(m) => {
                let g = TAU / m.a;
                let fourier = m
                    .fourier
                    .iter()
                    .map(|(&h, &vg)| (h, vg * C64::cis(-(h as f64) * g * d)))
                    .collect();
                BlochModel::Continuum(ContinuumModel { fourier, ..m.clone() })
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BlochModel::Ssh(m) => format!(
                "ssh v={} w={} a={} b={} r_alpha={} convention={}",
                m.v,
                m.w,
                m.a,
                m.b,
                m.r_alpha,
                match m.convention {
                    BasisConvention::CellPeriodic => "cell",
                    BasisConvention::LatticePeriodic => "lattice",
                }
            ),
            BlochModel::Kitaev(m) => format!("kitaev eps={} J={} Delta={} a={}", m.eps, m.j, m.delta, m.a),
            BlochModel::Continuum(m) => {
                let terms: Vec<String> = m
                    .fourier
                    .iter()
                    .filter(|(g, _)| **g > 0)
                    .map(|(g, v)| format!("{g}:{}:{}", v.re, v.im))
                    .collect();
                format!(
                    "continuum a={} mu={} n_max={} V=[{}]",
                    m.a,
                    m.mu,
                    m.n_max,
                    terms.join(" ")
                )
            }
        }
    }
}

fn two_band(off: C64) -> HermitianMatrix {
    HermitianMatrix::from_upper(2, |i, j| if i == j { C64::new(0.0, 0.0) } else { off })
}

pub fn bloch_matrix(model: &BlochModel, kappa: f64) -> HermitianMatrix {
    model.bloch_matrix(kappa)
}

pub fn translate(model: &BlochModel, d: f64) -> BlochModel {
    model.translate(d)
}

/// Distance from `band` to its nearest neighbouring band at one `kappa`.
pub(crate) fn band_gap(energies: &[f64], band: usize) -> f64 {
    let below = band.checked_sub(1).map(|b| energies[band] - energies[b]);
    let above = energies.get(band + 1).map(|e| e - energies[band]);
    match (below, above) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => f64::INFINITY,
    }
}

/// Minimum over the grid `kappa_j = (2 pi / a) j / m`, `j = 0..=m`, of the gap
/// between `band` and its nearest neighbour. Returns the gap and where it occurs.
pub fn min_gap_location(model: &BlochModel, band: usize, m: usize) -> Result<(f64, f64)> {
    if m < 16 {
        return Err(Error::InvalidInput(format!(
            "min_gap needs at least 16 grid intervals, got {m}"
        )));
    }
    check_band(model, band)?;
    let g = model.zone_length();
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..=m {
        let kappa = g * j as f64 / m as f64;
        let gap = band_gap(&model.energies(kappa)?, band);
        if gap < best.0 {
            best = (gap, kappa);
        }
    }
    Ok(best)
}

pub fn min_gap(model: &BlochModel, band: usize, m: usize) -> Result<f64> {
    Ok(min_gap_location(model, band, m)?.0)
}

pub(crate) fn check_band(model: &BlochModel, band: usize) -> Result<()> {
    if band >= model.band_count() {
        return Err(Error::InvalidInput(format!(
            "band {band} out of range for {} bands",
            model.band_count()
        )));
    }
    Ok(())
}

/// Largest chain accepted by [`ssh_obc_hamiltonian`].
pub const MAX_OBC_CELLS: usize = 256;

/// Real-space SSH chain with open ends: sites `2m` (alpha) and `2m + 1` (beta)
/// of cell `m`, couplings alternating `-v` (intracell) and `-w` (intercell).
pub fn ssh_obc_hamiltonian(model: &SshModel, cells: usize) -> Result<HermitianMatrix> {
    if cells == 0 || cells > MAX_OBC_CELLS {
        return Err(Error::InvalidInput(format!(
            "cells must be in 1..={MAX_OBC_CELLS}, got {cells}"
        )));
    }
    let n = 2 * cells;
    Ok(HermitianMatrix::from_upper(n, |i, j| {
        if j == i + 1 {
            let hop = if i % 2 == 0 { model.v } else { model.w };
            C64::new(-hop, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Number of levels with `|E| < threshold`.
pub fn zero_mode_count(spectrum: &[f64], threshold: f64) -> Result<usize> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "zero-mode threshold must be positive, got {threshold}"
        )));
    }
    Ok(spectrum.iter().filter(|e| e.abs() < threshold).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{herm_eig_n, JacobiOptions};
    use std::f64::consts::PI;

    fn ssh(v: f64, w: f64, b: f64) -> BlochModel {
        SshModel::with_hoppings(v, w, b).unwrap().into()
    }

    fn obc_spectrum(v: f64, w: f64, cells: usize) -> Vec<f64> {
        let m = SshModel::with_hoppings(v, w, 0.3).unwrap();
        let h = ssh_obc_hamiltonian(&m, cells).unwrap();
        herm_eig_n(&h, JacobiOptions::default())
            .unwrap()
            .into_iter()
            .map(|p| p.energy)
            .collect()
    }

    #[test]
    fn ssh_off_diagonal_at_zone_centre() {
        let h = ssh(1.0, 2.0, 0.3).bloch_matrix(0.0);
        assert!((h.get(0, 1) - C64::new(-3.0, 0.0)).norm() < 1e-15);
        let e = ssh(1.0, 2.0, 0.3).energies(0.0).unwrap();
        assert!((e[0] + 3.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ssh_zone_edge_modulus() {
        for b in [0.1, 0.3, 0.5, 0.77] {
            let m = SshModel::new(1.0, 2.5, 1.0, b, 0.0, BasisConvention::LatticePeriodic).unwrap();
            let h = BlochModel::Ssh(m).bloch_matrix(PI);
            assert!((h.get(0, 1).norm() - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn kitaev_gap_closes_at_eps_2j() {
        let m = KitaevModel::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.xy(0.0), (0.0, 0.0));
        let gap = min_gap(&m.into(), 0, 64).unwrap();
        assert!(gap < 1e-12);
    }

    #[test]
    fn min_gap_examples() {
        assert!(min_gap(&ssh(1.0, 1.0, 0.3), 0, 64).unwrap() < 1e-12);
        // Dense-grid minimum of 2 sqrt(v^2 + w^2 + 2 v w cos) is 2|v - w|; with
        // E_+ - E_- that is the full splitting.
        let gap = min_gap(&ssh(1.0, 2.0, 0.3), 0, 256).unwrap();
        let brute = (0..=100_000)
            .map(|j| {
                2.0 * SshModel::with_hoppings(1.0, 2.0, 0.3)
                    .unwrap()
                    .band_energy(TAU * j as f64 / 100_000.0)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((gap - brute).abs() < 1e-9);
        assert!((gap - 2.0).abs() < 1e-12);
        assert!(min_gap(&ssh(1.0, 2.0, 0.3), 0, 8).is_err());
    }

    #[test]
    fn translate_examples() {
        let m = ssh(1.0, 2.0, 0.3);
        assert_eq!(m.translate(0.0), m);
        let c: BlochModel = ContinuumModel::single_harmonic(1.0, 1.0, 4, 2.0).unwrap().into();
        let BlochModel::Continuum(shifted) = c.translate(0.5) else {
            unreachable!()
        };
        assert!((shifted.fourier(1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((shifted.fourier(-1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let k: BlochModel = KitaevModel::new(1.0, 1.0, 1.0, 1.0).unwrap().into();
        assert_eq!(k.translate(0.3), k);
    }

    #[test]
    fn obc_single_cell() {
        let e = obc_spectrum(0.7, 1.0, 1);
        assert!((e[0] + 0.7).abs() < 1e-14 && (e[1] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn obc_dimerized_limit_has_two_exact_zero_modes() {
        let e = obc_spectrum(0.0, 1.0, 3);
        assert_eq!(e.iter().filter(|x| **x == 0.0).count(), 2);
    }

    #[test]
    fn obc_zero_modes_follow_hopping_ratio() {
        assert_eq!(zero_mode_count(&obc_spectrum(0.5, 1.0, 40), 1e-3).unwrap(), 2);
        assert_eq!(zero_mode_count(&obc_spectrum(2.0, 1.0, 40), 1e-3).unwrap(), 0);
        assert!(ssh_obc_hamiltonian(&SshModel::with_hoppings(1.0, 1.0, 0.3).unwrap(), 257).is_err());
    }

    #[test]
    fn zero_mode_count_examples() {
        assert_eq!(zero_mode_count(&[-1.0, -1e-9, 1e-8, 1.0], 1e-6).unwrap(), 2);
        assert_eq!(zero_mode_count(&[-1.0, 1.0], 1e-6).unwrap(), 0);
        assert!(zero_mode_count(&[0.0], 0.0).is_err());
    }

    #[test]
    fn free_particle_plane_waves() {
        let m: BlochModel = ContinuumModel::new(1.0, 1.0, 2, &[]).unwrap().into();
        let e = m.energies(0.0).unwrap();
        let unit = (TAU * TAU) / 2.0;
        let expected = [0.0, unit, unit, 4.0 * unit, 4.0 * unit];
        for (x, y) in e.iter().zip(expected) {
            assert!((x - y).abs() < 1e-10 * unit);
        }
    }

    #[test]
    fn continuum_construction_enforces_real_potential() {
        let m = ContinuumModel::new(1.0, 1.0, 4, &[(2, C64::new(0.3, 0.4))]).unwrap();
        assert_eq!(m.fourier(-2), C64::new(0.3, -0.4));
        assert!(!m.is_inversion_symmetric());
        assert!(ContinuumModel::new(1.0, 1.0, 4, &[(2, C64::new(0.3, 0.4)), (-2, C64::new(1.0, 0.0))]).is_err());
        assert!(ContinuumModel::new(1.0, 1.0, 4, &[(0, C64::new(0.3, 0.4))]).is_err());
        assert!(ContinuumModel::new(1.0, 1.0, 2, &[(5, C64::new(0.3, 0.0))]).is_err());
    }

    #[test]
    fn continuum_parity_commutes_at_zone_centre() {
        let m: BlochModel = ContinuumModel::new(1.0, 1.0, 5, &[(1, C64::new(1.2, 0.0)), (3, C64::new(-0.4, 0.0))])
            .unwrap()
            .into();
        let h = m.bloch_matrix(0.0);
        let n = h.dim();
        for i in 0..n {
            for j in 0..n {
                assert!((h.get(i, j) - h.get(n - 1 - i, n - 1 - j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(SshModel::with_hoppings(1.0, 1.0, 1.0).is_err());
        assert!(SshModel::with_hoppings(1.0, 1.0, 0.0).is_err());
        assert!(SshModel::with_hoppings(0.0, 0.0, 0.3).is_err());
        assert!(SshModel::with_hoppings(-1.0, 1.0, 0.3).is_err());
        assert!(KitaevModel::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ssh(1.0, 2.0, 0.5).on_boundary());
        assert!(check_band(&ssh(1.0, 2.0, 0.3), 2).is_err());
    }

    #[test]
    fn plane_wave_periodic_image_shifts_components() {
        let e = Embedding::PlaneWaves { n_max: 1 };
        let u = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        assert_eq!(
            e.periodic_image(&u),
            vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(0.0, 0.0)]
        );
    }
}
