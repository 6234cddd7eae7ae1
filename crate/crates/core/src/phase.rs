//! Bargmann chains over the Brillouin zone and the phases built from them.
//!
//! A chain holds eigenvectors `u_0 .. u_M` of one band at `kappa_0 = 0 ..
//! kappa_M = 2 pi / a`, each diagonalized independently: `u_M` is not tied
//! to `u_0` by any phase convention. The Pancharatnam-Zak phase is the
//! argument of the cyclic product
//!
//! ```text
//! Delta_M = <u_0|u_M> <u_M|u_{M-1}> ... <u_1|u_0>
//! ```
//!
//! which is unchanged by `u_j -> e^{i L_j} u_j` for any `L_j`. The Zak phase
//! is the argument of the same product with the closing factor removed, and
//! so depends on how `u_M` is chosen.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{band_gap, check_band, BlochModel, Embedding};
use crate::numerics::{inner, wrap_angle, Angle, ComplexMatrix, Eigenpair, C64};

/// Smallest factor modulus tolerated inside a Bargmann product.
pub const ZERO_OVERLAP: f64 = 1e-14;

/// Minimum number of grid intervals for [`build_chain`].
pub const MIN_CHAIN_INTERVALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    /// Successive overlaps `|<u_{j+1}|u_j>|` must exceed this.
    pub overlap_floor: f64,
    /// The band gap along the grid must stay above this.
    pub gap_floor: f64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            overlap_floor: 0.5,
            gap_floor: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainFlag {
    /// SSH with `b = a/2`, where the phase has no defined value.
    BoundaryFlag,
    NonUniformGrid,
}

impl fmt::Display for ChainFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainFlag::BoundaryFlag => "BOUNDARY",
            ChainFlag::NonUniformGrid => "NON_UNIFORM_GRID",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargmannChain {
    /// `None` once the states no longer come straight from the model's
    /// eigensolver (e.g. after a static unitary).
    pub model: Option<BlochModel>,
    pub band: usize,
    pub states: Vec<Vec<C64>>,
    pub grid: Vec<f64>,
    /// Band energy at each grid point (empty for hand-built chains).
    pub energies: Vec<f64>,
    pub min_gap: Option<f64>,
    pub embedding: Embedding,
    pub flags: Vec<ChainFlag>,
}

impl BargmannChain {
    /// Wraps an explicit list of states. Needs at least two states.
    pub fn from_states(states: Vec<Vec<C64>>, grid: Vec<f64>, embedding: Embedding) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidInput("a chain needs at least two states".into()));
        }
        if grid.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                got: grid.len(),
            });
        }
        let dim = states[0].len();
        if dim == 0 || states.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidInput(
                "chain states must share a positive dimension".into(),
            ));
        }
        Ok(Self {
            model: None,
            band: 0,
            states,
            grid,
            energies: Vec::new(),
            min_gap: None,
            embedding,
            flags: Vec::new(),
        })
    }

    /// Number of intervals `M` (one less than the number of states).
    pub fn intervals(&self) -> usize {
        self.states.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    /// `|<u_{j+1}|u_j>|` for `j = 0..M`.
    pub fn successive_overlaps(&self) -> Vec<f64> {
        self.states.windows(2).map(|w| inner(&w[1], &w[0]).norm()).collect()
    }

    pub fn min_overlap(&self) -> f64 {
        self.successive_overlaps().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn has_flag(&self, flag: ChainFlag) -> bool {
        self.flags.contains(&flag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    PancharatnamZak,
    Zak,
    Total,
    ManyBody,
    Adiabatic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub gamma: Angle,
    /// Sum of the arguments of the individual factors, not wrapped.
    pub raw: f64,
    pub kind: PhaseKind,
    pub m: usize,
    pub min_overlap: f64,
    pub min_gap: Option<f64>,
    pub convention: String,
}

/// Per-state phases `L_0 .. L_M` for `u_j -> e^{i L_j} u_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub values: Vec<f64>,
}

impl GaugeFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("gauge function has non-finite entries".into()));
        }
        Ok(Self { values })
    }

    /// The telescoped shift `wrap(L_0 - L_M)` this gauge induces on the open
    /// (raw-endpoint) Zak product.
    pub fn zak_shift(&self) -> Angle {
        wrap_angle(self.values[0] - self.values[self.values.len() - 1])
    }
}

/// Which state closes the open Zak product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZakEndpoint {
    /// The independently computed eigenvector at `2 pi / a`.
    RawEigenvector,
    /// `e^{-i (2 pi / a) x} u_0`, the periodic-gauge image of the first state.
    PeriodicGauge,
}

/// Builds a chain on the uniform grid.
pub fn build_chain(model: &BlochModel, band: usize, m: usize) -> Result<BargmannChain> {
    build_chain_with(model, band, m, None, ChainOptions::default())
}

/// Builds a chain on `grid` (uniform when `None`). A supplied grid must have
/// `m + 1` strictly increasing points from `0` to `2 pi / a`.
pub fn build_chain_with(
    model: &BlochModel,
    band: usize,
    m: usize,
    grid: Option<&[f64]>,
    opts: ChainOptions,
) -> Result<BargmannChain> {
    if m < MIN_CHAIN_INTERVALS {
        return Err(Error::InvalidInput(format!(
            "chain needs M >= {MIN_CHAIN_INTERVALS}, got {m}"
        )));
    }
    check_band(model, band)?;
    let zone = model.zone_length();
    let uniform = || -> Vec<f64> {
        let mut g: Vec<f64> = (0..=m).map(|j| zone * j as f64 / m as f64).collect();
        g[m] = zone;
        g
    };
    let mut flags = Vec::new();
    let grid = match grid {
        None => uniform(),
        Some(g) => {
            validate_grid(g, m, zone)?;
            let reference = uniform();
            if g.iter().zip(&reference).any(|(x, y)| (x - y).abs() > 1e-12 * zone) {
                flags.push(ChainFlag::NonUniformGrid);
            }
            g.to_vec()
        }
    };
    if model.on_boundary() {
        flags.insert(0, ChainFlag::BoundaryFlag);
    }

    let solved: Vec<Result<(Eigenpair, f64)>> = grid
        .par_iter()
        .map(|&kappa| {
            let pairs = model.eigenpairs(kappa).map_err(|e| match e {
                Error::DegenerateSpectrum(split) => Error::GapClosure { min_gap: split, kappa },
                other => other,
            })?;
            let energies: Vec<f64> = pairs.iter().map(|p| p.energy).collect();
            let gap = band_gap(&energies, band);
            let pair = pairs.into_iter().nth(band).expect("band index checked");
            Ok((pair, gap))
        })
        .collect();

    let mut states = Vec::with_capacity(m + 1);
    let mut energies = Vec::with_capacity(m + 1);
    let mut min_gap = (f64::INFINITY, 0.0);
    for (res, &kappa) in solved.into_iter().zip(&grid) {
        let (pair, gap) = res?;
        if gap < min_gap.0 {
            min_gap = (gap, kappa);
        }
        energies.push(pair.energy);
        states.push(pair.vector);
    }
    if min_gap.0 < opts.gap_floor {
        return Err(Error::GapClosure {
            min_gap: min_gap.0,
            kappa: min_gap.1,
        });
    }

    let chain = BargmannChain {
        model: Some(model.clone()),
        band,
        states,
        grid,
        energies,
        min_gap: Some(min_gap.0),
        embedding: model.embedding(),
        flags,
    };
    for (index, overlap) in chain.successive_overlaps().into_iter().enumerate() {
        if overlap <= opts.overlap_floor {
            return Err(Error::OverlapTooSmall { index, overlap });
        }
    }
    Ok(chain)
}

fn validate_grid(g: &[f64], m: usize, zone: f64) -> Result<()> {
    if g.len() != m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            got: g.len(),
        });
    }
    if g[0] != 0.0 || (g[m] - zone).abs() > 1e-12 * zone {
        return Err(Error::InvalidInput("grid must run from 0 to 2 pi / a".into()));
    }
    if g.windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::InvalidInput("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Running product of factors, left to right, with the sum of their arguments.
struct Product {
    value: C64,
    raw: f64,
}

impl Product {
    fn new() -> Self {
        Self {
            value: C64::new(1.0, 0.0),
            raw: 0.0,
        }
    }

    fn push(&mut self, factor: C64) -> Result<()> {
        let modulus = factor.norm();
        if modulus < ZERO_OVERLAP {
            return Err(Error::ZeroOverlap(modulus));
        }
        self.value *= factor;
        self.raw += factor.arg();
        Ok(())
    }
}

fn open_product(states: &[Vec<C64>]) -> Result<Product> {
    let mut p = Product::new();
    for w in states.windows(2) {
        p.push(inner(&w[1], &w[0]))?;
    }
    Ok(p)
}

fn cyclic_product(chain: &BargmannChain) -> Result<Product> {
    let mut p = open_product(&chain.states)?;
    p.push(inner(&chain.states[0], &chain.states[chain.intervals()]))?;
    Ok(p)
}

/// `<u_0|u_M> <u_M|u_{M-1}> ... <u_1|u_0>`, multiplied in index order.
pub fn bargmann_invariant(chain: &BargmannChain) -> Result<C64> {
    Ok(cyclic_product(chain)?.value)
}

/// `Arg Delta_M` of an existing chain.
pub fn chain_phase(chain: &BargmannChain) -> Result<PhaseResult> {
    let p = cyclic_product(chain)?;
    Ok(PhaseResult {
        gamma: Angle::arg(p.value),
        raw: p.raw,
        kind: PhaseKind::PancharatnamZak,
        m: chain.intervals(),
        min_overlap: chain.min_overlap(),
        min_gap: chain.min_gap,
        convention: "cyclic Bargmann invariant".into(),
    })
}

/// The gauge-invariant band phase `gamma_g = Arg Delta_M` on a uniform grid.
pub fn pancharatnam_zak(model: &BlochModel, band: usize, m: usize) -> Result<PhaseResult> {
    chain_phase(&build_chain(model, band, m)?)
}

/// Argument of the open product `<u_M|u_{M-1}> ... <u_1|u_0>` with `u_M`
/// chosen by `endpoint`.
pub fn zak_phase(chain: &BargmannChain, endpoint: ZakEndpoint) -> Result<PhaseResult> {
    let m = chain.intervals();
    let (p, convention) = match endpoint {
        ZakEndpoint::RawEigenvector => (open_product(&chain.states)?, "raw eigenvector endpoint".to_string()),
        ZakEndpoint::PeriodicGauge => {
            let mut p = open_product(&chain.states[..m])?;
            let image = chain.embedding.periodic_image(&chain.states[0]);
            p.push(inner(&image, &chain.states[m - 1]))?;
            (p, format!("periodic gauge, {}", chain.embedding.describe()))
        }
    };
    Ok(PhaseResult {
        gamma: Angle::arg(p.value),
        raw: p.raw,
        kind: PhaseKind::Zak,
        m,
        min_overlap: chain.min_overlap(),
        min_gap: chain.min_gap,
        convention,
    })
}

/// `u_j -> e^{i L_j} u_j`.
pub fn apply_gauge(chain: &BargmannChain, gauge: &GaugeFunction) -> Result<BargmannChain> {
    if gauge.values.len() != chain.states.len() {
        return Err(Error::DimensionMismatch {
            expected: chain.states.len(),
            got: gauge.values.len(),
        });
    }
    let mut out = chain.clone();
    for (state, &lambda) in out.states.iter_mut().zip(&gauge.values) {
        let phase = C64::cis(lambda);
        state.iter_mut().for_each(|c| *c *= phase);
    }
    Ok(out)
}

/// Largest tolerated `|U^dagger U - 1|` entry in [`apply_static_unitary`].
pub const UNITARY_TOL: f64 = 1e-12;

/// `u_j -> U u_j` for one fixed unitary `U`.
pub fn apply_static_unitary(chain: &BargmannChain, u: &ComplexMatrix) -> Result<BargmannChain> {
    if u.dim() != chain.dim() {
        return Err(Error::DimensionMismatch {
            expected: chain.dim(),
            got: u.dim(),
        });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NonUnitary(defect));
    }
    let mut out = chain.clone();
    out.states = chain.states.iter().map(|s| u.mul_vec(s)).collect();
    out.model = None;
    Ok(out)
}

/// Smallest `|<first|last>|` for which the total phase is defined.
pub const ORTHOGONALITY_FLOOR: f64 = 1e-12;

/// Pancharatnam total phase `Arg <first|last>`.
pub fn pancharatnam_total(first: &[C64], last: &[C64]) -> Result<Angle> {
    if first.len() != last.len() {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            got: last.len(),
        });
    }
    let ov = inner(first, last);
    if ov.norm() <= ORTHOGONALITY_FLOOR {
        return Err(Error::OrthogonalStates(ov.norm()));
    }
    Ok(Angle::arg(ov))
}
