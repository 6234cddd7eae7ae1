use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use pzphase::{BasisConvention, BlochModel, ContinuumModel, KitaevModel, SshModel, C64};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Ssh,
    Kitaev,
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Cell,
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelKind>,
    /// Intracell hopping (SSH)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Intercell hopping (SSH)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Orbital separation inside the cell (SSH)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Lattice constant
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Position of the first orbital (SSH)
    #[arg(long = "r-alpha", global = true, allow_negative_numbers = true)]
    pub r_alpha: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// On-site energy (Kitaev)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Hopping (Kitaev)
    #[arg(long = "J", global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Pairing (Kitaev)
    #[arg(long = "Delta", global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Amplitude of V0 cos(2 pi x / a) (continuum)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Plane-wave cutoff (continuum)
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Extra Fourier component `g:re:im` (continuum, repeatable)
    #[arg(long, global = true)]
    pub fourier: Vec<String>,
    /// lower, upper, or a band index
    #[arg(long, global = true)]
    pub band: Option<String>,
    /// Number of grid intervals over the Brillouin zone
    #[arg(long = "M", global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sections
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub v: f64,
    pub w: f64,
    pub b: f64,
    pub a: f64,
    pub r_alpha: f64,
    pub convention: BasisConvention,
    pub eps: f64,
    pub j: f64,
    pub delta: f64,
    pub v0: Option<f64>,
    pub nmax: usize,
    pub fourier: Vec<(i64, C64)>,
    pub band: usize,
    pub m: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

const DEFAULT_V0: f64 = 2.0;

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut merged = args.clone();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            apply_config_text(&mut merged, &text, path)?;
        }
        let fourier = merged
            .fourier
            .iter()
            .map(|s| parse_fourier(s))
            .collect::<Result<Vec<_>, _>>()?;
        let band = match merged.band.as_deref() {
            None | Some("lower") => 0,
            Some("upper") => 1,
            Some(other) => other
                .parse()
                .map_err(|_| CliError::usage(format!("--band expects lower, upper or an index, got {other:?}")))?,
        };
        let m = merged.m.unwrap_or(4096);
        if m == 0 {
            return Err(CliError::usage("--M must be positive"));
        }
        if merged.workers == Some(0) {
            return Err(CliError::usage("--workers must be positive"));
        }
        Ok(Self {
            model: merged.model.unwrap_or(ModelKind::Ssh),
            v: merged.v.unwrap_or(1.0),
            w: merged.w.unwrap_or(2.0),
            b: merged.b.unwrap_or(0.3),
            a: merged.a.unwrap_or(1.0),
            r_alpha: merged.r_alpha.unwrap_or(0.0),
            convention: match merged.convention.unwrap_or(ConventionArg::Cell) {
                ConventionArg::Cell => BasisConvention::CellPeriodic,
                ConventionArg::Lattice => BasisConvention::LatticePeriodic,
            },
            eps: merged.eps.unwrap_or(1.0),
            j: merged.j.unwrap_or(1.0),
            delta: merged.delta.unwrap_or(1.0),
            v0: merged.v0,
            nmax: merged.nmax.unwrap_or(pzphase::models::DEFAULT_N_MAX),
            fourier,
            band,
            m,
            seed: merged.seed.unwrap_or(42),
            format: merged.format.unwrap_or(Format::Csv),
            out: merged.out,
            workers: merged.workers,
        })
    }

    pub fn build_model(&self) -> Result<BlochModel, CliError> {
        let model: BlochModel = match self.model {
            ModelKind::Ssh => SshModel::new(self.v, self.w, self.a, self.b, self.r_alpha, self.convention)?.into(),
            ModelKind::Kitaev => KitaevModel::new(self.eps, self.j, self.delta, self.a)?.into(),
            ModelKind::Continuum => {
                let mut components = self.fourier.clone();
                match (self.v0, components.is_empty()) {
                    (Some(v0), _) => components.push((1, C64::new(0.5 * v0, 0.0))),
                    (None, true) => components.push((1, C64::new(0.5 * DEFAULT_V0, 0.0))),
                    (None, false) => {}
                }
                ContinuumModel::new(self.a, 1.0, self.nmax, &components)?.into()
            }
        };
        Ok(model)
    }

    /// Value of a sweepable parameter by name.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self, CliError> {
        let mut out = self.clone();
        match (name, self.model) {
            ("v", ModelKind::Ssh) => out.v = value,
            ("w", ModelKind::Ssh) => out.w = value,
            ("b", ModelKind::Ssh) => out.b = value,
            ("eps", ModelKind::Kitaev) => out.eps = value,
            ("J", ModelKind::Kitaev) => out.j = value,
            ("Delta", ModelKind::Kitaev) => out.delta = value,
            ("V0", ModelKind::Continuum) => out.v0 = Some(value),
            _ => {
                return Err(CliError::usage(format!(
                    "parameter {name:?} cannot be swept for model {:?}",
                    self.model
                )))
            }
        }
        Ok(out)
    }
}

fn parse_fourier(s: &str) -> Result<(i64, C64), CliError> {
    let bad = || CliError::usage(format!("--fourier expects g:re:im, got {s:?}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let g = parts[0].parse().map_err(|_| bad())?;
    let re = parts[1].parse().map_err(|_| bad())?;
    let im = parts[2].parse().map_err(|_| bad())?;
    Ok((g, C64::new(re, im)))
}

/// Fills unset fields of `args` from flat `key = value` text.
pub fn apply_config_text(args: &mut CommonArgs, text: &str, source: &Path) -> Result<(), CliError> {
    let mut file_fourier = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::usage(format!("{}:{}: {msg}", source.display(), lineno + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("{key}: not a number: {v:?}")));
        let int = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| err(format!("{key}: not an integer: {v:?}")))
        };
        let choice = |v: &str| match v {
            "ssh" => Ok(ModelKind::Ssh),
            "kitaev" => Ok(ModelKind::Kitaev),
            "continuum" => Ok(ModelKind::Continuum),
            _ => Err(err(format!("unknown model {v:?}"))),
        };
        match key {
            "model" => fill(&mut args.model, choice(value)?),
            "v" => fill(&mut args.v, num(value)?),
            "w" => fill(&mut args.w, num(value)?),
            "b" => fill(&mut args.b, num(value)?),
            "a" => fill(&mut args.a, num(value)?),
            "r-alpha" | "r_alpha" => fill(&mut args.r_alpha, num(value)?),
            "convention" => fill(
                &mut args.convention,
                match value {
                    "cell" => ConventionArg::Cell,
                    "lattice" => ConventionArg::Lattice,
                    _ => return Err(err(format!("unknown convention {value:?}"))),
                },
            ),
            "eps" => fill(&mut args.eps, num(value)?),
            "J" => fill(&mut args.j, num(value)?),
            "Delta" => fill(&mut args.delta, num(value)?),
            "v0" | "V0" => fill(&mut args.v0, num(value)?),
            "nmax" => fill(&mut args.nmax, int(value)? as usize),
            "fourier" => file_fourier.extend(value.split(',').map(|s| s.trim().to_string())),
            "band" => fill(&mut args.band, value.to_string()),
            "M" => fill(&mut args.m, int(value)? as usize),
            "seed" => fill(&mut args.seed, int(value)?),
            "format" => fill(
                &mut args.format,
                match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(err(format!("unknown format {value:?}"))),
                },
            ),
            "out" => fill(&mut args.out, PathBuf::from(value)),
            "workers" => fill(&mut args.workers, int(value)? as usize),
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    if args.fourier.is_empty() {
        args.fourier = file_fourier;
    }
    Ok(())
}

fn fill<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}
