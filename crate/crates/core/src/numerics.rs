//! Complex linear algebra, angle arithmetic and winding numbers.
//!
//! Everything here is a pure function of its inputs. Eigenvector phases are
//! whatever the algorithm produces; no phase fixing is attempted anywhere.

use std::f64::consts::{PI, TAU};
use std::fmt;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute tolerance on `H[i][j] - conj(H[j][i])` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default splitting below which the 2x2 closed form refuses to pick eigenvectors.
pub const DEFAULT_DEGENERACY_THRESHOLD: f64 = 1e-12;

/// `<a|b>` with the conjugate on the left argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `a / |a|`. Panics in debug builds on the zero vector.
pub fn normalized(a: &[C64]) -> Vec<C64> {
    let n = norm(a);
    debug_assert!(n > 0.0);
    a.iter().map(|x| x / n).collect()
}

/// A phase, stored as its canonical representative in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const PI: Angle = Angle(PI);

    pub fn new(radians: f64) -> Self {
        wrap_angle(radians)
    }

    /// Argument of a complex number.
    pub fn arg(z: C64) -> Self {
        wrap_angle(z.arg())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Value in units of pi, in `(-1, 1]`.
    pub fn pi_units(self) -> f64 {
        self.0 / PI
    }

    pub fn distance(self, other: Angle) -> f64 {
        angle_distance(self.0, other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        wrap_angle(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        wrap_angle(self.0 - rhs.0)
    }
}

/// Maps `x` to `(-pi, pi]`; `-pi` itself maps to `+pi`.
pub fn wrap_angle(x: f64) -> Angle {
    debug_assert!(x.is_finite(), "wrap_angle of non-finite value");
    let r = x.rem_euclid(TAU);
    Angle(if r > PI { r - TAU } else { r })
}

/// Distance on the circle, in `[0, pi]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).value().abs()
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(entries: &[C64]) -> Self {
        Self::from_fn(
            entries.len(),
            |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `U^dagger U - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> C64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let diag = a[col * n + col];
            det *= diag;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / diag;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in col..n {
                    let upper = a[col * n + k];
                    a[r * n + k] -= factor * upper;
                }
            }
        }
        det
    }
}

/// A complex matrix whose Hermiticity has been checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Checks `H[i][j] = conj(H[j][i])` to [`HERMITIAN_TOL`] and symmetrizes
    /// away the residual asymmetry.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((matrix.get(i, j) - matrix.get(j, i).conj()).norm());
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let sym = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                C64::new(matrix.get(i, i).re, 0.0)
            } else {
                0.5 * (matrix.get(i, j) + matrix.get(j, i).conj())
            }
        });
        Ok(Self(sym))
    }

    pub fn from_rows(dim: usize, data: Vec<C64>) -> Result<Self> {
        Self::new(ComplexMatrix::new(dim, data)?)
    }

    /// Builds a Hermitian matrix from its upper triangle (diagonal real parts
    /// taken, lower triangle mirrored).
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = ComplexMatrix::from_fn(dim, |_, _| C64::new(0.0, 0.0));
        for i in 0..dim {
            for j in i..dim {
                let z = upper(i, j);
                if i == j {
                    m.data[i * dim + i] = C64::new(z.re, 0.0);
                } else {
                    m.data[i * dim + j] = z;
                    m.data[j * dim + i] = z.conj();
                }
            }
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        self.0.mul_vec(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `<v|H|v>` (real for Hermitian `H`).
    pub fn expectation(&self, v: &[C64]) -> f64 {
        inner(v, &self.mul_vec(v)).re
    }

    /// `|| H v - e v ||`.
    pub fn residual(&self, pair: &Eigenpair) -> f64 {
        let hv = self.mul_vec(&pair.vector);
        hv.iter()
            .zip(&pair.vector)
            .map(|(a, b)| (a - pair.energy * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: Vec<C64>,
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending. Never fails.
pub fn herm_eigvals2(h: &HermitianMatrix) -> [f64; 2] {
    let (mean, half_split, off) = split2(h);
    let r = half_split.hypot(off.norm());
    [mean - r, mean + r]
}

fn split2(h: &HermitianMatrix) -> (f64, f64, C64) {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    (0.5 * (a + d), 0.5 * (a - d), h.get(0, 1))
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix with the default
/// degeneracy threshold.
pub fn herm_eig2(h: &HermitianMatrix) -> Result<(Eigenpair, Eigenpair)> {
    herm_eig2_with_threshold(h, DEFAULT_DEGENERACY_THRESHOLD)
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix, sorted ascending.
///
/// For each eigenvalue `e` the vector is taken from whichever row of `H - e`
/// gives the better-conditioned null vector: `(c, e - a)` or `(e - d, conj c)`.
pub fn herm_eig2_with_threshold(h: &HermitianMatrix, threshold: f64) -> Result<(Eigenpair, Eigenpair)> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: h.dim(),
        });
    }
    let (mean, delta, c) = split2(h);
    let r = delta.hypot(c.norm());
    if 2.0 * r < threshold || r == 0.0 {
        return Err(Error::DegenerateSpectrum(2.0 * r));
    }
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let vector_for = |e: f64| -> Vec<C64> {
        let first = [c, C64::new(e - a, 0.0)];
        let second = [C64::new(e - d, 0.0), c.conj()];
        let pick = if norm(&first) >= norm(&second) { first } else { second };
        normalized(&pick)
    };
    let lo = mean - r;
    let hi = mean + r;
    Ok((
        Eigenpair {
            energy: lo,
            vector: vector_for(lo),
        },
        Eigenpair {
            energy: hi,
            vector: vector_for(hi),
        },
    ))
}

/// Controls for the cyclic Jacobi eigensolver.
#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions {
    /// Stop once the off-diagonal Frobenius norm is below `tol * ||H||`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_sweeps: 100,
        }
    }
}

/// Upper bound on the matrix dimension accepted by [`herm_eig_n`].
pub const MAX_JACOBI_DIM: usize = 512;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations, sorted
/// ascending. The sweep order is fixed (row-major over the upper triangle),
/// so results are bit-reproducible.
pub fn herm_eig_n(h: &HermitianMatrix, opts: JacobiOptions) -> Result<Vec<Eigenpair>> {
    let n = h.dim();
    if n > MAX_JACOBI_DIM {
        return Err(Error::InvalidInput(format!("dimension {n} exceeds {MAX_JACOBI_DIM}")));
    }
    let mut a: Vec<C64> = h.matrix().as_slice().to_vec();
    let mut v: Vec<C64> = ComplexMatrix::identity(n).data;
    let scale = h.norm();

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > opts.tol * scale {
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U = D R with D = diag(1, conj(phase)) on the (p, q) plane.
                let uqp = -sn * phase.conj();
                let uqq = cs * phase.conj();
                // A <- A U (columns)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp + uqp * akq;
                    a[k * n + q] = sn * akp + uqq * akq;
                }
                // A <- U^dagger A (rows)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk + uqp.conj() * aqk;
                    a[q * n + k] = sn * apk + uqq.conj() * aqk;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp + uqp * vkq;
                    v[k * n + q] = sn * vkp + uqq * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }

    let mut pairs: Vec<Eigenpair> = (0..n)
        .map(|j| Eigenpair {
            energy: a[j * n + j].re,
            vector: (0..n).map(|k| v[k * n + j]).collect(),
        })
        .collect();
    pairs.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(pairs)
}

/// Default largest admissible single phase step in [`winding_number`].
pub const DEFAULT_MAX_WINDING_STEP: f64 = PI / 2.0;

/// Number of turns a closed ring of unit complex numbers makes about the origin.
pub fn winding_number(ring: &[C64]) -> Result<i64> {
    winding_number_with(ring, DEFAULT_MAX_WINDING_STEP)
}

/// As [`winding_number`], rejecting rings with any step of magnitude `>= max_step`.
pub fn winding_number_with(ring: &[C64], max_step: f64) -> Result<i64> {
    let m = ring.len();
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "winding ring needs at least 3 samples, got {m}"
        )));
    }
    if ring
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite() && z.norm() > 0.0))
    {
        return Err(Error::InvalidInput(
            "winding ring contains zero or non-finite samples".into(),
        ));
    }
    let mut total = 0.0;
    for j in 0..m {
        let step = (ring[(j + 1) % m] * ring[j].conj()).arg();
        if step.abs() >= max_step {
            return Err(Error::UndersampledRing {
                step: j,
                magnitude: step.abs(),
            });
        }
        total += step;
    }
    Ok((total / TAU).round() as i64)
}
