//! Complex linear algebra and number-theory primitives.
//!
//! Every operator comes in two flavours: a dense [`ComplexMatrix`] that is
//! cheap to reason about and serves as the reference, and a matrix-free form
//! (FFT or diagonal scaling) used on the hot paths.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(2πj·x)`.
#[inline]
pub fn cis_turns(x: f64) -> Complex64 {
    let phase = 2.0 * PI * x.rem_euclid(1.0);
    Complex64::new(phase.cos(), phase.sin())
}

/// `exp(2πj·c·k²)` with the argument reduced modulo one before exponentiation.
///
/// The integer part of `c` contributes whole turns (`k²` is an integer), so it
/// is dropped first; this keeps integer chirp offsets exact.
#[inline]
pub fn chirp_phase(c: f64, k: usize) -> Complex64 {
    let k2 = (k as f64) * (k as f64);
    cis_turns((c.rem_euclid(1.0) * k2).rem_euclid(1.0))
}

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols() {
            return Err(Error::LengthMismatch {
                expected: self.cols(),
                actual: v.len(),
            });
        }
        let out = (0..self.rows())
            .map(|i| {
                self.0
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect();
        Ok(out)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖MᴴM − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = Self(self.0.adjoint() * &self.0);
        gram.max_abs_diff(&Self::identity(self.cols()))
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// Ratio of extreme singular values (infinite when singular).
    pub fn condition_number(&self) -> f64 {
        let sv = self.0.clone().singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows(), self.cols())
    }
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Dimension { min: 1, actual: 0 })
    } else {
        Ok(())
    }
}

/// Unitary DFT matrix `F_n`, entry `(m, k) = exp(−2πj·m·k/n)/√n`.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    require_positive(n)?;
    let scale = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |m, k| {
        cis_turns(-(((m * k) % n) as f64) / n as f64) * scale
    }))
}

/// `F_nᴴ`.
pub fn idft_matrix(n: usize) -> Result<ComplexMatrix> {
    Ok(dft_matrix(n)?.adjoint())
}

/// `diag(exp(2πj·c·k²))`, `k = 0..n`.
pub fn chirp_diag(c: f64, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&chirp_vector(c, n))
}

pub fn chirp_vector(c: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| chirp_phase(c, k)).collect()
}

/// Permutation matrix of `Π^l`: `(Π^l v)_k = v_{(k−l) mod n}`.
pub fn cyclic_shift_matrix(l: usize, n: usize) -> ComplexMatrix {
    let l = l % n;
    ComplexMatrix::from_fn(
        n,
        n,
        |row, col| {
            if (col + l) % n == row {
                ONE
            } else {
                ZERO
            }
        },
    )
}

/// `diag(exp(2πj·θ·k/n))`.
pub fn doppler_diag(theta: f64, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&doppler_vector(theta, n))
}

pub fn doppler_vector(theta: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| cis_turns(theta * k as f64 / n as f64))
        .collect()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: usize) -> Result<Vec<usize>> {
    require_positive(n)?;
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            low.push(d);
            if d * d != n {
                high.push(n / d);
            }
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    Ok(low)
}

/// Divisor-count function σ(n).
pub fn divisor_count(n: usize) -> Result<usize> {
    divisors(n).map(|d| d.len())
}

/// Forward and inverse unitary FFT plans of one length.
pub struct Dft {
    n: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Dft {
    /// Shared plan for length `n`; plans are built once per process.
    pub fn shared(n: usize) -> Arc<Dft> {
        static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Dft>>>> = OnceLock::new();
        let mut plans = PLANS
            .get_or_init(Default::default)
            .lock()
            .expect("fft plan cache poisoned");
        plans
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(Dft {
                    n,
                    scale: 1.0 / (n as f64).sqrt(),
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In place `buf ← F_n·buf`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }

    /// In place `buf ← F_nᴴ·buf`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
