//! Gray-mapped QPSK and bit-error bookkeeping.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::Complex64;

/// Symbol alphabets. Only QPSK ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constellation {
    #[default]
    Qpsk,
}

impl Constellation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Constellation::Qpsk => 2,
        }
    }

    pub fn map(self, bits: &[u8]) -> Result<Vec<Complex64>> {
        match self {
            Constellation::Qpsk => qpsk_map(bits),
        }
    }

    pub fn demap(self, symbols: &[Complex64]) -> Vec<u8> {
        match self {
            Constellation::Qpsk => qpsk_demap(symbols),
        }
    }
}

/// `(b0, b1) → ((1−2b0) + j(1−2b1))/√2`.
pub fn qpsk_map(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "QPSK needs an even number of bits, got {}",
            bits.len()
        )));
    }
    let a = std::f64::consts::FRAC_1_SQRT_2;
    Ok(bits
        .chunks_exact(2)
        .map(|b| {
            Complex64::new(
                if b[0] == 0 { a } else { -a },
                if b[1] == 0 { a } else { -a },
            )
        })
        .collect())
}

/// Quadrant decision. Zero real or imaginary parts decide bit 0.
pub fn qpsk_demap(symbols: &[Complex64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|z| [u8::from(z.re < 0.0), u8::from(z.im < 0.0)])
        .collect()
}

pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<u8> {
    (0..count).map(|_| u8::from(rng.random::<bool>())).collect()
}

pub fn count_bit_errors(a: &[u8], b: &[u8]) -> u64 {
    assert_eq!(a.len(), b.len(), "bit streams differ in length");
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Errors over bits, accumulated across trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCount {
    pub errors: u64,
    pub bits: u64,
}

impl ErrorCount {
    pub fn new(errors: u64, bits: u64) -> Self {
        Self { errors, bits }
    }

    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// Binomial standard error of [`ErrorCount::ber`].
    pub fn std_error(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        let p = self.ber();
        (p * (1.0 - p) / self.bits as f64).sqrt()
    }
}

impl std::ops::AddAssign for ErrorCount {
    fn add_assign(&mut self, rhs: Self) {
        self.errors += rhs.errors;
        self.bits += rhs.bits;
    }
}

impl std::iter::Sum for ErrorCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |mut acc, e| {
            acc += e;
            acc
        })
    }
}
