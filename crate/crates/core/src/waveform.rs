//! AFDM, OTFS and OFDM as unitary precodings of OFDM.
//!
//! A frame of `N` symbols `d` is transmitted as `x = F_Nᴴ·Q·d`, where the
//! precoder `Q` is
//!
//! ```text
//! OFDM:  Q = I_N
//! AFDM:  Q = F_N · Λ_{c1} · F_Nᴴ · Λ_{c2}
//! OTFS:  Q = F_N · (F_Lᴴ ⊗ I_K),   N = K·L
//! ```
//!
//! Demodulation of an equalized frame is `d̂ = Qᴴ·F_N·x̂`. For AFDM this is the
//! discrete affine Fourier transform: a time-domain dechirp by `c1`, a DFT and
//! a frequency-domain dechirp by `c2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{
    chirp_diag, chirp_phase, chirp_vector, cis_turns, dft_matrix, idft_matrix, kron, Complex64,
    ComplexMatrix, Dft, ZERO,
};

/// AFDM chirp configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfdmParams {
    pub n_subcarriers: usize,
    pub c1: f64,
    pub c2: f64,
}

impl AfdmParams {
    pub fn new(n_subcarriers: usize, c1: f64, c2: f64) -> Result<Self> {
        if n_subcarriers < 2 {
            return Err(Error::Dimension {
                min: 2,
                actual: n_subcarriers,
            });
        }
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "chirp parameters must be finite (c1 = {c1}, c2 = {c2})"
            )));
        }
        Ok(Self {
            n_subcarriers,
            c1,
            c2,
        })
    }

    /// Full-diversity check: `c1 ≥ θ_max/N` and `c2 < 1/N`.
    pub fn full_diversity(&self, theta_max: f64) -> bool {
        let n = self.n_subcarriers as f64;
        self.c1 >= theta_max / n && self.c2 < 1.0 / n
    }
}

/// OTFS delay-Doppler grid: `K` Doppler bins by `L` delay bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OtfsParams {
    pub n_subcarriers: usize,
    pub doppler_bins: usize,
    pub delay_bins: usize,
}

impl OtfsParams {
    pub fn new(n_subcarriers: usize, doppler_bins: usize, delay_bins: usize) -> Result<Self> {
        if doppler_bins == 0 || delay_bins == 0 || doppler_bins * delay_bins != n_subcarriers {
            return Err(Error::GridMismatch {
                n: n_subcarriers,
                doppler_bins,
                delay_bins,
            });
        }
        Ok(Self {
            n_subcarriers,
            doppler_bins,
            delay_bins,
        })
    }

    /// Grid with `K = doppler_bins` and `L = N/K`.
    pub fn with_doppler_bins(n_subcarriers: usize, doppler_bins: usize) -> Result<Self> {
        if doppler_bins == 0 || !n_subcarriers.is_multiple_of(doppler_bins) {
            return Err(Error::GridMismatch {
                n: n_subcarriers,
                doppler_bins,
                delay_bins: n_subcarriers.checked_div(doppler_bins).unwrap_or(0),
            });
        }
        Self::new(n_subcarriers, doppler_bins, n_subcarriers / doppler_bins)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Waveform {
    Afdm(AfdmParams),
    Otfs(OtfsParams),
    Ofdm { n_subcarriers: usize },
}

impl Waveform {
    pub fn n_subcarriers(&self) -> usize {
        match self {
            Waveform::Afdm(p) => p.n_subcarriers,
            Waveform::Otfs(p) => p.n_subcarriers,
            Waveform::Ofdm { n_subcarriers } => *n_subcarriers,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Waveform::Afdm(_) => "afdm",
            Waveform::Otfs(_) => "otfs",
            Waveform::Ofdm { .. } => "ofdm",
        }
    }
}

/// The `N×N` precoder `Q` of one waveform.
///
/// Fast application runs through FFTs and diagonal chirps; the dense matrix is
/// built on first request from the explicit factor matrices and serves as the
/// reference for the fast path.
pub struct Precoder {
    waveform: Waveform,
    dft: Arc<Dft>,
    // AFDM only: Λ_{c1} and Λ_{c2} diagonals.
    chirps: Option<(Vec<Complex64>, Vec<Complex64>)>,
    // OTFS only: length-L transform.
    delay_dft: Option<Arc<Dft>>,
    dense: OnceLock<ComplexMatrix>,
}

impl std::fmt::Debug for Precoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Precoder")
            .field("waveform", &self.waveform)
            .finish()
    }
}

impl Precoder {
    pub fn new(waveform: Waveform) -> Result<Self> {
        let n = waveform.n_subcarriers();
        match waveform {
            Waveform::Afdm(p) => {
                AfdmParams::new(p.n_subcarriers, p.c1, p.c2)?;
            }
            Waveform::Otfs(p) => {
                OtfsParams::new(p.n_subcarriers, p.doppler_bins, p.delay_bins)?;
            }
            Waveform::Ofdm { n_subcarriers } => {
                if n_subcarriers == 0 {
                    return Err(Error::Dimension { min: 1, actual: 0 });
                }
            }
        }
        let chirps = match waveform {
            Waveform::Afdm(p) => Some((chirp_vector(p.c1, n), chirp_vector(p.c2, n))),
            _ => None,
        };
        let delay_dft = match waveform {
            Waveform::Otfs(p) => Some(Dft::shared(p.delay_bins)),
            _ => None,
        };
        Ok(Self {
            waveform,
            dft: Dft::shared(n),
            chirps,
            delay_dft,
            dense: OnceLock::new(),
        })
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn n(&self) -> usize {
        self.waveform.n_subcarriers()
    }

    /// Dense `Q`, materialized from the factor matrices.
    pub fn matrix(&self) -> &ComplexMatrix {
        self.dense.get_or_init(|| {
            let n = self.n();
            match self.waveform {
                Waveform::Ofdm { .. } => ComplexMatrix::identity(n),
                Waveform::Afdm(p) => {
                    let f = dft_matrix(n).expect("n >= 2");
                    let fh = f.adjoint();
                    let left = &f * &chirp_diag(p.c1, n);
                    let right = &fh * &chirp_diag(p.c2, n);
                    &left * &right
                }
                Waveform::Otfs(p) => {
                    let f = dft_matrix(n).expect("n >= 1");
                    let grid = kron(
                        &idft_matrix(p.delay_bins).expect("L >= 1"),
                        &ComplexMatrix::identity(p.doppler_bins),
                    );
                    &f * &grid
                }
            }
        })
    }

    fn check_len(&self, v: &[Complex64]) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: v.len(),
            });
        }
        Ok(())
    }

    /// `x = F_Nᴴ·Q·d`.
    pub fn modulate(&self, d: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(d)?;
        let mut x = d.to_vec();
        match self.waveform {
            Waveform::Ofdm { .. } => self.dft.inverse(&mut x),
            Waveform::Afdm(_) => {
                let (c1, c2) = self.chirps.as_ref().expect("afdm chirps");
                mul_diag(&mut x, c2);
                self.dft.inverse(&mut x);
                mul_diag(&mut x, c1);
            }
            Waveform::Otfs(p) => self.delay_transform(&mut x, p, false),
        }
        Ok(x)
    }

    /// `d̂ = Qᴴ·F_N·x̂`.
    pub fn demodulate(&self, x_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x_hat)?;
        let mut d = x_hat.to_vec();
        match self.waveform {
            Waveform::Ofdm { .. } => self.dft.forward(&mut d),
            Waveform::Afdm(_) => {
                let (c1, c2) = self.chirps.as_ref().expect("afdm chirps");
                mul_diag_conj(&mut d, c1);
                self.dft.forward(&mut d);
                mul_diag_conj(&mut d, c2);
            }
            Waveform::Otfs(p) => self.delay_transform(&mut d, p, true),
        }
        Ok(d)
    }

    /// `Q·v` without materializing `Q`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = self.modulate(v)?;
        self.dft.forward(&mut out);
        Ok(out)
    }

    /// `Q⁻¹·v = Qᴴ·v` without materializing `Q`.
    pub fn apply_inverse(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(v)?;
        let mut x = v.to_vec();
        self.dft.inverse(&mut x);
        self.demodulate(&x)
    }

    // (F_Lᴴ ⊗ I_K)·v, or (F_L ⊗ I_K)·v when `forward`; entry index is l·K + k.
    fn delay_transform(&self, v: &mut [Complex64], p: OtfsParams, forward: bool) {
        let (k_bins, l_bins) = (p.doppler_bins, p.delay_bins);
        let plan = self.delay_dft.as_ref().expect("otfs delay plan");
        let mut column = vec![ZERO; l_bins];
        for k in 0..k_bins {
            for (l, slot) in column.iter_mut().enumerate() {
                *slot = v[l * k_bins + k];
            }
            if forward {
                plan.forward(&mut column);
            } else {
                plan.inverse(&mut column);
            }
            for (l, value) in column.iter().enumerate() {
                v[l * k_bins + k] = *value;
            }
        }
    }
}

fn mul_diag(v: &mut [Complex64], diag: &[Complex64]) {
    v.iter_mut().zip(diag).for_each(|(a, b)| *a *= b);
}

fn mul_diag_conj(v: &mut [Complex64], diag: &[Complex64]) {
    v.iter_mut().zip(diag).for_each(|(a, b)| *a *= b.conj());
}

pub fn afdm_precoder(params: AfdmParams) -> Result<Precoder> {
    Precoder::new(Waveform::Afdm(params))
}

pub fn otfs_precoder(params: OtfsParams) -> Result<Precoder> {
    Precoder::new(Waveform::Otfs(params))
}

pub fn ofdm_precoder(n_subcarriers: usize) -> Result<Precoder> {
    Precoder::new(Waveform::Ofdm { n_subcarriers })
}

pub fn modulate(d: &[Complex64], p: &Precoder) -> Result<Vec<Complex64>> {
    p.modulate(d)
}

pub fn demodulate(x_hat: &[Complex64], p: &Precoder) -> Result<Vec<Complex64>> {
    p.demodulate(x_hat)
}

/// DAFT demodulation with trial chirps: `Λ_{c2'}*·F_N·Λ_{c1'}*·x̂`.
pub fn afdm_fast_demod(x_hat: &[Complex64], c1p: f64, c2p: f64) -> Result<Vec<Complex64>> {
    let n = x_hat.len();
    if n < 2 {
        return Err(Error::Dimension { min: 2, actual: n });
    }
    let mut d: Vec<Complex64> = x_hat
        .iter()
        .enumerate()
        .map(|(i, x)| x * chirp_phase(c1p, i).conj())
        .collect();
    Dft::shared(n).forward(&mut d);
    d.iter_mut()
        .enumerate()
        .for_each(|(k, z)| *z *= chirp_phase(c2p, k).conj());
    Ok(d)
}

/// Undoes the `exp(2πj·Δ2·k²)` rotation left by a `c2` mismatch.
pub fn correct_c2_rotation(d_hat: &[Complex64], delta2: f64) -> Vec<Complex64> {
    d_hat
        .iter()
        .enumerate()
        .map(|(k, z)| z * chirp_phase(delta2, k).conj())
        .collect()
}

/// Mismatch kernel `S1 = Σ_i exp(2πj(Δ1·i² + (m−k)·i/n))` by direct summation.
pub fn compute_s1(delta1: f64, m: usize, k: usize, n: usize) -> Complex64 {
    let shift = (m as i64 - k as i64).rem_euclid(n as i64) as usize;
    (0..n)
        .map(|i| {
            let linear = ((shift * i) % n) as f64 / n as f64;
            let quad = (delta1.rem_euclid(1.0) * (i * i) as f64).rem_euclid(1.0);
            cis_turns(quad + linear)
        })
        .sum()
}

/// `max_i |exp(2πj·Δ1·i²) − 1|` over `i = 0..n`.
pub fn chirp_residual(delta1: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| (chirp_phase(delta1, i) - crate::math::ONE).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Afdm(usize, i64, i64),
    Otfs(usize, usize),
    Ofdm(usize),
}

fn quantize(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

/// Shared cache of candidate precoders, keyed on waveform, `N` and the
/// parameters rounded to 1e−12.
#[derive(Default)]
pub struct PrecoderCache {
    entries: Mutex<HashMap<CacheKey, Arc<Precoder>>>,
}

impl PrecoderCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, waveform: Waveform) -> Result<Arc<Precoder>> {
        let key = match waveform {
            Waveform::Afdm(p) => CacheKey::Afdm(p.n_subcarriers, quantize(p.c1), quantize(p.c2)),
            Waveform::Otfs(p) => CacheKey::Otfs(p.n_subcarriers, p.doppler_bins),
            Waveform::Ofdm { n_subcarriers } => CacheKey::Ofdm(n_subcarriers),
        };
        if let Some(hit) = self.lock().get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(Precoder::new(waveform)?);
        Ok(self.lock().entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<CacheKey, Arc<Precoder>>> {
        self.entries.lock().expect("precoder cache poisoned")
    }
}
