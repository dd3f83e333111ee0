//! Doubly-dispersive cyclic channel, AWGN and linear equalizers.
//!
//! The channel acts on one `N`-sample block without any prefix:
//! `H = Σ_l h_l · Δ_{θ_l} · Π^{l}` where `Π` is the forward cyclic shift and
//! `Δ_θ = diag(exp(2πj·θ·k/N))`.

use nalgebra::{Dyn, LU};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{cis_turns, Complex64, ComplexMatrix, ZERO};

/// Largest condition number accepted by the zero-forcing inverse.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTap {
    pub gain: Complex64,
    /// Delay in samples.
    pub delay: usize,
    /// Normalized Doppler in cycles per frame.
    pub doppler: f64,
}

/// Tap list of one channel realization over an `n`-sample frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelSpecJson", into = "ChannelSpecJson")]
pub struct ChannelSpec {
    taps: Vec<ChannelTap>,
    theta_max: f64,
    n: usize,
}

impl ChannelSpec {
    pub fn new(taps: Vec<ChannelTap>, theta_max: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension { min: 1, actual: 0 });
        }
        if !(theta_max.is_finite() && theta_max >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "theta_max must be finite and nonnegative, got {theta_max}"
            )));
        }
        if !taps.iter().any(|t| t.gain.norm() > 0.0) {
            return Err(Error::InvalidParameter(
                "channel needs at least one tap with nonzero gain".into(),
            ));
        }
        for tap in &taps {
            if tap.delay >= n {
                return Err(Error::InvalidParameter(format!(
                    "tap delay {} exceeds frame length {n}",
                    tap.delay
                )));
            }
            if !(0.0..=theta_max).contains(&tap.doppler) {
                return Err(Error::InvalidParameter(format!(
                    "tap Doppler {} outside [0, {theta_max}]",
                    tap.doppler
                )));
            }
            if !(tap.gain.re.is_finite() && tap.gain.im.is_finite()) {
                return Err(Error::InvalidParameter("tap gain must be finite".into()));
            }
        }
        Ok(Self { taps, theta_max, n })
    }

    /// Single unit tap at delay zero.
    pub fn identity(n: usize) -> Self {
        Self::new(
            vec![ChannelTap {
                gain: Complex64::new(1.0, 0.0),
                delay: 0,
                doppler: 0.0,
            }],
            0.0,
            n,
        )
        .expect("identity channel is valid")
    }

    pub fn taps(&self) -> &[ChannelTap] {
        &self.taps
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `L_c = 1 + max delay`.
    pub fn channel_length(&self) -> usize {
        1 + self.taps.iter().map(|t| t.delay).max().unwrap_or(0)
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.gain.norm_sqr()).sum()
    }

    /// `H·x` in `O(N·taps)`.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        let mut y = vec![ZERO; n];
        for tap in &self.taps {
            for (k, out) in y.iter_mut().enumerate() {
                let src = (k + n - tap.delay % n) % n;
                *out += tap.gain * cis_turns(tap.doppler * k as f64 / n as f64) * x[src];
            }
        }
        Ok(y)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelSpecJson {
    n: usize,
    theta_max: f64,
    gains: Vec<[f64; 2]>,
    delays: Vec<usize>,
    dopplers: Vec<f64>,
}

impl TryFrom<ChannelSpecJson> for ChannelSpec {
    type Error = Error;

    fn try_from(raw: ChannelSpecJson) -> Result<Self> {
        if raw.gains.len() != raw.delays.len() || raw.gains.len() != raw.dopplers.len() {
            return Err(Error::Config(
                "gains, delays and dopplers must have equal lengths".into(),
            ));
        }
        let taps = raw
            .gains
            .iter()
            .zip(&raw.delays)
            .zip(&raw.dopplers)
            .map(|((g, &delay), &doppler)| ChannelTap {
                gain: Complex64::new(g[0], g[1]),
                delay,
                doppler,
            })
            .collect();
        ChannelSpec::new(taps, raw.theta_max, raw.n)
    }
}

impl From<ChannelSpec> for ChannelSpecJson {
    fn from(spec: ChannelSpec) -> Self {
        Self {
            n: spec.n,
            theta_max: spec.theta_max,
            gains: spec.taps.iter().map(|t| [t.gain.re, t.gain.im]).collect(),
            delays: spec.taps.iter().map(|t| t.delay).collect(),
            dopplers: spec.taps.iter().map(|t| t.doppler).collect(),
        }
    }
}

/// Dense `H = Σ_l h_l·Δ_{θ_l}·Π^{l}`.
pub fn build_channel_matrix(spec: &ChannelSpec) -> ComplexMatrix {
    let n = spec.n;
    let mut h = ComplexMatrix::zeros(n, n);
    for tap in &spec.taps {
        for k in 0..n {
            let col = (k + n - tap.delay % n) % n;
            let value = h.get(k, col) + tap.gain * cis_turns(tap.doppler * k as f64 / n as f64);
            h.set(k, col, value);
        }
    }
    h
}

/// Rayleigh taps at delays `0..n_taps` with a uniform power-delay profile,
/// normalized to unit total power, and Dopplers uniform on `[0, θ_max]`.
pub fn random_channel<R: Rng + ?Sized>(
    n_taps: usize,
    theta_max: f64,
    n: usize,
    rng: &mut R,
) -> Result<ChannelSpec> {
    if n_taps == 0 || n_taps > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n_taps <= n, got n_taps = {n_taps}, n = {n}"
        )));
    }
    if !(theta_max.is_finite() && theta_max >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "theta_max must be finite and nonnegative, got {theta_max}"
        )));
    }
    let mut gains: Vec<Complex64> = (0..n_taps).map(|_| complex_gaussian(rng, 1.0)).collect();
    let power: f64 = gains.iter().map(|g| g.norm_sqr()).sum();
    let scale = power.sqrt().recip();
    gains.iter_mut().for_each(|g| *g *= scale);
    let doppler = Uniform::new_inclusive(0.0, theta_max).expect("valid Doppler range");
    let taps = gains
        .into_iter()
        .enumerate()
        .map(|(delay, gain)| ChannelTap {
            gain,
            delay,
            doppler: doppler.sample(rng),
        })
        .collect();
    ChannelSpec::new(taps, theta_max, n)
}

/// Circular complex Gaussian with `E|z|² = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * sd, im * sd)
}

/// Per-sample complex noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub variance: f64,
}

impl NoiseSpec {
    /// `σ² = P·10^(−snr/10)`; an infinite SNR gives a noiseless link.
    pub fn from_snr_db(snr_db: f64, signal_power: f64) -> Self {
        let variance = if snr_db == f64::INFINITY {
            0.0
        } else {
            signal_power * 10f64.powf(-snr_db / 10.0)
        };
        Self { variance }
    }
}

/// `y = x + w` with `w ~ CN(0, σ²)`, `σ² = signal_power·10^(−snr_db/10)`.
/// `snr_db = +∞` returns `x` unchanged.
pub fn apply_awgn<R: Rng + ?Sized>(
    x: &[Complex64],
    snr_db: f64,
    signal_power: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if !(signal_power > 0.0 && signal_power.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "signal power must be positive, got {signal_power}"
        )));
    }
    if snr_db.is_nan() {
        return Err(Error::InvalidParameter("SNR is NaN".into()));
    }
    let noise = NoiseSpec::from_snr_db(snr_db, signal_power);
    if noise.variance == 0.0 {
        return Ok(x.to_vec());
    }
    Ok(x.iter()
        .map(|z| z + complex_gaussian(rng, noise.variance))
        .collect())
}

/// `G = H⁻¹`, refused when `cond(H) ≥ 1e12`.
pub fn zf_equalizer(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cond = h.condition_number();
    if cond.is_nan() || cond >= MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    h.try_inverse().ok_or(Error::IllConditioned(f64::INFINITY))
}

/// `G = Hᴴ·(H·Hᴴ + σ²·I)⁻¹` for unit-power symbols.
pub fn mmse_equalizer(h: &ComplexMatrix, noise_variance: f64) -> Result<ComplexMatrix> {
    check_noise_variance(noise_variance)?;
    let hh = h.adjoint();
    let loading = ComplexMatrix::identity(h.rows()).scale(Complex64::new(noise_variance, 0.0));
    let inner = &(h * &hh) + &loading;
    let inv = inner
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    Ok(&hh * &inv)
}

fn check_noise_variance(noise_variance: f64) -> Result<()> {
    if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be finite and nonnegative, got {noise_variance}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equalizer {
    Zf,
    Mmse,
}

impl Equalizer {
    /// Factorizes once so that several received frames can share one channel.
    pub fn prepare(self, h: &ComplexMatrix, noise_variance: f64) -> Result<PreparedEqualizer> {
        check_noise_variance(noise_variance)?;
        match self {
            Equalizer::Zf => {
                let cond = h.condition_number();
                if cond.is_nan() || cond >= MAX_CONDITION {
                    return Err(Error::IllConditioned(cond));
                }
                Ok(PreparedEqualizer {
                    lu: h.inner().clone().lu(),
                    adjoint: None,
                })
            }
            Equalizer::Mmse => {
                let hh = h.inner().adjoint();
                let mut inner = h.inner() * &hh;
                for i in 0..h.rows() {
                    inner[(i, i)] += Complex64::new(noise_variance, 0.0);
                }
                Ok(PreparedEqualizer {
                    lu: inner.lu(),
                    adjoint: Some(hh),
                })
            }
        }
    }
}

/// A factorized equalizer: `ZF: H⁻¹·y`, `MMSE: Hᴴ·(HHᴴ + σ²I)⁻¹·y`.
pub struct PreparedEqualizer {
    lu: LU<Complex64, Dyn, Dyn>,
    adjoint: Option<nalgebra::DMatrix<Complex64>>,
}

impl PreparedEqualizer {
    pub fn apply(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let rhs = nalgebra::DVector::from_column_slice(y);
        let z = self
            .lu
            .solve(&rhs)
            .ok_or(Error::IllConditioned(f64::INFINITY))?;
        let out = match &self.adjoint {
            Some(hh) => hh * z,
            None => z,
        };
        Ok(out.iter().copied().collect())
    }
}
