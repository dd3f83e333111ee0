//! Experiment configuration and the BER sweep drivers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{apply_awgn, random_channel, ChannelSpec, Equalizer, PreparedEqualizer};
use crate::eavesdropper::{
    afdm_candidates, attempt_demod, bruteforce, hard_decision_ber, otfs_candidates, AttackResult,
    Candidate, CandidateSet, Scoring, ScoringMode, SearchKind,
};
use crate::error::{Error, Result};
use crate::math::{divisor_count, divisors, Complex64};
use crate::montecarlo::{monte_carlo, trial_rng};
use crate::qpsk::{count_bit_errors, random_bits, Constellation, ErrorCount};
use crate::waveform::{afdm_fast_demod, AfdmParams, OtfsParams, Precoder, Waveform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    BerVsOtfsK,
    BerVsAfdmC1,
    BerVsSnrAttack,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BerVsOtfsK => "ber_vs_otfs_k",
            ExperimentKind::BerVsAfdmC1 => "ber_vs_afdm_c1",
            ExperimentKind::BerVsSnrAttack => "ber_vs_snr_attack",
        }
    }
}

/// Parameters the legitimate link actually uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformParams {
    #[serde(default = "default_doppler_bins")]
    pub doppler_bins: usize,
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[serde(default = "default_c2")]
    pub c2: f64,
}

fn default_doppler_bins() -> usize {
    16
}
fn default_c1() -> f64 {
    0.2
}
fn default_c2() -> f64 {
    1e-3
}
fn default_snr_db() -> f64 {
    25.0
}
fn default_theta_max() -> f64 {
    0.3
}
fn default_d_upper() -> f64 {
    0.3
}
fn default_epsilon() -> f64 {
    1.0
}
fn default_half_width() -> f64 {
    8e-5
}
fn default_points() -> usize {
    81
}
fn default_attack_waveforms() -> Vec<SearchKind> {
    vec![SearchKind::Otfs, SearchKind::Afdm]
}

impl Default for WaveformParams {
    fn default() -> Self {
        Self {
            doppler_bins: default_doppler_bins(),
            c1: default_c1(),
            c2: default_c2(),
        }
    }
}

/// Propagation model. `snr_db` is ignored by SNR sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelConfig {
    Awgn {
        #[serde(default = "default_snr_db")]
        snr_db: f64,
    },
    Multipath {
        n_taps: usize,
        #[serde(default = "default_theta_max")]
        theta_max: f64,
        #[serde(default = "default_snr_db")]
        snr_db: f64,
    },
}

impl ChannelConfig {
    pub fn snr_db(&self) -> f64 {
        match *self {
            ChannelConfig::Awgn { snr_db } | ChannelConfig::Multipath { snr_db, .. } => snr_db,
        }
    }

    pub fn default_equalizer(&self) -> Equalizer {
        match self {
            ChannelConfig::Awgn { .. } => Equalizer::Zf,
            ChannelConfig::Multipath { .. } => Equalizer::Mmse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepConfig {
    /// Every divisor `K'` of `N`.
    OtfsDivisors,
    /// `points` values of `c1'` evenly spread over `c1 ± half_width`.
    C1Window {
        #[serde(default = "default_half_width")]
        half_width: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
    SnrDb {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    /// Attempts per frame; σ(N) when absent.
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub scoring: ScoringMode,
    #[serde(default = "default_d_upper")]
    pub d_upper: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_theta_max")]
    pub theta_max: f64,
    #[serde(default = "default_attack_waveforms")]
    pub waveforms: Vec<SearchKind>,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            budget: None,
            scoring: ScoringMode::default(),
            d_upper: default_d_upper(),
            epsilon: default_epsilon(),
            theta_max: default_theta_max(),
            waveforms: default_attack_waveforms(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_subcarriers: usize,
    #[serde(default)]
    pub waveform_params: WaveformParams,
    pub channel: ChannelConfig,
    /// ZF for AWGN and MMSE for multipath when absent.
    #[serde(default)]
    pub equalizer: Option<Equalizer>,
    #[serde(default)]
    pub constellation: Constellation,
    pub trials: usize,
    pub master_seed: u64,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub attack: Option<AttackConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn equalizer(&self) -> Equalizer {
        self.equalizer
            .unwrap_or_else(|| self.channel.default_equalizer())
    }

    pub fn attack(&self) -> AttackConfig {
        self.attack.clone().unwrap_or_default()
    }

    /// Attempts per frame: the configured budget, else σ(N).
    pub fn budget(&self) -> Result<usize> {
        match self.attack().budget {
            Some(b) => Ok(b),
            None => divisor_count(self.n_subcarriers),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_subcarriers;
        let bad = |msg: String| Err(Error::Config(msg));
        if n < 2 {
            return bad(format!("n_subcarriers must be at least 2, got {n}"));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let wp = self.waveform_params;
        OtfsParams::with_doppler_bins(n, wp.doppler_bins)
            .map_err(|e| Error::Config(format!("waveform_params.doppler_bins: {e}")))?;
        AfdmParams::new(n, wp.c1, wp.c2)
            .map_err(|e| Error::Config(format!("waveform_params: {e}")))?;
        match self.channel {
            ChannelConfig::Awgn { snr_db } if snr_db.is_nan() => {
                return bad("channel.snr_db is NaN".into())
            }
            ChannelConfig::Multipath {
                n_taps,
                theta_max,
                snr_db,
            } => {
                if n_taps == 0 || n_taps > n {
                    return bad(format!("channel.n_taps must lie in 1..={n}, got {n_taps}"));
                }
                if !(theta_max.is_finite() && theta_max >= 0.0) {
                    return bad(format!(
                        "channel.theta_max must be nonnegative, got {theta_max}"
                    ));
                }
                if snr_db.is_nan() {
                    return bad("channel.snr_db is NaN".into());
                }
            }
            _ => {}
        }
        match (&self.experiment, &self.sweep) {
            (ExperimentKind::BerVsOtfsK, SweepConfig::OtfsDivisors) => {}
            (ExperimentKind::BerVsAfdmC1, SweepConfig::C1Window { half_width, points }) => {
                if *points == 0 {
                    return bad("sweep.points must be at least 1".into());
                }
                if !(half_width.is_finite() && *half_width >= 0.0) {
                    return bad(format!(
                        "sweep.half_width must be nonnegative, got {half_width}"
                    ));
                }
            }
            (ExperimentKind::BerVsSnrAttack, SweepConfig::SnrDb { values }) => {
                if values.is_empty() {
                    return bad("sweep.values is empty".into());
                }
                if values.iter().any(|v| v.is_nan()) {
                    return bad("sweep.values contains NaN".into());
                }
                let attack = self.attack();
                if attack.waveforms.is_empty() {
                    return bad("attack.waveforms is empty".into());
                }
                if self.budget()? == 0 {
                    return bad("attack.budget must be at least 1".into());
                }
                if attack.waveforms.contains(&SearchKind::Afdm) {
                    afdm_candidates(attack.theta_max, attack.d_upper, n, attack.epsilon)
                        .map_err(|e| Error::Config(format!("attack: {e}")))?;
                }
            }
            (kind, _) => {
                return bad(format!(
                    "sweep type does not match experiment {}",
                    kind.name()
                ));
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form, truncated to 12 digits.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(serde_json::to_vec(self)?);
        Ok(hex::encode(&digest[..6]))
    }
}

/// Bit error tallies along one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub label: String,
    pub sweep_variable: String,
    pub sweep_values: Vec<f64>,
    pub counts: Vec<ErrorCount>,
    pub trials_per_point: usize,
    pub seed: u64,
}

impl BerCurve {
    pub fn ber(&self) -> Vec<f64> {
        self.counts.iter().map(ErrorCount::ber).collect()
    }

    pub fn std_errors(&self) -> Vec<f64> {
        self.counts.iter().map(ErrorCount::std_error).collect()
    }

    pub fn len(&self) -> usize {
        self.sweep_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sweep_values.is_empty()
    }

    /// `sweep_value,ber,bits,errors,trials`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "sweep_value,ber,bits,errors,trials")?;
        for (x, c) in self.sweep_values.iter().zip(&self.counts) {
            writeln!(
                out,
                "{x},{},{},{},{}",
                c.ber(),
                c.bits,
                c.errors,
                self.trials_per_point
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Channel, noise and equalizer for one trial. A multipath draw is shared by
/// every frame sent through it.
enum Link {
    Awgn {
        snr_db: f64,
        equalizer: Equalizer,
    },
    Multipath {
        spec: ChannelSpec,
        snr_db: f64,
        equalizer: PreparedEqualizer,
    },
}

fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

impl Link {
    fn draw<R: Rng + ?Sized>(
        channel: &ChannelConfig,
        equalizer: Equalizer,
        n: usize,
        snr_db: f64,
        rng: &mut R,
    ) -> Result<Self> {
        match *channel {
            ChannelConfig::Awgn { .. } => Ok(Link::Awgn { snr_db, equalizer }),
            ChannelConfig::Multipath {
                n_taps, theta_max, ..
            } => {
                let spec = random_channel(n_taps, theta_max, n, rng)?;
                let h = crate::channel::build_channel_matrix(&spec);
                let equalizer = equalizer.prepare(&h, noise_variance(snr_db))?;
                Ok(Link::Multipath {
                    spec,
                    snr_db,
                    equalizer,
                })
            }
        }
    }

    /// Channel, unit-signal-power AWGN and equalization.
    fn receive<R: Rng + ?Sized>(&self, x: &[Complex64], rng: &mut R) -> Result<Vec<Complex64>> {
        match self {
            Link::Awgn { snr_db, equalizer } => {
                let y = apply_awgn(x, *snr_db, 1.0, rng)?;
                Ok(match equalizer {
                    Equalizer::Zf => y,
                    Equalizer::Mmse => {
                        let g = 1.0 / (1.0 + noise_variance(*snr_db));
                        y.into_iter().map(|z| z * g).collect()
                    }
                })
            }
            Link::Multipath {
                spec,
                snr_db,
                equalizer,
            } => {
                let y = apply_awgn(&spec.apply(x)?, *snr_db, 1.0, rng)?;
                equalizer.apply(&y)
            }
        }
    }
}

fn transmit_frame<R: Rng + ?Sized>(
    precoder: &Precoder,
    constellation: Constellation,
    rng: &mut R,
) -> Result<(Vec<u8>, Vec<Complex64>)> {
    let bits = random_bits(rng, constellation.bits_per_symbol() * precoder.n());
    let x = precoder.modulate(&constellation.map(&bits)?)?;
    Ok((bits, x))
}

fn sum_columns(rows: Vec<Vec<u64>>, width: usize) -> Vec<u64> {
    rows.into_iter().fold(vec![0; width], |mut acc, row| {
        acc.iter_mut().zip(row).for_each(|(a, r)| *a += r);
        acc
    })
}

fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    cfg.validate()?;
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "expected a {} config, got {}",
            kind.name(),
            cfg.experiment.name()
        )));
    }
    Ok(())
}

/// One frame per trial; each sweep value demodulates the same received frame.
fn run_single_frame_sweep(
    cfg: &ExperimentConfig,
    precoder: &Precoder,
    label: &str,
    sweep_variable: &str,
    sweep_values: Vec<f64>,
    demod: impl Fn(&[Complex64], usize) -> Result<Vec<Complex64>> + Sync,
) -> Result<BerCurve> {
    let n = cfg.n_subcarriers;
    let width = sweep_values.len();
    let constellation = cfg.constellation;
    let rows = monte_carlo(cfg.trials, cfg.master_seed, &[0], |_, rng| {
        let (bits, x) = transmit_frame(precoder, constellation, rng)?;
        let link = Link::draw(&cfg.channel, cfg.equalizer(), n, cfg.channel.snr_db(), rng)?;
        let y = link.receive(&x, rng)?;
        (0..width)
            .map(|i| {
                Ok(count_bit_errors(
                    &constellation.demap(&demod(&y, i)?),
                    &bits,
                ))
            })
            .collect::<Result<Vec<u64>>>()
    })?;
    let bits_per_point = (cfg.trials * n * constellation.bits_per_symbol()) as u64;
    Ok(BerCurve {
        label: label.into(),
        sweep_variable: sweep_variable.into(),
        sweep_values,
        counts: sum_columns(rows, width)
            .into_iter()
            .map(|e| ErrorCount::new(e, bits_per_point))
            .collect(),
        trials_per_point: cfg.trials,
        seed: cfg.master_seed,
    })
}

/// BER when an OTFS frame sent on the true grid is demodulated with every
/// divisor `K'` of `N`.
pub fn run_ber_vs_otfs_k(cfg: &ExperimentConfig) -> Result<BerCurve> {
    expect_kind(cfg, ExperimentKind::BerVsOtfsK)?;
    let n = cfg.n_subcarriers;
    let truth = OtfsParams::with_doppler_bins(n, cfg.waveform_params.doppler_bins)?;
    let precoder = Precoder::new(Waveform::Otfs(truth))?;
    let ks = divisors(n)?;
    let candidates: Vec<Candidate> = ks
        .iter()
        .map(|&k| Candidate::Otfs {
            doppler_bins: k,
            delay_bins: n / k,
        })
        .collect();
    run_single_frame_sweep(
        cfg,
        &precoder,
        "otfs",
        "doppler_bins",
        ks.iter().map(|&k| k as f64).collect(),
        |y, i| attempt_demod(y, &candidates[i]),
    )
}

/// `points` values `c1' = c1 + t`, `t` evenly spaced on `[−half_width, half_width]`.
/// The middle point of an odd count is `c1` exactly.
pub fn c1_window(c1: f64, half_width: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![c1];
    }
    let span = (points - 1) as f64;
    (0..points)
        .map(|i| c1 + half_width * (2.0 * i as f64 - span) / span)
        .collect()
}

/// BER of an AFDM frame demodulated with `c1'` swept around the true `c1`
/// (with `c2` known).
pub fn run_ber_vs_afdm_c1(cfg: &ExperimentConfig) -> Result<BerCurve> {
    expect_kind(cfg, ExperimentKind::BerVsAfdmC1)?;
    let SweepConfig::C1Window { half_width, points } = cfg.sweep else {
        unreachable!("validated sweep")
    };
    let wp = cfg.waveform_params;
    let precoder = Precoder::new(Waveform::Afdm(AfdmParams::new(
        cfg.n_subcarriers,
        wp.c1,
        wp.c2,
    )?))?;
    let c1s = c1_window(wp.c1, half_width, points);
    let c1s_demod = c1s.clone();
    run_single_frame_sweep(cfg, &precoder, "afdm", "c1", c1s, move |y, i| {
        afdm_fast_demod(y, c1s_demod[i], wp.c2)
    })
}

fn transmit_precoder(cfg: &ExperimentConfig, kind: SearchKind) -> Result<Precoder> {
    let n = cfg.n_subcarriers;
    let wp = cfg.waveform_params;
    Precoder::new(match kind {
        SearchKind::Otfs => Waveform::Otfs(OtfsParams::with_doppler_bins(n, wp.doppler_bins)?),
        SearchKind::Afdm => Waveform::Afdm(AfdmParams::new(n, wp.c1, wp.c2)?),
    })
}

fn search_space(cfg: &ExperimentConfig, kind: SearchKind) -> Result<CandidateSet> {
    let attack = cfg.attack();
    match kind {
        SearchKind::Otfs => otfs_candidates(cfg.n_subcarriers),
        SearchKind::Afdm => Ok(afdm_candidates(
            attack.theta_max,
            attack.d_upper,
            cfg.n_subcarriers,
            attack.epsilon,
        )?
        .with_known_c2(cfg.waveform_params.c2)),
    }
}

fn kind_label(kind: SearchKind) -> &'static str {
    match kind {
        SearchKind::Otfs => "otfs",
        SearchKind::Afdm => "afdm",
    }
}

struct AttackSetup {
    kind: SearchKind,
    precoder: Precoder,
    space: CandidateSet,
}

fn attack_setups(cfg: &ExperimentConfig, only: Option<SearchKind>) -> Result<Vec<AttackSetup>> {
    cfg.attack()
        .waveforms
        .into_iter()
        .filter(|k| only.is_none_or(|o| o == *k))
        .map(|kind| {
            Ok(AttackSetup {
                kind,
                precoder: transmit_precoder(cfg, kind)?,
                space: search_space(cfg, kind)?,
            })
        })
        .collect()
}

/// Transmitted bits, equalized frame and attack log for one waveform.
type Intercept = (Vec<u8>, Vec<Complex64>, AttackResult);

/// One frame per waveform through a shared link, followed by one brute-force
/// attack each. Returns `(bits, equalized frame, result)` per waveform.
fn attack_trial<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    setups: &[AttackSetup],
    snr_db: f64,
    budget: usize,
    rng: &mut R,
) -> Result<Vec<Intercept>> {
    let scoring = cfg.attack().scoring;
    let link = Link::draw(
        &cfg.channel,
        cfg.equalizer(),
        cfg.n_subcarriers,
        snr_db,
        rng,
    )?;
    setups
        .iter()
        .map(|setup| {
            let (bits, x) = transmit_frame(&setup.precoder, cfg.constellation, rng)?;
            let y = link.receive(&x, rng)?;
            let picked = setup.space.sample(budget, rng);
            let result = bruteforce(&y, &picked, &Scoring::new(scoring, &bits), None)?;
            Ok((bits, y, result))
        })
        .collect()
}

fn winner_errors(bits: &[u8], y: &[Complex64], result: &AttackResult) -> Result<u64> {
    let winner = result.winner_attempt();
    let ber = match winner.ber_vs_truth {
        Some(ber) => ber,
        None => hard_decision_ber(&attempt_demod(y, &winner.candidate)?, bits)?,
    };
    Ok((ber * bits.len() as f64).round() as u64)
}

/// Eavesdropper BER versus SNR: per trial a budget of candidates is tried and
/// the winner's bit errors are counted. One curve per attacked waveform.
pub fn run_ber_vs_snr_attack(cfg: &ExperimentConfig) -> Result<Vec<BerCurve>> {
    expect_kind(cfg, ExperimentKind::BerVsSnrAttack)?;
    let SweepConfig::SnrDb { values } = &cfg.sweep else {
        unreachable!("validated sweep")
    };
    let setups = attack_setups(cfg, None)?;
    let budget = cfg.budget()?;
    let width = setups.len();
    let mut counts = vec![Vec::with_capacity(values.len()); width];
    for (s, &snr_db) in values.iter().enumerate() {
        let rows = monte_carlo(cfg.trials, cfg.master_seed, &[s as u64], |_, rng| {
            attack_trial(cfg, &setups, snr_db, budget, rng)?
                .iter()
                .map(|(bits, y, result)| winner_errors(bits, y, result))
                .collect::<Result<Vec<u64>>>()
        })?;
        let bits_per_point =
            (cfg.trials * cfg.n_subcarriers * cfg.constellation.bits_per_symbol()) as u64;
        for (w, errors) in sum_columns(rows, width).into_iter().enumerate() {
            counts[w].push(ErrorCount::new(errors, bits_per_point));
        }
    }
    Ok(setups
        .iter()
        .zip(counts)
        .map(|(setup, counts)| BerCurve {
            label: kind_label(setup.kind).into(),
            sweep_variable: "snr_db".into(),
            sweep_values: values.clone(),
            counts,
            trials_per_point: cfg.trials,
            seed: cfg.master_seed,
        })
        .collect())
}

/// A single attack on one frame at the first configured SNR, with every
/// attempt annotated by its true BER.
pub fn run_attack_demo(
    cfg: &ExperimentConfig,
    waveform: Option<SearchKind>,
) -> Result<Vec<AttackResult>> {
    cfg.validate()?;
    let snr_db = match &cfg.sweep {
        SweepConfig::SnrDb { values } => values[0],
        _ => cfg.channel.snr_db(),
    };
    let setups = attack_setups(cfg, waveform)?;
    if setups.is_empty() {
        return Err(Error::Config(
            "requested waveform is not in attack.waveforms".into(),
        ));
    }
    let mut rng = trial_rng(cfg.master_seed, &[0, 0]);
    attack_trial(cfg, &setups, snr_db, cfg.budget()?, &mut rng)?
        .into_iter()
        .map(|(bits, y, mut result)| {
            result.annotate_truth(&y, &bits)?;
            Ok(result)
        })
        .collect()
}

/// Matched-demodulation BER over AWGN (ZF) for each SNR in `snr_db`.
pub fn run_matched_ber(
    waveform: Waveform,
    snr_db: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<BerCurve> {
    let precoder = Precoder::new(waveform)?;
    let constellation = Constellation::Qpsk;
    let n = precoder.n();
    let counts = snr_db
        .iter()
        .enumerate()
        .map(|(s, &snr)| {
            let link = Link::Awgn {
                snr_db: snr,
                equalizer: Equalizer::Zf,
            };
            let errors: u64 = monte_carlo(trials, master_seed, &[s as u64], |_, rng| {
                let (bits, x) = transmit_frame(&precoder, constellation, rng)?;
                let d_hat = precoder.demodulate(&link.receive(&x, rng)?)?;
                Ok(count_bit_errors(&constellation.demap(&d_hat), &bits))
            })?
            .into_iter()
            .sum();
            Ok(ErrorCount::new(errors, (trials * n * 2) as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BerCurve {
        label: waveform.name().into(),
        sweep_variable: "snr_db".into(),
        sweep_values: snr_db.to_vec(),
        counts,
        trials_per_point: trials,
        seed: master_seed,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<BerCurve>> {
    match cfg.experiment {
        ExperimentKind::BerVsOtfsK => Ok(vec![run_ber_vs_otfs_k(cfg)?]),
        ExperimentKind::BerVsAfdmC1 => Ok(vec![run_ber_vs_afdm_c1(cfg)?]),
        ExperimentKind::BerVsSnrAttack => run_ber_vs_snr_attack(cfg),
    }
}

/// Writes one CSV per curve and a gnuplot script plotting them all.
/// Returns the written paths, CSVs first.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    curves: &[BerCurve],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let hash = cfg.hash()?;
    let stem = cfg.experiment.name();
    let mut paths = Vec::with_capacity(curves.len() + 1);
    for curve in curves {
        let path = dir.join(format!("{stem}-{}-{hash}.csv", curve.label));
        curve.write_csv(fs::File::create(&path)?)?;
        paths.push(path);
    }
    let script = plot_script(cfg, curves, &paths);
    let script_path = dir.join(format!("{stem}-{hash}.gp"));
    fs::write(&script_path, script)?;
    paths.push(script_path);
    Ok(paths)
}

fn plot_script(cfg: &ExperimentConfig, curves: &[BerCurve], csvs: &[PathBuf]) -> String {
    let xlabel = curves.first().map_or("", |c| c.sweep_variable.as_str());
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel 'BER'");
    if cfg.experiment == ExperimentKind::BerVsSnrAttack {
        let _ = writeln!(s, "set logscale y");
    }
    let _ = writeln!(s, "set title '{}'", cfg.experiment.name());
    let plots: Vec<String> = curves
        .iter()
        .zip(csvs)
        .map(|(c, p)| {
            let file = p
                .file_name()
                .map_or_else(String::new, |f| f.to_string_lossy().into_owned());
            format!("'{file}' using 1:2 with linespoints title '{}'", c.label)
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
