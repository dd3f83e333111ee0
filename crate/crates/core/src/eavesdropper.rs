//! Brute-force blind demodulation.
//!
//! The eavesdropper is synchronized, equalizes perfectly and knows `N`, but
//! not the waveform parameters. It walks a candidate list, demodulates the
//! equalized frame with every candidate and keeps the best-scoring one.
//!
//! * OTFS: one candidate `(K', N/K')` per divisor `K'` of `N`.
//! * AFDM: a `c1'` grid over `[θ_max/N, D]` with step `ε/(π(N−1)²)`; `c2` is
//!   assumed known, so a `c2` error never enters the loop.

use std::io::Write;
use std::sync::OnceLock;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::afdm_step;
use crate::error::{Error, Result};
use crate::math::{divisors, Complex64};
use crate::qpsk::{count_bit_errors, qpsk_demap};
use crate::waveform::{afdm_fast_demod, OtfsParams, PrecoderCache, Waveform};

/// Default success threshold on the winner's score.
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "waveform", rename_all = "snake_case")]
pub enum Candidate {
    Otfs {
        doppler_bins: usize,
        delay_bins: usize,
    },
    Afdm {
        c1: f64,
        c2: f64,
    },
}

impl Candidate {
    /// The swept coordinate: `K'` for OTFS, `c1'` for AFDM.
    pub fn parameter(&self) -> f64 {
        match *self {
            Candidate::Otfs { doppler_bins, .. } => doppler_bins as f64,
            Candidate::Afdm { c1, .. } => c1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchKind {
    Otfs,
    Afdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenerationMeta {
    Otfs {
        n: usize,
    },
    Afdm {
        n: usize,
        theta_max: f64,
        d_upper: f64,
        epsilon: f64,
        step: f64,
    },
}

/// Ordered candidate list for one brute-force search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub waveform: SearchKind,
    pub candidates: Vec<Candidate>,
    pub generation_meta: GenerationMeta,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Sets the `c2'` used by every AFDM candidate (the eavesdropper knows `c2`).
    pub fn with_known_c2(mut self, c2: f64) -> Self {
        for cand in &mut self.candidates {
            if let Candidate::Afdm { c2: slot, .. } = cand {
                *slot = c2;
            }
        }
        self
    }

    /// Keeps only candidates satisfying `keep`.
    pub fn filter(mut self, keep: impl Fn(&Candidate) -> bool) -> Self {
        self.candidates.retain(|c| keep(c));
        self
    }

    /// `budget` distinct candidates drawn uniformly without replacement, in
    /// draw order. The whole set is returned when the budget covers it.
    ///
    /// Distinct AFDM grid points are at least one step (`2Δ1`) apart.
    pub fn sample<R: Rng + ?Sized>(&self, budget: usize, rng: &mut R) -> CandidateSet {
        if budget >= self.len() {
            return self.clone();
        }
        let picks = index::sample(rng, self.len(), budget);
        CandidateSet {
            waveform: self.waveform,
            candidates: picks.iter().map(|i| self.candidates[i]).collect(),
            generation_meta: self.generation_meta,
        }
    }
}

/// One candidate `(K', N/K')` per divisor of `n`, ascending in `K'`.
pub fn otfs_candidates(n: usize) -> Result<CandidateSet> {
    if n < 2 {
        return Err(Error::Dimension { min: 2, actual: n });
    }
    let candidates = divisors(n)?
        .into_iter()
        .map(|k| Candidate::Otfs {
            doppler_bins: k,
            delay_bins: n / k,
        })
        .collect();
    Ok(CandidateSet {
        waveform: SearchKind::Otfs,
        candidates,
        generation_meta: GenerationMeta::Otfs { n },
    })
}

/// Grid `c1' = θ_max/N + i·step`, `step = ε/(π(N−1)²)`, covering `[θ_max/N, D]`.
/// Candidates carry `c2' = 0` until [`CandidateSet::with_known_c2`].
pub fn afdm_candidates(
    theta_max: f64,
    d_upper: f64,
    n: usize,
    epsilon: f64,
) -> Result<CandidateSet> {
    let count = afdm_candidate_count(theta_max, d_upper, n, epsilon)?;
    let lower = theta_max / n as f64;
    let step = afdm_step(n, epsilon)?;
    let candidates = (0..count)
        .map(|i| Candidate::Afdm {
            c1: lower + i as f64 * step,
            c2: 0.0,
        })
        .collect();
    Ok(CandidateSet {
        waveform: SearchKind::Afdm,
        candidates,
        generation_meta: GenerationMeta::Afdm {
            n,
            theta_max,
            d_upper,
            epsilon,
            step,
        },
    })
}

/// `1 + ⌊(D − θ_max/N)/step⌋` without building the grid.
pub fn afdm_candidate_count(theta_max: f64, d_upper: f64, n: usize, epsilon: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::Dimension { min: 2, actual: n });
    }
    if !(theta_max.is_finite() && theta_max >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "theta_max must be finite and nonnegative, got {theta_max}"
        )));
    }
    let lower = theta_max / n as f64;
    if !(d_upper.is_finite() && d_upper > lower) {
        return Err(Error::EmptySearchRange {
            lower,
            upper: d_upper,
        });
    }
    let step = afdm_step(n, epsilon)?;
    Ok(1 + ((d_upper - lower) / step).floor() as usize)
}

fn precoder_cache() -> &'static PrecoderCache {
    static CACHE: OnceLock<PrecoderCache> = OnceLock::new();
    CACHE.get_or_init(PrecoderCache::new)
}

/// Demodulates an equalized frame with one candidate.
pub fn attempt_demod(y_equalized: &[Complex64], candidate: &Candidate) -> Result<Vec<Complex64>> {
    match *candidate {
        Candidate::Otfs {
            doppler_bins,
            delay_bins,
        } => {
            let params = OtfsParams::new(y_equalized.len(), doppler_bins, delay_bins)?;
            precoder_cache()
                .get(Waveform::Otfs(params))?
                .demodulate(y_equalized)
        }
        Candidate::Afdm { c1, c2 } => afdm_fast_demod(y_equalized, c1, c2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringMode {
    #[default]
    GroundTruthBer,
    BlindFourthPower,
}

/// How a demodulated frame is scored; lower is better.
#[derive(Debug, Clone, Copy)]
pub enum Scoring<'a> {
    /// Hard-decision BER against the transmitted bits.
    GroundTruthBer { bits: &'a [u8] },
    /// `1 − |mean(d̂⁴)| / mean(|d̂|⁴)`: near 0 for a clean QPSK cloud.
    BlindFourthPower,
}

impl<'a> Scoring<'a> {
    pub fn new(mode: ScoringMode, bits: &'a [u8]) -> Self {
        match mode {
            ScoringMode::GroundTruthBer => Scoring::GroundTruthBer { bits },
            ScoringMode::BlindFourthPower => Scoring::BlindFourthPower,
        }
    }
}

pub fn score_candidate(d_hat: &[Complex64], scoring: &Scoring<'_>) -> Result<f64> {
    match scoring {
        Scoring::GroundTruthBer { bits } => hard_decision_ber(d_hat, bits),
        Scoring::BlindFourthPower => Ok(fourth_power_score(d_hat)),
    }
}

pub fn hard_decision_ber(d_hat: &[Complex64], bits: &[u8]) -> Result<f64> {
    if bits.len() != 2 * d_hat.len() {
        return Err(Error::LengthMismatch {
            expected: 2 * d_hat.len(),
            actual: bits.len(),
        });
    }
    if bits.is_empty() {
        return Ok(0.0);
    }
    Ok(count_bit_errors(&qpsk_demap(d_hat), bits) as f64 / bits.len() as f64)
}

fn fourth_power_score(d_hat: &[Complex64]) -> f64 {
    let n = d_hat.len() as f64;
    let (sum4, sum_abs4) = d_hat
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(s, a), z| {
            let z2 = z * z;
            (s + z2 * z2, a + z.norm_sqr() * z.norm_sqr())
        });
    if sum_abs4 == 0.0 {
        return 1.0;
    }
    (1.0 - (sum4 / n).norm() / (sum_abs4 / n)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub candidate: Candidate,
    pub score: f64,
    pub ber_vs_truth: Option<f64>,
}

/// Log of one brute-force run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub waveform: SearchKind,
    pub attempts: Vec<Attempt>,
    /// Index into `attempts` of the lowest score (earliest on ties).
    pub winner: usize,
    pub attempts_used: usize,
    pub succeeded: bool,
}

impl AttackResult {
    pub fn winner_attempt(&self) -> &Attempt {
        &self.attempts[self.winner]
    }

    /// Fills `ber_vs_truth` for every attempt from the transmitted bits.
    pub fn annotate_truth(&mut self, y_equalized: &[Complex64], bits: &[u8]) -> Result<()> {
        for attempt in &mut self.attempts {
            let d_hat = attempt_demod(y_equalized, &attempt.candidate)?;
            attempt.ber_vs_truth = Some(hard_decision_ber(&d_hat, bits)?);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Two-column `parameter,score` CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "parameter,score")?;
        for attempt in &self.attempts {
            writeln!(out, "{},{}", attempt.candidate.parameter(), attempt.score)?;
        }
        Ok(())
    }
}

/// Scores candidates in order and reports the argmin.
///
/// With `early_stop_threshold` the walk is sequential and stops at the first
/// score at or below the threshold; otherwise every candidate is scored (in
/// parallel, merged in candidate order). `succeeded` compares the winner's
/// score with the threshold, or with [`DEFAULT_SUCCESS_THRESHOLD`].
pub fn bruteforce(
    y_equalized: &[Complex64],
    candidates: &CandidateSet,
    scoring: &Scoring<'_>,
    early_stop_threshold: Option<f64>,
) -> Result<AttackResult> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("empty candidate set".into()));
    }
    let ground_truth = matches!(scoring, Scoring::GroundTruthBer { .. });
    let evaluate = |candidate: &Candidate| -> Result<Attempt> {
        let d_hat = attempt_demod(y_equalized, candidate)?;
        let score = score_candidate(&d_hat, scoring)?;
        Ok(Attempt {
            candidate: *candidate,
            score,
            ber_vs_truth: ground_truth.then_some(score),
        })
    };

    let attempts: Vec<Attempt> = match early_stop_threshold {
        Some(threshold) => {
            let mut done = Vec::new();
            for candidate in &candidates.candidates {
                let attempt = evaluate(candidate)?;
                let stop = attempt.score <= threshold;
                done.push(attempt);
                if stop {
                    break;
                }
            }
            done
        }
        None => candidates
            .candidates
            .par_iter()
            .map(evaluate)
            .collect::<Result<_>>()?,
    };

    let winner = attempts.iter().enumerate().fold(0, |best, (i, a)| {
        if a.score < attempts[best].score {
            i
        } else {
            best
        }
    });
    let threshold = early_stop_threshold.unwrap_or(DEFAULT_SUCCESS_THRESHOLD);
    Ok(AttackResult {
        waveform: candidates.waveform,
        succeeded: attempts[winner].score <= threshold,
        attempts_used: attempts.len(),
        attempts,
        winner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::divisor_count;
    use crate::qpsk::{qpsk_map, random_bits};
    use crate::waveform::{afdm_precoder, otfs_precoder, AfdmParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn otfs_frame(n: usize, k: usize, seed: u64) -> (Vec<u8>, Vec<Complex64>) {
        let bits = random_bits(&mut ChaCha8Rng::seed_from_u64(seed), 2 * n);
        let d = qpsk_map(&bits).unwrap();
        let p = otfs_precoder(OtfsParams::with_doppler_bins(n, k).unwrap()).unwrap();
        (bits, p.modulate(&d).unwrap())
    }

    #[test]
    fn otfs_candidate_examples() {
        let set = otfs_candidates(128).unwrap();
        let ks: Vec<f64> = set.candidates.iter().map(Candidate::parameter).collect();
        assert_eq!(ks, vec![1., 2., 4., 8., 16., 32., 64., 128.]);
        assert_eq!(otfs_candidates(64).unwrap().len(), 7);
        assert_eq!(
            otfs_candidates(7).unwrap().candidates,
            vec![
                Candidate::Otfs {
                    doppler_bins: 1,
                    delay_bins: 7
                },
                Candidate::Otfs {
                    doppler_bins: 7,
                    delay_bins: 1
                },
            ]
        );
        assert!(otfs_candidates(1).is_err());
    }

    #[test]
    fn otfs_candidate_count_is_divisor_count() {
        for n in 2..=10_000 {
            assert_eq!(
                otfs_candidates(n).unwrap().len(),
                divisor_count(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn afdm_grid_examples() {
        let set = afdm_candidates(0.3, 0.3, 128, 1.0).unwrap();
        let ma = PI * (0.3 * 128.0 - 0.3) * 127.0 * 127.0 / 128.0;
        assert!(
            (set.len() as f64 - ma).abs() <= 1.0,
            "{} vs {ma}",
            set.len()
        );
        assert!((1.508e4..1.509e4).contains(&(set.len() as f64)));
        let GenerationMeta::Afdm { step, .. } = set.generation_meta else {
            panic!("wrong meta")
        };
        assert!((step - 1.9735e-5).abs() < 1e-9);
        let c1s: Vec<f64> = set.candidates.iter().map(Candidate::parameter).collect();
        assert!((c1s[0] - 0.3 / 128.0).abs() < 1e-15);
        assert!(c1s.windows(2).all(|w| ((w[1] - w[0]) - step).abs() < 1e-12));
        assert!(c1s.iter().all(|&c| (0.3 / 128.0..=0.3).contains(&c)));

        assert!(matches!(
            afdm_candidates(0.3, 0.3 / 128.0, 128, 1.0),
            Err(Error::EmptySearchRange { .. })
        ));
        assert!(afdm_candidates(0.3, 0.3, 128, 0.0).is_err());
        assert!(afdm_candidates(0.3, 0.3, 128, 1.5).is_err());
    }

    #[test]
    fn afdm_count_formula() {
        for (n, theta, d, eps) in [
            (32, 0.3, 0.1, 1.0),
            (64, 0.3, 0.1, 0.5),
            (128, 0.0, 0.05, 0.25),
        ] {
            let set = afdm_candidates(theta, d, n, eps).unwrap();
            let lower = theta / n as f64;
            let expected =
                ((d - lower) * PI * ((n - 1) * (n - 1)) as f64 / eps).floor() as usize + 1;
            assert_eq!(set.len(), expected);
            assert_eq!(afdm_candidate_count(theta, d, n, eps).unwrap(), expected);
        }
    }

    #[test]
    fn known_c2_and_sampling() {
        let set = afdm_candidates(0.3, 0.3, 128, 1.0)
            .unwrap()
            .with_known_c2(1e-3);
        assert!(set
            .candidates
            .iter()
            .all(|c| matches!(c, Candidate::Afdm { c2, .. } if *c2 == 1e-3)));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let picked = set.sample(8, &mut rng);
        assert_eq!(picked.len(), 8);
        let mut c1s: Vec<f64> = picked.candidates.iter().map(Candidate::parameter).collect();
        c1s.sort_by(f64::total_cmp);
        assert!(c1s
            .windows(2)
            .all(|w| w[1] - w[0] >= 1.0 / (PI * 127.0 * 127.0) * 0.999));
        assert_eq!(otfs_candidates(12).unwrap().sample(100, &mut rng).len(), 6);
    }

    #[test]
    fn otfs_correct_candidate_recovers_data() {
        let (bits, y) = otfs_frame(64, 16, 1);
        let d = qpsk_map(&bits).unwrap();
        let cand = Candidate::Otfs {
            doppler_bins: 16,
            delay_bins: 4,
        };
        let d_hat = attempt_demod(&y, &cand).unwrap();
        assert!(crate::math::max_abs_diff(&d_hat, &d) < 1e-9);
    }

    #[test]
    fn otfs_wrong_candidates_sit_near_half() {
        let n = 128;
        let mut errors = [0.0; 8];
        for seed in 0..50 {
            let (bits, y) = otfs_frame(n, 16, seed);
            for (i, cand) in otfs_candidates(n).unwrap().candidates.iter().enumerate() {
                let d_hat = attempt_demod(&y, cand).unwrap();
                errors[i] += hard_decision_ber(&d_hat, &bits).unwrap() / 50.0;
            }
        }
        for (i, ber) in errors.iter().enumerate() {
            if i == 4 {
                assert_eq!(*ber, 0.0);
            } else {
                assert!((0.4..=0.6).contains(ber), "K' index {i}: {ber}");
            }
        }
    }

    #[test]
    fn unique_noiseless_otfs_solution() {
        for n in [16usize, 32, 64, 128] {
            for k in divisors(n).unwrap() {
                let (bits, y) = otfs_frame(n, k, (n * 1000 + k) as u64);
                let winners: Vec<usize> = otfs_candidates(n)
                    .unwrap()
                    .candidates
                    .iter()
                    .filter(|c| {
                        let d_hat = attempt_demod(&y, c).unwrap();
                        hard_decision_ber(&d_hat, &bits).unwrap() < 1e-6
                    })
                    .map(|c| c.parameter() as usize)
                    .collect();
                assert_eq!(winners, vec![k], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn scoring_examples() {
        let bits = random_bits(&mut ChaCha8Rng::seed_from_u64(3), 256);
        let d = qpsk_map(&bits).unwrap();
        assert_eq!(
            score_candidate(&d, &Scoring::GroundTruthBer { bits: &bits }).unwrap(),
            0.0
        );
        assert!(score_candidate(&d, &Scoring::BlindFourthPower).unwrap() < 0.01);
        let mut d4 = Complex64::new(0.0, 0.0);
        for z in &d {
            d4 += z.powi(4);
        }
        assert!((d4 / d.len() as f64 + 1.0).norm() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let uniform: Vec<Complex64> = (0..128)
            .map(|_| crate::math::cis_turns(rng.random::<f64>()))
            .collect();
        assert!(score_candidate(&uniform, &Scoring::BlindFourthPower).unwrap() > 0.7);
        assert!(score_candidate(&d[..10], &Scoring::GroundTruthBer { bits: &bits }).is_err());
    }

    #[test]
    fn bruteforce_otfs_succeeds_within_budget() {
        let (bits, y) = otfs_frame(128, 16, 9);
        let set = otfs_candidates(128).unwrap();
        let result = bruteforce(
            &y,
            &set,
            &Scoring::GroundTruthBer { bits: &bits },
            Some(0.1),
        )
        .unwrap();
        assert!(result.succeeded);
        assert!(result.attempts_used <= 8);
        assert_eq!(
            result.winner_attempt().candidate,
            Candidate::Otfs {
                doppler_bins: 16,
                delay_bins: 8
            }
        );
        // Early stop ends the walk on the true grid (fifth divisor).
        assert_eq!(result.attempts_used, 5);

        let full = bruteforce(&y, &set, &Scoring::BlindFourthPower, None).unwrap();
        assert_eq!(full.attempts_used, 8);
        assert_eq!(full.winner, 4);
        assert!(full.attempts.iter().all(|a| a.ber_vs_truth.is_none()));
    }

    #[test]
    fn bruteforce_afdm_small_budget_fails() {
        let (n, c1, c2) = (128, 0.2, 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let bits = random_bits(&mut rng, 2 * n);
        let y = afdm_precoder(AfdmParams::new(n, c1, c2).unwrap())
            .unwrap()
            .modulate(&qpsk_map(&bits).unwrap())
            .unwrap();
        let step = 1.0 / (PI * 127.0 * 127.0);
        let grid = afdm_candidates(0.3, 0.3, n, 1.0)
            .unwrap()
            .with_known_c2(c2)
            .filter(|c| (c.parameter() - c1).abs() >= 2.0 * step);
        let picked = grid.sample(8, &mut rng);
        let result =
            bruteforce(&y, &picked, &Scoring::GroundTruthBer { bits: &bits }, None).unwrap();
        assert!(!result.succeeded);
        let best = result.winner_attempt().score;
        assert!((0.3..=0.6).contains(&best), "winner BER {best}");
    }

    #[test]
    fn bruteforce_single_true_candidate() {
        let (bits, y) = otfs_frame(32, 4, 2);
        let set = CandidateSet {
            waveform: SearchKind::Otfs,
            candidates: vec![Candidate::Otfs {
                doppler_bins: 4,
                delay_bins: 8,
            }],
            generation_meta: GenerationMeta::Otfs { n: 32 },
        };
        let result = bruteforce(&y, &set, &Scoring::GroundTruthBer { bits: &bits }, None).unwrap();
        assert_eq!(result.winner, 0);
        assert_eq!(result.winner_attempt().score, 0.0);
        assert!(result.succeeded);

        let empty = CandidateSet {
            candidates: vec![],
            ..set
        };
        assert!(bruteforce(&y, &empty, &Scoring::BlindFourthPower, None).is_err());
    }

    #[test]
    fn winner_tie_break_is_earliest() {
        let (bits, y) = otfs_frame(16, 4, 8);
        let cand = Candidate::Otfs {
            doppler_bins: 4,
            delay_bins: 4,
        };
        let set = CandidateSet {
            waveform: SearchKind::Otfs,
            candidates: vec![
                Candidate::Otfs {
                    doppler_bins: 1,
                    delay_bins: 16,
                },
                cand,
                cand,
            ],
            generation_meta: GenerationMeta::Otfs { n: 16 },
        };
        let result = bruteforce(&y, &set, &Scoring::GroundTruthBer { bits: &bits }, None).unwrap();
        assert_eq!(result.winner, 1);
    }

    #[test]
    fn attack_result_serialization() {
        let (bits, y) = otfs_frame(16, 2, 4);
        let mut result = bruteforce(
            &y,
            &otfs_candidates(16).unwrap(),
            &Scoring::BlindFourthPower,
            None,
        )
        .unwrap();
        result.annotate_truth(&y, &bits).unwrap();
        assert_eq!(result.winner_attempt().ber_vs_truth, Some(0.0));

        let json: serde_json::Value = serde_json::from_str(&result.to_json().unwrap()).unwrap();
        assert_eq!(json["attempts_used"], 5);
        assert_eq!(json["winner"], 1);
        assert_eq!(json["attempts"][1]["candidate"]["doppler_bins"], 2);
        let back: AttackResult = serde_json::from_value(json).unwrap();
        assert_eq!(back, result);

        let mut csv = Vec::new();
        result.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "parameter,score");
        assert_eq!(lines.len(), 6);
        assert!(lines[2].starts_with("2,"));
    }
}
