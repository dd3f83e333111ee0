use std::fs;

use pls_core::channel::{build_channel_matrix, random_channel, zf_equalizer};
use pls_core::experiment::{
    run, run_ber_vs_otfs_k, run_matched_ber, write_outputs, ChannelConfig, ExperimentConfig,
};
use pls_core::qpsk::{count_bit_errors, qpsk_demap, qpsk_map, random_bits};
use pls_core::waveform::{AfdmParams, OtfsParams, Precoder, Waveform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn cfg(value: serde_json::Value) -> ExperimentConfig {
    ExperimentConfig::from_json(&value.to_string()).unwrap()
}

#[test]
fn zf_then_matched_demod_is_error_free() {
    let n = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let waveforms = [
        Waveform::Afdm(AfdmParams::new(n, 0.2, 1e-3).unwrap()),
        Waveform::Otfs(OtfsParams::with_doppler_bins(n, 16).unwrap()),
    ];
    let mut tested = 0;
    while tested < 10 {
        let spec = random_channel(4, 0.3, n, &mut rng).unwrap();
        let h = build_channel_matrix(&spec);
        if h.condition_number() >= 1e6 {
            continue;
        }
        let g = zf_equalizer(&h).unwrap();
        for w in waveforms {
            let p = Precoder::new(w).unwrap();
            let bits = random_bits(&mut rng, 2 * n);
            let x = p.modulate(&qpsk_map(&bits).unwrap()).unwrap();
            let y = spec.apply(&x).unwrap();
            let d_hat = p.demodulate(&g.apply(&y).unwrap()).unwrap();
            assert_eq!(count_bit_errors(&qpsk_demap(&d_hat), &bits), 0, "{w:?}");
        }
        tested += 1;
    }
}

#[test]
fn waveforms_are_neutral_over_awgn() {
    let n = 64;
    let snrs = [0.0, 4.0];
    let curves: Vec<_> = [
        Waveform::Afdm(AfdmParams::new(n, 0.2, 1e-3).unwrap()),
        Waveform::Otfs(OtfsParams::with_doppler_bins(n, 16).unwrap()),
        Waveform::Ofdm { n_subcarriers: n },
    ]
    .into_iter()
    .enumerate()
    .map(|(i, w)| run_matched_ber(w, &snrs, 2000, 100 + i as u64).unwrap())
    .collect();
    for a in 0..3 {
        for b in a + 1..3 {
            for (s, snr) in snrs.iter().enumerate() {
                let (ca, cb) = (&curves[a].counts[s], &curves[b].counts[s]);
                let se = ca.std_error().hypot(cb.std_error());
                assert!(
                    (ca.ber() - cb.ber()).abs() <= 3.0 * se,
                    "{} vs {} at {} dB: {} vs {}",
                    curves[a].label,
                    curves[b].label,
                    snr,
                    ca.ber(),
                    cb.ber()
                );
            }
        }
    }
}

#[test]
fn matched_ber_falls_with_snr() {
    let snrs = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0];
    let w = Waveform::Afdm(AfdmParams::new(64, 0.2, 1e-3).unwrap());
    let curve = run_matched_ber(w, &snrs, 1000, 5).unwrap();
    let (ber, se) = (curve.ber(), curve.std_errors());
    for i in 1..ber.len() {
        assert!(ber[i] <= ber[i - 1] + se[i - 1].max(se[i]), "{ber:?}");
    }
}

#[test]
fn mmse_multipath_link_decodes() {
    let c = cfg(json!({
        "experiment": "ber_vs_otfs_k",
        "n_subcarriers": 64,
        "channel": {"type": "multipath", "n_taps": 4, "theta_max": 0.3, "snr_db": 30},
        "trials": 30,
        "master_seed": 1,
        "sweep": {"type": "otfs_divisors"}
    }));
    assert!(matches!(c.channel, ChannelConfig::Multipath { .. }));
    let curve = run_ber_vs_otfs_k(&c).unwrap();
    let ber = curve.ber();
    assert!(ber[4] < 1e-2, "{ber:?}");
    assert!(
        ber.iter().enumerate().all(|(i, b)| i == 4 || *b > 0.3),
        "{ber:?}"
    );
}

#[test]
fn outputs_are_byte_identical_under_a_fixed_seed() {
    let configs = [
        json!({
            "experiment": "ber_vs_afdm_c1",
            "n_subcarriers": 64,
            "channel": {"type": "awgn", "snr_db": 20},
            "trials": 20,
            "master_seed": 9,
            "sweep": {"type": "c1_window", "half_width": 1e-4, "points": 11}
        }),
        json!({
            "experiment": "ber_vs_snr_attack",
            "n_subcarriers": 32,
            "channel": {"type": "multipath", "n_taps": 3},
            "trials": 4,
            "master_seed": 9,
            "sweep": {"type": "snr_db", "values": [5, 15]},
            "attack": {"budget": 4}
        }),
    ];
    for value in configs {
        let c = cfg(value);
        let read_all = |c: &ExperimentConfig| {
            let dir = tempfile::tempdir().unwrap();
            let curves = run(c).unwrap();
            write_outputs(c, &curves, dir.path())
                .unwrap()
                .iter()
                .map(|p| fs::read(p).unwrap())
                .collect::<Vec<_>>()
        };
        let first = read_all(&c);
        assert_eq!(first, read_all(&c));

        let mut other = c.clone();
        other.master_seed += 1;
        assert_ne!(first, read_all(&other));
    }
}
