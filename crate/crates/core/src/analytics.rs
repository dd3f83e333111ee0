//! Closed-form robustness figures: how many blind demodulation attempts an
//! eavesdropper needs, and how close a chirp guess has to be.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eavesdropper::afdm_candidate_count;
use crate::error::{Error, Result};
use crate::math::divisor_count;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtfsAttempts {
    /// σ(n).
    pub exact: usize,
    /// 2√n.
    pub bound: f64,
    /// Dirichlet average `ln n + 2γ − 1`.
    pub average: f64,
}

pub fn otfs_ma(n: usize) -> Result<OtfsAttempts> {
    let exact = divisor_count(n)?;
    let nf = n as f64;
    Ok(OtfsAttempts {
        exact,
        bound: 2.0 * nf.sqrt(),
        average: nf.ln() + 2.0 * EULER_GAMMA - 1.0,
    })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )))
    }
}

/// `π(D·N − θ_max)(N−1)² / (ε·N)`.
pub fn afdm_ma(n: usize, theta_max: f64, d_upper: f64, epsilon: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension { min: 2, actual: n });
    }
    check_epsilon(epsilon)?;
    let nf = n as f64;
    let lower = theta_max / nf;
    if !(d_upper.is_finite() && theta_max.is_finite() && d_upper > lower) {
        return Err(Error::EmptySearchRange {
            lower,
            upper: d_upper,
        });
    }
    Ok(PI * (d_upper * nf - theta_max) * (nf - 1.0).powi(2) / (epsilon * nf))
}

/// Largest `|c1 − c1'|` that still demodulates: `ε / (2π(n−1)²)`.
pub fn delta1_bound(n: usize, epsilon: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension { min: 2, actual: n });
    }
    check_epsilon(epsilon)?;
    Ok(epsilon / (2.0 * PI * ((n - 1) * (n - 1)) as f64))
}

/// Spacing of the `c1'` candidate grid, twice [`delta1_bound`].
pub fn afdm_step(n: usize, epsilon: f64) -> Result<f64> {
    Ok(2.0 * delta1_bound(n, epsilon)?)
}

/// Whether the closed form and the generated grid agree to within one candidate.
/// A degenerate range makes both reject; that counts as agreement.
pub fn consistency_check(n: usize, theta_max: f64, d_upper: f64, epsilon: f64) -> bool {
    match (
        afdm_ma(n, theta_max, d_upper, epsilon),
        afdm_candidate_count(theta_max, d_upper, n, epsilon),
    ) {
        (Ok(ma), Ok(count)) => (ma - count as f64).abs() <= 1.0,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "waveform", rename_all = "snake_case")]
pub enum RobustnessReport {
    Otfs {
        n: usize,
        ma_exact: f64,
        ma_bound: f64,
        dirichlet_avg: f64,
    },
    Afdm {
        n: usize,
        ma_exact: f64,
        delta1_bound: f64,
        theta_max: f64,
        d_upper: f64,
        epsilon: f64,
    },
}

impl RobustnessReport {
    pub fn otfs(n: usize) -> Result<Self> {
        let ma = otfs_ma(n)?;
        Ok(RobustnessReport::Otfs {
            n,
            ma_exact: ma.exact as f64,
            ma_bound: ma.bound,
            dirichlet_avg: ma.average,
        })
    }

    pub fn afdm(n: usize, theta_max: f64, d_upper: f64, epsilon: f64) -> Result<Self> {
        Ok(RobustnessReport::Afdm {
            n,
            ma_exact: afdm_ma(n, theta_max, d_upper, epsilon)?,
            delta1_bound: delta1_bound(n, epsilon)?,
            theta_max,
            d_upper,
            epsilon,
        })
    }

    pub fn ma_exact(&self) -> f64 {
        match *self {
            RobustnessReport::Otfs { ma_exact, .. } | RobustnessReport::Afdm { ma_exact, .. } => {
                ma_exact
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for RobustnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<(&str, String)> = match *self {
            RobustnessReport::Otfs {
                n,
                ma_exact,
                ma_bound,
                dirichlet_avg,
            } => vec![
                ("waveform", "otfs".into()),
                ("n", n.to_string()),
                ("ma_exact", format!("{ma_exact}")),
                ("ma_bound", format!("{ma_bound:.6}")),
                ("dirichlet_avg", format!("{dirichlet_avg:.6}")),
            ],
            RobustnessReport::Afdm {
                n,
                ma_exact,
                delta1_bound,
                theta_max,
                d_upper,
                epsilon,
            } => vec![
                ("waveform", "afdm".into()),
                ("n", n.to_string()),
                ("ma_exact", format!("{ma_exact:.3}")),
                ("delta1_bound", format!("{delta1_bound:.6e}")),
                ("theta_max", format!("{theta_max}")),
                ("d_upper", format!("{d_upper}")),
                ("epsilon", format!("{epsilon}")),
            ],
        };
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (key, value) in rows {
            writeln!(f, "{key:<width$}  {value}")?;
        }
        Ok(())
    }
}
