use crate::error::KbError;
use serde::{Deserialize, Serialize};

/// Time-dependence of the two-sided coupling. μ(t) = μᵢ for t ≤ 0 in every
/// variant; μ(t) ≥ 0 always.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RampSchedule {
    Constant {
        mu: f64,
    },
    Sudden {
        mu_i: f64,
        mu_f: f64,
    },
    /// μ(t) = (μᵢ-μf)·e^{-t/T*} + μf
    ExpToFloor {
        mu_i: f64,
        mu_f: f64,
        time_constant: f64,
    },
    /// μ(t) = μᵢ·e^{-t/T*}
    ExpToZero {
        mu_i: f64,
        time_constant: f64,
    },
    /// μ(t) = μᵢ·e^{-(t/T)·log(μᵢ/μf)}, clamped at μf beyond t = T
    ExpBetween {
        mu_i: f64,
        mu_f: f64,
        total_time: f64,
    },
    /// Linear ramp of the effective inverse temperature β* between the
    /// values matched to μᵢ and μf through β* ∝ μ^{-1/(2-2Δ)}.
    LinearBeta {
        mu_i: f64,
        mu_f: f64,
        total_time: f64,
        delta: f64,
    },
    /// Linear ramp of the effective temperature 1/β* between the same
    /// endpoints.
    LinearTemperature {
        mu_i: f64,
        mu_f: f64,
        total_time: f64,
        delta: f64,
    },
    /// Piecewise-linear table (clamped outside the listed times).
    Tabulated {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl RampSchedule {
    pub fn mu_initial(&self) -> f64 {
        match self {
            Self::Constant { mu } => *mu,
            Self::Sudden { mu_i, .. }
            | Self::ExpToFloor { mu_i, .. }
            | Self::ExpToZero { mu_i, .. }
            | Self::ExpBetween { mu_i, .. }
            | Self::LinearBeta { mu_i, .. }
            | Self::LinearTemperature { mu_i, .. } => *mu_i,
            Self::Tabulated { values, .. } => values.first().copied().unwrap_or(0.0),
        }
    }

    pub fn mu(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.mu_initial();
        }
        match self {
            Self::Constant { mu } => *mu,
            Self::Sudden { mu_f, .. } => *mu_f,
            Self::ExpToFloor { mu_i, mu_f, time_constant } => {
                (mu_i - mu_f) * (-t / time_constant).exp() + mu_f
            }
            Self::ExpToZero { mu_i, time_constant } => mu_i * (-t / time_constant).exp(),
            Self::ExpBetween { mu_i, mu_f, total_time } => {
                if t >= *total_time {
                    *mu_f
                } else {
                    mu_i * (-(t / total_time) * (mu_i / mu_f).ln()).exp()
                }
            }
            Self::LinearBeta { mu_i, mu_f, total_time, delta } => {
                let p = 1.0 / (2.0 - 2.0 * delta);
                let (bi, bf) = ((mu_i).powf(-p), (mu_f).powf(-p));
                let x = (t / total_time).min(1.0);
                let b = bi + (bf - bi) * x;
                b.powf(-1.0 / p)
            }
            Self::LinearTemperature { mu_i, mu_f, total_time, delta } => {
                let p = 1.0 / (2.0 - 2.0 * delta);
                let (ti, tf) = ((mu_i).powf(p), (mu_f).powf(p));
                let x = (t / total_time).min(1.0);
                let temp = ti + (tf - ti) * x;
                temp.powf(1.0 / p)
            }
            Self::Tabulated { times, values } => {
                if times.is_empty() {
                    return 0.0;
                }
                if t <= times[0] {
                    return values[0];
                }
                if t >= *times.last().unwrap() {
                    return *values.last().unwrap();
                }
                let i = times.partition_point(|&x| x < t).max(1);
                let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
                values[i - 1] * (1.0 - w) + values[i] * w
            }
        }
    }

    pub fn validate(&self) -> Result<(), KbError> {
        let check = |v: f64, name: &str| -> Result<(), KbError> {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(KbError::InvalidInput(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
            Ok(())
        };
        match self {
            Self::Constant { mu } => check(*mu, "mu")?,
            Self::Sudden { mu_i, mu_f } => {
                check(*mu_i, "mu_i")?;
                check(*mu_f, "mu_f")?;
            }
            Self::ExpToFloor { mu_i, mu_f, time_constant } => {
                check(*mu_i, "mu_i")?;
                check(*mu_f, "mu_f")?;
                if !(time_constant > &0.0) {
                    return Err(KbError::InvalidInput("time_constant must be positive".into()));
                }
            }
            Self::ExpToZero { mu_i, time_constant } => {
                check(*mu_i, "mu_i")?;
                if !(time_constant > &0.0) {
                    return Err(KbError::InvalidInput("time_constant must be positive".into()));
                }
            }
            Self::ExpBetween { mu_i, mu_f, total_time }
            | Self::LinearBeta { mu_i, mu_f, total_time, .. }
            | Self::LinearTemperature { mu_i, mu_f, total_time, .. } => {
                check(*mu_i, "mu_i")?;
                if !(mu_f > &0.0) {
                    return Err(KbError::InvalidInput(
                        "mu_f must be positive for this profile".into(),
                    ));
                }
                if !(total_time > &0.0) {
                    return Err(KbError::InvalidInput("total_time must be positive".into()));
                }
            }
            Self::Tabulated { times, values } => {
                if times.len() != values.len() || times.is_empty() {
                    return Err(KbError::InvalidInput(
                        "tabulated schedule needs matching non-empty times/values".into(),
                    ));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(KbError::InvalidInput(
                        "tabulated schedule times must be strictly increasing".into(),
                    ));
                }
                for &v in values {
                    check(v, "tabulated value")?;
                }
            }
        }
        Ok(())
    }

    /// Compact single-line descriptor for checkpoint headers.
    pub fn descriptor(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| "unserializable".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_hold_mu_i_before_zero() {
        let scheds = [
            RampSchedule::Sudden { mu_i: 0.4, mu_f: 0.38 },
            RampSchedule::ExpToFloor { mu_i: 0.5, mu_f: 0.1, time_constant: 10.0 },
            RampSchedule::ExpToZero { mu_i: 0.5, time_constant: 10.0 },
            RampSchedule::ExpBetween { mu_i: 0.5, mu_f: 0.05, total_time: 20.0 },
        ];
        for s in &scheds {
            s.validate().unwrap();
            assert_eq!(s.mu(-3.0), s.mu_initial());
            assert!(s.mu(1e9) >= 0.0);
        }
    }

    #[test]
    fn exp_to_floor_matches_formula() {
        let s = RampSchedule::ExpToFloor { mu_i: 0.5, mu_f: 0.1, time_constant: 10.0 };
        let t = 7.3;
        let expect = 0.4 * (-t / 10.0f64).exp() + 0.1;
        assert!((s.mu(t) - expect).abs() < 1e-15);
    }

    #[test]
    fn exp_between_hits_endpoints() {
        let s = RampSchedule::ExpBetween { mu_i: 0.5, mu_f: 0.05, total_time: 20.0 };
        assert!((s.mu(1e-12) - 0.5).abs() < 1e-9);
        assert!((s.mu(20.0) - 0.05).abs() < 1e-12);
        assert!((s.mu(25.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn linear_beta_is_linear_in_beta_star() {
        let delta = 0.25;
        let p = 1.0 / (2.0 - 2.0 * delta);
        let s = RampSchedule::LinearBeta { mu_i: 0.5, mu_f: 0.05, total_time: 10.0, delta };
        let b = |t: f64| s.mu(t).powf(-p);
        let (b0, b5, b10) = (b(1e-12), b(5.0), b(10.0));
        assert!(((b5 - b0) - (b10 - b5)).abs() < 1e-9, "β* should advance linearly");
    }

    #[test]
    fn tabulated_interpolates_and_clamps() {
        let s = RampSchedule::Tabulated { times: vec![0.0, 1.0, 2.0], values: vec![0.5, 0.3, 0.3] };
        assert!((s.mu(0.5) - 0.4).abs() < 1e-15);
        assert!((s.mu(5.0) - 0.3).abs() < 1e-15);
        assert!(RampSchedule::Tabulated { times: vec![0.0, 0.0], values: vec![1.0, 1.0] }
            .validate()
            .is_err());
    }
}
