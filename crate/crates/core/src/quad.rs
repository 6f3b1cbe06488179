use crate::error::CoreError;

/// Trapezoid rule on uniformly spaced samples. Exact for linear integrands.
pub fn trapezoid_uniform(samples: &[f64], spacing: f64) -> Result<f64, CoreError> {
    if samples.len() < 2 {
        return Err(CoreError::InvalidInput(format!(
            "trapezoid rule needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let inner: f64 = samples[1..samples.len() - 1].iter().sum();
    Ok(spacing * (0.5 * (samples[0] + samples[samples.len() - 1]) + inner))
}

/// Trapezoid rule with explicit abscissae (must be strictly increasing).
pub fn trapezoid_integral(xs: &[f64], ys: &[f64]) -> Result<f64, CoreError> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return Err(CoreError::InvalidInput(format!(
            "trapezoid rule needs matching samples >= 2, got {} / {}",
            xs.len(),
            ys.len()
        )));
    }
    let mut acc = 0.0;
    for i in 1..xs.len() {
        let dx = xs[i] - xs[i - 1];
        if dx <= 0.0 {
            return Err(CoreError::InvalidInput("abscissae must be strictly increasing".into()));
        }
        acc += 0.5 * dx * (ys[i] + ys[i - 1]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_is_exact() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let ys = xs.clone();
        assert_relative_eq!(trapezoid_integral(&xs, &ys).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(trapezoid_uniform(&ys, 0.1).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn quadratic_error_bound() {
        // ∫₀¹ x² = 1/3; composite trapezoid error = h²/12·(f'(1)-f'(0)) = h²/6.
        let n = 101;
        let h = 1.0 / (n - 1) as f64;
        let ys: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(2)).collect();
        let v = trapezoid_uniform(&ys, h).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 2e-5);
    }

    #[test]
    fn rejects_short_input() {
        assert!(trapezoid_uniform(&[1.0], 0.1).is_err());
        assert!(trapezoid_integral(&[0.0, 1.0], &[1.0]).is_err());
    }
}
