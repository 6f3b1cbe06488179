use crate::error::CoreError;

/// Ordinary least squares y = a·x + b. Returns (slope, intercept, r²).
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), CoreError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(CoreError::InvalidInput(format!(
            "regression needs matching samples >= 2, got {} / {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(CoreError::InvalidInput("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (a, b, r2) = linear_regression(&xs, &ys).unwrap();
        assert!((a - 2.0).abs() < 1e-14);
        assert!((b - 1.0).abs() < 1e-14);
        assert!((r2 - 1.0).abs() < 1e-14);
    }
}
