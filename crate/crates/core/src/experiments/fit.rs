use std::fmt;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No prediction is attached.
    Exploratory,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Exploratory => "exploratory",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub r_squared: f64,
    pub predicted: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

impl FitResult {
    /// Attaches a prediction; the verdict is `|slope - predicted| ≤ tolerance`.
    pub fn judged(mut self, predicted: f64, tolerance: f64) -> Self {
        self.predicted = Some(predicted);
        self.tolerance = Some(tolerance);
        self.verdict = Verdict::from_bool((self.slope - predicted).abs() <= tolerance);
        self
    }
}

pub fn fit_loglog(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(invalid(format!("a log-log fit needs at least 3 points, got {}", points.len())));
    }
    if let Some((x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(invalid(format!("log-log fit needs positive finite data, got ({x}, {y})")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(invalid("log-log fit needs at least two distinct parameters"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(FitResult {
        slope,
        intercept,
        stderr,
        r_squared,
        predicted: None,
        tolerance: None,
        verdict: Verdict::Exploratory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, 3.0 * (i as f64).powi(2))).collect();
        let f = fit_loglog(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
    }

    #[test]
    fn two_points_rejected() {
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, -2.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn perturbed_power_law() {
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let x = 2f64.powf(i as f64 / 4.0);
                (x, x.powf(1.5) * (1.0 + 0.01 * x.ln().sin()))
            })
            .collect();
        let f = fit_loglog(&pts).unwrap().judged(1.5, 0.02);
        assert_eq!(f.verdict, Verdict::Pass);
    }

    proptest! {
        #[test]
        fn rescaling_leaves_slope(ys in proptest::collection::vec(0.1..10.0f64, 5), c in 0.01..100.0f64) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, y)| ((i + 1) as f64, *y)).collect();
            let scaled: Vec<(f64, f64)> = pts.iter().map(|(x, y)| (*x, c * y)).collect();
            let a = fit_loglog(&pts).unwrap();
            let b = fit_loglog(&scaled).unwrap();
            prop_assert!((a.slope - b.slope).abs() <= 1e-12 * (1.0 + a.slope.abs()));
            prop_assert!((b.intercept - a.intercept - c.ln()).abs() <= 1e-10);
            prop_assert!(a.stderr >= 0.0 && (0.0..=1.0).contains(&a.r_squared));
        }
    }
}
