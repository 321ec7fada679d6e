//! Log-scale least-squares fits of c·λ^{−a} and c·λ^{−a}·log λ.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::OscError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// Decay exponent a (value ≈ c·λ^{−a}).
    pub exponent: f64,
    pub coefficient: f64,
    /// Root-mean-square residual of the log-scale fit.
    pub residual: f64,
    pub with_log: bool,
}

/// Geometric grid with `per_decade` points per decade, including both ends.
pub fn lambda_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let steps = ((hi / lo).log10() * per_decade as f64).round().max(1.0) as usize;
    (0..=steps).map(|i| lo * (hi / lo).powf(i as f64 / steps as f64)).collect()
}

pub fn fit_tail(samples: &[(f64, f64)], with_log: bool) -> Result<TailFit, OscError> {
    if samples.len() < 6 {
        return Err(OscError::Precondition("tail fits need at least 6 samples"));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, 0.0f64), |(a, b), s| (a.min(s.0), b.max(s.0)));
    if !(lo > 0.0) || hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(OscError::Precondition("tail fits need samples spanning a decade"));
    }
    if with_log && lo <= 1.0 {
        return Err(OscError::Precondition("log fits need λ > 1"));
    }
    let sign = samples[0].1.signum();
    if sign == 0.0 || samples.iter().any(|s| s.1.signum() != sign) {
        return Err(OscError::Precondition("samples must be nonzero and of one sign"));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(l, v)| {
            let y = v.abs().ln() - if with_log { l.ln().ln() } else { 0.0 };
            (l.ln(), y)
        })
        .collect();
    let (slope, icpt, residual) = line_fit(&pts)?;
    Ok(TailFit { exponent: -slope, coefficient: sign * icpt.exp(), residual, with_log })
}

/// Least-squares line y ≈ a + b·x; returns (b, a, rms residual).
pub(crate) fn line_fit(pts: &[(f64, f64)]) -> Result<(f64, f64, f64), OscError> {
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx).powi(2), b + (p.0 - mx) * (p.1 - my)));
    if !(sxx > 1e-300) {
        return Err(OscError::Degenerate);
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    Ok((slope, icpt, (rss / m).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = lambda_grid(100.0, 1e4, 12).into_iter().map(|l| (l, 5.0 * l.powf(-0.75))).collect();
        assert_eq!(s.len(), 25);
        let f = fit_tail(&s, false).unwrap();
        assert!((f.exponent - 0.75).abs() < 1e-10 && (f.coefficient - 5.0).abs() < 1e-10);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn exact_log_law_and_model_selection() {
        let s: Vec<(f64, f64)> = lambda_grid(100.0, 1e4, 12).into_iter().map(|l| (l, 2.0 * l.powi(-2) * l.ln())).collect();
        let f = fit_tail(&s, true).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-10 && (f.coefficient - 2.0).abs() < 1e-9);
        let p = fit_tail(&s, false).unwrap();
        assert!(p.residual > 100.0 * f.residual.max(1e-14));
    }

    #[test]
    fn negative_values_and_bad_input() {
        let s: Vec<(f64, f64)> = lambda_grid(10.0, 1000.0, 4).into_iter().map(|l| (l, -3.0 / l)).collect();
        let f = fit_tail(&s, false).unwrap();
        assert!((f.coefficient + 3.0).abs() < 1e-10);
        assert!(fit_tail(&s[..5], false).is_err());
        assert!(fit_tail(&s[..4], false).is_err());
        let mut t = s.clone();
        t[3].1 = 1.0;
        assert!(fit_tail(&t, false).is_err());
        let narrow: Vec<(f64, f64)> = (0..8).map(|i| (10.0 + i as f64, 1.0)).collect();
        assert!(fit_tail(&narrow, false).is_err());
    }
}
