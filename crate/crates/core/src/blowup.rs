//! Finite-data estimation of `liminf_{alpha -> 0} alpha ||grad theta^alpha||`
//! and the blow-up verdict built on it.
//!
//! A smooth limit solution forces the indicator to vanish like O(alpha), so
//! over a decreasing alpha ladder the natural discriminant is the intercept
//! of an affine fit `B(alpha) ~ c0 + c1 alpha` through the smallest alphas:
//! a positive intercept that the fit resolves cleanly is blow-up evidence,
//! an intercept compatible with zero is evidence of regularity.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// How many of the smallest alpha levels enter the affine fit.
const FIT_POINTS: usize = 4;
/// Minimum number of alpha levels for any estimate.
const MIN_LEVELS: usize = 3;

/// Extrapolated `alpha -> 0` limit of the indicator at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiminfEstimate {
    /// Affine intercept clamped to `[0, inf)`.
    pub epsilon_hat: f64,
    /// Root-mean-square residual of the fit.
    pub fit_residual: f64,
}

/// Least-squares affine extrapolation of indicator samples `(alpha, B)`
/// to `alpha = 0`, using the `min(4, len)` smallest alphas.
pub fn estimate_liminf(samples: &[(f64, f64)]) -> Result<LiminfEstimate, Error> {
    if samples.len() < MIN_LEVELS {
        return Err(Error::InsufficientData(format!(
            "liminf extrapolation needs at least {MIN_LEVELS} alpha levels, got {}",
            samples.len()
        )));
    }
    let mut sorted: Vec<(f64, f64)> = samples.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("alphas must be comparable"));
    let m = FIT_POINTS.min(sorted.len());
    let pts = &sorted[..m];

    let mf = m as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = mf * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData(
            "degenerate alpha ladder: levels must be distinct".into(),
        ));
    }
    let c1 = (mf * sxy - sx * sy) / denom;
    let c0 = (sy - c1 * sx) / mf;
    let residual_sq: f64 =
        pts.iter().map(|&(a, b)| (b - (c0 + c1 * a)) * (b - (c0 + c1 * a))).sum::<f64>() / mf;
    Ok(LiminfEstimate { epsilon_hat: c0.max(0.0), fit_residual: libm::sqrt(residual_sq) })
}

/// Largest `epsilon_hat` over the sample times, with its index.
pub fn epsilon_sup(estimates: &[LiminfEstimate]) -> Option<(usize, f64)> {
    estimates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.epsilon_hat.partial_cmp(&b.1.epsilon_hat).expect("finite estimates"))
        .map(|(i, e)| (i, e.epsilon_hat))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoBlowupEvidence,
    BlowupIndicated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoBlowupEvidence => "NO_BLOWUP_EVIDENCE",
            Verdict::BlowupIndicated => "BLOWUP_INDICATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Verdict over the per-time estimates:
/// blow-up is indicated when the supremum of `epsilon_hat` clears `threshold`
/// with a fit residual under a third of it; a supremum below `threshold / 10`
/// is evidence of regularity; anything in between stays inconclusive.
pub fn blowup_verdict(estimates: &[LiminfEstimate], threshold: f64) -> Result<Verdict, Error> {
    if !(threshold > 0.0) {
        return Err(Error::Config(format!("verdict threshold must be positive, got {threshold}")));
    }
    let (idx, sup) = epsilon_sup(estimates).ok_or_else(|| {
        Error::InsufficientData("verdict needs at least one liminf estimate".into())
    })?;
    let residual = estimates[idx].fit_residual;
    if sup > threshold && residual < sup / 3.0 {
        Ok(Verdict::BlowupIndicated)
    } else if sup < threshold / 10.0 {
        Ok(Verdict::NoBlowupEvidence)
    } else {
        Ok(Verdict::Inconclusive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> Vec<f64> {
        alloc::vec![0.1, 0.05, 0.025, 0.0125, 0.00625]
    }

    #[test]
    fn pure_slope_extrapolates_to_zero() {
        let samples: Vec<(f64, f64)> = ladder().iter().map(|&a| (a, 0.5 * a)).collect();
        let est = estimate_liminf(&samples).unwrap();
        assert!(est.epsilon_hat.abs() < 1e-15);
        assert!(est.fit_residual < 1e-15);
    }

    #[test]
    fn affine_data_recovers_intercept_exactly() {
        let samples: Vec<(f64, f64)> = ladder().iter().map(|&a| (a, 0.3 + 0.5 * a)).collect();
        let est = estimate_liminf(&samples).unwrap();
        assert!((est.epsilon_hat - 0.3).abs() < 1e-14);
        assert!(est.fit_residual < 1e-15);
    }

    #[test]
    fn noisy_data_recovers_intercept_within_tolerance() {
        // Deterministic pseudo-noise of amplitude ~1e-3.
        let mut seed: u64 = 0x9e3779b97f4a7c15;
        let mut noise = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            ((seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2e-3
        };
        for _ in 0..100 {
            let samples: Vec<(f64, f64)> =
                ladder().iter().map(|&a| (a, 0.3 + 0.5 * a + noise())).collect();
            let est = estimate_liminf(&samples).unwrap();
            assert!((est.epsilon_hat - 0.3).abs() < 5e-3, "epsilon_hat={}", est.epsilon_hat);
        }
    }

    #[test]
    fn negative_intercepts_clamp_to_zero() {
        let samples: Vec<(f64, f64)> = ladder().iter().map(|&a| (a, -0.02 + 0.5 * a)).collect();
        let est = estimate_liminf(&samples).unwrap();
        assert_eq!(est.epsilon_hat, 0.0);
    }

    #[test]
    fn fit_uses_only_the_smallest_four_levels() {
        // Affine on the four smallest levels, an outlier at the largest.
        let mut samples: Vec<(f64, f64)> =
            ladder()[1..].iter().map(|&a| (a, 0.2 + a)).collect();
        samples.push((0.1, 77.0));
        let est = estimate_liminf(&samples).unwrap();
        assert!((est.epsilon_hat - 0.2).abs() < 1e-13);
        assert!(est.fit_residual < 1e-13);
    }

    #[test]
    fn too_few_levels_is_an_error() {
        let samples = alloc::vec![(0.1, 0.3), (0.05, 0.2)];
        assert!(matches!(estimate_liminf(&samples), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn verdict_band_logic() {
        let mk = |eps: f64, res: f64| LiminfEstimate { epsilon_hat: eps, fit_residual: res };
        // Clean positive intercept.
        let v = blowup_verdict(&[mk(0.3, 1e-3)], 0.05).unwrap();
        assert_eq!(v, Verdict::BlowupIndicated);
        // All zero.
        let v = blowup_verdict(&[mk(0.0, 0.0), mk(0.0, 0.0)], 0.05).unwrap();
        assert_eq!(v, Verdict::NoBlowupEvidence);
        // Between threshold/10 and threshold.
        let v = blowup_verdict(&[mk(0.04, 1e-4)], 0.05).unwrap();
        assert_eq!(v, Verdict::Inconclusive);
        // Above threshold but noisy fit: not trusted.
        let v = blowup_verdict(&[mk(0.3, 0.2)], 0.05).unwrap();
        assert_eq!(v, Verdict::Inconclusive);
        // Supremum over times.
        let v = blowup_verdict(&[mk(0.0, 0.0), mk(0.3, 1e-3), mk(0.1, 1e-3)], 0.05).unwrap();
        assert_eq!(v, Verdict::BlowupIndicated);

        assert!(blowup_verdict(&[], 0.05).is_err());
        assert!(blowup_verdict(&[mk(0.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn supremum_never_decreases_when_estimates_are_added() {
        let mk = |eps: f64| LiminfEstimate { epsilon_hat: eps, fit_residual: 0.0 };
        let mut estimates = alloc::vec![mk(0.05)];
        let mut last_sup = epsilon_sup(&estimates).unwrap().1;
        for eps in [0.01, 0.2, 0.0, 0.11] {
            estimates.push(mk(eps));
            let sup = epsilon_sup(&estimates).unwrap().1;
            assert!(sup >= last_sup);
            last_sup = sup;
        }
    }

    #[test]
    fn verdict_strings_match_the_wire_grammar() {
        use alloc::string::ToString;
        assert_eq!(Verdict::NoBlowupEvidence.to_string(), "NO_BLOWUP_EVIDENCE");
        assert_eq!(Verdict::BlowupIndicated.to_string(), "BLOWUP_INDICATED");
        assert_eq!(Verdict::Inconclusive.to_string(), "INCONCLUSIVE");
    }
}
