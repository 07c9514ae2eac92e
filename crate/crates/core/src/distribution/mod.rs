//! Time-to-event laws.
//!
//! A [`TteDistribution`] is the only source of randomness in the model: the
//! time from the start of a monitoring cycle until the event of interest.
//! Every law exposes an exact CDF, its complement, the mean and an inverse
//! CDF used for Monte Carlo sampling.

mod tabulated;

pub use tabulated::TabulatedCdf;

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sqrt(pi / 2)`, the ratio between the Rayleigh mean and its scale.
pub const SQRT_HALF_PI: f64 = 1.253_314_137_315_500_3;

/// Random time-to-event law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TteDistribution {
    /// Exponential law with `rate` events per second.
    Exponential { rate: f64 },
    /// Rayleigh law with scale `sigma`, shifted right by `location` seconds.
    ///
    /// `location = 0` is the textbook Rayleigh law. A positive location
    /// models a minimum event time: no event can happen before it.
    Rayleigh { sigma: f64, location: f64 },
    /// Piecewise-linear CDF through a table of knots.
    Tabulated(TabulatedCdf),
}

impl TteDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Domain(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn rayleigh(sigma: f64) -> Result<Self> {
        Self::shifted_rayleigh(sigma, 0.0)
    }

    pub fn shifted_rayleigh(sigma: f64, location: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Domain(format!("rayleigh scale must be positive, got {sigma}")));
        }
        if !(location.is_finite() && location >= 0.0) {
            return Err(Error::Domain(format!(
                "rayleigh location must be non-negative, got {location}"
            )));
        }
        Ok(Self::Rayleigh { sigma, location })
    }

    /// Rayleigh law whose mean is `mean`, i.e. `sigma = mean / sqrt(pi/2)`.
    pub fn rayleigh_from_mean(mean: f64) -> Result<Self> {
        Self::shifted_rayleigh_from_mean(mean, 0.0)
    }

    /// Rayleigh law shifted by `location` with total mean `mean`.
    pub fn shifted_rayleigh_from_mean(mean: f64, location: f64) -> Result<Self> {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::Domain(format!("mean must be positive, got {mean}")));
        }
        if !(location >= 0.0 && location < mean) {
            return Err(Error::Domain(format!(
                "location {location} must lie in [0, mean) for mean {mean}"
            )));
        }
        Self::shifted_rayleigh((mean - location) / SQRT_HALF_PI, location)
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedCdf::new(knots)?))
    }

    /// Short name of the law family.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Rayleigh { .. } => "rayleigh",
            Self::Tabulated(_) => "tabulated",
        }
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("CDF argument must be non-negative, got {t}")));
        }
        Ok(self.cdf_unchecked(t))
    }

    /// `1 - cdf(t)`.
    pub fn ccdf(&self, t: f64) -> Result<f64> {
        Ok(1.0 - self.cdf(t)?)
    }

    /// CDF without the domain check; negative arguments map to 0.
    pub(crate) fn cdf_unchecked(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Exponential { rate } => -(-rate * t).exp_m1(),
            Self::Rayleigh { sigma, location } => {
                let x = t - location;
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x * x) / (2.0 * sigma * sigma)).exp_m1()
                }
            }
            Self::Tabulated(table) => table.cdf(t),
        }
    }

    /// Probability density, where it exists. Tabulated laws report the slope
    /// of the interpolant.
    pub fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            Self::Exponential { rate } => rate * (-rate * t).exp(),
            Self::Rayleigh { sigma, location } => {
                let x = t - location;
                if x <= 0.0 {
                    0.0
                } else {
                    let s2 = sigma * sigma;
                    x / s2 * (-(x * x) / (2.0 * s2)).exp()
                }
            }
            Self::Tabulated(table) => table.slope(t),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Rayleigh { sigma, location } => location + sigma * SQRT_HALF_PI,
            Self::Tabulated(table) => table.mean(),
        }
    }

    /// Inverse CDF: the smallest `t` with `cdf(t) >= u`, for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile level must lie in [0, 1), got {u}")));
        }
        Ok(match self {
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
            Self::Rayleigh { sigma, location } => location + sigma * (-2.0 * (-u).ln_1p()).sqrt(),
            Self::Tabulated(table) => table.quantile(u),
        })
    }

    /// Draws one event time by inverse-CDF sampling of a single uniform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        // Open01 never yields 0 or 1, so the quantile is always defined.
        self.quantile(u).expect("uniform draw lies in (0, 1)")
    }

    /// Same family rescaled to a new mean. Rayleigh keeps its location and
    /// tabulated laws are stretched in time.
    pub fn with_mean(&self, mean: f64) -> Result<Self> {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::Domain(format!("mean must be positive, got {mean}")));
        }
        match self {
            Self::Exponential { .. } => Self::exponential(1.0 / mean),
            Self::Rayleigh { location, .. } => Self::shifted_rayleigh_from_mean(mean, *location),
            Self::Tabulated(table) => Ok(Self::Tabulated(table.scaled(mean / table.mean())?)),
        }
    }

    /// Largest time with `cdf < 1`, when the law has bounded support.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Self::Tabulated(table) => Some(table.support_end()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_law_round_trips_through_json() {
        for d in [
            TteDistribution::exponential(0.1).unwrap(),
            TteDistribution::shifted_rayleigh(2.0, 0.5).unwrap(),
            TteDistribution::tabulated(vec![(0.0, 0.0), (1.0, 0.4), (2.5, 1.0)]).unwrap(),
        ] {
            let text = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<TteDistribution>(&text).unwrap(), d, "{text}");
        }
        let bad = r#"{"kind":"tabulated","knots":[[0.0,0.5],[1.0,0.2]]}"#;
        assert!(serde_json::from_str::<TteDistribution>(bad).is_err());
    }

    #[test]
    fn cdf_at_origin_is_zero() {
        let d = TteDistribution::exponential(0.1).unwrap();
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn rayleigh_median() {
        let d = TteDistribution::rayleigh(1.0).unwrap();
        let median = (2.0 * 2f64.ln()).sqrt();
        assert!((d.cdf(median).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exponential_cdf_matches_integrated_density() {
        let d = TteDistribution::exponential(0.1).unwrap();
        let exact = 1.0 - (-1.0f64).exp();
        assert!((d.cdf(10.0).unwrap() - 0.632_120_558_828_557_7).abs() < 1e-15);
        // Oracle: quadrature of the density.
        let q = crate::quadrature::adaptive_simpson(&|t| d.density(t), 0.0, 10.0, 1e-13).unwrap();
        assert!((q - exact).abs() < 1e-11);
    }

    #[test]
    fn negative_time_is_a_domain_error() {
        let d = TteDistribution::rayleigh(1.0).unwrap();
        assert!(matches!(d.cdf(-1e-9), Err(Error::Domain(_))));
        assert!(matches!(d.ccdf(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rayleigh_from_mean_examples() {
        let TteDistribution::Rayleigh { sigma, .. } = TteDistribution::rayleigh_from_mean(4.846).unwrap() else {
            unreachable!()
        };
        assert!((sigma - 3.8666).abs() < 1e-3, "{sigma}");
        let TteDistribution::Rayleigh { sigma, .. } = TteDistribution::rayleigh_from_mean(SQRT_HALF_PI).unwrap() else {
            unreachable!()
        };
        assert!((sigma - 1.0).abs() < 1e-15);
        let d = TteDistribution::rayleigh_from_mean(1.0).unwrap();
        let TteDistribution::Rayleigh { sigma, .. } = d else { unreachable!() };
        assert!((sigma - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert!((d.mean() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_from_mean_rejects_nonpositive_mean() {
        assert!(TteDistribution::rayleigh_from_mean(0.0).is_err());
        assert!(TteDistribution::rayleigh_from_mean(-2.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        let e = TteDistribution::exponential(0.25).unwrap();
        assert!((e.quantile(0.5).unwrap() - (-(0.5f64).ln()) / 0.25).abs() < 1e-14);
        let r = TteDistribution::rayleigh(2.0).unwrap();
        assert!((r.quantile(0.5).unwrap() - 2.0 * (2.0 * 2f64.ln()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn means() {
        assert_eq!(TteDistribution::exponential(0.1).unwrap().mean(), 10.0);
        assert!((TteDistribution::rayleigh(1.0).unwrap().mean() - 1.253_314_137_315_500_3).abs() < 1e-15);
        let step = TteDistribution::tabulated(vec![(3.0, 0.0), (3.0, 1.0)]).unwrap();
        assert_eq!(step.mean(), 3.0);
    }

    #[test]
    fn shifted_rayleigh_is_zero_before_location() {
        let d = TteDistribution::shifted_rayleigh_from_mean(4.846, 0.5).unwrap();
        assert_eq!(d.cdf(0.5).unwrap(), 0.0);
        assert!(d.cdf(0.6).unwrap() > 0.0);
        assert!((d.mean() - 4.846).abs() < 1e-12);
        assert!(d.quantile(0.0).unwrap() >= 0.5);
    }

    #[test]
    fn with_mean_keeps_family() {
        let d = TteDistribution::shifted_rayleigh_from_mean(4.846, 0.5).unwrap();
        let d2 = d.with_mean(2.0).unwrap();
        assert!(matches!(d2, TteDistribution::Rayleigh { location, .. } if location == 0.5));
        assert!((d2.mean() - 2.0).abs() < 1e-12);
        let e = TteDistribution::exponential(1.0).unwrap().with_mean(10.0).unwrap();
        assert_eq!(e, TteDistribution::Exponential { rate: 0.1 });
    }

    #[test]
    fn exponential_sample_mean_within_four_standard_errors() {
        let d = TteDistribution::exponential(0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000;
        let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        // Standard deviation of Exp(0.1) is 10.
        let se = 10.0 / (n as f64).sqrt();
        assert!((mean - 10.0).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn sampling_is_reproducible_for_a_seed() {
        let d = TteDistribution::rayleigh(3.0).unwrap();
        let a: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..16).map(|_| d.sample(&mut rng)).collect()
        };
        let b: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..16).map(|_| d.sample(&mut rng)).collect()
        };
        assert_eq!(a, b);
    }
}
