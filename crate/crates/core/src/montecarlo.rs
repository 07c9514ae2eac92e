//! Monte Carlo estimates of the per-cycle expectations.
//!
//! Cycle `i` draws its event time from the ChaCha8 stream of `seed` at word
//! position `2 i`, so a run is fully determined by `(seed, n_cycles)` and
//! the first `n` cycles of a longer run are the cycles of a shorter one.
//! Chunks are simulated in parallel and their moments merged in chunk order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::SamplingPolicy;
use crate::distribution::TteDistribution;
use crate::energy::{simulate_cycle, DeviceProfile};
use crate::error::{Error, Result};

const CHUNK: u64 = 4096;
/// 32-bit words consumed per cycle: one `f64` uniform.
const WORDS_PER_CYCLE: u128 = 2;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }

    fn standard_error(&self) -> f64 {
        (self.m2 / (self.n - 1.0)).sqrt() / self.n.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McStats {
    pub n_cycles: u64,
    pub seed: u64,
    pub mean_samples: f64,
    pub mean_wait: f64,
    pub mean_energy: f64,
    pub mean_idle: f64,
    pub se_samples: f64,
    pub se_wait: f64,
    pub se_energy: f64,
    pub se_idle: f64,
}

/// Simulates `n_cycles` independent cycles.
pub fn run_monte_carlo(
    dist: &TteDistribution,
    policy: &SamplingPolicy,
    device: &DeviceProfile,
    n_cycles: u64,
    seed: u64,
) -> Result<McStats> {
    if n_cycles < 2 {
        return Err(Error::Argument(format!("need at least 2 cycles, got {n_cycles}")));
    }
    policy.validate()?;
    device.validate()?;
    let chunks = n_cycles.div_ceil(CHUNK);
    let parts: Vec<[Moments; 4]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n_cycles);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(start as u128 * WORDS_PER_CYCLE);
            let mut m = [Moments::default(); 4];
            for _ in start..end {
                let t = dist.sample(&mut rng);
                let o = simulate_cycle(t, policy, device);
                m[0].push(o.samples as f64);
                m[1].push(o.wait);
                m[2].push(o.energy);
                m[3].push(o.idle_time);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold([Moments::default(); 4], |acc, p| {
        [acc[0].merge(p[0]), acc[1].merge(p[1]), acc[2].merge(p[2]), acc[3].merge(p[3])]
    });
    Ok(McStats {
        n_cycles,
        seed,
        mean_samples: total[0].mean,
        mean_wait: total[1].mean,
        mean_energy: total[2].mean,
        mean_idle: total[3].mean,
        se_samples: total[0].standard_error(),
        se_wait: total[1].standard_error(),
        se_energy: total[2].standard_error(),
        se_idle: total[3].standard_error(),
    })
}

/// Whether `value` lies within `k` standard errors of `estimate`.
pub fn within_band(estimate: f64, se: f64, value: f64, k: f64) -> bool {
    (estimate - value).abs() <= k * se
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn device() -> DeviceProfile {
        DeviceProfile::new(0.015, 0.045, 0.004, 0.005).unwrap()
    }

    #[test]
    fn word_positions_match_a_sequential_stream() {
        let d = TteDistribution::exponential(1.0).unwrap();
        let mut seq = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<f64> = (0..10).map(|_| d.sample(&mut seq)).collect();
        let mut jump = ChaCha8Rng::seed_from_u64(3);
        jump.set_word_pos(7 * WORDS_PER_CYCLE);
        assert_eq!(d.sample(&mut jump), draws[7]);
        // A uniform f64 consumes exactly two words.
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let _: f64 = r.gen();
        assert_eq!(r.get_word_pos(), 2);
    }

    #[test]
    fn point_mass_on_a_sample_instant() {
        let d = TteDistribution::tabulated(vec![(3.0, 0.0), (3.0, 1.0)]).unwrap();
        let p = SamplingPolicy::periodic(1.0).unwrap();
        let s = run_monte_carlo(&d, &p, &device(), 1000, 1).unwrap();
        assert_eq!(s.mean_samples, 3.0);
        assert_eq!(s.mean_wait, 0.0);
        assert_eq!(s.se_samples, 0.0);
    }

    #[test]
    fn rejects_a_single_cycle() {
        let d = TteDistribution::exponential(1.0).unwrap();
        let p = SamplingPolicy::periodic(1.0).unwrap();
        assert!(run_monte_carlo(&d, &p, &device(), 1, 1).is_err());
    }

    #[test]
    fn chunked_moments_match_plain_ones() {
        let d = TteDistribution::rayleigh(2.0).unwrap();
        let p = SamplingPolicy::new(0.2, 0.5).unwrap();
        let n = 3 * CHUNK + 17;
        let s = run_monte_carlo(&d, &p, &device(), n, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let waits: Vec<f64> = (0..n).map(|_| simulate_cycle(d.sample(&mut rng), &p, &device()).wait).collect();
        let mean = waits.iter().sum::<f64>() / n as f64;
        let var = waits.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((s.mean_wait - mean).abs() < 1e-14);
        assert!((s.se_wait - (var / n as f64).sqrt()).abs() < 1e-12 * s.se_wait);
    }

    #[test]
    fn energy_is_the_recombined_cycle_means() {
        let d = TteDistribution::rayleigh(2.0).unwrap();
        let p = SamplingPolicy::new(0.2, 0.5).unwrap();
        let dev = device();
        let s = run_monte_carlo(&d, &p, &dev, 50_000, 5).unwrap();
        let recombined = (s.mean_samples + 1.0) * dev.tau_comm * dev.p_comm + s.mean_idle * dev.p_idle;
        assert!((s.mean_energy - recombined).abs() < 1e-12 * s.mean_energy);
    }
}
