//! Seeded bounded measurement noise.

/// Uniform noise on [-A, A] driven by a SplitMix64 generator: identical
/// seeds produce bit-identical sample streams on every platform.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSource {
    amplitude: f64,
    seed: u64,
    state: u64,
}

impl NoiseSource {
    pub fn new(amplitude: f64, seed: u64) -> Self {
        Self { amplitude, seed, state: seed }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next uniform sample in [-A, A]; advances the generator state.
    pub fn sample(&mut self) -> f64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        let unit = (z >> 11) as f64 / (1u64 << 53) as f64; // [0, 1)
        self.amplitude * (2.0 * unit - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_is_exactly_zero() {
        let mut ns = NoiseSource::new(0.0, 7);
        for _ in 0..100 {
            assert_eq!(ns.sample(), 0.0);
        }
    }

    #[test]
    fn bounded_and_centered() {
        let mut ns = NoiseSource::new(0.01, 12345);
        let count = 1_000_000usize;
        let mut sum = 0.0;
        let mut max_abs = 0.0f64;
        for _ in 0..count {
            let s = ns.sample();
            sum += s;
            max_abs = max_abs.max(s.abs());
        }
        assert!(max_abs <= 0.01);
        let sigma = 0.01 / 3f64.sqrt();
        let bound = 3.0 * sigma / (count as f64).sqrt();
        assert!(
            (sum / count as f64).abs() < bound,
            "mean {:.3e} outside +/-{bound:.3e}",
            sum / count as f64
        );
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = NoiseSource::new(0.5, 42);
        let mut b = NoiseSource::new(0.5, 42);
        for _ in 0..100 {
            assert_eq!(a.sample().to_bits(), b.sample().to_bits());
        }
    }
}
