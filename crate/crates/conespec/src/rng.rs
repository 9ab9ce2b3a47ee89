//! Counter-based pseudo-randomness for reproducible instance generation.
//!
//! The generator is splitmix64: the state advances by a fixed odd constant
//! and each output is a bijective mix of the state. Identical seeds produce
//! identical streams on every platform, and independent substreams are
//! derived by folding tag words through the same mix, so batch campaigns can
//! generate instance k without generating instances 0..k-1 first.

/// Name recorded in reports so a reader can re-derive every drawn value.
pub const RNG_ALGORITHM: &str = "splitmix64";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Substream keyed by `tags`, e.g. `[family_id, n, instance_index]`.
    pub fn stream(seed: u64, tags: &[u64]) -> Self {
        let mut s = seed;
        for &t in tags {
            s = mix(s.wrapping_add(GOLDEN).wrapping_add(t));
        }
        SplitMix64 { state: s }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw from [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index below `n` (n > 0), via 128-bit multiply reduction.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (((self.next_u64() as u128) * (n as u128)) >> 64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn reference_values() {
        // First outputs for seed 1234567, cross-checked against the
        // published splitmix64 reference sequence.
        let mut r = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(got, vec![6457827717110365317, 3203168211198807973, 9817491932198370423]);
    }

    #[test]
    fn substreams_differ_and_are_stable() {
        let mut a = SplitMix64::stream(7, &[1, 2, 3]);
        let mut b = SplitMix64::stream(7, &[1, 2, 4]);
        let mut a2 = SplitMix64::stream(7, &[1, 2, 3]);
        assert_ne!(a.next_u64(), b.next_u64());
        let _ = a2.next_u64();
        assert_eq!(a.next_u64(), a2.next_u64());
    }

    #[test]
    fn unit_interval_and_below() {
        let mut r = SplitMix64::new(9);
        for _ in 0..1000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
            let k = r.below(17);
            assert!(k < 17);
        }
    }
}
