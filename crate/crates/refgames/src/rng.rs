//! Counter-based random number streams.
//!
//! Every draw in the Monte Carlo engine is keyed by `(seed, replicate,
//! node id)`, so replicates are reproducible and parallelizable without
//! shared state, and skipping a subtree (pruning) never perturbs the
//! draws of any other node.

/// Source of uniform variates consumed by the samplers. Tests substitute
/// scripted implementations.
pub trait RngStream {
    fn next_u64(&mut self) -> u64;

    /// Uniform draw in `[0, 1)`.
    fn next_f64(&mut self) -> f64 {
        // 53 high bits -> exactly representable dyadic in [0,1).
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splitmix-style generator whose initial state is a hash of its key.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    state: u64,
}

impl CounterRng {
    pub fn from_seed(seed: u64) -> Self {
        CounterRng { state: mix(seed.wrapping_add(GAMMA)) }
    }

    /// Independent stream for one tree node of one replicate.
    pub fn for_node(seed: u64, replicate: u64, node: u64) -> Self {
        Self::for_node_keyed(Self::replicate_key(seed, replicate), node)
    }

    /// Hash of (seed, replicate), hoisted out of per-node keying so a
    /// tree walk pays one mix per node instead of three.
    #[inline]
    pub fn replicate_key(seed: u64, replicate: u64) -> u64 {
        let s = mix(seed.wrapping_add(GAMMA));
        mix(s ^ replicate.wrapping_mul(0xD129_0E40_5E64_71A5))
    }

    /// Same stream as [`CounterRng::for_node`] given the hoisted key.
    #[inline]
    pub fn for_node_keyed(replicate_key: u64, node: u64) -> Self {
        CounterRng { state: mix(replicate_key ^ node.wrapping_mul(0xA076_1D64_78BD_642F)) }
    }
}

impl RngStream for CounterRng {
    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }
}
