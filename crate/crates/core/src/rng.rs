//! Deterministic seed derivation and per-path random streams.
//!
//! A [`SeedKey`] is mixed from a base seed and the identifiers of a module and
//! an experiment. Each path draws from its own ChaCha stream selected by the
//! path index, so results do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix_str(acc: u64, s: &str) -> u64 {
    s.bytes().fold(splitmix(acc ^ 0xA5A5), |h, b| splitmix(h ^ u64::from(b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedKey(pub u64);

impl SeedKey {
    pub fn new(seed: u64) -> Self {
        Self(splitmix(seed))
    }

    /// Key for an experiment of a module, derived from the base seed.
    pub fn derive(seed: u64, module_id: &str, experiment_id: &str) -> Self {
        Self(mix_str(mix_str(splitmix(seed), module_id), experiment_id))
    }

    /// Independent child key, e.g. for a second sampling stage.
    pub fn child(&self, tag: &str) -> Self {
        Self(mix_str(self.0, tag))
    }

    /// Random stream of one path.
    pub fn path_rng(&self, path_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(path_index);
        rng
    }
}

/// Run `f` for every path index in parallel and collect results in index order.
pub fn map_paths<R, F>(key: SeedKey, n_paths: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> R + Sync,
{
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = key.path_rng(i);
            f(i, &mut rng)
        })
        .collect()
}
