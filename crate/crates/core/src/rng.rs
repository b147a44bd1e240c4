//! Reproducible random streams.
//!
//! Every random stream used by an ensemble is derived from the tuple
//! `(master_seed, population, run, purpose)`: the tuple is encoded as
//! little-endian words behind a fixed domain tag, hashed with SHA-256, and the
//! digest seeds a ChaCha8 generator. Streams therefore do not depend on the
//! order in which populations or runs are scheduled.
//!
//! Per-channel draws inside a run use a keyed SplitMix64 mix of
//! `(run_key, channel)`, so the uniform assigned to a channel does not depend
//! on the order in which senders are visited.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

const DOMAIN_TAG: &[u8] = b"rumor-core/stream/v1";

/// What a derived stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Network = 1,
    Seed = 2,
    Usg = 3,
    Run = 4,
}

/// 32-byte ChaCha seed for `(master, population, run, purpose)`.
pub fn derive_seed(master: u64, population: u64, run: u64, purpose: Purpose) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN_TAG);
    hasher.update(master.to_le_bytes());
    hasher.update(population.to_le_bytes());
    hasher.update(run.to_le_bytes());
    hasher.update([purpose as u8]);
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    seed
}

pub fn child_rng(master: u64, population: u64, run: u64, purpose: Purpose) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_seed(master, population, run, purpose))
}

/// Derive a 64-bit seed, used where a config carries a plain `u64` seed.
pub fn derive_u64(master: u64, population: u64, run: u64, purpose: Purpose) -> u64 {
    let seed = derive_seed(master, population, run, purpose);
    u64::from_le_bytes(seed[..8].try_into().expect("8 bytes"))
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` for `channel` under `key`.
#[inline]
pub fn keyed_uniform(key: u64, channel: u64) -> f64 {
    let bits = splitmix64(key ^ splitmix64(channel));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
