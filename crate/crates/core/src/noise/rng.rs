use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the random streams used for different purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Increments = 1,
    Batch = 2,
    Test = 3,
    Check = 4,
}

/// Counter-based stream: the ChaCha key is the tuple
/// `(seed, index_a, index_b, domain)`, so any draw can be reproduced
/// without replaying the ones before it.
pub fn stream(seed: u64, a: u64, b: u64, domain: Domain) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.to_le_bytes());
    key[16..24].copy_from_slice(&b.to_le_bytes());
    key[24..].copy_from_slice(&(domain as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
