//! Deterministic seed derivation.
//!
//! Every run draws all randomness from one base seed; component streams are
//! derived by hashing `(base, label, index)` with FNV-1a so the derivation is
//! stable across platforms and processes.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

/// Derives an independent stream seed for `label` / `index` under `base`.
pub fn derive_seed(base: u64, label: &str, index: u64) -> u64 {
    let mut hash = FNV_OFFSET;
    for byte in base
        .to_le_bytes()
        .iter()
        .chain(label.as_bytes())
        .chain(index.to_le_bytes().iter())
    {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}
