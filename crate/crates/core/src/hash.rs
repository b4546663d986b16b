//! Deterministic 128-bit content fingerprints used as memoization keys.
//!
//! Fingerprints are FNV-1a over a canonical encoding, so two independently
//! constructed objects with identical content hash identically across runs.

const OFFSET: u128 = 0x6c62272e07bb014262b821756295c58d;
const PRIME: u128 = 0x0000000001000000000000000000013b;

#[derive(Clone)]
pub(crate) struct Fingerprinter {
    state: u128,
}

impl Fingerprinter {
    pub fn new(tag: &str) -> Self {
        let mut f = Fingerprinter { state: OFFSET };
        f.write_bytes(tag.as_bytes());
        f
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state ^= b as u128;
            self.state = self.state.wrapping_mul(PRIME);
        }
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn write_u128(&mut self, v: u128) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn finish(&self) -> u128 {
        self.state
    }
}
