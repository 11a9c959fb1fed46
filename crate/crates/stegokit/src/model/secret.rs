use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::alphabet::Bits;
use super::ModelError;

/// Deterministic on-demand supplier of secret bits, modeling independent
/// Bernoulli(1/2) bits.
///
/// A provider is backed either by a finite explicit bit sequence, which
/// reports exhaustion rather than fabricating bits, or by a seeded ChaCha8
/// stream, which never runs out. The number of bits handed out so far is
/// tracked so callers can check a codec's reported bit count against actual
/// consumption.
#[derive(Debug, Clone)]
pub struct SecretProvider {
    kind: ProviderKind,
    consumed: usize,
}

#[derive(Debug, Clone)]
enum ProviderKind {
    Explicit { bits: Vec<bool> },
    Seeded { rng: Box<ChaCha8Rng> },
}

impl SecretProvider {
    pub fn from_bits(bits: &Bits) -> Self {
        Self::from_bools(bits.as_slice().to_vec())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        SecretProvider {
            kind: ProviderKind::Explicit { bits },
            consumed: 0,
        }
    }

    /// Inexhaustible Bernoulli(1/2) stream derived from `seed` via ChaCha8.
    pub fn from_seed(seed: u64) -> Self {
        SecretProvider {
            kind: ProviderKind::Seeded {
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            },
            consumed: 0,
        }
    }

    pub fn next_bit(&mut self) -> Result<bool, ModelError> {
        let bit = match &mut self.kind {
            ProviderKind::Explicit { bits } => {
                if self.consumed >= bits.len() {
                    return Err(ModelError::SecretsExhausted {
                        consumed: self.consumed,
                    });
                }
                bits[self.consumed]
            }
            ProviderKind::Seeded { rng } => (rng.next_u32() & 1) == 1,
        };
        self.consumed += 1;
        Ok(bit)
    }

    /// Bits handed out so far.
    pub fn consumed(&self) -> usize {
        self.consumed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_provider_reports_exhaustion() {
        let mut p = SecretProvider::from_bools(vec![true, false]);
        assert!(p.next_bit().unwrap());
        assert!(!p.next_bit().unwrap());
        assert_eq!(p.consumed(), 2);
        assert!(matches!(
            p.next_bit(),
            Err(ModelError::SecretsExhausted { consumed: 2 })
        ));
        assert_eq!(p.consumed(), 2);
    }

    #[test]
    fn seeded_provider_is_deterministic() {
        let mut a = SecretProvider::from_seed(42);
        let mut b = SecretProvider::from_seed(42);
        let mut c = SecretProvider::from_seed(43);
        let bits_a: Vec<bool> = (0..64).map(|_| a.next_bit().unwrap()).collect();
        let bits_b: Vec<bool> = (0..64).map(|_| b.next_bit().unwrap()).collect();
        let bits_c: Vec<bool> = (0..64).map(|_| c.next_bit().unwrap()).collect();
        assert_eq!(bits_a, bits_b);
        assert_ne!(bits_a, bits_c);
        assert_eq!(a.consumed(), 64);
    }
}
