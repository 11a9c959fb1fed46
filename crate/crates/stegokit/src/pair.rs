//! Pair codec for binary i.i.d. covertexts.
//!
//! Symbols are grouped into consecutive pairs. Constant pairs (`aa`, `bb`)
//! pass through unchanged; each mixed pair is rewritten so that its
//! orientation spells the next secret bit: `ab` for 0, `ba` for 1. Both
//! orientations of a mixed pair are equally likely under any i.i.d. source,
//! so replacing the orientation with a fair bit leaves the output distribution
//! exactly equal to the source distribution, while the decoder reads the bits
//! straight back off the mixed pairs.

use std::sync::Arc;

use num::rational::BigRational;

use crate::model::{
    Alphabet, Bits, EncodeResult, IidSource, ModelError, SecretProvider, StegoCodec, SymbolString,
};

/// Classification of a two-symbol block over a binary alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// `aa` or `bb`: copied verbatim, carries nothing.
    Constant,
    /// `ab`: the orientation spelling bit 0.
    CarrierZero,
    /// `ba`: the orientation spelling bit 1.
    CarrierOne,
}

/// The pair stegosystem. Defined for binary alphabets only; larger alphabets
/// are served by [`crate::block::BlockCodec`].
#[derive(Debug, Clone)]
pub struct PairCodec {
    alphabet: Arc<Alphabet>,
}

impl PairCodec {
    pub fn new(alphabet: Arc<Alphabet>) -> Result<Self, ModelError> {
        if alphabet.len() != 2 {
            return Err(ModelError::NonBinaryAlphabet { codec: "pair" });
        }
        Ok(PairCodec { alphabet })
    }

    fn check_input(&self, x: &SymbolString) -> Result<(), ModelError> {
        if !x.same_alphabet(&self.alphabet) {
            return Err(ModelError::AlphabetMismatch {
                context: "input vs. pair codec",
            });
        }
        Ok(())
    }

    /// Classifies the `floor(n/2)` consecutive pairs of `x`, in order,
    /// keeping the concrete spelling of each pair. A trailing unpaired
    /// symbol is not classified.
    pub fn classify(&self, x: &SymbolString) -> Result<Vec<(PairClass, [u8; 2])>, ModelError> {
        self.check_input(x)?;
        let classes = x
            .indices()
            .chunks_exact(2)
            .map(|pair| {
                let spelled = [pair[0], pair[1]];
                let class = match (pair[0], pair[1]) {
                    (0, 1) => PairClass::CarrierZero,
                    (1, 0) => PairClass::CarrierOne,
                    _ => PairClass::Constant,
                };
                (class, spelled)
            })
            .collect();
        Ok(classes)
    }

    /// Expected embedded bits per covertext letter: exactly `μ(a)·μ(b)`.
    pub fn expected_rate(&self, source: &IidSource) -> Result<BigRational, ModelError> {
        if source.alphabet().len() != 2 {
            return Err(ModelError::NonBinaryAlphabet { codec: "pair" });
        }
        Ok(source.prob(0) * source.prob(1))
    }
}

impl StegoCodec for PairCodec {
    fn name(&self) -> String {
        "pair".into()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        self.check_input(covertext)?;
        let mut out = Vec::with_capacity(covertext.len());
        let mut embedded = 0usize;
        let mut chunks = covertext.indices().chunks_exact(2);
        for pair in &mut chunks {
            if pair[0] == pair[1] {
                out.extend_from_slice(pair);
            } else {
                let bit = secrets.next_bit()?;
                if bit {
                    out.extend_from_slice(&[1, 0]);
                } else {
                    out.extend_from_slice(&[0, 1]);
                }
                embedded += 1;
            }
        }
        // Odd length: the final unpaired symbol is copied and carries no bits.
        out.extend_from_slice(chunks.remainder());
        Ok(EncodeResult {
            bits_embedded: embedded,
            stegotext: SymbolString::from_indices(self.alphabet.clone(), out)?,
        })
    }

    fn decode(&self, stegotext: &SymbolString) -> Result<Bits, ModelError> {
        self.check_input(stegotext)?;
        let mut bits = Bits::new();
        for pair in stegotext.indices().chunks_exact(2) {
            match (pair[0], pair[1]) {
                (0, 1) => bits.push(false),
                (1, 0) => bits.push(true),
                _ => {}
            }
        }
        Ok(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_strings;
    use num::bigint::BigInt;
    use num::Zero;
    use proptest::prelude::*;

    fn codec() -> PairCodec {
        PairCodec::new(Alphabet::binary()).unwrap()
    }

    fn s(text: &str) -> SymbolString {
        SymbolString::parse(&Alphabet::binary(), text).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    use PairClass::{CarrierOne as V1, CarrierZero as V0, Constant as U};

    #[test]
    fn classify_worked_example() {
        let classes: Vec<PairClass> = codec()
            .classify(&s("aababaaaabbaaaaabb"))
            .unwrap()
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        assert_eq!(classes, vec![U, V1, V1, U, V0, V1, U, U, U]);
    }

    #[test]
    fn classify_keeps_constant_spelling() {
        let classified = codec().classify(&s("aabb")).unwrap();
        assert_eq!(classified, vec![(U, [0, 0]), (U, [1, 1])]);
        let classified = codec().classify(&s("abba")).unwrap();
        assert_eq!(classified, vec![(V0, [0, 1]), (V1, [1, 0])]);
    }

    #[test]
    fn encode_worked_example() {
        let mut secrets = SecretProvider::from_bits(&"01100".parse().unwrap());
        let result = codec().encode(&s("aababaaaabbaaaaabb"), &mut secrets).unwrap();
        assert_eq!(result.bits_embedded, 4);
        assert_eq!(result.stegotext.to_string(), "aaabbaaabaabaaaabb");
        assert_eq!(secrets.consumed(), 4);
    }

    #[test]
    fn encode_without_carriers_copies_input() {
        let mut secrets = SecretProvider::from_seed(7);
        let result = codec().encode(&s("aaaaaa"), &mut secrets).unwrap();
        assert_eq!(result.bits_embedded, 0);
        assert_eq!(result.stegotext, s("aaaaaa"));
    }

    #[test]
    fn encode_single_carrier() {
        let mut secrets = SecretProvider::from_bits(&"1".parse().unwrap());
        let result = codec().encode(&s("ab"), &mut secrets).unwrap();
        assert_eq!(result.bits_embedded, 1);
        assert_eq!(result.stegotext.to_string(), "ba");
    }

    #[test]
    fn encode_odd_length_copies_trailing_symbol() {
        let mut secrets = SecretProvider::from_bits(&"1".parse().unwrap());
        let result = codec().encode(&s("aba"), &mut secrets).unwrap();
        assert_eq!(result.bits_embedded, 1);
        assert_eq!(result.stegotext.to_string(), "baa");
    }

    #[test]
    fn encode_errors_on_exhaustion() {
        let mut secrets = SecretProvider::from_bits(&"1".parse().unwrap());
        assert!(matches!(
            codec().encode(&s("abab"), &mut secrets),
            Err(ModelError::SecretsExhausted { .. })
        ));
    }

    #[test]
    fn non_binary_alphabet_rejected() {
        assert!(matches!(
            PairCodec::new(Alphabet::ternary()),
            Err(ModelError::NonBinaryAlphabet { codec: "pair" })
        ));
    }

    #[test]
    fn decode_worked_example() {
        assert_eq!(codec().decode(&s("aaabbaaabaabaaaabb")).unwrap().to_string(), "0110");
        assert_eq!(codec().decode(&s("aaaaaaaa")).unwrap(), Bits::new());
    }

    #[test]
    fn roundtrip_exhaustive_small() {
        let codec = codec();
        for n in 0..=8usize {
            for x in enumerate_strings(&Alphabet::binary(), n).unwrap() {
                let carriers = codec
                    .classify(&x)
                    .unwrap()
                    .iter()
                    .filter(|(c, _)| *c != U)
                    .count();
                for prefix in 0u32..(1 << carriers) {
                    let bits: Vec<bool> =
                        (0..carriers).map(|i| (prefix >> (carriers - 1 - i)) & 1 == 1).collect();
                    let mut provider = SecretProvider::from_bools(bits.clone());
                    let result = codec.encode(&x, &mut provider).unwrap();
                    assert_eq!(result.bits_embedded, carriers);
                    assert_eq!(result.stegotext.len(), n);
                    let decoded = codec.decode(&result.stegotext).unwrap();
                    assert_eq!(decoded.as_slice(), &bits[..]);
                }
            }
        }
    }

    #[test]
    fn expected_rate_examples() {
        let codec = codec();
        let uniform = IidSource::uniform(Alphabet::binary());
        assert_eq!(codec.expected_rate(&uniform).unwrap(), rat(1, 4));
        let biased = IidSource::binary(rat(2, 3)).unwrap();
        assert_eq!(codec.expected_rate(&biased).unwrap(), rat(2, 9));
        let degenerate = IidSource::binary(rat(1, 1)).unwrap();
        assert!(codec.expected_rate(&degenerate).unwrap().is_zero());
    }

    #[test]
    fn expected_rate_matches_exhaustive_expectation() {
        // Independent oracle: E[t]/n = sum_x mass(x) * (#carrier pairs) / n.
        let codec = codec();
        let biased = IidSource::binary(rat(2, 3)).unwrap();
        for n in [2usize, 4, 6] {
            let mut expectation = BigRational::zero();
            for x in enumerate_strings(&Alphabet::binary(), n).unwrap() {
                let carriers = codec
                    .classify(&x)
                    .unwrap()
                    .iter()
                    .filter(|(c, _)| *c != U)
                    .count();
                expectation += biased.mass(&x).unwrap() * BigRational::from_integer(carriers.into());
            }
            let rate = expectation / BigRational::from_integer(n.into());
            assert_eq!(rate, codec.expected_rate(&biased).unwrap());
        }
    }

    proptest! {
        #[test]
        fn embedded_count_depends_only_on_covertext(
            indices in proptest::collection::vec(0u8..2, 0..24),
            seed_a in any::<u64>(),
            seed_b in any::<u64>(),
        ) {
            let codec = codec();
            let x = SymbolString::from_indices(Alphabet::binary(), indices).unwrap();
            let mut pa = SecretProvider::from_seed(seed_a);
            let mut pb = SecretProvider::from_seed(seed_b);
            let ra = codec.encode(&x, &mut pa).unwrap();
            let rb = codec.encode(&x, &mut pb).unwrap();
            prop_assert_eq!(ra.bits_embedded, rb.bits_embedded);
            prop_assert_eq!(ra.stegotext.len(), x.len());
        }
    }
}
