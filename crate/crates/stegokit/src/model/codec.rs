use std::sync::Arc;

use super::alphabet::{Alphabet, Bits, SymbolString};
use super::secret::SecretProvider;
use super::ModelError;

/// Outcome of one encoding step: how many secret bits were embedded and the
/// stegotext to transmit. Only the stegotext goes on the wire; the bit count
/// stays with the sender.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeResult {
    pub bits_embedded: usize,
    pub stegotext: SymbolString,
}

/// The encoder/decoder contract shared by every stegosystem in the crate.
///
/// Contract, checked by the verifier over every enumerated input:
/// - the stegotext has the same length as the covertext;
/// - `bits_embedded` equals the number of bits actually pulled from the
///   provider, and is at most `n * ceil(log2 |A|)`;
/// - `decode` is total on strings over the codec's alphabet and returns the
///   empty sequence when nothing is embedded;
/// - encoding is deterministic given the covertext and the secret bits.
///
/// Codecs are immutable after construction, so they are `Send + Sync` and
/// exhaustive sweeps may call them from several threads on disjoint inputs.
pub trait StegoCodec: Send + Sync {
    /// Short identifier used in reports (e.g. `pair`, `block(l=4)`).
    fn name(&self) -> String;

    fn alphabet(&self) -> &Arc<Alphabet>;

    fn encode(
        &self,
        covertext: &SymbolString,
        secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError>;

    fn decode(&self, stegotext: &SymbolString) -> Result<Bits, ModelError>;
}
