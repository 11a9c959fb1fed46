//! Steganography toolkit with exact, machine-checkable security verification.
//!
//! The crate implements stegosystems whose output is distributed *identically*
//! to the covertext source — not approximately, but as an exact equality of
//! rational probability masses — together with the machinery to verify that
//! claim by exhaustive enumeration:
//!
//! - [`pair`]: the pair codec for binary i.i.d. covertexts. Constant pairs
//!   (`aa`, `bb`) pass through; the orientation of each mixed pair carries one
//!   fair secret bit (`ab` = 0, `ba` = 1).
//! - [`block`]: a blockwise generalization for arbitrary finite alphabets.
//!   Every block is re-indexed inside its type class (all strings with the
//!   same symbol histogram are equiprobable under an i.i.d. source) through a
//!   power-of-two partition of the class, so fresh fair bits re-uniformize the
//!   output exactly while the rate climbs toward the source entropy as the
//!   block length grows.
//! - [`verify`]: zero-tolerance verification. Output distributions, decoding
//!   round-trips, and transmission speed are computed over every covertext and
//!   every reachable secret prefix in big-rational arithmetic; a seeded
//!   chi-square harness covers sizes where exhaustion is infeasible.
//! - [`lab`]: combinatorial experiments on uniform-subset sources: explicit
//!   pairing-witness stegosystems, codeword-set extraction, the encoder-image
//!   closure iteration and its fixpoint, binomial/entropy bounds, and a
//!   compression proxy for decoder description size.
//!
//! Probabilities are exact rationals with big-integer numerators and
//! denominators; floating point appears only where a quantity is inherently
//! real-valued (entropies, logarithms, chi-square statistics).
//!
//! Start with the runnable programs in `examples/`; the `stegokit` binary
//! exposes the same operations as batch subcommands.

pub mod block;
pub mod cli;
pub mod lab;
pub mod model;
pub mod pair;
pub mod verify;

pub use model::{
    Alphabet, Bits, EncodeResult, IidSource, ModelError, SecretProvider, Source, StegoCodec,
    SubsetSource, SymbolString,
};
