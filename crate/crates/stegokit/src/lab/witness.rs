use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LabError;
use crate::model::{
    Alphabet, Bits, EncodeResult, ModelError, SecretProvider, StegoCodec, StringIter, SubsetSource,
    SymbolString,
};
use crate::verify::walk_secret_prefixes;

/// Largest `n` for which subset sources over `A^n` are materialized.
pub const MAX_SUBSET_LOG2: usize = 20;

fn check_subset_n(n: usize) -> Result<(), LabError> {
    if !(1..=MAX_SUBSET_LOG2).contains(&n) {
        return Err(LabError::NOutOfRange {
            n,
            min: 1,
            max: MAX_SUBSET_LOG2,
        });
    }
    Ok(())
}

/// Uniform source on a seeded random subset of binary `A^n` with exactly
/// `2^(n-1)` members. Deterministic for a fixed seed.
pub fn random_subset_source(n: usize, seed: u64) -> Result<SubsetSource, LabError> {
    check_subset_n(n)?;
    let alphabet = Alphabet::binary();
    let space = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = rand::seq::index::sample(&mut rng, space, space / 2).into_vec();
    picks.sort_unstable();
    let members: BTreeSet<SymbolString> = picks
        .into_iter()
        .map(|idx| {
            StringIter::range(&alphabet, n, idx as u128, 1)
                .next()
                .expect("index inside A^n")
        })
        .collect();
    Ok(SubsetSource::new(members)?)
}

/// The structured counterpart: all `2^(n-1)` binary strings whose first
/// symbol is `a` — describable by a constant-size rule instead of a table.
pub fn structured_subset_source(n: usize) -> Result<SubsetSource, LabError> {
    check_subset_n(n)?;
    let alphabet = Alphabet::binary();
    let members: BTreeSet<SymbolString> =
        StringIter::range(&alphabet, n, 0, 1u128 << (n - 1)).collect();
    Ok(SubsetSource::new(members)?)
}

/// Explicit table-based stegosystem over a subset source: selected disjoint
/// member pairs each carry one secret bit, every other string passes through.
///
/// Orientation is canonical: within a pair, the lexicographically smaller
/// element spells bit 0. Encoding a paired covertext consumes one bit and
/// emits the element of its pair that the bit selects; under a uniform source
/// this leaves the output distribution exactly uniform.
#[derive(Debug, Clone)]
pub struct PairingWitness {
    alphabet: Arc<Alphabet>,
    n: usize,
    /// Paired member -> (bit spelled by this member, partner).
    table: BTreeMap<SymbolString, (bool, SymbolString)>,
}

impl PairingWitness {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.table.len() / 2
    }

    /// The strings that code something: exactly the paired members.
    pub fn paired_members(&self) -> impl Iterator<Item = &SymbolString> {
        self.table.keys()
    }

    /// Exact transmission speed over its subset source: one bit for each
    /// paired string, i.e. `(#paired) / (|X| · n)`.
    pub fn exact_speed(&self, source: &SubsetSource) -> BigRational {
        BigRational::new(
            BigInt::from(self.table.len()),
            BigInt::from(source.len() * self.n),
        )
    }
}

impl StegoCodec for PairingWitness {
    fn name(&self) -> String {
        format!("witness(pairs={})", self.pair_count())
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        match self.table.get(covertext) {
            None => Ok(EncodeResult {
                bits_embedded: 0,
                stegotext: covertext.clone(),
            }),
            Some((own_bit, partner)) => {
                let bit = secrets.next_bit()?;
                let stegotext = if bit == *own_bit {
                    covertext.clone()
                } else {
                    partner.clone()
                };
                Ok(EncodeResult {
                    bits_embedded: 1,
                    stegotext,
                })
            }
        }
    }

    fn decode(&self, stegotext: &SymbolString) -> Result<Bits, ModelError> {
        Ok(match self.table.get(stegotext) {
            None => Bits::new(),
            Some((own_bit, _)) => Bits::from_bools(vec![*own_bit]),
        })
    }
}

/// Draws `floor(pair_fraction · |X| / 2)` disjoint pairs from `source`'s
/// members with a seeded shuffle and builds the table witness over them.
pub fn build_pairing_witness(
    source: &SubsetSource,
    pair_fraction: &BigRational,
    seed: u64,
) -> Result<PairingWitness, LabError> {
    if pair_fraction < &BigRational::zero() || pair_fraction > &BigRational::one() {
        return Err(LabError::BadPairFraction {
            fraction: crate::model::rational_str(pair_fraction),
        });
    }
    let pair_count = (pair_fraction * BigRational::from_integer(BigInt::from(source.len()))
        / BigRational::from_integer(BigInt::from(2)))
    .floor()
    .to_integer()
    .to_usize()
    .expect("pair count fits usize");
    if pair_count > 0 && source.len() < 2 {
        return Err(LabError::PairingInfeasible {
            members: source.len(),
        });
    }
    let mut members: Vec<SymbolString> = source.members().iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    members.shuffle(&mut rng);
    let mut table = BTreeMap::new();
    for pair in members.chunks_exact(2).take(pair_count) {
        let (zero, one) = if pair[0] < pair[1] {
            (pair[0].clone(), pair[1].clone())
        } else {
            (pair[1].clone(), pair[0].clone())
        };
        table.insert(zero.clone(), (false, one.clone()));
        table.insert(one, (true, zero));
    }
    Ok(PairingWitness {
        alphabet: source.alphabet().clone(),
        n: source.n(),
        table,
    })
}

/// Rule-based full-rate witness over the structured subset (first symbol
/// `a`): a string's partner is itself with the last symbol flipped, so the
/// last symbol spells the bit (`a` = 0, `b` = 1). No table needed; the whole
/// decoder is this constant-size rule.
#[derive(Debug, Clone)]
pub struct RuleWitness {
    alphabet: Arc<Alphabet>,
    n: usize,
}

impl RuleWitness {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The decoder in its canonical table-free serialized form.
    pub fn description_bytes(&self) -> Vec<u8> {
        format!(
            "rule-decoder v1\nn={}\ndomain: first symbol 'a'\nbit: last symbol ('a'=0, 'b'=1)\npartner: flip last symbol\n",
            self.n
        )
        .into_bytes()
    }
}

pub fn build_rule_witness(n: usize) -> Result<RuleWitness, LabError> {
    check_subset_n(n)?;
    if n < 2 {
        return Err(LabError::NOutOfRange {
            n,
            min: 2,
            max: MAX_SUBSET_LOG2,
        });
    }
    Ok(RuleWitness {
        alphabet: Alphabet::binary(),
        n,
    })
}

impl StegoCodec for RuleWitness {
    fn name(&self) -> String {
        "rule-witness".into()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        if covertext.len() != self.n {
            return Err(ModelError::LengthMismatch {
                expected: self.n,
                actual: covertext.len(),
            });
        }
        if covertext.index_at(0) != 0 {
            // Outside the structured subset: pass through.
            return Ok(EncodeResult {
                bits_embedded: 0,
                stegotext: covertext.clone(),
            });
        }
        let bit = secrets.next_bit()?;
        let mut indices = covertext.indices().to_vec();
        *indices.last_mut().expect("n >= 2") = bit as u8;
        Ok(EncodeResult {
            bits_embedded: 1,
            stegotext: SymbolString::from_indices(self.alphabet.clone(), indices)?,
        })
    }

    fn decode(&self, stegotext: &SymbolString) -> Result<Bits, ModelError> {
        if stegotext.len() != self.n {
            return Err(ModelError::LengthMismatch {
                expected: self.n,
                actual: stegotext.len(),
            });
        }
        Ok(if stegotext.index_at(0) == 0 {
            Bits::from_bools(vec![stegotext.index_at(self.n - 1) == 1])
        } else {
            Bits::new()
        })
    }
}

/// The codeword sets of a codec over a domain: `all = {x : decode(x) ≠ Λ}`,
/// split by the first decoded bit into the disjoint `zero` and `one`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordSets {
    pub all: BTreeSet<SymbolString>,
    pub zero: BTreeSet<SymbolString>,
    pub one: BTreeSet<SymbolString>,
}

pub fn codeword_sets<I>(codec: &dyn StegoCodec, domain: I) -> Result<CodewordSets, LabError>
where
    I: IntoIterator<Item = SymbolString>,
{
    let mut sets = CodewordSets {
        all: BTreeSet::new(),
        zero: BTreeSet::new(),
        one: BTreeSet::new(),
    };
    for x in domain {
        let decoded = codec.decode(&x)?;
        if let Some(first) = decoded.get(0) {
            if first {
                sets.one.insert(x.clone());
            } else {
                sets.zero.insert(x.clone());
            }
            sets.all.insert(x);
        }
    }
    Ok(sets)
}

/// Largest number of bits the codec embeds on any string in `domain`,
/// discovered by sweeping all reachable secret prefixes up to
/// `initial_bound`.
pub fn max_bits_embedded<'a, I>(
    codec: &dyn StegoCodec,
    domain: I,
    initial_bound: usize,
) -> Result<usize, LabError>
where
    I: IntoIterator<Item = &'a SymbolString>,
{
    let mut max_bits = 0usize;
    for x in domain {
        walk_secret_prefixes(codec, x, &[], initial_bound, |bits, _| {
            max_bits = max_bits.max(bits.len());
            Ok(())
        })?;
    }
    Ok(max_bits)
}

/// Result of iterating `T_k = T_{k-1} ∪ φ(T_{k-1})` to its fixpoint, where
/// `φ(T)` collects encoder outputs on `T` under secrets starting with 1.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub fixpoint: BTreeSet<SymbolString>,
    /// Number of strictly growing steps before stabilization.
    pub iterations: usize,
    /// `|T_0|, |T_1|, ..., |T_iterations|`, strictly increasing.
    pub sizes: Vec<usize>,
    /// Encoder outputs that escaped the universe: nonempty means the codec is
    /// not actually secure for the uniform source on the universe. Reported,
    /// not raised.
    pub escaped: BTreeSet<SymbolString>,
}

impl ClosureResult {
    pub fn fixpoint_is(&self, universe: &BTreeSet<SymbolString>) -> bool {
        &self.fixpoint == universe && self.escaped.is_empty()
    }
}

/// Runs the closure iteration from `start ⊆ universe` with secret streams
/// forced to begin with bit 1, enumerating continuations up to
/// `secret_bound` bits.
///
/// For a perfectly secure codec over the uniform source on `universe`,
/// starting from `universe \ Z1` the fixpoint is the whole universe: the
/// missing codewords of 1-starting secrets are reachable as encoder images,
/// and nothing can stay unreachable without receiving zero output mass.
pub fn closure(
    codec: &dyn StegoCodec,
    universe: &BTreeSet<SymbolString>,
    start: &BTreeSet<SymbolString>,
    secret_bound: usize,
) -> Result<ClosureResult, LabError> {
    if !start.is_subset(universe) {
        return Err(LabError::StartNotInUniverse);
    }
    let mut current = start.clone();
    let mut sizes = vec![current.len()];
    let mut escaped = BTreeSet::new();
    let mut iterations = 0usize;
    loop {
        let mut next = current.clone();
        for x in &current {
            walk_secret_prefixes(codec, x, &[true], secret_bound, |_, result| {
                if universe.contains(&result.stegotext) {
                    next.insert(result.stegotext);
                } else {
                    escaped.insert(result.stegotext);
                }
                Ok(())
            })?;
        }
        if next == current {
            return Ok(ClosureResult {
                fixpoint: current,
                iterations,
                sizes,
                escaped,
            });
        }
        iterations += 1;
        sizes.push(next.len());
        current = next;
    }
}
