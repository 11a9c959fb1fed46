//! Exhaustive, zero-tolerance verification of stegosystem security, decoding
//! correctness, and transmission speed, plus a seeded statistical harness for
//! sizes beyond exhaustion.
//!
//! The central object is the *output distribution* of a codec under a source
//! and fair secret bits:
//!
//! ```text
//! P(x') = Σ_x mass(x) · Σ_{y ∈ {0,1}^B} 2^(-B) · [encode(x, y).stegotext = x']
//! ```
//!
//! with `B = n · ceil(log2 |A|)`, an upper bound on the bits any conforming
//! codec may consume. Because an encoder reads its secret bits sequentially,
//! the number it consumes is a stopping time: whether another bit is read
//! depends only on the covertext and the bits already read. The sweep
//! therefore walks the binary tree of *consumed* prefixes — each leaf carries
//! probability `2^(-t)` — which evaluates the sum above exactly without
//! enumerating all `2^B` continuations. A unit test pits this walk against the
//! plain `2^B` enumeration.
//!
//! A codec is perfectly secure when `P(x') = mass(x')` for every string, with
//! zero discrepancy in exact rational arithmetic. Deliberately broken codecs
//! ([`IdentityCodec`], [`ConstantCodec`], [`FlippedDecoderCodec`]) ship here
//! so the verifier can be shown to fail.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

use crate::model::{
    rational_str, Alphabet, Bits, EncodeResult, ModelError, SecretProvider, Source, StegoCodec,
    StringIter, SymbolString, DEFAULT_ENUMERATION_BUDGET,
};

/// Significance level for the Monte Carlo chi-square control.
pub const MONTE_CARLO_ALPHA: f64 = 0.001;

/// Minimum accepted Monte Carlo sample count.
pub const MONTE_CARLO_MIN_TRIALS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("codec consumed more than {bound} secret bits on covertext {covertext}")]
    SecretBoundExceeded { covertext: String, bound: usize },
    #[error("codec reported {reported} embedded bits but consumed {consumed} on {covertext}")]
    EmbeddedCountMismatch {
        covertext: String,
        reported: usize,
        consumed: usize,
    },
    #[error("stegotext length {actual} differs from covertext length {expected} on {covertext}")]
    LengthChanged {
        covertext: String,
        expected: usize,
        actual: usize,
    },
    #[error("codec alphabet does not match source alphabet")]
    AlphabetMismatch,
    #[error("codec consumed secret bits nondeterministically on {covertext}")]
    NondeterministicConsumption { covertext: String },
    #[error("output masses sum to {total}, expected exactly 1")]
    MassTotalNotOne { total: String },
    #[error("monte carlo needs at least {min} trials, got {actual}")]
    TooFewTrials { min: u64, actual: u64 },
    #[error("monte carlo sampling supports i.i.d. sources only")]
    MonteCarloSourceUnsupported,
}

/// Default secret-prefix bound `B = n · ceil(log2 |A|)`: no conforming codec
/// can embed more bits than that into `n` symbols.
pub fn default_secret_bound(alphabet: &Alphabet, n: usize) -> usize {
    n * alphabet.bits_per_symbol()
}

/// Walks every reachable consumed-secret-prefix of `codec.encode(x, ·)`.
///
/// `forced_prefix` pins the leading bits (used by the closure iteration to
/// range over secrets starting with 1); the walk never flips those. `visit`
/// receives each leaf's consumed bits and the encoder output; a leaf of `t`
/// bits occurs with probability `2^(-t)` under fair secrets, and the leaves
/// partition the whole secret space. Codec contract violations (consuming
/// beyond `bound`, misreporting the consumed count, changing the length)
/// surface as errors.
pub fn walk_secret_prefixes<F>(
    codec: &dyn StegoCodec,
    covertext: &SymbolString,
    forced_prefix: &[bool],
    bound: usize,
    mut visit: F,
) -> Result<(), VerifyError>
where
    F: FnMut(&[bool], EncodeResult) -> Result<(), VerifyError>,
{
    let mut path: Vec<bool> = forced_prefix.to_vec();
    let mut first = true;
    loop {
        let mut script = path.clone();
        script.resize(bound.max(path.len()), false);
        let mut provider = SecretProvider::from_bools(script);
        let result = match codec.encode(covertext, &mut provider) {
            Ok(r) => r,
            Err(ModelError::SecretsExhausted { .. }) => {
                return Err(VerifyError::SecretBoundExceeded {
                    covertext: covertext.to_string(),
                    bound,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let consumed = provider.consumed();
        if result.bits_embedded != consumed {
            return Err(VerifyError::EmbeddedCountMismatch {
                covertext: covertext.to_string(),
                reported: result.bits_embedded,
                consumed,
            });
        }
        if result.stegotext.len() != covertext.len() {
            return Err(VerifyError::LengthChanged {
                covertext: covertext.to_string(),
                expected: covertext.len(),
                actual: result.stegotext.len(),
            });
        }
        match consumed.cmp(&path.len()) {
            std::cmp::Ordering::Less if first => path.truncate(consumed),
            std::cmp::Ordering::Less => {
                // A sequential reader cannot consume fewer bits than the
                // prefix it already followed on a previous run.
                return Err(VerifyError::NondeterministicConsumption {
                    covertext: covertext.to_string(),
                });
            }
            _ => path.resize(consumed, false),
        }
        first = false;
        visit(&path, result)?;

        // Next leaf: flip the deepest unexplored 0 above the forced prefix.
        let mut advanced = false;
        for i in (forced_prefix.len()..path.len()).rev() {
            if !path[i] {
                path[i] = true;
                path.truncate(i + 1);
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(());
        }
    }
}

/// Accumulated results of one exhaustive sweep. Merging is associative and
/// exact, so partitioned runs reproduce the sequential result bit for bit.
#[derive(Debug, Clone)]
struct SweepOutcome {
    distribution: BTreeMap<SymbolString, BigRational>,
    expected_bits: BigRational,
    total_mass: BigRational,
    roundtrip_failure: Option<RoundtripCounterexample>,
}

impl SweepOutcome {
    fn empty() -> Self {
        SweepOutcome {
            distribution: BTreeMap::new(),
            expected_bits: BigRational::zero(),
            total_mass: BigRational::zero(),
            roundtrip_failure: None,
        }
    }

    fn merge(mut self, other: SweepOutcome) -> SweepOutcome {
        for (key, value) in other.distribution {
            *self
                .distribution
                .entry(key)
                .or_insert_with(BigRational::zero) += value;
        }
        self.expected_bits += other.expected_bits;
        self.total_mass += other.total_mass;
        // Partitions arrive in lexicographic order, so keeping the first
        // counterexample keeps the lexicographically earliest one.
        if self.roundtrip_failure.is_none() {
            self.roundtrip_failure = other.roundtrip_failure;
        }
        self
    }
}

/// First decoding failure found by [`verify_roundtrip`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripCounterexample {
    pub covertext: SymbolString,
    pub secrets_consumed: Bits,
    pub stegotext: SymbolString,
    pub decoded: Bits,
}

fn sweep_strings<I>(
    codec: &dyn StegoCodec,
    source: &Source,
    bound: usize,
    strings: I,
) -> Result<SweepOutcome, VerifyError>
where
    I: Iterator<Item = SymbolString>,
{
    let mut outcome = SweepOutcome::empty();
    for x in strings {
        let mass = source.mass(&x)?;
        if mass.is_zero() {
            continue;
        }
        walk_secret_prefixes(codec, &x, &[], bound, |bits, result| {
            let leaf_prob = BigRational::new(BigInt::one(), BigInt::one() << bits.len());
            let contribution = &mass * &leaf_prob;
            outcome.expected_bits += &contribution * BigRational::from_integer(bits.len().into());
            if outcome.roundtrip_failure.is_none() {
                let decoded = codec.decode(&result.stegotext)?;
                if decoded.as_slice() != bits {
                    outcome.roundtrip_failure = Some(RoundtripCounterexample {
                        covertext: x.clone(),
                        secrets_consumed: Bits::from_bools(bits.to_vec()),
                        stegotext: result.stegotext.clone(),
                        decoded,
                    });
                }
            }
            outcome.total_mass += &contribution;
            *outcome
                .distribution
                .entry(result.stegotext)
                .or_insert_with(BigRational::zero) += contribution;
            Ok(())
        })?;
    }
    Ok(outcome)
}

fn run_sweep(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    bound: usize,
    budget: u64,
    partitions: usize,
) -> Result<SweepOutcome, VerifyError> {
    if **codec.alphabet() != **source.alphabet() {
        return Err(VerifyError::AlphabetMismatch);
    }
    let outcome = match source {
        Source::Subset(subset) => {
            if n != subset.n() {
                return Err(VerifyError::Model(ModelError::LengthMismatch {
                    expected: subset.n(),
                    actual: n,
                }));
            }
            sweep_strings(codec, source, bound, subset.members().iter().cloned())?
        }
        Source::Iid(iid) => {
            let total = match crate::model::string_space_size(iid.alphabet().len(), n) {
                Some(t) if t <= budget as u128 => t,
                other => {
                    return Err(VerifyError::Model(ModelError::BudgetExceeded {
                        required: other.map_or_else(
                            || format!("{}^{}", iid.alphabet().len(), n),
                            |t| t.to_string(),
                        ),
                        budget,
                    }))
                }
            };
            let parts = partitions.clamp(1, total.clamp(1, 64) as usize);
            if parts == 1 {
                sweep_strings(
                    codec,
                    source,
                    bound,
                    StringIter::range(iid.alphabet(), n, 0, total),
                )?
            } else {
                let chunk = total / parts as u128;
                let ranges: Vec<(u128, u128)> = (0..parts as u128)
                    .map(|i| {
                        let start = i * chunk;
                        let count = if i == parts as u128 - 1 {
                            total - start
                        } else {
                            chunk
                        };
                        (start, count)
                    })
                    .collect();
                let results: Vec<Result<SweepOutcome, VerifyError>> =
                    std::thread::scope(|scope| {
                        let handles: Vec<_> = ranges
                            .iter()
                            .map(|&(start, count)| {
                                scope.spawn(move || {
                                    sweep_strings(
                                        codec,
                                        source,
                                        bound,
                                        StringIter::range(iid.alphabet(), n, start, count),
                                    )
                                })
                            })
                            .collect();
                        handles
                            .into_iter()
                            .map(|h| h.join().expect("sweep worker panicked"))
                            .collect()
                    });
                let mut merged = SweepOutcome::empty();
                for r in results {
                    merged = merged.merge(r?);
                }
                merged
            }
        }
    };
    if !outcome.total_mass.is_one() {
        return Err(VerifyError::MassTotalNotOne {
            total: rational_str(&outcome.total_mass),
        });
    }
    Ok(outcome)
}

fn default_partitions() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get().min(8))
        .unwrap_or(1)
}

/// Exact output distribution of `codec` over length-`n` covertexts from
/// `source` under fair secrets: a map from stegotext to rational mass,
/// summing to exactly 1.
pub fn exact_output_distribution(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    secret_bound: Option<usize>,
    budget: u64,
) -> Result<BTreeMap<SymbolString, BigRational>, VerifyError> {
    let bound = secret_bound.unwrap_or_else(|| default_secret_bound(codec.alphabet(), n));
    let outcome = run_sweep(codec, source, n, bound, budget, default_partitions())?;
    Ok(outcome.distribution)
}

/// Exact transmission speed `E[t] / n` in secret bits per covertext letter.
pub fn measure_speed(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    budget: u64,
) -> Result<BigRational, VerifyError> {
    let bound = default_secret_bound(codec.alphabet(), n);
    let outcome = run_sweep(codec, source, n, bound, budget, default_partitions())?;
    Ok(outcome.expected_bits / BigRational::from_integer(BigInt::from(n.max(1))))
}

/// Checks that decoding recovers exactly the consumed secret bits for every
/// support covertext and every reachable secret prefix. The counterexample,
/// when present, is reported in-band.
pub fn verify_roundtrip(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    budget: u64,
) -> Result<Result<(), RoundtripCounterexample>, VerifyError> {
    let bound = default_secret_bound(codec.alphabet(), n);
    let outcome = run_sweep(codec, source, n, bound, budget, default_partitions())?;
    Ok(match outcome.roundtrip_failure {
        None => Ok(()),
        Some(cx) => Err(cx),
    })
}

/// Exact verdict on perfect security together with round-trip and speed
/// results for the same sweep.
#[derive(Debug, Clone)]
pub struct SecurityReport {
    pub codec: String,
    pub source: String,
    pub n: usize,
    pub secure: bool,
    /// Max over all strings of |output mass − source mass|, exact.
    pub max_discrepancy: BigRational,
    /// Lexicographically first string attaining the maximum, when nonzero.
    pub worst_string: Option<SymbolString>,
    pub roundtrip_ok: bool,
    pub roundtrip_counterexample: Option<RoundtripCounterexample>,
    /// Exact `E[t] / n`, in `[0, log2 |A|]`.
    pub exact_speed: BigRational,
}

impl SecurityReport {
    /// The report as a JSON document; exact rationals appear as decimal-free
    /// `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "codec": self.codec,
            "source": self.source,
            "n": self.n,
            "secure": self.secure,
            "max_discrepancy": rational_str(&self.max_discrepancy),
            "worst_string": self.worst_string.as_ref().map(|s| s.to_string()),
            "roundtrip_ok": self.roundtrip_ok,
            "exact_speed": rational_str(&self.exact_speed),
        })
    }
}

/// Compares the exact output distribution against the source masses string by
/// string and assembles the full [`SecurityReport`].
pub fn verify_perfect_security(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    budget: u64,
) -> Result<SecurityReport, VerifyError> {
    let bound = default_secret_bound(codec.alphabet(), n);
    let outcome = run_sweep(codec, source, n, bound, budget, default_partitions())?;

    let mut max_discrepancy = BigRational::zero();
    let mut worst: Option<SymbolString> = None;
    let zero = BigRational::zero();
    let mut check = |x: &SymbolString| -> Result<(), VerifyError> {
        let produced = outcome.distribution.get(x).unwrap_or(&zero);
        let expected = source.mass(x)?;
        let mut diff = produced - &expected;
        if diff < BigRational::zero() {
            diff = -diff;
        }
        if diff > max_discrepancy {
            max_discrepancy = diff;
            worst = Some(x.clone());
        }
        Ok(())
    };

    match source {
        Source::Iid(iid) => {
            // Every string of A^n needs comparing; iterate the space in
            // lexicographic order so the witness is the first maximizer.
            for x in crate::model::enumerate_strings_with_budget(iid.alphabet(), n, budget)? {
                check(&x)?;
            }
        }
        Source::Subset(subset) => {
            // Outside members ∪ outputs both masses are zero.
            let mut candidates: std::collections::BTreeSet<&SymbolString> =
                subset.members().iter().collect();
            candidates.extend(outcome.distribution.keys());
            for x in candidates {
                check(x)?;
            }
        }
    }

    Ok(SecurityReport {
        codec: codec.name(),
        source: source.describe(),
        n,
        secure: max_discrepancy.is_zero(),
        worst_string: if max_discrepancy.is_zero() {
            None
        } else {
            worst
        },
        max_discrepancy,
        roundtrip_ok: outcome.roundtrip_failure.is_none(),
        roundtrip_counterexample: outcome.roundtrip_failure,
        exact_speed: outcome.expected_bits / BigRational::from_integer(BigInt::from(n.max(1))),
    })
}

/// Convenience wrapper for the exact battery with the default budget.
pub fn verify_with_default_budget(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
) -> Result<SecurityReport, VerifyError> {
    verify_perfect_security(codec, source, n, DEFAULT_ENUMERATION_BUDGET)
}

// ---------------------------------------------------------------------------
// Negative-control codecs
// ---------------------------------------------------------------------------

/// Embeds nothing: output equals input, decode returns Λ. Perfectly secure
/// and useless.
#[derive(Debug, Clone)]
pub struct IdentityCodec {
    alphabet: Arc<Alphabet>,
}

impl IdentityCodec {
    pub fn new(alphabet: Arc<Alphabet>) -> Self {
        IdentityCodec { alphabet }
    }
}

impl StegoCodec for IdentityCodec {
    fn name(&self) -> String {
        "identity".into()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        _secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        Ok(EncodeResult {
            bits_embedded: 0,
            stegotext: covertext.clone(),
        })
    }

    fn decode(&self, _stegotext: &SymbolString) -> Result<Bits, ModelError> {
        Ok(Bits::new())
    }
}

/// Maps every covertext to the all-first-symbol string of the same length.
/// Maximally insecure control.
#[derive(Debug, Clone)]
pub struct ConstantCodec {
    alphabet: Arc<Alphabet>,
}

impl ConstantCodec {
    pub fn new(alphabet: Arc<Alphabet>) -> Self {
        ConstantCodec { alphabet }
    }
}

impl StegoCodec for ConstantCodec {
    fn name(&self) -> String {
        "constant".into()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        _secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        Ok(EncodeResult {
            bits_embedded: 0,
            stegotext: SymbolString::from_indices(self.alphabet.clone(), vec![0; covertext.len()])?,
        })
    }

    fn decode(&self, _stegotext: &SymbolString) -> Result<Bits, ModelError> {
        Ok(Bits::new())
    }
}

/// Pair codec with a sabotaged decoder that inverts every bit. Round-trip
/// control: encoding is fine, decoding is provably wrong.
#[derive(Debug, Clone)]
pub struct FlippedDecoderCodec {
    inner: crate::pair::PairCodec,
}

impl FlippedDecoderCodec {
    pub fn new(alphabet: Arc<Alphabet>) -> Result<Self, ModelError> {
        Ok(FlippedDecoderCodec {
            inner: crate::pair::PairCodec::new(alphabet)?,
        })
    }
}

impl StegoCodec for FlippedDecoderCodec {
    fn name(&self) -> String {
        "flipdec".into()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        self.inner.alphabet()
    }

    fn encode(
        &self,
        covertext: &SymbolString,
        secrets: &mut SecretProvider,
    ) -> Result<EncodeResult, ModelError> {
        self.inner.encode(covertext, secrets)
    }

    fn decode(&self, stegotext: &SymbolString) -> Result<Bits, ModelError> {
        Ok(self.inner.decode(stegotext)?.iter().map(|b| !b).collect())
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo harness
// ---------------------------------------------------------------------------

/// Seeded statistical check for sizes where exhaustion is infeasible:
/// chi-square over pair-type counts plus empirical speed.
#[derive(Debug, Clone)]
pub struct MonteCarloReport {
    pub codec: String,
    pub source: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Worker count the per-worker generators were derived for; recorded so
    /// the run is reproducible.
    pub threads: usize,
    /// Pair-type labels in bin order (e.g. `aa`, `ab`, `ba`, `bb`).
    pub bin_labels: Vec<String>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// `true` when `p_value < MONTE_CARLO_ALPHA`.
    pub rejected: bool,
    pub empirical_speed: f64,
    /// Half-width of the 95% normal-approximation interval on the speed.
    pub speed_ci_halfwidth: f64,
}

impl MonteCarloReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "codec": self.codec,
            "source": self.source,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "threads": self.threads,
            "bin_labels": self.bin_labels,
            "observed": self.observed,
            "expected": self.expected,
            "chi_square": self.chi_square,
            "degrees_of_freedom": self.degrees_of_freedom,
            "p_value": self.p_value,
            "rejected": self.rejected,
            "empirical_speed": self.empirical_speed,
            "speed_ci_halfwidth": self.speed_ci_halfwidth,
        })
    }
}

fn derive_worker_seed(seed: u64, worker: u64) -> u64 {
    // splitmix64 step over (seed, worker index).
    let mut z = seed
        .wrapping_add(worker.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples `trials` protocol runs with a seeded generator and tests the
/// stegotext pair-type counts against the source pair-type distribution.
///
/// A perfectly secure codec passes at significance [`MONTE_CARLO_ALPHA`] for
/// all but an α fraction of seeds; a broken one is rejected overwhelmingly.
/// Fully reproducible given the seed and recorded thread count.
pub fn monte_carlo_check(
    codec: &dyn StegoCodec,
    source: &Source,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport, VerifyError> {
    use rand::{Rng, SeedableRng};

    if trials < MONTE_CARLO_MIN_TRIALS {
        return Err(VerifyError::TooFewTrials {
            min: MONTE_CARLO_MIN_TRIALS,
            actual: trials,
        });
    }
    let Source::Iid(iid) = source else {
        return Err(VerifyError::MonteCarloSourceUnsupported);
    };
    if **codec.alphabet() != **iid.alphabet() {
        return Err(VerifyError::AlphabetMismatch);
    }

    let alphabet = iid.alphabet();
    let k = alphabet.len();
    let probs: Vec<f64> = iid
        .probs()
        .iter()
        .map(|p| p.to_f64().expect("probability fits f64"))
        .collect();

    let threads = 1usize;
    let mut covertext_rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_worker_seed(seed, 0));
    let mut secrets = SecretProvider::from_seed(derive_worker_seed(seed, u64::MAX));

    let mut observed = vec![0u64; k * k];
    let mut speed_sum = 0.0f64;
    let mut speed_sq_sum = 0.0f64;
    for _ in 0..trials {
        let mut indices = Vec::with_capacity(n);
        for _ in 0..n {
            let r: f64 = covertext_rng.random();
            let mut cumulative = 0.0;
            let mut chosen = k - 1;
            for (i, &p) in probs.iter().enumerate() {
                cumulative += p;
                if r < cumulative {
                    chosen = i;
                    break;
                }
            }
            indices.push(chosen as u8);
        }
        let covertext = SymbolString::from_indices_unchecked(alphabet.clone(), indices);
        let result = codec.encode(&covertext, &mut secrets)?;
        for pair in result.stegotext.indices().chunks_exact(2) {
            observed[pair[0] as usize * k + pair[1] as usize] += 1;
        }
        let rate = result.bits_embedded as f64 / n as f64;
        speed_sum += rate;
        speed_sq_sum += rate * rate;
    }

    let pairs_per_trial = (n / 2) as f64;
    let total_pairs = trials as f64 * pairs_per_trial;
    let mut bin_labels = Vec::with_capacity(k * k);
    let mut expected = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            bin_labels.push(format!("{}{}", alphabet.symbol(i), alphabet.symbol(j)));
            expected.push(total_pairs * probs[i] * probs[j]);
        }
    }

    let mut chi_square = 0.0f64;
    let mut dof = 0usize;
    let mut impossible_hit = false;
    for (&obs, &exp) in observed.iter().zip(&expected) {
        if exp > 0.0 {
            let d = obs as f64 - exp;
            chi_square += d * d / exp;
            dof += 1;
        } else if obs > 0 {
            impossible_hit = true;
        }
    }
    let dof = dof.saturating_sub(1);
    let p_value = if impossible_hit {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        statrs::function::gamma::gamma_ur(dof as f64 / 2.0, chi_square / 2.0)
    };

    let mean = speed_sum / trials as f64;
    let variance = (speed_sq_sum / trials as f64 - mean * mean).max(0.0);
    let ci = 1.96 * (variance / trials as f64).sqrt();

    Ok(MonteCarloReport {
        codec: codec.name(),
        source: source.describe(),
        n,
        trials,
        seed,
        threads,
        bin_labels,
        observed,
        expected,
        chi_square,
        degrees_of_freedom: dof,
        p_value,
        rejected: p_value < MONTE_CARLO_ALPHA,
        empirical_speed: mean,
        speed_ci_halfwidth: ci,
    })
}
