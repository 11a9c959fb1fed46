//! Heavier exhaustive invariants that back the per-module contracts: mass
//! totals, decoding round-trips at the largest advertised sizes, and the
//! encoder contract for every codec shipped in the crate.

use num::rational::BigRational;
use num::{One, Zero};

use stegokit::block::BlockCodec;
use stegokit::lab;
use stegokit::model::{
    enumerate_strings, Alphabet, IidSource, Source, StegoCodec, SymbolString,
};
use stegokit::pair::PairCodec;
use stegokit::verify::{
    default_secret_bound, verify_roundtrip, walk_secret_prefixes, ConstantCodec,
    FlippedDecoderCodec, IdentityCodec,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn source_masses_sum_to_one_up_to_n10() {
    for n in [9usize, 10] {
        let binary = IidSource::binary(rat(9, 10)).unwrap();
        let total: BigRational = enumerate_strings(binary.alphabet(), n)
            .unwrap()
            .map(|x| binary.mass(&x).unwrap())
            .sum();
        assert!(total.is_one(), "binary n={n}");

        let ternary = IidSource::new(
            Alphabet::ternary(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        let total: BigRational = enumerate_strings(ternary.alphabet(), n)
            .unwrap()
            .map(|x| ternary.mass(&x).unwrap())
            .sum();
        assert!(total.is_one(), "ternary n={n}");
    }
}

#[test]
fn pair_roundtrip_exhaustive_n12() {
    let codec = PairCodec::new(Alphabet::binary()).unwrap();
    let source = Source::Iid(IidSource::uniform(Alphabet::binary()));
    assert!(verify_roundtrip(&codec, &source, 12, 1 << 20)
        .unwrap()
        .is_ok());
}

#[test]
fn block_roundtrip_exhaustive_l4_n12() {
    let codec = BlockCodec::new(Alphabet::binary(), 4).unwrap();
    let source = Source::Iid(IidSource::uniform(Alphabet::binary()));
    assert!(verify_roundtrip(&codec, &source, 12, 1 << 20)
        .unwrap()
        .is_ok());
}

/// Every codec in the crate, over every enumerated covertext and every
/// reachable secret prefix: the stegotext keeps the covertext length and the
/// reported bit count equals the consumption the provider instrumented.
/// `walk_secret_prefixes` turns any violation into an error, so a clean walk
/// is the assertion.
#[test]
fn every_codec_honors_the_encode_contract() {
    let binary = Alphabet::binary();
    let subset = lab::random_subset_source(6, 21).unwrap();
    let witness = lab::build_pairing_witness(&subset, &rat(1, 2), 21).unwrap();
    let rule = lab::build_rule_witness(6).unwrap();

    let pair = PairCodec::new(binary.clone()).unwrap();
    let block3 = BlockCodec::new(binary.clone(), 3).unwrap();
    let identity = IdentityCodec::new(binary.clone());
    let constant = ConstantCodec::new(binary.clone());
    let flipdec = FlippedDecoderCodec::new(binary.clone()).unwrap();
    let codecs: Vec<&dyn StegoCodec> =
        vec![&pair, &block3, &identity, &constant, &flipdec, &witness, &rule];

    let n = 6;
    let bound = default_secret_bound(&binary, n);
    for codec in codecs {
        for x in enumerate_strings(&binary, n).unwrap() {
            walk_secret_prefixes(codec, &x, &[], bound, |_, _| Ok(()))
                .unwrap_or_else(|e| panic!("{}: {e}", codec.name()));
        }
    }
}

/// Decoding is total: every repository codec decodes every string of its
/// alphabet without error.
#[test]
fn decode_is_total_on_the_string_space() {
    let binary = Alphabet::binary();
    let ternary = Alphabet::ternary();
    let pair = PairCodec::new(binary.clone()).unwrap();
    let block = BlockCodec::new(ternary.clone(), 3).unwrap();
    let subset = lab::random_subset_source(5, 8).unwrap();
    let witness = lab::build_pairing_witness(&subset, &BigRational::one(), 8).unwrap();

    for x in enumerate_strings(&binary, 7).unwrap() {
        pair.decode(&x).unwrap();
    }
    for x in enumerate_strings(&ternary, 5).unwrap() {
        block.decode(&x).unwrap();
    }
    for x in enumerate_strings(&binary, 5).unwrap() {
        witness.decode(&x).unwrap();
    }
}

#[test]
fn codeword_sets_of_pair_codec_over_a4() {
    let binary = Alphabet::binary();
    let pair = PairCodec::new(binary.clone()).unwrap();
    let domain: Vec<SymbolString> = enumerate_strings(&binary, 4).unwrap().collect();
    let sets = lab::codeword_sets(&pair, domain).unwrap();
    assert_eq!(sets.all.len(), 12);
    assert_eq!(sets.zero.len() + sets.one.len(), 12);
    assert!(sets.zero.is_disjoint(&sets.one));
}

#[test]
fn witness_speed_normalization_counts_codewords() {
    // exact_speed * n * |X| = |Z| for every fraction on the grid.
    for (seed, fraction) in [(1u64, rat(1, 4)), (2, rat(1, 2)), (3, rat(3, 4))] {
        let source = lab::random_subset_source(8, seed).unwrap();
        let witness = lab::build_pairing_witness(&source, &fraction, seed).unwrap();
        let sets = lab::codeword_sets(&witness, source.members().iter().cloned()).unwrap();
        let normalized = witness.exact_speed(&source)
            * BigRational::from_integer((8 * source.len()).into());
        assert_eq!(
            normalized,
            BigRational::from_integer(sets.all.len().into())
        );
        assert!(!normalized.is_zero());
    }
}
