//! Codeword sets and the encoder-image closure over a random subset source.
//!
//! A uniform source on a random half of {a,b}^n gets an explicit perfectly
//! secure pairing codec. The strings coding a 1-starting secret form Z1;
//! iterating `T ↦ T ∪ φ(T)` (encoder images under secrets starting with 1)
//! from `X \ Z1` recovers the whole support — so whoever holds the codec can
//! reconstruct all of X from the smaller set, which is exactly why a compact
//! codec cannot exist for an incompressible X.
//!
//! ```bash
//! cargo run -p stegokit --example closure_fixpoint
//! ```

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::One;

use stegokit::lab::{
    build_pairing_witness, closure, codeword_sets, max_bits_embedded, random_subset_source,
};
use stegokit::model::{rational_str, SymbolString};

fn main() {
    let n = 10;
    let seed = 2024;
    let source = random_subset_source(n, seed).unwrap();
    println!(
        "random subset source: n={n} seed={seed} |X|={} entropy={} bits",
        source.len(),
        source.entropy_bits()
    );

    let witness = build_pairing_witness(&source, &BigRational::one(), seed).unwrap();
    println!(
        "full-rate pairing witness: {} pairs, exact speed {}",
        witness.pair_count(),
        rational_str(&witness.exact_speed(&source))
    );

    let sets = codeword_sets(&witness, source.members().iter().cloned()).unwrap();
    println!(
        "codeword sets: |Z|={} |Z0|={} |Z1|={} (disjoint, Z inside X: {})",
        sets.all.len(),
        sets.zero.len(),
        sets.one.len(),
        sets.all.iter().all(|x| source.contains(x)),
    );

    let universe = source.members().clone();
    let start: BTreeSet<SymbolString> = universe.difference(&sets.one).cloned().collect();
    let bound = 1 + max_bits_embedded(&witness, &universe, n).unwrap();
    let result = closure(&witness, &universe, &start, bound).unwrap();

    println!("\nclosure iteration from X \\ Z1 (|T0| = {}):", start.len());
    for (k, size) in result.sizes.iter().enumerate() {
        println!("  |T{k}| = {size}");
    }
    println!(
        "fixpoint after {} growing step(s); equals X: {}; escaped outputs: {}",
        result.iterations,
        result.fixpoint_is(&universe),
        result.escaped.len(),
    );
}
