//! How big is the decoder of a full-rate perfectly secure stegosystem?
//!
//! Over a *random* half of {a,b}^n the decoder is an explicit table whose
//! compressed size doubles with every increment of n. Over the *structured*
//! half (first symbol fixed) a constant-size rule decodes everything. The
//! compressed size is a proxy measurement under a pinned compressor —
//! Kolmogorov complexity itself is incomputable.
//!
//! ```bash
//! cargo run -p stegokit --example decoder_complexity
//! ```

use stegokit::lab::{
    decoder_description_experiment, mean_random_proxy_by_n, SubsetKind, COMPRESSOR_DESCRIPTION,
};

fn main() {
    let seeds = [1u64, 2, 3, 4, 5];
    println!("compressor: {COMPRESSOR_DESCRIPTION}");
    println!("seeds: {seeds:?}\n");

    let rows = decoder_description_experiment(10..=14, &seeds).unwrap();
    println!(
        "{:>3}  {:>10}  {:>6}  {:>12}  {:>12}",
        "n", "kind", "seed", "table bytes", "proxy bytes"
    );
    for row in &rows {
        println!(
            "{:>3}  {:>10}  {:>6}  {:>12}  {:>12}",
            row.n,
            row.kind.label(),
            row.seed.map_or_else(|| "-".into(), |s| s.to_string()),
            row.serialized_bytes,
            row.proxy_bytes
        );
    }

    println!("\nmean random-table proxy size and growth per increment of n:");
    let means = mean_random_proxy_by_n(&rows);
    for pair in means.windows(2) {
        println!(
            "  n={} -> n={}: {:.0} -> {:.0} bytes  (x{:.2})",
            pair[0].0,
            pair[1].0,
            pair[0].1,
            pair[1].1,
            pair[1].1 / pair[0].1
        );
    }

    let structured: Vec<usize> = rows
        .iter()
        .filter(|r| r.kind == SubsetKind::Structured)
        .map(|r| r.proxy_bytes)
        .collect();
    println!(
        "\nstructured rule decoder stays at {:?} bytes no matter how large X grows",
        structured
    );
}
