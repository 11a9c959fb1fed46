//! Transmission rate of the blockwise codec as the block length grows: the
//! exact expected bits per letter climb toward the source entropy.
//!
//! ```bash
//! cargo run -p stegokit --example block_rates
//! ```

use num::rational::BigRational;
use num::{BigInt, ToPrimitive};

use stegokit::block::BlockCodec;
use stegokit::model::{rational_str, Alphabet, IidSource};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ladder(label: &str, source: &IidSource) {
    println!("{label}: entropy h = {:.6} bits/letter", source.entropy_bits());
    println!("{:>3}  {:>16}  {:>10}  {:>8}", "l", "exact rate", "decimal", "of h");
    for l in [1usize, 2, 3, 4, 6, 8, 12, 16] {
        let codec = BlockCodec::new(source.alphabet().clone(), l).unwrap();
        let rate = codec.expected_rate(source).unwrap();
        let decimal = rate.to_f64().unwrap();
        println!(
            "{l:>3}  {:>16}  {decimal:>10.6}  {:>7.1}%",
            rational_str(&rate),
            100.0 * decimal / source.entropy_bits()
        );
    }
    println!();
}

fn main() {
    println!("exact expected secret bits per covertext letter, by block length\n");
    ladder("uniform binary", &IidSource::uniform(Alphabet::binary()));
    ladder("biased binary mu(a)=2/3", &IidSource::binary(rat(2, 3)).unwrap());
    ladder("uniform ternary", &IidSource::uniform(Alphabet::ternary()));
    println!("each value is computed symbolically over the type classes and");
    println!("matches the exhaustive expectation over A^l exactly.");
}
