use std::io::Write;
use std::ops::RangeInclusive;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use num::rational::BigRational;
use num::One;

use super::witness::{build_pairing_witness, build_rule_witness, random_subset_source};
use super::LabError;
use crate::lab::codeword_sets;
use crate::model::{enumerate_strings, StegoCodec, SymbolString};

/// The pinned compressor behind [`complexity_proxy`]. Kolmogorov complexity
/// is incomputable; this fixed LZ77-family configuration is the documented
/// stand-in, and its output is only ever a *proxy* size.
pub const COMPRESSOR_DESCRIPTION: &str = "deflate(miniz_oxide), level=9, raw stream";

/// Compressed size of `payload` in bytes under the pinned compressor.
/// Deterministic; rejects empty payloads.
pub fn complexity_proxy(payload: &[u8]) -> Result<usize, LabError> {
    if payload.is_empty() {
        return Err(LabError::EmptyPayload);
    }
    let mut encoder = DeflateEncoder::new(Vec::new(), Compression::new(9));
    encoder.write_all(payload).expect("in-memory write");
    let compressed = encoder.finish().expect("in-memory finish");
    Ok(compressed.len())
}

/// Canonical serialization of a codec's decode table over `domain`: the
/// codewords (strings decoding to something) sorted lexicographically, one
/// `string<TAB>bits` line each, newline-terminated, as bytes of the symbol
/// characters.
pub fn serialize_decode_table<I>(codec: &dyn StegoCodec, domain: I) -> Result<Vec<u8>, LabError>
where
    I: IntoIterator<Item = SymbolString>,
{
    let mut out = Vec::new();
    for x in codeword_sets(codec, domain)?.all {
        let bits = codec.decode(&x)?;
        out.extend_from_slice(x.to_string().as_bytes());
        out.push(b'\t');
        out.extend_from_slice(bits.to_string().as_bytes());
        out.push(b'\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    /// Seeded random half of `A^n`; the decoder is a full table.
    Random,
    /// First-symbol-fixed half of `A^n`; the decoder is a constant-size rule.
    Structured,
}

impl SubsetKind {
    pub fn label(&self) -> &'static str {
        match self {
            SubsetKind::Random => "random",
            SubsetKind::Structured => "structured",
        }
    }
}

/// One measurement: how big the serialized decoder of a full-rate perfectly
/// secure witness is, raw and compressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub n: usize,
    pub kind: SubsetKind,
    pub seed: Option<u64>,
    pub serialized_bytes: usize,
    pub proxy_bytes: usize,
}

/// Supported `n` range for [`decoder_description_experiment`].
pub const EXPERIMENT_N_RANGE: RangeInclusive<usize> = 8..=16;

/// For each `n` and seed, builds the full-rate pairing witness over a random
/// subset source, serializes its decode table, and measures the proxy size;
/// one structured-subset rule decoder per `n` serves as the contrast.
///
/// Over random subsets the decoder needs the whole table, so the proxy size
/// roughly doubles with each increment of `n`; the rule decoder stays
/// constant-size no matter how large the subset grows.
pub fn decoder_description_experiment(
    n_range: RangeInclusive<usize>,
    seeds: &[u64],
) -> Result<Vec<ExperimentRow>, LabError> {
    for bound in [*n_range.start(), *n_range.end()] {
        if !EXPERIMENT_N_RANGE.contains(&bound) {
            return Err(LabError::NOutOfRange {
                n: bound,
                min: *EXPERIMENT_N_RANGE.start(),
                max: *EXPERIMENT_N_RANGE.end(),
            });
        }
    }
    let mut rows = Vec::new();
    for n in n_range {
        let rule = build_rule_witness(n)?;
        let description = rule.description_bytes();
        rows.push(ExperimentRow {
            n,
            kind: SubsetKind::Structured,
            seed: None,
            serialized_bytes: description.len(),
            proxy_bytes: complexity_proxy(&description)?,
        });
        for &seed in seeds {
            let source = random_subset_source(n, seed)?;
            let witness = build_pairing_witness(&source, &BigRational::one(), seed)?;
            let table = serialize_decode_table(
                &witness,
                enumerate_strings(source.alphabet(), n)?,
            )?;
            rows.push(ExperimentRow {
                n,
                kind: SubsetKind::Random,
                seed: Some(seed),
                serialized_bytes: table.len(),
                proxy_bytes: complexity_proxy(&table)?,
            });
        }
    }
    Ok(rows)
}

/// Mean random-subset proxy size per `n`, for growth-ratio checks.
pub fn mean_random_proxy_by_n(rows: &[ExperimentRow]) -> Vec<(usize, f64)> {
    let mut by_n: std::collections::BTreeMap<usize, (usize, usize)> =
        std::collections::BTreeMap::new();
    for row in rows {
        if row.kind == SubsetKind::Random {
            let entry = by_n.entry(row.n).or_insert((0, 0));
            entry.0 += row.proxy_bytes;
            entry.1 += 1;
        }
    }
    by_n
        .into_iter()
        .map(|(n, (total, count))| (n, total as f64 / count as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;
    use rand::SeedableRng;

    #[test]
    fn zeros_compress_small_and_random_stays_large() {
        let zeros = vec![0u8; 1 << 16];
        let compressed = complexity_proxy(&zeros).unwrap();
        assert!(
            (compressed as f64) < 0.01 * zeros.len() as f64,
            "zeros compressed to {compressed}"
        );

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        let mut noise = vec![0u8; 1 << 16];
        rng.fill_bytes(&mut noise);
        let compressed = complexity_proxy(&noise).unwrap();
        assert!(
            (compressed as f64) > 0.99 * noise.len() as f64,
            "noise compressed to {compressed}"
        );
    }

    #[test]
    fn single_byte_payload_has_positive_size() {
        assert!(complexity_proxy(&[42]).unwrap() >= 1);
        assert!(matches!(
            complexity_proxy(&[]),
            Err(LabError::EmptyPayload)
        ));
    }

    #[test]
    fn proxy_is_deterministic() {
        let payload = b"abababababbbaaab".repeat(100);
        assert_eq!(
            complexity_proxy(&payload).unwrap(),
            complexity_proxy(&payload).unwrap()
        );
    }

    #[test]
    fn decode_table_lines_are_sorted_and_tab_separated() {
        let source = random_subset_source(8, 2).unwrap();
        let witness = build_pairing_witness(&source, &BigRational::one(), 2).unwrap();
        let table = serialize_decode_table(
            &witness,
            enumerate_strings(source.alphabet(), 8).unwrap(),
        )
        .unwrap();
        let text = String::from_utf8(table).unwrap();
        assert!(text.ends_with('\n'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), source.len());
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
        for line in lines {
            let (string, bits) = line.split_once('\t').unwrap();
            assert_eq!(string.len(), 8);
            assert!(bits == "0" || bits == "1");
        }
    }

    #[test]
    fn structured_decoder_stays_under_a_kibibyte() {
        let rows = decoder_description_experiment(8..=10, &[1]).unwrap();
        for row in rows.iter().filter(|r| r.kind == SubsetKind::Structured) {
            assert!(row.proxy_bytes < 1024, "n={} proxy={}", row.n, row.proxy_bytes);
        }
    }

    #[test]
    fn random_tables_dwarf_structured_rules() {
        let rows = decoder_description_experiment(10..=10, &[1, 2, 3]).unwrap();
        let structured = rows
            .iter()
            .find(|r| r.kind == SubsetKind::Structured)
            .unwrap()
            .proxy_bytes;
        for row in rows.iter().filter(|r| r.kind == SubsetKind::Random) {
            assert!(row.proxy_bytes >= 5 * structured);
        }
    }

    #[test]
    fn experiment_range_guard() {
        assert!(matches!(
            decoder_description_experiment(4..=10, &[1]),
            Err(LabError::NOutOfRange { .. })
        ));
        assert!(matches!(
            decoder_description_experiment(10..=17, &[1]),
            Err(LabError::NOutOfRange { .. })
        ));
    }
}
