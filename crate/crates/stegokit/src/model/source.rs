use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use super::alphabet::{Alphabet, SymbolString};
use super::ModelError;

/// Default cap on exhaustive enumerations: `|A|^n` may not exceed this.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 26;

/// Formats an exact rational as a decimal-free `p/q` string.
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `|A|^n`, or `None` on overflow (which certainly exceeds any budget).
pub fn string_space_size(alphabet_len: usize, n: usize) -> Option<u128> {
    let base = alphabet_len as u128;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(base)?;
    }
    Some(total)
}

/// Covertext source generating i.i.d. symbols with exact rational
/// probabilities. The mass of a string is the product of its symbols'
/// probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IidSource {
    alphabet: Arc<Alphabet>,
    probs: Vec<BigRational>,
}

impl IidSource {
    pub fn new(alphabet: Arc<Alphabet>, probs: Vec<BigRational>) -> Result<Self, ModelError> {
        if probs.len() != alphabet.len() {
            return Err(ModelError::ProbabilityCount {
                expected: alphabet.len(),
                actual: probs.len(),
            });
        }
        let sum: BigRational = probs.iter().sum();
        if !sum.is_one() || probs.iter().any(|p| p < &BigRational::zero()) {
            return Err(ModelError::BadProbabilities {
                sum: rational_str(&sum),
            });
        }
        Ok(IidSource { alphabet, probs })
    }

    pub fn uniform(alphabet: Arc<Alphabet>) -> Self {
        let k = alphabet.len();
        let p = BigRational::new(BigInt::one(), BigInt::from(k));
        IidSource {
            alphabet,
            probs: vec![p; k],
        }
    }

    /// Binary source over `{a, b}` with `P(a) = p_a`.
    pub fn binary(p_a: BigRational) -> Result<Self, ModelError> {
        let p_b = BigRational::one() - &p_a;
        Self::new(Alphabet::binary(), vec![p_a, p_b])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, symbol_index: usize) -> &BigRational {
        &self.probs[symbol_index]
    }

    /// Exact probability mass of `x`: the product of its symbol probabilities.
    pub fn mass(&self, x: &SymbolString) -> Result<BigRational, ModelError> {
        if !x.same_alphabet(&self.alphabet) {
            return Err(ModelError::AlphabetMismatch {
                context: "string vs. i.i.d. source",
            });
        }
        let mut m = BigRational::one();
        for &i in x.indices() {
            m *= &self.probs[i as usize];
        }
        Ok(m)
    }

    /// Shannon entropy in bits per letter: `-Σ p log2 p` with `0·log 0 = 0`.
    pub fn entropy_bits(&self) -> f64 {
        self.probs
            .iter()
            .map(|p| {
                let p = p.to_f64().expect("probability in [0,1] fits f64");
                if p > 0.0 {
                    -p * p.log2()
                } else {
                    0.0
                }
            })
            .sum()
    }
}

/// Covertext source uniform over an explicit set of equal-length strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSource {
    alphabet: Arc<Alphabet>,
    n: usize,
    members: BTreeSet<SymbolString>,
}

impl SubsetSource {
    pub fn new(members: BTreeSet<SymbolString>) -> Result<Self, ModelError> {
        let first = members.iter().next().ok_or(ModelError::EmptySubset)?;
        let alphabet = first.alphabet().clone();
        let n = first.len();
        for m in &members {
            if !m.same_alphabet(&alphabet) {
                return Err(ModelError::AlphabetMismatch {
                    context: "subset members",
                });
            }
            if m.len() != n {
                return Err(ModelError::LengthMismatch {
                    expected: n,
                    actual: m.len(),
                });
            }
        }
        Ok(SubsetSource {
            alphabet,
            n,
            members,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &BTreeSet<SymbolString> {
        &self.members
    }

    pub fn contains(&self, x: &SymbolString) -> bool {
        self.members.contains(x)
    }

    /// `1/|X|` on members, `0` elsewhere in `A^n`.
    pub fn mass(&self, x: &SymbolString) -> Result<BigRational, ModelError> {
        if !x.same_alphabet(&self.alphabet) {
            return Err(ModelError::AlphabetMismatch {
                context: "string vs. subset source",
            });
        }
        if x.len() != self.n {
            return Err(ModelError::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        if self.members.contains(x) {
            Ok(BigRational::new(
                BigInt::one(),
                BigInt::from(self.members.len()),
            ))
        } else {
            Ok(BigRational::zero())
        }
    }

    /// `log2 |X|`; exactly `n - 1` when `|X| = 2^(n-1)`.
    pub fn entropy_bits(&self) -> f64 {
        (self.members.len() as f64).log2()
    }
}

/// Either kind of covertext source, as verification code sees them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Iid(IidSource),
    Subset(SubsetSource),
}

impl Source {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        match self {
            Source::Iid(s) => s.alphabet(),
            Source::Subset(s) => s.alphabet(),
        }
    }

    pub fn mass(&self, x: &SymbolString) -> Result<BigRational, ModelError> {
        match self {
            Source::Iid(s) => s.mass(x),
            Source::Subset(s) => s.mass(x),
        }
    }

    pub fn entropy_bits(&self) -> f64 {
        match self {
            Source::Iid(s) => s.entropy_bits(),
            Source::Subset(s) => s.entropy_bits(),
        }
    }

    /// Compact human-readable description used in reports.
    pub fn describe(&self) -> String {
        match self {
            Source::Iid(s) => {
                let parts: Vec<String> = s
                    .alphabet()
                    .symbols()
                    .iter()
                    .zip(s.probs())
                    .map(|(c, p)| format!("{c}={}", rational_str(p)))
                    .collect();
                format!("iid{{{}}}", parts.join(","))
            }
            Source::Subset(s) => format!("subset{{n={},size={}}}", s.n(), s.len()),
        }
    }

    /// Number of support strings enumerated for length `n`.
    pub fn support_size(&self, n: usize) -> Option<u128> {
        match self {
            Source::Iid(s) => string_space_size(s.alphabet().len(), n),
            Source::Subset(s) => Some(s.len() as u128),
        }
    }

    /// Streams the support of the length-`n` experiment in lexicographic
    /// order: all of `A^n` for i.i.d. sources, the member set for subsets.
    pub fn support(&self, n: usize, budget: u64) -> Result<SupportIter<'_>, ModelError> {
        match self {
            Source::Iid(s) => Ok(SupportIter::Space(enumerate_strings_with_budget(
                s.alphabet(),
                n,
                budget,
            )?)),
            Source::Subset(s) => {
                if n != s.n() {
                    return Err(ModelError::LengthMismatch {
                        expected: s.n(),
                        actual: n,
                    });
                }
                Ok(SupportIter::Members(s.members().iter()))
            }
        }
    }
}

pub enum SupportIter<'a> {
    Space(StringIter),
    Members(std::collections::btree_set::Iter<'a, SymbolString>),
}

impl Iterator for SupportIter<'_> {
    type Item = SymbolString;

    fn next(&mut self) -> Option<SymbolString> {
        match self {
            SupportIter::Space(it) => it.next(),
            SupportIter::Members(it) => it.next().cloned(),
        }
    }
}

/// Lexicographic stream over a slice of `A^n`.
#[derive(Debug, Clone)]
pub struct StringIter {
    alphabet: Arc<Alphabet>,
    n: usize,
    next: Option<Vec<u8>>,
    remaining: u128,
}

impl StringIter {
    /// Sub-range `[start, start + count)` of the lexicographic order, for
    /// partitioned sweeps.
    pub fn range(alphabet: &Arc<Alphabet>, n: usize, start: u128, count: u128) -> Self {
        let base = alphabet.len() as u128;
        let mut digits = vec![0u8; n];
        let mut rest = start;
        for pos in (0..n).rev() {
            digits[pos] = (rest % base) as u8;
            rest /= base;
        }
        StringIter {
            alphabet: alphabet.clone(),
            n,
            next: (count > 0).then_some(digits),
            remaining: count,
        }
    }
}

impl Iterator for StringIter {
    type Item = SymbolString;

    fn next(&mut self) -> Option<SymbolString> {
        if self.remaining == 0 {
            return None;
        }
        let current = self.next.take()?;
        let item = SymbolString::from_indices_unchecked(self.alphabet.clone(), current.clone());
        self.remaining -= 1;
        if self.remaining > 0 {
            let base = self.alphabet.len() as u8;
            let mut digits = current;
            for pos in (0..self.n).rev() {
                if digits[pos] + 1 < base {
                    digits[pos] += 1;
                    for d in &mut digits[pos + 1..] {
                        *d = 0;
                    }
                    self.next = Some(digits);
                    return Some(item);
                }
            }
            self.remaining = 0;
        }
        Some(item)
    }
}

/// All `|A|^n` strings exactly once, lexicographically, under the default
/// enumeration budget.
pub fn enumerate_strings(alphabet: &Arc<Alphabet>, n: usize) -> Result<StringIter, ModelError> {
    enumerate_strings_with_budget(alphabet, n, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_strings_with_budget(
    alphabet: &Arc<Alphabet>,
    n: usize,
    budget: u64,
) -> Result<StringIter, ModelError> {
    match string_space_size(alphabet.len(), n) {
        Some(total) if total <= budget as u128 => {
            Ok(StringIter::range(alphabet, n, 0, total))
        }
        Some(total) => Err(ModelError::BudgetExceeded {
            required: total.to_string(),
            budget,
        }),
        None => Err(ModelError::BudgetExceeded {
            required: format!("{}^{}", alphabet.len(), n),
            budget,
        }),
    }
}

/// Parses `p/q` or a bare integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ModelError> {
    let bad = |_| ModelError::InvalidConfig {
        reason: format!("cannot parse rational {text:?}"),
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(bad)?;
            let d = BigInt::from_str(den.trim()).map_err(bad)?;
            if d.is_zero() {
                return Err(ModelError::InvalidConfig {
                    reason: format!("zero denominator in {text:?}"),
                });
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(text.trim()).map_err(bad)?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Parses a line-oriented source config.
///
/// I.i.d. sources: one `symbol=p/q` line per symbol, line order defining the
/// alphabet order, e.g.
///
/// ```text
/// a=2/3
/// b=1/3
/// ```
///
/// Subset sources: a `subset n=<n>` header, an optional `alphabet=<chars>`
/// line (default `ab`), then one member string per line. Blank lines and
/// `#` comments are ignored in both forms.
pub fn parse_source_config(text: &str) -> Result<Source, ModelError> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(&first) = lines.first() else {
        return Err(ModelError::InvalidConfig {
            reason: "empty config".into(),
        });
    };

    if let Some(rest) = first.strip_prefix("subset") {
        let n: usize = rest
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| ModelError::InvalidConfig {
                reason: format!("subset header must be `subset n=<n>`, got {first:?}"),
            })?;
        let mut body = &lines[1..];
        let alphabet = match body.first().and_then(|l| l.strip_prefix("alphabet=")) {
            Some(chars) => {
                body = &body[1..];
                Alphabet::new(chars.trim().chars())?
            }
            None => Alphabet::binary(),
        };
        let mut members = BTreeSet::new();
        for line in body {
            let s = SymbolString::parse(&alphabet, line)?;
            if s.len() != n {
                return Err(ModelError::LengthMismatch {
                    expected: n,
                    actual: s.len(),
                });
            }
            members.insert(s);
        }
        Ok(Source::Subset(SubsetSource::new(members)?))
    } else {
        let mut symbols = Vec::new();
        let mut probs = Vec::new();
        for line in &lines {
            let (sym, prob) = line.split_once('=').ok_or_else(|| ModelError::InvalidConfig {
                reason: format!("expected `symbol=p/q`, got {line:?}"),
            })?;
            let mut chars = sym.trim().chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(ModelError::InvalidConfig {
                    reason: format!("symbol must be a single character, got {sym:?}"),
                });
            };
            symbols.push(c);
            probs.push(parse_rational(prob)?);
        }
        let alphabet = Alphabet::new(symbols)?;
        Ok(Source::Iid(IidSource::new(alphabet, probs)?))
    }
}

/// Renders a subset source in the config format accepted by
/// [`parse_source_config`].
pub fn write_subset_config(subset: &SubsetSource) -> String {
    let mut out = format!(
        "subset n={}\nalphabet={}\n",
        subset.n(),
        subset.alphabet()
    );
    for m in subset.members() {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}
