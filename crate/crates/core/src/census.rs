//! Enumeration of smooth words and the census of smooth powers.
//!
//! Smooth words are closed under taking factors, so the smooth words of
//! length `n + 1` are exactly the one-letter right extensions of smooth words
//! of length `n` that are still smooth. [`SmoothEnumerator`] builds the levels
//! in that order and keeps them (optionally backed by an external
//! [`LevelCache`]).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::smooth::{is_smooth, SmoothTester};
use crate::word::{delta_inv, Alphabet, Letter, Word};

/// The power-freeness threshold `h` and the exact power-free index `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub h: u32,
    pub delta: u32,
}

pub fn h_delta(ab: Alphabet) -> IndexPair {
    let (a, b) = (ab.a(), ab.b());
    let h = if a == 1 && b == 3 {
        b + 2
    } else if b % 2 == 0 {
        (b + 4) / 2
    } else if a == 1 {
        (b + 5) / 2
    } else {
        (b + 3) / 2
    };
    let delta = if a == 1 && b == 3 { b + 2 } else { b + 1 };
    IndexPair { h, delta }
}

/// External storage for enumeration levels, keyed by alphabet and length.
pub trait LevelCache: Send + Sync {
    fn load(&self, ab: Alphabet, length: usize) -> Option<Vec<Word>>;
    fn store(&self, ab: Alphabet, length: usize, words: &[Word]);
}

/// Lazily built, lexicographically sorted levels of smooth words.
pub struct SmoothEnumerator {
    alphabet: Alphabet,
    levels: Vec<Vec<Word>>,
    cache: Option<Box<dyn LevelCache>>,
}

impl SmoothEnumerator {
    pub fn new(alphabet: Alphabet) -> Self {
        SmoothEnumerator {
            alphabet,
            levels: vec![vec![Word::empty()]],
            cache: None,
        }
    }

    pub fn with_cache(alphabet: Alphabet, cache: Box<dyn LevelCache>) -> Self {
        SmoothEnumerator {
            cache: Some(cache),
            ..SmoothEnumerator::new(alphabet)
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn extend(&self, previous: &[Word]) -> Vec<Word> {
        let ab = self.alphabet;
        previous
            .par_iter()
            .map_init(SmoothTester::new, |tester, w| {
                let mut children = Vec::with_capacity(2);
                for letter in ab.letters() {
                    let mut letters = Vec::with_capacity(w.len() + 1);
                    letters.extend_from_slice(w);
                    letters.push(letter);
                    if tester.is_smooth(&letters, ab) {
                        children.push(Word::new(letters).expect("alphabet letters are positive"));
                    }
                }
                children
            })
            .flatten()
            .collect()
    }

    /// The smooth words of length `n`, in lexicographic order.
    pub fn level(&mut self, n: usize) -> &[Word] {
        while self.levels.len() <= n {
            let length = self.levels.len();
            let cached = self
                .cache
                .as_ref()
                .and_then(|c| c.load(self.alphabet, length));
            let next = match cached {
                Some(words) => words,
                None => {
                    let words = self.extend(&self.levels[length - 1]);
                    if let Some(cache) = &self.cache {
                        cache.store(self.alphabet, length, &words);
                    }
                    words
                }
            };
            self.levels.push(next);
        }
        &self.levels[n]
    }

    /// All smooth words of length `0..=n`, shortest first.
    pub fn words_up_to(&mut self, n: usize) -> Vec<Word> {
        self.level(n);
        self.levels[..=n].iter().flatten().cloned().collect()
    }

    pub fn count_up_to(&mut self, n: usize) -> usize {
        self.level(n);
        self.levels[..=n].iter().map(Vec::len).sum()
    }
}

/// Smooth words of length `n` over `ab`, in lexicographic order.
pub fn enumerate_smooth(ab: Alphabet, n: usize) -> Vec<Word> {
    SmoothEnumerator::new(ab).level(n).to_vec()
}

fn alphabet_as_text<S: Serializer>(ab: &Alphabet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(ab)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerWitness {
    pub base: Word,
    pub power: Word,
    pub primitive_base: Word,
}

/// Smooth `n`-th powers of bases of length `1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    #[serde(serialize_with = "alphabet_as_text")]
    pub alphabet: Alphabet,
    pub exponent: usize,
    pub bound: usize,
    pub witnesses: Vec<PowerWitness>,
    /// Number of distinct power words.
    pub distinct_powers: usize,
    /// Largest base length at which a new distinct power appeared.
    pub last_new_base_length: Option<usize>,
    /// No new power appeared at base lengths `bound - bound/4 ..= bound`.
    pub stable: bool,
}

impl CensusReport {
    /// First base length of the top quartile, `bound - floor(bound / 4)`.
    pub fn quartile_start(bound: usize) -> usize {
        bound - bound / 4
    }

    /// Witnesses as CSV with columns `base,base_length,power_length`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("base,base_length,power_length\n");
        for w in &self.witnesses {
            let _ = writeln!(
                out,
                "{},{},{}",
                csv_field(&w.base.to_string()),
                w.base.len(),
                w.power.len()
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn scan_powers(ab: Alphabet, n: usize, bound: usize) -> CensusReport {
    scan_powers_with(&mut SmoothEnumerator::new(ab), n, bound)
}

pub fn scan_powers_with(enumerator: &mut SmoothEnumerator, n: usize, bound: usize) -> CensusReport {
    let ab = enumerator.alphabet();
    let mut witnesses = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last_new = None;
    for length in 1..=bound {
        let found: Vec<PowerWitness> = enumerator
            .level(length)
            .par_iter()
            .map_init(SmoothTester::new, |tester, u| {
                let power = u.pow(n);
                tester.is_smooth(&power, ab).then(|| PowerWitness {
                    base: u.clone(),
                    primitive_base: u.primitive_root(),
                    power,
                })
            })
            .flatten()
            .collect();
        for witness in found {
            if seen.insert(witness.power.clone()) {
                last_new = Some(length);
            }
            witnesses.push(witness);
        }
    }
    let stable = last_new.is_none_or(|l| l < CensusReport::quartile_start(bound));
    CensusReport {
        alphabet: ab,
        exponent: n,
        bound,
        witnesses,
        distinct_powers: seen.len(),
        last_new_base_length: last_new,
        stable,
    }
}

/// A bounded count of smooth `n`-th powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count", rename_all = "kebab-case")]
pub enum GammaValue {
    /// The count did not change over the top quartile of base lengths.
    Stable(usize),
    /// New powers still appear near the bound; the count is a lower bound.
    BoundTooSmall(usize),
    /// `n = 1`: every smooth word counts; this is the number up to the bound.
    UnboundedAtBound(usize),
}

impl GammaValue {
    pub fn count(&self) -> usize {
        match *self {
            GammaValue::Stable(c)
            | GammaValue::BoundTooSmall(c)
            | GammaValue::UnboundedAtBound(c) => c,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GammaValue::Stable(c) => format!("{c}"),
            GammaValue::BoundTooSmall(c) => format!("{c} (bound too small)"),
            GammaValue::UnboundedAtBound(c) => format!("{c} (unbounded at this bound)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub gamma: GammaValue,
    pub report: CensusReport,
}

pub fn gamma(ab: Alphabet, n: usize, bound: usize) -> GammaReport {
    gamma_with(&mut SmoothEnumerator::new(ab), n, bound)
}

pub fn gamma_with(enumerator: &mut SmoothEnumerator, n: usize, bound: usize) -> GammaReport {
    if n <= 1 {
        let count = enumerator.count_up_to(bound) - 1;
        return GammaReport {
            gamma: GammaValue::UnboundedAtBound(count),
            report: CensusReport {
                alphabet: enumerator.alphabet(),
                exponent: n,
                bound,
                witnesses: Vec::new(),
                distinct_powers: count,
                last_new_base_length: Some(bound),
                stable: false,
            },
        };
    }
    let report = scan_powers_with(enumerator, n, bound);
    let gamma = if report.stable {
        GammaValue::Stable(report.distinct_powers)
    } else {
        GammaValue::BoundTooSmall(report.distinct_powers)
    };
    GammaReport { gamma, report }
}

/// `Δ_α^{-1}` applied `k` times.
pub fn lift(u: &Word, alpha: Letter, k: usize, ab: Alphabet) -> Result<Word> {
    ab.check(u)?;
    let mut current = u.clone();
    for _ in 0..k {
        current = delta_inv(&current, alpha, ab)?;
    }
    if k == 0 {
        delta_inv(&Word::empty(), alpha, ab)?;
    }
    Ok(current)
}

/// `[lift(u, alpha, k) for k in 0..family]`, each checked to have even length
/// and a smooth `n`-th power, and all pairwise distinct.
pub fn lift_family(
    u: &Word,
    n: usize,
    alpha: Letter,
    family: usize,
    ab: Alphabet,
) -> Result<Vec<Word>> {
    if !ab.same_parity() {
        return Err(Error::InvalidArgument(format!(
            "lifting needs a and b of the same parity, got {{{ab}}}"
        )));
    }
    if u.is_empty() || !u.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "lifting needs a nonempty base of even length, got {u:?} of length {}",
            u.len()
        )));
    }
    ab.check(u)?;
    if !is_smooth(&u.pow(n), ab) {
        return Err(Error::PreconditionViolated(format!(
            "({u})^{n} is not smooth"
        )));
    }
    let mut words: Vec<Word> = Vec::with_capacity(family);
    for k in 0..family {
        let lifted = lift(u, alpha, k, ab)?;
        if lifted.len() % 2 != 0 {
            return Err(Error::CertificationFailure(format!(
                "lift {k} of {u} has odd length {}",
                lifted.len()
            )));
        }
        if !is_smooth(&lifted.pow(n), ab) {
            return Err(Error::CertificationFailure(format!(
                "lift {k} of {u}: ({lifted})^{n} is not smooth"
            )));
        }
        if words.contains(&lifted) {
            return Err(Error::CertificationFailure(format!(
                "lift {k} of {u} repeats an earlier lift"
            )));
        }
        words.push(lifted);
    }
    Ok(words)
}

/// Prefix of the self-generating word `s` with `Δ(s) = s` starting with
/// `first`. Run `i` has letter alternating from `first` and length `s[i]`.
pub fn kolakoski_prefix(ab: Alphabet, first: Letter, len: usize) -> Result<Word> {
    ab.require_letter(first)?;
    if len == 0 {
        return Err(Error::InvalidArgument(
            "prefix length must be positive".into(),
        ));
    }
    let mut s: Vec<Letter> = Vec::with_capacity(len + ab.b() as usize);
    let mut letter = first;
    let mut run = 0;
    while s.len() < len {
        // When the run index catches up with the output, the pending length
        // is the letter about to be written.
        let length = s.get(run).copied().unwrap_or(letter);
        s.extend(std::iter::repeat_n(letter, length as usize));
        letter = ab.swap(letter);
        run += 1;
    }
    s.truncate(len);
    Word::new(s)
}
