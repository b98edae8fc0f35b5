//! Middle words of derivatives of concatenations and powers.
//!
//! For smooth `u x v` with `x` drawn from the alphabet's middle-word table,
//! `D(u x v)` splits as `D(u) w D(v)` with `w` again in the table. This module
//! holds the tables, extracts middle words by length arithmetic, and certifies
//! the tables by exhaustive search over bounded `u`, `v`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::SmoothEnumerator;
use crate::error::{Error, Result};
use crate::smooth::{derivative, is_smooth, SmoothTester};
use crate::word::{runs, Alphabet, Letter, Word};

/// The finite set of admissible middle words for an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsigmaTable {
    pub alphabet: Alphabet,
    pub words: BTreeSet<Word>,
}

impl DsigmaTable {
    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }
}

/// Templates over the placeholders `A`/`B`, instantiated with the concrete
/// letters of the alphabet. `""` is the empty word.
const TABLE_1_2: &[&str] = &[
    "", "1", "2", "12", "21", "11", "22", "112", "211", "121", "122", "221", "212", "1121", "1211",
    "1212", "2121", "2112", "1221", "1122", "2211", "11211",
];
const TABLE_1_3: &[&str] = &[
    "", "1", "3", "13", "31", "11", "33", "113", "311", "131", "313", "111", "3111", "1113",
    "1311", "1131",
];
const TABLE_1_4: &[&str] = &[
    "", "1", "4", "14", "41", "11", "44", "111", "411", "114", "141", "414", "1111", "4111", "1114",
];
const TABLE_1_B: &[&str] = &[
    "", "A", "B", "AB", "BA", "AA", "BB", "AAB", "BAA", "AAA", "AAAA",
];
const TABLE_2_B: &[&str] = &["", "A", "B", "AB", "BA", "AA", "BB", "AAA"];
const TABLE_A_B: &[&str] = &["", "A", "B", "AA", "BB", "AB", "BA"];

fn instantiate(template: &str, ab: Alphabet) -> Word {
    let letters: Vec<Letter> = template
        .chars()
        .map(|c| match c {
            'A' => ab.a(),
            'B' => ab.b(),
            d => d.to_digit(10).expect("table templates hold digits or A/B"),
        })
        .collect();
    Word::new(letters).expect("table letters are positive")
}

pub fn dsigma_table(ab: Alphabet) -> DsigmaTable {
    let template = match (ab.a(), ab.b()) {
        (1, 2) => TABLE_1_2,
        (1, 3) => TABLE_1_3,
        (1, 4) => TABLE_1_4,
        (1, _) => TABLE_1_B,
        (2, _) => TABLE_2_B,
        _ => TABLE_A_B,
    };
    DsigmaTable {
        alphabet: ab,
        words: template.iter().map(|t| instantiate(t, ab)).collect(),
    }
}

/// Middle slice of `whole` once `left` is stripped as a prefix and `right` as
/// a suffix. `None` if the lengths do not fit or either end does not match.
fn middle_slice(whole: &[Letter], left: &[Letter], right: &[Letter]) -> Option<Word> {
    if left.len() + right.len() > whole.len() || !whole.starts_with(left) || !whole.ends_with(right)
    {
        return None;
    }
    Some(Word::from_vec(
        whole[left.len()..whole.len() - right.len()].to_vec(),
    ))
}

/// The word `w` with `D(uxv) = D(u) w D(v)`, if the derivatives line up.
///
/// Requires `u x v` to be smooth. A missing witness is returned as `None`
/// rather than an error so that certification can record it.
pub fn middle_witness(u: &Word, x: &Word, v: &Word, ab: Alphabet) -> Result<Option<Word>> {
    let whole = u.concat(x).concat(v);
    if !is_smooth(&whole, ab) {
        return Err(Error::PreconditionViolated(format!(
            "{u}·{x}·{v} is not smooth"
        )));
    }
    let d_whole = derivative(&whole, ab)?;
    let d_u = derivative(u, ab)?;
    let d_v = derivative(v, ab)?;
    Ok(middle_slice(&d_whole, &d_u, &d_v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationReason {
    /// `D(u)` is not a prefix or `D(v)` is not a suffix of `D(uxv)`.
    NoMiddleWord,
    /// A middle word exists but is missing from the table.
    MiddleNotInTable,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcatViolation {
    pub u: Word,
    pub x: Word,
    pub v: Word,
    pub reason: ViolationReason,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub middle: Option<Word>,
}

/// Result of an exhaustive middle-word check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatCertificate {
    pub alphabet: Alphabet,
    pub bound: usize,
    pub tested_triples: u64,
    pub violations: Vec<ConcatViolation>,
    pub empirical_middle_set: BTreeSet<Word>,
}

impl ConcatCertificate {
    pub fn is_certified(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
struct WalkResult {
    triples: u64,
    violations: Vec<ConcatViolation>,
    middles: BTreeSet<Word>,
}

impl WalkResult {
    fn merge(mut self, other: WalkResult) -> WalkResult {
        self.triples += other.triples;
        self.violations.extend(other.violations);
        self.middles.extend(other.middles);
        self
    }
}

/// Visits every `v` with `|v| <= bound` and `u x v` smooth, for one fixed
/// smooth `u` and every `x` in `xs`. Smooth words are prefix-closed, so the
/// search over `v` grows letter by letter and stops at the first failure.
fn walk_from(
    u: &Word,
    xs: &[Word],
    bound: usize,
    ab: Alphabet,
    table: Option<&DsigmaTable>,
) -> WalkResult {
    let mut out = WalkResult::default();
    let mut tester = SmoothTester::new();
    let d_u = derivative(u, ab).expect("smooth words are differentiable");
    let mut buf: Vec<Letter> = Vec::new();
    for x in xs {
        buf.clear();
        buf.extend_from_slice(u);
        buf.extend_from_slice(x);
        let base = buf.len();
        if !tester.is_smooth(&buf, ab) {
            continue;
        }
        // Depth-first over v; `choice[i]` is the index of the letter at v[i].
        let mut choice: Vec<usize> = Vec::with_capacity(bound);
        let letters = ab.letters();
        loop {
            visit(&buf, base, x, u, &d_u, ab, table, &mut out);
            // Descend if possible.
            let mut descended = false;
            if choice.len() < bound {
                for (i, &letter) in letters.iter().enumerate() {
                    buf.push(letter);
                    if tester.is_smooth(&buf, ab) {
                        choice.push(i);
                        descended = true;
                        break;
                    }
                    buf.pop();
                }
            }
            if descended {
                continue;
            }
            // Otherwise move to the next sibling, backtracking as needed.
            let mut advanced = false;
            while let Some(i) = choice.pop() {
                buf.pop();
                for (j, &letter) in letters.iter().enumerate().skip(i + 1) {
                    buf.push(letter);
                    if tester.is_smooth(&buf, ab) {
                        choice.push(j);
                        advanced = true;
                        break;
                    }
                    buf.pop();
                }
                if advanced {
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn visit(
    whole: &[Letter],
    base: usize,
    x: &Word,
    u: &Word,
    d_u: &Word,
    ab: Alphabet,
    table: Option<&DsigmaTable>,
    out: &mut WalkResult,
) {
    out.triples += 1;
    let whole_word = Word::from_vec(whole.to_vec());
    let v = Word::from_vec(whole[base..].to_vec());
    let d_whole = derivative(&whole_word, ab).expect("smooth words are differentiable");
    let d_v = derivative(&v, ab).expect("smooth words are differentiable");
    match middle_slice(&d_whole, d_u, &d_v) {
        Some(middle) => {
            if table.is_some_and(|t| !t.contains(&middle)) {
                out.violations.push(ConcatViolation {
                    u: u.clone(),
                    x: x.clone(),
                    v,
                    reason: ViolationReason::MiddleNotInTable,
                    middle: Some(middle.clone()),
                });
            }
            out.middles.insert(middle);
        }
        None => out.violations.push(ConcatViolation {
            u: u.clone(),
            x: x.clone(),
            v,
            reason: ViolationReason::NoMiddleWord,
            middle: None,
        }),
    }
}

fn walk_all(
    bases: &[Word],
    xs: &[Word],
    bound: usize,
    ab: Alphabet,
    table: Option<&DsigmaTable>,
) -> WalkResult {
    let mut result = bases
        .par_iter()
        .map(|u| walk_from(u, xs, bound, ab, table))
        .reduce(WalkResult::default, WalkResult::merge);
    result.violations.sort();
    result
}

/// Checks every smooth `u x v` with `x` in the table and `|u|, |v| <= bound`.
pub fn certify_concat(ab: Alphabet, bound: usize) -> ConcatCertificate {
    let mut enumerator = SmoothEnumerator::new(ab);
    certify_concat_with(&mut enumerator, bound)
}

/// As [`certify_concat`], reusing an existing enumerator (and its cache).
pub fn certify_concat_with(enumerator: &mut SmoothEnumerator, bound: usize) -> ConcatCertificate {
    let ab = enumerator.alphabet();
    let table = dsigma_table(ab);
    let xs: Vec<Word> = table.iter().cloned().collect();
    certify_concat_over(enumerator, bound, &xs, &table)
}

/// Certifies middle words against `table` for an arbitrary list of `x`.
pub fn certify_concat_over(
    enumerator: &mut SmoothEnumerator,
    bound: usize,
    xs: &[Word],
    table: &DsigmaTable,
) -> ConcatCertificate {
    let ab = enumerator.alphabet();
    let bases = enumerator.words_up_to(bound);
    let result = walk_all(&bases, xs, bound, ab, Some(table));
    ConcatCertificate {
        alphabet: ab,
        bound,
        tested_triples: result.triples,
        violations: result.violations,
        empirical_middle_set: result.middles,
    }
}

/// Least set containing the empty word and closed under taking middle words
/// of smooth `u x v` with `|u|, |v| <= bound`.
pub fn empirical_middle_set(ab: Alphabet, bound: usize) -> BTreeSet<Word> {
    let mut enumerator = SmoothEnumerator::new(ab);
    empirical_middle_set_with(&mut enumerator, bound)
}

pub fn empirical_middle_set_with(
    enumerator: &mut SmoothEnumerator,
    bound: usize,
) -> BTreeSet<Word> {
    let ab = enumerator.alphabet();
    let bases = enumerator.words_up_to(bound);
    let mut found: BTreeSet<Word> = BTreeSet::from([Word::empty()]);
    let mut frontier = vec![Word::empty()];
    while !frontier.is_empty() {
        let result = walk_all(&bases, &frontier, bound, ab, None);
        frontier = result
            .middles
            .into_iter()
            .filter(|w| found.insert(w.clone()))
            .collect();
    }
    found
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerLevel {
    pub j: usize,
    pub witness: Word,
}

/// `D^j(u^n) = (D^j(u) w_j)^(n-1) D^j(u)` for each recorded level `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDecomposition {
    pub alphabet: Alphabet,
    pub base: Word,
    pub exponent: usize,
    pub levels: Vec<PowerLevel>,
}

/// Decomposes every derivative level of `u^n` down to the last level where
/// the base still has two or more runs.
pub fn power_decomposition(u: &Word, n: usize, ab: Alphabet) -> Result<PowerDecomposition> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "exponent must be at least 2, got {n}"
        )));
    }
    ab.check(u)?;
    let power = u.pow(n);
    if !is_smooth(&power, ab) {
        return Err(Error::PreconditionViolated(format!(
            "({u})^{n} is not smooth"
        )));
    }
    if runs(u).count() < 2 {
        return Err(Error::PreconditionViolated(format!(
            "{u} has fewer than two runs"
        )));
    }
    let table = dsigma_table(ab);
    let fail = |j: usize, msg: String| Error::CertificationFailure(format!("level {j}: {msg}"));

    let mut base_level = u.clone();
    let mut power_level = power;
    let mut levels = Vec::new();
    let mut j = 0;
    while runs(&base_level).count() >= 2 {
        j += 1;
        base_level = derivative(&base_level, ab).map_err(|e| fail(j, e.to_string()))?;
        power_level = derivative(&power_level, ab).map_err(|e| fail(j, e.to_string()))?;
        let repeated = n * base_level.len();
        if power_level.len() < repeated || !(power_level.len() - repeated).is_multiple_of(n - 1) {
            return Err(fail(
                j,
                format!(
                    "|D^j(u^n)| = {} does not fit n·|D^j(u)| = {repeated} plus (n-1) equal middles",
                    power_level.len()
                ),
            ));
        }
        let middle_len = (power_level.len() - repeated) / (n - 1);
        let start = base_level.len();
        let witness = power_level.slice(start..start + middle_len);
        let rebuilt = base_level.concat(&witness).pow(n - 1).concat(&base_level);
        if rebuilt != power_level {
            return Err(fail(
                j,
                format!("D^j(u^n) = {power_level} but (D^j(u) w)^(n-1) D^j(u) = {rebuilt}"),
            ));
        }
        if !table.contains(&witness) {
            return Err(fail(
                j,
                format!("middle word {witness} is not in the table"),
            ));
        }
        levels.push(PowerLevel { j, witness });
    }
    Ok(PowerDecomposition {
        alphabet: ab,
        base: u.clone(),
        exponent: n,
        levels,
    })
}
