//! Alphabets, words and runs, plus the run-length operator and its
//! pseudo-inverses.
//!
//! Words are plain letter vectors. Letters are arbitrary positive integers so
//! that run-length images (which can hold any length) live in the same type as
//! words over a two-letter alphabet.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Letter = u32;

/// An ordered two-letter alphabet `{a, b}` with `1 <= a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    a: Letter,
    b: Letter,
}

impl Alphabet {
    pub fn new(a: Letter, b: Letter) -> Result<Self> {
        if a == 0 || a >= b {
            return Err(Error::InvalidArgument(format!(
                "alphabet needs 1 <= a < b, got {{{a},{b}}}"
            )));
        }
        Ok(Alphabet { a, b })
    }

    #[inline]
    pub fn a(&self) -> Letter {
        self.a
    }

    #[inline]
    pub fn b(&self) -> Letter {
        self.b
    }

    pub fn letters(&self) -> [Letter; 2] {
        [self.a, self.b]
    }

    #[inline]
    pub fn contains(&self, letter: Letter) -> bool {
        letter == self.a || letter == self.b
    }

    /// Swaps `a` and `b`. Letters outside the alphabet are returned unchanged.
    #[inline]
    pub fn swap(&self, letter: Letter) -> Letter {
        if letter == self.a {
            self.b
        } else if letter == self.b {
            self.a
        } else {
            letter
        }
    }

    pub fn same_parity(&self) -> bool {
        self.a % 2 == self.b % 2
    }

    /// Fails on the first letter that is not `a` or `b`.
    pub fn check(&self, letters: &[Letter]) -> Result<()> {
        match letters.iter().position(|&l| !self.contains(l)) {
            None => Ok(()),
            Some(position) => Err(Error::LetterOutsideAlphabet {
                letter: letters[position],
                position,
                a: self.a,
                b: self.b,
            }),
        }
    }

    pub(crate) fn require_letter(&self, letter: Letter) -> Result<()> {
        if self.contains(letter) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "letter {letter} is not in the alphabet {{{},{}}}",
                self.a, self.b
            )))
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |part: &str, position: usize| {
            part.trim().parse::<Letter>().map_err(|e| Error::Parse {
                position,
                message: format!("bad alphabet letter {part:?}: {e}"),
            })
        };
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("alphabet must look like \"a,b\", got {s:?}"),
        })?;
        Alphabet::new(parse(a, 0)?, parse(b, a.len() + 1)?)
    }
}

/// Serialized as the two-element array `[a, b]`.
impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[Letter; 2]>::deserialize(deserializer)?;
        Alphabet::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// A finite word over positive-integer letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, rejecting zero letters.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if let Some(position) = letters.iter().position(|&l| l == 0) {
            return Err(Error::InvalidArgument(format!(
                "letter at position {position} is zero"
            )));
        }
        Ok(Word(letters))
    }

    /// Builds a word from letters known to be positive.
    pub(crate) fn from_vec(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&l| l > 0));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Letter-by-letter factor test.
    pub fn contains_factor(&self, factor: &Word) -> bool {
        factor.is_empty() || self.0.windows(factor.len()).any(|w| w == factor.letters())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// The shortest `p` with `self = p^m`.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for period in 1..=n {
            if n.is_multiple_of(period) && (period..n).all(|i| self.0[i] == self.0[i - period]) {
                return self.slice(0..period);
            }
        }
        self.clone()
    }

    pub fn runs(&self) -> RunDecomposition {
        runs(self)
    }

    /// Comma-separated decimal letters, e.g. `3,1,1,1,3`. A one-letter word
    /// gets a trailing comma (`12,`) so it cannot be misread as digits.
    pub fn to_canonical_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        let mut s = parts.join(",");
        if self.0.len() == 1 {
            s.push(',');
        }
        s
    }

    /// Digit-string form, available only when every letter is at most 9.
    pub fn to_compact_string(&self) -> Option<String> {
        self.0
            .iter()
            .map(|&l| char::from_digit(l, 10).filter(|_| l <= 9))
            .collect()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Word> for Vec<Letter> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl TryFrom<Vec<Letter>> for Word {
    type Error = Error;

    fn try_from(letters: Vec<Letter>) -> Result<Self> {
        Word::new(letters)
    }
}

/// Compact digit form when every letter is at most 9, comma form otherwise.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact_string() {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_canonical_string()),
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `3,1,1,1,3` or `31113`. The empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        if s.contains(',') {
            let mut offset = 0;
            let body = s.strip_suffix(',').unwrap_or(s);
            for part in body.split(',') {
                let token = part.trim();
                if token.is_empty() || !token.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(Error::Parse {
                        position: offset,
                        message: format!("expected a decimal letter, got {part:?}"),
                    });
                }
                let letter: Letter = token.parse().map_err(|e| Error::Parse {
                    position: offset,
                    message: format!("letter {token:?} out of range: {e}"),
                })?;
                if letter == 0 {
                    return Err(Error::Parse {
                        position: offset,
                        message: "letters must be positive".into(),
                    });
                }
                letters.push(letter);
                offset += part.len() + 1;
            }
        } else {
            for (position, c) in s.chars().enumerate() {
                match c.to_digit(10) {
                    Some(0) => {
                        return Err(Error::Parse {
                            position,
                            message: "zero is not a letter".into(),
                        })
                    }
                    Some(d) => letters.push(d),
                    None => {
                        return Err(Error::Parse {
                            position,
                            message: format!("unexpected character {c:?}"),
                        })
                    }
                }
            }
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub letter: Letter,
    pub length: usize,
}

/// The maximal runs of a word, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunDecomposition {
    runs: Vec<Run>,
}

impl RunDecomposition {
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// r(w)
    pub fn count(&self) -> usize {
        self.runs.len()
    }

    pub fn first(&self) -> Option<Run> {
        self.runs.first().copied()
    }

    pub fn last(&self) -> Option<Run> {
        self.runs.last().copied()
    }

    /// lfr(w); 0 for the empty word.
    pub fn first_len(&self) -> usize {
        self.first().map_or(0, |r| r.length)
    }

    /// llr(w); 0 for the empty word.
    pub fn last_len(&self) -> usize {
        self.last().map_or(0, |r| r.length)
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().map(|r| r.length)
    }

    pub fn expand(&self) -> Word {
        let mut letters = Vec::with_capacity(self.lengths().sum());
        for run in &self.runs {
            letters.extend(std::iter::repeat_n(run.letter, run.length));
        }
        Word(letters)
    }
}

pub(crate) fn run_lengths_into(letters: &[Letter], out: &mut Vec<usize>) {
    out.clear();
    let mut iter = letters.iter();
    let Some(mut current) = iter.next() else {
        return;
    };
    let mut length = 1;
    for letter in iter {
        if letter == current {
            length += 1;
        } else {
            out.push(length);
            current = letter;
            length = 1;
        }
    }
    out.push(length);
}

pub fn runs(w: &Word) -> RunDecomposition {
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    let mut start = 0;
    let runs = lengths
        .into_iter()
        .map(|length| {
            let run = Run {
                letter: w[start],
                length,
            };
            start += length;
            run
        })
        .collect();
    RunDecomposition { runs }
}

fn to_letter(length: usize) -> Letter {
    Letter::try_from(length).expect("run length exceeds the letter range")
}

/// The run-length operator: the word of run lengths, in order.
pub fn delta(w: &Word) -> Word {
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    Word(lengths.into_iter().map(to_letter).collect())
}

/// Rebuilds a word whose runs have lengths `u`, with letters alternating from
/// `alpha`.
pub fn delta_inv(u: &Word, alpha: Letter, ab: Alphabet) -> Result<Word> {
    ab.require_letter(alpha)?;
    let total: usize = u.iter().map(|&l| l as usize).sum();
    let mut letters = Vec::with_capacity(total);
    let mut letter = alpha;
    for &length in u.iter() {
        letters.extend(std::iter::repeat_n(letter, length as usize));
        letter = ab.swap(letter);
    }
    Ok(Word(letters))
}

pub fn mirror(w: &Word) -> Word {
    Word(w.iter().rev().copied().collect())
}

pub fn complement(w: &Word, ab: Alphabet) -> Result<Word> {
    ab.check(w)?;
    Ok(Word(w.iter().map(|&l| ab.swap(l)).collect()))
}

/// Pads boundary runs longer than `a` up to length `b`.
///
/// A single-run word `x^t` with `a < t <= b` becomes `x^b` (padded once).
pub fn closure(w: &Word, ab: Alphabet) -> Result<Word> {
    ab.check(w)?;
    closure_unchecked(w, ab).map(Word)
}

/// Closure on a word already known to be over `ab`.
pub(crate) fn closure_unchecked(w: &[Letter], ab: Alphabet) -> Result<Vec<Letter>> {
    if w.is_empty() {
        return Ok(Vec::new());
    }
    let a = ab.a() as usize;
    let b = ab.b() as usize;
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    if let Some((run, &length)) = lengths.iter().enumerate().find(|(_, &l)| l > b) {
        return Err(Error::NotClosable {
            run,
            length,
            b: ab.b(),
        });
    }
    let first = lengths[0];
    let last = lengths[lengths.len() - 1];
    let (pre, post) = if lengths.len() == 1 {
        (if first > a { b - first } else { 0 }, 0)
    } else {
        (
            if first > a { b - first } else { 0 },
            if last > a { b - last } else { 0 },
        )
    };
    let mut out = Vec::with_capacity(w.len() + pre + post);
    out.extend(std::iter::repeat_n(w[0], pre));
    out.extend_from_slice(w);
    out.extend(std::iter::repeat_n(w[w.len() - 1], post));
    Ok(out)
}
