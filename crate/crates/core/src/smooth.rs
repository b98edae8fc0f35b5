//! Differentiability, the derivative `D`, `rho = D(closure(w))`, and
//! smoothness testing by iterating `rho` down to the empty word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{closure_unchecked, run_lengths_into, Alphabet, Letter, Word};

/// First run (index, length) breaking differentiability, if any.
///
/// Every run must be at most `b`; interior runs must be exactly `a` or `b`.
fn differentiability_violation(lengths: &[usize], ab: Alphabet) -> Option<(usize, usize)> {
    let (a, b) = (ab.a() as usize, ab.b() as usize);
    let k = lengths.len();
    lengths.iter().enumerate().find_map(|(i, &l)| {
        let interior = i > 0 && i + 1 < k;
        let bad = l > b || (interior && l != a && l != b);
        bad.then_some((i, l))
    })
}

pub fn is_differentiable(w: &Word, ab: Alphabet) -> Result<bool> {
    ab.check(w)?;
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    Ok(differentiability_violation(&lengths, ab).is_none())
}

/// Run lengths of a differentiable word with each boundary run dropped when
/// shorter than `b`. A single run is dropped at most once.
fn derive_lengths(lengths: &[usize], ab: Alphabet, out: &mut Vec<Letter>) {
    out.clear();
    let b = ab.b() as usize;
    let k = lengths.len();
    for (i, &l) in lengths.iter().enumerate() {
        let boundary = i == 0 || i + 1 == k;
        if !boundary || l >= b {
            out.push(l as Letter);
        }
    }
}

pub fn derivative(w: &Word, ab: Alphabet) -> Result<Word> {
    ab.check(w)?;
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    if let Some((run, length)) = differentiability_violation(&lengths, ab) {
        return Err(Error::NotDifferentiable { run, length });
    }
    let mut out = Vec::with_capacity(lengths.len());
    derive_lengths(&lengths, ab, &mut out);
    Ok(Word::from_vec(out))
}

/// `D` applied `k` times.
pub fn derivative_pow(w: &Word, k: usize, ab: Alphabet) -> Result<Word> {
    let mut current = w.clone();
    for _ in 0..k {
        current = derivative(&current, ab)?;
    }
    Ok(current)
}

/// `rho(w) = D(closure(w))`, computed literally: build the closure, then
/// differentiate it.
pub fn rho(w: &Word, ab: Alphabet) -> Result<Word> {
    ab.check(w)?;
    let closed =
        closure_unchecked(w, ab).map_err(|e| Error::NotCloselyDifferentiable(Box::new(e)))?;
    derivative(&Word::from_vec(closed), ab)
        .map_err(|e| Error::NotCloselyDifferentiable(Box::new(e)))
}

/// `rho` via the boundary-case shortcut: differentiate `w` itself, then put a
/// `b` back at each end whose boundary run length lies strictly between `a`
/// and `b`. Kept as an independent cross-check of [`rho`].
pub fn rho_by_formula(w: &Word, ab: Alphabet) -> Result<Word> {
    ab.check(w)?;
    let mut lengths = Vec::new();
    run_lengths_into(w, &mut lengths);
    let (a, b) = (ab.a() as usize, ab.b() as usize);
    if let Some((run, length)) = lengths.iter().enumerate().find(|(_, &l)| l > b) {
        return Err(Error::NotCloselyDifferentiable(Box::new(
            Error::NotClosable {
                run,
                length: *length,
                b: ab.b(),
            },
        )));
    }
    let inner = derivative(w, ab).map_err(|e| Error::NotCloselyDifferentiable(Box::new(e)))?;
    let Some((&first, &last)) = lengths.first().zip(lengths.last()) else {
        return Ok(inner);
    };
    let strictly_between = |t: usize| a < t && t < b;
    let prepend = strictly_between(first);
    let append = lengths.len() > 1 && strictly_between(last);
    let mut out = Vec::with_capacity(inner.len() + 2);
    if prepend {
        out.push(ab.b());
    }
    out.extend_from_slice(&inner);
    if append {
        out.push(ab.b());
    }
    Ok(Word::from_vec(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// Some run is longer than `b`, so the closure does not exist.
    RunTooLong,
    /// An interior run of the closure has a length other than `a` or `b`.
    InteriorRunNotInAlphabet,
    /// The word uses a letter other than `a` or `b`.
    LetterOutsideAlphabet,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::RunTooLong => "run-too-long",
            FailureReason::InteriorRunNotInAlphabet => "interior-run-not-in-alphabet",
            FailureReason::LetterOutsideAlphabet => "letter-outside-alphabet",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Smooth,
    NotSmooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFailure {
    pub level: usize,
    pub reason: FailureReason,
}

/// The sequence `w, rho(w), rho^2(w), ...` up to the empty word or the first
/// level where `rho` is undefined. On failure the offending level is the last
/// entry of `levels`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeChain {
    pub levels: Vec<Word>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<ChainFailure>,
}

impl DerivativeChain {
    pub fn is_smooth(&self) -> bool {
        self.verdict == Verdict::Smooth
    }
}

/// One `rho` step in run-length space. Writes `rho(w)` into `out`.
///
/// `check_letters` is only needed on the input word; later levels consist of
/// run lengths already known to be `a` or `b`.
fn rho_step(
    w: &[Letter],
    ab: Alphabet,
    check_letters: bool,
    lengths: &mut Vec<usize>,
    out: &mut Vec<Letter>,
) -> std::result::Result<(), FailureReason> {
    if check_letters && ab.check(w).is_err() {
        return Err(FailureReason::LetterOutsideAlphabet);
    }
    run_lengths_into(w, lengths);
    let (a, b) = (ab.a() as usize, ab.b() as usize);
    if lengths.iter().any(|&l| l > b) {
        return Err(FailureReason::RunTooLong);
    }
    // The closure only lengthens boundary runs, to exactly b.
    if let Some(first) = lengths.first_mut() {
        if *first > a {
            *first = b;
        }
    }
    if let Some(last) = lengths.last_mut() {
        if *last > a {
            *last = b;
        }
    }
    if differentiability_violation(lengths, ab).is_some() {
        return Err(FailureReason::InteriorRunNotInAlphabet);
    }
    derive_lengths(lengths, ab, out);
    Ok(())
}

/// Iterates `rho` until the empty word or a failure. Never errors: every
/// failure mode is recorded in the returned chain.
pub fn smooth_chain(w: &Word, ab: Alphabet) -> DerivativeChain {
    let mut levels = vec![w.clone()];
    let mut lengths = Vec::new();
    let mut next = Vec::new();
    let bound = w.len() + 1;
    loop {
        let current = levels.last().expect("chain always has a level");
        if current.is_empty() {
            return DerivativeChain {
                levels,
                verdict: Verdict::Smooth,
                failure: None,
            };
        }
        let level = levels.len() - 1;
        assert!(
            level <= bound,
            "rho failed to shrink {w} within {bound} steps"
        );
        match rho_step(current, ab, level == 0, &mut lengths, &mut next) {
            Ok(()) => levels.push(Word::from_vec(std::mem::take(&mut next))),
            Err(reason) => {
                return DerivativeChain {
                    levels,
                    verdict: Verdict::NotSmooth,
                    failure: Some(ChainFailure { level, reason }),
                }
            }
        }
    }
}

/// Reusable buffers for repeated smoothness tests.
#[derive(Debug, Default)]
pub struct SmoothTester {
    current: Vec<Letter>,
    next: Vec<Letter>,
    lengths: Vec<usize>,
}

impl SmoothTester {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_smooth(&mut self, w: &[Letter], ab: Alphabet) -> bool {
        if w.is_empty() {
            return true;
        }
        if rho_step(w, ab, true, &mut self.lengths, &mut self.next).is_err() {
            return false;
        }
        loop {
            std::mem::swap(&mut self.current, &mut self.next);
            if self.current.is_empty() {
                return true;
            }
            if rho_step(&self.current, ab, false, &mut self.lengths, &mut self.next).is_err() {
                return false;
            }
        }
    }
}

/// Boolean smoothness test without recording the chain.
pub fn is_smooth(w: &[Letter], ab: Alphabet) -> bool {
    SmoothTester::new().is_smooth(w, ab)
}
