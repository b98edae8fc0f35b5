#![allow(dead_code)]

use smoothwords::{Alphabet, Letter, Word};

pub fn ab(a: Letter, b: Letter) -> Alphabet {
    Alphabet::new(a, b).unwrap()
}

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// Every word of length exactly `n` over `ab`, in lexicographic order.
pub fn words_of_length(ab: Alphabet, n: usize) -> Vec<Word> {
    let [a, b] = ab.letters();
    (0u64..1 << n)
        .map(|mask| {
            let letters = (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { b } else { a })
                .collect();
            Word::new(letters).unwrap()
        })
        .collect()
}

/// Every word of length `0..=n` over `ab`.
pub fn words_up_to(ab: Alphabet, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|len| words_of_length(ab, len)).collect()
}

/// All factors (including the empty word) of `w`.
pub fn factors(w: &Word) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            out.push(w.slice(i..j));
        }
    }
    out
}

use smoothwords::{
    closure, complement, delta, derivative, is_differentiable, is_smooth, mirror, rho,
    rho_by_formula, runs, smooth_chain,
};

/// Checks every single-word identity on `w` and returns a description of
/// each one that fails.
pub fn word_invariant_failures(w: &Word, ab: Alphabet) -> Vec<String> {
    let mut bad = Vec::new();
    let mut fail = |what: &str| bad.push(format!("{what} fails for {w} over {{{ab}}}"));
    let m = mirror(w);
    let c = complement(w, ab).unwrap();

    if mirror(&m) != *w {
        fail("mirror involution");
    }
    if complement(&c, ab).unwrap() != *w || mirror(&c) != complement(&m, ab).unwrap() {
        fail("complement involution / commutes with mirror");
    }
    if runs(w).expand() != *w {
        fail("run round trip");
    }

    let differentiable = is_differentiable(w, ab).unwrap();
    if differentiable {
        let d = derivative(w, ab).unwrap();
        if derivative(&m, ab).unwrap() != mirror(&d) {
            fail("D(mirror u) = mirror D(u)");
        }
        if derivative(&c, ab).unwrap() != d {
            fail("D(complement u) = D(u)");
        }
        if !delta(w).contains_factor(&d) {
            fail("D(w) factor of delta(w)");
        }
        if runs(w).count() > d.len() + 2 {
            fail("r(w) <= |D(w)| + 2");
        }
        if !w.is_empty() && d.len() >= w.len() {
            fail("|D(w)| < |w|");
        }
        let closed = closure(w, ab).unwrap();
        if !closed.contains_factor(w) {
            fail("w factor of closure(w)");
        }
        for u in factors(w) {
            if !closed.contains_factor(&closure(&u, ab).unwrap()) {
                fail("closure(u) factor of closure(w)");
            }
            if !d.contains_factor(&derivative(&u, ab).unwrap()) {
                fail("D(u) factor of D(w)");
            }
        }
    }

    if let Ok(closed) = closure(w, ab) {
        if closure(&m, ab).unwrap() != mirror(&closed) {
            fail("closure commutes with mirror");
        }
        if closure(&c, ab).unwrap() != complement(&closed, ab).unwrap() {
            fail("closure commutes with complement");
        }
    }

    let r = rho(w, ab);
    if r.as_ref().ok() != rho_by_formula(w, ab).as_ref().ok() {
        fail("rho = rho_by_formula");
    }
    if let Ok(r) = &r {
        if !w.is_empty() && r.len() >= w.len() {
            fail("|rho(w)| < |w|");
        }
        if rho(&c, ab).as_ref() != Ok(r) {
            fail("rho(complement w) = rho(w)");
        }
        if rho(&m, ab) != Ok(mirror(r)) {
            fail("rho(mirror w) = mirror rho(w)");
        }
        if !r.contains_factor(&derivative(w, ab).unwrap()) {
            fail("D(w) factor of rho(w)");
        }
        for u in factors(w) {
            match rho(&u, ab) {
                Ok(ru) if r.contains_factor(&ru) => {}
                _ => fail("rho(u) factor of rho(w)"),
            }
        }
    }

    let chain = smooth_chain(w, ab);
    let smooth = chain.is_smooth();
    if smooth != is_smooth(w, ab) {
        fail("chain verdict = fast smoothness test");
    }
    if chain.levels.len() > w.len() + 1 {
        fail("chain length <= |w| + 1");
    }
    if smooth != is_smooth(&m, ab) || smooth != is_smooth(&c, ab) {
        fail("smoothness preserved by mirror and complement");
    }
    if smooth && !factors(w).iter().all(|u| is_smooth(u, ab)) {
        fail("factors of smooth words are smooth");
    }
    if is_smooth(&delta(w), ab) && !smooth {
        fail("delta(w) smooth implies w smooth");
    }
    bad
}

/// `delta(uv) = delta(u) delta(v)` iff `last(u) != first(v)`, over every
/// split of `w` into nonempty halves.
pub fn concatenation_law_failures(w: &Word) -> Vec<String> {
    let mut bad = Vec::new();
    for split in 1..w.len() {
        let (u, v) = (w.slice(0..split), w.slice(split..w.len()));
        let joins = delta(w) == delta(&u).concat(&delta(&v));
        if joins != (u.last() != v.first()) {
            bad.push(format!("delta concatenation law fails for {u}·{v}"));
        }
    }
    bad
}
