//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p smoothwords --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    ab, concatenation_law_failures, w, word_invariant_failures, words_of_length, words_up_to,
};
use smoothwords::census::{
    gamma, h_delta, kolakoski_prefix, lift_family, scan_powers, CensusReport, GammaValue,
    IndexPair, SmoothEnumerator,
};
use smoothwords::concat::{
    certify_concat_with, dsigma_table, empirical_middle_set_with, power_decomposition,
};
use smoothwords::{delta, is_smooth, smooth_chain, Alphabet, Word};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kolakoski_fixed_point() -> Check {
    let k = kolakoski_prefix(ab(1, 2), 1, 10_000).map_err(|e| e.to_string())?;
    ensure(k.slice(0..19) == w("1221121221221121122"), || {
        format!("first 19 letters are {}", k.slice(0..19))
    })?;
    let d = delta(&k);
    ensure(d.is_prefix_of(&k), || {
        "delta(prefix) is not a prefix".into()
    })?;
    ensure(is_smooth(&k, ab(1, 2)), || "prefix is not smooth".into())?;
    Ok(format!(
        "|delta(K_10000)| = {} is a prefix; K_10000 smooth",
        d.len()
    ))
}

fn cube_free_1_2() -> Check {
    let r = scan_powers(ab(1, 2), 3, 30);
    ensure(r.witnesses.is_empty(), || {
        format!(
            "{} cube witnesses, first {}",
            r.witnesses.len(),
            r.witnesses[0].base
        )
    })?;
    Ok("0 witnesses for n=3, L=30".into())
}

fn smooth_squares_1_2() -> Check {
    let g = gamma(ab(1, 2), 2, 60);
    let last = g.report.last_new_base_length;
    ensure(g.gamma == GammaValue::Stable(46), || {
        format!(
            "gamma = {} (last new base length {last:?})",
            g.gamma.describe()
        )
    })?;
    ensure(last.is_some_and(|l| l < 45), || {
        format!("new square at base length {last:?}")
    })?;
    Ok(format!(
        "gamma = 46, last new square at base length {}",
        last.unwrap()
    ))
}

fn biquadrate_and_quintic_free_1_3() -> Check {
    let biquadrate = w("3111313111").pow(4);
    ensure(smooth_chain(&biquadrate, ab(1, 3)).is_smooth(), || {
        "(3111313111)^4 is not smooth".into()
    })?;
    let r = scan_powers(ab(1, 3), 5, 12);
    ensure(r.witnesses.is_empty(), || {
        format!("fifth-power witness {}", r.witnesses[0].base)
    })?;
    Ok("(3111313111)^4 smooth; 0 fifth powers for L=12".into())
}

const INDEX_ALPHABETS: [(u32, u32, u32); 5] =
    [(1, 4, 4), (1, 5, 5), (2, 3, 3), (2, 4, 4), (3, 4, 4)];

fn h_table_spot_checks() -> Check {
    let mut notes = Vec::new();
    let mut failed = false;
    for (a, b, expected_h) in INDEX_ALPHABETS {
        let alphabet = ab(a, b);
        let h = h_delta(alphabet).h;
        ensure(h == expected_h, || {
            format!("h({a},{b}) = {h}, expected {expected_h}")
        })?;
        let r = scan_powers(alphabet, h as usize, 10);
        let long: Vec<String> = r
            .witnesses
            .iter()
            .filter(|x| x.base.len() > 1)
            .map(|x| format!("({})^{h}", x.base))
            .collect();
        if long.is_empty() {
            notes.push(format!("{{{a},{b}}} h={h}: ok"));
        } else {
            failed = true;
            notes.push(format!("{{{a},{b}}} h={h}: smooth {}", long.join(", ")));
        }
    }
    if failed {
        Err(notes.join("; "))
    } else {
        Ok(notes.join("; "))
    }
}

fn delta_sharpness() -> Check {
    let mut notes = Vec::new();
    for (a, b, _) in INDEX_ALPHABETS {
        let alphabet = ab(a, b);
        for letter in [a, b] {
            let power = Word::new(vec![letter; b as usize]).unwrap();
            ensure(is_smooth(&power, alphabet), || {
                format!("{power} not smooth over {{{a},{b}}}")
            })?;
        }
        let index = h_delta(alphabet).delta;
        let r = scan_powers(alphabet, index as usize, 10);
        ensure(r.witnesses.is_empty(), || {
            format!("{{{a},{b}}}: ({})^{index} is smooth", r.witnesses[0].base)
        })?;
        notes.push(format!("{{{a},{b}}} delta={index}"));
    }
    Ok(notes.join("; "))
}

fn concat_certification() -> Check {
    let plan = [
        (1, 2, 12),
        (1, 3, 12),
        (1, 4, 8),
        (1, 5, 8),
        (2, 3, 8),
        (2, 5, 8),
        (3, 4, 8),
    ];
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (a, b, bound) in plan {
        let alphabet = ab(a, b);
        let table = dsigma_table(alphabet);
        let mut enumerator = SmoothEnumerator::new(alphabet);
        let cert = certify_concat_with(&mut enumerator, bound);
        let fixpoint = empirical_middle_set_with(&mut enumerator, bound);
        let outside: Vec<String> = fixpoint
            .iter()
            .filter(|m| !table.contains(m))
            .map(|m| m.to_string())
            .collect();
        let line = format!(
            "{{{a},{b}}} L={bound}: {} triples, {} violations, fixpoint {}/{} table words",
            cert.tested_triples,
            cert.violations.len(),
            fixpoint.len(),
            table.len()
        );
        if cert.is_certified() && outside.is_empty() {
            notes.push(line);
        } else {
            let first = cert
                .violations
                .first()
                .map(|v| {
                    format!(
                        "u={} x={} v={} middle={:?}",
                        v.u,
                        v.x,
                        v.v,
                        v.middle.as_ref().map(Word::to_string)
                    )
                })
                .unwrap_or_default();
            failures.push(format!(
                "{line}; words outside table {outside:?}; first violation {first}"
            ));
        }
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        failures.extend(notes);
        Err(failures.join("; "))
    }
}

fn power_decompositions() -> Check {
    let mut witnesses: Vec<(Alphabet, Word, usize)> = vec![(ab(1, 3), w("3111313111"), 4)];
    for x in scan_powers(ab(1, 3), 4, 12).witnesses {
        witnesses.push((ab(1, 3), x.base, 4));
    }
    witnesses.extend(
        scan_powers(ab(1, 3), 5, 12)
            .witnesses
            .into_iter()
            .map(|x| (ab(1, 3), x.base, 5)),
    );
    for (a, b, _) in INDEX_ALPHABETS {
        let alphabet = ab(a, b);
        let IndexPair { h, delta } = h_delta(alphabet);
        for n in [h, delta] {
            for x in scan_powers(alphabet, n as usize, 10).witnesses {
                witnesses.push((alphabet, x.base, n as usize));
            }
        }
    }
    let mut decomposed = 0;
    let mut single_run = 0;
    for (alphabet, base, n) in &witnesses {
        if base.runs().count() < 2 {
            // No derivative level has two runs, so there is nothing to split.
            single_run += 1;
            continue;
        }
        power_decomposition(base, *n, *alphabet)
            .map_err(|e| format!("({base})^{n} over {{{alphabet}}}: {e}"))?;
        decomposed += 1;
    }
    Ok(format!(
        "{decomposed} multi-run witnesses decomposed; {single_run} single-run witnesses"
    ))
}

fn lifting_families() -> Check {
    let cases = [
        (ab(2, 4), "2244", 3, 3),
        (ab(1, 3), "3111313111", 4, 3),
        (ab(1, 5), "155555", 4, 2),
    ];
    let mut notes = Vec::new();
    for (alphabet, base, n, family) in cases {
        for alpha in alphabet.letters() {
            let words = lift_family(&w(base), n, alpha, family, alphabet)
                .map_err(|e| format!("{{{alphabet}}} ({base})^{n} from {alpha}: {e}"))?;
            ensure(words.len() == family, || {
                format!("{base}: {} lifts", words.len())
            })?;
        }
        notes.push(format!("{{{alphabet}}} ({base})^{n}: {family} lifts"));
    }
    Ok(notes.join("; "))
}

fn invariant_suite() -> Check {
    let plan = [(ab(1, 2), 12), (ab(1, 3), 12), (ab(2, 4), 8), (ab(3, 4), 8)];
    let mut checked = 0usize;
    for (alphabet, max_len) in plan {
        for word in words_up_to(alphabet, max_len) {
            let mut failures = word_invariant_failures(&word, alphabet);
            failures.extend(concatenation_law_failures(&word));
            if let Some(first) = failures.into_iter().next() {
                return Err(first);
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} words, 0 counterexamples"))
}

fn enumeration_oracle() -> Check {
    let mut counts = Vec::new();
    for alphabet in [ab(1, 2), ab(1, 3)] {
        let mut enumerator = SmoothEnumerator::new(alphabet);
        for n in 0..=10 {
            let naive: Vec<Word> = words_of_length(alphabet, n)
                .into_iter()
                .filter(|x| smooth_chain(x, alphabet).is_smooth())
                .collect();
            let fast = enumerator.level(n);
            ensure(fast == naive.as_slice(), || {
                format!("{{{alphabet}}} n={n} differs")
            })?;
            if alphabet == ab(1, 2) && (1..=3).contains(&n) {
                counts.push(fast.len());
            }
        }
    }
    ensure(counts == [2, 4, 6], || {
        format!("{{1,2}} counts at n=1..3 are {counts:?}")
    })?;
    Ok("n <= 10 on {1,2} and {1,3} agree; {1,2} counts 2, 4, 6".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        (
            "Kolakoski fixed point",
            Duration::from_secs(1),
            kolakoski_fixed_point,
        ),
        (
            "cube-freeness over {1,2}",
            Duration::from_secs(60),
            cube_free_1_2,
        ),
        (
            "46 smooth squares over {1,2}",
            Duration::from_secs(120),
            smooth_squares_1_2,
        ),
        (
            "{1,3} biquadrate, quintic-free",
            Duration::from_secs(60),
            biquadrate_and_quintic_free_1_3,
        ),
        (
            "h-table spot checks",
            Duration::from_secs(120),
            h_table_spot_checks,
        ),
        ("delta sharpness", Duration::from_secs(60), delta_sharpness),
        (
            "concatenation middle-word certification",
            Duration::from_secs(300),
            concat_certification,
        ),
        (
            "power decompositions",
            Duration::from_secs(300),
            power_decompositions,
        ),
        (
            "lifting families",
            Duration::from_secs(60),
            lifting_families,
        ),
        ("invariant suite", Duration::from_secs(300), invariant_suite),
        (
            "enumeration oracle",
            Duration::from_secs(300),
            enumeration_oracle,
        ),
    ];
    assert_eq!(CensusReport::quartile_start(60), 45);

    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > limit => ("FAIL", format!("took {elapsed:.2?}, limit {limit:?}")),
            Ok(detail) => ("PASS", detail),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] {:>2}. {name} ({elapsed:.2?}): {detail}", i + 1);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
