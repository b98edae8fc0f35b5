//! Command-line front end for `smoothwords`.
//!
//! [`CliConfig::try_parse_args`] turns arguments into a config and [`run`]
//! executes it, writing the report to the given sink. Exit statuses: 0 on
//! success, 1 when a certification finds violations or a computation fails,
//! 2 on usage and parse errors.

pub mod cache;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use smoothwords::census::{self, GammaValue, SmoothEnumerator};
use smoothwords::concat::{self, ConcatCertificate, ViolationReason};
use smoothwords::{
    closure, delta, derivative_pow, rho, smooth_chain, Alphabet, Error, Letter, Verdict, Word,
};

use crate::cache::DiskCache;

pub const SCHEMA_VERSION: &str = "1";
pub const CACHE_ENV: &str = "SMOOTHWORDS_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".smoothcache";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "smoothwords",
    version,
    about = "Smooth words over two-letter alphabets"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Alphabet as `a,b` with 1 <= a < b.
    #[arg(long, global = true, value_name = "A,B")]
    pub alphabet: Option<Alphabet>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Enumeration cache directory.
    #[arg(long, global = true, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: PathBuf,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct WordArg {
    #[arg(short = 'w', long)]
    pub word: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print D^k(w).
    Derive {
        #[command(flatten)]
        word: WordArg,
        #[arg(short = 'k', long = "depth", default_value_t = 1)]
        k: usize,
    },
    /// Print D of the closure of w.
    Rho {
        #[command(flatten)]
        word: WordArg,
    },
    /// Print the full derivative chain and the smoothness verdict.
    Chain {
        #[command(flatten)]
        word: WordArg,
    },
    Closure {
        #[command(flatten)]
        word: WordArg,
    },
    /// Print the run-length word of w.
    Delta {
        #[command(flatten)]
        word: WordArg,
    },
    /// Apply the pseudo-inverse of the run-length operator k times, or
    /// certify a family of lifted bases with `--family`.
    Lift {
        #[command(flatten)]
        word: WordArg,
        /// Start letter (defaults to a).
        #[arg(long)]
        alpha: Option<Letter>,
        #[arg(short = 'k', long = "depth", default_value_t = 1)]
        k: usize,
        /// Number of lifts to certify, starting from the word itself.
        #[arg(long, value_name = "K", requires = "n")]
        family: Option<usize>,
        /// Exponent whose powers must stay smooth (with `--family`).
        #[arg(short = 'n', long = "exponent")]
        n: Option<usize>,
    },
    /// List smooth words of length 1..=L.
    Enumerate {
        #[arg(short = 'L', long = "bound")]
        bound: usize,
        /// Only words of length exactly L.
        #[arg(long)]
        exact: bool,
    },
    /// Prefix of the self-generating run-length word.
    Kolakoski {
        #[arg(long)]
        alpha: Option<Letter>,
        #[arg(short = 'L', long = "length", default_value_t = 100)]
        length: usize,
    },
    /// Print the middle-word table of the alphabet.
    Dsigma,
    /// Check middle words of all smooth u x v with |u|, |v| <= L.
    CertifyConcat {
        #[arg(short = 'L', long = "bound", default_value_t = 8)]
        bound: usize,
        /// Also try every smooth x of length <= N; findings are reported
        /// without affecting the exit status.
        #[arg(long, value_name = "N")]
        explore_x: Option<usize>,
    },
    /// Decompose the derivatives of a smooth power u^n.
    PowerDecomp {
        #[command(flatten)]
        word: WordArg,
        #[arg(short = 'n', long = "exponent")]
        n: usize,
    },
    /// List smooth n-th powers with base length <= L.
    ScanPowers {
        #[arg(short = 'n', long = "exponent")]
        n: usize,
        #[arg(short = 'L', long = "bound")]
        bound: Option<usize>,
    },
    /// Count distinct smooth n-th powers with base length <= L.
    Gamma {
        #[arg(short = 'n', long = "exponent")]
        n: usize,
        #[arg(short = 'L', long = "bound")]
        bound: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Derive { .. } => "derive",
            Command::Rho { .. } => "rho",
            Command::Chain { .. } => "chain",
            Command::Closure { .. } => "closure",
            Command::Delta { .. } => "delta",
            Command::Lift { .. } => "lift",
            Command::Enumerate { .. } => "enumerate",
            Command::Kolakoski { .. } => "kolakoski",
            Command::Dsigma => "dsigma",
            Command::CertifyConcat { .. } => "certify-concat",
            Command::PowerDecomp { .. } => "power-decomp",
            Command::ScanPowers { .. } => "scan-powers",
            Command::Gamma { .. } => "gamma",
        }
    }
}

impl CliConfig {
    /// Parses arguments (the first item is the program name) and checks
    /// that an alphabet was given.
    pub fn try_parse_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let config = CliConfig::try_parse_from(args)?;
        if config.alphabet.is_none() {
            return Err(CliConfig::command().error(
                ErrorKind::MissingRequiredArgument,
                "the following required argument was not provided: --alphabet <A,B>",
            ));
        }
        Ok(config)
    }

    fn alphabet(&self) -> Alphabet {
        self.alphabet.expect("alphabet checked at parse time")
    }
}

/// Default scan bound: 60 for squares over {1,2}, 30 otherwise.
pub fn default_scan_bound(ab: Alphabet, n: usize) -> usize {
    if n == 2 && ab.a() == 1 && ab.b() == 2 {
        60
    } else {
        30
    }
}

/// Parses a word in comma or digit form and checks it against `ab`.
pub fn parse_word_text(s: &str, ab: Alphabet) -> smoothwords::Result<Word> {
    let w: Word = s.trim().parse()?;
    ab.check(&w)?;
    Ok(w)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::LetterOutsideAlphabet { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Computation(e.to_string()),
        }
    }
}

/// A rendered report plus the exit status it implies.
struct Outcome {
    body: String,
    status: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            status: EXIT_OK,
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::try_parse_args(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
        }
    }
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        if jobs == 0 {
            let _ = writeln!(err, "error: --jobs must be positive");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(jobs);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_VIOLATION;
        }
    };
    let mut warnings = Vec::new();
    let result = pool.install(|| dispatch(config, &mut warnings));
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(outcome) => {
            if out.write_all(outcome.body.as_bytes()).is_err() {
                return EXIT_VIOLATION;
            }
            outcome.status
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VIOLATION
        }
    }
}

fn show(w: &Word) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.to_string()
    }
}

fn json_report(command: &str, ab: Alphabet, result: Value) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "alphabet": ab,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_words<'a>(header: &str, words: impl IntoIterator<Item = &'a Word>) -> String {
    let mut s = format!("{header}\n");
    for w in words {
        let _ = writeln!(s, "{},{}", csv_escape(&w.to_string()), w.len());
    }
    s
}

fn enumerator(config: &CliConfig, ab: Alphabet, warnings: &mut Vec<String>) -> SmoothEnumerator {
    match DiskCache::open(&config.cache_dir) {
        Ok(cache) => SmoothEnumerator::with_cache(ab, Box::new(cache)),
        Err(e) => {
            warnings.push(format!(
                "cache at {} unavailable ({e}); continuing without it",
                config.cache_dir.display()
            ));
            SmoothEnumerator::new(ab)
        }
    }
}

/// Text or JSON output of a single word result.
fn single_word(
    config: &CliConfig,
    input: &Word,
    label: &str,
    result: &Word,
) -> Result<Outcome, Failure> {
    let ab = config.alphabet();
    let body = match config.format {
        Format::Text => format!("{}\n", show(result)),
        Format::Json => json_report(
            config.command.name(),
            ab,
            json!({ "input": input, label: result }),
        ),
        Format::Csv => format!(
            "input,{label}\n{},{}\n",
            csv_escape(&input.to_string()),
            csv_escape(&result.to_string())
        ),
    };
    Ok(Outcome::ok(body))
}

fn dispatch(config: &CliConfig, warnings: &mut Vec<String>) -> Result<Outcome, Failure> {
    let ab = config.alphabet();
    let name = config.command.name();
    let parse = |w: &WordArg| parse_word_text(&w.word, ab).map_err(Failure::from);
    match &config.command {
        Command::Derive { word, k } => {
            let w = parse(word)?;
            single_word(config, &w, "derivative", &derivative_pow(&w, *k, ab)?)
        }
        Command::Rho { word } => {
            let w = parse(word)?;
            single_word(config, &w, "rho", &rho(&w, ab)?)
        }
        Command::Closure { word } => {
            let w = parse(word)?;
            single_word(config, &w, "closure", &closure(&w, ab)?)
        }
        Command::Delta { word } => {
            let w = parse(word)?;
            single_word(config, &w, "delta", &delta(&w))
        }
        Command::Chain { word } => {
            let w = parse(word)?;
            let chain = smooth_chain(&w, ab);
            let body = match config.format {
                Format::Json => json_report(name, ab, json!(chain)),
                Format::Text => {
                    let mut s = String::new();
                    for (i, level) in chain.levels.iter().enumerate() {
                        let _ = writeln!(s, "{i}: {}", show(level));
                    }
                    if let Some(f) = &chain.failure {
                        let _ = writeln!(s, "stopped at level {}: {}", f.level, f.reason);
                    }
                    let verdict = match chain.verdict {
                        Verdict::Smooth => "smooth",
                        Verdict::NotSmooth => "not smooth",
                    };
                    let _ = writeln!(s, "verdict: {verdict}");
                    s
                }
                Format::Csv => {
                    let mut s = String::from("level,word,length\n");
                    for (i, level) in chain.levels.iter().enumerate() {
                        let _ =
                            writeln!(s, "{i},{},{}", csv_escape(&level.to_string()), level.len());
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Lift {
            word,
            alpha,
            k,
            family,
            n,
        } => {
            let w = parse(word)?;
            let alpha = alpha.unwrap_or(ab.a());
            match family {
                None => single_word(config, &w, "lift", &census::lift(&w, alpha, *k, ab)?),
                Some(size) => {
                    let n = n.expect("clap enforces -n with --family");
                    let bases = census::lift_family(&w, n, alpha, *size, ab)?;
                    let body = match config.format {
                        Format::Json => json_report(
                            name,
                            ab,
                            json!({ "base": w, "exponent": n, "alpha": alpha, "family": bases }),
                        ),
                        Format::Text => {
                            let mut s = String::new();
                            for (i, b) in bases.iter().enumerate() {
                                let _ = writeln!(
                                    s,
                                    "{i}: ({})^{n} smooth, base length {}",
                                    show(b),
                                    b.len()
                                );
                            }
                            let _ = writeln!(s, "{} distinct bases", bases.len());
                            s
                        }
                        Format::Csv => {
                            let mut s = String::from("k,base,base_length\n");
                            for (i, b) in bases.iter().enumerate() {
                                let _ =
                                    writeln!(s, "{i},{},{}", csv_escape(&b.to_string()), b.len());
                            }
                            s
                        }
                    };
                    Ok(Outcome::ok(body))
                }
            }
        }
        Command::Enumerate { bound, exact } => {
            let mut e = enumerator(config, ab, warnings);
            let words: Vec<Word> = if *exact {
                e.level(*bound).to_vec()
            } else {
                e.words_up_to(*bound)
                    .into_iter()
                    .filter(|w| !w.is_empty())
                    .collect()
            };
            let body = match config.format {
                Format::Json => json_report(
                    name,
                    ab,
                    json!({ "bound": bound, "exact": exact, "count": words.len(), "words": words }),
                ),
                Format::Text => {
                    let mut s = String::new();
                    for w in &words {
                        let _ = writeln!(s, "{w}");
                    }
                    let _ = writeln!(s, "{} smooth words", words.len());
                    s
                }
                Format::Csv => csv_words("word,length", &words),
            };
            Ok(Outcome::ok(body))
        }
        Command::Kolakoski { alpha, length } => {
            let w = census::kolakoski_prefix(ab, alpha.unwrap_or(ab.a()), *length)?;
            single_word(config, &Word::empty(), "prefix", &w)
        }
        Command::Dsigma => {
            let table = concat::dsigma_table(ab);
            let body = match config.format {
                Format::Json => json_report(name, ab, json!(table.words)),
                Format::Text => {
                    let mut s = String::new();
                    for w in table.iter() {
                        let _ = writeln!(s, "{}", show(w));
                    }
                    s
                }
                Format::Csv => csv_words("word,length", table.iter()),
            };
            Ok(Outcome::ok(body))
        }
        Command::CertifyConcat { bound, explore_x } => {
            let mut e = enumerator(config, ab, warnings);
            let cert = concat::certify_concat_with(&mut e, *bound);
            let exploration = explore_x.map(|max_x| {
                let xs: Vec<Word> = e.words_up_to(max_x);
                let table = concat::dsigma_table(ab);
                concat::certify_concat_over(&mut e, *bound, &xs, &table)
            });
            let status = if cert.is_certified() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            let body = match config.format {
                Format::Json => {
                    let mut result =
                        json!({ "certificate": cert, "certified": cert.is_certified() });
                    if let (Some(x), Some(found)) = (explore_x, &exploration) {
                        result["exploration"] = json!({ "max_x_length": x, "report": found });
                    }
                    json_report(name, ab, result)
                }
                Format::Text => {
                    let mut s = certificate_text(&cert);
                    if let (Some(x), Some(found)) = (explore_x, &exploration) {
                        let _ = writeln!(
                            s,
                            "exploration over all smooth x with |x| <= {x} (not asserted):"
                        );
                        s.push_str(&certificate_text(found));
                    }
                    s
                }
                Format::Csv => {
                    let mut s = String::from("u,x,v,reason,middle\n");
                    for v in &cert.violations {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            csv_escape(&v.u.to_string()),
                            csv_escape(&v.x.to_string()),
                            csv_escape(&v.v.to_string()),
                            reason_text(v.reason),
                            v.middle
                                .as_ref()
                                .map(|m| csv_escape(&m.to_string()))
                                .unwrap_or_default()
                        );
                    }
                    s
                }
            };
            Ok(Outcome { body, status })
        }
        Command::PowerDecomp { word, n } => {
            let u = parse(word)?;
            let dec = concat::power_decomposition(&u, *n, ab)?;
            let body = match config.format {
                Format::Json => json_report(name, ab, json!(dec)),
                Format::Text => {
                    let mut s = format!("({})^{} over {{{ab}}}\n", show(&dec.base), dec.exponent);
                    for level in &dec.levels {
                        let _ = writeln!(s, "j={}: middle word {}", level.j, show(&level.witness));
                    }
                    s
                }
                Format::Csv => {
                    let mut s = String::from("j,witness\n");
                    for level in &dec.levels {
                        let _ =
                            writeln!(s, "{},{}", level.j, csv_escape(&level.witness.to_string()));
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::ScanPowers { n, bound } => {
            if *n == 0 {
                return Err(Failure::Usage("exponent must be positive".into()));
            }
            let bound = bound.unwrap_or_else(|| default_scan_bound(ab, *n));
            let mut e = enumerator(config, ab, warnings);
            let report = census::scan_powers_with(&mut e, *n, bound);
            let body = match config.format {
                Format::Json => json_report(name, ab, json!(report)),
                Format::Csv => report.to_csv(),
                Format::Text => {
                    let mut s = format!(
                        "smooth powers of exponent {n} over {{{ab}}} with base length <= {bound}\n{} witnesses\n",
                        report.witnesses.len()
                    );
                    for w in &report.witnesses {
                        let _ = writeln!(s, "({})^{n}", w.base);
                    }
                    let _ = writeln!(s, "distinct powers: {}", report.distinct_powers);
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Gamma { n, bound } => {
            if *n == 0 {
                return Err(Failure::Usage("exponent must be positive".into()));
            }
            let bound = bound.unwrap_or_else(|| default_scan_bound(ab, *n));
            let mut e = enumerator(config, ab, warnings);
            let g = census::gamma_with(&mut e, *n, bound);
            let status = match g.gamma {
                GammaValue::Stable(_) => "stable",
                GammaValue::BoundTooSmall(_) => "bound too small",
                GammaValue::UnboundedAtBound(_) => "unbounded at this bound",
            };
            let body = match config.format {
                Format::Json => json_report(name, ab, json!(g)),
                Format::Csv => {
                    let mut s = g.report.to_csv();
                    let _ = writeln!(s, "status,{status}");
                    let _ = writeln!(s, "count,{}", g.gamma.count());
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for w in &g.report.witnesses {
                        let _ = writeln!(s, "({})^{n}", w.base);
                    }
                    if let Some(last) = g.report.last_new_base_length {
                        let _ = writeln!(s, "last new power at base length {last}");
                    }
                    let _ = writeln!(
                        s,
                        "gamma({ab}; n={n}, L={bound}) = {} [{status}]",
                        g.gamma.count()
                    );
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
    }
}

fn reason_text(r: ViolationReason) -> &'static str {
    match r {
        ViolationReason::NoMiddleWord => "no-middle-word",
        ViolationReason::MiddleNotInTable => "middle-not-in-table",
    }
}

fn certificate_text(cert: &ConcatCertificate) -> String {
    let mut s = format!(
        "alphabet {{{}}}, |u|,|v| <= {}\ntested triples: {}\nviolations: {}\n",
        cert.alphabet,
        cert.bound,
        cert.tested_triples,
        cert.violations.len()
    );
    for v in &cert.violations {
        let _ = write!(
            s,
            "  u={} x={} v={}: {}",
            show(&v.u),
            show(&v.x),
            show(&v.v),
            reason_text(v.reason)
        );
        if let Some(m) = &v.middle {
            let _ = write!(s, " (middle {})", show(m));
        }
        s.push('\n');
    }
    let middles: Vec<String> = cert.empirical_middle_set.iter().map(show).collect();
    let _ = writeln!(
        s,
        "middle words seen ({}): {}",
        middles.len(),
        middles.join(" ")
    );
    let _ = writeln!(
        s,
        "{}",
        if cert.is_certified() {
            "certified"
        } else {
            "NOT certified"
        }
    );
    s
}
