//! The `ramsplit` command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 invalid input,
//! 4 budget exceeded. Failures are reported on stderr as one line of JSON.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramsplit_core::dualcomplex::{blowup, reduce_presentation, stratified_blowup_sequence};
use ramsplit_core::pirutka::{
    bad_primes, bound_exponent, greedy_construct, is_pirutka, BadPrimeSet, Builtin, PirutkaCandidate,
    DEFAULT_BUDGET,
};
use ramsplit_core::simplicial::{
    barycentric, check_natural_iso, color_by_dimension, order_complex, star_subdivision, SimplicialComplex,
};
use ramsplit_core::splitting::{
    find_certificate, kummer_pullback, normal_form, residue_along, verify_certificate, SplitError,
};
use ramsplit_core::zmodl::PrimeModulus;
use serde_json::{json, Value};

use crate::formats::*;
use crate::parallel::{parallel_search, parallel_universal_split_check};
use crate::random::{random_class, random_corpus, rng};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "ramsplit", version, about = "Pirutka matrices, dual complexes and splitting certificates")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pirutka matrices: checks, search, construction, exponents.
    #[command(subcommand)]
    Pirutka(PirutkaCmd),
    /// Simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Dual complexes of snc divisors and their blowups.
    #[command(subcommand)]
    Dual(DualCmd),
    /// Symbol classes, residues and splitting certificates.
    #[command(subcommand)]
    Split(SplitCmd),
}

/// A matrix given by built-in name or as matrix JSON.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MatrixSource {
    /// clever3x3, allprimes4x3 or stacked:<d>.
    #[arg(long)]
    builtin: Option<String>,
    /// Matrix JSON, inline or a file path.
    #[arg(long)]
    matrix: Option<String>,
}

#[derive(Subcommand, Debug)]
enum PirutkaCmd {
    Check {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        prime: u64,
    },
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Report finished partitions on stderr.
        #[arg(long)]
        progress: bool,
    },
    BadPrimes {
        #[command(flatten)]
        source: MatrixSource,
        /// Largest prime factor to look for in minor gcds.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    Bound {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexCmd {
    /// Barycentric subdivision, or the star subdivision at `--at`.
    Subdivide {
        #[arg(long)]
        complex: String,
        /// Simplex JSON such as ["a","b"].
        #[arg(long)]
        at: Option<String>,
    },
    Order {
        #[arg(long)]
        complex: String,
    },
    /// Compares the barycentric subdivision with the order complex.
    Iso {
        #[arg(long)]
        complex: String,
    },
    /// Colors the order complex of the input by dimension.
    Color {
        #[arg(long)]
        complex: String,
    },
    Random {
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DualCmd {
    Blowup {
        #[arg(long)]
        dual: String,
        #[arg(long)]
        at: String,
    },
    Sequence {
        #[arg(long)]
        dual: String,
    },
    Reduce {
        #[arg(long)]
        dual: String,
        /// Ambient dimension; defaults to the one in the input.
        #[arg(long)]
        dim: Option<usize>,
        /// Add isolated dummy components up to exactly `dim` classes.
        #[arg(long)]
        pad: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SplitCmd {
    Certify {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        prime: u64,
        /// {"J": [...], "I_prime": [...]}
        #[arg(long)]
        stratum: String,
        #[arg(long)]
        j0: usize,
    },
    Verify {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        stratum: String,
        #[arg(long)]
        certificate: String,
    },
    Universal {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Include every certificate in the output.
        #[arg(long)]
        certificates: bool,
    },
    Residue {
        #[arg(long)]
        class: String,
        #[arg(long)]
        k: usize,
    },
    Pullback {
        #[arg(long)]
        class: String,
        /// Coordinates to adjoin roots of, e.g. 1,2.
        #[arg(long, value_delimiter = ',', required = true)]
        coords: Vec<usize>,
    },
    NormalForm {
        #[arg(long)]
        symbols: String,
    },
    Random {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Output {
    value: Value,
    text: String,
    negative: bool,
}

impl Output {
    fn ok(value: Value, text: String) -> Self {
        Output {
            value,
            text,
            negative: false,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            return report(err, &Error::Usage(line.to_string()));
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let written = match cli.format {
                Format::Json => writeln!(out, "{}", o.value),
                Format::Text => writeln!(out, "{}", o.text.trim_end()),
            };
            if written.is_err() {
                return 3;
            }
            i32::from(o.negative)
        }
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "{}", json!({ "error": e.kind(), "message": e.message() }));
    e.exit_code()
}

/// Inline JSON when the argument starts with `{` or `[`, stdin for `-`,
/// otherwise a file path.
fn load(arg: &str) -> Result<Value, Error> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::invalid(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::invalid(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))
}

fn prime(l: u64) -> Result<PrimeModulus, Error> {
    PrimeModulus::new(l).map_err(|e| Error::Usage(e.to_string()))
}

fn matrix(source: &MatrixSource) -> Result<PirutkaCandidate, Error> {
    match (&source.builtin, &source.matrix) {
        (Some(name), _) => Builtin::parse(name)
            .map(|b| b.candidate())
            .map_err(|e| Error::Usage(e.to_string())),
        (None, Some(arg)) => matrix_from_json(&load(arg)?),
        (None, None) => Err(Error::Usage("one of --builtin or --matrix is required".into())),
    }
}

fn rows_text(c: &PirutkaCandidate) -> String {
    c.matrix()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn complex_text(k: &SimplicialComplex) -> String {
    k.facets()
        .iter()
        .map(|f| {
            let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", vs.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn execute(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Pirutka(c) => pirutka(c),
        Command::Complex(c) => complex(c),
        Command::Dual(c) => dual(c),
        Command::Split(c) => split(c),
    }
}

fn pirutka(cmd: &PirutkaCmd) -> Result<Output, Error> {
    match cmd {
        PirutkaCmd::Check { source, prime: l } => {
            let c = matrix(source)?;
            let r = is_pirutka(&c, prime(*l)?);
            let text = match &r.witness {
                None => format!("{l}-Pirutka: yes"),
                Some(w) => format!(
                    "{l}-Pirutka: no (rows {:?}, cols {:?} have rank {})",
                    w.rows, w.cols, w.rank
                ),
            };
            Ok(Output {
                value: check_to_json(&r),
                text,
                negative: !r.verdict,
            })
        }
        PirutkaCmd::Search {
            n,
            d,
            prime: l,
            budget,
            workers,
            progress,
        } => {
            let report = |done: usize, total: usize| {
                if done == total || done % (total / 20).max(1) == 0 {
                    eprintln!("{}", json!({ "progress": done, "partitions": total }));
                }
            };
            let progress: Option<&(dyn Fn(usize, usize) + Sync)> = if *progress { Some(&report) } else { None };
            let s = parallel_search(*n, *d, prime(*l)?, *budget, *workers, progress)?;
            let text = match &s.found {
                Some(c) => format!(
                    "found after {} candidates ({} checked, {} pruned):\n{}",
                    s.examined,
                    s.checked,
                    s.pruned(),
                    rows_text(c)
                ),
                None => format!(
                    "none among {} candidates ({} checked, {} pruned)",
                    s.examined,
                    s.checked,
                    s.pruned()
                ),
            };
            Ok(Output {
                value: search_to_json(&s),
                text,
                negative: s.found.is_none(),
            })
        }
        PirutkaCmd::BadPrimes { source, bound } => {
            let b = bad_primes(&matrix(source)?, *bound)?;
            let text = match &b {
                BadPrimeSet::Finite(ps) => format!("bad primes: {ps:?}"),
                BadPrimeSet::AllPrimes => "bad primes: all".to_string(),
            };
            Ok(Output::ok(bad_primes_to_json(&b), text))
        }
        PirutkaCmd::Construct { n, prime: l, budget } => {
            let found = greedy_construct(*n, prime(*l)?, *budget)?;
            let text = found.as_ref().map_or("none".to_string(), rows_text);
            Ok(Output {
                value: json!({ "matrix": found.as_ref().map(matrix_to_json) }),
                text,
                negative: found.is_none(),
            })
        }
        PirutkaCmd::Bound { prime: l, dim } => {
            let b = bound_exponent(prime(*l)?, *dim)?;
            Ok(Output::ok(
                json!({ "exponent": b.exponent, "matrix": b.matrix.name() }),
                format!("exponent {} via {}", b.exponent, b.matrix.name()),
            ))
        }
    }
}

fn complex(cmd: &ComplexCmd) -> Result<Output, Error> {
    match cmd {
        ComplexCmd::Subdivide { complex, at } => {
            let k = complex_from_json(&load(complex)?)?;
            let out = match at {
                Some(s) => star_subdivision(&k, &simplex_from_json(&load(s)?)?)?,
                None => barycentric(&k)?,
            };
            Ok(Output::ok(complex_to_json(&out), complex_text(&out)))
        }
        ComplexCmd::Order { complex } => {
            let out = order_complex(&complex_from_json(&load(complex)?)?)?;
            Ok(Output::ok(complex_to_json(&out), complex_text(&out)))
        }
        ComplexCmd::Iso { complex } => {
            let r = check_natural_iso(&complex_from_json(&load(complex)?)?)?;
            let bijection: Vec<Value> = r
                .bijection
                .iter()
                .map(|(a, b)| json!([label_to_json(a), label_to_json(b)]))
                .collect();
            let mut value = json!({ "is_iso": r.is_iso, "bijection": bijection });
            if let Some(s) = &r.counterexample {
                value["counterexample"] = simplex_to_json(s);
            }
            let text = if r.is_iso {
                format!("isomorphic ({} vertices)", r.bijection.len())
            } else {
                "not isomorphic".to_string()
            };
            Ok(Output {
                value,
                text,
                negative: !r.is_iso,
            })
        }
        ComplexCmd::Color { complex } => {
            let fl = order_complex(&complex_from_json(&load(complex)?)?)?;
            let c = color_by_dimension(&fl)?;
            let colors: Vec<Value> = c.colors.iter().map(|(v, k)| json!([label_to_json(v), k])).collect();
            let text = c
                .colors
                .iter()
                .map(|(v, k)| format!("{v}: {k}"))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output {
                value: json!({ "valid": c.valid, "num_colors": c.num_colors(), "colors": colors }),
                text,
                negative: !c.valid,
            })
        }
        ComplexCmd::Random {
            vertices,
            dim,
            count,
            seed,
        } => {
            if *vertices == 0 {
                return Err(Error::Usage("--vertices must be positive".into()));
            }
            let corpus = random_corpus(*seed, *count, *vertices, *dim);
            let value = Value::Array(corpus.iter().map(complex_to_json).collect());
            let text = corpus.iter().map(complex_text).collect::<Vec<_>>().join("\n\n");
            Ok(Output::ok(value, text))
        }
    }
}

fn dual(cmd: &DualCmd) -> Result<Output, Error> {
    match cmd {
        DualCmd::Blowup { dual, at } => {
            let d = dual_from_json(&load(dual)?)?;
            let out = blowup(&d, &simplex_from_json(&load(at)?)?)?;
            Ok(Output::ok(dual_to_json(&out), complex_text(out.complex())))
        }
        DualCmd::Sequence { dual } => {
            let d = dual_from_json(&load(dual)?)?;
            let (out, trace) = stratified_blowup_sequence(&d)?;
            let trace_json: Vec<Value> = trace.iter().map(simplex_to_json).collect();
            let text = format!("{} blowups\n{}", trace.len(), complex_text(out.complex()));
            Ok(Output::ok(json!({ "dual": dual_to_json(&out), "trace": trace_json }), text))
        }
        DualCmd::Reduce { dual, dim, pad } => {
            let d = dual_from_json(&load(dual)?)?;
            let ambient = dim.unwrap_or(d.ambient_dim());
            let (_, p) = reduce_presentation(&d, ambient, *pad)?;
            let text = p
                .groups
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let vs: Vec<String> = g.iter().map(|v| v.to_string()).collect();
                    format!("class {k}: {}", vs.join(", "))
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::ok(presentation_to_json(&p), text))
        }
    }
}

fn split(cmd: &SplitCmd) -> Result<Output, Error> {
    match cmd {
        SplitCmd::Certify {
            source,
            prime: l,
            stratum,
            j0,
        } => {
            let t = matrix(source)?;
            let z = stratum_from_json(&load(stratum)?, t.n(), t.d())?;
            match find_certificate(&t, prime(*l)?, &z, *j0) {
                Ok(c) => {
                    let text = format!("I = {:?}, a = {:?}, r = {}, b = {:?}", c.rows, c.a, c.r, c.b);
                    Ok(Output::ok(certificate_to_json(&c), text))
                }
                Err(SplitError::NotPirutka { rows, cols }) => Ok(Output {
                    value: json!({ "certificate": null, "rows": rows, "cols": cols }),
                    text: format!("no certificate: T_{{I,J}} deficient for I = {rows:?}, J = {cols:?}"),
                    negative: true,
                }),
                Err(e) => Err(e.into()),
            }
        }
        SplitCmd::Verify {
            source,
            prime: l,
            stratum,
            certificate,
        } => {
            let t = matrix(source)?;
            let z = stratum_from_json(&load(stratum)?, t.n(), t.d())?;
            let c = certificate_from_json(&load(certificate)?)?;
            match verify_certificate(&c, &t, prime(*l)?, &z) {
                Ok(()) => Ok(Output::ok(json!({ "valid": true }), "valid".into())),
                Err(reason) => Ok(Output {
                    value: json!({ "valid": false, "reason": reason.to_string() }),
                    text: format!("invalid: {reason}"),
                    negative: true,
                }),
            }
        }
        SplitCmd::Universal {
            source,
            prime: l,
            workers,
            certificates,
        } => {
            let t = matrix(source)?;
            let report = parallel_universal_split_check(&t, prime(*l)?, *workers);
            let mut value = json!({ "verdict": report.verdict(), "attempts": report.attempts.len() });
            let mut text = format!(
                "{} over {} (J, j0, I') triples",
                if report.verdict() { "splits" } else { "fails" },
                report.attempts.len()
            );
            if let Some(f) = report.first_failure() {
                let reason = f.outcome.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
                value["failure"] = json!({
                    "J": f.point.j(),
                    "j0": f.j0,
                    "I_prime": f.point.i_prime(),
                    "reason": reason,
                });
                text.push_str(&format!(
                    "\nfirst failure: J = {:?}, j0 = {}, I' = {:?}: {reason}",
                    f.point.j(),
                    f.j0,
                    f.point.i_prime()
                ));
            }
            if *certificates {
                let all: Vec<Value> = report
                    .attempts
                    .iter()
                    .filter_map(|a| {
                        a.outcome.as_ref().ok().map(|c| {
                            json!({ "stratum": stratum_to_json(&a.point), "certificate": certificate_to_json(c) })
                        })
                    })
                    .collect();
                value["certificates"] = Value::Array(all);
            }
            Ok(Output {
                negative: !report.verdict(),
                value,
                text,
            })
        }
        SplitCmd::Residue { class, k } => {
            let r = residue_along(&class_from_json(&load(class)?)?, *k)?;
            let text = format!("units {:?}, exponents {:?}", r.units, r.exponents);
            Ok(Output::ok(residue_to_json(&r), text))
        }
        SplitCmd::Pullback { class, coords } => {
            let a = class_from_json(&load(class)?)?;
            let s: BTreeSet<usize> = coords.iter().copied().collect();
            let out = kummer_pullback(&a, &s)?;
            let text = if out.is_zero() { "zero class".to_string() } else { class_to_json(&out).to_string() };
            Ok(Output::ok(class_to_json(&out), text))
        }
        SplitCmd::NormalForm { symbols } => {
            let (l, d, raw) = raw_symbols_from_json(&load(symbols)?)?;
            let out = normal_form(&raw, d, l)?;
            Ok(Output::ok(class_to_json(&out), class_to_json(&out).to_string()))
        }
        SplitCmd::Random {
            prime: l,
            d,
            count,
            seed,
        } => {
            if *d == 0 {
                return Err(Error::Usage("--d must be positive".into()));
            }
            let l = prime(*l)?;
            let mut r = rng(*seed);
            let classes: Vec<Value> = (0..*count).map(|_| class_to_json(&random_class(&mut r, l, *d))).collect();
            let text = classes.iter().map(Value::to_string).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(Value::Array(classes), text))
        }
    }
}
