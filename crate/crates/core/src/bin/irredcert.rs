//! `irredcert`: produce and check irreducibility certificates.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use irredcert::certio::{parse, serialize};
use irredcert::degan::{analyze_prime, intersect};
use irredcert::parser::parse_poly;
use irredcert::polymodp::MAX_MODULUS;
use irredcert::polyz::{compute_root_bound, fixed_divisor, format_rat, DEFAULT_MAX_GRAEFFE};
use irredcert::primality::is_prime_u64;
use irredcert::{certify, verify, CertifyConfig, PolyZ, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_REDUCIBLE: u8 = 1;
const EXIT_REJECT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "irredcert",
    version,
    about = "Irreducibility certificates for integer polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate and print it.
    Certify {
        /// Polynomial: expression such as "x^4+1", coefficient list "[1,0,0,0,1]", or @FILE.
        poly: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-iters", default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long = "smooth-bound", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
        smooth_bound: u64,
        #[arg(long = "max-graeffe", default_value_t = DEFAULT_MAX_GRAEFFE)]
        max_graeffe: u32,
        #[arg(long = "no-transforms")]
        no_transforms: bool,
        #[arg(long = "strict-primality")]
        strict_primality: bool,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
    },
    /// Check a certificate file against a polynomial.
    Verify {
        poly: String,
        #[arg(long)]
        cert: PathBuf,
        /// Require primality certificates instead of probabilistic tests.
        #[arg(long)]
        strict: bool,
    },
    /// Print basic data about a polynomial.
    Info {
        poly: String,
        /// Comma-separated primes to factor modulo.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
}

fn read_poly(arg: &str) -> Result<PolyZ, String> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?,
        None => arg.to_string(),
    };
    parse_poly(text.trim()).map_err(|e| format!("cannot parse polynomial: {e}"))
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("irredcert: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match cli.command {
        Command::Certify {
            poly,
            out,
            seed,
            max_iters,
            smooth_bound,
            max_graeffe,
            no_transforms,
            strict_primality,
            threads,
        } => {
            let f = match read_poly(&poly) {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            let config = CertifyConfig {
                seed,
                max_iterations: max_iters,
                smooth_bound,
                max_graeffe,
                use_transforms: !no_transforms,
                strict_primality,
                thread_count: threads as usize,
                ..CertifyConfig::default()
            };
            run_certify(&f, &config, out)
        }
        Command::Verify { poly, cert, strict } => {
            let f = match read_poly(&poly) {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            let text = match fs::read_to_string(&cert) {
                Ok(t) => t,
                Err(e) => return usage(format!("cannot read {}: {e}", cert.display())),
            };
            let doc = match parse(&text) {
                Ok(d) => d,
                Err(e) => {
                    println!("reject: parse ({e})");
                    return ExitCode::from(EXIT_REJECT);
                }
            };
            match verify(&f, &doc, strict) {
                Ok(()) => {
                    println!("accept");
                    ExitCode::from(EXIT_OK)
                }
                Err(e) => {
                    println!("reject: {} ({e})", e.check());
                    ExitCode::from(EXIT_REJECT)
                }
            }
        }
        Command::Info { poly, primes } => match read_poly(&poly) {
            Ok(f) => run_info(&f, primes),
            Err(e) => usage(e),
        },
    }
}

fn run_certify(f: &PolyZ, config: &CertifyConfig, out: Option<PathBuf>) -> ExitCode {
    match certify(f, config) {
        Err(e) => usage(e),
        Ok(Verdict::Certified { doc }) => {
            let text = serialize(&doc);
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &text) {
                        return usage(format!("cannot write {}: {e}", path.display()));
                    }
                    eprintln!(
                        "certified ({}), written to {}",
                        doc.certificate.kind(),
                        path.display()
                    );
                }
                None => print!("{text}"),
            }
            ExitCode::from(EXIT_OK)
        }
        Ok(Verdict::Reducible { witness }) => {
            println!("reducible: factor {witness}");
            ExitCode::from(EXIT_REDUCIBLE)
        }
        Ok(Verdict::Inconclusive { iterations_used }) => {
            println!("inconclusive after {iterations_used} iterations");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}

fn run_info(f: &PolyZ, primes: Option<Vec<u64>>) -> ExitCode {
    let Some(d) = f.degree() else {
        println!("zero polynomial");
        return ExitCode::from(EXIT_OK);
    };
    println!("degree: {d}");
    let content = f.content().expect("nonzero");
    println!("content: {content}");
    let g = f.primitive_part().expect("nonzero");
    println!("primitive part: {g}");
    println!("fixed divisor: {}", fixed_divisor(&g).expect("nonzero"));
    if d == 0 {
        return ExitCode::from(EXIT_OK);
    }
    let rb = compute_root_bound(&g, DEFAULT_MAX_GRAEFFE);
    println!(
        "root bound: {} (graeffe iterations: {})",
        format_rat(&rb.rho),
        rb.graeffe_iters
    );
    println!(
        "squarefree: {}",
        if g.is_squarefree() { "yes" } else { "no" }
    );

    let primes = primes.unwrap_or_else(|| vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    let mut sets = Vec::new();
    for p in primes {
        if !(2..MAX_MODULUS).contains(&p) || !is_prime_u64(p) {
            println!("p={p}: not a usable prime");
            continue;
        }
        match analyze_prime(&g, p) {
            None => println!("p={p}: skipped (divides leading coefficient or not squarefree)"),
            Some((ev, set)) => {
                println!(
                    "p={p}: factor degrees {:?}, possible degrees {:?}",
                    ev.factor_degrees(),
                    set.elements()
                );
                sets.push(set);
            }
        }
    }
    if !sets.is_empty() {
        let all = intersect(&sets).expect("same degree");
        println!("combined possible degrees: {:?}", all.elements());
        if all.is_proper_empty() {
            println!("degree analysis proves irreducibility");
        } else {
            println!("factor degree lower bound: {}", all.delta());
        }
    }
    ExitCode::from(EXIT_OK)
}
