//! Certificates of irreducibility for univariate integer polynomials.
//!
//! A certificate is a small amount of extra data that lets a simple checker
//! confirm that a polynomial in `Z[x]` (equivalently `Q[x]`, after taking the
//! primitive part) is irreducible. Three kinds of evidence are supported:
//!
//! * factor degree analysis: factorizations modulo several primes whose
//!   achievable factor degrees have no common proper value;
//! * a large prime factor witness: an evaluation point `n` beyond a certified
//!   root bound where `|f(n)| = s * p` with `p` prime and `s` small;
//! * either of the above for a Möbius-transformed image of the polynomial.
//!
//! [`engine::certify`] searches for a certificate and [`engine::verify`]
//! checks one. The checker only relies on exact integer arithmetic, modular
//! polynomial arithmetic and (optionally) Pratt primality certificates.

pub mod certio;
pub mod degan;
pub mod engine;
pub mod error;
pub mod lpfw;
pub mod moebius;
pub mod parser;
pub mod polymodp;
pub mod polyz;
pub mod primality;

pub use certio::{Certificate, CertificateDocument};
pub use engine::{certify, verify, CertifyConfig, Verdict};
pub use error::{CertParseError, Error, ParseError, VerifyError};
pub use polyz::{PolyZ, Rat};
