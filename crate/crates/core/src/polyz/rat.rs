use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Exact rational in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Canonical text form `num/den`, always with an explicit denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the canonical `num/den` form. Returns `None` for anything that
/// [`format_rat`] would not produce: missing denominator, zero or negative
/// denominator, a common factor, signs or leading zeros in the wrong place.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let (n, d) = s.split_once('/')?;
    let num = parse_canonical_int(n)?;
    let den = parse_canonical_int(d)?;
    if !den.is_positive() || !num.gcd(&den).is_one() {
        return None;
    }
    Some(Rat::new_raw(num, den))
}

/// Decimal integer with optional leading `-`, no leading zeros and no `-0`.
pub fn parse_canonical_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s.starts_with('-') && digits == "0" {
        return None;
    }
    s.parse().ok()
}
