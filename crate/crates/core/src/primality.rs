//! Probable-prime testing and Lucas-Pratt primality certificates.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::VerifyError;

/// Primes below this are self-certifying (checked by trial division).
pub const SMALL_PRIME_LIMIT: u64 = 1 << 20;

/// Rounds used whenever a probable-prime test stands in for a proof.
pub const MIN_VERIFY_ROUNDS: u32 = 40;

/// Default effort for [`gen_pratt`], in modular multiplications spent on
/// Pollard rho.
pub const DEFAULT_PRATT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimalityCert {
    /// `n < 2^20`, confirmed by trial division.
    SmallPrime,
    /// Witness `w` of order `n - 1` together with the complete
    /// factorization `n - 1 = prod q^e` and certificates for each `q`.
    LucasPratt {
        witness: BigUint,
        factors: Vec<PrattFactor>,
    },
    /// Accepted only by non-strict verification, which reruns a
    /// Miller-Rabin test with at least [`MIN_VERIFY_ROUNDS`] rounds.
    ProbablePrime { rounds: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrattFactor {
    pub q: BigUint,
    pub e: u32,
    pub cert: PrimalityCert,
}

/// All primes below `limit`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; limit];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < limit {
        if sieve[i] {
            let mut j = i * i;
            while j < limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is)| is.then_some(k as u64))
        .collect()
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| small_primes(1 << 16))
}

/// Deterministic trial division for `n < 2^32`, the largest size it is
/// used for.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in trial_primes() {
        if q * q > n {
            return true;
        }
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    // Beyond 2^32 fall back to the deterministic Miller-Rabin bases.
    is_probable_prime(&BigUint::from(n), 0)
}

/// Bases 2..41 give a deterministic answer below this bound.
fn deterministic_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn strong_probable_prime(n: &BigUint, n1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if &x == n1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller-Rabin with a fixed base set (deterministic below `3.3e24`) and,
/// for larger inputs, base 2 plus `rounds` random bases drawn from `rng`.
pub fn is_probable_prime_with(n: &BigUint, rounds: u32, rng: &mut ChaCha8Rng) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &q in &trial_primes()[..64] {
            if small == q {
                return true;
            }
            if small % q == 0 {
                return false;
            }
        }
    } else {
        for &q in &trial_primes()[..64] {
            if (n % q).is_zero() {
                return false;
            }
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap();
    let d = &n1 >> s;
    if n < deterministic_limit() {
        return DETERMINISTIC_BASES
            .iter()
            .all(|&a| strong_probable_prime(n, &n1, &d, s, &BigUint::from(a)));
    }
    if !strong_probable_prime(n, &n1, &d, s, &BigUint::from(2u32)) {
        return false;
    }
    let two = BigUint::from(2u32);
    (0..rounds).all(|_| {
        let a = rng.gen_biguint_range(&two, &n1);
        strong_probable_prime(n, &n1, &d, s, &a)
    })
}

/// [`is_probable_prime_with`] using a generator seeded from `n`, so the
/// answer is reproducible.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let seed = n
        .iter_u64_digits()
        .fold(0x2545_F491_4F6C_DD1D_u64, |h, limb| {
            (h ^ limb).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    is_probable_prime_with(n, rounds, &mut rng)
}

/// Brent's variant of Pollard rho. Spends at most `*budget` modular
/// multiplications; returns a nontrivial factor of the composite `n`.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let m = 128u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                *budget = budget.checked_sub(2 * steps)?;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                *budget = budget.checked_sub(1)?;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Complete prime factorization by trial division and Pollard rho, sorted
/// by prime. `None` if the budget runs out.
pub fn factorize(n: &BigUint, budget: &mut u64) -> Option<Vec<(BigUint, u32)>> {
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return None;
    }
    for &q in trial_primes().iter().take(1000) {
        let qb = BigUint::from(q);
        let mut e = 0;
        while (&n % q).is_zero() {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((qb, e));
        }
        if n.is_one() {
            return Some(out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m, 20) {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_brent(&m, budget)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    Some(out)
}

/// Builds a primality certificate for the (probable) prime `n`. Primes
/// below [`SMALL_PRIME_LIMIT`] are self-certifying; larger ones get a
/// Lucas-Pratt certificate with the least witness. `None` when factoring
/// `n - 1` exceeds `budget` or no witness exists.
pub fn gen_pratt(n: &BigUint, budget: u64) -> Option<PrimalityCert> {
    let mut budget = budget;
    gen_pratt_inner(n, &mut budget)
}

/// Like [`gen_pratt`] but always produces a Lucas-Pratt node at the top
/// level, even below [`SMALL_PRIME_LIMIT`]. `None` for `n < 3`.
pub fn gen_lucas_pratt(n: &BigUint, budget: u64) -> Option<PrimalityCert> {
    if n < &BigUint::from(3u32) {
        return None;
    }
    let mut budget = budget;
    lucas_pratt(n, &mut budget)
}

fn gen_pratt_inner(n: &BigUint, budget: &mut u64) -> Option<PrimalityCert> {
    if n < &BigUint::from(SMALL_PRIME_LIMIT) {
        return Some(PrimalityCert::SmallPrime);
    }
    lucas_pratt(n, budget)
}

fn lucas_pratt(n: &BigUint, budget: &mut u64) -> Option<PrimalityCert> {
    let n1 = n - 1u32;
    let fac = factorize(&n1, budget)?;
    let exps: Vec<BigUint> = fac.iter().map(|(q, _)| &n1 / q).collect();
    let mut witness = None;
    for w in 2u32..10_000 {
        let w = BigUint::from(w);
        if !w.modpow(&n1, n).is_one() {
            return None;
        }
        if exps.iter().all(|e| !w.modpow(e, n).is_one()) {
            witness = Some(w);
            break;
        }
    }
    let witness = witness?;
    let mut factors = Vec::with_capacity(fac.len());
    for (q, e) in fac {
        let cert = gen_pratt_inner(&q, budget)?;
        factors.push(PrattFactor { q, e, cert });
    }
    Some(PrimalityCert::LucasPratt { witness, factors })
}

/// Checks a primality certificate for `n`. Strict mode refuses
/// [`PrimalityCert::ProbablePrime`] anywhere in the tree.
pub fn verify_pratt(n: &BigUint, cert: &PrimalityCert, strict: bool) -> Result<(), VerifyError> {
    let as_int = || n.clone().into();
    match cert {
        PrimalityCert::SmallPrime => {
            let small = n
                .to_u64()
                .filter(|&v| v < SMALL_PRIME_LIMIT)
                .ok_or_else(|| VerifyError::SmallPrimeOutOfRange(as_int()))?;
            if !is_prime_u64(small) {
                return Err(VerifyError::SmallPrimeComposite(as_int()));
            }
            Ok(())
        }
        PrimalityCert::LucasPratt { witness, factors } => {
            if factors.is_empty() {
                return Err(VerifyError::EmptyFactorList);
            }
            if n < &BigUint::from(3u32) {
                return Err(VerifyError::FactorizationMismatch(as_int()));
            }
            let n1 = n - 1u32;
            let mut product = BigUint::one();
            for f in factors {
                if f.e == 0 {
                    return Err(VerifyError::ZeroExponent);
                }
                product *= num_traits::pow(f.q.clone(), f.e as usize);
                if product > n1 {
                    return Err(VerifyError::FactorizationMismatch(as_int()));
                }
            }
            if product != n1 {
                return Err(VerifyError::FactorizationMismatch(as_int()));
            }
            if !witness.modpow(&n1, n).is_one() {
                return Err(VerifyError::FermatCondition(as_int()));
            }
            for f in factors {
                if f.q < BigUint::from(2u32) || witness.modpow(&(&n1 / &f.q), n).is_one() {
                    return Err(VerifyError::OrderCondition {
                        n: as_int(),
                        q: f.q.clone().into(),
                    });
                }
            }
            for f in factors {
                verify_pratt(&f.q, &f.cert, strict)?;
            }
            Ok(())
        }
        PrimalityCert::ProbablePrime { rounds } => {
            if strict {
                return Err(VerifyError::ProbablePrimeInStrictMode);
            }
            if !is_probable_prime(n, (*rounds).max(MIN_VERIFY_ROUNDS)) {
                return Err(VerifyError::ProbablePrimeFailed(as_int()));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn probable_prime_examples() {
        assert!(is_probable_prime(&b(368089), 40));
        assert!(!is_probable_prime(&b(1), 40));
        assert!(!is_probable_prime(&b(0), 40));
        assert!(is_probable_prime(&b(81382739), 40));
        assert!(is_probable_prime(&b(2), 40));
        // Carmichael number
        assert!(!is_probable_prime(&b(561), 40));
        // 2^127 - 1 is prime; 2^128 + 1 is not.
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_probable_prime(&m127, 40));
        assert!(!is_probable_prime(&((BigUint::one() << 128) + 1u32), 40));
    }

    #[test]
    fn probable_prime_matches_sieve_below_one_million() {
        let primes = small_primes(1_000_000);
        let mut it = primes.iter().peekable();
        for n in 0..1_000_000u64 {
            let is = it.peek().is_some_and(|&&q| q == n);
            if is {
                it.next();
            }
            assert_eq!(is_probable_prime(&b(n), 2), is, "n = {n}");
        }
    }

    #[test]
    fn pratt_examples() {
        let c13 = gen_pratt(&b(13), DEFAULT_PRATT_BUDGET).unwrap();
        assert_eq!(c13, PrimalityCert::SmallPrime);

        // Below the threshold everything is self-certifying, so build the
        // Lucas-Pratt form of 13 by hand: 2^12 = 1, 2^6 = 12, 2^4 = 3 (mod 13).
        let lp13 = PrimalityCert::LucasPratt {
            witness: b(2),
            factors: vec![
                PrattFactor {
                    q: b(2),
                    e: 2,
                    cert: PrimalityCert::SmallPrime,
                },
                PrattFactor {
                    q: b(3),
                    e: 1,
                    cert: PrimalityCert::SmallPrime,
                },
            ],
        };
        assert_eq!(b(2).modpow(&b(6), &b(13)), b(12));
        assert_eq!(b(2).modpow(&b(4), &b(13)), b(3));
        assert!(verify_pratt(&b(13), &lp13, true).is_ok());

        assert_eq!(gen_pratt(&b(65537), 10), Some(PrimalityCert::SmallPrime));

        let big = b(2367715751029);
        let cert = gen_pratt(&big, DEFAULT_PRATT_BUDGET).unwrap();
        assert!(matches!(cert, PrimalityCert::LucasPratt { .. }));
        assert!(verify_pratt(&big, &cert, true).is_ok());
    }

    #[test]
    fn pratt_rejections() {
        let bad = PrimalityCert::LucasPratt {
            witness: b(2),
            factors: vec![
                PrattFactor {
                    q: b(2),
                    e: 1,
                    cert: PrimalityCert::SmallPrime,
                },
                PrattFactor {
                    q: b(7),
                    e: 1,
                    cert: PrimalityCert::SmallPrime,
                },
            ],
        };
        assert_eq!(b(2).modpow(&b(14), &b(15)), b(4));
        assert_eq!(
            verify_pratt(&b(15), &bad, true),
            Err(VerifyError::FermatCondition(15.into()))
        );

        let pp = PrimalityCert::ProbablePrime { rounds: 40 };
        assert_eq!(
            verify_pratt(&b(368089), &pp, true),
            Err(VerifyError::ProbablePrimeInStrictMode)
        );
        assert!(verify_pratt(&b(368089), &pp, false).is_ok());
        assert!(verify_pratt(&b(368091), &pp, false).is_err());

        assert!(verify_pratt(&b(1 << 21), &PrimalityCert::SmallPrime, false).is_err());
        assert!(verify_pratt(&b(91), &PrimalityCert::SmallPrime, false).is_err());
        assert!(verify_pratt(&b(1), &PrimalityCert::SmallPrime, false).is_err());
        let empty = PrimalityCert::LucasPratt {
            witness: b(2),
            factors: vec![],
        };
        assert_eq!(
            verify_pratt(&b(13), &empty, true),
            Err(VerifyError::EmptyFactorList)
        );
    }

    #[test]
    fn factorize_products() {
        let mut budget = DEFAULT_PRATT_BUDGET;
        let n = b(1_000_003) * b(999_983) * b(8);
        assert_eq!(
            factorize(&n, &mut budget).unwrap(),
            vec![(b(2), 3), (b(999_983), 1), (b(1_000_003), 1)]
        );
        let p1: BigUint = "1000000000039".parse().unwrap();
        let p2: BigUint = "1000000000061".parse().unwrap();
        let mut budget = DEFAULT_PRATT_BUDGET;
        let f = factorize(&(&p1 * &p2), &mut budget).unwrap();
        assert_eq!(f, vec![(p1, 1), (p2, 1)]);
    }

    #[test]
    fn pratt_round_trip_on_random_large_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut count = 0;
        while count < 100 {
            let n = b(rng.gen_range(SMALL_PRIME_LIMIT..1_000_000_000_000));
            if !is_probable_prime(&n, 40) {
                continue;
            }
            count += 1;
            let cert = gen_pratt(&n, DEFAULT_PRATT_BUDGET).expect("pratt generation");
            assert!(verify_pratt(&n, &cert, true).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn fuzzed_certificates_for_composites_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut count = 0;
        while count < 100 {
            let c = rng.gen_range(4..1_000_000_000_000u64);
            if is_probable_prime(&b(c), 40) {
                continue;
            }
            count += 1;
            let n = b(c);
            // Honest factorization of c - 1 with a random witness.
            let mut budget = DEFAULT_PRATT_BUDGET;
            let fac = factorize(&b(c - 1), &mut budget).unwrap();
            let factors: Vec<PrattFactor> = fac
                .into_iter()
                .map(|(q, e)| PrattFactor {
                    cert: gen_pratt(&q, DEFAULT_PRATT_BUDGET).unwrap(),
                    q,
                    e,
                })
                .collect();
            for _ in 0..5 {
                let w = b(rng.gen_range(2..c));
                let cert = PrimalityCert::LucasPratt {
                    witness: w,
                    factors: factors.clone(),
                };
                assert!(verify_pratt(&n, &cert, true).is_err());
                assert!(verify_pratt(&n, &cert, false).is_err());
            }
            assert!(verify_pratt(&n, &PrimalityCert::SmallPrime, false).is_err());
            assert!(verify_pratt(&n, &PrimalityCert::ProbablePrime { rounds: 40 }, false).is_err());
        }
    }
}
