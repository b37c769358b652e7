//! Large prime factor witnesses.
//!
//! If every complex root of `f` has modulus at most `rho`, every nontrivial
//! factor of `f` has degree at least `delta`, and `|f(n)| = s * p` with `p`
//! prime, `|n| > 1 + rho` and `s < (|n| - rho)^delta`, then `f` is
//! irreducible: a factor `g` with `p` not dividing `g(n)` would satisfy
//! `|g(n)| >= (|n| - rho)^deg g > s`, which is impossible.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::degan::{verify_degan, DeltaBound};
use crate::error::VerifyError;
use crate::polyz::{verify_root_bound, RootBoundCert};
use crate::polyz::{PolyZ, Rat};
use crate::primality::{
    gen_pratt, is_probable_prime, small_primes, verify_pratt, PrimalityCert, DEFAULT_PRATT_BUDGET,
    MIN_VERIFY_ROUNDS, SMALL_PRIME_LIMIT,
};

/// Verifiers refuse root-bound claims needing more Gräffe iterations than
/// this; each iteration doubles the degree of the evaluated numbers.
pub const MAX_VERIFY_GRAEFFE: u32 = 16;

/// Default trial-division bound used by the search.
pub const DEFAULT_SMOOTH_BOUND: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpfwCert {
    pub root_bound: RootBoundCert,
    pub delta: DeltaBound,
    pub n: BigInt,
    pub p: BigUint,
    pub primality: Option<PrimalityCert>,
}

/// `(|n| - rho)^delta` as an exact rational.
fn cofactor_bound(n: &BigInt, rho: &Rat, delta: usize) -> Rat {
    num_traits::pow(Rat::from_integer(n.abs()) - rho, delta)
}

/// Runs every check, in order, and reports the first failure.
pub fn verify_lpfw(f: &PolyZ, cert: &LpfwCert, strict: bool) -> Result<(), VerifyError> {
    let d = f.degree().ok_or(VerifyError::NotPositiveDegree)?;
    if d < 2 {
        return Err(VerifyError::DegreeTooSmall(d));
    }

    let rb = &cert.root_bound;
    if !rb.rho.is_positive() {
        return Err(VerifyError::RootBoundNotPositive);
    }
    if rb.graeffe_iters > MAX_VERIFY_GRAEFFE {
        return Err(VerifyError::TooManyGraeffeIterations(rb.graeffe_iters));
    }
    if !verify_root_bound(f, rb) {
        return Err(VerifyError::RootBound);
    }

    if Rat::from_integer(cert.n.abs()) <= Rat::one() + &rb.rho {
        return Err(VerifyError::EvaluationPointTooSmall);
    }

    let value = f.eval_int(&cert.n).abs();
    if value.is_zero() {
        return Err(VerifyError::ZeroValue);
    }
    if cert.p < BigUint::from(2u32) {
        return Err(VerifyError::PrimeTooSmall);
    }
    let p = BigInt::from_biguint(Sign::Plus, cert.p.clone());
    let (s, r) = value.div_rem(&p);
    if !r.is_zero() {
        return Err(VerifyError::NotADivisor);
    }

    if Rat::from_integer(s) >= cofactor_bound(&cert.n, &rb.rho, cert.delta.value) {
        return Err(VerifyError::CofactorTooLarge);
    }

    verify_delta(f, &cert.delta)?;

    match (&cert.primality, strict) {
        (None, true) => Err(VerifyError::PrimalityCertificateRequired),
        (Some(pc), _) => verify_pratt(&cert.p, pc, strict),
        (None, false) => {
            if is_probable_prime(&cert.p, MIN_VERIFY_ROUNDS) {
                Ok(())
            } else {
                Err(VerifyError::ProbablePrimeFailed(p))
            }
        }
    }
}

fn verify_delta(f: &PolyZ, delta: &DeltaBound) -> Result<(), VerifyError> {
    match delta.value {
        0 => Err(VerifyError::DeltaZero),
        1 if !delta.evidence.is_empty() => Err(VerifyError::DeltaEvidenceUnexpected),
        1 => Ok(()),
        claimed => {
            let certified = verify_degan(f, &delta.evidence)?.delta();
            if certified >= claimed {
                Ok(())
            } else {
                Err(VerifyError::DeltaNotCertified {
                    claimed: claimed as u64,
                    certified: certified as u64,
                })
            }
        }
    }
}

/// A successful evaluation: `|f(n)| = s * p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: BigInt,
    pub p: BigUint,
    pub s: BigUint,
    /// Always present in strict mode; otherwise filled in by
    /// [`SearchState::certificate`].
    pub primality: Option<PrimalityCert>,
}

/// Incremental search over evaluation points on both sides of the root
/// bound, remembering for each factor degree lower bound the first witness
/// that works with it.
#[derive(Clone, Debug)]
pub struct SearchState {
    f: PolyZ,
    root_bound: RootBoundCert,
    strict: bool,
    pub n_pos: BigInt,
    pub n_neg: BigInt,
    pos_value: Option<BigInt>,
    neg_value: Option<BigInt>,
    /// Witnesses keyed by every `delta` they satisfy.
    pub found: BTreeMap<usize, Witness>,
    primes: Vec<u64>,
    primes_bound: u64,
    steps: u64,
}

impl SearchState {
    /// Starts at `floor(1 + rho) + 1` and its negative. When `strict` is
    /// set, witnesses are kept only if their prime gets a Pratt certificate.
    pub fn new(f: &PolyZ, root_bound: RootBoundCert, strict: bool) -> Self {
        let start = (Rat::one() + &root_bound.rho).floor().to_integer() + 1;
        SearchState {
            f: f.clone(),
            root_bound,
            strict,
            n_neg: -&start,
            n_pos: start,
            pos_value: None,
            neg_value: None,
            found: BTreeMap::new(),
            primes: Vec::new(),
            primes_bound: 0,
            steps: 0,
        }
    }

    pub fn root_bound(&self) -> &RootBoundCert {
        &self.root_bound
    }

    pub fn polynomial(&self) -> &PolyZ {
        &self.f
    }

    /// Number of evaluation points consumed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// The recorded witness for `delta.value`, packaged as a certificate.
    pub fn certificate(&self, delta: &DeltaBound) -> Option<LpfwCert> {
        let w = self.found.get(&delta.value)?;
        Some(LpfwCert {
            root_bound: self.root_bound.clone(),
            delta: delta.clone(),
            n: w.n.clone(),
            p: w.p.clone(),
            primality: match &w.primality {
                Some(c) => Some(c.clone()),
                None => primality_for(&w.p, self.strict),
            },
        })
    }

    fn max_delta(&self) -> usize {
        self.f.degree().unwrap_or(1).saturating_sub(1).max(1)
    }

    /// Consumes one evaluation point. Returns true if a new witness was
    /// recorded.
    fn step(&mut self, smooth_bound: u64) -> bool {
        if self.primes_bound != smooth_bound {
            self.primes = small_primes(smooth_bound);
            self.primes_bound = smooth_bound;
        }
        let pos = self
            .pos_value
            .get_or_insert_with(|| self.f.eval_int(&self.n_pos).abs())
            .clone();
        let neg = self
            .neg_value
            .get_or_insert_with(|| self.f.eval_int(&self.n_neg).abs())
            .clone();
        let (n, value) = if pos <= neg {
            self.pos_value = None;
            let n = self.n_pos.clone();
            self.n_pos += 1;
            (n, pos)
        } else {
            self.neg_value = None;
            let n = self.n_neg.clone();
            self.n_neg -= 1;
            (n, neg)
        };
        self.steps += 1;
        match self.examine(&n, value) {
            Some(w) => self.record(w),
            None => false,
        }
    }

    fn examine(&self, n: &BigInt, value: BigInt) -> Option<Witness> {
        let mut rest = value.to_biguint()?;
        if rest.is_zero() {
            return None;
        }
        let rho = &self.root_bound.rho;
        // s must stay below (|n| - rho)^max_delta = num / den.
        let limit = cofactor_bound(n, rho, self.max_delta());
        let (num, den) = (limit.numer().to_biguint()?, limit.denom().to_biguint()?);
        let too_big = |s: &BigUint| s * &den >= num;

        let mut smooth = BigUint::one();
        let mut largest = 1u64;
        for &q in &self.primes {
            let mut hit = false;
            while (&rest % q).is_zero() {
                rest /= q;
                smooth *= q;
                hit = true;
            }
            if hit {
                largest = q;
                if too_big(&(&smooth / largest)) {
                    return None;
                }
            }
            if rest.is_one() {
                break;
            }
        }

        let (p, s) = if rest.is_one() {
            if largest == 1 {
                return None;
            }
            (BigUint::from(largest), smooth / largest)
        } else {
            if too_big(&smooth) || !is_probable_prime(&rest, MIN_VERIFY_ROUNDS) {
                return None;
            }
            (rest, smooth)
        };
        // Proofs can be expensive and most witnesses are never used, so
        // outside strict mode they are built on demand.
        let primality = if self.strict {
            Some(primality_for(&p, true)?)
        } else {
            None
        };
        Some(Witness {
            n: n.clone(),
            p,
            s,
            primality,
        })
    }

    fn record(&mut self, w: Witness) -> bool {
        let s = Rat::from_integer(BigInt::from_biguint(Sign::Plus, w.s.clone()));
        let mut added = false;
        for delta in 1..=self.max_delta() {
            if self.found.contains_key(&delta) {
                continue;
            }
            if s < cofactor_bound(&w.n, &self.root_bound.rho, delta) {
                self.found.insert(delta, w.clone());
                added = true;
            }
        }
        added
    }
}

/// A primality certificate for a prime found by the search: trial division
/// for small primes, Pratt when `p - 1` factors within budget, otherwise a
/// probable-prime claim (refused in strict mode).
pub fn primality_for(p: &BigUint, strict: bool) -> Option<PrimalityCert> {
    if p.to_u64().is_some_and(|v| v < SMALL_PRIME_LIMIT) {
        return Some(PrimalityCert::SmallPrime);
    }
    if let Some(c) = gen_pratt(p, DEFAULT_PRATT_BUDGET) {
        return Some(c);
    }
    (!strict).then_some(PrimalityCert::ProbablePrime {
        rounds: MIN_VERIFY_ROUNDS,
    })
}

/// Runs up to `iters` search steps, stopping early once a witness usable
/// with `delta` is known, and returns that certificate.
pub fn search_lpfw(
    state: &mut SearchState,
    delta: &DeltaBound,
    smooth_bound: u64,
    iters: usize,
) -> Option<LpfwCert> {
    for _ in 0..iters {
        if state.found.contains_key(&delta.value) {
            break;
        }
        state.step(smooth_bound);
    }
    state.certificate(delta)
}
