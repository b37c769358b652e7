//! Root bounds certified by positivity of `f*`, optionally after iterated
//! Gräffe transforms.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::{PolyZ, Rat};

pub const DEFAULT_MAX_GRAEFFE: u32 = 6;

/// Root bounds produced by [`compute_root_bound`] are dyadic with
/// denominator at most `2^ROOT_BOUND_DENOMINATOR_BITS`.
pub const ROOT_BOUND_DENOMINATOR_BITS: u32 = 10;

/// A claimed root bound `rho` together with the number of Gräffe
/// iterations needed to certify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBoundCert {
    pub rho: Rat,
    pub graeffe_iters: u32,
}

/// The Gräffe transform: `g` with `g(x^2) = ±f(x) f(-x)`, normalized to a
/// positive leading coefficient. The roots of `g` are the squares of the
/// roots of `f`.
pub fn graeffe(f: &PolyZ) -> PolyZ {
    let Some(d) = f.degree() else {
        return PolyZ::zero();
    };
    // f(x) = E(x^2) + x O(x^2), so f(x) f(-x) = E(x^2)^2 - x^2 O(x^2)^2.
    let even = PolyZ::new(f.coeffs().iter().step_by(2).cloned().collect());
    let odd = PolyZ::new(f.coeffs().iter().skip(1).step_by(2).cloned().collect());
    let e2 = &even * &even;
    let mut o2 = (&odd * &odd).into_coeffs();
    o2.insert(0, BigInt::zero());
    let g = &e2 - &PolyZ::new(o2);
    if d % 2 == 1 {
        -&g
    } else {
        g
    }
}

/// `|a_d| x^d - sum_{j<d} |a_j| x^j`
pub fn fstar(f: &PolyZ) -> PolyZ {
    let Some(d) = f.degree() else {
        return PolyZ::zero();
    };
    PolyZ::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| if j == d { c.abs() } else { -c.abs() })
            .collect(),
    )
}

fn iterate_graeffe(f: &PolyZ, k: u32) -> PolyZ {
    (0..k).fold(f.clone(), |g, _| graeffe(&g))
}

/// `f*(u/v) > 0` for `v > 0`.
fn fstar_positive_at(fs: &PolyZ, u: &BigInt, v: &BigInt) -> bool {
    fs.eval_homogeneous(u, v).is_positive()
}

/// True iff `f_k*(rho^(2^k)) > 0` where `f_k` is `f` after `k` Gräffe
/// transforms. A true result proves every complex root of `f` has modulus
/// at most `rho`.
pub fn verify_root_bound(f: &PolyZ, cert: &RootBoundCert) -> bool {
    if !cert.rho.is_positive() || f.degree().is_none_or(|d| d == 0) {
        return false;
    }
    let fk = iterate_graeffe(f, cert.graeffe_iters);
    let e = 1usize << cert.graeffe_iters;
    let u = num_traits::pow(cert.rho.numer().clone(), e);
    let v = num_traits::pow(cert.rho.denom().clone(), e);
    fstar_positive_at(&fstar(&fk), &u, &v)
}

/// `log2 |x|` for nonzero `x`, accurate to double precision.
fn log2_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x.abs() >> shift).to_u64().expect("at most 64 bits");
    (top as f64).log2() + shift as f64
}

/// Floating-point estimate of the positive root of `f*`, returned as
/// `log2` of the root. `None` when `f*` has no negative coefficient.
fn fstar_root_log2(fs: &PolyZ) -> Option<f64> {
    let d = fs.degree()?;
    let lead = log2_abs(fs.leading_coeff()?);
    let low: Vec<(f64, f64)> = fs.coeffs()[..d]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (log2_abs(c) - lead, j as f64 - d as f64))
        .collect();
    if low.is_empty() {
        return None;
    }
    // f*(2^t) > 0 iff sum 2^(l_j + (j - d) t) < 1; the sum decreases in t.
    let log_sum = |t: f64| {
        let e: Vec<f64> = low.iter().map(|(l, j)| l + j * t).collect();
        let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + e.iter().map(|x| (x - m).exp2()).sum::<f64>().log2()
    };
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while log_sum(hi) >= 0.0 {
        hi *= 2.0;
    }
    while log_sum(lo) < 0.0 {
        lo *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_sum(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Smallest `m > 0` accepted by the monotone predicate, searched around
/// `guess` with exponential steps and finished by bisection.
fn smallest_accepted(accepts: impl Fn(&BigInt) -> bool, guess: BigInt) -> BigInt {
    let one = BigInt::one();
    let mut step = BigInt::one();
    let (mut lo, mut hi);
    let m = guess.max(one.clone());
    if accepts(&m) {
        hi = m;
        loop {
            let cand = &hi - &step;
            if !cand.is_positive() {
                lo = BigInt::zero();
                break;
            }
            if accepts(&cand) {
                hi = cand;
                step <<= 1;
            } else {
                lo = cand;
                break;
            }
        }
    } else {
        lo = m;
        loop {
            let cand = &lo + &step;
            if accepts(&cand) {
                hi = cand;
                break;
            }
            lo = cand;
            step <<= 1;
        }
    }
    // Invariant: accepts(hi), !accepts(lo) or lo = 0.
    while &hi - &lo > one {
        let mid: BigInt = (&lo + &hi) >> 1;
        if accepts(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Finds a small certified root bound. For each `k` up to `max_iters` the
/// smallest dyadic `rho` (denominator `2^10`) accepted after `k` Gräffe
/// iterations is located: a floating-point estimate, then exact checks
/// around it. The smallest such `rho` wins, ties going to the smaller `k`.
pub fn compute_root_bound(f: &PolyZ, max_iters: u32) -> RootBoundCert {
    let d = f.degree().expect("root bound of the zero polynomial");
    assert!(d >= 1, "root bound of a constant polynomial");
    let scale = BigInt::one() << ROOT_BOUND_DENOMINATOR_BITS;

    let mut best: Option<(BigInt, u32)> = None;
    let mut fk = f.clone();
    for k in 0..=max_iters {
        if k > 0 {
            fk = graeffe(&fk);
        }
        let fs = fstar(&fk);
        let e = 1usize << k;
        let den = num_traits::pow(scale.clone(), e);
        let accepts = |m: &BigInt| fstar_positive_at(&fs, &num_traits::pow(m.clone(), e), &den);
        let guess = fstar_root_log2(&fs)
            .map(|t| {
                (t / e as f64 + ROOT_BOUND_DENOMINATOR_BITS as f64)
                    .exp2()
                    .ceil()
            })
            .and_then(BigInt::from_f64)
            .unwrap_or_else(BigInt::one);
        let m = smallest_accepted(accepts, guess);
        if best.as_ref().is_none_or(|(b, _)| m < *b) {
            best = Some((m, k));
        }
    }
    let (m, k) = best.unwrap();
    RootBoundCert {
        rho: Rat::new(m, scale),
        graeffe_iters: k,
    }
}
