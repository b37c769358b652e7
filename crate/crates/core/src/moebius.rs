//! Möbius transforms `mu_M(f) = sum c_j (ax+b)^j (cx+d)^(deg f - j)`.
//!
//! For a non-singular integer matrix `M` with `deg mu_M(f) = deg f`, the
//! transform maps factorizations of `f` to factorizations of `mu_M(f)` and
//! back (through the adjugate), so irreducibility can be certified for any
//! such image instead of `f` itself.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, VerifyError};
use crate::polyz::{fixed_divisor, PolyZ};
use crate::primality::small_primes;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MoebiusMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        MoebiusMatrix { a, b, c, d }
    }

    pub fn from_i64s(a: i64, b: i64, c: i64, d: i64) -> Self {
        MoebiusMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        MoebiusMatrix::from_i64s(1, 0, 0, 1)
    }

    /// `x -> 1/x`
    pub fn reversal() -> Self {
        MoebiusMatrix::from_i64s(0, 1, 1, 0)
    }

    /// `x -> (u/v) x`
    pub fn scaling(u: BigInt, v: BigInt) -> Self {
        MoebiusMatrix::new(u, BigInt::zero(), BigInt::zero(), v)
    }

    /// `x -> u / (v x)`
    pub fn reverse_scaling(u: BigInt, v: BigInt) -> Self {
        MoebiusMatrix::new(BigInt::zero(), u, v, BigInt::zero())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }

    pub fn is_identity(&self) -> bool {
        *self == MoebiusMatrix::identity()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for MoebiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// The classical adjoint `(d -b; -c a)`.
pub fn pseudo_inverse(m: &MoebiusMatrix) -> MoebiusMatrix {
    MoebiusMatrix::new(m.d.clone(), -&m.b, -&m.c, m.a.clone())
}

/// `mu_M(f)`, exactly. The degree drops below `deg f` exactly when
/// `c != 0` and `f(a/c) = 0`.
pub fn apply(m: &MoebiusMatrix, f: &PolyZ) -> Result<PolyZ, Error> {
    if m.is_degenerate() {
        return Err(Error::DegenerateMatrix);
    }
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    let cs = f.coeffs();
    let zero = BigInt::zero();

    if m.b.is_zero() && m.c.is_zero() {
        // c_j a^j d^(n-j) x^j
        let mut out = vec![zero; n + 1];
        for (j, cj) in cs.iter().enumerate() {
            out[j] = cj * num_traits::pow(m.a.clone(), j) * num_traits::pow(m.d.clone(), n - j);
        }
        return Ok(PolyZ::new(out));
    }
    if m.a.is_zero() && m.d.is_zero() {
        // c_j b^j c^(n-j) x^(n-j)
        let mut out = vec![zero; n + 1];
        for (j, cj) in cs.iter().enumerate() {
            out[n - j] = cj * num_traits::pow(m.b.clone(), j) * num_traits::pow(m.c.clone(), n - j);
        }
        return Ok(PolyZ::new(out));
    }

    let num = PolyZ::new(vec![m.b.clone(), m.a.clone()]);
    let den = PolyZ::new(vec![m.d.clone(), m.c.clone()]);
    let mut den_pows = vec![PolyZ::constant(BigInt::one())];
    for k in 1..=n {
        den_pows.push(&den_pows[k - 1] * &den);
    }
    let mut acc = PolyZ::zero();
    let mut num_pow = PolyZ::constant(BigInt::one());
    for (j, cj) in cs.iter().enumerate() {
        if !cj.is_zero() {
            acc = &acc + &(&num_pow * &den_pows[n - j]).scale(cj);
        }
        num_pow = &num_pow * &num;
    }
    Ok(acc)
}

/// `0, 1, -1, 2, -2, ...`
fn sample_points() -> impl Iterator<Item = BigInt> {
    (0i64..)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .map(BigInt::from)
}

/// Checks that `g` is the primitive part of `mu_M(f)` without expanding
/// the transform: `g(t) * v_0 = g(t_0) * v_t` at `deg f + 1` sample points,
/// where `v_t = (ct+d)^n f((at+b)/(ct+d))` is evaluated homogeneously.
pub fn verify_transform(f: &PolyZ, m: &MoebiusMatrix, g: &PolyZ) -> Result<(), VerifyError> {
    if m.is_degenerate() {
        return Err(VerifyError::DegenerateMatrix);
    }
    let n = f.degree().ok_or(VerifyError::NotPositiveDegree)?;
    let gd = g.degree().unwrap_or(0);
    if gd != n || g.is_zero() {
        return Err(VerifyError::ImageDegree {
            expected: n,
            got: gd,
        });
    }
    if !g.is_primitive() {
        return Err(VerifyError::ImageNotPrimitive);
    }

    let needed = n + 1;
    let mut points: Vec<(BigInt, BigInt)> = Vec::with_capacity(needed);
    for t in sample_points().take(10 * needed) {
        let w = &m.c * &t + &m.d;
        if w.is_zero() {
            continue;
        }
        let u = &m.a * &t + &m.b;
        let v = f.eval_homogeneous(&u, &w);
        let gt = g.eval_int(&t);
        if v.is_zero() || gt.is_zero() {
            continue;
        }
        points.push((gt, v));
        if points.len() == needed {
            break;
        }
    }
    if points.len() < needed {
        return Err(VerifyError::TooFewPoints);
    }
    // Proportional at n + 1 points forces mu_M(f) = lambda g identically; as
    // g is primitive with positive leading coefficient it is then the
    // primitive part whatever the sign of lambda.
    let (g0, v0) = &points[0];
    if points[1..].iter().any(|(gt, vt)| gt * v0 != g0 * vt) {
        return Err(VerifyError::RatioMismatch);
    }
    Ok(())
}

/// Primitive image of `f` under `m`, or `None` when the degree drops.
pub fn image(m: &MoebiusMatrix, f: &PolyZ) -> Option<PolyZ> {
    let g = apply(m, f).ok()?;
    if g.degree() != f.degree() {
        return None;
    }
    g.primitive_part().ok()
}

fn multiplicity(q: &BigInt, n: &BigInt) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let mut n = n.abs();
    let mut k = 0;
    while (&n % q).is_zero() {
        n /= q;
        k += 1;
    }
    k
}

fn reduced_scaling(u: BigInt, v: BigInt) -> MoebiusMatrix {
    let g = u.gcd(&v);
    MoebiusMatrix::scaling(u / &g, v / g)
}

/// `u/v` with `1 <= u, v <= 5` coprime and not both 1, ordered by
/// `max(u, v)`, then `u`.
fn simple_rationals() -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (1..=5)
        .flat_map(|u| (1..=5).map(move |v| (u, v)))
        .filter(|&(u, v)| (u, v) != (1, 1) && u.gcd(&v) == 1)
        .collect();
    out.sort_by_key(|&(u, v)| (u.max(v), u, v));
    out
}

/// Diagonal and anti-diagonal transforms worth trying for `f`, in order:
///
/// 1. the identity;
/// 2. the reversal `x -> 1/x` when `f(0) != 0`;
/// 3. for each prime `q` dividing the fixed divisor, the single scaling
///    `x -> q^j x` or `x -> x / q^j` (`1 <= j <=` multiplicity of `q` in
///    `f(0)`) whose image has the smallest fixed divisor, if it is smaller
///    than that of `f`;
/// 4. the product of those per-prime scalings, alone and multiplied by
///    each simple rational, whenever it lowers the fixed divisor;
/// 5. scalings and reverse scalings by simple rationals `u/v`, `u, v <= 5`.
///
/// Duplicates are dropped and the list is cut at `max_candidates`.
pub fn candidate_transforms(f: &PolyZ, max_candidates: usize) -> Vec<MoebiusMatrix> {
    let mut out: Vec<MoebiusMatrix> = Vec::new();
    let push = |m: MoebiusMatrix, out: &mut Vec<MoebiusMatrix>| {
        if !out.contains(&m) {
            out.push(m);
        }
    };
    push(MoebiusMatrix::identity(), &mut out);
    let Some(deg) = f.degree().filter(|&d| d >= 1) else {
        return out;
    };
    let f0 = f.coeff(0);
    if !f0.is_zero() {
        push(MoebiusMatrix::reversal(), &mut out);
    }

    let fd_of = |m: &MoebiusMatrix| image(m, f).and_then(|g| fixed_divisor(&g).ok());
    let base_fd = fixed_divisor(f).unwrap_or_else(|_| BigInt::one());
    // The fixed divisor of a primitive polynomial divides deg!, so its
    // prime factors do not exceed the degree.
    let fd_primes: Vec<BigInt> = small_primes(deg as u64 + 1)
        .into_iter()
        .map(BigInt::from)
        .filter(|q| (&base_fd % q).is_zero())
        .collect();

    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut per_prime = 0;
    for q in &fd_primes {
        let k = multiplicity(q, &f0);
        let mut best: Option<(BigInt, MoebiusMatrix, bool, u32)> = None;
        for j in 1..=k {
            let qj = num_traits::pow(q.clone(), j as usize);
            for (up, m) in [
                (true, MoebiusMatrix::scaling(qj.clone(), BigInt::one())),
                (false, MoebiusMatrix::scaling(BigInt::one(), qj.clone())),
            ] {
                if let Some(fd) = fd_of(&m) {
                    if fd < base_fd && best.as_ref().is_none_or(|b| fd < b.0) {
                        best = Some((fd, m, up, j));
                    }
                }
            }
        }
        if let Some((_, m, up, j)) = best {
            let qj = num_traits::pow(q.clone(), j as usize);
            if up {
                num *= qj;
            } else {
                den *= qj;
            }
            per_prime += 1;
            push(m, &mut out);
        }
    }

    if per_prime > 0 {
        let mut combined = Vec::new();
        if per_prime > 1 {
            combined.push(reduced_scaling(num.clone(), den.clone()));
        }
        for (u, v) in simple_rationals() {
            combined.push(reduced_scaling(&num * u, &den * v));
        }
        for m in combined {
            if fd_of(&m).is_some_and(|fd| fd < base_fd) {
                push(m, &mut out);
            }
        }
    }

    for (u, v) in simple_rationals() {
        push(MoebiusMatrix::scaling(u.into(), v.into()), &mut out);
        if !f0.is_zero() {
            push(MoebiusMatrix::reverse_scaling(u.into(), v.into()), &mut out);
        }
    }

    out.truncate(max_candidates.max(1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> PolyZ {
        PolyZ::from_i64s(c)
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> MoebiusMatrix {
        MoebiusMatrix::from_i64s(a, b, c, d)
    }

    fn f97() -> PolyZ {
        p(&[2, 4, 78, 76, 97])
    }

    #[test]
    fn apply_examples() {
        let g = apply(&m(1, 1, -3, 2), &f97()).unwrap();
        assert_eq!(g.primitive_part().unwrap(), p(&[1, 0, 0, 0, 1]));
        assert_eq!(
            apply(&m(1, 1, 0, 1), &p(&[1, 0, 1])).unwrap(),
            p(&[2, 2, 1])
        );
        assert_eq!(
            apply(&m(0, 2, 1, 0), &f97()).unwrap(),
            p(&[1552, 608, 312, 8, 2])
        );
        assert_eq!(
            image(&m(0, 2, 1, 0), &f97()).unwrap(),
            p(&[776, 304, 156, 4, 1])
        );
        assert_eq!(
            apply(&m(1, 1, 1, 1), &p(&[1, 0, 1])),
            Err(Error::DegenerateMatrix)
        );
    }

    #[test]
    fn pseudo_inverse_examples() {
        assert_eq!(pseudo_inverse(&m(1, 1, -3, 2)), m(2, -1, 3, 1));
        assert_eq!(
            pseudo_inverse(&MoebiusMatrix::identity()),
            MoebiusMatrix::identity()
        );
        assert_eq!(pseudo_inverse(&m(2, 0, 0, 1)), m(1, 0, 0, 2));
    }

    #[test]
    fn verify_transform_examples() {
        let f = f97();
        let x4 = p(&[1, 0, 0, 0, 1]);
        assert_eq!(verify_transform(&f, &m(1, 1, -3, 2), &x4), Ok(()));
        assert_eq!(
            verify_transform(&f, &m(1, 1, -3, 2), &p(&[2, 0, 0, 0, 1])),
            Err(VerifyError::RatioMismatch)
        );
        assert_eq!(
            verify_transform(&p(&[1, 0, 1]), &m(1, 1, 1, 1), &p(&[1, 0, 1])),
            Err(VerifyError::DegenerateMatrix)
        );
        assert_eq!(
            verify_transform(&f, &m(0, 2, 1, 0), &p(&[776, 304, 156, 4, 1])),
            Ok(())
        );
        // not primitive, wrong degree, negated
        assert_eq!(
            verify_transform(&f, &m(0, 2, 1, 0), &p(&[1552, 608, 312, 8, 2])),
            Err(VerifyError::ImageNotPrimitive)
        );
        assert_eq!(
            verify_transform(&f, &m(0, 2, 1, 0), &p(&[1, 1, 1])),
            Err(VerifyError::ImageDegree {
                expected: 4,
                got: 2
            })
        );
        assert_eq!(
            verify_transform(&f, &m(0, 2, 1, 0), &p(&[-776, -304, -156, -4, -1])),
            Err(VerifyError::ImageNotPrimitive)
        );
    }

    #[test]
    fn candidate_examples() {
        let f = p(&[1, 1, 0, 1]);
        let c = candidate_transforms(&f, 24);
        assert_eq!(c[0], MoebiusMatrix::identity());
        assert_eq!(c[1], MoebiusMatrix::reversal());
        assert!(c.len() <= 24);

        let g = p(&[2, 1, 1]);
        assert_eq!(fixed_divisor(&g).unwrap(), 2.into());
        let c = candidate_transforms(&g, 24);
        assert!(c.contains(&m(2, 0, 0, 1)));
        assert!(c.contains(&m(1, 0, 0, 2)));

        let c = candidate_transforms(&p(&[0, 1, 1]), 24);
        assert!(!c.contains(&MoebiusMatrix::reversal()));
        assert_eq!(candidate_transforms(&g, 3).len(), 3);
    }

    #[test]
    fn fixed_divisor_scalings_reduce_the_fixed_divisor() {
        for f in [p(&[2, 1, 1]), p(&[6, 5, 1, 0, 6]), p(&[24, 10, 11, 2, 1])] {
            let base = fixed_divisor(&f).unwrap();
            let cands = candidate_transforms(&f, 64);
            for mm in &cands {
                if mm.b.is_zero() && mm.c.is_zero() && !mm.is_identity() {
                    let (u, v) = (mm.a.clone(), mm.d.clone());
                    let simple = u <= 5.into() && v <= 5.into();
                    if !simple {
                        let fd = fixed_divisor(&image(mm, &f).unwrap()).unwrap();
                        assert!(fd < base, "{mm} on {f}");
                    }
                }
            }
        }
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = PolyZ> {
        proptest::collection::vec(-20i64..=20, 1..=max_deg + 1).prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            PolyZ::from_i64s(&c)
        })
    }

    fn arb_matrix() -> impl Strategy<Value = MoebiusMatrix> {
        (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
            .prop_filter("non-singular", |(a, b, c, d)| a * d != b * c)
            .prop_map(|(a, b, c, d)| m(a, b, c, d))
    }

    proptest! {
        #[test]
        fn transform_is_multiplicative(mm in arb_matrix(), g in arb_poly(4), h in arb_poly(4)) {
            let gh = &g * &h;
            let lhs = apply(&mm, &gh).unwrap();
            let rhs = &apply(&mm, &g).unwrap() * &apply(&mm, &h).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pseudo_inverse_composes_to_det_power(mm in arb_matrix(), f in arb_poly(6)) {
            let g = apply(&mm, &f).unwrap();
            if g.degree() == f.degree() {
                let back = apply(&pseudo_inverse(&mm), &g).unwrap();
                let k = f.degree().unwrap();
                prop_assert_eq!(back, f.scale(&num_traits::pow(mm.det(), k)));
            }
        }

        #[test]
        fn degree_drops_exactly_at_roots(a in -5i64..=5, c in 1i64..=5, b in -5i64..=5, d in -5i64..=5,
                                         rest in arb_poly(3), with_root in any::<bool>()) {
            prop_assume!(a * d != b * c);
            // root a/c: factor (c x - a)
            let f = if with_root { &rest * &p(&[-a, c]) } else { rest.clone() };
            let mm = m(a, b, c, d);
            let dropped = apply(&mm, &f).unwrap().degree() < f.degree();
            let root = f.eval_rat(&crate::Rat::new(a.into(), c.into())).is_zero();
            prop_assert_eq!(dropped, root);
        }

        #[test]
        fn images_verify(mm in arb_matrix(), f in arb_poly(6)) {
            prop_assume!(f.degree().unwrap() >= 2);
            if let Some(g) = image(&mm, &f) {
                prop_assert_eq!(verify_transform(&f, &mm, &g), Ok(()));
                let mut bad = g.clone().into_coeffs();
                bad[0] += 1;
                let bad = PolyZ::new(bad);
                if bad.is_primitive() && bad != g {
                    prop_assert!(verify_transform(&f, &mm, &bad).is_err());
                }
            }
        }
    }
}
