//! Polynomials over the prime field `F_p` for word-sized `p`: arithmetic,
//! factorization (distinct-degree then equal-degree splitting) and the
//! Berlekamp-matrix irreducibility check used by the verifier.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::polyz::PolyZ;

/// Moduli must stay below this so products of residues fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Polynomial with coefficients in `[0, p)`, ascending degree order, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

impl PolyModP {
    /// Builds a polynomial from residues, reducing them mod `p`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!((2..MAX_MODULUS).contains(&p), "modulus out of range");
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyModP { p, coeffs }
    }

    /// Like [`PolyModP::new`] but rejects unreduced coefficients, trailing
    /// zeros and bad moduli instead of fixing them up.
    pub fn from_canonical(p: u64, coeffs: Vec<u64>) -> Option<Self> {
        if !(2..MAX_MODULUS).contains(&p)
            || coeffs.iter().any(|&c| c >= p)
            || coeffs.last() == Some(&0)
        {
            return None;
        }
        Some(PolyModP { p, coeffs })
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monic polynomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// Coefficientwise reduction of an integer polynomial.
    pub fn reduce(f: &PolyZ, p: u64) -> Self {
        let m = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = c % &m;
                let r = if r < BigInt::from(0) { r + &m } else { r };
                r.to_u64().unwrap()
            })
            .collect();
        Self::new(p, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.p))
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs.iter().map(|&a| mul_mod(a, c % p, p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + get(&other.coeffs, i)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + p - get(&other.coeffs, i)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = inv_mod(divisor.leading_coeff(), p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + p - mul_mod(c, b, p)) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| mul_mod(c, j as u64 % p, p))
                .collect(),
        )
    }

    /// True iff `gcd(g, g')` is constant. The zero polynomial is not
    /// squarefree; nonzero constants are.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `self^e mod m`, with `e` given as little-endian `u64` limbs.
    fn pow_mod_limbs(&self, e: &[u64], m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for limb in e.iter().rev() {
            for bit in (0..64).rev() {
                acc = acc.mul(&acc).rem(m);
                if (limb >> bit) & 1 == 1 {
                    acc = acc.mul(&base).rem(m);
                }
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: u64, m: &Self) -> Self {
        self.pow_mod_limbs(&[e], m)
    }

    /// Canonical ordering of factors: by degree, then coefficient sequence
    /// compared from the constant term upwards.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Row `i` holds the coefficients of `x^(i p) mod g`.
pub fn berlekamp_matrix(g: &PolyModP) -> Vec<Vec<u64>> {
    let p = g.p;
    let d = g.degree().expect("berlekamp matrix of zero polynomial");
    let xp = PolyModP::x(p).pow_mod(p, g);
    let mut row = PolyModP::one(p).rem(g);
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let mut v = row.coeffs.clone();
        v.resize(d, 0);
        out.push(v);
        row = row.mul(&xp).rem(g);
    }
    out
}

/// Rank of a matrix over `F_p` by Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][col], p);
        for v in &mut m[rank][col..] {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (v, &q) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    let sub = mul_mod(factor, q, p);
                    *v = (*v + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Irreducibility over `F_p` for monic `g`: `g` must be squarefree and
/// `B - I` must have nullity one.
pub fn is_irreducible_mod_p(g: &PolyModP) -> bool {
    let Some(d) = g.degree() else {
        return false;
    };
    if d == 0 || !g.is_monic() {
        return false;
    }
    if d == 1 {
        return true;
    }
    if !g.is_squarefree() {
        return false;
    }
    let p = g.p;
    let mut b = berlekamp_matrix(g);
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    rank_mod_p(b, p) == d - 1
}

/// Monic irreducible factors of a squarefree polynomial, canonically sorted.
pub fn factor_mod_p(g: &PolyModP) -> Result<Vec<PolyModP>, Error> {
    if g.degree().is_none_or(|d| d == 0) || !g.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let p = g.p;
    let f = g.monic();
    // Seeded from the input so the splitting is reproducible.
    let seed = f.coeffs.iter().fold(p, |h, &c| {
        h.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(c)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, deg) in distinct_degree(&f) {
        equal_degree(&part, deg, &mut rng, &mut out);
    }
    out.sort_by(PolyModP::canonical_cmp);
    debug_assert_eq!(
        out.iter().fold(PolyModP::one(p), |acc, h| acc.mul(h)),
        f,
        "factor product mismatch"
    );
    Ok(out)
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyModP::x(p);
    let mut h = x.rem(&rest);
    let mut i = 0;
    while let Some(dr) = rest.degree() {
        if dr == 0 {
            break;
        }
        i += 1;
        if 2 * i > dr {
            out.push((rest.clone(), dr));
            break;
        }
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() != Some(0) {
            out.push((g.clone(), i));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of irreducibles of degree
/// `deg`. For `p = 2` the trace map replaces the `(q-1)/2` power.
fn equal_degree(f: &PolyModP, deg: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyModP>) {
    let n = f.degree().unwrap();
    if n == deg {
        out.push(f.clone());
        return;
    }
    let p = f.p;
    loop {
        let a = PolyModP::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let b = if p == 2 {
            // a + a^2 + a^4 + ... + a^(2^(deg-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..deg {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^deg - 1)/2) = (a^(1 + p + ... + p^(deg-1)))^((p-1)/2)
            let mut t = a.rem(f);
            let mut norm = t.clone();
            for _ in 1..deg {
                t = t.pow_mod(p, f);
                norm = norm.mul(&t).rem(f);
            }
            norm.pow_mod((p - 1) / 2, f).sub(&PolyModP::one(p))
        };
        let g = f.gcd(&b);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < n {
                let h = f.div_rem(&g).0;
                equal_degree(&g, deg, rng, out);
                equal_degree(&h, deg, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyz::PolyZ;

    fn pm(p: u64, c: &[u64]) -> PolyModP {
        PolyModP::new(p, c.to_vec())
    }

    #[test]
    fn reduce_examples() {
        let f = PolyZ::from_i64s(&[4, 3, 0, 1, 1]);
        assert_eq!(PolyModP::reduce(&f, 2), pm(2, &[0, 1, 0, 1, 1]));
        assert_eq!(
            PolyModP::reduce(&PolyZ::from_i64s(&[1, 0, 0, 0, 1]), 5),
            pm(5, &[1, 0, 0, 0, 1])
        );
        assert!(PolyModP::reduce(&PolyZ::from_i64s(&[3, 0, 6]), 3).is_zero());
        assert_eq!(
            PolyModP::reduce(&PolyZ::from_i64s(&[-1, 1]), 7),
            pm(7, &[6, 1])
        );
    }

    #[test]
    fn factor_examples() {
        let f = factor_mod_p(&pm(2, &[0, 1, 0, 1, 1])).unwrap();
        assert_eq!(f, vec![pm(2, &[0, 1]), pm(2, &[1, 0, 1, 1])]);

        // x^4 + 1 = (x^2 + 2)(x^2 + 3) mod 5, found by exhaustive search over
        // the 25 monic quadratics.
        let mut quads = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                let q = pm(5, &[b, a, 1]);
                if pm(5, &[1, 0, 0, 0, 1]).rem(&q).is_zero() {
                    quads.push(q);
                }
            }
        }
        quads.sort_by(PolyModP::canonical_cmp);
        assert_eq!(quads, vec![pm(5, &[2, 0, 1]), pm(5, &[3, 0, 1])]);
        assert_eq!(factor_mod_p(&pm(5, &[1, 0, 0, 0, 1])).unwrap(), quads);

        assert_eq!(
            factor_mod_p(&pm(5, &[1, 0, 1])).unwrap(),
            vec![pm(5, &[2, 1]), pm(5, &[3, 1])]
        );
        assert_eq!(factor_mod_p(&pm(5, &[1, 2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn factor_non_monic_input() {
        // 3(x+1)(x+2) mod 7
        let g = pm(7, &[6, 9, 3]);
        assert_eq!(
            factor_mod_p(&g).unwrap(),
            vec![pm(7, &[1, 1]), pm(7, &[2, 1])]
        );
    }

    #[test]
    fn berlekamp_examples() {
        assert_eq!(
            berlekamp_matrix(&pm(3, &[1, 0, 1])),
            vec![vec![1, 0], vec![0, 2]]
        );
        assert_eq!(berlekamp_matrix(&pm(5, &[0, 1])), vec![vec![1]]);
        assert_eq!(
            berlekamp_matrix(&pm(2, &[1, 1, 1])),
            vec![vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn irreducible_examples() {
        assert!(is_irreducible_mod_p(&pm(2, &[1, 0, 1, 1])));
        assert!(!is_irreducible_mod_p(&pm(5, &[1, 0, 1])));
        assert!(is_irreducible_mod_p(&pm(7, &[1, 1])));
        // (x^2+x+1)^2 over F_2 has nullity one but is not irreducible
        let h = pm(2, &[1, 1, 1]);
        assert!(!is_irreducible_mod_p(&h.mul(&h)));
        assert!(!is_irreducible_mod_p(&pm(5, &[2, 0, 2])));
    }

    fn all_monic(p: u64, d: usize) -> Vec<PolyModP> {
        let total = p.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(d + 1);
                for _ in 0..d {
                    c.push(idx % p);
                    idx /= p;
                }
                c.push(1);
                PolyModP::new(p, c)
            })
            .collect()
    }

    fn brute_irreducible(g: &PolyModP) -> bool {
        let d = g.degree().unwrap();
        (1..=d / 2).all(|k| all_monic(g.p, k).iter().all(|h| !g.rem(h).is_zero()))
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for p in [2u64, 3] {
            for d in 1..=6 {
                for g in all_monic(p, d) {
                    assert_eq!(is_irreducible_mod_p(&g), brute_irreducible(&g), "{g:?}");
                }
            }
        }
    }

    fn mobius(n: u32) -> i64 {
        let mut n = n;
        let mut k = 0;
        let mut q = 2;
        while q * q <= n {
            if n.is_multiple_of(q) {
                n /= q;
                if n.is_multiple_of(q) {
                    return 0;
                }
                k += 1;
            }
            q += 1;
        }
        if n > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for p in [2u64, 3, 5] {
            for n in 1..=4u32 {
                let expected: i64 = (1..=n)
                    .filter(|m| n % m == 0)
                    .map(|m| mobius(m) * (p as i64).pow(n / m))
                    .sum::<i64>()
                    / n as i64;
                let found = all_monic(p, n as usize)
                    .iter()
                    .filter(|g| is_irreducible_mod_p(g))
                    .count();
                assert_eq!(found as i64, expected, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn factorization_contract_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 3, 5, 7, 101, 65537, 2147483647] {
            let mut done = 0;
            while done < 25 {
                let d = rng.gen_range(1..12);
                let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                c.push(rng.gen_range(1..p));
                let g = PolyModP::new(p, c);
                if !g.is_squarefree() {
                    continue;
                }
                done += 1;
                let fs = factor_mod_p(&g).unwrap();
                let prod = fs
                    .iter()
                    .fold(PolyModP::one(p), |a, h| a.mul(h))
                    .scale(g.leading_coeff());
                assert_eq!(prod, g);
                for w in fs.windows(2) {
                    assert_eq!(w[0].canonical_cmp(&w[1]), Ordering::Less);
                }
                for h in &fs {
                    assert!(h.is_monic());
                    assert!(is_irreducible_mod_p(h));
                }
            }
        }
    }
}
