//! Factor degree analysis.
//!
//! Every factor of `f` in `Z[x]` reduces modulo `p` to a product of some of
//! the irreducible factors of `f mod p`, so its degree is a subset sum of the
//! modular factor degrees. Intersecting these subset-sum sets over several
//! primes excludes degrees; when no proper degree survives, `f` is
//! irreducible.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, VerifyError};
use crate::polymodp::{factor_mod_p, is_irreducible_mod_p, PolyModP, MAX_MODULUS};
use crate::polyz::PolyZ;
use crate::primality::{is_prime_u64, small_primes};

/// Set of possible factor degrees `e` in `0..=d`. Always contains `0` and
/// `d` and is symmetric under `e -> d - e`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DegreeSet {
    d: usize,
    bits: Vec<u64>,
}

impl DegreeSet {
    /// Every degree possible: nothing excluded yet.
    pub fn full(d: usize) -> Self {
        let mut s = DegreeSet {
            d,
            bits: vec![0; d / 64 + 1],
        };
        for e in 0..=d {
            s.insert(e);
        }
        s
    }

    fn empty(d: usize) -> Self {
        DegreeSet {
            d,
            bits: vec![0; d / 64 + 1],
        }
    }

    fn insert(&mut self, e: usize) {
        self.bits[e / 64] |= 1 << (e % 64);
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn contains(&self, e: usize) -> bool {
        e <= self.d && self.bits[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..=self.d).filter(|&e| self.contains(e)).collect()
    }

    /// Surviving degrees in `1..=d/2`, the part that matters for factors.
    pub fn proper(&self) -> Vec<usize> {
        (1..=self.d / 2).filter(|&e| self.contains(e)).collect()
    }

    pub fn is_proper_empty(&self) -> bool {
        self.min_proper().is_none()
    }

    /// Smallest surviving proper degree: a factor degree lower bound.
    pub fn min_proper(&self) -> Option<usize> {
        (1..=self.d / 2).find(|&e| self.contains(e))
    }

    /// Certified factor degree lower bound; `d` itself when nothing proper
    /// survives.
    pub fn delta(&self) -> usize {
        self.min_proper().unwrap_or(self.d)
    }

    fn or_shifted(&mut self, k: usize) {
        let words = k / 64;
        let bits = k % 64;
        for i in (0..self.bits.len()).rev() {
            let mut v = 0u64;
            if i >= words {
                v = self.bits[i - words] << bits;
                if bits > 0 && i > words {
                    v |= self.bits[i - words - 1] >> (64 - bits);
                }
            }
            self.bits[i] |= v;
        }
        // clear bits above d
        let top = self.d % 64;
        let last = self.bits.len() - 1;
        if top < 63 {
            self.bits[last] &= (1u64 << (top + 1)) - 1;
        }
    }

    pub fn intersect_with(&mut self, other: &DegreeSet) -> Result<(), Error> {
        if self.d != other.d {
            return Err(Error::DegreeSetMismatch(self.d, other.d));
        }
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        Ok(())
    }
}

impl fmt::Debug for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeSet(d={}, {:?})", self.d, self.elements())
    }
}

/// A prime and the monic irreducible factors of `f mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeEvidence {
    pub p: u64,
    pub factors: Vec<PolyModP>,
}

impl PrimeEvidence {
    pub fn degree_set(&self, d: usize) -> Result<DegreeSet, Error> {
        possible_degrees(&self.factor_degrees(), d)
    }

    pub fn factor_degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .map(|g| g.degree().unwrap_or(0))
            .collect()
    }
}

/// A factor degree lower bound `value`, backed by `evidence` unless it is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaBound {
    pub value: usize,
    pub evidence: Vec<PrimeEvidence>,
}

impl DeltaBound {
    pub fn trivial() -> Self {
        DeltaBound {
            value: 1,
            evidence: Vec::new(),
        }
    }
}

/// Subset-sum closure of the factor degrees.
pub fn possible_degrees(factor_degrees: &[usize], d: usize) -> Result<DegreeSet, Error> {
    let sum: usize = factor_degrees.iter().sum();
    if sum != d {
        return Err(Error::DegreeSumMismatch {
            expected: d,
            got: sum,
        });
    }
    let mut s = DegreeSet::empty(d);
    s.insert(0);
    for &k in factor_degrees {
        s.or_shifted(k);
    }
    Ok(s)
}

pub fn intersect(sets: &[DegreeSet]) -> Result<DegreeSet, Error> {
    let (first, rest) = sets.split_first().ok_or(Error::EvidenceMismatch)?;
    let mut acc = first.clone();
    for s in rest {
        acc.intersect_with(s)?;
    }
    Ok(acc)
}

/// Factors `f mod p`. Absent when `p` divides the leading coefficient or
/// the reduction is not squarefree.
pub fn analyze_prime(f: &PolyZ, p: u64) -> Option<(PrimeEvidence, DegreeSet)> {
    let d = f.degree()?;
    if (f.leading_coeff()? % BigInt::from(p)).is_zero() {
        return None;
    }
    let g = PolyModP::reduce(f, p);
    let factors = factor_mod_p(&g).ok()?;
    let ev = PrimeEvidence { p, factors };
    let set = ev.degree_set(d).ok()?;
    Some((ev, set))
}

fn first_primes_above(d: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = d as u64 + 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Incremental degree analysis driver: picks primes alternately from a
/// preferential list and a random generator whose range doubles after
/// every 8 unhelpful primes.
#[derive(Clone, Debug)]
pub struct DegreeAnalyzer {
    f: PolyZ,
    d: usize,
    rng: ChaCha8Rng,
    preferential: VecDeque<u64>,
    prefer_next: bool,
    range_hi: u64,
    unhelpful: u32,
    tried: BTreeSet<u64>,
    current: DegreeSet,
    evidence: Vec<PrimeEvidence>,
    iterations: usize,
}

impl DegreeAnalyzer {
    pub fn new(f: &PolyZ, seed: u64) -> Self {
        let d = f.degree().expect("degree analysis of the zero polynomial");
        let mut preferential: VecDeque<u64> = small_primes(14).into_iter().collect();
        for q in first_primes_above(d, 10) {
            if !preferential.contains(&q) {
                preferential.push_back(q);
            }
        }
        DegreeAnalyzer {
            f: f.clone(),
            d,
            rng: ChaCha8Rng::seed_from_u64(seed),
            preferential,
            prefer_next: true,
            range_hi: (4 * d as u64).max(8),
            unhelpful: 0,
            tried: BTreeSet::new(),
            current: DegreeSet::full(d),
            evidence: Vec::new(),
            iterations: 0,
        }
    }

    fn random_prime(&mut self) -> u64 {
        loop {
            let n = self.rng.gen_range(2..=self.range_hi);
            if is_prime_u64(n) {
                return n;
            }
        }
    }

    fn next_prime(&mut self) -> u64 {
        let from_list = self.prefer_next && !self.preferential.is_empty();
        self.prefer_next = !self.prefer_next;
        if from_list {
            self.preferential.pop_front().unwrap()
        } else {
            self.random_prime()
        }
    }

    fn mark_unhelpful(&mut self) {
        self.unhelpful += 1;
        if self.unhelpful.is_multiple_of(8) {
            self.range_hi = (self.range_hi * 2).min(MAX_MODULUS - 1);
        }
    }

    /// Analyzes one more prime. Returns true if the degree set shrank.
    pub fn step(&mut self) -> bool {
        self.iterations += 1;
        let p = self.next_prime();
        if !self.tried.insert(p) {
            self.mark_unhelpful();
            return false;
        }
        let Some((ev, set)) = analyze_prime(&self.f, p) else {
            self.mark_unhelpful();
            return false;
        };
        let mut next = self.current.clone();
        next.intersect_with(&set).expect("same degree");
        if next == self.current {
            self.mark_unhelpful();
            return false;
        }
        self.current = next;
        self.evidence.push(ev);
        true
    }

    pub fn degree_set(&self) -> &DegreeSet {
        &self.current
    }

    /// Evidence for every prime that shrank the set, in discovery order.
    pub fn evidence(&self) -> &[PrimeEvidence] {
        &self.evidence
    }

    pub fn is_done(&self) -> bool {
        self.current.is_proper_empty()
    }

    /// True once every preferential prime has been analyzed.
    pub fn preferential_exhausted(&self) -> bool {
        self.preferential.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Primes tried so far (usable or not), ascending.
    pub fn tried_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.tried.iter().copied()
    }

    pub fn degree(&self) -> usize {
        self.d
    }
}

/// Runs degree analysis for at most `budget` primes, stopping early once
/// irreducibility is proved.
pub fn generate_degan(f: &PolyZ, budget: usize, seed: u64) -> (DegreeSet, Vec<PrimeEvidence>) {
    let mut an = DegreeAnalyzer::new(f, seed);
    while !an.is_done() && an.iterations() < budget {
        an.step();
    }
    (an.current, an.evidence)
}

/// Smallest (by cardinality, then lexicographic index order) subset of
/// `sets` whose intersection satisfies `accept`: sizes 1 to 3 are searched
/// exhaustively, then greedy set cover takes over. Returns indices.
pub fn minimal_subset(
    sets: &[DegreeSet],
    accept: impl Fn(&DegreeSet) -> bool,
) -> Option<Vec<usize>> {
    let n = sets.len();
    let meet = |idx: &[usize]| {
        let chosen: Vec<DegreeSet> = idx.iter().map(|&i| sets[i].clone()).collect();
        intersect(&chosen).ok()
    };
    for i in 0..n {
        if meet(&[i]).is_some_and(|s| accept(&s)) {
            return Some(vec![i]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if meet(&[i, j]).is_some_and(|s| accept(&s)) {
                return Some(vec![i, j]);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if meet(&[i, j, k]).is_some_and(|s| accept(&s)) {
                    return Some(vec![i, j, k]);
                }
            }
        }
    }
    // Greedy: keep adding the set that removes the most remaining degrees.
    let d = sets.first()?.degree();
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc = DegreeSet::full(d);
    while !accept(&acc) {
        let best = (0..n)
            .filter(|i| !chosen.contains(i))
            .map(|i| {
                let mut s = acc.clone();
                s.intersect_with(&sets[i]).ok();
                (s.elements().len(), i, s)
            })
            .min_by_key(|(len, i, _)| (*len, *i))?;
        if best.0 == acc.elements().len() {
            return None;
        }
        chosen.push(best.1);
        acc = best.2;
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// Smallest sub-list of `evidence` whose intersection is exactly `target`.
pub fn minimize_evidence(
    evidence: &[PrimeEvidence],
    target: &DegreeSet,
) -> Result<Vec<PrimeEvidence>, Error> {
    let sets: Vec<DegreeSet> = evidence
        .iter()
        .map(|e| e.degree_set(target.degree()))
        .collect::<Result<_, _>>()?;
    if sets.is_empty() || intersect(&sets)? != *target {
        return Err(Error::EvidenceMismatch);
    }
    let idx = minimal_subset(&sets, |s| s == target).ok_or(Error::EvidenceMismatch)?;
    Ok(idx.into_iter().map(|i| evidence[i].clone()).collect())
}

/// Smallest sub-list of `evidence` certifying a factor degree lower bound
/// of at least `delta`.
pub fn minimize_for_delta(
    evidence: &[PrimeEvidence],
    d: usize,
    delta: usize,
) -> Option<Vec<PrimeEvidence>> {
    let sets: Vec<DegreeSet> = evidence
        .iter()
        .map(|e| e.degree_set(d))
        .collect::<Result<_, _>>()
        .ok()?;
    if sets.is_empty() {
        return None;
    }
    let idx = minimal_subset(&sets, |s| s.delta() >= delta)?;
    Some(idx.into_iter().map(|i| evidence[i].clone()).collect())
}

/// Checks degree-analysis evidence against `f` from scratch and returns
/// the resulting degree set.
pub fn verify_degan(f: &PolyZ, evidence: &[PrimeEvidence]) -> Result<DegreeSet, VerifyError> {
    let d = f
        .degree()
        .filter(|&d| d >= 1)
        .ok_or(VerifyError::NotPositiveDegree)?;
    let lead = f.leading_coeff().unwrap();
    let mut acc = DegreeSet::full(d);
    for ev in evidence {
        let p = ev.p;
        if p >= MAX_MODULUS {
            return Err(VerifyError::ModulusTooLarge(p.into()));
        }
        if !is_prime_u64(p) {
            return Err(VerifyError::ModulusNotPrime(p.into()));
        }
        let lead_mod = (lead % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
        let lead_mod = lead_mod.to_u64().unwrap();
        if lead_mod == 0 {
            return Err(VerifyError::ModulusDividesLeading(p));
        }
        for g in &ev.factors {
            if g.modulus() != p || !g.is_monic() || g.degree().is_none_or(|k| k == 0) {
                return Err(VerifyError::FactorNotMonic(p));
            }
        }
        for (i, g) in ev.factors.iter().enumerate() {
            if ev.factors[..i].contains(g) {
                return Err(VerifyError::DuplicateFactor(p));
            }
        }
        let product = ev
            .factors
            .iter()
            .fold(PolyModP::one(p), |acc, g| acc.mul(g))
            .scale(lead_mod);
        if product != PolyModP::reduce(f, p) {
            return Err(VerifyError::ProductMismatch(p));
        }
        if !ev.factors.iter().all(is_irreducible_mod_p) {
            return Err(VerifyError::FactorReducible(p));
        }
        let set = ev
            .degree_set(d)
            .map_err(|_| VerifyError::ProductMismatch(p))?;
        acc.intersect_with(&set).expect("same degree");
    }
    Ok(acc)
}
