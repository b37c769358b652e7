//! Certificate search and top-level verification.
//!
//! [`certify`] interleaves slices of degree analysis on the input with
//! slices of witness search on a small catalog of Möbius images of it.
//! Whenever degree analysis improves the factor degree lower bound, every
//! search first checks whether it already recorded a witness good enough
//! for the new bound.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::certio::{Certificate, CertificateDocument};
use crate::degan::{
    analyze_prime, intersect, minimize_evidence, minimize_for_delta, verify_degan, DegreeAnalyzer,
    DeltaBound, PrimeEvidence,
};
use crate::error::{Error, VerifyError};
use crate::lpfw::{search_lpfw, verify_lpfw, SearchState, DEFAULT_SMOOTH_BOUND};
use crate::moebius::{candidate_transforms, image, verify_transform, MoebiusMatrix};
use crate::polyz::{compute_root_bound, PolyZ, DEFAULT_MAX_GRAEFFE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyConfig {
    pub seed: u64,
    /// Total work budget: one unit per prime analyzed or evaluation point
    /// examined.
    pub max_iterations: usize,
    /// Primes analyzed per round.
    pub degan_slice: usize,
    /// Evaluation points examined per catalog entry per round.
    pub lpfw_slice: usize,
    pub smooth_bound: u64,
    pub max_graeffe: u32,
    pub max_transforms: usize,
    pub use_transforms: bool,
    /// Require (and produce) Pratt certificates for every prime.
    pub strict_primality: bool,
    pub thread_count: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            seed: 0,
            max_iterations: 10_000,
            degan_slice: 8,
            lpfw_slice: 8,
            smooth_bound: DEFAULT_SMOOTH_BOUND,
            max_graeffe: DEFAULT_MAX_GRAEFFE,
            max_transforms: 24,
            use_transforms: true,
            strict_primality: false,
            thread_count: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Certified {
        doc: CertificateDocument,
    },
    /// `witness` is a factor of the input over `Q` of degree between 1 and
    /// `deg f - 1`.
    Reducible {
        witness: PolyZ,
    },
    Inconclusive {
        iterations_used: usize,
    },
}

/// One Möbius image under search.
struct Entry {
    matrix: MoebiusMatrix,
    image: PolyZ,
    delta: DeltaBound,
    state: SearchState,
    dead: bool,
}

impl Entry {
    fn new(matrix: MoebiusMatrix, image: PolyZ, config: &CertifyConfig) -> Self {
        let rb = compute_root_bound(&image, config.max_graeffe);
        let state = SearchState::new(&image, rb, config.strict_primality);
        Entry {
            matrix,
            image,
            delta: DeltaBound::trivial(),
            state,
            dead: false,
        }
    }

    /// Raises this entry's bound to (at most) `target`, using evidence for
    /// its own image computed at the primes degree analysis found useful,
    /// then the other primes it tried.
    fn raise_delta(&mut self, target: usize, useful: &[u64], tried: &[u64]) {
        if target <= self.delta.value {
            return;
        }
        let d = self.image.degree().unwrap();
        let cap = (d / 2).max(1);
        let mut ev: Vec<PrimeEvidence> = Vec::new();
        let mut sets = Vec::new();
        let mut best = 1;
        for &p in useful
            .iter()
            .chain(tried.iter().filter(|p| !useful.contains(p)))
        {
            if let Some((e, s)) = analyze_prime(&self.image, p) {
                ev.push(e);
                sets.push(s);
                best = intersect(&sets).expect("same degree").delta().min(cap);
                if best >= target {
                    break;
                }
            }
        }
        if best <= self.delta.value {
            return;
        }
        let evidence = if best == 1 {
            Vec::new()
        } else {
            minimize_for_delta(&ev, d, best).expect("evidence certifies the bound")
        };
        self.delta = DeltaBound {
            value: best,
            evidence,
        };
    }

    fn certificate(&self) -> Option<Certificate> {
        if self.dead {
            return None;
        }
        let c = Certificate::Lpfw(self.state.certificate(&self.delta)?);
        Some(if self.matrix.is_identity() {
            c
        } else {
            Certificate::Transform {
                matrix: self.matrix.clone(),
                image: self.image.clone(),
                inner: Box::new(c),
            }
        })
    }
}

fn catalog(g: &PolyZ, config: &CertifyConfig) -> Vec<Entry> {
    let matrices = if config.use_transforms {
        candidate_transforms(g, config.max_transforms)
    } else {
        vec![MoebiusMatrix::identity()]
    };
    let mut entries: Vec<Entry> = Vec::new();
    for m in matrices {
        let Some(h) = image(&m, g) else { continue };
        if entries.iter().any(|e| e.image == h) {
            continue;
        }
        entries.push(Entry::new(m, h, config));
    }
    entries
}

/// Searches for an irreducibility certificate for `f`.
pub fn certify(f: &PolyZ, config: &CertifyConfig) -> Result<Verdict, Error> {
    let g = f.primitive_part()?;
    let d = g.degree().unwrap();
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let document = |certificate| CertificateDocument {
        polynomial: f.clone(),
        certificate,
    };
    if d == 1 {
        return Ok(Verdict::Certified {
            doc: document(Certificate::Linear),
        });
    }
    if !g.is_squarefree() {
        let h = g.gcd(&g.derivative());
        return Ok(Verdict::Reducible { witness: h });
    }
    if g.coeff(0).is_zero() {
        return Ok(Verdict::Reducible {
            witness: PolyZ::monomial(BigInt::from(1), 1),
        });
    }

    let mut entries = catalog(&g, config);
    let mut analyzer = DegreeAnalyzer::new(&g, config.seed);
    let mut published = 1;
    let mut used = 0usize;
    let budget = config.max_iterations;
    let threads = config.thread_count.max(1);

    let accept = |doc: CertificateDocument| -> Option<Verdict> {
        verify(f, &doc, config.strict_primality).ok()?;
        Some(Verdict::Certified { doc })
    };

    let degree_certificate = |an: &DegreeAnalyzer| -> Option<Verdict> {
        if !an.is_done() {
            return None;
        }
        let evidence = minimize_evidence(an.evidence(), an.degree_set())
            .expect("analyzer evidence reproduces its degree set");
        accept(document(Certificate::DegreeAnalysis { evidence }))
    };

    while used < budget {
        for _ in 0..config.degan_slice.max(1) {
            if analyzer.is_done() || used >= budget {
                break;
            }
            analyzer.step();
            used += 1;
        }
        if let Some(v) = degree_certificate(&analyzer) {
            return Ok(v);
        }
        let delta = analyzer.degree_set().delta().min(d / 2).max(1);
        if delta > published {
            published = delta;
            let useful: Vec<u64> = analyzer.evidence().iter().map(|e| e.p).collect();
            let tried: Vec<u64> = analyzer.tried_primes().collect();
            for e in &mut entries {
                e.raise_delta(published, &useful, &tried);
            }
        }

        // Recorded witnesses first, then new search steps.
        for round in 0..2 {
            if round == 1 {
                used += search_round(&mut entries, config, threads, budget.saturating_sub(used));
            }
            for e in &mut entries {
                let Some(c) = e.certificate() else { continue };
                // Degree analysis certificates are cheaper to check, so it
                // gets to finish its preferential primes before a witness is
                // accepted.
                while !analyzer.is_done() && !analyzer.preferential_exhausted() {
                    analyzer.step();
                    used += 1;
                }
                if let Some(v) = degree_certificate(&analyzer) {
                    return Ok(v);
                }
                match accept(document(c)) {
                    Some(v) => return Ok(v),
                    None => e.dead = true,
                }
            }
        }
    }
    Ok(Verdict::Inconclusive {
        iterations_used: used,
    })
}

/// One slice of search on every live entry; returns the points consumed.
fn search_round(
    entries: &mut [Entry],
    config: &CertifyConfig,
    threads: usize,
    room: usize,
) -> usize {
    let slice = config.lpfw_slice.max(1);
    let live = entries.iter().filter(|e| !e.dead).count().max(1);
    // Never overshoot the budget by more than one slice per entry.
    let per_entry = slice.min(room.div_ceil(live)).max(1);
    let run = |e: &mut Entry| -> usize {
        if e.dead {
            return 0;
        }
        let before = e.state.steps();
        search_lpfw(&mut e.state, &e.delta, config.smooth_bound, per_entry);
        (e.state.steps() - before) as usize
    };
    if threads <= 1 || entries.len() <= 1 {
        return entries.iter_mut().map(run).sum();
    }
    let chunk = entries.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .chunks_mut(chunk)
            .map(|part| s.spawn(move || part.iter_mut().map(run).sum::<usize>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .sum()
    })
}

/// Checks `doc` as a proof that `f` is irreducible over `Q`. The
/// certificate is checked against the primitive part of `f`.
pub fn verify(f: &PolyZ, doc: &CertificateDocument, strict: bool) -> Result<(), VerifyError> {
    if doc.polynomial != *f {
        return Err(VerifyError::PolynomialMismatch);
    }
    let g = f
        .primitive_part()
        .map_err(|_| VerifyError::NotPositiveDegree)?;
    verify_certificate(&g, &doc.certificate, strict, false)
}

fn verify_certificate(
    g: &PolyZ,
    cert: &Certificate,
    strict: bool,
    nested: bool,
) -> Result<(), VerifyError> {
    let d = g
        .degree()
        .filter(|&d| d >= 1)
        .ok_or(VerifyError::NotPositiveDegree)?;
    match cert {
        Certificate::Linear => {
            if d == 1 {
                Ok(())
            } else {
                Err(VerifyError::NotLinear(d))
            }
        }
        Certificate::DegreeAnalysis { evidence } => {
            if d < 2 {
                return Err(VerifyError::DegreeTooSmall(d));
            }
            match verify_degan(g, evidence)?.min_proper() {
                None => Ok(()),
                Some(e) => Err(VerifyError::DegreesRemain(e)),
            }
        }
        Certificate::Lpfw(c) => verify_lpfw(g, c, strict),
        Certificate::Transform {
            matrix,
            image,
            inner,
        } => {
            if nested {
                return Err(VerifyError::NestedTransform);
            }
            verify_transform(g, matrix, image)?;
            verify_certificate(image, inner, strict, true)
        }
    }
}
