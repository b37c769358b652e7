//! Certificate documents and their canonical JSON form.
//!
//! Output is byte-deterministic: keys appear in a fixed order, there is no
//! insignificant whitespace, every integer is a decimal string (so no JSON
//! reader can round it), rationals are `"num/den"` in lowest terms, and the
//! document ends with a single newline. Input may contain any JSON
//! whitespace but must otherwise be canonical.
//!
//! ```text
//! document    {"format":"irredcert/1","polynomial":[c0,...],"certificate":C}
//! linear      {"kind":"linear"}
//! degree      {"kind":"degree_analysis","evidence":[E,...]}
//! lpfw        {"kind":"lpfw","rho":R,"graeffe_iters":K,"delta":D,
//!              "evidence":[E,...],"n":N,"p":P,"primality":null|Q}
//! transform   {"kind":"transform","matrix":[a,b,c,d],"image":[c0,...],"inner":C}
//! E           {"p":P,"factors":[[c0,...],...]}
//! Q           {"kind":"small"} | {"kind":"probable","rounds":K}
//!           | {"kind":"pratt","witness":W,"factors":[{"q":Q,"e":K,"cert":Q},...]}
//! ```

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde_json::{Map, Value};

use crate::degan::{DeltaBound, PrimeEvidence};
use crate::error::CertParseError;
use crate::lpfw::LpfwCert;
use crate::moebius::MoebiusMatrix;
use crate::polymodp::PolyModP;
use crate::polyz::{format_rat, parse_canonical_int, parse_rat, PolyZ, RootBoundCert};
use crate::primality::{PrattFactor, PrimalityCert};

pub const FORMAT_VERSION: &str = "irredcert/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Linear,
    DegreeAnalysis {
        evidence: Vec<PrimeEvidence>,
    },
    Lpfw(LpfwCert),
    /// A certificate for `image`, the primitive part of the Möbius transform
    /// of the polynomial by `matrix`. `inner` is never itself a transform.
    Transform {
        matrix: MoebiusMatrix,
        image: PolyZ,
        inner: Box<Certificate>,
    },
}

impl Certificate {
    /// Short name of the outermost certificate kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Linear => "linear",
            Certificate::DegreeAnalysis { .. } => "degree_analysis",
            Certificate::Lpfw(_) => "lpfw",
            Certificate::Transform { .. } => "transform",
        }
    }
}

/// A certificate together with the (original, unreduced) polynomial it is
/// about. The format version is implied: [`FORMAT_VERSION`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateDocument {
    pub polynomial: PolyZ,
    pub certificate: Certificate,
}

// ---------------------------------------------------------------------------
// writing

fn str_lit(out: &mut String, s: &str) {
    out.push('"');
    out.push_str(s);
    out.push('"');
}

fn key(out: &mut String, k: &str) {
    str_lit(out, k);
    out.push(':');
}

fn list<T>(out: &mut String, items: &[T], mut each: impl FnMut(&mut String, &T)) {
    out.push('[');
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        each(out, it);
    }
    out.push(']');
}

fn int(out: &mut String, v: impl ToString) {
    str_lit(out, &v.to_string());
}

fn poly(out: &mut String, f: &PolyZ) {
    list(out, f.coeffs(), |o, c| int(o, c));
}

fn evidence(out: &mut String, ev: &[PrimeEvidence]) {
    list(out, ev, |o, e| {
        o.push('{');
        key(o, "p");
        int(o, e.p);
        o.push(',');
        key(o, "factors");
        list(o, &e.factors, |o, g| list(o, g.coeffs(), |o, c| int(o, c)));
        o.push('}');
    });
}

fn primality(out: &mut String, pc: &PrimalityCert) {
    out.push('{');
    key(out, "kind");
    match pc {
        PrimalityCert::SmallPrime => str_lit(out, "small"),
        PrimalityCert::ProbablePrime { rounds } => {
            str_lit(out, "probable");
            out.push(',');
            key(out, "rounds");
            int(out, rounds);
        }
        PrimalityCert::LucasPratt { witness, factors } => {
            str_lit(out, "pratt");
            out.push(',');
            key(out, "witness");
            int(out, witness);
            out.push(',');
            key(out, "factors");
            list(out, factors, |o, f| {
                o.push('{');
                key(o, "q");
                int(o, &f.q);
                o.push(',');
                key(o, "e");
                int(o, f.e);
                o.push(',');
                key(o, "cert");
                primality(o, &f.cert);
                o.push('}');
            });
        }
    }
    out.push('}');
}

fn certificate(out: &mut String, c: &Certificate) {
    out.push('{');
    key(out, "kind");
    str_lit(out, c.kind());
    match c {
        Certificate::Linear => {}
        Certificate::DegreeAnalysis { evidence: ev } => {
            out.push(',');
            key(out, "evidence");
            evidence(out, ev);
        }
        Certificate::Lpfw(l) => {
            out.push(',');
            key(out, "rho");
            str_lit(out, &format_rat(&l.root_bound.rho));
            out.push(',');
            key(out, "graeffe_iters");
            int(out, l.root_bound.graeffe_iters);
            out.push(',');
            key(out, "delta");
            int(out, l.delta.value);
            out.push(',');
            key(out, "evidence");
            evidence(out, &l.delta.evidence);
            out.push(',');
            key(out, "n");
            int(out, &l.n);
            out.push(',');
            key(out, "p");
            int(out, &l.p);
            out.push(',');
            key(out, "primality");
            match &l.primality {
                None => out.push_str("null"),
                Some(pc) => primality(out, pc),
            }
        }
        Certificate::Transform {
            matrix,
            image,
            inner,
        } => {
            out.push(',');
            key(out, "matrix");
            list(out, &matrix.entries(), |o, e| int(o, e));
            out.push(',');
            key(out, "image");
            poly(out, image);
            out.push(',');
            key(out, "inner");
            certificate(out, inner);
        }
    }
    out.push('}');
}

/// The canonical text of `doc`, newline-terminated.
pub fn serialize(doc: &CertificateDocument) -> String {
    let mut out = String::new();
    out.push('{');
    key(&mut out, "format");
    str_lit(&mut out, FORMAT_VERSION);
    out.push(',');
    key(&mut out, "polynomial");
    poly(&mut out, &doc.polynomial);
    out.push(',');
    key(&mut out, "certificate");
    certificate(&mut out, &doc.certificate);
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// reading

fn schema(msg: impl Into<String>) -> CertParseError {
    CertParseError::Schema(msg.into())
}

/// An object whose keys must be exactly `keys`.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    what: &'static str,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, what: &'static str, keys: &[&str]) -> Result<Self, CertParseError> {
        let map = v
            .as_object()
            .ok_or_else(|| schema(format!("{what} must be an object")))?;
        for k in keys {
            if !map.contains_key(*k) {
                return Err(schema(format!("{what} is missing key {k:?}")));
            }
        }
        if let Some(extra) = map.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(schema(format!("{what} has unexpected key {extra:?}")));
        }
        Ok(Obj { map, what })
    }

    fn get(&self, k: &str) -> &'a Value {
        &self.map[k]
    }

    fn str(&self, k: &str) -> Result<&'a str, CertParseError> {
        self.get(k)
            .as_str()
            .ok_or_else(|| schema(format!("{}.{k} must be a string", self.what)))
    }

    fn int(&self, k: &str) -> Result<BigInt, CertParseError> {
        int_of(self.get(k), k)
    }

    fn nat<T: TryFrom<BigInt>>(&self, k: &str) -> Result<T, CertParseError> {
        let v = self.int(k)?;
        if v.is_negative() {
            return Err(schema(format!("{}.{k} must be non-negative", self.what)));
        }
        T::try_from(v).map_err(|_| schema(format!("{}.{k} is out of range", self.what)))
    }

    fn array(&self, k: &str) -> Result<&'a Vec<Value>, CertParseError> {
        self.get(k)
            .as_array()
            .ok_or_else(|| schema(format!("{}.{k} must be an array", self.what)))
    }
}

fn int_of(v: &Value, what: &str) -> Result<BigInt, CertParseError> {
    let s = v
        .as_str()
        .ok_or_else(|| schema(format!("{what} must be a decimal string")))?;
    parse_canonical_int(s).ok_or_else(|| CertParseError::NonCanonicalInteger(s.to_string()))
}

fn poly_of(v: &Value, what: &str) -> Result<PolyZ, CertParseError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))?;
    let coeffs = items
        .iter()
        .map(|c| int_of(c, what))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.last().is_some_and(|c| c == &BigInt::from(0)) {
        return Err(schema(format!("{what} has a trailing zero coefficient")));
    }
    Ok(PolyZ::new(coeffs))
}

fn evidence_of(v: &Value) -> Result<Vec<PrimeEvidence>, CertParseError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema("evidence must be an array"))?;
    items
        .iter()
        .map(|e| {
            let o = Obj::new(e, "evidence entry", &["p", "factors"])?;
            let p: u64 = o.nat("p")?;
            let factors = o
                .array("factors")?
                .iter()
                .map(|g| {
                    let cs = g
                        .as_array()
                        .ok_or_else(|| schema("factor must be an array"))?;
                    let cs = cs
                        .iter()
                        .map(|c| {
                            let c = int_of(c, "factor coefficient")?;
                            c.to_u64()
                                .ok_or_else(|| schema("factor coefficient out of range"))
                        })
                        .collect::<Result<Vec<u64>, _>>()?;
                    PolyModP::from_canonical(p, cs)
                        .ok_or_else(|| schema(format!("factor modulo {p} is not in reduced form")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PrimeEvidence { p, factors })
        })
        .collect()
}

fn primality_of(v: &Value) -> Result<PrimalityCert, CertParseError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("primality certificate needs a string kind"))?;
    match kind {
        "small" => {
            Obj::new(v, "primality", &["kind"])?;
            Ok(PrimalityCert::SmallPrime)
        }
        "probable" => {
            let o = Obj::new(v, "primality", &["kind", "rounds"])?;
            Ok(PrimalityCert::ProbablePrime {
                rounds: o.nat("rounds")?,
            })
        }
        "pratt" => {
            let o = Obj::new(v, "primality", &["kind", "witness", "factors"])?;
            let witness: BigUint = o.nat("witness")?;
            let factors = o
                .array("factors")?
                .iter()
                .map(|f| {
                    let fo = Obj::new(f, "pratt factor", &["q", "e", "cert"])?;
                    Ok(PrattFactor {
                        q: fo.nat("q")?,
                        e: fo.nat("e")?,
                        cert: primality_of(fo.get("cert"))?,
                    })
                })
                .collect::<Result<Vec<_>, CertParseError>>()?;
            Ok(PrimalityCert::LucasPratt { witness, factors })
        }
        other => Err(CertParseError::UnknownKind(other.to_string())),
    }
}

fn certificate_of(v: &Value, nested: bool) -> Result<Certificate, CertParseError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("certificate needs a string kind"))?;
    match kind {
        "linear" => {
            Obj::new(v, "certificate", &["kind"])?;
            Ok(Certificate::Linear)
        }
        "degree_analysis" => {
            let o = Obj::new(v, "certificate", &["kind", "evidence"])?;
            Ok(Certificate::DegreeAnalysis {
                evidence: evidence_of(o.get("evidence"))?,
            })
        }
        "lpfw" => {
            let o = Obj::new(
                v,
                "certificate",
                &[
                    "kind",
                    "rho",
                    "graeffe_iters",
                    "delta",
                    "evidence",
                    "n",
                    "p",
                    "primality",
                ],
            )?;
            let rho_s = o.str("rho")?;
            let rho = parse_rat(rho_s)
                .ok_or_else(|| CertParseError::NonCanonicalRational(rho_s.to_string()))?;
            let primality = match o.get("primality") {
                Value::Null => None,
                pc => Some(primality_of(pc)?),
            };
            Ok(Certificate::Lpfw(LpfwCert {
                root_bound: RootBoundCert {
                    rho,
                    graeffe_iters: o.nat("graeffe_iters")?,
                },
                delta: DeltaBound {
                    value: o.nat("delta")?,
                    evidence: evidence_of(o.get("evidence"))?,
                },
                n: o.int("n")?,
                p: o.nat("p")?,
                primality,
            }))
        }
        "transform" => {
            if nested {
                return Err(CertParseError::NestedTransform);
            }
            let o = Obj::new(v, "certificate", &["kind", "matrix", "image", "inner"])?;
            let entries = o.array("matrix")?;
            if entries.len() != 4 {
                return Err(schema("matrix must have four entries"));
            }
            let e = entries
                .iter()
                .map(|x| int_of(x, "matrix entry"))
                .collect::<Result<Vec<_>, _>>()?;
            let [a, b, c, d]: [BigInt; 4] = e.try_into().expect("four entries");
            Ok(Certificate::Transform {
                matrix: MoebiusMatrix::new(a, b, c, d),
                image: poly_of(o.get("image"), "image")?,
                inner: Box::new(certificate_of(o.get("inner"), true)?),
            })
        }
        other => Err(CertParseError::UnknownKind(other.to_string())),
    }
}

/// Reads a document. Whitespace between tokens is ignored; everything else
/// must be in the form [`serialize`] produces.
pub fn parse(text: &str) -> Result<CertificateDocument, CertParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CertParseError::Json(e.to_string()))?;
    let format = v
        .get("format")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("document needs a string format"))?;
    if format != FORMAT_VERSION {
        return Err(CertParseError::Version(format.to_string()));
    }
    let o = Obj::new(&v, "document", &["format", "polynomial", "certificate"])?;
    Ok(CertificateDocument {
        polynomial: poly_of(o.get("polynomial"), "polynomial")?,
        certificate: certificate_of(o.get("certificate"), false)?,
    })
}
