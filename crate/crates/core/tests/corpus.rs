//! Certify-then-verify over a corpus of irreducible polynomials whose
//! irreducibility was confirmed independently (computer algebra).

use irredcert::certio::{parse, serialize};
use irredcert::parser::parse_poly;
use irredcert::{certify, verify, CertifyConfig, Verdict};

const CORPUS: &[(&str, &str)] = &[
    ("Phi7", "x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    ("Phi8", "x^4 + 1"),
    ("Phi9", "x^6 + x^3 + 1"),
    ("Phi10", "x^4 - x^3 + x^2 - x + 1"),
    ("Phi11", "x^10 + x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    ("Phi12", "x^4 - x^2 + 1"),
    ("Phi13", "x^12 + x^11 + x^10 + x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    ("Phi14", "x^6 - x^5 + x^4 - x^3 + x^2 - x + 1"),
    ("Phi15", "x^8 - x^7 + x^5 - x^4 + x^3 - x + 1"),
    ("Phi16", "x^8 + 1"),
    ("Phi17", "x^16 + x^15 + x^14 + x^13 + x^12 + x^11 + x^10 + x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    ("Phi18", "x^6 - x^3 + 1"),
    ("Phi19", "x^18 + x^17 + x^16 + x^15 + x^14 + x^13 + x^12 + x^11 + x^10 + x^9 + x^8 + x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    ("Phi20", "x^8 - x^6 + x^4 - x^2 + 1"),
    ("Phi21", "x^12 - x^11 + x^9 - x^8 + x^6 - x^4 + x^3 - x + 1"),
    ("SD2_3", "x^4 - 10x^2 + 1"),
    ("SD2_5", "x^4 - 14x^2 + 9"),
    ("SD3_5", "x^4 - 16x^2 + 4"),
    ("SD2_7", "x^4 - 18x^2 + 25"),
    ("SD5_7", "x^4 - 24x^2 + 4"),
    ("SD2_3_5", "x^8 - 40x^6 + 352x^4 - 960x^2 + 576"),
    ("SD2_3_7", "x^8 - 48x^6 + 536x^4 - 1728x^2 + 400"),
    ("quartic31", "x^4 + x^3 + 3x + 4"),
    ("deg12", "x^12 + 12x^4 + 92"),
    ("quartic_delta", "x^4 - 1036x^2 + 7744"),
    ("deg16", "x^16 + 4x^14 + 6x^2 + 4"),
    ("quartic107", "x^4 + 16x^3 + 5x^2 - 14x - 18"),
    ("moebius97", "97x^4 + 76x^3 + 78x^2 + 4x + 2"),
    ("sd_octic", "x^8 - 1388x^6 + 418334x^4 - 39764348x^2 + 1001785801"),
    ("x3m2", "x^3 - 2"),
];

#[test]
fn corpus_round_trip() {
    let mut failures = Vec::new();
    for &(name, text) in CORPUS {
        let f = parse_poly(text).unwrap();
        match certify(&f, &CertifyConfig::default()) {
            Ok(Verdict::Certified { doc }) => {
                let bytes = serialize(&doc);
                let back = parse(&bytes).expect("own output parses");
                if serialize(&back) != bytes {
                    failures.push(format!("{name}: round trip changed bytes"));
                }
                if let Err(e) = verify(&f, &back, false) {
                    failures.push(format!("{name}: rejected ({e})"));
                }
            }
            other => failures.push(format!("{name}: {other:?}")),
        }
    }
    assert_eq!(CORPUS.len(), 30);
    assert!(failures.is_empty(), "{failures:#?}");
}
