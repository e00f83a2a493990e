//! Catalog of named series identities and congruences between series, with
//! a coefficientwise verifier.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Evaluator, SeriesCache};
use crate::report::{VerificationReport, Violation, WindowRow};
use crate::series::CoeffRing;

/// Default order for exact entries.
pub const EXACT_ORDER: usize = 1500;
/// Default order for congruence entries.
pub const MODULAR_ORDER: usize = 2000;

/// Coefficients shown on each side of the first mismatch.
const WINDOW_RADIUS: usize = 2;

/// `lhs = rhs`, or `lhs = rhs (mod modulus)` when `modulus > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityEntry {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub modulus: u64,
    pub default_order: usize,
}

impl IdentityEntry {
    fn exact(name: &str, lhs: &str, rhs: &str) -> Self {
        IdentityEntry {
            name: name.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            modulus: 0,
            default_order: EXACT_ORDER,
        }
    }

    fn modular(name: &str, lhs: &str, rhs: &str, modulus: u64) -> Self {
        IdentityEntry {
            name: name.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            modulus,
            default_order: MODULAR_ORDER,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.modulus == 0
    }
}

/// Sums of `q^{147 n^2 + b n + c}` splitting `sum_{n in Z} q^{3n^2+2n}` by
/// the residue of `n` mod 7.
const BILATERAL_MOD7: [(i64, i64); 7] =
    [(14, 0), (-28, 1), (56, 5), (-70, 8), (98, 16), (-112, 21), (140, 33)];

/// Same for `sum_{n>=1} q^{3n^2-n}`; the first piece starts at `n = 1`.
const POSITIVE_MOD7: [(i64, i64); 7] =
    [(-7, 0), (35, 2), (77, 10), (119, 24), (161, 44), (203, 70), (245, 102)];

fn mod7_split(pieces: &[(i64, i64)], first_range: &str, rest_range: &str) -> String {
    pieces
        .iter()
        .enumerate()
        .map(|(i, (b, c))| {
            let range = if i == 0 { first_range } else { rest_range };
            format!("quadsum(147,{b},{c};plus;{range})")
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// All cataloged entries, exact ones first.
pub fn catalog() -> Vec<IdentityEntry> {
    let e = IdentityEntry::exact;
    let m = IdentityEntry::modular;
    let mut out = vec![
        e("jtp-f1", "theta(-q,-q^2)", "f1"),
        e("jtp-phi", "theta(-q,-q)", "f1^2/f2"),
        e("jtp-psiodd", "theta(-q,-q^3)", "f1*f4/f2"),
        e("psi-five", "psi(5)", "A-B"),
        e("theta-five", "theta(-q^5,q)", "A+B"),
        e("AB-product", "A+B", "poch(-q;-q^6)*poch(q^5;-q^6)*poch(-q^6;-q^6)"),
        e(
            "AB-product-12",
            "A+B",
            "poch(-q;q^12)*poch(q^5;q^12)*poch(q^7;q^12)*poch(-q^11;q^12)*f12^3/(f6*f24)",
        ),
        e("recip-form", "b1", "f4*f6^2*f24/(f2*f12^6)*theta(-q,-q^11)*theta(q^5,q^7)"),
        e("theta-mult", "theta(-q,-q^11)*theta(q^5,q^7)", "f6*f8*f24/f12-q*f4*f6*f24^3/(f8*f12^2)"),
        e("b1-closed", "b1", "f4*f6^3*f24^2/(f2*f12^7)*(f8-q*f4*f24^2/(f8*f12))"),
        e("b1-even", "dissect(b1;2;0)", "f3^3/f1*f2*f4*f12^2/f6^7"),
        e("b1-odd", "dissect(b1;2;1)", "-f3^3/f1*f2^2*f12^4/(f4*f6^8)"),
        e("b1-4n2", "dissect(b1;4;2)", "f1*f6^5/f3^7"),
        e("cube-2dissect", "f3^3/f1", "f4^3*f6^2/(f2^2*f12)+q*f12^3/f4"),
        e("square-2dissect", "f1^2", "f2*f8^5/(f4^2*f16^2)-2*q*f2*f16^2/f8"),
        e("inv-square-2dissect", "f1^-2", "f8^5/(f2^5*f16^2)+2*q*f4^2*f16^2/(f2^5*f8)"),
        e("ratio-2dissect", "f3^2/f1^2", "f4^4*f6*f12^2/(f2^5*f8*f24)+2*q*f4*f6^2*f8*f24/(f2^4*f12)"),
        e("ratio-2dissect-neg", "f1^2/f3^2", "f2*f4^2*f12^4/(f6^5*f8*f24)-2*q*f2^2*f8*f12*f24/(f4*f6^4)"),
        e("cube-ratio", "f1^3/f3", "f4^3/f12-3*q*f2^2*f12^3/(f4*f6^2)"),
        e("eta-6", "poch(q;q^6)*poch(q^5;q^6)*poch(q^6;q^6)", "f1*f6^2/(f2*f3)"),
        e(
            "split-3n2p2n",
            "quadsum(3,2,0;plus;n>=0)",
            "quadsum(12,4,0;plus;n>=0)+q^5*quadsum(12,16,0;plus;n>=0)",
        ),
        e(
            "split-3n2p4n",
            "quadsum(3,4,0;plus;n>=0)",
            "quadsum(12,8,0;plus;n>=0)+q^7*quadsum(12,20,0;plus;n>=0)",
        ),
        e("split-mod7-bilateral", "quadsum(3,2,0;plus;all)", &mod7_split(&BILATERAL_MOD7, "all", "all")),
        e("split-mod7-positive", "quadsum(3,-1,0;plus;n>=1)", &mod7_split(&POSITIVE_MOD7, "n>=1", "n>=0")),
        e("bilateral-eta", "quadsum(3,2,0;plus;all)", "f2^2*f3*f12/(f1*f4*f6)"),
        m("AB-mod2", "A+B", "poch(q;q^6)*poch(q^5;q^6)*poch(q^6;q^6)", 2),
        m("AB-eta-mod2", "A+B", "f1*f6^2/(f2*f3)", 2),
        m("cube-mod2", "f3^3/f1", "quadsum(3,2,0;plus;all)", 2),
        m("half-cube-mod2", "f3/f1", "f8/f6+q*f6*f24/f4", 2),
    ];
    for e in 1..=3u32 {
        for k in 1..=3u32 {
            out.push(m(
                &format!("freshman-m{e}-k{k}"),
                &format!("f{k}^{}", 1u32 << e),
                &format!("f{}^{}", 2 * k, 1u32 << (e - 1)),
                1 << e,
            ));
        }
    }
    out.extend([
        m("b1-odd-mod8", "dissect(b1;2;1)", "-f3^3/f1*f2^2/f4", 8),
        m("b1-4n3-mod8", "dissect(b1;4;3)", "-f1^2*f6^3/f2^2", 8),
        m("b1-4n2-mod4", "dissect(b1;4;2)", "b", 4),
        m("b1-4n3-a-split", "dissect(b1;4;3)", "-a1+2*a2", 4),
        m(
            "b2-4n3-mod4",
            "dissect(b2;4;3)",
            "(2*f8+f1^3/f3*f12/f4)*(quadsum(12,4,0;plus;n>=0)-q^5*quadsum(12,16,0;plus;n>=0))",
            4,
        ),
        m("b2-4n2-mod2", "dissect(b2;4;2)", "quadsum(3,2,0;plus;all)*quadsum(3,-1,0;plus;n>=1)", 2),
        m(
            "b3-mod2",
            "b3",
            "f3/f1*f4/(f6*f24)*quadsum(6,4,0;plus;n>=0)+f2/(f6*f12)*quadsum(3,2,0;plus;n>=0)",
            2,
        ),
        m("c5-decomposition", "c5", "b1-2*b2+4*b3", 8),
        m("c5-mod4", "c5", "b1-2*b2", 4),
    ]);
    out
}

pub fn find(name: &str) -> Option<IdentityEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Looks up `name` and verifies it at `order` (or its default order).
pub fn verify_named(name: &str, order: Option<usize>) -> Result<VerificationReport> {
    let entry = find(name).ok_or_else(|| Error::UnknownIdentity(name.to_string()))?;
    verify_identity(&entry, order.unwrap_or(entry.default_order))
}

pub fn verify_identity(entry: &IdentityEntry, order: usize) -> Result<VerificationReport> {
    verify_pair(&entry.name, &entry.lhs, &entry.rhs, entry.modulus, order)
}

pub fn verify_pair(
    name: &str,
    lhs: &str,
    rhs: &str,
    modulus: u64,
    order: usize,
) -> Result<VerificationReport> {
    verify_pair_cached(name, lhs, rhs, modulus, order, None)
}

/// Evaluates both sides over `Z` (`modulus == 0`) or `Z/modulus` and compares
/// coefficients `0..=order`. Every mismatch becomes a violation.
pub fn verify_pair_cached(
    name: &str,
    lhs: &str,
    rhs: &str,
    modulus: u64,
    order: usize,
    cache: Option<SeriesCache>,
) -> Result<VerificationReport> {
    let run = || -> Result<VerificationReport> {
        let ring = CoeffRing::new(modulus)?;
        let (l, r) = (parse(lhs)?, parse(rhs)?);
        let mut ev = match cache {
            Some(c) => Evaluator::with_cache(ring, c),
            None => Evaluator::new(ring),
        };
        let start = Instant::now();
        let ls = ev.evaluate(&l, order)?;
        let rs = ev.evaluate(&r, order)?;
        let mut report = VerificationReport::new(name);
        let (lc, rc) = (ls.to_bigints(), rs.to_bigints());
        for n in 0..=order {
            if lc[n] != rc[n] {
                report.violations.push(Violation {
                    n: n as u64,
                    value: lc[n].to_string(),
                    expected: Some(rc[n].to_string()),
                });
            }
        }
        report.n_checked = order as u64 + 1;
        if let Some(first) = report.violations.first() {
            let at = first.n as usize;
            let lo = at.saturating_sub(WINDOW_RADIUS);
            let hi = (at + WINDOW_RADIUS).min(order);
            report.window =
                (lo..=hi).map(|n| WindowRow { n, lhs: lc[n].to_string(), rhs: rc[n].to_string() }).collect();
        }
        report.elapsed = start.elapsed();
        Ok(report)
    };
    run().map_err(|e| e.context(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_are_unique_and_parse() {
        let all = catalog();
        assert!(all.len() >= 22);
        let names: HashSet<_> = all.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), all.len());
        for e in &all {
            parse(&e.lhs).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            parse(&e.rhs).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(e.default_order >= if e.is_exact() { 1000 } else { 2000 });
        }
    }

    #[test]
    fn moduli_of_known_entries() {
        assert_eq!(find("cube-2dissect").unwrap().modulus, 0);
        assert_eq!(find("AB-mod2").unwrap().modulus, 2);
        assert_eq!(find("freshman-m3-k2").unwrap().rhs, "f4^4");
        assert!(find("nope").is_none());
    }

    #[test]
    fn unequal_pair_reports_first_mismatch() {
        let r = verify_pair("f1-vs-f2", "f1", "f2", 0, 10).unwrap();
        assert!(!r.passed());
        let v = &r.violations[0];
        assert_eq!((v.n, v.value.as_str(), v.expected.as_deref()), (1, "-1", Some("0")));
        assert_eq!(r.window.first().unwrap().n, 0);
        assert_eq!(r.window.last().unwrap().n, 3);
    }

    #[test]
    fn small_order_checks_pass() {
        for e in catalog() {
            let r = verify_identity(&e, 120).unwrap();
            assert!(r.passed(), "{} fails at {:?}", e.name, r.violations.first());
        }
    }

    #[test]
    fn errors_carry_the_entry_name() {
        let err = verify_pair("bad", "1/q", "1", 0, 5).unwrap_err();
        assert!(err.to_string().contains("bad"));
        assert!(matches!(verify_named("missing", None), Err(Error::UnknownIdentity(_))));
    }
}
