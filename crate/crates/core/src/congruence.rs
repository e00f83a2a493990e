//! Arithmetic-progression congruence claims: the built-in catalog, the
//! prime-power family for `c_5`, the checker, and the density scan.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{check_seven_mod_eight, is_prime};
use crate::error::{Error, Result};
use crate::expr::{parse, Evaluator};
use crate::report::{VerificationReport, Violation};
use crate::series::{CoeffRing, TruncatedSeries};

/// Default truncation budget from which recommended `n_max` values derive.
pub const ORDER_BUDGET: usize = 12000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimFamily {
    /// congruences for `c_5` and `c_9` proved before the conjectured ones
    Known,
    /// the conjectured mod 4 and mod 8 congruences for `c_5`
    Conjecture,
    /// instances of the prime-power family
    PrimePower,
    B1,
    B2,
    B3,
    /// coefficients of `f_1 f_3 f_6`
    BProd,
    Custom,
}

/// "The coefficient of `q^{A n + B}` in `series` vanishes mod `M` for all
/// `n >= 0`", optionally only for `n` not divisible by a prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceClaim {
    /// Series as a DSL expression, e.g. `c5` or `1/psi(5)`.
    pub series: String,
    pub step: u64,
    pub offset: u64,
    pub modulus: u64,
    pub exclude_p: Option<u64>,
    pub family: ClaimFamily,
}

impl CongruenceClaim {
    pub fn new(series: &str, step: u64, offset: u64, modulus: u64) -> Result<Self> {
        Self::build(series, step, offset, modulus, None, ClaimFamily::Custom)
    }

    /// Offsets at or beyond `step` are only meaningful together with an
    /// exclusion, where shifting `n` would move the excluded class.
    pub fn build(
        series: &str,
        step: u64,
        offset: u64,
        modulus: u64,
        exclude_p: Option<u64>,
        family: ClaimFamily,
    ) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidClaim("progression step must be >= 1".into()));
        }
        if modulus < 2 {
            return Err(Error::InvalidClaim(format!("congruence modulus {modulus} must be >= 2")));
        }
        match exclude_p {
            Some(p) if !is_prime(p) => return Err(Error::NotPrime(p)),
            None if offset >= step => {
                return Err(Error::InvalidClaim(format!("residue {offset} must be below the step {step}")))
            }
            _ => {}
        }
        parse(series)?;
        Ok(CongruenceClaim { series: series.to_string(), step, offset, modulus, exclude_p, family })
    }

    pub fn with_exclusion(mut self, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        self.exclude_p = Some(p);
        Ok(self)
    }

    /// Index of the `n`-th coefficient the claim constrains.
    pub fn index(&self, n: u64) -> Option<u64> {
        self.step.checked_mul(n)?.checked_add(self.offset)
    }

    /// Truncation order needed to check `n < n_max`.
    pub fn required_order(&self, n_max: u64) -> Option<u64> {
        self.index(n_max)
    }

    /// Largest `n_max` whose required order fits in `order`.
    pub fn n_max_for_order(&self, order: usize) -> u64 {
        (order as u64).saturating_sub(self.offset) / self.step
    }

    pub fn recommended_n_max(&self) -> u64 {
        self.n_max_for_order(ORDER_BUDGET)
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}n+{}) = 0 mod {}", self.series, self.step, self.offset, self.modulus)?;
        if let Some(p) = self.exclude_p {
            write!(f, " [{p} !| n]")?;
        }
        Ok(())
    }
}

/// Checks `coefficient(A n + B) = 0 (mod M)` for `0 <= n < n_max`, recording every violation.
pub fn check_claim(
    series: &TruncatedSeries,
    claim: &CongruenceClaim,
    n_max: u64,
) -> Result<VerificationReport> {
    let required = claim.required_order(n_max).ok_or(Error::ExponentOverflow)?;
    if (series.order() as u64) < required {
        return Err(Error::InsufficientOrder { required: required as usize, available: series.order() });
    }
    if !series.ring().supports_modulus(claim.modulus) {
        return Err(Error::IncompatibleModulus { from: series.ring(), to: claim.modulus });
    }
    let start = Instant::now();
    let mut report = VerificationReport::new(claim.to_string());
    for n in 0..n_max {
        if claim.exclude_p.is_some_and(|p| n % p == 0) {
            report.n_skipped += 1;
            continue;
        }
        let idx = claim.index(n).expect("bounded by required order") as usize;
        if series.residue(idx, claim.modulus)? != 0 {
            report.violations.push(Violation { n, value: series.coeff(idx)?.to_string(), expected: None });
        }
        report.n_checked += 1;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `c_5(4 p^{2k+1} n + (8 p^{2k+2} + 1)/3) = 0 (mod 4)` for `p = 7 (mod 8)` prime and `p !| n`.
pub fn theorem2_family(p: u64, k: u32) -> Result<CongruenceClaim> {
    check_seven_mod_eight(p)?;
    let odd = p.checked_pow(2 * k + 1).ok_or(Error::ExponentOverflow)?;
    let even = odd.checked_mul(p).ok_or(Error::ExponentOverflow)?;
    let step = odd.checked_mul(4).ok_or(Error::ExponentOverflow)?;
    let numer = even.checked_mul(8).and_then(|x| x.checked_add(1)).ok_or(Error::ExponentOverflow)?;
    // p is prime and not 3, so p^2 = 1 (mod 3) and 8 p^{2k+2} + 1 = 0 (mod 3).
    assert_eq!(numer % 3, 0, "offset of the prime-power family is integral");
    CongruenceClaim::build("c5", step, numer / 3, 4, Some(p), ClaimFamily::PrimePower)
}

fn claim(series: &str, step: u64, offset: u64, modulus: u64, family: ClaimFamily) -> CongruenceClaim {
    CongruenceClaim::build(series, step, offset, modulus, None, family).expect("valid builtin claim")
}

/// The fixed catalog of congruences, in reporting order.
pub fn builtin_claims() -> Vec<CongruenceClaim> {
    use ClaimFamily::*;
    let mut out = vec![
        claim("c5", 8, 5, 2, Known),
        claim("c5", 32, 31, 4, Known),
        claim("c9", 16, 12, 2, Known),
        claim("c5", 32, 31, 8, Conjecture),
        claim("c5", 128, 123, 8, Conjecture),
        claim("c5", 512, 491, 8, Conjecture),
        claim("c5", 64, 19, 4, Conjecture),
        claim("c5", 256, 75, 4, Conjecture),
    ];
    for r in [110, 138, 194] {
        out.push(claim("c5", 196, r, 4, Conjecture));
    }
    for r in [19, 47, 75, 103, 159, 187] {
        out.push(claim("c5", 196, r, 4, Conjecture));
    }
    out.extend([
        claim("b1", 32, 31, 8, B1),
        claim("b1", 128, 123, 8, B1),
        claim("b1", 512, 491, 8, B1),
        claim("b1", 64, 19, 4, B1),
        claim("b1", 256, 75, 4, B1),
    ]);
    for r in [110, 138, 194] {
        out.push(claim("b1", 196, r, 4, B1));
    }
    out.extend([
        claim("b2", 32, 31, 4, B2),
        claim("b2", 128, 123, 4, B2),
        claim("b2", 512, 491, 4, B2),
        claim("b2", 32, 19, 2, B2),
        claim("b2", 128, 75, 2, B2),
    ]);
    for s in [26, 54, 110, 138, 166, 194] {
        out.push(claim("b2", 196, s, 2, B2));
    }
    out.extend([claim("b3", 16, 15, 2, B3), claim("b3", 64, 59, 2, B3), claim("b3", 256, 235, 2, B3)]);
    for r in [27, 34, 48] {
        out.push(claim("b", 49, r, 4, BProd));
    }
    out
}

/// Claims of one family, in catalog order.
pub fn claims_in(family: ClaimFamily) -> Vec<CongruenceClaim> {
    builtin_claims().into_iter().filter(|c| c.family == family).collect()
}

/// Modulus to evaluate a series in so that every claim on it can be checked:
/// the lcm of the claim moduli.
pub fn evaluation_modulus<'a>(claims: impl IntoIterator<Item = &'a CongruenceClaim>) -> u64 {
    claims.into_iter().fold(1u64, |acc, c| acc.lcm(&c.modulus))
}

/// Evaluates each distinct series once (to the largest required order, in the
/// lcm ring of its claims) and checks every claim at the given `n_max`.
///
/// Reports come back in the order of `claims`.
pub fn check_claims(claims: &[(CongruenceClaim, u64)]) -> Result<Vec<VerificationReport>> {
    let mut groups: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for (c, n_max) in claims {
        let need = c.required_order(*n_max).ok_or(Error::ExponentOverflow)?;
        let entry = groups.entry(c.series.as_str()).or_insert((1, 0));
        entry.0 = entry.0.lcm(&c.modulus);
        entry.1 = entry.1.max(need);
    }
    let mut series = BTreeMap::new();
    for (name, (modulus, order)) in groups {
        let expr = parse(name)?;
        let s = Evaluator::new(CoeffRing::modular(modulus)?)
            .evaluate(&expr, order as usize)
            .map_err(|e| e.context(format!("evaluating {name}")))?;
        series.insert(name, s);
    }
    claims.iter().map(|(c, n_max)| check_claim(&series[c.series.as_str()], c, *n_max)).collect()
}

/// Result of [`density_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Density {
    pub count: u64,
    pub total: u64,
    pub fraction: f64,
}

/// Counts `n < n_max` whose coefficient vanishes mod `m`.
pub fn density_scan(series: &TruncatedSeries, m: u64, n_max: u64) -> Result<Density> {
    if n_max > 0 && (series.order() as u64) < n_max - 1 {
        return Err(Error::InsufficientOrder { required: (n_max - 1) as usize, available: series.order() });
    }
    let mut count = 0;
    for n in 0..n_max {
        if series.residue(n as usize, m)? == 0 {
            count += 1;
        }
    }
    let fraction = if n_max == 0 { 0.0 } else { count as f64 / n_max as f64 };
    Ok(Density { count, total: n_max, fraction })
}
