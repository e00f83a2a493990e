//! Elementary number theory at desk scale: trial-division factorization,
//! divisor sums, Legendre symbols, p-adic valuations and representation by
//! the forms `x^2 + y^2` and `2x^2 + y^2`.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::report::{VerificationReport, Violation};

/// Prime factorization with strictly increasing primes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    /// Sum of divisors `prod (p^{e+1} - 1)/(p - 1)`.
    pub fn sigma(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = p as u128;
                (p.pow(e + 1) - 1) / (p - 1)
            })
            .product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_ok_and(|f| f.factors == [(n, 1)])
}

/// Closed form for the coefficients of `f_3^6 / f_1^2`: `sigma(3n + 2) / 3`.
pub fn a1_formula(n: u64) -> Result<u128> {
    let arg = n.checked_mul(3).and_then(|x| x.checked_add(2)).ok_or(Error::ExponentOverflow)?;
    let sigma = factorize(arg)?.sigma();
    if sigma % 3 != 0 {
        return Err(Error::SigmaNotDivisible { arg, sigma: sigma as u64 });
    }
    Ok(sigma / 3)
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Exponent of the prime `p` in `n`.
pub fn nu_p(n: u64, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rest = n;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    Ok(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadForm {
    /// `x^2 + y^2`
    SumOfSquares,
    /// `2x^2 + y^2`
    TwiceSquarePlusSquare,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadForm::SumOfSquares => write!(f, "x^2+y^2"),
            QuadForm::TwiceSquarePlusSquare => write!(f, "2x^2+y^2"),
        }
    }
}

/// Exhaustive search for `n = c x^2 + y^2` over `x, y >= 0`.
pub fn representation(form: QuadForm, n: u64) -> Option<(u64, u64)> {
    let c = match form {
        QuadForm::SumOfSquares => 1,
        QuadForm::TwiceSquarePlusSquare => 2,
    };
    (0..=(n / c).isqrt()).find_map(|x| {
        let rest = n - c * x * x;
        let y = rest.isqrt();
        (y * y == rest).then_some((x, y))
    })
}

pub fn is_represented(form: QuadForm, n: u64) -> bool {
    representation(form, n).is_some()
}

pub(crate) fn check_seven_mod_eight(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 8 != 7 {
        return Err(Error::NotSevenModEight(p));
    }
    Ok(())
}

/// `3 (p^{2k+1} n + 2 (p^{2k+2} - 1) / 3) + 2`, the argument whose divisor
/// structure controls the prime-power congruence family.
pub fn audit_argument(p: u64, k: u32, n: u64) -> Result<u64> {
    let p = p as u128;
    let odd = p.checked_pow(2 * k + 1).ok_or(Error::ExponentOverflow)?;
    let even = odd.checked_mul(p).ok_or(Error::ExponentOverflow)?;
    let inner = odd
        .checked_mul(n as u128)
        .and_then(|x| x.checked_add(2 * (even - 1) / 3))
        .ok_or(Error::ExponentOverflow)?;
    let v = inner.checked_mul(3).and_then(|x| x.checked_add(2)).ok_or(Error::ExponentOverflow)?;
    u64::try_from(v).map_err(|_| Error::ExponentOverflow)
}

/// For `0 <= n < n_max` with `p` not dividing `n`, confirms that the audit
/// argument has p-adic valuation exactly `2k+1` and is represented by neither
/// `x^2 + y^2` nor `2x^2 + y^2`.
pub fn valuation_parity_audit(p: u64, k: u32, n_max: u64) -> Result<VerificationReport> {
    check_seven_mod_eight(p)?;
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("valuation-audit p={p} k={k}"));
    for n in 0..n_max {
        if n % p == 0 {
            report.n_skipped += 1;
            continue;
        }
        let arg = audit_argument(p, k, n)?;
        let nu = nu_p(arg, p)?;
        let mut problems = Vec::new();
        if nu != 2 * k + 1 {
            problems.push(format!("nu_{p} = {nu}"));
        }
        for form in [QuadForm::SumOfSquares, QuadForm::TwiceSquarePlusSquare] {
            if let Some((x, y)) = representation(form, arg) {
                problems.push(format!("{form} at ({x},{y})"));
            }
        }
        if !problems.is_empty() {
            report.violations.push(Violation {
                n,
                value: format!("{arg}: {}", problems.join(", ")),
                expected: None,
            });
        }
        report.n_checked += 1;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
