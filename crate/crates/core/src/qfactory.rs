//! Constructors for the named q-series: q-Pochhammer products, eta quotients,
//! theta and false theta functions, quadratic-exponent sums, and the derived
//! generating functions built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{check_order, CoeffRing, TruncatedSeries};

/// Sign of a monomial or of a summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn pow(self, k: u64) -> Sign {
        if self == Sign::Minus && k % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `+q^e` or `-q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    pub sign: Sign,
    pub exponent: u64,
}

impl SignedMonomial {
    pub fn plus(exponent: u64) -> Self {
        SignedMonomial { sign: Sign::Plus, exponent }
    }

    pub fn minus(exponent: u64) -> Self {
        SignedMonomial { sign: Sign::Minus, exponent }
    }

    pub fn negated(self) -> Self {
        SignedMonomial { sign: self.sign.flip(), exponent: self.exponent }
    }

    pub fn product(self, other: Self) -> Result<Self> {
        let exponent = self.exponent.checked_add(other.exponent).ok_or(Error::ExponentOverflow)?;
        Ok(SignedMonomial { sign: self.sign.times(other.sign), exponent })
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Minus { "-" } else { "" };
        write!(f, "{s}q^{}", self.exponent)
    }
}

/// Sign pattern of a quadratic-exponent sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignMode {
    /// all terms `+1`
    Plus,
    /// `(-1)^n`
    Alternating,
    /// `(-1)^{n(n+1)/2}`
    TriangularUp,
    /// `(-1)^{n(n-1)/2}`
    TriangularDown,
}

impl SignMode {
    fn sign_at(self, n: i64) -> i64 {
        let odd = match self {
            SignMode::Plus => false,
            SignMode::Alternating => n.rem_euclid(2) == 1,
            SignMode::TriangularUp => (n * (n + 1) / 2).rem_euclid(2) == 1,
            SignMode::TriangularDown => (n * (n - 1) / 2).rem_euclid(2) == 1,
        };
        if odd {
            -1
        } else {
            1
        }
    }
}

/// Summation range of a quadratic-exponent sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumRange {
    NonNegative,
    Positive,
    Negative,
    Bilateral,
}

/// `sum over n in range of sign(n) q^{a n^2 + b n + c}` with `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadSumSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub sign: SignMode,
    pub range: SumRange,
}

/// `prod f_m^e` with distinct `m >= 1` and nonzero `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(u32, i64)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(m, e) in &factors {
            if m == 0 || e == 0 || !seen.insert(m) {
                return Err(Error::InvalidClaim(format!(
                    "eta quotient factor (f{m})^{e} must have m >= 1, e != 0 and distinct m"
                )));
            }
        }
        Ok(EtaQuotientSpec { factors })
    }

    pub fn factors(&self) -> &[(u32, i64)] {
        &self.factors
    }
}

/// `(arg; base)_infinity = prod_{k>=0} (1 - arg * base^k)` truncated at `order`.
pub fn pochhammer(
    arg: SignedMonomial,
    base: SignedMonomial,
    ring: CoeffRing,
    order: usize,
) -> Result<TruncatedSeries> {
    check_order(order)?;
    if base.exponent == 0 {
        return Err(Error::DivergentProduct);
    }
    let mut out = TruncatedSeries::one(ring, order);
    for k in 0u64.. {
        let e = base
            .exponent
            .checked_mul(k)
            .and_then(|x| x.checked_add(arg.exponent))
            .ok_or(Error::ExponentOverflow)?;
        if e > order as u64 {
            break;
        }
        let sign = arg.sign.times(base.sign.pow(k));
        // 1 - sign q^e
        out.mul_binomial_in_place(-sign.value(), e as usize);
    }
    Ok(out)
}

/// `f_m = (q^m; q^m)_infinity`.
pub fn eta(m: u32, ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    let qm = SignedMonomial::plus(m as u64);
    pochhammer(qm, qm, ring, order)
}

pub fn eta_quotient(spec: &EtaQuotientSpec, ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    let mut num = TruncatedSeries::one(ring, order);
    let mut den = TruncatedSeries::one(ring, order);
    for &(m, e) in spec.factors() {
        let p = eta(m, ring, order)?.pow(e.abs())?;
        if e > 0 {
            num = num.try_mul(&p)?;
        } else {
            den = den.try_mul(&p)?;
        }
    }
    num.try_div(&den)
}

/// Representation requested from [`theta_f`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaForm {
    /// bilateral sum `sum a^{n(n+1)/2} b^{n(n-1)/2}`
    Sum,
    /// triple product `(-a, -b, ab; ab)_infinity`
    Product,
}

fn check_theta_args(a: SignedMonomial, b: SignedMonomial) -> Result<()> {
    let total = a.exponent.saturating_add(b.exponent);
    if total == 0 {
        return Err(Error::DegenerateThetaArgs(total));
    }
    Ok(())
}

/// Accumulates `sign(n) q^{e(n)}` over `n = start, start + step, ...` for a
/// convex exponent `e`, stopping once `e` exceeds `order` on its rising side.
fn accumulate(
    acc: &mut [i64],
    start: i64,
    step: i64,
    exponent: impl Fn(i64) -> Result<i64>,
    sign: impl Fn(i64) -> i64,
) -> Result<()> {
    let order = (acc.len() - 1) as i64;
    let mut n = start;
    loop {
        let e = exponent(n)?;
        if e < 0 {
            return Err(Error::NegativeExponent { n, exponent: e });
        }
        if e > order {
            let next = exponent(n + step)?;
            if next >= e {
                return Ok(());
            }
        } else {
            acc[e as usize] += sign(n);
        }
        n += step;
    }
}

fn theta_exponent(a: SignedMonomial, b: SignedMonomial) -> impl Fn(i64) -> Result<i64> {
    move |n: i64| {
        let up = n.checked_mul(n + 1).map(|x| x / 2);
        let down = n.checked_mul(n - 1).map(|x| x / 2);
        up.zip(down)
            .and_then(|(u, d)| {
                (a.exponent as i64).checked_mul(u)?.checked_add((b.exponent as i64).checked_mul(d)?)
            })
            .ok_or(Error::ExponentOverflow)
    }
}

fn theta_sign(a: SignedMonomial, b: SignedMonomial) -> impl Fn(i64) -> i64 {
    move |n: i64| {
        let u = (n * (n + 1) / 2).unsigned_abs();
        let d = (n * (n - 1) / 2).unsigned_abs();
        a.sign.pow(u).times(b.sign.pow(d)).value()
    }
}

/// Ramanujan's general theta function `f(a, b)`.
pub fn theta_f(
    a: SignedMonomial,
    b: SignedMonomial,
    form: ThetaForm,
    ring: CoeffRing,
    order: usize,
) -> Result<TruncatedSeries> {
    check_order(order)?;
    check_theta_args(a, b)?;
    match form {
        ThetaForm::Sum => {
            let mut acc = vec![0i64; order + 1];
            accumulate(&mut acc, 0, 1, theta_exponent(a, b), theta_sign(a, b))?;
            accumulate(&mut acc, -1, -1, theta_exponent(a, b), theta_sign(a, b))?;
            Ok(TruncatedSeries::from_i64(ring, &acc))
        }
        ThetaForm::Product => {
            let ab = a.product(b)?;
            let x = pochhammer(a.negated(), ab, ring, order)?;
            let y = pochhammer(b.negated(), ab, ring, order)?;
            let z = pochhammer(ab, ab, ring, order)?;
            x.try_mul(&y)?.try_mul(&z)
        }
    }
}

/// False theta function: the `n >= 0` half of `f(a, b)` minus the `n <= -1` half.
pub fn false_theta_psi(
    a: SignedMonomial,
    b: SignedMonomial,
    ring: CoeffRing,
    order: usize,
) -> Result<TruncatedSeries> {
    check_order(order)?;
    check_theta_args(a, b)?;
    let mut acc = vec![0i64; order + 1];
    accumulate(&mut acc, 0, 1, theta_exponent(a, b), theta_sign(a, b))?;
    let sign = theta_sign(a, b);
    accumulate(&mut acc, -1, -1, theta_exponent(a, b), move |n| -sign(n))?;
    Ok(TruncatedSeries::from_i64(ring, &acc))
}

pub fn quad_sum(spec: &QuadSumSpec, ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    if spec.a <= 0 {
        return Err(Error::InvalidClaim(format!(
            "quadratic sum needs a positive leading coefficient, got {}",
            spec.a
        )));
    }
    let QuadSumSpec { a, b, c, sign, range } = *spec;
    let exponent = move |n: i64| {
        n.checked_mul(n)
            .and_then(|n2| a.checked_mul(n2))
            .and_then(|x| x.checked_add(b.checked_mul(n)?))
            .and_then(|x| x.checked_add(c))
            .ok_or(Error::ExponentOverflow)
    };
    let mut acc = vec![0i64; order + 1];
    let (up, down) = match range {
        SumRange::NonNegative => (Some(0), None),
        SumRange::Positive => (Some(1), None),
        SumRange::Negative => (None, Some(-1)),
        SumRange::Bilateral => (Some(0), Some(-1)),
    };
    if let Some(start) = up {
        accumulate(&mut acc, start, 1, exponent, |n| sign.sign_at(n))?;
    }
    if let Some(start) = down {
        accumulate(&mut acc, start, -1, exponent, |n| sign.sign_at(n))?;
    }
    Ok(TruncatedSeries::from_i64(ring, &acc))
}

/// `sum_n c_t(n) q^n = 1 / Psi(-q^t, q)`.
pub fn c_t_series(t: u32, ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    if t == 0 {
        return Err(Error::NonPositive(0));
    }
    false_theta_psi(SignedMonomial::minus(t as u64), SignedMonomial::plus(1), ring, order)?.invert()
}

/// Generating functions with fixed names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedSeries {
    /// `sum_{n>=0} (-1)^{n(n+1)/2} q^{3n^2+2n}`
    A,
    /// `sum_{n<=-1} (-1)^{n(n+1)/2} q^{3n^2+2n}`
    B,
    /// `1/(A+B)`
    B1,
    /// `B/(A+B)^2`
    B2,
    /// `(A^2 B + A B^2)/(A+B)^4`
    B3,
    /// `f_3^6 / f_1^2`
    A1,
    /// `f_6^3 / f_2 * sum_{n>=1} q^{3n^2}`
    A2,
    /// `f_1 f_3 f_6`
    BProd,
    /// reciprocal of `Psi(-q^t, q)`
    C(u32),
}

impl NamedSeries {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "A" => NamedSeries::A,
            "B" => NamedSeries::B,
            "b1" => NamedSeries::B1,
            "b2" => NamedSeries::B2,
            "b3" => NamedSeries::B3,
            "a1" => NamedSeries::A1,
            "a2" => NamedSeries::A2,
            "b" => NamedSeries::BProd,
            _ => {
                let t: u32 = name.strip_prefix('c')?.parse().ok()?;
                if t == 0 || name.starts_with("c0") {
                    return None;
                }
                NamedSeries::C(t)
            }
        })
    }
}

impl fmt::Display for NamedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSeries::A => write!(f, "A"),
            NamedSeries::B => write!(f, "B"),
            NamedSeries::B1 => write!(f, "b1"),
            NamedSeries::B2 => write!(f, "b2"),
            NamedSeries::B3 => write!(f, "b3"),
            NamedSeries::A1 => write!(f, "a1"),
            NamedSeries::A2 => write!(f, "a2"),
            NamedSeries::BProd => write!(f, "b"),
            NamedSeries::C(t) => write!(f, "c{t}"),
        }
    }
}

const AB_EXPONENT: (i64, i64, i64) = (3, 2, 0);

fn part_a(ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    let (a, b, c) = AB_EXPONENT;
    let spec = QuadSumSpec { a, b, c, sign: SignMode::TriangularUp, range: SumRange::NonNegative };
    quad_sum(&spec, ring, order)
}

fn part_b(ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    let (a, b, c) = AB_EXPONENT;
    let spec = QuadSumSpec { a, b, c, sign: SignMode::TriangularUp, range: SumRange::Negative };
    quad_sum(&spec, ring, order)
}

pub fn named_series(name: NamedSeries, ring: CoeffRing, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    match name {
        NamedSeries::A => part_a(ring, order),
        NamedSeries::B => part_b(ring, order),
        NamedSeries::B1 => part_a(ring, order)?.try_add(&part_b(ring, order)?)?.invert(),
        NamedSeries::B2 => {
            let b = part_b(ring, order)?;
            let sum = part_a(ring, order)?.try_add(&b)?;
            b.try_div(&sum.pow(2)?)
        }
        NamedSeries::B3 => {
            let a = part_a(ring, order)?;
            let b = part_b(ring, order)?;
            let sum = a.try_add(&b)?;
            let num = a.pow(2)?.try_mul(&b)?.try_add(&a.try_mul(&b.pow(2)?)?)?;
            num.try_div(&sum.pow(4)?)
        }
        NamedSeries::A1 => eta_quotient(&EtaQuotientSpec { factors: vec![(3, 6), (1, -2)] }, ring, order),
        NamedSeries::A2 => {
            let squares = QuadSumSpec { a: 3, b: 0, c: 0, sign: SignMode::Plus, range: SumRange::Positive };
            eta_quotient(&EtaQuotientSpec { factors: vec![(6, 3), (2, -1)] }, ring, order)?
                .try_mul(&quad_sum(&squares, ring, order)?)
        }
        NamedSeries::BProd => {
            eta_quotient(&EtaQuotientSpec { factors: vec![(1, 1), (3, 1), (6, 1)] }, ring, order)
        }
        NamedSeries::C(t) => c_t_series(t, ring, order),
    }
}
