//! Truncated formal power series in `q` over exact or modular integer rings.
//!
//! A [`TruncatedSeries`] stores the coefficients of `q^0 ..= q^N`. Values are
//! immutable: every operation returns a new series. Binary operations truncate
//! to the smaller of the two orders and refuse to mix coefficient rings.

mod kernels;
mod ring;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use ring::CoeffRing;

use crate::error::{Error, Result};

/// Largest truncation order accepted by the constructors (2^20).
pub const MAX_ORDER: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Modular(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: CoeffRing,
    coeffs: Coeffs,
}

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge(order));
    }
    Ok(())
}

impl TruncatedSeries {
    pub fn zero(ring: CoeffRing, order: usize) -> Self {
        let coeffs = if ring.is_exact() {
            Coeffs::Exact(vec![BigInt::zero(); order + 1])
        } else {
            Coeffs::Modular(vec![0; order + 1])
        };
        TruncatedSeries { ring, coeffs }
    }

    pub fn one(ring: CoeffRing, order: usize) -> Self {
        Self::monomial(ring, order, 0, 1)
    }

    /// `c * q^exponent`, which is the zero series if `exponent > order`.
    pub fn monomial(ring: CoeffRing, order: usize, exponent: usize, c: i64) -> Self {
        let mut v = vec![0i64; order + 1];
        if exponent <= order {
            v[exponent] = c;
        }
        Self::from_i64(ring, &v)
    }

    /// Builds a series of order `values.len() - 1`, reducing into `ring`.
    pub fn from_i64(ring: CoeffRing, values: &[i64]) -> Self {
        assert!(!values.is_empty(), "a series has at least one coefficient");
        let coeffs = if ring.is_exact() {
            Coeffs::Exact(values.iter().map(|&v| BigInt::from(v)).collect())
        } else {
            Coeffs::Modular(values.iter().map(|&v| ring.reduce_i64(v)).collect())
        };
        TruncatedSeries { ring, coeffs }
    }

    pub fn from_bigints(ring: CoeffRing, values: Vec<BigInt>) -> Self {
        assert!(!values.is_empty(), "a series has at least one coefficient");
        let coeffs = if ring.is_exact() {
            Coeffs::Exact(values)
        } else {
            Coeffs::Modular(values.iter().map(|v| ring.reduce_big(v)).collect())
        };
        TruncatedSeries { ring, coeffs }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    /// Highest retained exponent.
    pub fn order(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Modular(v) => v.len(),
        }
    }

    pub fn coeff(&self, n: usize) -> Result<BigInt> {
        if n > self.order() {
            return Err(Error::IndexOutOfRange { index: n, order: self.order() });
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(v) => v[n].clone(),
            Coeffs::Modular(v) => BigInt::from(v[n]),
        })
    }

    /// Coefficient of `q^n` reduced modulo `m`; the ring must determine it.
    pub fn residue(&self, n: usize, m: u64) -> Result<u64> {
        if !self.ring.supports_modulus(m) {
            return Err(Error::IncompatibleModulus { from: self.ring, to: m });
        }
        if n > self.order() {
            return Err(Error::IndexOutOfRange { index: n, order: self.order() });
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(v) => v[n].mod_floor(&BigInt::from(m)).to_u64().expect("residue fits"),
            Coeffs::Modular(v) => v[n] % m,
        })
    }

    /// All coefficients as integers (canonical residues in a modular ring).
    pub fn to_bigints(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Modular(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Residues of a modular series; `None` for the exact ring.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Modular(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().all(Zero::is_zero),
            Coeffs::Modular(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// Number of nonzero stored coefficients.
    pub fn nonzero_count(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Modular(v) => v.iter().filter(|&&c| c != 0).count(),
        }
    }

    /// Drops every coefficient above `order`; orders larger than the current one are clamped.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[..keep].to_vec()),
            Coeffs::Modular(v) => Coeffs::Modular(v[..keep].to_vec()),
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    fn same_ring(&self, other: &Self) -> Result<usize> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        Ok(self.order().min(other.order()) + 1)
    }

    fn zip_with(
        &self,
        other: &Self,
        exact: impl Fn(&BigInt, &BigInt) -> BigInt,
        modular: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<Self> {
        let len = self.same_ring(other)?;
        let m = self.ring.modulus();
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Coeffs::Exact(a[..len].iter().zip(&b[..len]).map(|(x, y)| exact(x, y)).collect())
            }
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                Coeffs::Modular(a[..len].iter().zip(&b[..len]).map(|(&x, &y)| modular(x, y, m)).collect())
            }
            _ => unreachable!("ring tag and storage agree"),
        };
        Ok(TruncatedSeries { ring: self.ring, coeffs })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y, |x, y, m| ((x as u128 + y as u128) % m as u128) as u64)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y, |x, y, m| ((x as u128 + (m - y) as u128) % m as u128) as u64)
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus();
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| -c).collect()),
            Coeffs::Modular(v) => Coeffs::Modular(v.iter().map(|&c| (m - c) % m).collect()),
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    pub fn scale(&self, k: i64) -> Self {
        self.scale_big(&BigInt::from(k))
    }

    pub fn scale_big(&self, k: &BigInt) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| c * k).collect()),
            Coeffs::Modular(v) => {
                let m = self.ring.modulus() as u128;
                let k = self.ring.reduce_big(k) as u128;
                Coeffs::Modular(v.iter().map(|&c| (c as u128 * k % m) as u64).collect())
            }
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let len = self.same_ring(other)?;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(kernels::mul_exact(&a[..len], &b[..len])),
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                Coeffs::Modular(kernels::mul_mod(&a[..len], &b[..len], self.ring.modulus()))
            }
            _ => unreachable!("ring tag and storage agree"),
        };
        Ok(TruncatedSeries { ring: self.ring, coeffs })
    }

    /// `self / other`, i.e. `self * invert(other)`, by forward substitution.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let len = self.same_ring(other)?;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                if !b[0].abs().is_one() {
                    return Err(Error::NonUnit { value: b[0].to_string(), ring: self.ring });
                }
                Coeffs::Exact(kernels::div_exact(&a[..len], &b[..len]))
            }
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                let m = self.ring.modulus();
                let inv0 = self
                    .ring
                    .inverse(b[0])
                    .ok_or_else(|| Error::NonUnit { value: b[0].to_string(), ring: self.ring })?;
                Coeffs::Modular(kernels::div_mod(&a[..len], &b[..len], inv0, m))
            }
            _ => unreachable!("ring tag and storage agree"),
        };
        Ok(TruncatedSeries { ring: self.ring, coeffs })
    }

    /// Reciprocal to the same order. The constant term must be a unit.
    ///
    /// The result coincides with the forward recurrence
    /// `y_n = -x_0^{-1} * sum_{k=1..n} x_k y_{n-k}`; zero terms of `x` are skipped.
    pub fn invert(&self) -> Result<Self> {
        Self::one(self.ring, self.order()).try_div(self)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut result = Self::one(self.ring, self.order());
        let mut base = self.clone();
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        if e < 0 {
            result.invert()
        } else {
            Ok(result)
        }
    }

    /// Multiplies by `q^k`; the top `k` coefficients fall off.
    pub fn shift(&self, k: usize) -> Self {
        let len = self.len();
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate().take(len.saturating_sub(k)) {
                    out[i + k] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Modular(v) => {
                let mut out = vec![0; len];
                for (i, &c) in v.iter().enumerate().take(len.saturating_sub(k)) {
                    out[i + k] = c;
                }
                Coeffs::Modular(out)
            }
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    /// Substitutes `q -> q^m`, keeping the order.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1, "substitution power must be positive");
        let len = self.len();
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate().take_while(|(i, _)| i * m < len) {
                    out[i * m] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Modular(v) => {
                let mut out = vec![0; len];
                for (i, &c) in v.iter().enumerate().take_while(|(i, _)| i * m < len) {
                    out[i * m] = c;
                }
                Coeffs::Modular(out)
            }
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    /// `sum_n x_{m n + r} q^n`, of order `(N - r) / m`.
    ///
    /// A residue beyond the order yields the zero series of order 0.
    pub fn dissect(&self, m: usize, r: usize) -> Self {
        assert!(m >= 1 && r < m, "dissection needs m >= 1 and 0 <= r < m");
        if r > self.order() {
            return Self::zero(self.ring, 0);
        }
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[r..].iter().step_by(m).cloned().collect()),
            Coeffs::Modular(v) => Coeffs::Modular(v[r..].iter().step_by(m).copied().collect()),
        };
        TruncatedSeries { ring: self.ring, coeffs }
    }

    /// Image in `Z/mZ`. From a modular ring this requires `m` to divide its modulus.
    pub fn reduce_mod(&self, m: u64) -> Result<Self> {
        let target = CoeffRing::modular(m)?;
        if !self.ring.supports_modulus(m) {
            return Err(Error::IncompatibleModulus { from: self.ring, to: m });
        }
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Modular(v.iter().map(|c| target.reduce_big(c)).collect()),
            Coeffs::Modular(v) => Coeffs::Modular(v.iter().map(|&c| c % m).collect()),
        };
        Ok(TruncatedSeries { ring: target, coeffs })
    }

    /// Multiplies in place by the binomial `1 + c q^e` with `c = +-1`.
    pub(crate) fn mul_binomial_in_place(&mut self, c: i64, e: usize) {
        let len = self.len();
        if e == 0 {
            *self = self.scale(1 + c);
            return;
        }
        match &mut self.coeffs {
            Coeffs::Exact(v) => {
                for n in (e..len).rev() {
                    let (lo, hi) = v.split_at_mut(n);
                    if c > 0 {
                        hi[0] += &lo[n - e];
                    } else {
                        hi[0] -= &lo[n - e];
                    }
                }
            }
            Coeffs::Modular(v) => {
                let m = self.ring.modulus();
                for n in (e..len).rev() {
                    let t = v[n - e];
                    let t = if c > 0 { t } else { (m - t) % m };
                    v[n] = ((v[n] as u128 + t as u128) % m as u128) as u64;
                }
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.to_bigints().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (n, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)?;
        if !self.ring.is_exact() {
            write!(f, " (mod {})", self.ring.modulus())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64(CoeffRing::EXACT, v)
    }

    fn zm(m: u64, v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64(CoeffRing::modular(m).unwrap(), v)
    }

    #[test]
    fn add_cancels() {
        assert_eq!(z(&[1, 1]).try_add(&z(&[1, -1])).unwrap(), z(&[2, 0]));
    }

    #[test]
    fn neg_gives_canonical_residues() {
        assert_eq!(zm(8, &[1, -1]).neg(), zm(8, &[7, 1]));
        assert_eq!(zm(8, &[1, -1]).neg().residues().unwrap(), &[7, 1]);
    }

    #[test]
    fn scale_by_negative() {
        assert_eq!(z(&[1, 1, 1]).scale(-2), z(&[-2, -2, -2]));
    }

    #[test]
    fn binary_ops_truncate_to_min_order() {
        let s = z(&[1, 2, 3, 4]).try_add(&z(&[1, 1])).unwrap();
        assert_eq!(s.order(), 1);
        assert_eq!(s, z(&[2, 3]));
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let err = z(&[1]).try_mul(&zm(8, &[1])).unwrap_err();
        assert!(matches!(err, Error::RingMismatch { .. }));
        assert!(zm(4, &[1]).try_add(&zm(8, &[1])).is_err());
    }

    #[test]
    fn telescoping_product() {
        let p = z(&[1, -1, 0, 0]).try_mul(&z(&[1, 1, 1, 1])).unwrap();
        assert_eq!(p, z(&[1, 0, 0, 0]));
    }

    #[test]
    fn freshmans_dream_mod_two() {
        assert_eq!(zm(2, &[1, 1, 0]).pow(2).unwrap(), zm(2, &[1, 0, 1]));
    }

    #[test]
    fn geometric_inverse() {
        assert_eq!(z(&[1, -1, 0, 0, 0]).invert().unwrap(), z(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn non_unit_constant_is_reported() {
        match z(&[2, 1]).invert() {
            Err(Error::NonUnit { value, .. }) => assert_eq!(value, "2"),
            other => panic!("expected NonUnit, got {other:?}"),
        }
        assert!(zm(8, &[2, 1]).invert().is_err());
        // 3 is a unit mod 8
        let inv = zm(8, &[3, 1, 0]).invert().unwrap();
        assert!(inv.try_mul(&zm(8, &[3, 1, 0])).unwrap() == zm(8, &[1, 0, 0]));
    }

    #[test]
    fn inverse_in_odd_modulus() {
        let x = zm(9, &[2, 5, 7, 1, 3]);
        let y = x.invert().unwrap();
        assert_eq!(x.try_mul(&y).unwrap(), zm(9, &[1, 0, 0, 0, 0]));
        let big = CoeffRing::modular((1u64 << 40) + 15).unwrap();
        let x = TruncatedSeries::from_i64(big, &[1, -3, 7, 11, -2]);
        let y = x.invert().unwrap();
        assert!(x.try_mul(&y).unwrap() == TruncatedSeries::one(big, 4));
    }

    #[test]
    fn powers() {
        assert_eq!(z(&[1, 1, 0]).pow(2).unwrap(), z(&[1, 2, 1]));
        assert_eq!(z(&[0, 1, 0]).pow(0).unwrap(), z(&[1, 0, 0]));
        assert_eq!(z(&[1, -1, 0]).pow(-2).unwrap(), z(&[1, 2, 3]));
    }

    #[test]
    fn shifting() {
        assert_eq!(z(&[1, 1, 0]).shift(1), z(&[0, 1, 1]));
        assert_eq!(z(&[3, 4]).shift(0), z(&[3, 4]));
        assert_eq!(z(&[1, 0, 0]).shift(3), z(&[0, 0, 0]));
    }

    #[test]
    fn substitution() {
        assert_eq!(z(&[1, 1, 0]).substitute_power(2), z(&[1, 0, 1]));
        assert_eq!(z(&[5, 6, 7]).substitute_power(1), z(&[5, 6, 7]));
        assert_eq!(z(&[1, 2, 3, 4, 5]).substitute_power(3), z(&[1, 0, 0, 2, 0]));
    }

    #[test]
    fn dissection() {
        assert_eq!(z(&[1, 2, 3, 4]).dissect(2, 1), z(&[2, 4]));
        assert_eq!(z(&[1, 2, 3]).dissect(1, 0), z(&[1, 2, 3]));
        assert_eq!(z(&[1, 2, 3]).dissect(5, 4), z(&[0]));
        assert_eq!(z(&[1, 2, 3, 4, 5, 6, 7]).dissect(3, 2).order(), 1);
    }

    #[test]
    fn coefficient_access() {
        assert_eq!(z(&[1]).coeff(0).unwrap(), BigInt::from(1));
        assert_eq!(z(&[0, 0, 0, 1]).coeff(2).unwrap(), BigInt::from(0));
        assert!(matches!(z(&[1, 2]).coeff(5), Err(Error::IndexOutOfRange { index: 5, order: 1 })));
        assert_eq!(z(&[-3]).residue(0, 8).unwrap(), 5);
        assert!(zm(4, &[1]).residue(0, 8).is_err());
    }

    #[test]
    fn reduction() {
        assert_eq!(z(&[1, -1]).reduce_mod(2).unwrap(), zm(2, &[1, 1]));
        let x = z(&[13, -7, 100, -1]);
        assert_eq!(x.reduce_mod(8).unwrap().reduce_mod(4).unwrap(), x.reduce_mod(4).unwrap());
        assert!(matches!(
            x.reduce_mod(3).unwrap().reduce_mod(2),
            Err(Error::IncompatibleModulus { to: 2, .. })
        ));
        assert!(x.reduce_mod(1).is_err());
    }

    #[test]
    fn order_zero_series_are_legal() {
        let x = z(&[1]);
        assert_eq!(x.invert().unwrap(), z(&[1]));
        assert_eq!(x.shift(2), z(&[0]));
        assert_eq!(x.dissect(2, 1), z(&[0]));
        assert_eq!(x.substitute_power(4), z(&[1]));
    }

    #[test]
    fn large_coefficients_fall_back_to_bigint() {
        // 1/(1-2q) has coefficients 2^n, overflowing i128 past n = 126.
        let x = z(&[1, -2]).truncate(1);
        let mut v = vec![0i64; 201];
        v[0] = 1;
        v[1] = -2;
        let inv = z(&v).invert().unwrap();
        assert_eq!(inv.coeff(200).unwrap(), BigInt::from(2).pow(200));
        let sq = inv.try_mul(&inv).unwrap();
        // (1-2q)^-2 = sum (n+1) 2^n q^n
        assert_eq!(sq.coeff(200).unwrap(), BigInt::from(201) * BigInt::from(2).pow(200));
        assert_eq!(x.order(), 1);
    }

    #[test]
    fn display() {
        assert_eq!(z(&[1, -1, 0, 2]).to_string(), "1 - q + 2q^3 + O(q^4)");
        assert_eq!(zm(8, &[0, 0]).to_string(), "0 + O(q^2) (mod 8)");
    }
}
