//! Inner loops for truncated convolution and forward-substitution division.
//!
//! Every kernel skips zero coefficients of its sparse operand, so products and
//! quotients involving theta-type series (O(sqrt N) nonzero terms) cost
//! O(N sqrt N) instead of O(N^2). Skipping zeros does not change the
//! arithmetic, so results are identical to the dense recurrences.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub(crate) fn nonzero_exact(a: &[BigInt]) -> Vec<usize> {
    a.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
}

pub(crate) fn nonzero_mod(a: &[u64]) -> Vec<usize> {
    a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
}

fn small(a: &[BigInt]) -> Option<Vec<i64>> {
    a.iter().map(ToPrimitive::to_i64).collect()
}

/// Truncated product over Z; both slices have length `len`.
pub(crate) fn mul_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    debug_assert_eq!(a.len(), b.len());
    let (mut sparse, mut dense) = (a, b);
    let mut nz = nonzero_exact(sparse);
    let nz_b = nonzero_exact(dense);
    if nz_b.len() < nz.len() {
        std::mem::swap(&mut sparse, &mut dense);
        nz = nz_b;
    }
    if let (Some(s), Some(d)) = (small(sparse), small(dense)) {
        if let Some(r) = mul_i128(&s, &d, &nz) {
            return r.into_iter().map(BigInt::from).collect();
        }
    }
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for &i in &nz {
        let si = &sparse[i];
        for (j, dj) in dense[..len - i].iter().enumerate() {
            if !dj.is_zero() {
                out[i + j] += si * dj;
            }
        }
    }
    out
}

fn mul_i128(s: &[i64], d: &[i64], nz: &[usize]) -> Option<Vec<i128>> {
    let len = s.len();
    let mut out = vec![0i128; len];
    for &i in nz {
        let si = s[i] as i128;
        for (o, &dj) in out[i..].iter_mut().zip(&d[..len - i]) {
            *o = o.checked_add(si * dj as i128)?;
        }
    }
    Some(out)
}

/// Solves `den * y = num` over Z by forward substitution; `den[0]` is `+1` or `-1`.
pub(crate) fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let len = num.len();
    let neg = den[0] < BigInt::zero();
    let nz: Vec<usize> = nonzero_exact(den).into_iter().filter(|&k| k > 0).collect();

    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    if let (Some(n), Some(d)) = (small(num), small(den)) {
        let mut fast: Vec<i128> = Vec::with_capacity(len);
        'outer: for i in 0..len {
            let mut acc = n[i] as i128;
            for &k in nz.iter().take_while(|&&k| k <= i) {
                match (d[k] as i128).checked_mul(fast[i - k]).and_then(|p| acc.checked_sub(p)) {
                    Some(v) => acc = v,
                    None => break 'outer,
                }
            }
            fast.push(if neg { -acc } else { acc });
        }
        out.extend(fast.into_iter().map(BigInt::from));
    }
    for i in out.len()..len {
        let mut acc = num[i].clone();
        for &k in nz.iter().take_while(|&&k| k <= i) {
            acc -= &den[k] * &out[i - k];
        }
        out.push(if neg { -acc } else { acc });
    }
    out
}

/// Truncated product over Z/mZ.
pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    debug_assert_eq!(a.len(), b.len());
    let len = a.len();
    let (mut sparse, mut dense) = (a, b);
    let mut nz = nonzero_mod(sparse);
    let nz_b = nonzero_mod(dense);
    if nz_b.len() < nz.len() {
        std::mem::swap(&mut sparse, &mut dense);
        nz = nz_b;
    }
    if m.is_power_of_two() {
        // Wrapping arithmetic is exact modulo 2^64, hence modulo m.
        let mask = m - 1;
        let mut out = vec![0u64; len];
        for &i in &nz {
            let si = sparse[i];
            for (o, &dj) in out[i..].iter_mut().zip(&dense[..len - i]) {
                *o = o.wrapping_add(si.wrapping_mul(dj));
            }
        }
        out.iter_mut().for_each(|v| *v &= mask);
        out
    } else if m <= u32::MAX as u64 {
        let mut acc = vec![0u128; len];
        for &i in &nz {
            let si = sparse[i] as u128;
            for (o, &dj) in acc[i..].iter_mut().zip(&dense[..len - i]) {
                *o += si * dj as u128;
            }
        }
        acc.into_iter().map(|v| (v % m as u128) as u64).collect()
    } else {
        let mm = m as u128;
        let mut out = vec![0u64; len];
        for &i in &nz {
            let si = sparse[i] as u128;
            for (o, &dj) in out[i..].iter_mut().zip(&dense[..len - i]) {
                *o = ((*o as u128 + si * dj as u128 % mm) % mm) as u64;
            }
        }
        out
    }
}

/// Solves `den * y = num` over Z/mZ given the inverse of `den[0]`.
pub(crate) fn div_mod(num: &[u64], den: &[u64], inv0: u64, m: u64) -> Vec<u64> {
    let len = num.len();
    let nz: Vec<usize> = nonzero_mod(den).into_iter().filter(|&k| k > 0).collect();
    let mut out: Vec<u64> = Vec::with_capacity(len);
    if m.is_power_of_two() {
        let mask = m - 1;
        for i in 0..len {
            let mut acc = num[i];
            for &k in nz.iter().take_while(|&&k| k <= i) {
                acc = acc.wrapping_sub(den[k].wrapping_mul(out[i - k]));
            }
            out.push(acc.wrapping_mul(inv0) & mask);
        }
    } else {
        let mm = m as u128;
        for i in 0..len {
            let mut sub: u128 = 0;
            for &k in nz.iter().take_while(|&&k| k <= i) {
                sub = (sub + den[k] as u128 * out[i - k] as u128) % mm;
            }
            let acc = (num[i] as u128 + mm - sub) % mm;
            out.push((acc * inv0 as u128 % mm) as u64);
        }
    }
    out
}
