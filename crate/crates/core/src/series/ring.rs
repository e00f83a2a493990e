use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of a series: the integers (modulus 0) or `Z/MZ` with `M >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffRing {
    modulus: u64,
}

impl CoeffRing {
    pub const EXACT: CoeffRing = CoeffRing { modulus: 0 };

    /// `0` selects exact integers, anything `>= 2` a residue ring.
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 1 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(CoeffRing { modulus })
    }

    pub fn modular(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(CoeffRing { modulus })
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_exact(self) -> bool {
        self.modulus == 0
    }

    /// True when residues of `self` determine residues mod `m`.
    pub fn supports_modulus(self, m: u64) -> bool {
        m >= 1 && (self.is_exact() || self.modulus.is_multiple_of(m))
    }

    pub(crate) fn reduce_i64(self, v: i64) -> u64 {
        debug_assert!(!self.is_exact());
        (v as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub(crate) fn reduce_big(self, v: &BigInt) -> u64 {
        debug_assert!(!self.is_exact());
        v.mod_floor(&BigInt::from(self.modulus)).to_u64().expect("residue fits in u64")
    }

    /// Multiplicative inverse of a residue, if it is a unit.
    pub(crate) fn inverse(self, v: u64) -> Option<u64> {
        let m = self.modulus as i128;
        let (mut r0, mut r1) = (m, (v as i128) % m);
        let (mut t0, mut t1) = (0i128, 1i128);
        while !r1.is_zero() {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| t0.rem_euclid(m) as u64)
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "Z")
        } else {
            write!(f, "Z/{}Z", self.modulus)
        }
    }
}
