use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 24;

/// The coefficient ring Z/p^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u64,
    e: u32,
    q: u64,
}

impl RingSpec {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidRing { p, e, reason: reason.to_string() };
        if p < 2 || !is_prime(p) {
            return Err(bad("p is not prime"));
        }
        if e == 0 {
            return Err(bad("exponent must be at least 1"));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.checked_mul(p).filter(|&q| q <= MAX_MODULUS).ok_or_else(|| bad("modulus too large"))?;
        }
        Ok(RingSpec { p, e, q })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    /// p^e.
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// p^k for 0 <= k <= e.
    #[inline]
    pub fn pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.e);
        self.p.pow(k)
    }

    /// p-adic valuation of a residue; e for zero.
    #[inline]
    pub fn valuation(&self, x: u64) -> u32 {
        let mut x = x % self.q;
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.q) * (b % self.q) % self.q
    }

    /// Multiplication by (-1)^k.
    #[inline]
    pub fn sign(&self, k: i64, a: u64) -> u64 {
        if k.rem_euclid(2) == 0 {
            a
        } else {
            self.neg(a)
        }
    }

    /// Inverse of a unit (valuation 0).
    pub fn inv_unit(&self, a: u64) -> u64 {
        let a = a % self.q;
        debug_assert!(a % self.p != 0, "{a} is not a unit mod {}", self.q);
        let (mut old_r, mut r) = (a as i64, self.q as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let k = old_r / r;
            (old_r, r) = (r, old_r - k * r);
            (old_s, s) = (s, old_s - k * s);
        }
        self.reduce(old_s)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_zero_exponent() {
        assert!(RingSpec::new(4, 1).is_err());
        assert!(RingSpec::new(3, 0).is_err());
        assert!(RingSpec::new(2, 40).is_err());
    }

    #[test]
    fn unit_inverses() {
        let r = RingSpec::new(3, 3).unwrap();
        for a in 0..27 {
            if r.is_unit(a) {
                assert_eq!(r.mul(a, r.inv_unit(a)), 1);
            }
        }
        assert_eq!(r.valuation(9), 2);
        assert_eq!(r.valuation(0), 3);
        assert_eq!(r.valuation(18), 2);
    }
}
