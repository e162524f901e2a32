use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;

/// `Z` (modulus 0) or `Z/k` for `k >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientRing {
    modulus: BigInt,
}

impl CoefficientRing {
    pub fn integers() -> Self {
        CoefficientRing {
            modulus: BigInt::zero(),
        }
    }

    /// Negative moduli are replaced by their absolute value; `Z/1` is rejected.
    pub fn new(k: impl Into<BigInt>) -> Result<Self, RingError> {
        let modulus = k.into().abs();
        if modulus.is_one() {
            return Err(RingError::InvalidModulus(
                "Z/1 is the zero ring and is not a coefficient ring here".into(),
            ));
        }
        Ok(CoefficientRing { modulus })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_integral(&self) -> bool {
        self.modulus.is_zero()
    }

    /// `Z/p` for a prime `p`.
    pub fn is_field(&self) -> bool {
        is_prime(&self.modulus)
    }

    /// The invariant factor of a free rank-one module over this ring.
    pub fn free_factor(&self) -> BigInt {
        self.modulus.clone()
    }
}

pub(crate) fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    if let Some(small) = n.to_u64() {
        if small < 4 {
            return true;
        }
        if small % 2 == 0 {
            return false;
        }
        let mut d = 3u64;
        while d.saturating_mul(d) <= small {
            if small % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    let root = n.sqrt();
    let mut d = BigInt::from(2);
    while d <= root {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus.is_zero() {
            write!(f, "Z")
        } else {
            write!(f, "Z/{}", self.modulus)
        }
    }
}

impl fmt::Debug for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(CoefficientRing::new(-4).unwrap().modulus(), &BigInt::from(4));
        assert!(CoefficientRing::new(1).is_err());
        assert!(CoefficientRing::new(-1).is_err());
        assert!(CoefficientRing::new(0).unwrap().is_integral());
    }

    #[test]
    fn primality() {
        let primes: Vec<i64> = (0..40).filter(|&n| is_prime(&BigInt::from(n))).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(CoefficientRing::new(2).unwrap().is_field());
        assert!(!CoefficientRing::new(4).unwrap().is_field());
        assert!(!CoefficientRing::integers().is_field());
    }
}
