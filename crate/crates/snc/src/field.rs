//! Prime-field arithmetic.
//!
//! All coding operations in this crate run over a prime field `F_p`. A
//! [`FieldSpec`] carries the modulus and provides the scalar operations;
//! scalars themselves are plain `u64` values kept reduced to `[0, p-1]`.

use thiserror::Error;

/// A field element. Always reduced modulo the owning field's order.
pub type Scalar = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field order {0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// A prime field `F_p`, identified by its order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    /// Builds the field of order `p`. Fails unless `p` is prime.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    /// The order `q` of the field.
    pub fn order(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p-1]`.
    pub fn reduce(&self, v: u64) -> Scalar {
        v % self.p
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        (a + b) % self.p
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u128 * b as u128) % self.p as u128) as Scalar
    }

    /// Multiplicative inverse of `a`, via Fermat's little theorem.
    pub fn inv(&self, a: Scalar) -> Result<Scalar, FieldError> {
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    fn pow(&self, mut base: Scalar, mut exp: u64) -> Scalar {
        let mut acc: Scalar = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// All field elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        0..self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
