//! Arithmetic in the prime field Z_p.
//!
//! All symbolic-phase computations (Gröbner bases, independence checks,
//! template elimination) run over Z_p to stay exact. Elements are stored
//! as canonical `u32` representatives in `[0, p)`; the field itself is
//! passed around explicitly so values stay a bare machine word.

use rand::Rng;
use thiserror::Error;

/// Canonical field element representative, always in `[0, p)`.
pub type Fe = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusRange(u64),
}

/// A prime field Z_p with `2 <= p < 2^31` so products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

/// Default modulus used throughout the symbolic phase.
pub const DEFAULT_PRIME: u32 = 30011;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Builds the field, verifying primality by trial division.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(FieldError::ModulusRange(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Reduces a signed integer to its canonical representative.
    #[inline]
    pub fn normalize(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as Fe
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        ((a as u64 * b as u64) % self.p as u64) as Fe
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc: Fe = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(p-2)`. Returns `None` for 0.
    pub fn checked_inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Multiplicative inverse; panics on 0.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        self.checked_inv(a).expect("inverse of zero in Z_p")
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// Square root via Tonelli-Shanks. `None` when `a` is a non-residue.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(a);
        }
        // Euler criterion first.
        if self.pow(a, (self.p as u64 - 1) / 2) != 1 {
            return None;
        }
        if self.p % 4 == 3 {
            return Some(self.pow(a, (self.p as u64 + 1) / 4));
        }
        // p = q * 2^s + 1 with q odd.
        let mut q = self.p as u64 - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // Find a quadratic non-residue z.
        let mut z: Fe = 2;
        while self.pow(z, (self.p as u64 - 1) / 2) == 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
                if i == m {
                    return None;
                }
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn rand_elem<R: Rng>(&self, rng: &mut R) -> Fe {
        rng.gen_range(0..self.p)
    }

    pub fn rand_nonzero<R: Rng>(&self, rng: &mut R) -> Fe {
        rng.gen_range(1..self.p)
    }

    /// Lifts to the balanced representative in `(-p/2, p/2]`, the usual
    /// embedding when reading Z_p coefficients back as signed integers.
    #[inline]
    pub fn lift_signed(&self, a: Fe) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME as u64));
        assert!(PrimeField::new(DEFAULT_PRIME as u64).is_ok());
    }

    #[test]
    fn rejects_composite_and_out_of_range() {
        assert_eq!(PrimeField::new(4), Err(FieldError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(FieldError::ModulusRange(1)));
        assert_eq!(
            PrimeField::new(1 << 31),
            Err(FieldError::ModulusRange(1 << 31))
        );
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.normalize(-1), 6);
        let f = PrimeField::default_field();
        assert_eq!(f.normalize(0), 0);
        assert_eq!(f.normalize(30011), 0);
        // Idempotence.
        for n in [-100i64, -1, 0, 1, 12345, 30010, 30011, 60022] {
            let once = f.normalize(n);
            assert_eq!(f.normalize(once as i64), once);
        }
    }

    #[test]
    fn arith_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.add(3, 5), 1);
        let f = PrimeField::default_field();
        for a in [0u32, 1, 2, 12345, 30010] {
            assert_eq!(f.mul(a, 0), 0);
            assert_eq!(f.add(a, 0), a);
        }
    }

    #[test]
    fn inverse_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(2), 4);
        assert_eq!(f7.inv(1), 1);
        let f = PrimeField::default_field();
        assert_eq!(f.inv(1), 1);
        assert_eq!(f.checked_inv(0), None);
    }

    #[test]
    fn inverse_of_random_elements_checked_by_multiplication() {
        let f = PrimeField::default_field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a = f.rand_nonzero(&mut rng);
            let b = f.inv(a);
            assert_eq!(f.mul(a, b), 1);
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let f = PrimeField::default_field();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let a = f.rand_elem(&mut rng);
            let b = f.rand_elem(&mut rng);
            let c = f.rand_elem(&mut rng);
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        }
    }

    #[test]
    fn sqrt_roundtrip() {
        for p in [7u64, 13, 30011, 65537] {
            let f = PrimeField::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let mut residues = 0;
            for _ in 0..200 {
                let a = f.rand_nonzero(&mut rng);
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(r, r), a);
                    residues += 1;
                }
            }
            // About half of the nonzero elements are residues.
            assert!(residues > 50 && residues < 150, "p={p}: {residues}");
        }
    }

    #[test]
    fn lift_signed_balanced() {
        let f = PrimeField::default_field();
        assert_eq!(f.lift_signed(0), 0);
        assert_eq!(f.lift_signed(1), 1);
        assert_eq!(f.lift_signed(30010), -1);
        assert_eq!(f.lift_signed(15005), 15005);
        assert_eq!(f.lift_signed(15006), -15005);
    }
}
