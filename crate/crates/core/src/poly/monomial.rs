//! Exponent-vector monomials.

use smallvec::SmallVec;
use std::fmt;

/// A monomial as a vector of nonnegative exponents, one per variable.
/// The all-zero vector is the monomial 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn new(exps: impl Into<SmallVec<[u16; 8]>>) -> Self {
        Monomial { exps: exps.into() }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    /// The monomial `x_i` in an `nvars`-variable ring.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Degree weighted by an integer vector.
    pub fn weighted_degree(&self, w: &[u32]) -> u64 {
        self.exps
            .iter()
            .zip(w)
            .map(|(&e, &wi)| e as u64 * wi as u64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// `other / self`; `None` when not divisible.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(&b, &a)| b - a)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    /// True when the leading monomials share no variable; used by
    /// Buchberger's first criterion.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Renders with the given variable names, e.g. `x^2*y`; `1` for the
    /// constant monomial.
    pub fn format(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                parts.push(names[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", names[i], e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for Monomial {
    /// Anonymous rendering with `x0, x1, ...` names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps)
    }

    #[test]
    fn mul_div_examples() {
        // (xy, y^2) -> xy^3
        assert_eq!(m(&[1, 1]).mul(&m(&[0, 2])), m(&[1, 3]));
        assert!(!m(&[1, 0]).divides(&m(&[0, 1])));
        // x^2*y / x = x*y
        assert_eq!(m(&[1, 0]).try_div(&m(&[2, 1])), Some(m(&[1, 1])));
        assert_eq!(m(&[0, 1]).try_div(&m(&[1, 0])), None);
    }

    #[test]
    fn degree_and_lcm() {
        assert_eq!(m(&[2, 3]).total_degree(), 5);
        assert_eq!(m(&[0, 0]).total_degree(), 0);
        assert!(m(&[0, 0]).is_one());
        assert_eq!(m(&[2, 1]).lcm(&m(&[1, 3])), m(&[2, 3]));
        assert!(m(&[2, 0]).coprime(&m(&[0, 3])));
        assert!(!m(&[1, 1]).coprime(&m(&[0, 3])));
    }

    #[test]
    fn formatting() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(m(&[0, 0]).format(&names), "1");
        assert_eq!(m(&[2, 1]).format(&names), "x^2*y");
        assert_eq!(m(&[0, 3]).format(&names), "y^3");
    }
}
