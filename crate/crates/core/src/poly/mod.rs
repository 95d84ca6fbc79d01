//! Sparse multivariate polynomials over Z_p or complex floats.
//!
//! Terms are stored sorted descending under a fixed internal order so
//! iteration is deterministic regardless of how a polynomial was built.

pub mod monomial;
pub mod order;

pub use monomial::Monomial;
pub use order::{cmp_internal, cmp_reading, MonomialOrder, OrderKind};

use crate::field::{Fe, PrimeField};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Coefficient domain: a field with the handful of operations the
/// polynomial layer needs. Implemented for `PrimeField` (exact) and
/// `ComplexCoeffs` (floating point).
pub trait CoeffField: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `a / b` with `b != 0`.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Pivot preference for elimination: magnitude for floats, a flat
    /// zero/nonzero split for exact fields.
    fn pivot_weight(&self, a: &Self::Elem) -> f64;
}

impl CoeffField for PrimeField {
    type Elem = Fe;

    fn zero(&self) -> Fe {
        0
    }
    fn one(&self) -> Fe {
        1
    }
    fn is_zero(&self, a: &Fe) -> bool {
        *a == 0
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        PrimeField::add(self, *a, *b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        PrimeField::sub(self, *a, *b)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        PrimeField::mul(self, *a, *b)
    }
    fn neg(&self, a: &Fe) -> Fe {
        PrimeField::neg(self, *a)
    }
    fn div(&self, a: &Fe, b: &Fe) -> Fe {
        PrimeField::div(self, *a, *b)
    }
    fn from_i64(&self, n: i64) -> Fe {
        self.normalize(n)
    }
    fn pivot_weight(&self, a: &Fe) -> f64 {
        if *a == 0 {
            0.0
        } else {
            1.0
        }
    }
}

/// Complex double-precision coefficients. Zero tests are exact-zero only;
/// no thresholding happens at this layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexCoeffs;

impl CoeffField for ComplexCoeffs {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn div(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a / b
    }
    fn from_i64(&self, n: i64) -> Complex64 {
        Complex64::new(n as f64, 0.0)
    }
    fn pivot_weight(&self, a: &Complex64) -> f64 {
        a.norm()
    }
}

/// Which coefficient domain a ring uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffSpec {
    Zp(u32),
    Complex,
}

/// Ring metadata: the declared variables and coefficient domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub var_names: Vec<String>,
    pub coeff: CoeffSpec,
}

impl Ring {
    pub fn new(var_names: Vec<String>, coeff: CoeffSpec) -> Self {
        let mut seen = std::collections::HashSet::new();
        for n in &var_names {
            assert!(seen.insert(n.clone()), "duplicate variable name {n}");
        }
        Ring { var_names, coeff }
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|n| n == name)
    }
}

/// Sparse polynomial: term list sorted descending under the internal
/// order, no zero coefficients, each monomial at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C: CoeffField> {
    field: C,
    nvars: usize,
    terms: Vec<(Monomial, C::Elem)>,
}

pub type PolyZp = Polynomial<PrimeField>;
pub type PolyC = Polynomial<ComplexCoeffs>;

impl<C: CoeffField> Polynomial<C> {
    pub fn zero(field: C, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: C, nvars: usize, c: C::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        if !p.field.is_zero(&c) {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn var(field: C, nvars: usize, i: usize) -> Self {
        let one = field.one();
        Polynomial {
            field,
            nvars,
            terms: vec![(Monomial::var(i, nvars), one)],
        }
    }

    /// Builds from an arbitrary term list: merges duplicates, drops zeros,
    /// sorts canonically.
    pub fn from_terms(field: C, nvars: usize, terms: Vec<(Monomial, C::Elem)>) -> Self {
        let mut map: HashMap<Monomial, C::Elem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = field.add(e.get(), &c);
                    *e.get_mut() = s;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
            }
        }
        let mut terms: Vec<(Monomial, C::Elem)> = map
            .into_iter()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        terms.sort_by(|a, b| cmp_internal(&b.0, &a.0));
        Polynomial {
            field,
            nvars,
            terms,
        }
    }

    #[inline]
    pub fn field(&self) -> &C {
        &self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, C::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|(m, _)| m)
    }

    pub fn coeff_of(&self, m: &Monomial) -> C::Elem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    /// Max total degree over terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "ring mismatch: nvars");
        assert_eq!(self.field, other.field, "ring mismatch: coefficient field");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        self.merge(other, false, &self.field.one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        self.merge(other, true, &self.field.one())
    }

    /// `self + c * other`, the workhorse of division loops.
    pub fn add_scaled(&self, other: &Self, c: &C::Elem) -> Self {
        self.check_same_ring(other);
        self.merge(other, false, c)
    }

    /// Merge of two canonically sorted term lists.
    fn merge(&self, other: &Self, negate: bool, scale: &C::Elem) -> Self {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = if i == self.terms.len() {
                false
            } else if j == other.terms.len() {
                true
            } else {
                match cmp_internal(&self.terms[i].0, &other.terms[j].0) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => {
                        let rhs = f.mul(&other.terms[j].1, scale);
                        let rhs = if negate { f.neg(&rhs) } else { rhs };
                        let c = f.add(&self.terms[i].1, &rhs);
                        if !f.is_zero(&c) {
                            out.push((self.terms[i].0.clone(), c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                }
            };
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else {
                let c = f.mul(&other.terms[j].1, scale);
                let c = if negate { f.neg(&c) } else { c };
                if !f.is_zero(&c) {
                    out.push((other.terms[j].0.clone(), c));
                }
                j += 1;
            }
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        let f = &self.field;
        let mut acc: Vec<(Monomial, C::Elem)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), f.mul(ca, cb)));
            }
        }
        Self::from_terms(self.field.clone(), self.nvars, acc)
    }

    pub fn mul_scalar(&self, c: &C::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(self.field.clone(), self.nvars);
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), f.mul(k, c)))
                .collect(),
        }
    }

    /// Multiplication by a monomial keeps the sorted invariant.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Maximal term under `order`. `None` for the zero polynomial.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &C::Elem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Divides through by the leading coefficient under `order`.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.field.div(&self.field.one(), lc);
                self.mul_scalar(&inv)
            }
        }
    }

    pub fn evaluate(&self, point: &[C::Elem]) -> C::Elem {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &point[i]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

impl PolyZp {
    /// Lifts Z_p coefficients through balanced signed representatives into
    /// complex floats.
    pub fn lift_to_complex(&self) -> PolyC {
        let f = self.field;
        PolyC::from_terms(
            ComplexCoeffs,
            self.nvars,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Complex64::new(f.lift_signed(*c) as f64, 0.0)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn zp_poly(field: PrimeField, nvars: usize, terms: &[(&[u16], i64)]) -> PolyZp {
        PolyZp::from_terms(
            field,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exps(e), field.normalize(*c)))
                .collect(),
        )
    }

    #[test]
    fn product_over_z7() {
        // (x+1)(x-1) = x^2 + 6 over Z_7
        let f = f7();
        let a = zp_poly(f, 1, &[(&[1], 1), (&[0], 1)]);
        let b = zp_poly(f, 1, &[(&[1], 1), (&[0], -1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, zp_poly(f, 1, &[(&[2], 1), (&[0], 6)]));
    }

    #[test]
    fn add_identity_and_cancellation() {
        let f = f7();
        let a = zp_poly(f, 2, &[(&[1, 0], 3), (&[0, 2], 5)]);
        let zero = PolyZp::zero(f, 2);
        assert_eq!(a.add(&zero), a);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn leading_term_depends_on_order() {
        // f = x + y^2 - 1
        let f = PrimeField::default_field();
        let p = zp_poly(f, 2, &[(&[1, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        let (m, c) = p.leading_term(&MonomialOrder::grevlex()).unwrap();
        assert_eq!(m, &Monomial::from_exps(&[0, 2]));
        assert_eq!(*c, 1);
        let (m, _) = p.leading_term(&MonomialOrder::lex()).unwrap();
        assert_eq!(m, &Monomial::from_exps(&[1, 0]));
        // A constant's leading term is the constant itself.
        let k = zp_poly(f, 2, &[(&[0, 0], 5)]);
        let (m, c) = k.leading_term(&MonomialOrder::grevlex()).unwrap();
        assert!(m.is_one());
        assert_eq!(*c, 5);
        assert!(PolyZp::zero(f, 2).leading_term(&MonomialOrder::grevlex()).is_none());
    }

    #[test]
    fn evaluate_roots() {
        let f = PrimeField::default_field();
        // x + y^2 - 1 at (1, 0)
        let p = zp_poly(f, 2, &[(&[1, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        assert_eq!(p.evaluate(&[1, 0]), 0);
        // xy - 1 at (1, 1)
        let q = zp_poly(f, 2, &[(&[1, 1], 1), (&[0, 0], -1)]);
        assert_eq!(q.evaluate(&[1, 1]), 0);
    }

    /// Newton iteration on t^3 - t + 1 starting left of the real root;
    /// independent of the polynomial code.
    fn cubic_real_root() -> f64 {
        let mut t = -1.5f64;
        for _ in 0..60 {
            let ft = t * t * t - t + 1.0;
            let dft = 3.0 * t * t - 1.0;
            t -= ft / dft;
        }
        t
    }

    #[test]
    fn evaluate_float_near_root() {
        // Real root of y^3 - y + 1 = 0, x = 1 - y^2 zeroes x + y^2 - 1.
        let y = cubic_real_root();
        assert!((y - (-1.324718)).abs() < 1e-6);
        let x = 1.0 - y * y;
        assert!((x - (-0.754878)).abs() < 1e-6);
        let c = ComplexCoeffs;
        let p = PolyC::from_terms(
            c,
            2,
            vec![
                (Monomial::from_exps(&[1, 0]), Complex64::new(1.0, 0.0)),
                (Monomial::from_exps(&[0, 2]), Complex64::new(1.0, 0.0)),
                (Monomial::from_exps(&[0, 0]), Complex64::new(-1.0, 0.0)),
            ],
        );
        let v = p.evaluate(&[Complex64::new(x, 0.0), Complex64::new(y, 0.0)]);
        assert!(v.norm() < 1e-9);
    }

    fn random_zp_poly(rng: &mut ChaCha8Rng, field: PrimeField, nvars: usize) -> PolyZp {
        let nterms = rng.gen_range(0..6);
        let terms: Vec<(Monomial, Fe)> = (0..nterms)
            .map(|_| {
                let exps: Vec<u16> = (0..nvars).map(|_| rng.gen_range(0..4)).collect();
                (Monomial::from_exps(&exps), field.rand_elem(rng))
            })
            .collect();
        PolyZp::from_terms(field, nvars, terms)
    }

    #[test]
    fn leading_term_of_product_is_product_of_leading_terms() {
        let field = PrimeField::default_field();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let orders = [MonomialOrder::grevlex(), MonomialOrder::lex()];
        let mut checked = 0;
        while checked < 200 {
            let a = random_zp_poly(&mut rng, field, 3);
            let b = random_zp_poly(&mut rng, field, 3);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            for o in &orders {
                let (ma, ca) = a.leading_term(o).unwrap();
                let (mb, cb) = b.leading_term(o).unwrap();
                let prod = a.mul(&b);
                let (mp, cp) = prod.leading_term(o).unwrap();
                assert_eq!(*mp, ma.mul(mb));
                assert_eq!(*cp, field.mul(*ca, *cb));
            }
            checked += 1;
        }
    }

    #[test]
    fn evaluate_is_ring_homomorphism() {
        let field = PrimeField::default_field();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let a = random_zp_poly(&mut rng, field, 3);
            let b = random_zp_poly(&mut rng, field, 3);
            let pt: Vec<Fe> = (0..3).map(|_| field.rand_elem(&mut rng)).collect();
            assert_eq!(
                a.mul(&b).evaluate(&pt),
                field.mul(a.evaluate(&pt), b.evaluate(&pt))
            );
            assert_eq!(
                a.add(&b).evaluate(&pt),
                field.add(a.evaluate(&pt), b.evaluate(&pt))
            );
        }
    }

    #[test]
    fn evaluate_homomorphism_float() {
        let c = ComplexCoeffs;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let rand_poly = |rng: &mut ChaCha8Rng| {
                let terms: Vec<(Monomial, Complex64)> = (0..rng.gen_range(1..5))
                    .map(|_| {
                        let exps: Vec<u16> = (0..2).map(|_| rng.gen_range(0..3)).collect();
                        (
                            Monomial::from_exps(&exps),
                            Complex64::new(rng.gen_range(-2.0..2.0), 0.0),
                        )
                    })
                    .collect();
                PolyC::from_terms(c, 2, terms)
            };
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let pt = [
                Complex64::new(rng.gen_range(-1.5..1.5), 0.0),
                Complex64::new(rng.gen_range(-1.5..1.5), 0.0),
            ];
            let lhs = a.mul(&b).evaluate(&pt);
            let rhs = a.evaluate(&pt) * b.evaluate(&pt);
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            assert!((lhs - rhs).norm() / scale < 1e-10);
        }
    }
}
