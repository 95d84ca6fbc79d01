//! Monomial orders: grevlex, lex, and weighted orders with grevlex tiebreak.
//!
//! Every order here is a total well-order compatible with multiplication.
//! Variable precedence defaults to declaration order and can be permuted,
//! which is how the lex/grevlex variants for all variable orderings are
//! expressed.

use super::monomial::Monomial;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Graded reverse lexicographic: higher total degree wins; on ties the
    /// last nonzero entry of `a - b` being negative makes `a` greater.
    GrevLex,
    /// Lexicographic: first nonzero entry of `a - b` positive makes `a`
    /// greater.
    Lex,
    /// Compare weighted degrees `w·a` vs `w·b`; ties fall through to
    /// grevlex, which keeps the order total.
    Weighted(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// Variable precedence, most significant first. `None` means
    /// declaration order.
    pub precedence: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::GrevLex,
            precedence: None,
        }
    }

    pub fn lex() -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            precedence: None,
        }
    }

    pub fn weighted(w: Vec<u32>) -> Self {
        MonomialOrder {
            kind: OrderKind::Weighted(w),
            precedence: None,
        }
    }

    pub fn with_precedence(mut self, perm: Vec<usize>) -> Self {
        self.precedence = Some(perm);
        self
    }

    /// Total order on monomials of equal arity.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        assert_eq!(a.nvars(), b.nvars(), "monomial arity mismatch");
        match &self.kind {
            OrderKind::GrevLex => self.cmp_graded_revlex(a, b),
            OrderKind::Lex => self.cmp_lex(a, b),
            OrderKind::Weighted(w) => {
                match a.weighted_degree(w).cmp(&b.weighted_degree(w)) {
                    Ordering::Equal => self.cmp_graded_revlex(a, b),
                    ord => ord,
                }
            }
        }
    }

    #[inline]
    fn exp_at(&self, m: &Monomial, pos: usize) -> u16 {
        match &self.precedence {
            Some(perm) => m.exp(perm[pos]),
            None => m.exp(pos),
        }
    }

    fn cmp_lex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for pos in 0..a.nvars() {
            match self.exp_at(a, pos).cmp(&self.exp_at(b, pos)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    fn cmp_graded_revlex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.total_degree().cmp(&b.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: scan from the least significant variable; the
        // first difference decides, reversed.
        for pos in (0..a.nvars()).rev() {
            let (ea, eb) = (self.exp_at(a, pos), self.exp_at(b, pos));
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }

    /// Short text form used by the fan witness output, e.g.
    /// `grevlex`, `lex(1,0)`, `weighted(3,17)`.
    pub fn describe(&self) -> String {
        let perm = match &self.precedence {
            Some(p) => format!(
                "({})",
                p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
            None => String::new(),
        };
        match &self.kind {
            OrderKind::GrevLex => format!("grevlex{perm}"),
            OrderKind::Lex => format!("lex{perm}"),
            OrderKind::Weighted(w) => format!(
                "weighted({}){perm}",
                w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Presentation order for basis listings: total degree ascending, and
/// within a degree the earlier variables come first (1, x, y, x^2, x*y,
/// y^2, ...). Coordinate vectors and action-matrix rows are indexed in
/// this order.
pub fn cmp_reading(a: &Monomial, b: &Monomial) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| b.exps().cmp(a.exps()))
}

/// Fixed internal order used for canonical term storage, independent of
/// whatever order a caller works under.
pub fn cmp_internal(a: &Monomial, b: &Monomial) -> Ordering {
    match a.total_degree().cmp(&b.total_degree()) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for pos in (0..a.nvars()).rev() {
        match a.exp(pos).cmp(&b.exp(pos)) {
            Ordering::Equal => continue,
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::grevlex();
        // x^2*y vs x*y^2 (x first): a-b = (1,-1), last nonzero negative => greater
        assert_eq!(o.compare(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1]), &m(&[1, 1])), Ordering::Equal);
        // Degree dominates.
        assert_eq!(o.compare(&m(&[1, 1]), &m(&[1, 0])), Ordering::Greater);
        // Same-degree chain: x^2 > xy > y^2.
        assert_eq!(o.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn lex_examples() {
        let o = MonomialOrder::lex();
        // x beats any power of y.
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        // Permuted precedence (y first) flips it.
        let oy = MonomialOrder::lex().with_precedence(vec![1, 0]);
        assert_eq!(oy.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Less);
    }

    #[test]
    fn weighted_examples() {
        // w = (0,1): x^5 vs y -> w·a = 0 < 1 = w·b
        let o = MonomialOrder::weighted(vec![0, 1]);
        assert_eq!(o.compare(&m(&[5, 0]), &m(&[0, 1])), Ordering::Less);
        // Tie in weight falls through to grevlex: x^2 vs x with w=(0,1).
        assert_eq!(o.compare(&m(&[2, 0]), &m(&[1, 0])), Ordering::Greater);
    }

    fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize) -> Monomial {
        let exps: Vec<u16> = (0..nvars).map(|_| rng.gen_range(0..5)).collect();
        Monomial::from_exps(&exps)
    }

    #[test]
    fn order_axioms_on_random_monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let orders = vec![
            MonomialOrder::grevlex(),
            MonomialOrder::lex(),
            MonomialOrder::weighted(vec![3, 1, 2]),
            MonomialOrder::grevlex().with_precedence(vec![2, 0, 1]),
        ];
        for o in &orders {
            for _ in 0..300 {
                let a = random_monomial(&mut rng, 3);
                let b = random_monomial(&mut rng, 3);
                let c = random_monomial(&mut rng, 3);
                // Antisymmetry.
                assert_eq!(o.compare(&a, &b), o.compare(&b, &a).reverse());
                // Equal iff identical.
                assert_eq!(o.compare(&a, &b) == Ordering::Equal, a == b);
                // Transitivity.
                if o.compare(&a, &b) != Ordering::Greater
                    && o.compare(&b, &c) != Ordering::Greater
                {
                    assert_ne!(o.compare(&a, &c), Ordering::Greater);
                }
                // Multiplicative compatibility: a < b => ac < bc.
                if o.compare(&a, &b) == Ordering::Less {
                    assert_eq!(o.compare(&a.mul(&c), &b.mul(&c)), Ordering::Less);
                }
                // 1 is minimal.
                let one = Monomial::one(3);
                assert_ne!(o.compare(&one, &a), Ordering::Greater);
            }
        }
    }
}
