//! Enumeration of distinct reduced Gröbner bases across monomial orders.
//!
//! A sampling approximation of the Gröbner fan: named orders (grevlex and
//! lex under every variable permutation) are tried first, then random
//! weighted orders with a grevlex tiebreak. Bases are deduplicated by
//! their leading-monomial set, which identifies a reduced basis uniquely
//! for a fixed ideal. Completeness is probabilistic, not certified.

use crate::groebner::{groebner_basis, GbConfig, GroebnerError, ReducedGroebnerBasis};
use crate::poly::{cmp_reading, Monomial, MonomialOrder, PolyZp};
use crate::util::rng;
use rand::Rng;
use std::collections::HashMap;

/// How a basis was first discovered.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Named(MonomialOrder),
    Weighted {
        order: MonomialOrder,
        sample_index: usize,
    },
}

impl Witness {
    pub fn order(&self) -> &MonomialOrder {
        match self {
            Witness::Named(o) => o,
            Witness::Weighted { order, .. } => order,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Witness::Named(o) => o.describe(),
            Witness::Weighted {
                order,
                sample_index,
            } => format!("{} sample={}", order.describe(), sample_index),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FanEnumeration {
    /// Distinct reduced bases, sorted by signature key.
    pub bases: Vec<ReducedGroebnerBasis>,
    /// Parallel to `bases`: the order that first produced each one.
    pub witnesses: Vec<Witness>,
    pub sample_budget: usize,
    /// True when the final quarter of the weighted samples found nothing
    /// new.
    pub exhausted: bool,
    /// Orders skipped because their Buchberger run blew the iteration
    /// budget.
    pub skipped_orders: usize,
}

impl FanEnumeration {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

/// Dedup key: the leading-monomial set in reading order.
fn lm_key(gb: &ReducedGroebnerBasis) -> Vec<Monomial> {
    let mut lms = gb.leading_monomials.clone();
    lms.sort_by(cmp_reading);
    lms
}

/// Canonical signature of a reduced basis: its leading monomials in
/// reading order. Equal signatures identify equal reduced bases of a
/// fixed ideal.
pub fn basis_signature(gb: &ReducedGroebnerBasis, names: &[String]) -> String {
    lm_key(gb)
        .iter()
        .map(|m| m.format(names))
        .collect::<Vec<_>>()
        .join(", ")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

fn named_order(kind_lex: bool, perm: &[usize]) -> MonomialOrder {
    let base = if kind_lex {
        MonomialOrder::lex()
    } else {
        MonomialOrder::grevlex()
    };
    let identity: Vec<usize> = (0..perm.len()).collect();
    if perm == identity.as_slice() {
        base
    } else {
        base.with_precedence(perm.to_vec())
    }
}

/// Enumerates distinct reduced Gröbner bases: named orders first (when
/// nvars <= 6), then `budget` random weighted orders with weights drawn
/// log-uniformly from [1, 2^12]. Deterministic given the seed. Orders
/// whose computation exceeds the iteration budget are counted in
/// `skipped_orders` rather than aborting the enumeration.
pub fn enumerate_reduced_gbs(
    gens: &[PolyZp],
    budget: usize,
    seed: u64,
    cfg: &GbConfig,
) -> Result<FanEnumeration, GroebnerError> {
    let nvars = gens
        .first()
        .map(|g| g.nvars())
        .ok_or(GroebnerError::EmptyIdeal)?;

    let mut found: HashMap<Vec<Monomial>, (ReducedGroebnerBasis, Witness)> = HashMap::new();
    let mut order_list: Vec<MonomialOrder> = Vec::new();
    if nvars <= 6 {
        let perms = permutations(nvars);
        for p in &perms {
            order_list.push(named_order(false, p));
        }
        for p in &perms {
            order_list.push(named_order(true, p));
        }
    } else {
        order_list.push(MonomialOrder::grevlex());
        order_list.push(MonomialOrder::lex());
    }

    let mut skipped = 0usize;
    let mut quotient_dim: Option<usize> = None;

    fn try_order(
        gens: &[PolyZp],
        cfg: &GbConfig,
        order: MonomialOrder,
        witness: Witness,
        found: &mut HashMap<Vec<Monomial>, (ReducedGroebnerBasis, Witness)>,
        quotient_dim: &mut Option<usize>,
        skipped: &mut usize,
    ) -> Result<bool, GroebnerError> {
        match groebner_basis(gens, &order, cfg) {
            Ok(gb) => {
                let k = gb.quotient_dimension()?;
                match quotient_dim {
                    None => *quotient_dim = Some(k),
                    Some(k0) => {
                        assert_eq!(*k0, k, "quotient dimension must not depend on the order")
                    }
                }
                let key = lm_key(&gb);
                if let std::collections::hash_map::Entry::Vacant(e) = found.entry(key) {
                    e.insert((gb, witness));
                    Ok(true)
                } else {
                    Ok(false)
                }
            }
            Err(GroebnerError::IterationBudget(_)) => {
                *skipped += 1;
                Ok(false)
            }
            Err(e) => Err(e),
        }
    }

    for order in order_list {
        let w = Witness::Named(order.clone());
        try_order(gens, cfg, order, w, &mut found, &mut quotient_dim, &mut skipped)?;
    }

    let mut r = rng(seed, 0xfa);
    let mut last_new: Option<usize> = None;
    for i in 0..budget {
        let weights: Vec<u32> = (0..nvars)
            .map(|_| {
                let u: f64 = r.gen_range(0.0..12.0);
                2f64.powf(u).round().max(1.0) as u32
            })
            .collect();
        let order = MonomialOrder::weighted(weights);
        let w = Witness::Weighted {
            order: order.clone(),
            sample_index: i,
        };
        if try_order(gens, cfg, order, w, &mut found, &mut quotient_dim, &mut skipped)? {
            last_new = Some(i);
        }
    }

    let exhausted = budget > 0
        && match last_new {
            None => true,
            Some(i) => (i as f64) < 0.75 * budget as f64,
        };

    let mut entries: Vec<(Vec<Monomial>, (ReducedGroebnerBasis, Witness))> =
        found.into_iter().collect();
    entries.sort_by(|a, b| {
        let (ka, kb) = (&a.0, &b.0);
        ka.len().cmp(&kb.len()).then_with(|| {
            for (x, y) in ka.iter().zip(kb.iter()) {
                match cmp_reading(x, y) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let (bases, witnesses): (Vec<_>, Vec<_>) = entries.into_iter().map(|(_, v)| v).unzip();
    Ok(FanEnumeration {
        bases,
        witnesses,
        sample_budget: budget,
        exhausted,
        skipped_orders: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::problems;
    use crate::sysio::{parse_system, SystemFile};

    fn toy_eqs() -> Vec<PolyZp> {
        let inst = problems::toy(PrimeField::default_field());
        inst.zp_system().unwrap().equations.clone()
    }

    fn names() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    #[test]
    fn toy_fan_has_exactly_three_bases() {
        let eqs = toy_eqs();
        let fan = enumerate_reduced_gbs(&eqs, 200, 1, &GbConfig::default()).unwrap();
        assert_eq!(fan.len(), 3);
        let sigs: Vec<String> = fan
            .bases
            .iter()
            .map(|b| basis_signature(b, &names()))
            .collect();
        assert_eq!(sigs, vec!["x, y^3", "y, x^3", "x^2, x*y, y^2"]);
        assert!(fan.exhausted);
        assert_eq!(fan.skipped_orders, 0);
        for b in &fan.bases {
            assert_eq!(b.quotient_dimension().unwrap(), 3);
        }
    }

    #[test]
    fn toy_fan_matches_named_order_bases() {
        let eqs = toy_eqs();
        let fan = enumerate_reduced_gbs(&eqs, 50, 7, &GbConfig::default()).unwrap();
        let by_sig: std::collections::HashMap<String, &ReducedGroebnerBasis> = fan
            .bases
            .iter()
            .map(|b| (basis_signature(b, &names()), b))
            .collect();
        let grevlex =
            groebner_basis(&eqs, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        assert_eq!(by_sig["x^2, x*y, y^2"].generators, grevlex.generators);
        let lex_yx = groebner_basis(
            &eqs,
            &MonomialOrder::lex().with_precedence(vec![1, 0]),
            &GbConfig::default(),
        )
        .unwrap();
        assert_eq!(by_sig["y, x^3"].generators, lex_yx.generators);
    }

    #[test]
    fn single_solution_ideal_has_one_basis() {
        let SystemFile::Zp(s) = parse_system("ring x, y over zp(30011)\nx - 1\ny - 2\n").unwrap()
        else {
            panic!()
        };
        let fan = enumerate_reduced_gbs(&s.equations, 100, 3, &GbConfig::default()).unwrap();
        assert_eq!(fan.len(), 1);
        assert_eq!(basis_signature(&fan.bases[0], &names()), "x, y");
    }

    #[test]
    fn same_seed_reproduces_enumeration() {
        let eqs = toy_eqs();
        let a = enumerate_reduced_gbs(&eqs, 60, 42, &GbConfig::default()).unwrap();
        let b = enumerate_reduced_gbs(&eqs, 60, 42, &GbConfig::default()).unwrap();
        assert_eq!(a.bases.len(), b.bases.len());
        for (x, y) in a.bases.iter().zip(&b.bases) {
            assert_eq!(x.generators, y.generators);
        }
        for (x, y) in a.witnesses.iter().zip(&b.witnesses) {
            assert_eq!(x.describe(), y.describe());
        }
        assert_eq!(a.exhausted, b.exhausted);
    }

    #[test]
    fn larger_budget_never_loses_bases() {
        let eqs = toy_eqs();
        let small = enumerate_reduced_gbs(&eqs, 10, 5, &GbConfig::default()).unwrap();
        let large = enumerate_reduced_gbs(&eqs, 80, 5, &GbConfig::default()).unwrap();
        let large_sigs: Vec<String> = large
            .bases
            .iter()
            .map(|b| basis_signature(b, &names()))
            .collect();
        for b in &small.bases {
            assert!(large_sigs.contains(&basis_signature(b, &names())));
        }
    }

    #[test]
    fn positive_dimensional_is_propagated() {
        let SystemFile::Zp(s) = parse_system("ring x, y over zp(30011)\nx\n").unwrap() else {
            panic!()
        };
        let err = enumerate_reduced_gbs(&s.equations, 10, 0, &GbConfig::default());
        assert!(matches!(err, Err(GroebnerError::PositiveDimensional(_))));
    }
}
