//! Buchberger's algorithm and reduced Gröbner bases over Z_p.
//!
//! Coefficients are exact field elements, so the usual textbook algorithm
//! applies directly: normal selection on the pair queue (smallest lcm
//! under the active order) plus Buchberger's coprime criterion. Float
//! coefficients are deliberately unsupported here.

use crate::field::{Fe, PrimeField};
use crate::poly::{Monomial, MonomialOrder, PolyZp};
use std::cmp::Ordering;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroebnerError {
    #[error("pair-reduction budget of {0} exceeded")]
    IterationBudget(usize),
    #[error("timeout expired during basis computation")]
    Timeout,
    #[error("ideal is positive-dimensional: staircase unbounded in variable {0}")]
    PositiveDimensional(usize),
    #[error("no nonzero generators")]
    EmptyIdeal,
}

/// Knobs for a Buchberger run.
#[derive(Debug, Clone)]
pub struct GbConfig {
    /// Cap on S-polynomial reductions; exceeding it signals runaway
    /// computation rather than grinding on.
    pub max_pair_reductions: usize,
    pub deadline: Option<Instant>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pair_reductions: 100_000,
            deadline: None,
        }
    }
}

/// The unique reduced Gröbner basis of an ideal for one monomial order:
/// monic generators, fully interreduced, sorted by leading monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGroebnerBasis {
    pub order: MonomialOrder,
    pub generators: Vec<PolyZp>,
    pub leading_monomials: Vec<Monomial>,
    /// Monomials divisible by no leading monomial, ascending under
    /// `order`; `None` when the ideal is positive-dimensional.
    pub standard: Option<Vec<Monomial>>,
    pub field: PrimeField,
    pub nvars: usize,
}

impl ReducedGroebnerBasis {
    /// Staircase complement; errors on positive-dimensional ideals.
    pub fn standard_monomials(&self) -> Result<&[Monomial], GroebnerError> {
        match &self.standard {
            Some(s) => Ok(s),
            None => Err(positive_dim_error(&self.leading_monomials, self.nvars)),
        }
    }

    /// Dimension of the quotient ring = number of solutions counted with
    /// multiplicity.
    pub fn quotient_dimension(&self) -> Result<usize, GroebnerError> {
        Ok(self.standard_monomials()?.len())
    }
}

// ---------------------------------------------------------------------------
// Working representation: term lists sorted descending under the active
// order, so the leading term is O(1).

type Terms = Vec<(Monomial, Fe)>;

fn to_ordered(p: &PolyZp, order: &MonomialOrder) -> Terms {
    let mut t: Terms = p.terms().to_vec();
    t.sort_by(|a, b| order.compare(&b.0, &a.0));
    t
}

fn to_canonical(field: PrimeField, nvars: usize, terms: Terms) -> PolyZp {
    PolyZp::from_terms(field, nvars, terms)
}

/// `h - c * x^shift * g`, all term lists descending under `order`.
fn sub_mul(
    field: &PrimeField,
    order: &MonomialOrder,
    h: &[(Monomial, Fe)],
    g: &[(Monomial, Fe)],
    c: Fe,
    shift: &Monomial,
) -> Terms {
    let mut out = Vec::with_capacity(h.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < h.len() || j < g.len() {
        if j == g.len() {
            out.push(h[i].clone());
            i += 1;
            continue;
        }
        let gm = g[j].0.mul(shift);
        let gc = field.mul(g[j].1, c);
        if i == h.len() {
            if gc != 0 {
                out.push((gm, field.neg(gc)));
            }
            j += 1;
            continue;
        }
        match order.compare(&h[i].0, &gm) {
            Ordering::Greater => {
                out.push(h[i].clone());
                i += 1;
            }
            Ordering::Less => {
                if gc != 0 {
                    out.push((gm, field.neg(gc)));
                }
                j += 1;
            }
            Ordering::Equal => {
                let v = field.sub(h[i].1, gc);
                if v != 0 {
                    out.push((h[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn nf_terms(field: &PrimeField, order: &MonomialOrder, f: Terms, gens: &[Terms]) -> Terms {
    let mut rem: Terms = Vec::new();
    let mut h = f;
    'outer: while let Some((m, c)) = h.first().cloned() {
        for g in gens {
            let (lm, lc) = &g[0];
            if lm.divides(&m) {
                let shift = lm.try_div(&m).unwrap();
                let factor = field.div(c, *lc);
                h = sub_mul(field, order, &h, g, factor, &shift);
                continue 'outer;
            }
        }
        rem.push((m, c));
        h.remove(0);
    }
    rem
}

// ---------------------------------------------------------------------------
// Public operations

/// Remainder of multivariate division of `f` by `gens`: no monomial of
/// the result is divisible by any leading monomial of `gens`, and the
/// difference lies in the ideal they generate. Unique when `gens` is a
/// Gröbner basis.
pub fn normal_form(f: &PolyZp, gens: &[PolyZp], order: &MonomialOrder) -> PolyZp {
    let field = *f.field();
    let g: Vec<Terms> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_ordered(g, order))
        .collect();
    let r = nf_terms(&field, order, to_ordered(f, order), &g);
    to_canonical(field, f.nvars(), r)
}

/// S-polynomial `(lcm/lt(f))·f - (lcm/lt(g))·g`; the leading terms cancel
/// by construction.
pub fn s_polynomial(f: &PolyZp, g: &PolyZp, order: &MonomialOrder) -> PolyZp {
    assert!(!f.is_zero() && !g.is_zero(), "S-polynomial of zero");
    let field = *f.field();
    let s = s_poly_terms(&field, order, &to_ordered(f, order), &to_ordered(g, order));
    to_canonical(field, f.nvars(), s)
}

fn s_poly_terms(
    field: &PrimeField,
    order: &MonomialOrder,
    f: &[(Monomial, Fe)],
    g: &[(Monomial, Fe)],
) -> Terms {
    let (lmf, lcf) = &f[0];
    let (lmg, lcg) = &g[0];
    let lcm = lmf.lcm(lmg);
    let sf = lmf.try_div(&lcm).unwrap();
    let inv_f = field.inv(*lcf);
    let a: Terms = f
        .iter()
        .map(|(m, c)| (m.mul(&sf), field.mul(*c, inv_f)))
        .collect();
    let sg = lmg.try_div(&lcm).unwrap();
    sub_mul(field, order, &a, g, field.inv(*lcg), &sg)
}

/// Buchberger's algorithm with normal pair selection and the coprime
/// criterion. The output generates the same ideal and every S-polynomial
/// of output pairs reduces to zero.
pub fn buchberger(
    gens: &[PolyZp],
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<Vec<PolyZp>, GroebnerError> {
    let nonzero: Vec<&PolyZp> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(GroebnerError::EmptyIdeal);
    }
    let field = *nonzero[0].field();
    let nvars = nonzero[0].nvars();

    let mut basis: Vec<Terms> = nonzero.iter().map(|g| to_ordered(g, order)).collect();
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i, basis[j][0].0.lcm(&basis[i][0].0)));
        }
    }

    let mut reductions = 0usize;
    while !pairs.is_empty() {
        // Normal selection: smallest lcm under the order; ties go to the
        // earliest queued pair so runs are deterministic.
        let mut best = 0;
        for k in 1..pairs.len() {
            if order.compare(&pairs[k].2, &pairs[best].2) == Ordering::Less {
                best = k;
            }
        }
        let (i, j, _) = pairs.remove(best);

        if basis[i][0].0.coprime(&basis[j][0].0) {
            continue;
        }
        if let Some(d) = cfg.deadline {
            if Instant::now() > d {
                return Err(GroebnerError::Timeout);
            }
        }
        reductions += 1;
        if reductions > cfg.max_pair_reductions {
            return Err(GroebnerError::IterationBudget(cfg.max_pair_reductions));
        }

        let s = s_poly_terms(&field, order, &basis[i], &basis[j]);
        let r = nf_terms(&field, order, s, &basis);
        if !r.is_empty() {
            let new = basis.len();
            for k in 0..new {
                pairs.push((k, new, basis[k][0].0.lcm(&r[0].0)));
            }
            basis.push(r);
        }
    }

    Ok(basis
        .into_iter()
        .map(|t| to_canonical(field, nvars, t))
        .collect())
}

/// Interreduces a Gröbner basis into the unique reduced basis for this
/// (ideal, order) pair.
pub fn reduce_basis(gb: &[PolyZp], order: &MonomialOrder) -> ReducedGroebnerBasis {
    let nonzero: Vec<&PolyZp> = gb.iter().filter(|g| !g.is_zero()).collect();
    assert!(!nonzero.is_empty(), "reduce_basis on empty basis");
    let field = *nonzero[0].field();
    let nvars = nonzero[0].nvars();

    let mut entries: Vec<Terms> = nonzero.iter().map(|g| to_ordered(g, order)).collect();
    entries.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));

    // Minimalize: drop generators whose lm is divisible by a kept one.
    let mut kept: Vec<Terms> = Vec::new();
    for e in entries {
        if !kept.iter().any(|k| k[0].0.divides(&e[0].0)) {
            kept.push(e);
        }
    }

    // Tail-reduce each generator against the others. Leading monomials
    // are stable here, so one pass fully reduces.
    let n = kept.len();
    for i in 0..n {
        let others: Vec<Terms> = (0..n)
            .filter(|&j| j != i)
            .map(|j| kept[j].clone())
            .collect();
        let r = nf_terms(&field, order, kept[i].clone(), &others);
        debug_assert!(!r.is_empty());
        kept[i] = r;
    }

    // Monic, deterministic order.
    for t in &mut kept {
        let inv = field.inv(t[0].1);
        for (_, c) in t.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
    kept.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));

    let leading: Vec<Monomial> = kept.iter().map(|t| t[0].0.clone()).collect();
    let standard = staircase(&leading, nvars).ok().map(|mut s| {
        s.sort_by(crate::poly::order::cmp_reading);
        s
    });
    ReducedGroebnerBasis {
        order: order.clone(),
        generators: kept
            .into_iter()
            .map(|t| to_canonical(field, nvars, t))
            .collect(),
        leading_monomials: leading,
        standard,
        field,
        nvars,
    }
}

/// Buchberger followed by interreduction.
pub fn groebner_basis(
    gens: &[PolyZp],
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<ReducedGroebnerBasis, GroebnerError> {
    let gb = buchberger(gens, order, cfg)?;
    Ok(reduce_basis(&gb, order))
}

fn positive_dim_error(leading: &[Monomial], nvars: usize) -> GroebnerError {
    for i in 0..nvars {
        let bounded = leading
            .iter()
            .any(|lm| lm.exp(i) > 0 && (0..nvars).all(|j| j == i || lm.exp(j) == 0));
        if !bounded {
            return GroebnerError::PositiveDimensional(i);
        }
    }
    GroebnerError::PositiveDimensional(0)
}

/// All monomials divisible by no leading monomial, by staircase walk.
/// Finite exactly when every variable has a pure-power leading monomial.
fn staircase(leading: &[Monomial], nvars: usize) -> Result<Vec<Monomial>, GroebnerError> {
    let mut bounds = vec![None::<u16>; nvars];
    for lm in leading {
        if lm.is_one() {
            // Ideal is the whole ring: empty staircase.
            return Ok(Vec::new());
        }
        for i in 0..nvars {
            if lm.exp(i) > 0 && (0..nvars).all(|j| j == i || lm.exp(j) == 0) {
                let e = lm.exp(i);
                bounds[i] = Some(bounds[i].map_or(e, |b| b.min(e)));
            }
        }
    }
    let mut dims = Vec::with_capacity(nvars);
    for (i, b) in bounds.iter().enumerate() {
        match b {
            Some(e) => dims.push(*e),
            None => return Err(GroebnerError::PositiveDimensional(i)),
        }
    }

    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    loop {
        let m = Monomial::from_exps(&exps);
        if !leading.iter().any(|lm| lm.divides(&m)) {
            out.push(m);
        }
        // Odometer step over the box [0, dims).
        let mut k = 0;
        loop {
            if k == nvars {
                return Ok(out);
            }
            exps[k] += 1;
            if exps[k] < dims[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysio::{parse_system, SystemFile};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOY: &str = "ring x, y over zp(30011)\nx + y^2 - 1\nx*y - 1\n";

    fn toy_eqs() -> (PrimeField, Vec<PolyZp>) {
        let SystemFile::Zp(s) = parse_system(TOY).unwrap() else {
            panic!()
        };
        (s.field, s.equations)
    }

    fn zp(field: PrimeField, nvars: usize, terms: &[(&[u16], i64)]) -> PolyZp {
        PolyZp::from_terms(
            field,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exps(e), field.normalize(*c)))
                .collect(),
        )
    }

    fn toy_grevlex_gb() -> ReducedGroebnerBasis {
        let (_, eqs) = toy_eqs();
        groebner_basis(&eqs, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap()
    }

    #[test]
    fn toy_grevlex_reduced_basis() {
        let (field, _) = toy_eqs();
        let gb = toy_grevlex_gb();
        // Generators come out sorted by leading monomial ascending:
        // y^2 + x - 1, xy - 1, x^2 - x + y.
        let want = vec![
            zp(field, 2, &[(&[0, 2], 1), (&[1, 0], 1), (&[0, 0], -1)]),
            zp(field, 2, &[(&[1, 1], 1), (&[0, 0], -1)]),
            zp(field, 2, &[(&[2, 0], 1), (&[1, 0], -1), (&[0, 1], 1)]),
        ];
        assert_eq!(gb.generators, want);
        assert_eq!(
            gb.leading_monomials,
            vec![
                Monomial::from_exps(&[0, 2]),
                Monomial::from_exps(&[1, 1]),
                Monomial::from_exps(&[2, 0]),
            ]
        );
    }

    #[test]
    fn toy_lex_bases_both_precedences() {
        let (field, eqs) = toy_eqs();
        // lex with x > y eliminates x.
        let gb = groebner_basis(&eqs, &MonomialOrder::lex(), &GbConfig::default()).unwrap();
        let want = vec![
            zp(field, 2, &[(&[0, 3], 1), (&[0, 1], -1), (&[0, 0], 1)]), // y^3 - y + 1
            zp(field, 2, &[(&[1, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]), // x + y^2 - 1
        ];
        assert_eq!(gb.generators.len(), 2);
        for w in &want {
            assert!(gb.generators.contains(w), "missing {w:?}");
        }
        // lex with y > x eliminates y.
        let o = MonomialOrder::lex().with_precedence(vec![1, 0]);
        let gb = groebner_basis(&eqs, &o, &GbConfig::default()).unwrap();
        let want = vec![
            zp(field, 2, &[(&[3, 0], 1), (&[2, 0], -1), (&[0, 0], 1)]), // x^3 - x^2 + 1
            zp(field, 2, &[(&[0, 1], 1), (&[2, 0], 1), (&[1, 0], -1)]), // y + x^2 - x
        ];
        assert_eq!(gb.generators.len(), 2);
        for w in &want {
            assert!(gb.generators.contains(w), "missing {w:?}");
        }
    }

    #[test]
    fn normal_form_examples() {
        let (field, _) = toy_eqs();
        let gb = toy_grevlex_gb();
        let o = MonomialOrder::grevlex();
        // NF(x^2) = x - y.
        let x2 = zp(field, 2, &[(&[2, 0], 1)]);
        assert_eq!(
            normal_form(&x2, &gb.generators, &o),
            zp(field, 2, &[(&[1, 0], 1), (&[0, 1], -1)])
        );
        // Self-reduction.
        for g in &gb.generators {
            assert!(normal_form(g, &gb.generators, &o).is_zero());
        }
    }

    fn rand_poly(rng: &mut ChaCha8Rng, field: PrimeField) -> PolyZp {
        let terms: Vec<(Monomial, Fe)> = (0..rng.gen_range(1..5))
            .map(|_| {
                let exps: Vec<u16> = (0..2).map(|_| rng.gen_range(0..4)).collect();
                (Monomial::from_exps(&exps), field.rand_elem(rng))
            })
            .collect();
        PolyZp::from_terms(field, 2, terms)
    }

    #[test]
    fn normal_form_ideal_membership_and_linearity() {
        let (field, _) = toy_eqs();
        let gb = toy_grevlex_gb();
        let o = MonomialOrder::grevlex();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let f = rand_poly(&mut rng, field);
            let h = rand_poly(&mut rng, field);
            let g = &gb.generators[rng.gen_range(0..gb.generators.len())];
            // NF(f + h*g) = NF(f).
            assert_eq!(
                normal_form(&f.add(&h.mul(g)), &gb.generators, &o),
                normal_form(&f, &gb.generators, &o)
            );
            // Linearity over Z_p.
            let a = field.rand_elem(&mut rng);
            let b = field.rand_elem(&mut rng);
            let g2 = rand_poly(&mut rng, field);
            let lhs = normal_form(&f.mul_scalar(&a).add(&g2.mul_scalar(&b)), &gb.generators, &o);
            let rhs = normal_form(&f, &gb.generators, &o)
                .mul_scalar(&a)
                .add(&normal_form(&g2, &gb.generators, &o).mul_scalar(&b));
            assert_eq!(lhs, rhs);
            // Membership: combinations of generators reduce to zero.
            let combo = gb.generators.iter().fold(PolyZp::zero(field, 2), |acc, g| {
                acc.add(&rand_poly(&mut rng, field).mul(g))
            });
            assert!(normal_form(&combo, &gb.generators, &o).is_zero());
        }
    }

    #[test]
    fn s_polynomial_examples() {
        let (field, _) = toy_eqs();
        let o = MonomialOrder::grevlex();
        let f = zp(field, 2, &[(&[0, 2], 1), (&[1, 0], 1), (&[0, 0], -1)]); // y^2+x-1
        let g = zp(field, 2, &[(&[1, 1], 1), (&[0, 0], -1)]); // xy-1
        let s = s_polynomial(&f, &g, &o);
        assert_eq!(s, zp(field, 2, &[(&[2, 0], 1), (&[1, 0], -1), (&[0, 1], 1)]));
        assert!(s_polynomial(&f, &f, &o).is_zero());

        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let a = rand_poly(&mut rng, field);
            let b = rand_poly(&mut rng, field);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let s = s_polynomial(&a, &b, &o);
            let lcm = a
                .leading_term(&o)
                .unwrap()
                .0
                .lcm(b.leading_term(&o).unwrap().0);
            if let Some((lm, _)) = s.leading_term(&o) {
                assert_eq!(o.compare(lm, &lcm), Ordering::Less);
            }
        }
    }

    #[test]
    fn buchberger_trivial_cases() {
        let field = PrimeField::default_field();
        // <x> stays {x}.
        let x = zp(field, 2, &[(&[1, 0], 1)]);
        let gb =
            groebner_basis(&[x.clone()], &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        assert_eq!(gb.generators, vec![x]);

        // Feeding a reduced GB back in reproduces it exactly.
        let toy = toy_grevlex_gb();
        let again = groebner_basis(
            &toy.generators,
            &MonomialOrder::grevlex(),
            &GbConfig::default(),
        )
        .unwrap();
        assert_eq!(again.leading_monomials, toy.leading_monomials);
        assert_eq!(again.generators, toy.generators);
    }

    #[test]
    fn iteration_budget_error() {
        let (_, eqs) = toy_eqs();
        let cfg = GbConfig {
            max_pair_reductions: 0,
            deadline: None,
        };
        assert_eq!(
            buchberger(&eqs, &MonomialOrder::grevlex(), &cfg),
            Err(GroebnerError::IterationBudget(0))
        );
    }

    #[test]
    fn standard_monomials_and_quotient_dimension() {
        let (field, eqs) = toy_eqs();
        let gb = toy_grevlex_gb();
        assert_eq!(
            gb.standard_monomials().unwrap(),
            &[
                Monomial::from_exps(&[0, 0]),
                Monomial::from_exps(&[1, 0]),
                Monomial::from_exps(&[0, 1]),
            ]
        );
        assert_eq!(gb.quotient_dimension().unwrap(), 3);

        let lex = groebner_basis(&eqs, &MonomialOrder::lex(), &GbConfig::default()).unwrap();
        assert_eq!(
            lex.standard_monomials().unwrap(),
            &[
                Monomial::from_exps(&[0, 0]),
                Monomial::from_exps(&[0, 1]),
                Monomial::from_exps(&[0, 2]),
            ]
        );
        assert_eq!(lex.quotient_dimension().unwrap(), 3);

        let o = MonomialOrder::lex().with_precedence(vec![1, 0]);
        let lex_yx = groebner_basis(&eqs, &o, &GbConfig::default()).unwrap();
        assert_eq!(lex_yx.quotient_dimension().unwrap(), 3);

        // <x, y> -> {1}.
        let ideal = vec![zp(field, 2, &[(&[1, 0], 1)]), zp(field, 2, &[(&[0, 1], 1)])];
        let gb = groebner_basis(&ideal, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        assert_eq!(gb.standard_monomials().unwrap(), &[Monomial::one(2)]);

        // <x - 1, y - 2> -> single solution.
        let ideal = vec![
            zp(field, 2, &[(&[1, 0], 1), (&[0, 0], -1)]),
            zp(field, 2, &[(&[0, 1], 1), (&[0, 0], -2)]),
        ];
        let gb = groebner_basis(&ideal, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        assert_eq!(gb.quotient_dimension().unwrap(), 1);
    }

    #[test]
    fn positive_dimensional_detected() {
        let field = PrimeField::default_field();
        // <x> in two variables: y is unbounded.
        let x = zp(field, 2, &[(&[1, 0], 1)]);
        let gb = groebner_basis(&[x], &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        assert!(matches!(
            gb.quotient_dimension(),
            Err(GroebnerError::PositiveDimensional(1))
        ));
        assert!(gb.standard.is_none());
    }
}
