//! Quotient-ring coordinate vectors, linear-independence checks over Z_p,
//! candidate-set construction, and the heuristic basis sampler.
//!
//! A reference reduced Gröbner basis supplies the standard monomials
//! b_1..b_K; any monomial m is represented by the coordinates of its
//! normal form, m = sum_k c_k b_k mod I. Checking independence of a
//! monomial set then reduces to Gaussian elimination on those vectors.

use crate::field::{Fe, PrimeField};
use crate::groebner::{normal_form, GroebnerError, ReducedGroebnerBasis};
use crate::poly::{cmp_reading, Monomial, PolyZp};
use crate::util::rng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("candidate set cannot span the quotient: rank stalled at {rank} of {k}")]
    SpanFailure { rank: usize, k: usize },
    #[error("candidate pool exhausted before reaching a full basis")]
    PoolExhausted,
}

// ---------------------------------------------------------------------------
// Coordinates

/// A reference quotient basis: a zero-dimensional reduced GB plus an
/// index for its standard monomials, against which coordinate vectors
/// are expressed.
#[derive(Debug, Clone)]
pub struct CoordinateSpace {
    gb: ReducedGroebnerBasis,
    index: HashMap<Monomial, usize>,
    k: usize,
}

impl CoordinateSpace {
    pub fn new(gb: ReducedGroebnerBasis) -> Result<Self, GroebnerError> {
        let std = gb.standard_monomials()?.to_vec();
        let k = std.len();
        let index = std.into_iter().zip(0..).collect();
        Ok(CoordinateSpace { gb, index, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gb(&self) -> &ReducedGroebnerBasis {
        &self.gb
    }

    pub fn field(&self) -> PrimeField {
        self.gb.field
    }

    pub fn nvars(&self) -> usize {
        self.gb.nvars
    }

    /// Coordinates of NF(m) in the standard-monomial basis.
    pub fn coordinate_vector(&self, m: &Monomial) -> Vec<Fe> {
        let poly = PolyZp::from_terms(self.gb.field, self.gb.nvars, vec![(m.clone(), 1)]);
        self.coordinates_of_poly(&poly)
    }

    /// Coordinates of NF(p) for an arbitrary polynomial.
    pub fn coordinates_of_poly(&self, p: &PolyZp) -> Vec<Fe> {
        let nf = normal_form(p, &self.gb.generators, &self.gb.order);
        let mut out = vec![0; self.k];
        for (m, c) in nf.terms() {
            let idx = *self
                .index
                .get(m)
                .expect("normal form must be supported on standard monomials");
            out[idx] = *c;
        }
        out
    }
}

/// Coordinates of a monomial in the standard-monomial basis of `gb`.
pub fn coordinate_vector(m: &Monomial, gb: &ReducedGroebnerBasis) -> Result<Vec<Fe>, GroebnerError> {
    Ok(CoordinateSpace::new(gb.clone())?.coordinate_vector(m))
}

// ---------------------------------------------------------------------------
// Incremental rank tracking over Z_p

/// Row space in reduced form for incremental independence tests.
#[derive(Debug, Clone)]
pub struct RowReducer {
    field: PrimeField,
    width: usize,
    /// Rows with pivot normalized to 1, sorted by pivot column.
    rows: Vec<(usize, Vec<Fe>)>,
}

impl RowReducer {
    pub fn new(field: PrimeField, width: usize) -> Self {
        RowReducer {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after reduction by the stored rows.
    pub fn residual(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.width);
        let f = &self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    *x = f.sub(*x, f.mul(c, *r));
                }
            }
        }
        v
    }

    /// True iff `v` is independent of the stored rows.
    pub fn is_independent(&self, v: &[Fe]) -> bool {
        self.residual(v).iter().any(|&x| x != 0)
    }

    /// Adds `v` to the span; returns false (unchanged) when dependent.
    pub fn insert(&mut self, v: &[Fe]) -> bool {
        let f = self.field;
        let r = self.residual(v);
        match r.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = f.inv(r[pivot]);
                let row: Vec<Fe> = r.iter().map(|&x| f.mul(x, inv)).collect();
                self.rows.push((pivot, row));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
        }
    }
}

/// Solves `sum_i x_i basis[i] = target` exactly; `None` when target is
/// outside the span or the system is inconsistent.
pub fn solve_in_span(
    field: PrimeField,
    basis_vectors: &[Vec<Fe>],
    target: &[Fe],
) -> Option<Vec<Fe>> {
    let n = target.len();
    let m = basis_vectors.len();
    // Augmented columns: basis vectors then target.
    let mut a: Vec<Vec<Fe>> = (0..n)
        .map(|r| {
            let mut row: Vec<Fe> = basis_vectors.iter().map(|v| v[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0;
    for col in 0..m {
        let Some(pr) = (r0..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(r0, pr);
        let inv = field.inv(a[r0][col]);
        for x in &mut a[r0] {
            *x = field.mul(*x, inv);
        }
        for r in 0..n {
            if r != r0 && a[r][col] != 0 {
                let c = a[r][col];
                let (head, tail) = if r < r0 {
                    let (h, t) = a.split_at_mut(r0);
                    (&mut h[r], &t[0])
                } else {
                    let (h, t) = a.split_at_mut(r);
                    (&mut t[0], &h[r0])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        pivot_rows.push((col, r0));
        r0 += 1;
    }
    // Inconsistent if a zero row has a nonzero target entry.
    for r in r0..n {
        if a[r][m] != 0 {
            return None;
        }
    }
    let mut x = vec![0; m];
    for (col, row) in pivot_rows {
        x[col] = a[row][m];
    }
    Some(x)
}

/// True iff the coordinate vectors of `mons` have full rank over Z_p.
pub fn is_independent(mons: &[Monomial], space: &CoordinateSpace) -> bool {
    if mons.len() > space.k() {
        return false;
    }
    let mut red = RowReducer::new(space.field(), space.k());
    mons.iter()
        .all(|m| red.insert(&space.coordinate_vector(m)))
}

// ---------------------------------------------------------------------------
// Candidate set

/// The monomial pool M sampled from, with flags marking the subset E that
/// occurs in the original equations.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    /// Sorted in reading order.
    pub monomials: Vec<Monomial>,
    /// Parallel to `monomials`: occurs in the input equations.
    pub from_equations: Vec<bool>,
}

impl CandidateSet {
    pub fn equation_set(&self) -> HashSet<Monomial> {
        self.monomials
            .iter()
            .zip(&self.from_equations)
            .filter(|(_, &e)| e)
            .map(|(m, _)| m.clone())
            .collect()
    }
}

/// Starts from the monomials of the equations and multiplies by
/// equation monomials of increasing degree until the coordinate vectors
/// span the K-dimensional quotient. When a round fails to improve the
/// rank, the bare variables are added; two stalled rounds in a row is a
/// span failure.
pub fn build_candidate_set(
    equations: &[PolyZp],
    space: &CoordinateSpace,
) -> Result<CandidateSet, BasisError> {
    let k = space.k();
    let nvars = space.nvars();

    let mut eq_set: HashSet<Monomial> = HashSet::new();
    for eq in equations {
        eq_set.extend(eq.support().cloned());
    }
    let mut pool: Vec<Monomial> = eq_set.iter().cloned().collect();
    pool.sort_by(cmp_reading);

    let mut reducer = RowReducer::new(space.field(), k);
    let mut seen: HashSet<Monomial> = pool.iter().cloned().collect();
    for m in &pool {
        reducer.insert(&space.coordinate_vector(m));
    }

    // Multiplier degrees: the distinct degrees >= 1 present in E,
    // ascending; once exhausted, keep reusing the largest.
    let mut mult_degrees: Vec<u32> = eq_set
        .iter()
        .map(|m| m.total_degree())
        .filter(|&d| d >= 1)
        .collect();
    mult_degrees.sort_unstable();
    mult_degrees.dedup();

    let mut round = 0usize;
    let mut stalled_rounds = 0usize;
    while reducer.rank() < k {
        if mult_degrees.is_empty() {
            return Err(BasisError::SpanFailure {
                rank: reducer.rank(),
                k,
            });
        }
        let d = *mult_degrees
            .get(round)
            .unwrap_or_else(|| mult_degrees.last().unwrap());
        let multipliers: Vec<Monomial> = eq_set
            .iter()
            .filter(|m| m.total_degree() == d)
            .cloned()
            .collect();
        let rank_before = reducer.rank();

        let snapshot = pool.clone();
        for m in &snapshot {
            for t in &multipliers {
                let prod = m.mul(t);
                if seen.insert(prod.clone()) {
                    reducer.insert(&space.coordinate_vector(&prod));
                    pool.push(prod);
                }
            }
        }
        if reducer.rank() == rank_before && reducer.rank() < k {
            // Fall back to the bare variables.
            for i in 0..nvars {
                let v = Monomial::var(i, nvars);
                if seen.insert(v.clone()) {
                    reducer.insert(&space.coordinate_vector(&v));
                    pool.push(v);
                }
            }
            if reducer.rank() == rank_before {
                stalled_rounds += 1;
                if stalled_rounds >= 2 {
                    return Err(BasisError::SpanFailure {
                        rank: reducer.rank(),
                        k,
                    });
                }
            } else {
                stalled_rounds = 0;
            }
        } else {
            stalled_rounds = 0;
        }
        round += 1;
    }

    pool.sort_by(cmp_reading);
    let from_equations = pool.iter().map(|m| eq_set.contains(m)).collect();
    Ok(CandidateSet {
        monomials: pool,
        from_equations,
    })
}

// ---------------------------------------------------------------------------
// Sampling

/// Knobs for the heuristic sampler.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Weight floor so every independent candidate keeps positive mass.
    pub epsilon: f64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        SamplerConfig {
            epsilon: 0.01,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniformMode {
    /// Uniform over the candidate set M.
    FromM,
    /// Uniform over all monomials of total degree up to max degree in M.
    FromDegreeClosure,
}

/// Where a quotient basis came from.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisProvenance {
    StandardMonomials { order: String },
    Sampled { seed: u64, omega: Vec<bool> },
    SampledUniform { seed: u64, mode: UniformMode },
    File,
}

/// K monomials whose coordinate vectors are linearly independent over
/// Z_p, together with the action variable that guided sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientBasis {
    /// Sorted in reading order; action-matrix rows follow this order.
    pub monomials: Vec<Monomial>,
    pub action_var: usize,
    pub provenance: BasisProvenance,
    /// Some variable admits a complete readout (see
    /// [`extraction_complete`]); bases without one are still usable for
    /// size statistics.
    pub extraction_complete: bool,
}

impl QuotientBasis {
    pub fn from_standard_monomials(gb: &ReducedGroebnerBasis) -> Result<Self, GroebnerError> {
        let monomials = gb.standard_monomials()?.to_vec();
        let nvars = gb.nvars;
        let action_var = (0..nvars)
            .find(|&a| extraction_complete(&monomials, a))
            .unwrap_or(0);
        let extraction = extraction_complete(&monomials, action_var);
        Ok(QuotientBasis {
            monomials,
            action_var,
            provenance: BasisProvenance::StandardMonomials {
                order: gb.order.describe(),
            },
            extraction_complete: extraction,
        })
    }

    pub fn k(&self) -> usize {
        self.monomials.len()
    }
}

/// Sampling weight of a candidate monomial:
/// `I(m in E) + I(alpha*m in E u B) + 2^-(omega . exps(m)) + epsilon`.
/// The third term decays with the omega-weighted degree so low-degree
/// monomials in the masked directions are favored.
pub fn weight_w(
    m: &Monomial,
    e_set: &HashSet<Monomial>,
    b_set: &HashSet<Monomial>,
    alpha: usize,
    omega: &[bool],
    epsilon: f64,
) -> f64 {
    let mut w = epsilon;
    if e_set.contains(m) {
        w += 1.0;
    }
    let am = m.mul(&Monomial::var(alpha, m.nvars()));
    if e_set.contains(&am) || b_set.contains(&am) {
        w += 1.0;
    }
    let wd: u32 = m
        .exps()
        .iter()
        .zip(omega)
        .map(|(&e, &on)| if on { e as u32 } else { 0 })
        .sum();
    w += 2f64.powi(-(wd as i32));
    w
}

/// Monomials of `pool` outside `b` whose exponent vector differs from
/// some member of `b` by one in exactly one coordinate.
pub fn neighbors(b: &[Monomial], pool: &[Monomial]) -> Vec<Monomial> {
    let b_set: HashSet<&Monomial> = b.iter().collect();
    let nvars = match b.first() {
        Some(m) => m.nvars(),
        None => return Vec::new(),
    };
    let mut out = Vec::new();
    'outer: for m in pool {
        if b_set.contains(m) {
            continue;
        }
        for i in 0..nvars {
            let up = m.mul(&Monomial::var(i, nvars));
            if b_set.contains(&up) {
                out.push(m.clone());
                continue 'outer;
            }
            if m.exp(i) > 0 {
                let down = Monomial::var(i, nvars).try_div(m).unwrap();
                if b_set.contains(&down) {
                    out.push(m.clone());
                    continue 'outer;
                }
            }
        }
    }
    out
}

/// True iff every variable is either the action variable or readable
/// from the basis through a ratio edge `b_j = x_i * b_k`.
pub fn extraction_complete(b: &[Monomial], alpha: usize) -> bool {
    let nvars = match b.first() {
        Some(m) => m.nvars(),
        None => return false,
    };
    let b_set: HashSet<&Monomial> = b.iter().collect();
    (0..nvars).all(|i| {
        if i == alpha {
            return true;
        }
        let xi = Monomial::var(i, nvars);
        b.iter().any(|bk| b_set.contains(&bk.mul(&xi)))
    })
}

enum Weighting {
    Heuristic { omega: Vec<bool>, alpha: usize },
    Uniform,
}

fn draw_proportional(r: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut t = r.gen_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        t -= w;
        if t <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

fn sample_once(
    pool: &[Monomial],
    coords: &HashMap<Monomial, Vec<Fe>>,
    e_set: &HashSet<Monomial>,
    space: &CoordinateSpace,
    weighting: &Weighting,
    epsilon: f64,
    r: &mut ChaCha8Rng,
) -> Result<Vec<Monomial>, BasisError> {
    let k = space.k();
    let mut b: Vec<Monomial> = Vec::with_capacity(k);
    let mut b_set: HashSet<Monomial> = HashSet::new();
    let mut reducer = RowReducer::new(space.field(), k);
    while b.len() < k {
        // Candidates still independent of the partial basis.
        let independent: Vec<&Monomial> = pool
            .iter()
            .filter(|m| !b_set.contains(*m) && reducer.is_independent(&coords[*m]))
            .collect();
        if independent.is_empty() {
            return Err(BasisError::PoolExhausted);
        }
        let indep_owned: Vec<Monomial> = independent.iter().map(|m| (*m).clone()).collect();
        let near = neighbors(&b, &indep_owned);
        let choices: &[Monomial] = if near.is_empty() { &indep_owned } else { &near };
        let weights: Vec<f64> = match weighting {
            Weighting::Heuristic { omega, alpha } => choices
                .iter()
                .map(|m| weight_w(m, e_set, &b_set, *alpha, omega, epsilon))
                .collect(),
            Weighting::Uniform => vec![1.0; choices.len()],
        };
        let pick = choices[draw_proportional(r, &weights)].clone();
        reducer.insert(&coords[&pick]);
        b_set.insert(pick.clone());
        b.push(pick);
    }
    b.sort_by(cmp_reading);
    Ok(b)
}

fn coords_for(pool: &[Monomial], space: &CoordinateSpace) -> HashMap<Monomial, Vec<Fe>> {
    pool.iter()
        .map(|m| (m.clone(), space.coordinate_vector(m)))
        .collect()
}

/// Heuristically samples a K-element independent monomial basis from the
/// candidate set. Bases with no extraction-complete action variable are
/// rejected and redrawn up to 20 times; if all draws fail the last one is
/// returned flagged.
pub fn sample_basis(
    cands: &CandidateSet,
    space: &CoordinateSpace,
    cfg: &SamplerConfig,
) -> Result<QuotientBasis, BasisError> {
    let nvars = space.nvars();
    let e_set = cands.equation_set();
    let coords = coords_for(&cands.monomials, space);
    let mut r = rng(cfg.seed, 0xba);
    let mut last: Option<(Vec<Monomial>, Vec<bool>, usize)> = None;
    for _ in 0..20 {
        let omega: Vec<bool> = (0..nvars).map(|_| r.gen_bool(0.5)).collect();
        let masked: Vec<usize> = (0..nvars).filter(|&i| omega[i]).collect();
        let alpha = if masked.is_empty() {
            r.gen_range(0..nvars)
        } else {
            masked[r.gen_range(0..masked.len())]
        };
        let b = sample_once(
            &cands.monomials,
            &coords,
            &e_set,
            space,
            &Weighting::Heuristic {
                omega: omega.clone(),
                alpha,
            },
            cfg.epsilon,
            &mut r,
        )?;
        let complete = (0..nvars).any(|a| extraction_complete(&b, a));
        if complete {
            return Ok(QuotientBasis {
                monomials: b,
                action_var: alpha,
                provenance: BasisProvenance::Sampled {
                    seed: cfg.seed,
                    omega,
                },
                extraction_complete: true,
            });
        }
        last = Some((b, omega, alpha));
    }
    let (b, omega, alpha) = last.expect("at least one draw");
    Ok(QuotientBasis {
        monomials: b,
        action_var: alpha,
        provenance: BasisProvenance::Sampled {
            seed: cfg.seed,
            omega,
        },
        extraction_complete: false,
    })
}

/// Enumerates all monomials in `nvars` variables with total degree at
/// most `max_deg`, in reading order.
pub fn degree_closure(nvars: usize, max_deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if prefix.len() == nvars {
            out.push(Monomial::from_exps(prefix));
            return;
        }
        for e in 0..=left {
            prefix.push(e as u16);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, max_deg, &mut Vec::new(), &mut out);
    out.sort_by(cmp_reading);
    out
}

/// Uniform-weight ablation of the sampler: the same iterative loop with
/// all weights equal, drawing either from M or from the full degree
/// closure of M.
pub fn sample_basis_uniform(
    cands: &CandidateSet,
    space: &CoordinateSpace,
    seed: u64,
    mode: UniformMode,
) -> Result<QuotientBasis, BasisError> {
    let pool: Vec<Monomial> = match mode {
        UniformMode::FromM => cands.monomials.clone(),
        UniformMode::FromDegreeClosure => {
            let max_deg = cands
                .monomials
                .iter()
                .map(|m| m.total_degree())
                .max()
                .unwrap_or(0);
            degree_closure(space.nvars(), max_deg)
        }
    };
    let e_set = cands.equation_set();
    let coords = coords_for(&pool, space);
    let _ = &e_set;
    let mut r = rng(seed, 0xbb);
    let nvars = space.nvars();
    let mut last: Option<Vec<Monomial>> = None;
    for _ in 0..20 {
        let b = sample_once(
            &pool,
            &coords,
            &e_set,
            space,
            &Weighting::Uniform,
            0.0,
            &mut r,
        )?;
        let complete = (0..nvars).any(|a| extraction_complete(&b, a));
        if complete {
            return Ok(QuotientBasis {
                monomials: b,
                action_var: 0,
                provenance: BasisProvenance::SampledUniform { seed, mode },
                extraction_complete: true,
            });
        }
        last = Some(b);
    }
    Ok(QuotientBasis {
        monomials: last.expect("at least one draw"),
        action_var: 0,
        provenance: BasisProvenance::SampledUniform { seed, mode },
        extraction_complete: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{groebner_basis, GbConfig};
    use crate::poly::MonomialOrder;
    use crate::problems;
    use crate::sysio::{parse_system, SystemFile};

    fn toy_space() -> (Vec<PolyZp>, CoordinateSpace) {
        let inst = problems::toy(PrimeField::default_field());
        let eqs = inst.zp_system().unwrap().equations.clone();
        let gb = groebner_basis(&eqs, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        (eqs.clone(), CoordinateSpace::new(gb).unwrap())
    }

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps)
    }

    #[test]
    fn toy_coordinate_vectors() {
        let (_, space) = toy_space();
        let p = space.field().modulus();
        // Basis order (1, x, y).
        assert_eq!(space.coordinate_vector(&m(&[1, 0])), vec![0, 1, 0]);
        // x^2 = x - y.
        assert_eq!(space.coordinate_vector(&m(&[2, 0])), vec![0, 1, p - 1]);
        // xy = 1.
        assert_eq!(space.coordinate_vector(&m(&[1, 1])), vec![1, 0, 0]);
    }

    #[test]
    fn independence_examples() {
        let (_, space) = toy_space();
        assert!(is_independent(&[m(&[0, 0]), m(&[1, 0]), m(&[0, 1])], &space));
        assert!(is_independent(&[m(&[0, 0]), m(&[1, 0]), m(&[2, 0])], &space));
        // {1, x, xy} collapses because xy = 1.
        assert!(!is_independent(&[m(&[0, 0]), m(&[1, 0]), m(&[1, 1])], &space));
        // Any K+1 monomials are dependent.
        assert!(!is_independent(
            &[m(&[0, 0]), m(&[1, 0]), m(&[0, 1]), m(&[2, 0])],
            &space
        ));
    }

    #[test]
    fn toy_candidate_set_needs_one_round() {
        let (eqs, space) = toy_space();
        let cands = build_candidate_set(&eqs, &space).unwrap();
        // E = {1, x, y^2, xy}; their coordinate vectors only span rank 2,
        // so one multiplication round (by x, the sole degree-1 equation
        // monomial) is required before the set spans.
        for e in [m(&[0, 0]), m(&[1, 0]), m(&[0, 2]), m(&[1, 1])] {
            assert!(cands.monomials.contains(&e));
        }
        assert!(cands.monomials.contains(&m(&[2, 0])), "x^2 from x * x");
        let e_count = cands.from_equations.iter().filter(|&&b| b).count();
        assert_eq!(e_count, 4);
        // Spanning.
        let mut red = RowReducer::new(space.field(), space.k());
        for mm in &cands.monomials {
            red.insert(&space.coordinate_vector(mm));
        }
        assert_eq!(red.rank(), 3);
    }

    #[test]
    fn univariate_fallback_adds_bare_variable() {
        // x^2 - 2: equation monomials {x^2, 1} stay rank 1, fallback adds x.
        let SystemFile::Zp(s) = parse_system("ring x over zp(30011)\nx^2 - 2\n").unwrap() else {
            panic!()
        };
        let gb =
            groebner_basis(&s.equations, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        let space = CoordinateSpace::new(gb).unwrap();
        assert_eq!(space.k(), 2);
        let cands = build_candidate_set(&s.equations, &space).unwrap();
        assert!(cands.monomials.contains(&Monomial::from_exps(&[1])));
        assert!(cands.monomials.contains(&Monomial::from_exps(&[4])));
        let mut red = RowReducer::new(space.field(), 2);
        for mm in &cands.monomials {
            red.insert(&space.coordinate_vector(mm));
        }
        assert_eq!(red.rank(), 2);
    }

    #[test]
    fn weight_examples() {
        let e: HashSet<Monomial> = [m(&[1, 0, 0])].into_iter().collect();
        let b: HashSet<Monomial> = HashSet::new();
        // omega = (0,1,1), m = x*y*z^2 has masked degree 3.
        let w = weight_w(
            &m(&[1, 1, 2]),
            &e,
            &b,
            0,
            &[false, true, true],
            0.0,
        );
        assert!((w - 2f64.powi(-3)).abs() < 1e-12);
        // Both indicators fire and omega = 0 gives w_d = 1.
        let e2: HashSet<Monomial> = [m(&[1, 0]), m(&[1, 1])].into_iter().collect();
        let w = weight_w(&m(&[1, 0]), &e2, &b, 1, &[false, false], 0.01);
        assert!((w - 3.01).abs() < 1e-12);
    }

    #[test]
    fn neighbor_examples() {
        let pool = vec![m(&[1, 0]), m(&[0, 1]), m(&[2, 0]), m(&[1, 1])];
        let b = vec![m(&[0, 0])];
        let n = neighbors(&b, &pool);
        assert_eq!(n, vec![m(&[1, 0]), m(&[0, 1])]);
        let b = vec![m(&[1, 1])];
        let n = neighbors(&b, &pool);
        assert_eq!(n, vec![m(&[1, 0]), m(&[0, 1])]);
        assert!(neighbors(&[], &pool).is_empty());
    }

    #[test]
    fn extraction_complete_examples() {
        // {1, x, y} with alpha = y: x readable via x = x*1.
        assert!(extraction_complete(
            &[m(&[0, 0]), m(&[1, 0]), m(&[0, 1])],
            1
        ));
        // {1, y, y^2} with alpha = y: no x edge.
        assert!(!extraction_complete(
            &[m(&[0, 0]), m(&[0, 1]), m(&[0, 2])],
            1
        ));
        // {1, x, x^2} in one variable with alpha = x.
        assert!(extraction_complete(&[m(&[0]), m(&[1]), m(&[2])], 0));
        // The same power basis in two variables leaves y unreadable for
        // alpha = x but works with alpha = y.
        assert!(!extraction_complete(
            &[m(&[0, 0]), m(&[1, 0]), m(&[2, 0])],
            0
        ));
        assert!(extraction_complete(&[m(&[0, 0]), m(&[1, 0]), m(&[2, 0])], 1));
    }

    #[test]
    fn sampled_bases_are_independent_and_reproducible() {
        let (eqs, space) = toy_space();
        let cands = build_candidate_set(&eqs, &space).unwrap();
        for seed in 0..30 {
            let b = sample_basis(&cands, &space, &SamplerConfig::new(seed)).unwrap();
            assert_eq!(b.k(), 3);
            assert!(is_independent(&b.monomials, &space));
            for mm in &b.monomials {
                assert!(cands.monomials.contains(mm));
            }
            let again = sample_basis(&cands, &space, &SamplerConfig::new(seed)).unwrap();
            assert_eq!(b, again);
        }
    }

    #[test]
    fn sampled_toy_bases_come_from_brute_force_enumeration() {
        // All independent 3-subsets of M, by brute force.
        let (eqs, space) = toy_space();
        let cands = build_candidate_set(&eqs, &space).unwrap();
        let n = cands.monomials.len();
        let mut valid: Vec<Vec<Monomial>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let set = vec![
                        cands.monomials[i].clone(),
                        cands.monomials[j].clone(),
                        cands.monomials[l].clone(),
                    ];
                    if is_independent(&set, &space) {
                        valid.push(set);
                    }
                }
            }
        }
        assert!(!valid.is_empty());
        for seed in 0..20 {
            let mut b = sample_basis(&cands, &space, &SamplerConfig::new(seed))
                .unwrap()
                .monomials;
            b.sort_by(cmp_reading);
            assert!(valid.contains(&b), "sampled {b:?} not in enumeration");
        }
    }

    #[test]
    fn uniform_modes_and_pool_inclusion() {
        let (eqs, space) = toy_space();
        let cands = build_candidate_set(&eqs, &space).unwrap();
        let b = sample_basis_uniform(&cands, &space, 4, UniformMode::FromM).unwrap();
        assert_eq!(b.k(), 3);
        assert!(is_independent(&b.monomials, &space));
        // Degree-closure pool contains M.
        let max_deg = cands
            .monomials
            .iter()
            .map(|m| m.total_degree())
            .max()
            .unwrap();
        let closure = degree_closure(2, max_deg);
        for mm in &cands.monomials {
            assert!(closure.contains(mm));
        }
        let b = sample_basis_uniform(&cands, &space, 4, UniformMode::FromDegreeClosure).unwrap();
        assert!(is_independent(&b.monomials, &space));
    }

    #[test]
    fn standard_monomials_pass_independence_for_all_fan_bases() {
        let inst = problems::toy(PrimeField::default_field());
        let eqs = inst.zp_system().unwrap().equations.clone();
        let fan =
            crate::fan::enumerate_reduced_gbs(&eqs, 50, 9, &GbConfig::default()).unwrap();
        let reference = CoordinateSpace::new(fan.bases[2].clone()).unwrap();
        for gb in &fan.bases {
            let std = gb.standard_monomials().unwrap();
            assert!(is_independent(std, &reference));
        }
    }

    #[test]
    fn stitching_sampled_bases_all_valid() {
        let field = PrimeField::default_field();
        let inst = problems::instantiate_zp(problems::ProblemKind::Stitch2, 0, field).unwrap();
        let eqs = inst.zp_system().unwrap().equations.clone();
        let gb = groebner_basis(&eqs, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
        let space = CoordinateSpace::new(gb).unwrap();
        let cands = build_candidate_set(&eqs, &space).unwrap();
        for seed in 0..100 {
            let b = sample_basis(&cands, &space, &SamplerConfig::new(seed)).unwrap();
            assert_eq!(b.k(), 18);
            assert!(is_independent(&b.monomials, &space));
        }
    }
}
