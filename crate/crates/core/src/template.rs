//! Elimination templates: expanded equation sets whose linear elimination
//! expresses every reducible monomial alpha*b in the chosen quotient
//! basis, yielding the action matrix.
//!
//! Columns are partitioned excess | reducible | basis (descending grevlex
//! inside each block) and only monomials that actually occur in a row
//! polynomial become columns. Feasibility means that after eliminating
//! the excess block, every reducible column carries a pivot; templates
//! are grown one total degree at a time until feasible and then pruned
//! greedily.

use crate::basis::{solve_in_span, CoordinateSpace, QuotientBasis};
use crate::field::{Fe, PrimeField};
use crate::groebner::GroebnerError;
use crate::poly::{cmp_internal, Monomial, PolyZp};
use crate::sysio::parse_monomial;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error("no feasible template for action variable {alpha} within degree cap {cap}")]
    CapExceeded { alpha: usize, cap: u32 },
    #[error("elimination lost a reducible pivot; instance is degenerate")]
    EliminationRank,
    #[error("coordinate vectors of the basis are singular")]
    SingularSolve,
    #[error("every action variable exceeded the degree cap")]
    AllActionsFailed,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("template file malformed: {0}")]
    BadFile(String),
}

/// Row recipe plus partitioned column order for one (basis, action) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationTemplate {
    /// (equation index, multiplier monomial).
    pub rows: Vec<(usize, Monomial)>,
    /// excess || reducible || basis-present, descending grevlex within
    /// each block.
    pub columns: Vec<Monomial>,
    pub n_excess: usize,
    pub n_reducible: usize,
    pub basis: QuotientBasis,
    pub action_var: usize,
}

impl EliminationTemplate {
    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn reducible_columns(&self) -> &[Monomial] {
        &self.columns[self.n_excess..self.n_excess + self.n_reducible]
    }
}

/// K x K action matrix over Z_p, rows indexed by basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionMatrixZp {
    pub field: PrimeField,
    pub rows: Vec<Vec<Fe>>,
}

impl ActionMatrixZp {
    pub fn k(&self) -> usize {
        self.rows.len()
    }
}

/// `{alpha*b : b in basis} \ basis`, deduplicated and sorted descending
/// grevlex (the reducible column block order).
pub fn reducible_set(basis: &[Monomial], alpha: usize) -> Vec<Monomial> {
    let nvars = basis.first().map(|m| m.nvars()).unwrap_or(0);
    let b_set: HashSet<&Monomial> = basis.iter().collect();
    let xa = Monomial::var(alpha, nvars);
    let mut out: Vec<Monomial> = basis
        .iter()
        .map(|b| b.mul(&xa))
        .filter(|m| !b_set.contains(m))
        .collect();
    out.sort_by(|a, b| cmp_internal(b, a));
    out.dedup();
    out
}

/// All (equation index, multiplier) pairs with deg(m * f_i) <= max_deg,
/// sorted by equation index then multiplier (ascending internal order).
pub fn expand_rows(equations: &[PolyZp], max_deg: u32) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for (i, eq) in equations.iter().enumerate() {
        if eq.is_zero() {
            continue;
        }
        let d = eq.total_degree();
        if d > max_deg {
            continue;
        }
        let mut mults = crate::basis::degree_closure(eq.nvars(), max_deg - d);
        mults.sort_by(cmp_internal);
        for m in mults {
            out.push((i, m));
        }
    }
    out
}

/// Column list for a row set: occurring monomials partitioned as
/// excess | reducible | basis. Reducible monomials that never occur are
/// reported back so feasibility can fail fast.
fn build_columns(
    rows: &[(usize, Monomial)],
    equations: &[PolyZp],
    basis: &[Monomial],
    alpha: usize,
) -> Option<(Vec<Monomial>, usize, usize)> {
    let mut support: HashSet<Monomial> = HashSet::new();
    for (i, m) in rows {
        for (t, _) in equations[*i].terms() {
            support.insert(t.mul(m));
        }
    }
    let reducible = reducible_set(basis, alpha);
    if !reducible.iter().all(|r| support.contains(r)) {
        return None;
    }
    let b_set: HashSet<&Monomial> = basis.iter().collect();
    let r_set: HashSet<&Monomial> = reducible.iter().collect();
    let mut excess: Vec<Monomial> = support
        .iter()
        .filter(|m| !b_set.contains(*m) && !r_set.contains(*m))
        .cloned()
        .collect();
    excess.sort_by(|a, b| cmp_internal(b, a));
    let mut basis_cols: Vec<Monomial> = support
        .iter()
        .filter(|m| b_set.contains(*m))
        .cloned()
        .collect();
    basis_cols.sort_by(|a, b| cmp_internal(b, a));
    let n_excess = excess.len();
    let n_reducible = reducible.len();
    let mut columns = excess;
    columns.extend(reducible);
    columns.extend(basis_cols);
    Some((columns, n_excess, n_reducible))
}

/// Dense Z_p coefficient matrix of the rows over the given columns.
fn coefficient_matrix(
    rows: &[(usize, Monomial)],
    equations: &[PolyZp],
    columns: &[Monomial],
) -> Vec<Vec<Fe>> {
    let col_index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    rows.iter()
        .map(|(i, mult)| {
            let mut row = vec![0u32; columns.len()];
            for (t, c) in equations[*i].terms() {
                let m = t.mul(mult);
                let idx = *col_index
                    .get(&m)
                    .expect("row support must be contained in columns");
                row[idx] = *c;
            }
            row
        })
        .collect()
}

/// Forward elimination over the leading `limit` columns. Returns, per
/// column, the pivot row index if one was found.
fn forward_eliminate(field: &PrimeField, mat: &mut [Vec<Fe>], limit: usize) -> Vec<Option<usize>> {
    let nrows = mat.len();
    let mut used = vec![false; nrows];
    let mut pivots = vec![None; limit];
    for col in 0..limit {
        let Some(pr) = (0..nrows).find(|&r| !used[r] && mat[r][col] != 0) else {
            continue;
        };
        used[pr] = true;
        pivots[col] = Some(pr);
        let inv = field.inv(mat[pr][col]);
        let prow: Vec<Fe> = mat[pr].iter().map(|&x| field.mul(x, inv)).collect();
        mat[pr] = prow;
        for r in 0..nrows {
            if r != pr && !used[r] && mat[r][col] != 0 {
                let c = mat[r][col];
                let (pr_row, target) = if r < pr {
                    let (head, tail) = mat.split_at_mut(pr);
                    (&tail[0], &mut head[r])
                } else {
                    let (head, tail) = mat.split_at_mut(r);
                    (&head[pr], &mut tail[0])
                };
                for (x, y) in target.iter_mut().zip(pr_row.iter()) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
    }
    pivots
}

/// Feasibility of a row set for (basis, alpha) on a Z_p instance: after
/// exact elimination restricted to the excess-then-reducible blocks,
/// every reducible column must carry a pivot.
pub fn feasible(
    rows: &[(usize, Monomial)],
    basis: &[Monomial],
    alpha: usize,
    equations: &[PolyZp],
) -> bool {
    let field = match equations.first() {
        Some(eq) => *eq.field(),
        None => return false,
    };
    let Some((columns, n_excess, n_reducible)) = build_columns(rows, equations, basis, alpha)
    else {
        return false;
    };
    if n_reducible == 0 {
        return true;
    }
    let mut mat = coefficient_matrix(rows, equations, &columns);
    let pivots = forward_eliminate(&field, &mut mat, n_excess + n_reducible);
    pivots[n_excess..n_excess + n_reducible]
        .iter()
        .all(|p| p.is_some())
}

/// Grows the row set by total degree, starting at the maximum equation
/// degree, until the template is feasible for (basis, alpha).
pub fn build_template(
    equations: &[PolyZp],
    basis: &QuotientBasis,
    alpha: usize,
    max_deg_cap: u32,
) -> Result<EliminationTemplate, TemplateError> {
    let start = equations
        .iter()
        .map(|e| e.total_degree())
        .max()
        .unwrap_or(0);
    let mut deg = start;
    while deg <= max_deg_cap {
        let rows = expand_rows(equations, deg);
        if feasible(&rows, &basis.monomials, alpha, equations) {
            let (columns, n_excess, n_reducible) =
                build_columns(&rows, equations, &basis.monomials, alpha)
                    .expect("feasible row set has all reducible columns");
            return Ok(EliminationTemplate {
                rows,
                columns,
                n_excess,
                n_reducible,
                basis: basis.clone(),
                action_var: alpha,
            });
        }
        deg += 1;
    }
    Err(TemplateError::CapExceeded {
        alpha,
        cap: max_deg_cap,
    })
}

/// Greedy single-pass pruning in reverse row order: drop a row whenever
/// feasibility is preserved, then drop columns no surviving row touches.
pub fn prune(t: &EliminationTemplate, equations: &[PolyZp]) -> EliminationTemplate {
    let mut rows = t.rows.clone();
    let mut i = rows.len();
    while i > 0 {
        i -= 1;
        let mut candidate = rows.clone();
        candidate.remove(i);
        if feasible(&candidate, &t.basis.monomials, t.action_var, equations) {
            rows = candidate;
        }
    }
    let (columns, n_excess, n_reducible) =
        build_columns(&rows, equations, &t.basis.monomials, t.action_var)
            .expect("pruned rows stay feasible");
    EliminationTemplate {
        rows,
        columns,
        n_excess,
        n_reducible,
        basis: t.basis.clone(),
        action_var: t.action_var,
    }
}

/// Extracts the exact action matrix by eliminating the template on a Z_p
/// instance: each reducible pivot row expresses alpha*b in the basis
/// columns; rows with alpha*b already in the basis are unit rows.
pub fn action_matrix_from_template(
    t: &EliminationTemplate,
    equations: &[PolyZp],
) -> Result<ActionMatrixZp, TemplateError> {
    let field = *equations[0].field();
    let nvars = equations[0].nvars();
    let mut mat = coefficient_matrix(&t.rows, equations, &t.columns);
    let limit = t.n_excess + t.n_reducible;
    let pivots = forward_eliminate(&field, &mut mat, limit);

    // Pivot rows keep residual mass at later pivot columns (they are
    // frozen once used); back-substitute right-to-left among the
    // reducible pivot rows so each is supported on its own column plus
    // the basis block.
    for col in (t.n_excess..limit).rev() {
        let Some(pr) = pivots[col] else {
            return Err(TemplateError::EliminationRank);
        };
        for other in t.n_excess..col {
            if let Some(orow) = pivots[other] {
                let c = mat[orow][col];
                if c != 0 {
                    let prow = mat[pr].clone();
                    for (x, y) in mat[orow].iter_mut().zip(prow.iter()) {
                        *x = field.sub(*x, field.mul(c, *y));
                    }
                }
            }
        }
    }

    let basis_index: HashMap<&Monomial, usize> = t
        .basis
        .monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let col_of: HashMap<&Monomial, usize> = t
        .columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    let k = t.basis.k();
    let xa = Monomial::var(t.action_var, nvars);
    let mut rows_out = Vec::with_capacity(k);
    for b in &t.basis.monomials {
        let ab = b.mul(&xa);
        if let Some(&j) = basis_index.get(&ab) {
            let mut row = vec![0u32; k];
            row[j] = 1;
            rows_out.push(row);
            continue;
        }
        let col = *col_of.get(&ab).ok_or(TemplateError::EliminationRank)?;
        let pr = pivots[col].ok_or(TemplateError::EliminationRank)?;
        // Row reads ab + sum c_j col_j = 0 with zeros on all pivot
        // columns, so ab = -sum over basis columns.
        let mut row = vec![0u32; k];
        for (ci, cm) in t.columns.iter().enumerate().skip(limit) {
            let c = mat[pr][ci];
            if c != 0 {
                let j = basis_index[cm];
                row[j] = field.neg(c);
            }
        }
        // Any leftover mass on non-pivot excess or reducible columns
        // would mean the elimination failed.
        for ci in 0..limit {
            if ci != col && mat[pr][ci] != 0 && pivots[ci].is_none() {
                return Err(TemplateError::EliminationRank);
            }
        }
        rows_out.push(row);
    }
    Ok(ActionMatrixZp {
        field,
        rows: rows_out,
    })
}

/// Ground-truth action matrix via normal forms: expresses the coordinates
/// of every alpha*b in the span of the basis coordinates by exact linear
/// solves.
pub fn action_matrix_oracle(
    basis: &QuotientBasis,
    alpha: usize,
    space: &CoordinateSpace,
) -> Result<ActionMatrixZp, TemplateError> {
    let field = space.field();
    let nvars = space.nvars();
    let basis_coords: Vec<Vec<Fe>> = basis
        .monomials
        .iter()
        .map(|m| space.coordinate_vector(m))
        .collect();
    let xa = Monomial::var(alpha, nvars);
    let mut rows = Vec::with_capacity(basis.k());
    for b in &basis.monomials {
        let target = space.coordinate_vector(&b.mul(&xa));
        let coeffs =
            solve_in_span(field, &basis_coords, &target).ok_or(TemplateError::SingularSolve)?;
        rows.push(coeffs);
    }
    Ok(ActionMatrixZp { field, rows })
}

/// Builds and prunes a template for every action variable and returns
/// the smallest by (rows, cols), ties to the lower variable index.
pub fn best_template(
    equations: &[PolyZp],
    basis: &QuotientBasis,
    max_deg_cap: u32,
) -> Result<EliminationTemplate, TemplateError> {
    let nvars = equations[0].nvars();
    let mut best: Option<EliminationTemplate> = None;
    for alpha in 0..nvars {
        let Ok(t) = build_template(equations, basis, alpha, max_deg_cap) else {
            continue;
        };
        let t = prune(&t, equations);
        let better = match &best {
            None => true,
            Some(b) => t.size() < b.size(),
        };
        if better {
            best = Some(t);
        }
    }
    best.ok_or(TemplateError::AllActionsFailed)
}

// ---------------------------------------------------------------------------
// Template file format

/// Serializes a template. Monomials render with the ring variable names;
/// the column line keeps the excess | reducible | basis partition.
pub fn write_template(t: &EliminationTemplate, names: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "rows {} cols {} basis {} action {}\n",
        t.rows.len(),
        t.columns.len(),
        t.basis.k(),
        names[t.action_var]
    ));
    for (i, m) in &t.rows {
        out.push_str(&format!("eq={} mul={}\n", i, m.format(names)));
    }
    let fmt_block = |ms: &[Monomial]| {
        ms.iter()
            .map(|m| m.format(names))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let excess = &t.columns[..t.n_excess];
    let reducible = t.reducible_columns();
    let basis_cols = &t.columns[t.n_excess + t.n_reducible..];
    out.push_str(&format!(
        "columns {} | {} | {}\n",
        fmt_block(excess),
        fmt_block(reducible),
        fmt_block(basis_cols)
    ));
    out.push_str(&format!("basis {}\n", fmt_block(&t.basis.monomials)));
    out
}

/// Reads a template file back against a known variable-name list.
pub fn read_template(text: &str, names: &[String]) -> Result<EliminationTemplate, TemplateError> {
    let bad = |m: &str| TemplateError::BadFile(m.to_string());
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("missing header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 8 || h[0] != "rows" || h[2] != "cols" || h[4] != "basis" || h[6] != "action" {
        return Err(bad("header must be `rows R cols C basis K action VAR`"));
    }
    let n_rows: usize = h[1].parse().map_err(|_| bad("bad row count"))?;
    let action_var = names
        .iter()
        .position(|n| n == h[7])
        .ok_or_else(|| bad("unknown action variable"))?;

    let mut rows = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let line = lines.next().ok_or_else(|| bad("missing row line"))?;
        let (eq_part, mul_part) = line
            .split_once(" mul=")
            .ok_or_else(|| bad("row line must be `eq=I mul=M`"))?;
        let idx: usize = eq_part
            .strip_prefix("eq=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad equation index"))?;
        let m = parse_monomial(mul_part, names).ok_or_else(|| bad("bad multiplier monomial"))?;
        rows.push((idx, m));
    }

    let col_line = lines
        .next()
        .and_then(|l| l.strip_prefix("columns "))
        .ok_or_else(|| bad("missing columns line"))?;
    let blocks: Vec<&str> = col_line.split('|').collect();
    if blocks.len() != 3 {
        return Err(bad("columns line needs excess | reducible | basis"));
    }
    let parse_block = |s: &str| -> Result<Vec<Monomial>, TemplateError> {
        s.split_whitespace()
            .map(|w| parse_monomial(w, names).ok_or_else(|| bad("bad column monomial")))
            .collect()
    };
    let excess = parse_block(blocks[0])?;
    let reducible = parse_block(blocks[1])?;
    let basis_cols = parse_block(blocks[2])?;

    let basis_line = lines
        .next()
        .and_then(|l| l.strip_prefix("basis "))
        .ok_or_else(|| bad("missing basis line"))?;
    let basis_monomials = parse_block(basis_line)?;

    let n_excess = excess.len();
    let n_reducible = reducible.len();
    let mut columns = excess;
    columns.extend(reducible);
    columns.extend(basis_cols);

    let complete = (0..names.len())
        .any(|a| crate::basis::extraction_complete(&basis_monomials, a));
    Ok(EliminationTemplate {
        rows,
        columns,
        n_excess,
        n_reducible,
        basis: QuotientBasis {
            monomials: basis_monomials,
            action_var,
            provenance: crate::basis::BasisProvenance::File,
            extraction_complete: complete,
        },
        action_var,
    })
}
