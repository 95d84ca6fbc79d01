//! Floating-point instantiation of templates, elimination, action-matrix
//! eigendecomposition, and solution readout.
//!
//! The symbolic phase fixes the template (rows, columns, basis) on an
//! exact Z_p instance; this module replays it with real or complex
//! coefficients: Gaussian elimination with partial pivoting expresses
//! each reducible monomial in the basis columns, the action matrix is
//! eigendecomposed (Schur for eigenvalues, inverse iteration for right
//! eigenvectors), and variable values are read off eigenvector
//! coordinate ratios.

use crate::poly::{Monomial, PolyC};
use crate::template::EliminationTemplate;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("instance support is not contained in the template columns")]
    SupportMismatch,
    #[error("rank deficiency: pivot for a reducible column below threshold")]
    RankDeficiency,
    #[error("eigenvalue computation failed to converge")]
    EigenConvergence,
    #[error("variable {0} has no readable eigenvector edge")]
    UnreadableVariable(usize),
}

/// Solutions extracted from one instance.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    /// Complex points, one per successfully read eigenpair.
    pub points: Vec<Vec<Complex64>>,
    /// Per point: max over equations of |f(point)| normalized by
    /// 1 + max coefficient magnitude.
    pub residuals: Vec<f64>,
    /// All K eigenvalues of the action matrix.
    pub eigenvalues: Vec<Complex64>,
}

/// Fills the template's coefficient matrix from a float instance. The
/// instance must have the same equation count and a per-equation support
/// contained in the template columns.
pub fn instantiate(
    t: &EliminationTemplate,
    equations: &[PolyC],
) -> Result<Vec<Vec<Complex64>>, NumericError> {
    let col_index: HashMap<&Monomial, usize> = t
        .columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(t.rows.len());
    for (i, mult) in &t.rows {
        let eq = equations.get(*i).ok_or(NumericError::SupportMismatch)?;
        let mut row = vec![zero; t.columns.len()];
        for (m, c) in eq.terms() {
            let idx = *col_index
                .get(&m.mul(mult))
                .ok_or(NumericError::SupportMismatch)?;
            row[idx] += c;
        }
        out.push(row);
    }
    Ok(out)
}

/// Gaussian elimination with partial pivoting over the excess-then-
/// reducible column blocks, then assembly of the K x K action matrix.
/// Errors with rank deficiency when a reducible column has no pivot
/// above `1e-12` relative to the matrix scale.
pub fn eliminate_extract(
    matrix: &[Vec<Complex64>],
    t: &EliminationTemplate,
) -> Result<Vec<Vec<Complex64>>, NumericError> {
    let nrows = matrix.len();
    let ncols = t.columns.len();
    let limit = t.n_excess + t.n_reducible;

    // Column equilibration: monomial columns can differ by many orders
    // of magnitude (powers of image radii), which wrecks pivot
    // selection. Scale each column to unit max and undo the scaling on
    // the extracted expressions.
    let mut col_scale = vec![1.0f64; ncols];
    for (j, s) in col_scale.iter_mut().enumerate() {
        let m = matrix.iter().map(|r| r[j].norm()).fold(0.0, f64::max);
        if m > 0.0 {
            *s = m;
        }
    }
    let mut mat: Vec<Vec<Complex64>> = matrix
        .iter()
        .map(|r| {
            r.iter()
                .zip(&col_scale)
                .map(|(x, s)| x / s)
                .collect::<Vec<_>>()
        })
        .collect();

    let scale = mat.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = scale.max(1e-300) * 1e-12;
    let mut used = vec![false; nrows];
    let mut pivots: Vec<Option<usize>> = vec![None; limit];
    for col in 0..limit {
        let best = (0..nrows)
            .filter(|&r| !used[r])
            .max_by(|&a, &b| {
                mat[a][col]
                    .norm()
                    .partial_cmp(&mat[b][col].norm())
                    .unwrap()
            });
        let Some(pr) = best else { continue };
        if mat[pr][col].norm() <= tol {
            continue;
        }
        used[pr] = true;
        pivots[col] = Some(pr);
        let inv = Complex64::new(1.0, 0.0) / mat[pr][col];
        for x in &mut mat[pr] {
            *x *= inv;
        }
        for r in 0..nrows {
            if r != pr && !used[r] && mat[r][col].norm() > 0.0 {
                let c = mat[r][col];
                let prow = mat[pr].clone();
                for (x, y) in mat[r].iter_mut().zip(prow.iter()) {
                    *x -= c * y;
                }
            }
        }
    }

    // Every reducible column needs a pivot.
    for col in t.n_excess..limit {
        if pivots[col].is_none() {
            return Err(NumericError::RankDeficiency);
        }
    }

    // The eliminated pivot row for a reducible column r is the unique
    // combination y of the pivot rows with y^T A_P = e_r (P = pivot
    // columns). Recompute that combination directly from the original
    // scaled matrix by a square solve with compensated-residual
    // refinement, which restores the digits plain elimination loses to
    // pivot growth.
    let pivot_cols: Vec<usize> = (0..limit).filter(|&c| pivots[c].is_some()).collect();
    let pivot_rows: Vec<usize> = pivot_cols.iter().map(|&c| pivots[c].unwrap()).collect();
    let scaled: Vec<Vec<Complex64>> = matrix
        .iter()
        .map(|r| {
            r.iter()
                .zip(&col_scale)
                .map(|(x, s)| x / s)
                .collect::<Vec<_>>()
        })
        .collect();
    let np = pivot_cols.len();
    // S^T where S = scaled[pivot_rows, pivot_cols].
    let st: Vec<Vec<Complex64>> = (0..np)
        .map(|i| {
            (0..np)
                .map(|j| scaled[pivot_rows[j]][pivot_cols[i]])
                .collect()
        })
        .collect();
    let lu = LuFactors::new(st).ok_or(NumericError::RankDeficiency)?;

    let basis_index: HashMap<&Monomial, usize> = t
        .basis
        .monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let nvars = t.basis.monomials[0].nvars();
    let xa = Monomial::var(t.action_var, nvars);
    let col_of: HashMap<&Monomial, usize> = t
        .columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let pos_in_p: HashMap<usize, usize> = pivot_cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();

    let k = t.basis.k();
    let zero = Complex64::new(0.0, 0.0);
    let mut action = Vec::with_capacity(k);
    for b in &t.basis.monomials {
        let ab = b.mul(&xa);
        if let Some(&j) = basis_index.get(&ab) {
            let mut row = vec![zero; k];
            row[j] = Complex64::new(1.0, 0.0);
            action.push(row);
            continue;
        }
        let col = *col_of.get(&ab).ok_or(NumericError::RankDeficiency)?;
        let rpos = *pos_in_p.get(&col).ok_or(NumericError::RankDeficiency)?;
        let mut e = vec![zero; np];
        e[rpos] = Complex64::new(1.0, 0.0);
        // Solve S^T y = e_r, then iterate refinement with compensated
        // residuals until the correction stagnates; each sweep contracts
        // the error by roughly eps * kappa(S).
        let mut y = lu.solve(&e);
        for _ in 0..6 {
            let mut resid = Vec::with_capacity(np);
            for i in 0..np {
                let row_i: Vec<Complex64> =
                    (0..np).map(|j| scaled[pivot_rows[j]][pivot_cols[i]]).collect();
                let (dot, err) = comp_dot(&row_i, &y);
                resid.push(e[i] - dot - err);
            }
            let dy = lu.solve(&resid);
            let ynorm: f64 = y.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let dnorm: f64 = dy.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for (yi, di) in y.iter_mut().zip(&dy) {
                *yi += di;
            }
            if dnorm <= 1e-16 * ynorm {
                break;
            }
        }
        // Expression coefficients on the basis columns.
        let mut row = vec![zero; k];
        for (ci, cm) in t.columns.iter().enumerate().skip(limit) {
            let col_vals: Vec<Complex64> =
                pivot_rows.iter().map(|&r| scaled[r][ci]).collect();
            let (dot, err) = comp_dot(&col_vals, &y);
            let c = dot + err;
            if c.norm() > 0.0 {
                // Undo the column equilibration: the relation is in
                // y_j = s_j * x_j variables.
                row[basis_index[cm]] = -c * (col_scale[ci] / col_scale[col]);
            }
        }
        action.push(row);
    }
    Ok(action)
}

/// Error-free transformation helpers for compensated dot products.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Complex dot product sum_i a_i * b_i with a compensation term, giving
/// roughly double-double accuracy.
fn comp_dot(a: &[Complex64], b: &[Complex64]) -> (Complex64, Complex64) {
    let (mut sre, mut cre) = (0.0f64, 0.0f64);
    let (mut sim, mut cim) = (0.0f64, 0.0f64);
    let acc = |s: &mut f64, comp: &mut f64, p: f64, e: f64| {
        let (t, err) = two_sum(*s, p);
        *s = t;
        *comp += err + e;
    };
    for (x, y) in a.iter().zip(b) {
        let (p1, e1) = two_prod(x.re, y.re);
        let (p2, e2) = two_prod(x.im, y.im);
        let (p3, e3) = two_prod(x.re, y.im);
        let (p4, e4) = two_prod(x.im, y.re);
        acc(&mut sre, &mut cre, p1, e1);
        acc(&mut sre, &mut cre, -p2, -e2);
        acc(&mut sim, &mut cim, p3, e3);
        acc(&mut sim, &mut cim, p4, e4);
    }
    (Complex64::new(sre, sim), Complex64::new(cre, cim))
}

/// Dense complex LU with partial pivoting.
struct LuFactors {
    lu: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn new(mut a: Vec<Vec<Complex64>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
            if a[piv][col].norm() == 0.0 {
                return None;
            }
            a.swap(col, piv);
            perm.swap(col, piv);
            let inv = Complex64::new(1.0, 0.0) / a[col][col];
            for r in col + 1..n {
                let f = a[r][col] * inv;
                a[r][col] = f;
                if f.norm() > 0.0 {
                    let (head, tail) = a.split_at_mut(r);
                    let prow = &head[col];
                    let row = &mut tail[0];
                    for j in col + 1..n {
                        row[j] -= f * prow[j];
                    }
                }
            }
        }
        Some(LuFactors { lu: a, perm })
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = x[j];
                x[i] -= self.lu[i][j] * t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = x[j];
                x[i] -= self.lu[i][j] * t;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

fn to_dmatrix(m: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let k = m.len();
    DMatrix::from_fn(k, k, |i, j| m[i][j])
}

/// Solves `(a - shift I) x = b` in place with partial pivoting; zero
/// pivots are floored so inverse iteration can exploit near-singularity.
fn shifted_solve(
    a: &DMatrix<Complex64>,
    shift: Complex64,
    b: &[Complex64],
    floor: f64,
) -> Vec<Complex64> {
    let k = b.len();
    let mut m: Vec<Vec<Complex64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| a[(i, j)] - if i == j { shift } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let mut rhs = b.to_vec();
    for col in 0..k {
        let pr = (col..k)
            .max_by(|&x, &y| m[x][col].norm().partial_cmp(&m[y][col].norm()).unwrap())
            .unwrap();
        m.swap(col, pr);
        rhs.swap(col, pr);
        if m[col][col].norm() < floor {
            m[col][col] = Complex64::new(floor, 0.0);
        }
        let inv = Complex64::new(1.0, 0.0) / m[col][col];
        for r in col + 1..k {
            let f = m[r][col] * inv;
            if f.norm() > 0.0 {
                let prow = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(prow.iter()).skip(col) {
                    *x -= f * y;
                }
                let t = rhs[col];
                rhs[r] -= f * t;
            }
        }
    }
    for col in (0..k).rev() {
        let mut s = rhs[col];
        for j in col + 1..k {
            s -= m[col][j] * rhs[j];
        }
        rhs[col] = s / m[col][col];
    }
    rhs
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues via Schur decomposition, right eigenvectors via inverse
/// iteration. Eigenvectors are normalized to unit length; vectors of
/// clustered eigenvalues may be less accurate.
pub fn eigen_solve(
    m: &[Vec<Complex64>],
) -> Result<Vec<(Complex64, Vec<Complex64>)>, NumericError> {
    let k = m.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let scale = m
        .iter()
        .flatten()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    if m.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(NumericError::EigenConvergence);
    }

    let all_real = m.iter().flatten().all(|c| c.im.abs() <= 1e-13 * scale);
    let eigenvalues: Vec<Complex64> = if all_real {
        let a = DMatrix::<f64>::from_fn(k, k, |i, j| m[i][j].re);
        a.complex_eigenvalues().iter().copied().collect()
    } else {
        let a = to_dmatrix(m);
        let schur = nalgebra::linalg::Schur::try_new(a, 1e-14, 10_000)
            .ok_or(NumericError::EigenConvergence)?;
        schur
            .eigenvalues()
            .ok_or(NumericError::EigenConvergence)?
            .iter()
            .copied()
            .collect()
    };

    let a = to_dmatrix(m);
    let floor = scale * 1e-18;
    let mut out = Vec::with_capacity(k);
    for &lam in &eigenvalues {
        // Deterministic start vector with all directions populated.
        let mut v: Vec<Complex64> = (0..k)
            .map(|i| Complex64::new(1.0 + (i as f64) / (k as f64 + 1.0), 0.0))
            .collect();
        let n = vec_norm(&v);
        v.iter_mut().for_each(|x| *x /= n);
        let mut best = (f64::INFINITY, v.clone());
        for _ in 0..5 {
            let y = shifted_solve(&a, lam, &v, floor);
            let n = vec_norm(&y);
            if !n.is_finite() || n == 0.0 {
                break;
            }
            v = y.into_iter().map(|x| x / n).collect();
            // Residual ||A v - lam v||.
            let mut res = 0.0f64;
            for i in 0..k {
                let mut s = -lam * v[i];
                for j in 0..k {
                    s += a[(i, j)] * v[j];
                }
                res += s.norm_sqr();
            }
            let res = res.sqrt();
            if res < best.0 {
                best = (res, v.clone());
            }
            if res <= scale * 1e-13 {
                break;
            }
        }
        out.push((lam, best.1));
    }
    Ok(out)
}

/// Reads variable values out of eigenpairs: the action variable is the
/// eigenvalue, every other variable is a ratio v_j / v_k over an edge
/// b_j = x_i * b_k, taking the edge with the largest |v_k|. Eigenpairs
/// whose denominators all vanish are skipped.
pub fn extract_solutions(
    eigenpairs: &[(Complex64, Vec<Complex64>)],
    basis: &[Monomial],
    alpha: usize,
) -> Result<Vec<Vec<Complex64>>, NumericError> {
    let nvars = basis[0].nvars();
    // Edges per variable: (numerator index, denominator index).
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nvars];
    for i in 0..nvars {
        if i == alpha {
            continue;
        }
        let xi = Monomial::var(i, nvars);
        for (kk, b) in basis.iter().enumerate() {
            if let Some(&j) = index.get(&b.mul(&xi)) {
                edges[i].push((j, kk));
            }
        }
        if edges[i].is_empty() {
            return Err(NumericError::UnreadableVariable(i));
        }
    }

    let mut points = Vec::new();
    'pair: for (lam, v) in eigenpairs {
        let vn = vec_norm(v);
        let mut point = vec![Complex64::new(0.0, 0.0); nvars];
        point[alpha] = *lam;
        for i in 0..nvars {
            if i == alpha {
                continue;
            }
            let Some(&(j, kk)) = edges[i]
                .iter()
                .max_by(|a, b| v[a.1].norm().partial_cmp(&v[b.1].norm()).unwrap())
            else {
                continue 'pair;
            };
            if v[kk].norm() <= 1e-12 * vn {
                // Unreadable eigenvector; drop this candidate point.
                continue 'pair;
            }
            point[i] = v[j] / v[kk];
        }
        points.push(point);
    }
    Ok(points)
}

/// Normalized residual used throughout: max over equations of
/// |f(point)| / (1 + max coefficient magnitude of f).
pub fn point_residual(equations: &[PolyC], point: &[Complex64]) -> f64 {
    equations
        .iter()
        .map(|eq| {
            let scale = 1.0
                + eq.terms()
                    .iter()
                    .map(|(_, c)| c.norm())
                    .fold(0.0, f64::max);
            eq.evaluate(point).norm() / scale
        })
        .fold(0.0, f64::max)
}

/// Per-point residuals against the instance equations.
pub fn residuals(points: &[Vec<Complex64>], equations: &[PolyC]) -> Vec<f64> {
    points
        .iter()
        .map(|p| point_residual(equations, p))
        .collect()
}

/// Least-squares variable scaling: finds per-variable factors s_i so
/// that after the substitution x_i = x~_i / s_i the column magnitudes
/// are as balanced as possible. Solves the normal equations of
/// min sum_m (<exps(m), t> - log mu_m)^2 over t = log s.
fn variable_scaling(matrix: &[Vec<Complex64>], columns: &[Monomial]) -> Vec<f64> {
    let nvars = match columns.first() {
        Some(m) => m.nvars(),
        None => return Vec::new(),
    };
    let mut ata = vec![vec![0.0f64; nvars]; nvars];
    let mut atb = vec![0.0f64; nvars];
    for (j, m) in columns.iter().enumerate() {
        let mu = matrix.iter().map(|r| r[j].norm()).fold(0.0, f64::max);
        if mu <= 0.0 {
            continue;
        }
        let e: Vec<f64> = m.exps().iter().map(|&x| x as f64).collect();
        let b = mu.ln();
        for i in 0..nvars {
            for k in 0..nvars {
                ata[i][k] += e[i] * e[k];
            }
            atb[i] += e[i] * b;
        }
    }
    // Small SPD solve with a ridge term so degenerate exponent patterns
    // fall back toward no scaling.
    for i in 0..nvars {
        ata[i][i] += 1e-9;
    }
    let mut t = atb.clone();
    let mut a = ata;
    for col in 0..nvars {
        let piv = (col..nvars)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return vec![1.0; nvars];
        }
        a.swap(col, piv);
        t.swap(col, piv);
        let inv = 1.0 / a[col][col];
        for r in 0..nvars {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col] * inv;
                for c in 0..nvars {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
                let v = t[col];
                t[r] -= f * v;
            }
        }
    }
    (0..nvars)
        .map(|i| (t[i] / a[i][i]).clamp(-18.0, 18.0).exp())
        .collect()
}

/// Full numeric pipeline: instantiate, rebalance through a variable
/// scaling, eliminate, eigendecompose, read out solutions in the scaled
/// variables, unscale, and attach residuals against the original
/// equations.
pub fn solve_with_template(
    t: &EliminationTemplate,
    equations: &[PolyC],
) -> Result<SolutionSet, NumericError> {
    let matrix = instantiate(t, equations)?;
    let s = variable_scaling(&matrix, &t.columns);
    // Column m picks up the factor s^-exps(m).
    let scaled: Vec<Vec<Complex64>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(&t.columns)
                .map(|(x, m)| {
                    let f: f64 = m
                        .exps()
                        .iter()
                        .zip(&s)
                        .map(|(&e, si)| si.ln() * e as f64)
                        .sum();
                    x * (-f).exp()
                })
                .collect()
        })
        .collect();
    let action = eliminate_extract(&scaled, t)?;
    let eigenpairs = eigen_solve(&action)?;
    let scaled_points = extract_solutions(&eigenpairs, &t.basis.monomials, t.action_var)?;
    let points: Vec<Vec<Complex64>> = scaled_points
        .into_iter()
        .map(|p| p.iter().zip(&s).map(|(x, si)| x / si).collect())
        .collect();
    let residuals = residuals(&points, equations);
    let s_alpha = s[t.action_var];
    Ok(SolutionSet {
        points,
        residuals,
        eigenvalues: eigenpairs
            .into_iter()
            .map(|(l, _)| l / s_alpha)
            .collect(),
    })
}
