//! Built-in problem generators.
//!
//! Each generator produces either an exact Z_p instance (for the symbolic
//! phase) or a floating-point instance with a planted ground-truth
//! solution (for numeric evaluation). Both modes run through the same
//! generic equation builders, so the monomial support of an equation is
//! identical across domains.

use crate::field::{Fe, PrimeField};
use crate::poly::{CoeffField, CoeffSpec, ComplexCoeffs, Monomial, PolyC, Polynomial, Ring};
use crate::sysio::{System, SystemFile};
use crate::util::rng;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("forward distortion infeasible for generated scene (discriminant <= 0)")]
    DistortionInfeasible,
    #[error("degenerate scene: {0}")]
    DegenerateScene(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Two equations in two unknowns with three solutions; fixed
    /// coefficients, handy at desk scale.
    Toy,
    /// Two-view panoramic stitching with shared unknown focal length and
    /// radial distortion, three point correspondences.
    Stitch2,
    /// Three-view variant with two point correspondences; same unknowns
    /// and equation family as `Stitch2`.
    Stitch3,
    /// Relative pose with one-sided unknown focal length and distortion,
    /// seven point correspondences.
    Efl,
}

impl ProblemKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "toy" => Some(ProblemKind::Toy),
            "stitch2" => Some(ProblemKind::Stitch2),
            "stitch3" => Some(ProblemKind::Stitch3),
            "efl" => Some(ProblemKind::Efl),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Toy => "toy",
            ProblemKind::Stitch2 => "stitch2",
            ProblemKind::Stitch3 => "stitch3",
            ProblemKind::Efl => "efl",
        }
    }

    pub fn all() -> [ProblemKind; 4] {
        [
            ProblemKind::Toy,
            ProblemKind::Stitch2,
            ProblemKind::Stitch3,
            ProblemKind::Efl,
        ]
    }

    /// Default calibration parameters (f_gt, lambda_gt) for float mode.
    pub fn default_params(&self) -> (f64, f64) {
        match self {
            ProblemKind::Efl => (10.0, -0.1),
            _ => (2.0, -0.1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneMeta {
    pub f_gt: f64,
    pub lambda_gt: f64,
}

/// A generated instance: the system plus, in float mode, the planted
/// solution in declared-variable order.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub system: SystemFile,
    pub ground_truth: Option<Vec<f64>>,
    pub scene: Option<SceneMeta>,
}

impl ProblemInstance {
    pub fn zp_system(&self) -> Option<&System<PrimeField>> {
        match &self.system {
            SystemFile::Zp(s) => Some(s),
            _ => None,
        }
    }

    pub fn float_system(&self) -> Option<&System<ComplexCoeffs>> {
        match &self.system {
            SystemFile::Complex(s) => Some(s),
            _ => None,
        }
    }
}

/// Normalized residual of a float equation set at a point: max over
/// equations of |f(point)| / (1 + max coefficient magnitude).
pub fn planted_residual(eqs: &[PolyC], point: &[Complex64]) -> f64 {
    eqs.iter()
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

// ---------------------------------------------------------------------------
// Exact rational coefficients for instance construction
//
// Image data are f64 values, hence exact dyadic rationals. Building the
// equations over BigRational and rounding once at the end gives every
// coefficient full relative accuracy and makes structural cancellations
// exact, instead of leaving each small coefficient with absolute error
// proportional to the largest intermediate product.

/// Exact rational field used while assembling instance equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RationalCoeffs;

impl CoeffField for RationalCoeffs {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn pivot_weight(&self, a: &BigRational) -> f64 {
        if a.is_zero() {
            0.0
        } else {
            a.to_f64().map(|v| v.abs()).unwrap_or(f64::MAX)
        }
    }
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite image data")
}

/// Rounds an exact rational polynomial into complex floats, scaled to
/// unit max coefficient.
fn rational_to_float(p: &Polynomial<RationalCoeffs>) -> PolyC {
    let max = p
        .terms()
        .iter()
        .map(|(_, c)| c.to_f64().map(|v| v.abs()).unwrap_or(f64::MAX))
        .fold(0.0, f64::max);
    let scale = if max > 0.0 {
        rat(max)
    } else {
        BigRational::one()
    };
    PolyC::from_terms(
        ComplexCoeffs,
        p.nvars(),
        p.terms()
            .iter()
            .map(|(m, c)| {
                let v = (c / &scale).to_f64().unwrap_or(0.0);
                (m.clone(), Complex64::new(v, 0.0))
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra over a generic coefficient field

type Vec3<E> = [E; 3];
type Mat3<E> = [[E; 3]; 3];

fn mat_vec<C: CoeffField>(f: &C, a: &Mat3<C::Elem>, v: &Vec3<C::Elem>) -> Vec3<C::Elem> {
    std::array::from_fn(|i| {
        let mut s = f.zero();
        for k in 0..3 {
            s = f.add(&s, &f.mul(&a[i][k], &v[k]));
        }
        s
    })
}

fn mat_mul<C: CoeffField>(f: &C, a: &Mat3<C::Elem>, b: &Mat3<C::Elem>) -> Mat3<C::Elem> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = f.zero();
            for k in 0..3 {
                s = f.add(&s, &f.mul(&a[i][k], &b[k][j]));
            }
            s
        })
    })
}

fn mat_transpose<C: CoeffField>(a: &Mat3<C::Elem>) -> Mat3<C::Elem> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn det3_scalar<C: CoeffField>(f: &C, m: &Mat3<C::Elem>) -> C::Elem {
    let t1 = f.mul(
        &m[0][0],
        &f.sub(&f.mul(&m[1][1], &m[2][2]), &f.mul(&m[1][2], &m[2][1])),
    );
    let t2 = f.mul(
        &m[0][1],
        &f.sub(&f.mul(&m[1][0], &m[2][2]), &f.mul(&m[1][2], &m[2][0])),
    );
    let t3 = f.mul(
        &m[0][2],
        &f.sub(&f.mul(&m[1][0], &m[2][1]), &f.mul(&m[1][1], &m[2][0])),
    );
    f.add(&f.sub(&t1, &t2), &t3)
}

fn mat3_inv<C: CoeffField>(f: &C, m: &Mat3<C::Elem>) -> Option<Mat3<C::Elem>> {
    let det = det3_scalar(f, m);
    let scale: f64 = m
        .iter()
        .flatten()
        .map(|e| f.pivot_weight(e))
        .fold(1.0, f64::max);
    if f.pivot_weight(&det) <= scale.powi(3) * 1e-12 {
        return None;
    }
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
        f.sub(
            &f.mul(&m[r1][c1], &m[r2][c2]),
            &f.mul(&m[r1][c2], &m[r2][c1]),
        )
    };
    // Adjugate over the determinant.
    let adj: Mat3<C::Elem> = [
        [
            cof(1, 1, 2, 2),
            f.neg(&cof(0, 1, 2, 2)),
            cof(0, 1, 1, 2),
        ],
        [
            f.neg(&cof(1, 0, 2, 2)),
            cof(0, 0, 2, 2),
            f.neg(&cof(0, 0, 1, 2)),
        ],
        [
            cof(1, 0, 2, 1),
            f.neg(&cof(0, 0, 2, 1)),
            cof(0, 0, 1, 1),
        ],
    ];
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| f.div(&adj[i][j], &det))
    }))
}

/// Cayley transform of the skew matrix with parameters (a, b, c):
/// R = (I - S)(I + S)^-1, exactly orthogonal over any field. `None`
/// when I + S is singular.
fn cayley<C: CoeffField>(
    f: &C,
    a: &C::Elem,
    b: &C::Elem,
    c: &C::Elem,
) -> Option<Mat3<C::Elem>> {
    let z = f.zero();
    let s: Mat3<C::Elem> = [
        [z.clone(), f.neg(a), f.neg(b)],
        [a.clone(), z.clone(), f.neg(c)],
        [b.clone(), c.clone(), z.clone()],
    ];
    let one = f.one();
    let mut i_minus: Mat3<C::Elem> =
        std::array::from_fn(|r| std::array::from_fn(|col| f.neg(&s[r][col])));
    let mut i_plus: Mat3<C::Elem> = s.clone();
    for d in 0..3 {
        i_minus[d][d] = f.add(&i_minus[d][d], &one);
        i_plus[d][d] = f.add(&i_plus[d][d], &one);
    }
    let inv = mat3_inv(f, &i_plus)?;
    Some(mat_mul(f, &i_minus, &inv))
}

/// Skew-symmetric cross-product matrix.
fn hat<C: CoeffField>(f: &C, t: &Vec3<C::Elem>) -> Mat3<C::Elem> {
    let z = f.zero();
    [
        [z.clone(), f.neg(&t[2]), t[1].clone()],
        [t[2].clone(), z.clone(), f.neg(&t[0])],
        [f.neg(&t[1]), t[0].clone(), z.clone()],
    ]
}

/// Solves `a · x = rhs` for square `a` (n x n, rhs n x m) by Gauss-Jordan
/// with partial pivoting. `None` when singular.
fn solve_square<C: CoeffField>(
    f: &C,
    mut a: Vec<Vec<C::Elem>>,
    mut rhs: Vec<Vec<C::Elem>>,
) -> Option<Vec<Vec<C::Elem>>> {
    let n = a.len();
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|e| f.pivot_weight(e))
        .fold(0.0, f64::max);
    let tol = scale * 1e-12;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            f.pivot_weight(&a[i][col])
                .partial_cmp(&f.pivot_weight(&a[j][col]))
                .unwrap()
        })?;
        if f.pivot_weight(&a[piv][col]) <= tol {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        let inv = f.div(&f.one(), &a[col][col]);
        for x in &mut a[col] {
            *x = f.mul(x, &inv);
        }
        for x in &mut rhs[col] {
            *x = f.mul(x, &inv);
        }
        for r in 0..n {
            if r == col || f.is_zero(&a[r][col]) {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let t = f.mul(&factor, &a[col][c]);
                a[r][c] = f.sub(&a[r][c], &t);
            }
            for c in 0..rhs[0].len() {
                let t = f.mul(&factor, &rhs[col][c]);
                rhs[r][c] = f.sub(&rhs[r][c], &t);
            }
        }
    }
    Some(rhs)
}

// ---------------------------------------------------------------------------
// Stitching equations, generic over the coefficient domain.
// Unknowns: (lambda, g) with g = 1/f^2.

/// One image observation: distorted affine coordinates and squared
/// radius.
#[derive(Clone, Debug)]
struct Obs<E> {
    x: E,
    y: E,
    r2: E,
}

impl<E: Clone> Obs<E> {
    fn new<C: CoeffField<Elem = E>>(f: &C, x: E, y: E) -> Self {
        let r2 = f.add(&f.mul(&x, &x), &f.mul(&y, &y));
        Obs { x, y, r2 }
    }
}

/// `1 + r^2 * lambda` as a polynomial in (lambda, g).
fn undistort_factor<C: CoeffField>(f: &C, o: &Obs<C::Elem>) -> Polynomial<C> {
    Polynomial::from_terms(
        f.clone(),
        2,
        vec![
            (Monomial::from_exps(&[0, 0]), f.one()),
            (Monomial::from_exps(&[1, 0]), o.r2.clone()),
        ],
    )
}

/// `<K^-1 u_j, K^-1 u_k> = g * (x_j x_k + y_j y_k) + q_j q_k`.
fn view_inner<C: CoeffField>(f: &C, j: &Obs<C::Elem>, k: &Obs<C::Elem>) -> Polynomial<C> {
    let d = f.add(&f.mul(&j.x, &k.x), &f.mul(&j.y, &k.y));
    let g_term = Polynomial::from_terms(f.clone(), 2, vec![(Monomial::from_exps(&[0, 1]), d)]);
    g_term.add(&undistort_factor(f, j).mul(&undistort_factor(f, k)))
}

/// `|K^-1 u|^2 = g * r^2 + q^2`.
fn view_norm2<C: CoeffField>(f: &C, o: &Obs<C::Elem>) -> Polynomial<C> {
    let g_term = Polynomial::from_terms(
        f.clone(),
        2,
        vec![(Monomial::from_exps(&[0, 1]), o.r2.clone())],
    );
    let q = undistort_factor(f, o);
    g_term.add(&q.mul(&q))
}

/// Cross-multiplied equality of squared angle cosines between two views
/// observing the same pair of rays.
fn angle_equation<C: CoeffField>(
    f: &C,
    aj: &Obs<C::Elem>,
    ak: &Obs<C::Elem>,
    bj: &Obs<C::Elem>,
    bk: &Obs<C::Elem>,
) -> Polynomial<C> {
    let ia = view_inner(f, aj, ak);
    let ib = view_inner(f, bj, bk);
    let lhs = ia.mul(&ia).mul(&view_norm2(f, bj)).mul(&view_norm2(f, bk));
    let rhs = ib.mul(&ib).mul(&view_norm2(f, aj)).mul(&view_norm2(f, ak));
    lhs.sub(&rhs)
}

/// Every cross-multiplied angle equation is divisible by g: at g = 0 all
/// rays collapse onto the optical axis and the constraint is trivially
/// true. Dividing the factor out removes that spurious component. In
/// float mode the g^0 terms survive only as cancellation noise and are
/// dropped.
fn strip_g_factor<C: CoeffField>(p: &Polynomial<C>) -> Polynomial<C> {
    let g = Monomial::var(1, 2);
    let terms: Vec<(Monomial, C::Elem)> = p
        .terms()
        .iter()
        .filter_map(|(m, c)| g.try_div(m).map(|q| (q, c.clone())))
        .collect();
    Polynomial::from_terms(p.field().clone(), p.nvars(), terms)
}

fn stitch_equations<C: CoeffField>(f: &C, views: &[Vec<Obs<C::Elem>>]) -> Vec<Polynomial<C>> {
    let eqs = if views.len() == 2 {
        // Three points give three pairwise constraints; the (1,2) pair is
        // dependent and dropped.
        vec![
            angle_equation(f, &views[0][0], &views[0][1], &views[1][0], &views[1][1]),
            angle_equation(f, &views[0][0], &views[0][2], &views[1][0], &views[1][2]),
        ]
    } else {
        // Two points in three views: compare views 1 and 3 against view 2.
        vec![
            angle_equation(f, &views[0][0], &views[0][1], &views[1][0], &views[1][1]),
            angle_equation(f, &views[2][0], &views[2][1], &views[1][0], &views[1][1]),
        ]
    };
    eqs.iter().map(strip_g_factor).collect()
}

// ---------------------------------------------------------------------------
// Float-side geometry

fn random_rotation_f64(rng: &mut ChaCha8Rng, magnitude: f64) -> Mat3<Complex64> {
    let c = ComplexCoeffs;
    loop {
        let a = Complex64::new(rng.gen_range(-magnitude..magnitude), 0.0);
        let b = Complex64::new(rng.gen_range(-magnitude..magnitude), 0.0);
        let d = Complex64::new(rng.gen_range(-magnitude..magnitude), 0.0);
        if let Some(r) = cayley(&c, &a, &b, &d) {
            return r;
        }
    }
}

/// Forward division-model distortion: maps undistorted affine
/// coordinates to distorted ones, taking the quadratic root that is
/// continuous at lambda = 0.
fn distort_f64(lambda: f64, ux: f64, uy: f64) -> Option<(f64, f64)> {
    let rho2 = ux * ux + uy * uy;
    let disc = 1.0 - 4.0 * lambda * rho2;
    if disc <= 0.0 {
        return None;
    }
    let t = 2.0 / (1.0 + disc.sqrt());
    Some((t * ux, t * uy))
}

/// Projects a camera-frame point through K = diag(f, f, 1) and distorts.
fn observe_f64(f_gt: f64, lambda: f64, p: &Vec3<Complex64>) -> Option<Obs<Complex64>> {
    let z = p[2].re;
    if z <= 0.2 {
        return None;
    }
    let ux = f_gt * p[0].re / z;
    let uy = f_gt * p[1].re / z;
    let (x, y) = distort_f64(lambda, ux, uy)?;
    Some(Obs::new(
        &ComplexCoeffs,
        Complex64::new(x, 0.0),
        Complex64::new(y, 0.0),
    ))
}

// ---------------------------------------------------------------------------
// Z_p-side geometry

fn random_rotation_zp(field: &PrimeField, rng: &mut ChaCha8Rng) -> Mat3<Fe> {
    loop {
        let a = field.rand_elem(rng);
        let b = field.rand_elem(rng);
        let c = field.rand_elem(rng);
        if let Some(r) = cayley(field, &a, &b, &c) {
            return r;
        }
    }
}

/// Given a view direction `s`, finds a distorted image point whose
/// undistorted lift is proportional to `s`: solves
/// `lambda*sigma*mu^2 - s3*mu + 1 = 0` for the scale mu. `None` when the
/// discriminant is a non-residue or sigma = 0; callers redraw the point.
fn distort_zp(field: &PrimeField, lambda: Fe, s: &Vec3<Fe>) -> Option<Obs<Fe>> {
    let sigma = field.add(field.mul(s[0], s[0]), field.mul(s[1], s[1]));
    let a = field.mul(lambda, sigma);
    if a == 0 {
        return None;
    }
    let disc = field.sub(field.mul(s[2], s[2]), field.mul(4 % field.modulus(), a));
    let root = field.sqrt(disc)?;
    let mu = field.div(field.add(s[2], root), field.mul(2, a));
    if mu == 0 {
        return None;
    }
    Some(Obs::new(field, field.mul(mu, s[0]), field.mul(mu, s[1])))
}

// ---------------------------------------------------------------------------
// Toy problem

fn toy_ring(coeff: CoeffSpec) -> Ring {
    Ring::new(vec!["x".to_string(), "y".to_string()], coeff)
}

/// The fixed two-equation demo system `x + y^2 - 1, x*y - 1` over Z_p.
pub fn toy(field: PrimeField) -> ProblemInstance {
    let mk = |terms: &[(&[u16], i64)]| {
        Polynomial::from_terms(
            field,
            2,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exps(e), field.normalize(*c)))
                .collect(),
        )
    };
    ProblemInstance {
        kind: ProblemKind::Toy,
        system: SystemFile::Zp(System {
            name: Some("toy".to_string()),
            ring: toy_ring(CoeffSpec::Zp(field.modulus())),
            field,
            equations: vec![
                mk(&[(&[1, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]),
                mk(&[(&[1, 1], 1), (&[0, 0], -1)]),
            ],
        }),
        ground_truth: None,
        scene: None,
    }
}

/// Float twin of [`toy`].
pub fn toy_float() -> ProblemInstance {
    let c = ComplexCoeffs;
    let mk = |terms: &[(&[u16], f64)]| {
        PolyC::from_terms(
            c,
            2,
            terms
                .iter()
                .map(|(e, v)| (Monomial::from_exps(e), Complex64::new(*v, 0.0)))
                .collect(),
        )
    };
    ProblemInstance {
        kind: ProblemKind::Toy,
        system: SystemFile::Complex(System {
            name: Some("toy".to_string()),
            ring: toy_ring(CoeffSpec::Complex),
            field: c,
            equations: vec![
                mk(&[(&[1, 0], 1.0), (&[0, 2], 1.0), (&[0, 0], -1.0)]),
                mk(&[(&[1, 1], 1.0), (&[0, 0], -1.0)]),
            ],
        }),
        ground_truth: None,
        scene: None,
    }
}

// ---------------------------------------------------------------------------
// Stitching generators

fn stitch_ring(coeff: CoeffSpec) -> Ring {
    Ring::new(vec!["lambda".to_string(), "g".to_string()], coeff)
}

fn stitching_float(
    kind: ProblemKind,
    seed: u64,
    f_gt: f64,
    lambda_gt: f64,
) -> Result<ProblemInstance, ProblemError> {
    assert!(f_gt > 0.0, "focal length must be positive");
    let (n_views, n_points, stream) = match kind {
        ProblemKind::Stitch2 => (2usize, 3usize, 0x5710u64),
        ProblemKind::Stitch3 => (3, 2, 0x5711),
        _ => unreachable!(),
    };
    let c = ComplexCoeffs;
    let mut r = rng(seed, stream);
    'attempt: for _ in 0..10 {
        let identity: Mat3<Complex64> = std::array::from_fn(|i| {
            std::array::from_fn(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
        });
        // Rotation magnitude tied to the field of view so the views keep
        // overlapping for long focal lengths.
        let rot_mag = (0.4 / f_gt).min(0.3);
        let mut rotations = vec![identity];
        for _ in 1..n_views {
            rotations.push(random_rotation_f64(&mut r, rot_mag));
        }
        let mut views: Vec<Vec<Obs<Complex64>>> = vec![Vec::new(); n_views];
        let mut radii: Vec<f64> = Vec::new();
        for _ in 0..n_points {
            let mut placed = false;
            'point: for _ in 0..200 {
                // Sensor-first sampling: draw the view-1 undistorted image
                // point on a fixed sensor annulus and back-project, so
                // image radii stay O(1) for any focal length. Points near
                // the image center carry no distortion information and
                // equal radii make the distortion inseparable, so radii
                // are kept spread out.
                let rho = r.gen_range(0.35..1.0);
                if radii.iter().any(|&q| (q - rho).abs() < 0.12) {
                    continue 'point;
                }
                let phi = r.gen_range(0.0..std::f64::consts::TAU);
                let u = (rho * phi.cos(), rho * phi.sin());
                let z = r.gen_range(2.0..6.0);
                let p: Vec3<Complex64> = [
                    Complex64::new(z * u.0 / f_gt, 0.0),
                    Complex64::new(z * u.1 / f_gt, 0.0),
                    Complex64::new(z, 0.0),
                ];
                let mut per_view = Vec::new();
                for rot in &rotations {
                    let q = mat_vec(&c, rot, &p);
                    if q[2].re <= 0.2 {
                        continue 'point;
                    }
                    // Keep every observation on the sensor.
                    let (ux, uy) = (f_gt * q[0].re / q[2].re, f_gt * q[1].re / q[2].re);
                    if ux.abs() > 1.6 || uy.abs() > 1.6 {
                        continue 'point;
                    }
                    match observe_f64(f_gt, lambda_gt, &q) {
                        Some(o) => per_view.push(o),
                        None => continue 'point,
                    }
                }
                for (v, o) in per_view.into_iter().enumerate() {
                    views[v].push(o);
                }
                radii.push(rho);
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }

        let rviews: Vec<Vec<Obs<BigRational>>> = views
            .iter()
            .map(|v| {
                v.iter()
                    .map(|o| Obs::new(&RationalCoeffs, rat(o.x.re), rat(o.y.re)))
                    .collect()
            })
            .collect();
        let eqs: Vec<PolyC> = stitch_equations(&RationalCoeffs, &rviews)
            .iter()
            .map(rational_to_float)
            .collect();
        let gt = vec![lambda_gt, 1.0 / (f_gt * f_gt)];
        let pt: Vec<Complex64> = gt.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        if planted_residual(&eqs, &pt) >= 1e-10 {
            continue 'attempt;
        }
        return Ok(ProblemInstance {
            kind,
            system: SystemFile::Complex(System {
                name: Some(kind.name().to_string()),
                ring: stitch_ring(CoeffSpec::Complex),
                field: c,
                equations: eqs,
            }),
            ground_truth: Some(gt),
            scene: Some(SceneMeta { f_gt, lambda_gt }),
        });
    }
    Err(ProblemError::DistortionInfeasible)
}

/// Two-view stitching: three points seen by a purely rotating camera,
/// unknowns (lambda, g = 1/f^2), two cross-multiplied angle constraints.
pub fn stitching_2view(
    seed: u64,
    f_gt: f64,
    lambda_gt: f64,
) -> Result<ProblemInstance, ProblemError> {
    stitching_float(ProblemKind::Stitch2, seed, f_gt, lambda_gt)
}

/// Three-view stitching with two points: the same equation family, and a
/// true minimal case.
pub fn stitching_3view(
    seed: u64,
    f_gt: f64,
    lambda_gt: f64,
) -> Result<ProblemInstance, ProblemError> {
    stitching_float(ProblemKind::Stitch3, seed, f_gt, lambda_gt)
}

fn stitching_zp(
    kind: ProblemKind,
    seed: u64,
    field: PrimeField,
) -> Result<ProblemInstance, ProblemError> {
    let (n_views, n_points, stream) = match kind {
        ProblemKind::Stitch2 => (2usize, 3usize, 0x2710u64),
        ProblemKind::Stitch3 => (3, 2, 0x2711),
        _ => unreachable!(),
    };
    let mut r = rng(seed, stream);
    let lambda = field.rand_nonzero(&mut r);
    let f_cam = field.rand_nonzero(&mut r);
    let finv = field.inv(f_cam);
    let g = field.mul(finv, finv);

    let mut rotations: Mat3<Fe>;
    let mut all_rot: Vec<Mat3<Fe>> = vec![[[1, 0, 0], [0, 1, 0], [0, 0, 1]]];
    for _ in 1..n_views {
        rotations = random_rotation_zp(&field, &mut r);
        all_rot.push(rotations);
    }

    // Plant the view-1 distorted point, lift it to a ray, and solve for
    // image points in the remaining views whose undistortion lands on the
    // rotated ray. A non-residue discriminant just means a fresh draw.
    let mut views: Vec<Vec<Obs<Fe>>> = vec![Vec::new(); n_views];
    for _ in 0..n_points {
        let mut placed = false;
        for _ in 0..400 {
            let x = field.rand_elem(&mut r);
            let y = field.rand_elem(&mut r);
            let o1 = Obs::new(&field, x, y);
            let u3 = field.add(1, field.mul(lambda, o1.r2));
            let ray: Vec3<Fe> = [field.mul(x, finv), field.mul(y, finv), u3];
            let mut per_view = vec![o1.clone()];
            let mut ok = true;
            for rot in all_rot.iter().skip(1) {
                let d = mat_vec(&field, rot, &ray);
                let s: Vec3<Fe> = [field.mul(f_cam, d[0]), field.mul(f_cam, d[1]), d[2]];
                match distort_zp(&field, lambda, &s) {
                    Some(o) => per_view.push(o),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            for (v, o) in per_view.into_iter().enumerate() {
                views[v].push(o);
            }
            placed = true;
            break;
        }
        if !placed {
            return Err(ProblemError::DegenerateScene(
                "no residue discriminant found".to_string(),
            ));
        }
    }

    let eqs = stitch_equations(&field, &views);
    for eq in &eqs {
        debug_assert_eq!(
            eq.evaluate(&[lambda, g]),
            0,
            "planted Z_p solution must vanish"
        );
    }

    Ok(ProblemInstance {
        kind,
        system: SystemFile::Zp(System {
            name: Some(kind.name().to_string()),
            ring: stitch_ring(CoeffSpec::Zp(field.modulus())),
            field,
            equations: eqs,
        }),
        ground_truth: None,
        scene: None,
    })
}

// ---------------------------------------------------------------------------
// Relative pose E + f lambda (7 points, one-sided calibration)

fn efl_ring(coeff: CoeffSpec) -> Ring {
    Ring::new(
        vec![
            "v".to_string(),
            "lambda".to_string(),
            "f13".to_string(),
            "f23".to_string(),
        ],
        coeff,
    )
}

/// Builds the 11-equation system in (v, lambda, f13, f23) from seven
/// correspondences: calibrated rays `phat` and distorted observations
/// `obs` in the uncalibrated view. The first six epipolar equations
/// eliminate (f11, f12, f21, f22, f31, f32) linearly; the seventh becomes
/// a scalar quadratic constraint; the essential-matrix conditions on
/// E = F diag(1, 1, w) and det(F) = 0 supply the rest.
///
/// The unknown `v` is the squared inverse focal length w^2. Written in w
/// the essential conditions are invariant under w -> -w (flipping the
/// third column's sign keeps E essential), which doubles every solution;
/// after factoring one w out of the odd-parity entries all equations are
/// even in w, so substituting v = w^2 removes the duplication. The focal
/// length is recovered as f = 1/sqrt(v).
///
/// `None` when the 6x6 elimination is singular or the scalar constraint
/// degenerates.
fn efl_equations<C: CoeffField>(
    f: &C,
    phat: &[Vec3<C::Elem>],
    obs: &[Obs<C::Elem>],
) -> Option<Vec<Polynomial<C>>> {
    assert_eq!(phat.len(), 7);
    assert_eq!(obs.len(), 7);
    let nv = 4usize; // (v, lambda, f13, f23)

    // Monomial vector m = (lambda*f13, lambda*f23, lambda, f13, f23, 1).
    let m_exps: [[u16; 4]; 6] = [
        [0, 1, 1, 0],
        [0, 1, 0, 1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, 0, 0, 0],
    ];

    // Epipolar row i: coefficients on (f11, f12, f21, f22, f31, f32) and
    // on m, from p^T F u with u = (x, y, 1 + lambda r^2).
    let row = |i: usize| -> (Vec<C::Elem>, Vec<C::Elem>) {
        let p = &phat[i];
        let o = &obs[i];
        let a = vec![
            f.mul(&p[0], &o.x),
            f.mul(&p[0], &o.y),
            f.mul(&p[1], &o.x),
            f.mul(&p[1], &o.y),
            f.mul(&p[2], &o.x),
            f.mul(&p[2], &o.y),
        ];
        let b = vec![
            f.mul(&p[0], &o.r2),
            f.mul(&p[1], &o.r2),
            f.mul(&p[2], &o.r2),
            p[0].clone(),
            p[1].clone(),
            p[2].clone(),
        ];
        (a, b)
    };

    let mut a6 = Vec::new();
    let mut b6 = Vec::new();
    for i in 0..6 {
        let (a, b) = row(i);
        a6.push(a);
        b6.push(b.into_iter().map(|x| f.neg(&x)).collect::<Vec<_>>());
    }
    // (f11, f12, f21, f22, f31, f32)^T = G m.
    let g_mat = solve_square(f, a6, b6)?;

    // Seventh equation folds to c · m = 0.
    let (a7, b7) = row(6);
    let mut c_row: Vec<C::Elem> = (0..6)
        .map(|k| {
            let mut s = b7[k].clone();
            for j in 0..6 {
                s = f.add(&s, &f.mul(&a7[j], &g_mat[j][k]));
            }
            s
        })
        .collect();
    // Normalize on the lambda*f13 coefficient so the constraint reads
    // lambda*f13 - h(lambda, f13, f23) = 0.
    let scale: f64 = c_row.iter().map(|e| f.pivot_weight(e)).fold(0.0, f64::max);
    if f.pivot_weight(&c_row[0]) <= scale * 1e-10 {
        return None;
    }
    let inv = f.div(&f.one(), &c_row[0]);
    for x in &mut c_row {
        *x = f.mul(x, &inv);
    }

    let poly_of_row = |coeffs: &[C::Elem]| -> Polynomial<C> {
        Polynomial::from_terms(
            f.clone(),
            nv,
            coeffs
                .iter()
                .zip(m_exps.iter())
                .map(|(c, e)| (Monomial::from_exps(e), c.clone()))
                .collect(),
        )
    };

    let eq14 = poly_of_row(&c_row);

    // F entries as polynomials; f33 is pinned to 1.
    let fm: Mat3<Polynomial<C>> = [
        [
            poly_of_row(&g_mat[0]),
            poly_of_row(&g_mat[1]),
            Polynomial::var(f.clone(), nv, 2),
        ],
        [
            poly_of_row(&g_mat[2]),
            poly_of_row(&g_mat[3]),
            Polynomial::var(f.clone(), nv, 3),
        ],
        [
            poly_of_row(&g_mat[4]),
            poly_of_row(&g_mat[5]),
            Polynomial::constant(f.clone(), nv, f.one()),
        ],
    ];

    // With E = F diag(1, 1, w): E E^T = F diag(1, 1, w^2) F^T =: M(v),
    // and the constraint 2 E E^T E - tr(E E^T) E = 0 reads
    // 2 M F - tr(M) F = 0 after dividing the shared w from the third
    // column. Everything below is in v = w^2.
    let v = Polynomial::var(f.clone(), nv, 0);
    let fv: Mat3<Polynomial<C>> = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if j == 2 {
                fm[i][j].mul(&v)
            } else {
                fm[i][j].clone()
            }
        })
    });

    let pm_mul = |a: &Mat3<Polynomial<C>>, b: &Mat3<Polynomial<C>>| -> Mat3<Polynomial<C>> {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = Polynomial::zero(f.clone(), nv);
                for k in 0..3 {
                    s = s.add(&a[i][k].mul(&b[k][j]));
                }
                s
            })
        })
    };
    let ft: Mat3<Polynomial<C>> =
        std::array::from_fn(|i| std::array::from_fn(|j| fm[j][i].clone()));
    // M = F diag(1, 1, v) F^T.
    let m_mat = pm_mul(&fv, &ft);
    let mf = pm_mul(&m_mat, &fm);
    let trace = m_mat[0][0].add(&m_mat[1][1]).add(&m_mat[2][2]);
    let two = Polynomial::constant(f.clone(), nv, f.from_i64(2));

    let mut eqs = vec![eq14];
    for i in 0..3 {
        for j in 0..3 {
            eqs.push(two.mul(&mf[i][j]).sub(&trace.mul(&fm[i][j])));
        }
    }

    // det(F), expanded along the third column.
    let minor = |r1: usize, c1: usize, r2: usize, c2: usize| {
        fm[r1][c1].mul(&fm[r2][c2]).sub(&fm[r1][c2].mul(&fm[r2][c1]))
    };
    let det = fm[0][2]
        .mul(&minor(1, 0, 2, 1))
        .sub(&fm[1][2].mul(&minor(0, 0, 2, 1)))
        .add(&fm[2][2].mul(&minor(0, 0, 1, 1)));
    eqs.push(det);
    Some(eqs)
}

/// Seven-point relative pose with unknown one-sided focal length and
/// radial distortion, unknowns (v, lambda, f13, f23) with v the squared
/// inverse focal length. Defaults used in evaluation are f_gt = 10,
/// lambda_gt = -0.1.
pub fn relpose_efl_kuang(
    seed: u64,
    f_gt: f64,
    lambda_gt: f64,
) -> Result<ProblemInstance, ProblemError> {
    let c = ComplexCoeffs;
    let mut r = rng(seed, 0xef1);
    'attempt: for _ in 0..20 {
        let rot = random_rotation_f64(&mut r, (0.4 / f_gt).min(0.3));
        let t: Vec3<Complex64> = [
            Complex64::new(r.gen_range(-0.3..0.3), 0.0),
            Complex64::new(r.gen_range(-0.3..0.3), 0.0),
            Complex64::new(r.gen_range(-0.2..0.2), 0.0),
        ];
        if t.iter().map(|v| v.norm()).sum::<f64>() < 1e-3 {
            continue;
        }
        let mut phat = Vec::new();
        let mut obs = Vec::new();
        for _ in 0..7 {
            let mut placed = false;
            for _ in 0..100 {
                // Sensor-first in the uncalibrated camera: draw its
                // undistorted image point, back-project to the world, and
                // require the calibrated camera to see the point as well.
                let u = (r.gen_range(-0.8..0.8), r.gen_range(-0.8..0.8));
                let z = r.gen_range(2.0..6.0);
                let y: Vec3<Complex64> = [
                    Complex64::new(z * u.0 / f_gt, 0.0),
                    Complex64::new(z * u.1 / f_gt, 0.0),
                    Complex64::new(z, 0.0),
                ];
                let mut d = y;
                for (di, ti) in d.iter_mut().zip(t.iter()) {
                    *di -= ti;
                }
                let rt = mat_transpose::<ComplexCoeffs>(&rot);
                let p = mat_vec(&c, &rt, &d);
                if p[2].re <= 0.2 {
                    continue;
                }
                let cam1: Vec3<Complex64> =
                    [p[0] / p[2], p[1] / p[2], Complex64::new(1.0, 0.0)];
                if cam1[0].norm() > 4.0 || cam1[1].norm() > 4.0 {
                    continue;
                }
                if let Some(o) = observe_f64(f_gt, lambda_gt, &y) {
                    phat.push(cam1);
                    obs.push(o);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'attempt;
            }
        }

        let phat_r: Vec<Vec3<BigRational>> = phat
            .iter()
            .map(|v| [rat(v[0].re), rat(v[1].re), rat(v[2].re)])
            .collect();
        let obs_r: Vec<Obs<BigRational>> = obs
            .iter()
            .map(|o| Obs::new(&RationalCoeffs, rat(o.x.re), rat(o.y.re)))
            .collect();
        let Some(eqs) = efl_equations(&RationalCoeffs, &phat_r, &obs_r) else {
            continue 'attempt;
        };
        let eqs: Vec<PolyC> = eqs.iter().map(rational_to_float).collect();

        // Planted fundamental matrix: F ~ R^T [t]x K^-1 scaled to f33 = 1.
        let finv = 1.0 / f_gt;
        let rt = mat_transpose::<ComplexCoeffs>(&rot);
        let tx = hat(&c, &t);
        let mut fmat = mat_mul(&c, &rt, &tx);
        for row in fmat.iter_mut() {
            row[0] *= finv;
            row[1] *= finv;
        }
        let f33 = fmat[2][2];
        if f33.norm() < 1e-9 {
            continue 'attempt;
        }
        let gt = vec![
            1.0 / (f_gt * f_gt),
            lambda_gt,
            (fmat[0][2] / f33).re,
            (fmat[1][2] / f33).re,
        ];
        let pt: Vec<Complex64> = gt.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        if planted_residual(&eqs, &pt) >= 1e-8 {
            continue 'attempt;
        }

        return Ok(ProblemInstance {
            kind: ProblemKind::Efl,
            system: SystemFile::Complex(System {
                name: Some("efl".to_string()),
                ring: efl_ring(CoeffSpec::Complex),
                field: c,
                equations: eqs,
            }),
            ground_truth: Some(gt),
            scene: Some(SceneMeta { f_gt, lambda_gt }),
        });
    }
    Err(ProblemError::DegenerateScene(
        "could not build a feasible 7-point scene".to_string(),
    ))
}

fn efl_zp(seed: u64, field: PrimeField) -> Result<ProblemInstance, ProblemError> {
    let mut r = rng(seed, 0xef2);
    'attempt: for _ in 0..50 {
        let lambda = field.rand_nonzero(&mut r);
        let f_cam = field.rand_nonzero(&mut r);
        let rot = random_rotation_zp(&field, &mut r);
        let t: Vec3<Fe> = [
            field.rand_elem(&mut r),
            field.rand_elem(&mut r),
            field.rand_elem(&mut r),
        ];
        if t.iter().all(|&x| x == 0) {
            continue;
        }
        let mut phat: Vec<Vec3<Fe>> = Vec::new();
        let mut obs: Vec<Obs<Fe>> = Vec::new();
        for _ in 0..7 {
            let mut placed = false;
            for _ in 0..400 {
                let p: Vec3<Fe> = [
                    field.rand_elem(&mut r),
                    field.rand_elem(&mut r),
                    field.rand_nonzero(&mut r),
                ];
                let z_inv = field.inv(p[2]);
                let cam1: Vec3<Fe> = [field.mul(p[0], z_inv), field.mul(p[1], z_inv), 1];
                let mut y = mat_vec(&field, &rot, &p);
                for (yi, ti) in y.iter_mut().zip(t.iter()) {
                    *yi = field.add(*yi, *ti);
                }
                let s: Vec3<Fe> = [field.mul(f_cam, y[0]), field.mul(f_cam, y[1]), y[2]];
                if let Some(o) = distort_zp(&field, lambda, &s) {
                    phat.push(cam1);
                    obs.push(o);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'attempt;
            }
        }

        let Some(eqs) = efl_equations(&field, &phat, &obs) else {
            continue 'attempt;
        };

        // Planted Z_p solution mirrors the float construction exactly.
        let finv = field.inv(f_cam);
        let rt = mat_transpose::<PrimeField>(&rot);
        let tx = hat(&field, &t);
        let mut fmat = mat_mul(&field, &rt, &tx);
        for row in fmat.iter_mut() {
            row[0] = field.mul(row[0], finv);
            row[1] = field.mul(row[1], finv);
        }
        if fmat[2][2] == 0 {
            continue 'attempt;
        }
        let f33_inv = field.inv(fmat[2][2]);
        let planted: [Fe; 4] = [
            field.mul(finv, finv),
            lambda,
            field.mul(fmat[0][2], f33_inv),
            field.mul(fmat[1][2], f33_inv),
        ];
        if eqs.iter().any(|eq| eq.evaluate(&planted) != 0) {
            continue 'attempt;
        }

        return Ok(ProblemInstance {
            kind: ProblemKind::Efl,
            system: SystemFile::Zp(System {
                name: Some("efl".to_string()),
                ring: efl_ring(CoeffSpec::Zp(field.modulus())),
                field,
                equations: eqs,
            }),
            ground_truth: None,
            scene: None,
        });
    }
    Err(ProblemError::DegenerateScene(
        "could not build a consistent Z_p instance".to_string(),
    ))
}

// ---------------------------------------------------------------------------
// Dispatchers

/// Consistent Z_p instance of a problem: scene data drawn in Z_p, exact
/// Cayley rotations, distortion handled by planting image points so that
/// every equation vanishes at the planted solution.
pub fn instantiate_zp(
    kind: ProblemKind,
    seed: u64,
    field: PrimeField,
) -> Result<ProblemInstance, ProblemError> {
    match kind {
        ProblemKind::Toy => Ok(toy(field)),
        ProblemKind::Stitch2 | ProblemKind::Stitch3 => stitching_zp(kind, seed, field),
        ProblemKind::Efl => efl_zp(seed, field),
    }
}

/// Float instance with planted ground truth.
pub fn generate_float(
    kind: ProblemKind,
    seed: u64,
    f_gt: f64,
    lambda_gt: f64,
) -> Result<ProblemInstance, ProblemError> {
    match kind {
        ProblemKind::Toy => Ok(toy_float()),
        ProblemKind::Stitch2 => stitching_2view(seed, f_gt, lambda_gt),
        ProblemKind::Stitch3 => stitching_3view(seed, f_gt, lambda_gt),
        ProblemKind::Efl => relpose_efl_kuang(seed, f_gt, lambda_gt),
    }
}
