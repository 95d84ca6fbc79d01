use minsolve::basis::QuotientBasis;
use minsolve::field::PrimeField;
use minsolve::groebner::{groebner_basis, GbConfig};
use minsolve::numeric::{eigen_solve, eliminate_extract, instantiate, solve_with_template};
use minsolve::poly::{Monomial, MonomialOrder};
use minsolve::problems::{generate_float, instantiate_zp, ProblemKind};
use minsolve::template::{build_template, prune, EliminationTemplate};
use minsolve::util::rng;
use num_complex::Complex64;
use rand::Rng;

fn err_of(t: &EliminationTemplate, feqs: &[minsolve::poly::PolyC], f_gt: f64) -> f64 {
    match solve_with_template(t, feqs) {
        Ok(sols) => {
            let mut best = f64::INFINITY;
            for p in &sols.points {
                let f_est = Complex64::new(1.0, 0.0) / p[1].sqrt();
                best = best.min((f_est - Complex64::new(f_gt, 0.0)).norm() / f_gt);
            }
            best
        }
        Err(_) => f64::INFINITY,
    }
}

fn main() {
    let field = PrimeField::default_field();
    let inst = instantiate_zp(ProblemKind::Stitch2, 0, field).unwrap();
    let eqs = inst.zp_system().unwrap().equations.clone();
    let gb = groebner_basis(&eqs, &MonomialOrder::grevlex(), &GbConfig::default()).unwrap();
    let basis = QuotientBasis::from_standard_monomials(&gb).unwrap();
    let t0 = prune(&build_template(&eqs, &basis, 0, 30).unwrap(), &eqs);
    let t1 = prune(&build_template(&eqs, &basis, 1, 30).unwrap(), &eqs);

    let mut r = rng(999, 1);
    let mut merged_ok = 0;
    for seed in 0..100u64 {
        let f_gt = r.gen_range(0.5..5.0);
        let l_gt = r.gen_range(-0.5..0.0);
        let fl = generate_float(ProblemKind::Stitch2, seed, f_gt, l_gt).unwrap();
        let feqs = fl.float_system().unwrap().equations.clone();
        let e0 = err_of(&t0, &feqs, f_gt);
        let e1 = err_of(&t1, &feqs, f_gt);
        if e0.min(e1) < 1e-6 { merged_ok += 1; }
        if e0 >= 1e-6 {
            // diagnose: consistency + eig structure
            let gt = fl.ground_truth.clone().unwrap();
            let pt: Vec<Complex64> = gt.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let mat = instantiate(&t0, &feqs).unwrap();
            let m = eliminate_extract(&mat, &t0).unwrap();
            let v: Vec<Complex64> = t0.basis.monomials.iter().map(|mm: &Monomial| {
                let mut val = Complex64::new(1.0, 0.0);
                for (i, &e) in mm.exps().iter().enumerate() { for _ in 0..e { val *= pt[i]; } }
                val
            }).collect();
            let lam = pt[0];
            let k = v.len();
            let (mut errn, mut vn) = (0.0, 0.0);
            for i in 0..k {
                let mut s = -lam * v[i];
                for j in 0..k { s += m[i][j] * v[j]; }
                errn += s.norm_sqr(); vn += v[i].norm_sqr();
            }
            let eigs = eigen_solve(&m).unwrap();
            let mut gaps: Vec<f64> = eigs.iter().map(|(l, _)| (l - lam).norm()).collect();
            gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            println!("seed {seed} f={f_gt:.2} l={l_gt:.3}: e0={e0:.1e} e1={e1:.1e} consist={:.1e} gap={:.1e} gap2={:.1e}",
                (errn/vn).sqrt(), gaps[0], gaps[1]);
        }
    }
    println!("merged: {merged_ok}/100");
}
