use minsolve::problems::{generate_float, ProblemKind};
use minsolve::util::rng;
use num_complex::Complex64;
use rand::Rng;

// Diagnostic: Newton on the 2x2 stitching system from the planted point,
// measuring how far the rounded instance's true root is from the planted
// parameters.
fn main() {
    let mut r = rng(999, 1);
    for seed in 0..100u64 {
        let f_gt = r.gen_range(0.5..5.0);
        let l_gt = r.gen_range(-0.5..0.0);
        let fl = generate_float(ProblemKind::Stitch2, seed, f_gt, l_gt).unwrap();
        let eqs = fl.float_system().unwrap().equations.clone();
        let gt = fl.ground_truth.clone().unwrap();
        let mut x = [gt[0], gt[1]];
        for _ in 0..50 {
            let pt = [Complex64::new(x[0], 0.0), Complex64::new(x[1], 0.0)];
            let f0 = eqs[0].evaluate(&pt).re;
            let f1 = eqs[1].evaluate(&pt).re;
            // numeric jacobian
            let h = 1e-7;
            let mut j = [[0.0f64; 2]; 2];
            for v in 0..2 {
                let mut xp = x;
                xp[v] += h;
                let ptp = [Complex64::new(xp[0], 0.0), Complex64::new(xp[1], 0.0)];
                j[0][v] = (eqs[0].evaluate(&ptp).re - f0) / h;
                j[1][v] = (eqs[1].evaluate(&ptp).re - f1) / h;
            }
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-300 { break; }
            let dx = [(f0 * j[1][1] - f1 * j[0][1]) / det, (j[0][0] * f1 - j[1][0] * f0) / det];
            x[0] -= dx[0];
            x[1] -= dx[1];
            if dx[0].abs() + dx[1].abs() < 1e-16 { break; }
        }
        let f_root = 1.0 / x[1].sqrt();
        let err = (f_root - f_gt).abs() / f_gt;
        if err > 1e-8 {
            println!("seed {seed}: root f-error {err:.2e} (f={f_gt:.2}, l={l_gt:.3})");
        }
    }
    println!("done");
}
