use nalgebra::DMatrix;
use num_complex::Complex64;
use std::time::Instant;

fn randmat(r: usize, c: usize, seed: u64) -> DMatrix<Complex64> {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    DMatrix::from_fn(r, c, |_, _| Complex64::new(next(), next()))
}

fn main() {
    for (r, c) in [(256usize, 256usize), (512, 512), (1024, 36), (3072, 36), (512, 1536)] {
        let m = randmat(r, c, 42);
        let t = Instant::now();
        let svd = nalgebra::SVD::new(m.clone(), true, true);
        let dt = t.elapsed();
        let sv = &svd.singular_values;
        let sorted = sv.iter().zip(sv.iter().skip(1)).all(|(a, b)| a >= b);
        // reconstruction check
        let mind = r.min(c);
        let u = svd.u.as_ref().unwrap();
        let vt = svd.v_t.as_ref().unwrap();
        let mut s = DMatrix::<Complex64>::zeros(mind, mind);
        for i in 0..mind { s[(i, i)] = Complex64::new(sv[i], 0.0); }
        let rec = u * s * vt;
        let err = (&rec - &m).norm() / m.norm();
        println!("{}x{}: {:?} sorted={} recon_rel_err={:.2e} u:{}x{} vt:{}x{}", r, c, dt, sorted, err, u.nrows(), u.ncols(), vt.nrows(), vt.ncols());
    }
}
