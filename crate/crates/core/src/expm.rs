//! Dense matrix exponential by scaling and squaring.
//!
//! `exp(A) = exp(A / 2^s)^(2^s)` with `s` chosen so the scaled 1-norm is at
//! most 1/2, where a degree-18 Taylor polynomial is below double-precision
//! roundoff (`0.5^19 / 19! < 1e-22`).

use nalgebra::DMatrix;

const TAYLOR_DEGREE: usize = 18;

fn norm_1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential of a square matrix.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = norm_1(a);
    let mut s = 0i32;
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as i32;
    }
    let scaled = a * 2f64.powi(-s);
    // Horner: I + X(I + X/2 (I + X/3 (...)))
    let id = DMatrix::<f64>::identity(n, n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + (&scaled * acc) / k as f64;
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}
