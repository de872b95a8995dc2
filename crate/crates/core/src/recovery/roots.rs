//! Real roots of a monic polynomial as eigenvalues of its companion matrix.
//!
//! The companion matrix is upper Hessenberg already, so it is balanced by a
//! diagonal similarity and handed straight to a Francis double-shift QR
//! iteration. Indices in the iteration are 1-based to keep the bulge-chase
//! bookkeeping readable.

#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const MAX_ITERATIONS: usize = 60;

/// A complex eigenvalue as `(re, im)`.
pub(crate) type Complex = (f64, f64);

/// Companion matrix of `x^r + α_{r-1} x^{r-1} + ... + α_0`, 1-based, row 0
/// and column 0 unused.
fn companion(alpha: &[f64]) -> Vec<Vec<f64>> {
    let r = alpha.len();
    let mut a = vec![vec![0.0; r + 1]; r + 1];
    for k in 1..=r {
        a[1][k] = -alpha[r - k];
    }
    for i in 2..=r {
        a[i][i - 1] = 1.0;
    }
    a
}

/// Diagonal similarity scaling by powers of two so row and column norms are
/// comparable.
fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= ginv;
                    }
                    for row in a.iter_mut().skip(1).take(n) {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (1-based, destroyed).
#[allow(clippy::many_single_char_names)]
fn hessenberg_eigenvalues(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex>> {
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r, mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a negligible subdiagonal element
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS {
                        return Err(Error::RootsDidNotConverge);
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    // two consecutive small subdiagonal elements
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s0;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    // double QR step on rows l..nn, columns m..nn
                    for k in m..nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                    }
                }
            }
            if nn < 1 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
}

/// All complex roots of the monic polynomial with low-order coefficients
/// `alpha`, unsorted.
pub(crate) fn complex_roots(alpha: &[f64]) -> Result<Vec<Complex>> {
    let r = alpha.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidInput(
            "polynomial coefficients must be finite".into(),
        ));
    }
    let mut a = companion(alpha);
    balance(&mut a, r);
    hessenberg_eigenvalues(&mut a, r)
}

/// Real roots of `x^r + α_{r-1} x^{r-1} + ... + α_0`, ascending.
///
/// A root whose imaginary part is within `imag_tol · max(1, |re|)` is
/// projected onto the real axis; anything larger fails with
/// [`Error::ComplexRoots`] naming the worst offender.
pub fn polynomial_roots(alpha: &[f64], imag_tol: f64) -> Result<Vec<f64>> {
    let roots = complex_roots(alpha)?;
    let worst = roots
        .iter()
        .filter(|(re, im)| im.abs() > imag_tol * re.abs().max(1.0))
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
    if let Some(&(re, im)) = worst {
        return Err(Error::ComplexRoots { re, im: im.abs() });
    }
    let mut real: Vec<f64> = roots.into_iter().map(|(re, _)| re).collect();
    real.sort_by(f64::total_cmp);
    Ok(real)
}

/// `p(x)` by Horner's rule.
pub(crate) fn eval_monic(alpha: &[f64], x: f64) -> f64 {
    alpha.iter().rev().fold(1.0, |acc, &a| acc * x + a)
}
