//! Eigenvalues of small dense real matrices via shifted QR iteration in
//! complex arithmetic, plus polynomial roots through the companion matrix.
//!
//! The QR loop is capped at 500 sweeps; hitting the cap is a hard error
//! rather than a silent partial answer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::matrix::Matrix;

const QR_SWEEP_CAP: usize = 500;

/// All eigenvalues of a real square matrix.
///
/// Reduces to Hessenberg form with Householder reflections, then runs
/// single-shift complex QR with Wilkinson shifts and deflation.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("eigenvalues need a square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let h = hessenberg(m);
    let hc: Vec<Complex64> = h.entries().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    qr_hessenberg_eigenvalues(hc, n)
}

/// Householder reduction to upper Hessenberg form.
fn hessenberg(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            norm2 += a[(i, k)] * a[(i, k)];
        }
        let alpha = norm2.sqrt();
        if alpha < 1e-300 {
            continue;
        }
        let alpha = if a[(k + 1, k)] > 0.0 { -alpha } else { alpha };
        let mut v = vec![0.0; n];
        v[k + 1] = a[(k + 1, k)] - alpha;
        for i in (k + 2)..n {
            v[i] = a[(i, k)];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv < 1e-300 {
            continue;
        }
        let beta = 2.0 / vtv;
        // A <- (I - beta v v^T) A
        for j in 0..n {
            let mut dot = 0.0;
            for i in (k + 1)..n {
                dot += v[i] * a[(i, j)];
            }
            let dot = beta * dot;
            for i in (k + 1)..n {
                a[(i, j)] -= dot * v[i];
            }
        }
        // A <- A (I - beta v v^T)
        for i in 0..n {
            let mut dot = 0.0;
            for j in (k + 1)..n {
                dot += a[(i, j)] * v[j];
            }
            let dot = beta * dot;
            for j in (k + 1)..n {
                a[(i, j)] -= dot * v[j];
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
    a
}

fn eig_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_trace = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    (half_trace + root, half_trace - root)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig_2x2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Shifted QR on a complex upper Hessenberg matrix (row-major, n x n).
fn qr_hessenberg_eigenvalues(mut h: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>> {
    let idx = |i: usize, j: usize| i * n + j;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut sweeps = 0usize;
    let mut stuck = 0usize;

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[idx(0, 0)]);
            hi = 0;
            continue;
        }
        // Zero negligible subdiagonals, then locate the trailing unreduced block.
        for i in 1..hi {
            let sub = h[idx(i, i - 1)].norm();
            let local = h[idx(i - 1, i - 1)].norm() + h[idx(i, i)].norm();
            if sub <= f64::EPSILON * local.max(1e-300) {
                h[idx(i, i - 1)] = Complex64::new(0.0, 0.0);
            }
        }
        if h[idx(hi - 1, hi - 2)].norm() == 0.0 {
            eigs.push(h[idx(hi - 1, hi - 1)]);
            hi -= 1;
            stuck = 0;
            continue;
        }
        let mut lo = hi - 1;
        while lo > 0 && h[idx(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        if hi - lo == 2 {
            let (l1, l2) = eig_2x2(
                h[idx(lo, lo)],
                h[idx(lo, lo + 1)],
                h[idx(lo + 1, lo)],
                h[idx(lo + 1, lo + 1)],
            );
            eigs.push(l1);
            eigs.push(l2);
            hi -= 2;
            stuck = 0;
            continue;
        }

        sweeps += 1;
        stuck += 1;
        if sweeps > QR_SWEEP_CAP {
            return Err(Error::IterationLimit(format!(
                "QR iteration did not converge within {QR_SWEEP_CAP} sweeps"
            )));
        }
        let shift = if stuck.is_multiple_of(12) {
            // Exceptional shift to break rare Wilkinson-shift cycles.
            let s = h[idx(hi - 1, hi - 2)].norm() + h[idx(hi - 2, hi.saturating_sub(3).max(lo))].norm();
            h[idx(hi - 1, hi - 1)] + Complex64::new(1.5 * s, 0.0)
        } else {
            wilkinson_shift(
                h[idx(hi - 2, hi - 2)],
                h[idx(hi - 2, hi - 1)],
                h[idx(hi - 1, hi - 2)],
                h[idx(hi - 1, hi - 1)],
            )
        };

        for i in lo..hi {
            h[idx(i, i)] -= shift;
        }
        // Factor the block with Givens rotations, then multiply back in
        // reverse order (RQ) and restore the shift.
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let a = h[idx(k, k)];
            let b = h[idx(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r < 1e-300 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            rotations.push((c, s));
            for j in k..hi {
                let t1 = h[idx(k, j)];
                let t2 = h[idx(k + 1, j)];
                h[idx(k, j)] = c.conj() * t1 + s.conj() * t2;
                h[idx(k + 1, j)] = -s * t1 + c * t2;
            }
        }
        for (offset, (c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..hi {
                let t1 = h[idx(i, k)];
                let t2 = h[idx(i, k + 1)];
                h[idx(i, k)] = c * t1 + s * t2;
                h[idx(i, k + 1)] = -s.conj() * t1 + c.conj() * t2;
            }
        }
        for i in lo..hi {
            h[idx(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Roots of a real polynomial via eigenvalues of its companion matrix.
pub fn polynomial_roots(p: &crate::numkit::Polynomial) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::InvalidArgument("root finding needs degree >= 1".into()));
    }
    let lead = p.coeffs()[0];
    // Gains k_1..k_n in ascending-power order for the companion builder.
    let gains: Vec<f64> = p.coeffs()[1..].iter().rev().map(|c| c / lead).collect();
    let (companion, _) = crate::numkit::companion_from_gains(&gains)?;
    eigenvalues(&companion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::Polynomial;
    use approx::assert_relative_eq;

    fn sorted_real_parts(mut roots: Vec<Complex64>) -> Vec<Complex64> {
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        roots
    }

    #[test]
    fn quadratic_roots() {
        let p = Polynomial::new(vec![1.0, 10.0, 20.0]).unwrap();
        let roots = sorted_real_parts(polynomial_roots(&p).unwrap());
        assert_relative_eq!(roots[0].re, -7.23606797749979, epsilon = 1e-10);
        assert_relative_eq!(roots[1].re, -2.76393202250021, epsilon = 1e-10);
        assert!(roots[0].im.abs() < 1e-10);
    }

    #[test]
    fn complex_pair_roots() {
        // s^2 + 2s + 5 = (s + 1)^2 + 4: roots -1 +/- 2j
        let p = Polynomial::new(vec![1.0, 2.0, 5.0]).unwrap();
        let roots = polynomial_roots(&p).unwrap();
        for r in &roots {
            assert_relative_eq!(r.re, -1.0, epsilon = 1e-10);
            assert_relative_eq!(r.im.abs(), 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn high_degree_known_roots() {
        // (s+1)(s+2)(s+3)(s+4)(s+5) expanded.
        let p = Polynomial::new(vec![1.0, 15.0, 85.0, 225.0, 274.0, 120.0]).unwrap();
        let roots = sorted_real_parts(polynomial_roots(&p).unwrap());
        for (root, expect) in roots.iter().zip([-5.0, -4.0, -3.0, -2.0, -1.0]) {
            assert_relative_eq!(root.re, expect, epsilon = 1e-8);
            assert!(root.im.abs() < 1e-8);
        }
    }

    #[test]
    fn dense_matrix_eigenvalues_match_trace_and_det() {
        let m = Matrix::from_rows(&[
            &[2.0, 1.0, 0.5],
            &[-1.0, 3.0, 0.25],
            &[0.1, -0.2, 1.5],
        ])
        .unwrap();
        let eigs = eigenvalues(&m).unwrap();
        let trace: Complex64 = eigs.iter().sum();
        assert_relative_eq!(trace.re, 6.5, epsilon = 1e-10);
        assert!(trace.im.abs() < 1e-10);
        let det: Complex64 = eigs.iter().product();
        // det by cofactor expansion
        let expect = 2.0 * (3.0 * 1.5 - 0.25 * (-0.2)) - (-1.5 - 0.25 * 0.1)
            + 0.5 * (0.2 - 3.0 * 0.1);
        assert_relative_eq!(det.re, expect, epsilon = 1e-10);
    }
}
