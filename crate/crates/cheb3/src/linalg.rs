//! Small dense complex linear algebra: hermitian Jacobi eigenvalues,
//! modified Gram-Schmidt QR, and 3x3 spectra via the characteristic
//! polynomial. Everything here is sized for 2x2 and 3x3 work in the
//! Lyapunov and classification routines.

use num_complex::Complex64;

use crate::roots::polynomial_roots;

type C = Complex64;

/// Eigenvalues of a hermitian matrix by cyclic complex Jacobi rotations,
/// ascending order.
pub fn hermitian_eigenvalues(a: &[Vec<C>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<C>> = a.to_vec();
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p][q].norm_sqr();
            }
        }
        if off.sqrt() < 1e-15 * (1.0 + frobenius(&m)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.norm() == 0.0 {
                    continue;
                }
                // phase out apq, then a real 2x2 rotation
                let phase = apq / apq.norm();
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                let theta = (aqq - app) / (2.0 * apq.norm());
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cth = 1.0 / (t * t + 1.0).sqrt();
                let s = phase * (t * cth);
                // rows/cols update: G^H M G with G the rotation in plane (p,q)
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = mkp * cth - mkq * s.conj();
                    m[k][q] = mkp * s + mkq * cth;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = mpk * cth - mqk * s;
                    m[q][k] = mpk * s.conj() + mqk * cth;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i][i].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

fn frobenius(m: &[Vec<C>]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Singular values of a complex matrix (descending), as square roots of the
/// eigenvalues of `A^H A`.
pub fn singular_values(a: &[Vec<C>]) -> Vec<f64> {
    let n = a.len();
    let m = a[0].len();
    let mut ata = vec![vec![C::new(0.0, 0.0); m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut s = C::new(0.0, 0.0);
            for k in 0..n {
                s += a[k][i].conj() * a[k][j];
            }
            ata[i][j] = s;
        }
    }
    let mut sv: Vec<f64> = hermitian_eigenvalues(&ata)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// One Benettin step: orthonormalize `a * q` in place by modified
/// Gram-Schmidt, returning the log of each column norm. `q` holds an
/// orthonormal frame column-wise.
pub fn benettin_step(a: &[Vec<C>], q: &mut Vec<Vec<C>>) -> Vec<f64> {
    let n = q.len();
    let k = q[0].len();
    // b = a * q
    let mut b = vec![vec![C::new(0.0, 0.0); k]; n];
    for i in 0..n {
        for j in 0..k {
            let mut s = C::new(0.0, 0.0);
            for l in 0..n {
                s += a[i][l] * q[l][j];
            }
            b[i][j] = s;
        }
    }
    let mut logs = Vec::with_capacity(k);
    for j in 0..k {
        for jj in 0..j {
            let mut proj = C::new(0.0, 0.0);
            for i in 0..n {
                proj += b[i][jj].conj() * b[i][j];
            }
            for i in 0..n {
                let bijj = b[i][jj];
                b[i][j] -= proj * bijj;
            }
        }
        let norm: f64 = b.iter().map(|r| r[j].norm_sqr()).sum::<f64>().sqrt();
        logs.push(norm.ln());
        for row in b.iter_mut() {
            row[j] /= norm;
        }
    }
    *q = b;
    logs
}

/// Eigenvalues of a 3x3 complex matrix through its characteristic polynomial.
pub fn eigenvalues_3x3(a: &[[C; 3]; 3]) -> Vec<C> {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let mut tr2 = C::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            tr2 += a[i][j] * a[j][i];
        }
    }
    let c2 = (tr * tr - tr2) * 0.5;
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    // x^3 - tr x^2 + c2 x - det
    polynomial_roots(&[-det, c2, -tr, C::new(1.0, 0.0)]).unwrap_or_default()
}

/// Spectral radius of a 3x3 complex matrix.
pub fn spectral_radius_3x3(a: &[[C; 3]; 3]) -> f64 {
    eigenvalues_3x3(a)
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max)
}

/// 3x3 complex matrix product.
pub fn matmul_3x3(a: &[[C; 3]; 3], b: &[[C; 3]; 3]) -> [[C; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum::<C>())
    })
}
