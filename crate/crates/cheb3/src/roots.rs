//! Complex polynomial roots via companion-matrix eigenvalues.
//!
//! The companion matrix is upper Hessenberg, so a shifted complex QR
//! iteration with Givens rotations computes its eigenvalues directly. Near a
//! k-fold root the individual eigenvalues smear out like eps^(1/k); the
//! cluster utilities below recover the root itself to near machine precision
//! (the first-order perturbations of a cluster cancel in the mean, and a
//! Newton polish on the (k-1)-th derivative pins it down).

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Roots of `c[0] + c[1] x + ... + c[n] x^n`. Leading zeros are trimmed;
/// the zero polynomial and constants are rejected.
pub fn polynomial_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() == 0.0 {
        n -= 1;
    }
    if n <= 1 {
        return Err(Error::Domain("polynomial must have positive degree".into()));
    }
    let lead = coeffs[n - 1];
    let deg = n - 1;
    // strip roots at the origin to keep the companion matrix nonsingular-ish
    let mut zeros_at_origin = 0;
    while zeros_at_origin < deg && coeffs[zeros_at_origin].norm() == 0.0 {
        zeros_at_origin += 1;
    }
    let monic: Vec<C> = coeffs[zeros_at_origin..n - 1].iter().map(|c| c / lead).collect();
    let m = monic.len();
    let mut roots = vec![C::new(0.0, 0.0); zeros_at_origin];
    if m == 0 {
        return Ok(roots);
    }
    // upper-Hessenberg companion: first row holds -a_{m-1} .. -a_0,
    // ones on the subdiagonal
    let mut h = vec![vec![C::new(0.0, 0.0); m]; m];
    for j in 0..m {
        h[0][j] = -monic[m - 1 - j];
    }
    for i in 1..m {
        h[i][i - 1] = C::new(1.0, 0.0);
    }
    roots.extend(hessenberg_eigenvalues(&mut h)?);
    Ok(roots)
}

/// Eigenvalues of a complex upper-Hessenberg matrix by shifted QR.
pub fn hessenberg_eigenvalues(h: &mut [Vec<C>]) -> Result<Vec<C>> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // deflate where the subdiagonal is negligible
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[lo][lo - 1].norm() <= f64::EPSILON * s {
                h[lo][lo - 1] = C::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 && h[lo][lo - 1].norm() == 0.0 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::Numerical("QR eigenvalue iteration stalled".into()));
        }
        let shift = if since_deflation % 12 == 0 {
            // exceptional shift to break symmetric stalls
            let m = h[hi - 1][hi - 2].norm() + if hi >= 3 { h[hi - 2][hi - 3].norm() } else { 0.0 };
            h[hi - 1][hi - 1] + C::new(0.75 * m, 0.25 * m)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, lo, hi, shift);
    }
    Ok(eigs)
}

/// Eigenvalue of the trailing 2x2 closest to the corner entry.
fn wilkinson_shift(h: &[Vec<C>], hi: usize) -> C {
    let a = h[hi - 2][hi - 2];
    let b = h[hi - 2][hi - 1];
    let c = h[hi - 1][hi - 2];
    let d = h[hi - 1][hi - 1];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the active block `[lo, hi)` via Givens
/// rotations, preserving the Hessenberg form.
fn qr_step(h: &mut [Vec<C>], lo: usize, hi: usize, shift: C) {
    let n = h.len();
    for i in lo..hi {
        h[i][i] -= shift;
    }
    // factor: eliminate the subdiagonal with rotations, records (c, s)
    let mut rot = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let a = h[k][k];
        let b = h[k + 1][k];
        let (c, s) = givens(a, b);
        rot.push((c, s));
        for j in k..n {
            let t1 = h[k][j];
            let t2 = h[k + 1][j];
            h[k][j] = c.conj() * t1 + s.conj() * t2;
            h[k + 1][j] = -s * t1 + c * t2;
        }
    }
    // form RQ: apply the rotations on the right
    for (idx, &(c, s)) in rot.iter().enumerate() {
        let k = lo + idx;
        for i in 0..(k + 2).min(n) {
            let t1 = h[i][k];
            let t2 = h[i][k + 1];
            h[i][k] = t1 * c + t2 * s;
            h[i][k + 1] = -t1 * s.conj() + t2 * c.conj();
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}

fn givens(a: C, b: C) -> (C, C) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (C::new(1.0, 0.0), C::new(0.0, 0.0));
    }
    let r = (na * na + nb * nb).sqrt();
    // c real-positive convention; s so that the rotated second entry vanishes
    if na == 0.0 {
        (C::new(0.0, 0.0), b / r * C::new(1.0, 0.0))
    } else {
        let c = C::new(na / r, 0.0);
        let s = (a / na) * b.conj() / r;
        (c, s.conj())
    }
}

/// A group of nearby roots treated as one root with multiplicity.
#[derive(Debug, Clone, Copy)]
pub struct RootCluster {
    pub center: C,
    pub multiplicity: usize,
}

/// Single-linkage clustering of a root list. Within a cluster the mean is
/// used as the center (first-order eigenvalue perturbations cancel there).
pub fn cluster_roots(roots: &[C], tol: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<C>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(roots[i]);
    }
    groups
        .into_values()
        .map(|g| {
            let sum: C = g.iter().sum();
            RootCluster {
                center: sum / g.len() as f64,
                multiplicity: g.len(),
            }
        })
        .collect()
}

/// Evaluate `c[0] + c[1] x + ...` and its derivative by Horner.
pub fn eval_poly_and_deriv(coeffs: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Coefficients of the derivative polynomial.
pub fn derivative_coeffs(coeffs: &[C]) -> Vec<C> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Polish a k-fold root estimate with Newton iteration on the (k-1)-th
/// derivative, where it is a simple root. Returns the refined value, or the
/// input if the iteration wanders off.
pub fn polish_multiple_root(coeffs: &[C], estimate: C, multiplicity: usize) -> C {
    let mut d = coeffs.to_vec();
    for _ in 1..multiplicity {
        d = derivative_coeffs(&d);
    }
    let mut x = estimate;
    for _ in 0..40 {
        let (p, dp) = eval_poly_and_deriv(&d, x);
        if dp.norm() == 0.0 {
            return estimate;
        }
        let step = p / dp;
        x -= step;
        if (x - estimate).norm() > 0.1 * (1.0 + estimate.norm()) {
            return estimate;
        }
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

/// Roots of the quartic `T^4 - z1 T^3 + z2 T^2 - z3 T + 1`,
/// the characteristic equation of the torus parametrization.
pub fn torus_quartic_roots(z1: C, z2: C, z3: C) -> Result<[C; 4]> {
    let coeffs = [C::new(1.0, 0.0), -z3, z2, -z1, C::new(1.0, 0.0)];
    let roots = polynomial_roots(&coeffs)?;
    Ok([roots[0], roots[1], roots[2], roots[3]])
}

/// Coefficients (ascending) of the torus quartic for reuse by callers that
/// need to evaluate or differentiate it.
pub fn torus_quartic_coeffs(z1: C, z2: C, z3: C) -> [C; 5] {
    [C::new(1.0, 0.0), -z3, z2, -z1, C::new(1.0, 0.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn expand_from_roots(roots: &[C]) -> Vec<C> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        coeffs
    }

    fn match_roots(found: &mut Vec<C>, expected: &[C], tol: f64) {
        for &e in expected {
            let (idx, _) = found
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - e).norm().total_cmp(&(b.1 - e).norm()))
                .unwrap();
            assert!(
                (found[idx] - e).norm() < tol,
                "root {e} not found within {tol}: nearest {}",
                found[idx]
            );
            found.swap_remove(idx);
        }
    }

    #[test]
    fn simple_quartic_roots() {
        let expected = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0), c(0.5, -0.5)];
        let coeffs = expand_from_roots(&expected);
        let mut found = polynomial_roots(&coeffs).unwrap();
        match_roots(&mut found, &expected, 1e-10);
    }

    #[test]
    fn quadruple_root_cluster_recovers_center() {
        // (T-1)^4: individual eigenvalues smear ~1e-4, the cluster mean does not
        let coeffs = expand_from_roots(&[c(1.0, 0.0); 4]);
        let roots = polynomial_roots(&coeffs).unwrap();
        let clusters = cluster_roots(&roots, 1e-2);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].multiplicity, 4);
        assert!((clusters[0].center - c(1.0, 0.0)).norm() < 1e-6);
        let polished = polish_multiple_root(&coeffs, clusters[0].center, 4);
        assert!((polished - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn double_roots_on_circle() {
        let r1 = c(0.6, 0.8);
        let r2 = c(-1.0, 0.0);
        let coeffs = expand_from_roots(&[r1, r1, r2, r2]);
        let roots = polynomial_roots(&coeffs).unwrap();
        let mut clusters = cluster_roots(&roots, 1e-3);
        clusters.sort_by(|a, b| a.center.re.total_cmp(&b.center.re));
        assert_eq!(clusters.len(), 2);
        for cl in clusters {
            assert_eq!(cl.multiplicity, 2);
            let polished = polish_multiple_root(&coeffs, cl.center, 2);
            assert!((polished.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_at_origin() {
        // x^2 (x - 2)
        let coeffs = [c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)];
        let mut found = polynomial_roots(&coeffs).unwrap();
        match_roots(&mut found, &[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)], 1e-10);
    }

    #[test]
    fn torus_quartic_all_ones() {
        let roots = torus_quartic_roots(c(4.0, 0.0), c(6.0, 0.0), c(4.0, 0.0)).unwrap();
        for r in roots {
            assert!((r - c(1.0, 0.0)).norm() < 1e-3);
        }
        let clusters = cluster_roots(&roots, 1e-2);
        assert_eq!(clusters.len(), 1);
        assert!((clusters[0].center - c(1.0, 0.0)).norm() < 1e-6);
    }

    proptest! {
        #[test]
        fn random_roots_recovered(
            res in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..7)) {
            // keep roots pairwise separated so they are simple
            let mut roots: Vec<C> = Vec::new();
            for (re, im) in res {
                let cand = c(re, im);
                if roots.iter().all(|r| (r - cand).norm() > 0.15) {
                    roots.push(cand);
                }
            }
            prop_assume!(roots.len() >= 2);
            let coeffs = expand_from_roots(&roots);
            let mut found = polynomial_roots(&coeffs).unwrap();
            match_roots(&mut found, &roots, 1e-7);
        }
    }
}
