//! The critical set of the degree-d maps, the five-branch decomposition of
//! the critical values on the invariant real slice, and the bridge to
//! degenerate binary quartic forms.
//!
//! Closed forms used throughout:
//! `det Dphi1 = t4 * prod_{i<j} (t_i - t_j)` and
//! `det D(f o phi1) = d^3 t4 * prod_{i<j} (t_i^d - t_j^d)`; a point is
//! critical exactly when some ratio `t_i / t_j` is a nontrivial d-th root
//! of unity.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::{cluster_roots, eval_poly_and_deriv, polish_multiple_root, polynomial_roots, torus_quartic_coeffs};
use crate::torus::TorusPoint;

type C = Complex64;

/// `det Dphi1` at a torus point.
pub fn det_dphi1(t: &TorusPoint) -> C {
    let c = t.coords();
    let mut prod = c[3];
    for i in 0..4 {
        for j in i + 1..4 {
            prod *= c[i] - c[j];
        }
    }
    prod
}

/// `det D(f o phi1)` at a torus point for the degree-d map.
pub fn det_d_composite(t: &TorusPoint, d: u32) -> C {
    let c = t.coords();
    let mut prod = C::new((d as f64).powi(3), 0.0) * c[3];
    for i in 0..4 {
        for j in i + 1..4 {
            prod *= c[i].powi(d as i32) - c[j].powi(d as i32);
        }
    }
    prod
}

/// True when some pair ratio `t_i / t_j` is a nontrivial d-th root of unity
/// (within `tol`), i.e. when the image is a critical point of the degree-d map.
pub fn is_critical(t: &TorusPoint, d: u32, tol: f64) -> bool {
    assert!(d >= 2);
    let c = t.coords();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let ratio = c[i] / c[j];
            for k in 1..d {
                let eps = C::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
                if (ratio - eps).norm() < tol {
                    return true;
                }
            }
        }
    }
    false
}

/// Left-minus-right of the three reality conditions for a degree-2 critical
/// value to lie on the invariant slice, in terms of the moduli `(r, R)` and
/// the angle combinations `angle_a = 2(alpha+beta)`, `angle_b = alpha-beta`:
///
/// 1. `(r^2 R^4 - r^2) cos 2b + 2 (r^3 R^3 - r R) cos(a+b) = R^2 - r^4 R^2`
/// 2. `(r^2 R^4 - r^2) sin 2b + 2 (r^3 R^3 - r R) sin(a+b) = 0`
/// 3. `(r^4 R^4 - 1) sin a - 2 (r^3 R - r R^3) sin b = 0`
pub fn r3_residuals(r: f64, big_r: f64, angle_a: f64, angle_b: f64) -> [f64; 3] {
    let (a, b) = (angle_a, angle_b);
    let p = r * r * big_r.powi(4) - r * r;
    let q = 2.0 * (r.powi(3) * big_r.powi(3) - r * big_r);
    let c1 = p * (2.0 * b).cos() + q * (a + b).cos() - (big_r * big_r - r.powi(4) * big_r * big_r);
    let c2 = p * (2.0 * b).sin() + q * (a + b).sin();
    let c3 = (r.powi(4) * big_r.powi(4) - 1.0) * a.sin() - 2.0 * (r.powi(3) * big_r - r * big_r.powi(3)) * b.sin();
    [c1, c2, c3]
}

/// The five branches of the critical-value set on the invariant slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalBranch {
    Astroidalhedron,
    TopBowl,
    LowerBowl,
    TopWhiskers,
    LowerWhiskers,
    None,
}

impl CriticalBranch {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Astroidalhedron => "astroidalhedron",
            Self::TopBowl => "top-bowl",
            Self::LowerBowl => "lower-bowl",
            Self::TopWhiskers => "top-whiskers",
            Self::LowerWhiskers => "lower-whiskers",
            Self::None => "none",
        }
    }
}

fn angle_near(x: f64, target: f64, tol: f64) -> bool {
    let d = (x - target).rem_euclid(2.0 * PI);
    d < tol || 2.0 * PI - d < tol
}

/// Classify the degree-2 critical normalization `t1 = -t4` by the remaining
/// free coordinates: `t2 = r e^{i alpha}`, `t3 = R e^{i beta}` with
/// `a = 2(alpha+beta)`, `b = alpha-beta`.
pub fn classify_branch(t2: C, t3: C, tol: f64) -> CriticalBranch {
    let (r, alpha) = t2.to_polar();
    let (big_r, beta) = t3.to_polar();
    let a = 2.0 * alpha + 2.0 * beta;
    let b = alpha - beta;
    let near = |x: f64, y: f64| (x - y).abs() < tol;
    if near(r, 1.0) && near(big_r, 1.0) {
        return CriticalBranch::Astroidalhedron;
    }
    if near(r * big_r, 1.0) && !near(r, big_r) {
        if angle_near(b, PI, tol) {
            return CriticalBranch::TopBowl;
        }
        if angle_near(b, 0.0, tol) {
            return CriticalBranch::LowerBowl;
        }
        return CriticalBranch::None;
    }
    if near(r, big_r) && !near(r * big_r, 1.0) {
        if angle_near(a, 0.0, tol) && angle_near(b, PI, tol) {
            return CriticalBranch::TopWhiskers;
        }
        if angle_near(a, PI, tol) && angle_near(b, 0.0, tol) {
            return CriticalBranch::LowerWhiskers;
        }
        return CriticalBranch::None;
    }
    CriticalBranch::None
}

/// A real binary quartic `a x^4 + 4b x^3 y + 6c x^2 y^2 + 4d x y^3 + e y^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// The same quartic written as `Re(alpha z^4 + beta z^3 zbar + gamma z^2 zbar^2)`
/// with `z = x + i y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexQuarticParams {
    pub alpha: C,
    pub beta: C,
    pub gamma: f64,
}

impl QuarticForm {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        Self { a, b, c, d, e }
    }

    pub fn coeffs_univariate(&self) -> [f64; 5] {
        [self.e, 4.0 * self.d, 6.0 * self.c, 4.0 * self.b, self.a]
    }

    /// Discriminant via the resultant of the two partial derivatives
    /// (a 6x6 Sylvester determinant); zero exactly at repeated projective
    /// roots.
    pub fn discriminant(&self) -> Result<f64> {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        if [a, b, c, d, e].iter().all(|x| *x == 0.0) {
            return Err(Error::Domain("zero quartic form".into()));
        }
        // f_x / 4 = a t^3 + 3b t^2 + 3c t + d, f_y / 4 = b t^3 + 3c t^2 + 3d t + e
        let p = [a, 3.0 * b, 3.0 * c, d];
        let q = [b, 3.0 * c, 3.0 * d, e];
        let mut m = [[0.0f64; 6]; 6];
        for row in 0..3 {
            for k in 0..4 {
                m[row][row + k] = p[k];
                m[row + 3][row + k] = q[k];
            }
        }
        Ok(det6(&mut m))
    }

    pub fn to_complex_params(&self) -> ComplexQuarticParams {
        let ar = (self.a + self.e - 6.0 * self.c) / 8.0;
        let ai = (self.d - self.b) / 2.0;
        let br = (self.a - self.e) / 2.0;
        let bi = -(self.b + self.d);
        let gamma = (3.0 * self.a + 3.0 * self.e + 6.0 * self.c) / 8.0;
        ComplexQuarticParams {
            alpha: C::new(ar, ai),
            beta: C::new(br, bi),
            gamma,
        }
    }
}

impl ComplexQuarticParams {
    pub fn to_quartic(&self) -> QuarticForm {
        let (ar, ai) = (self.alpha.re, self.alpha.im);
        let (br, bi) = (self.beta.re, self.beta.im);
        let g = self.gamma;
        QuarticForm {
            a: ar + br + g,
            b: -ai - bi / 2.0,
            c: -ar + g / 3.0,
            d: ai - bi / 2.0,
            e: ar - br + g,
        }
    }
}

fn det6(m: &mut [[f64; 6]; 6]) -> f64 {
    let mut det = 1.0;
    for col in 0..6 {
        let (pivot, _) = (col..6)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..6 {
            let f = m[r][col] / m[col][col];
            for k in col..6 {
                m[r][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// The degenerate-quartic sheet with `alpha = 1`:
/// `beta = (-3 e^{i phi} + e^{-3 i phi} - 2 gamma e^{-i phi}) / 2`.
pub fn q0_beta(phi: f64, gamma: f64) -> C {
    (C::from_polar(-3.0, phi) + C::from_polar(1.0, -3.0 * phi)
        - C::from_polar(2.0 * gamma, -phi))
        * 0.5
}

/// Coordinate change from quartic parameters to dynamical coordinates:
/// `beta = -z1`, `2 gamma = z2`.
pub fn ps_to_dynamics(beta: C, gamma: f64) -> [C; 3] {
    [-beta, C::new(2.0 * gamma, 0.0), (-beta).conj()]
}

/// True when the torus quartic of `(z1, q)` has a repeated root of unit
/// modulus (within `tol`). Cluster candidates are polished on derivative
/// polynomials, then verified against the quartic itself.
pub fn double_root_on_circle(z1: C, q: f64, tol: f64) -> Result<bool> {
    let coeffs = torus_quartic_coeffs(z1, C::new(q, 0.0), z1.conj());
    let roots = polynomial_roots(&coeffs)?;
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for cl in cluster_roots(&roots, 1e-3) {
        if cl.multiplicity < 2 {
            continue;
        }
        let t = polish_multiple_root(&coeffs, cl.center, cl.multiplicity);
        let val = eval_poly_and_deriv(&coeffs, t).0.norm();
        let local_scale = scale * t.norm().max(1.0).powi(4);
        if val <= tol * local_scale && (t.norm() - 1.0).abs() <= tol.max(1e-10) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of the random no-solution search over the off-branch region
/// `r R != 1`, `r != R` (kept at margin 0.05 from both strips).
#[derive(Debug, Clone)]
pub struct OffBranchSearch {
    pub trials: u64,
    pub threshold: f64,
    pub best_residual: f64,
    pub best_point: [f64; 4],
    pub any_below: bool,
}

const STRIP_MARGIN: f64 = 0.05;

fn allowed(r: f64, big_r: f64) -> bool {
    r > 0.1
        && big_r > 0.1
        && r < 8.0
        && big_r < 8.0
        && (r * big_r - 1.0).abs() >= STRIP_MARGIN
        && (r - big_r).abs() >= STRIP_MARGIN
}

fn objective(x: &[f64; 4]) -> f64 {
    let res = r3_residuals(x[0], x[1], x[2], x[3]);
    res.iter().map(|v| v * v).sum()
}

/// Seeded random search with cyclic coordinate-descent refinement for points
/// satisfying all three slice conditions away from the solution branches.
pub fn off_branch_search(trials: u64, seed: u64, threshold: f64) -> OffBranchSearch {
    use rand::Rng;
    let results: Vec<(f64, [f64; 4])> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = crate::dynamics::stream_rng(seed, i);
            let mut x;
            loop {
                let lr: f64 = rng.random_range(-1.6..1.6);
                let lbr: f64 = rng.random_range(-1.6..1.6);
                x = [
                    lr.exp(),
                    lbr.exp(),
                    rng.random_range(0.0..2.0 * PI),
                    rng.random_range(0.0..2.0 * PI),
                ];
                if allowed(x[0], x[1]) {
                    break;
                }
            }
            // cyclic coordinate descent with step halving
            let mut steps = [0.3, 0.3, 0.5, 0.5];
            let mut fx = objective(&x);
            for _ in 0..60 {
                for k in 0..4 {
                    for dir in [-1.0, 1.0] {
                        let mut y = x;
                        y[k] += dir * steps[k];
                        if k < 2 && !allowed(y[0], y[1]) {
                            continue;
                        }
                        let fy = objective(&y);
                        if fy < fx {
                            x = y;
                            fx = fy;
                        }
                    }
                    steps[k] *= 0.75;
                }
            }
            let max_resid = r3_residuals(x[0], x[1], x[2], x[3])
                .iter()
                .map(|v| v.abs())
                .fold(0.0, f64::max);
            (max_resid, x)
        })
        .collect();
    let mut best = (f64::INFINITY, [0.0; 4]);
    for (v, x) in results {
        if v < best.0 {
            best = (v, x);
        }
    }
    OffBranchSearch {
        trials,
        threshold,
        best_residual: best.0,
        best_point: best.1,
        any_below: best.0 < threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fd_jacobian_iterate;
    use crate::poly::build_map;
    use crate::torus::phi1;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn det3(m: &[Vec<C>]) -> C {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// finite-difference Jacobian determinant of phi1 itself
    fn fd_det_dphi1(t: &TorusPoint, h: f64) -> C {
        let mut jac = vec![vec![c(0.0, 0.0); 3]; 3];
        let base = [t.t1, t.t2, t.t3];
        for j in 0..3 {
            let mut tp = base;
            let mut tm = base;
            tp[j] += c(h, 0.0);
            tm[j] -= c(h, 0.0);
            let fp = phi1(&TorusPoint::new(tp[0], tp[1], tp[2]).unwrap());
            let fm = phi1(&TorusPoint::new(tm[0], tm[1], tm[2]).unwrap());
            for i in 0..3 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        det3(&jac)
    }

    #[test]
    fn det_dphi1_closed_form() {
        assert!(det_dphi1(&TorusPoint::from_reals(1.0, 1.0, 1.0).unwrap()).norm() < 1e-14);
        assert!(det_dphi1(&TorusPoint::from_reals(2.0, 1.0, 0.5).unwrap()).norm() < 1e-12);
        let t = TorusPoint::from_reals(2.0, 3.0, 5.0).unwrap();
        let v = det_dphi1(&t);
        assert!((v.re - (-5.7955481481481)).abs() < 1e-9, "{v}");
        let fd = fd_det_dphi1(&t, 1e-5);
        assert!((v - fd).norm() < 1e-5 * v.norm());
    }

    #[test]
    fn det_composite_closed_form() {
        let t = TorusPoint::from_reals(1.0, 1.0, 1.0).unwrap();
        assert!(det_d_composite(&t, 2).norm() < 1e-12);
        let t = TorusPoint::new(c(0.8, 0.0), c(-0.8, 0.0), c(1.3, 0.0)).unwrap();
        assert!(det_d_composite(&t, 2).norm() < 1e-12, "t1 = -t2 collision");

        // quotient identity against the finite-difference determinant of f
        let t = TorusPoint::from_reals(2.0, 3.0, 5.0).unwrap();
        let m = build_map(2).unwrap();
        let z = phi1(&t);
        let jac = fd_jacobian_iterate(&m, z, 1, 1e-5).unwrap();
        let det_f = det3(&jac);
        let quotient = det_d_composite(&t, 2) / det_dphi1(&t);
        assert!(
            (det_f - quotient).norm() < 1e-5 * det_f.norm(),
            "{det_f} vs {quotient}"
        );
    }

    #[test]
    fn is_critical_examples() {
        // t1 = -t4 with d = 2
        let r = 1.7;
        let t1 = c(0.0, 1.0 / r); // t1^2 = -1/r^2
        let t2 = c(0.0, r);
        let t3 = c(0.0, -r);
        let t = TorusPoint::new(t1, t2, t3).unwrap();
        assert!((t.t4() + t1).norm() < 1e-12);
        assert!(is_critical(&t, 2, 1e-10));

        assert!(!is_critical(&TorusPoint::from_reals(2.0, 3.0, 5.0).unwrap(), 2, 1e-10));
        // equal coordinates are not critical (epsilon = 1 is excluded)
        assert!(!is_critical(&TorusPoint::from_reals(2.0, 2.0, 5.0).unwrap(), 3, 1e-10));
    }

    #[test]
    fn residuals_on_branches() {
        // r = R = 1 satisfies everything
        for (a, b) in [(0.3, 1.2), (2.0, 4.0)] {
            let res = r3_residuals(1.0, 1.0, a, b);
            for v in res {
                assert!(v.abs() < 1e-12);
            }
        }
        // r R = 1, b = pi
        for (r, a) in [(2.0, 0.7), (0.3, 2.9)] {
            let res = r3_residuals(r, 1.0 / r, a, PI);
            for v in res {
                assert!(v.abs() < 1e-10, "residual {v}");
            }
        }
        // off everything: nonzero
        let res = r3_residuals(2.0, 2.0, PI / 4.0, PI / 4.0);
        assert!(res.iter().any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn classify_branch_examples() {
        let e = |th: f64| C::from_polar(1.0, th);
        assert_eq!(
            classify_branch(e(1.0), e(2.0), 1e-9),
            CriticalBranch::Astroidalhedron
        );
        let alpha = 0.9;
        assert_eq!(
            classify_branch(C::from_polar(2.0, alpha), C::from_polar(0.5, alpha + PI), 1e-9),
            CriticalBranch::TopBowl
        );
        assert_eq!(
            classify_branch(C::from_polar(2.0, alpha), C::from_polar(0.5, alpha), 1e-9),
            CriticalBranch::LowerBowl
        );
        assert_eq!(
            classify_branch(c(0.0, 2.0), c(0.0, -2.0), 1e-9),
            CriticalBranch::TopWhiskers
        );
        let w = C::from_polar(1.7, PI / 4.0);
        assert_eq!(classify_branch(w, w, 1e-9), CriticalBranch::LowerWhiskers);
        assert_eq!(classify_branch(c(2.0, 0.0), c(3.0, 0.0), 1e-9), CriticalBranch::None);
    }

    #[test]
    fn quartic_discriminant_examples() {
        // (x^2 - y^2)^2
        let q = QuarticForm::new(1.0, 0.0, -1.0 / 3.0, 0.0, 1.0);
        assert!(q.discriminant().unwrap().abs() < 1e-12);
        // x^4 + y^4
        let q = QuarticForm::new(1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(q.discriminant().unwrap().abs() > 1e-6);
        assert!(QuarticForm::new(0.0, 0.0, 0.0, 0.0, 0.0).discriminant().is_err());
    }

    #[test]
    fn quartic_discriminant_agrees_with_root_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let q = QuarticForm::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            if q.a.abs() < 0.2 {
                continue;
            }
            let disc = q.discriminant().unwrap();
            let coeffs: Vec<C> = q.coeffs_univariate().iter().map(|&x| c(x, 0.0)).collect();
            let roots = polynomial_roots(&coeffs).unwrap();
            let mut min_sep = f64::INFINITY;
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    min_sep = min_sep.min((roots[i] - roots[j]).norm());
                }
            }
            // repeated projective root <=> vanishing discriminant
            if min_sep > 0.05 {
                assert!(disc.abs() > 1e-8, "disc {disc} with separation {min_sep}");
            }
        }
        // constructed repeated roots must vanish
        for r in [0.5, -1.25, 2.0] {
            // (x - r y)^2 (x^2 + 1 y^2)
            let p2 = [1.0, -2.0 * r, r * r]; // (x - r y)^2
            let q2 = [1.0, 0.0, 1.0];
            let mut full = [0.0; 5];
            for i in 0..3 {
                for j in 0..3 {
                    full[i + j] += p2[i] * q2[j];
                }
            }
            let q = QuarticForm::new(full[0], full[1] / 4.0, full[2] / 6.0, full[3] / 4.0, full[4]);
            assert!(q.discriminant().unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn complex_params_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let p = ComplexQuarticParams {
                alpha: c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                beta: c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                gamma: rng.random_range(-2.0..2.0),
            };
            let back = p.to_quartic().to_complex_params();
            assert!((back.alpha - p.alpha).norm() < 1e-12);
            assert!((back.beta - p.beta).norm() < 1e-12);
            assert!((back.gamma - p.gamma).abs() < 1e-12);
        }
    }

    #[test]
    fn q0_points_are_degenerate_quartics() {
        // the parametrized sheet lies inside the discriminant zero set
        for (phi, gamma) in [(0.0, -3.0), (1.1, 0.5), (2.7, 2.0), (4.4, -1.0)] {
            let beta = q0_beta(phi, gamma);
            let p = ComplexQuarticParams {
                alpha: c(1.0, 0.0),
                beta,
                gamma,
            };
            let disc = p.to_quartic().discriminant().unwrap();
            assert!(disc.abs() < 1e-8, "disc {disc} at phi={phi}, gamma={gamma}");
        }
    }

    #[test]
    fn q0_beta_printed_values() {
        let b = q0_beta(0.0, 2.0);
        assert!((b - c(-3.0, 0.0)).norm() < 1e-14);
        let b = q0_beta(PI, 2.0);
        assert!((b - c(3.0, 0.0)).norm() < 1e-12);
        // phi = 0: beta = -1 - gamma
        for g in [-3.0, 0.0, 1.5] {
            assert!((q0_beta(0.0, g) - c(-1.0 - g, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn ps_to_dynamics_values() {
        let z = ps_to_dynamics(c(-4.0, 0.0), 3.0);
        assert_eq!(z, [c(4.0, 0.0), c(6.0, 0.0), c(4.0, 0.0)]);
        let beta = q0_beta(0.0, -3.0);
        assert!((beta - c(2.0, 0.0)).norm() < 1e-13);
        let z = ps_to_dynamics(beta, -3.0);
        assert!((z[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((z[1] - c(-6.0, 0.0)).norm() < 1e-12);
        let p = crate::torus::to_p1p2q(&z);
        let d = crate::surfaces::surface_distance(p, crate::surfaces::SurfaceKind::TangentDevelopable);
        assert!(d < 1e-8, "off the developable by {d}");
    }

    #[test]
    fn bridge_lands_on_developable() {
        for k in 0..64 {
            let phi = 2.0 * PI * k as f64 / 64.0;
            for gamma in [-4.0, -1.0, 0.5, 3.0] {
                let z = ps_to_dynamics(q0_beta(phi, gamma), gamma);
                let p = crate::torus::to_p1p2q(&z);
                let d = crate::surfaces::surface_distance(p, crate::surfaces::SurfaceKind::TangentDevelopable);
                assert!(d < 1e-6, "phi={phi} gamma={gamma}: distance {d}");
            }
        }
    }

    #[test]
    fn double_root_detection() {
        assert!(double_root_on_circle(c(4.0, 0.0), 6.0, 1e-8).unwrap());
        assert!(double_root_on_circle(c(0.0, 0.0), -2.0, 1e-8).unwrap());
        // generic interior point: simple roots
        let z = crate::torus::phi1_angles(&crate::torus::AngleTriple::new(0.4, 1.1, 2.0));
        assert!(!double_root_on_circle(z[0], z[1].re, 1e-8).unwrap());
        // sampled developable points carry a circle double root
        for k in 0..16 {
            let u = 2.0 * PI * k as f64 / 16.0 + 0.03;
            let p = crate::surfaces::tangent_developable(u, 0.7);
            assert!(
                double_root_on_circle(c(p[0], p[1]), p[2], 1e-8).unwrap(),
                "u = {u}"
            );
        }
    }

    #[test]
    fn whisker_orbits_reach_p2() {
        let cfg = crate::config::RunConfig::default();
        let m = build_map(2).unwrap();
        for which in [crate::surfaces::Sheet::Top, crate::surfaces::Sheet::Lower] {
            for r in [1.2, 1.7, 2.4] {
                let z = crate::surfaces::whisker_point(which, r).unwrap();
                let cl = crate::dynamics::classify_numeric(&m, z, 200, &cfg).unwrap();
                assert_eq!(
                    cl,
                    crate::dynamics::OrbitClass::FatouFixed(crate::dynamics::FixedPt::P2),
                    "whisker {which:?} r={r}"
                );
            }
        }
    }

    #[test]
    fn off_branch_search_finds_nothing() {
        let report = off_branch_search(2000, 0, 1e-8);
        assert!(!report.any_below, "best residual {}", report.best_residual);
        assert!(report.best_residual > 1e-6);
    }

    #[test]
    fn branch_points_are_critical_values() {
        // each branch parametrization is the image of a critical torus point;
        // the finite-difference determinant of f vanishes at the preimage
        let m = build_map(2).unwrap();
        let samples: Vec<(TorusPoint, &str)> = vec![
            // astroidalhedron: r = R = 1
            (
                {
                    let t2 = C::from_polar(1.0, 0.8);
                    let t3 = C::from_polar(1.0, 1.9);
                    let prod = t2 * t3;
                    TorusPoint::new((-prod.inv()).sqrt(), t2, t3).unwrap()
                },
                "astroidalhedron",
            ),
            // top bowl: t2 = r e^{i a}, t3 = -(1/r) e^{i a}
            (
                {
                    let r: f64 = 1.6;
                    let alpha: f64 = 0.5;
                    let t2 = C::from_polar(r, alpha);
                    let t3 = C::from_polar(1.0 / r, alpha + PI);
                    // t1 with t1^2 = -1/(t2 t3) realizes t1 = -t4
                    let prod = t2 * t3;
                    TorusPoint::new((-prod.inv()).sqrt(), t2, t3).unwrap()
                },
                "top-bowl",
            ),
            // top whiskers: t2 = i r, t3 = -i r
            (
                {
                    let r: f64 = 1.4;
                    let t2 = c(0.0, r);
                    let t3 = c(0.0, -r);
                    let prod = t2 * t3;
                    TorusPoint::new((-prod.inv()).sqrt(), t2, t3).unwrap()
                },
                "top-whiskers",
            ),
        ];
        for (t, label) in samples {
            assert!((t.t1 + t.t4()).norm() < 1e-12, "{label}: t1 != -t4");
            assert!(is_critical(&t, 2, 1e-9), "{label} not critical");
            let z = phi1(&t);
            // the critical point itself is generally off the slice, but its
            // image (the critical value) lands on the slice branch
            let fz = m.eval(z).unwrap();
            assert!((fz[2] - fz[0].conj()).norm() < 1e-9, "{label} value not in slice");
            assert!(fz[1].im.abs() < 1e-9, "{label} value z2 not real");
            let p = crate::torus::to_p1p2q(&fz);
            let kind = match label {
                "astroidalhedron" => crate::surfaces::SurfaceKind::Astroidalhedron,
                "top-bowl" => crate::surfaces::SurfaceKind::TopBowl,
                _ => crate::surfaces::SurfaceKind::TopWhiskers,
            };
            let dist = crate::surfaces::surface_distance(p, kind);
            assert!(dist < 1e-7, "{label}: image misses its branch by {dist}");
            let branch = classify_branch(t.t2, t.t3, 1e-9);
            assert_eq!(branch.label(), label, "{label}: branch tag");
            let jac = fd_jacobian_iterate(&m, z, 1, 1e-6).unwrap();
            let det = det3(&jac);
            assert!(det.norm() < 2e-4, "{label}: det {})", det.norm());
        }
    }
}
