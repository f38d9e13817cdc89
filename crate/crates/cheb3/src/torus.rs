//! Torus parametrizations, the A3 reflection group and alcove folding, and
//! membership/inversion for the bounded-orbit set K.
//!
//! The branched covering sends `(t1,t2,t3)` with `t4 = 1/(t1 t2 t3)` to the
//! first three elementary symmetric functions of `t1..t4`. On the unit torus
//! this parametrizes K; angle space carries the natural domain
//! `-a-b-g <= a <= b <= g <= 2pi-a-b-g`, which the linear change
//!
//! ```text
//! s1 = (-a + b)/2,   s2 = -(a + b)/sqrt(2),   s3 = (a + b)/2 + g
//! ```
//!
//! maps onto the alcove R: the (sqrt3, sqrt3, 2)-tetrahedron with vertices
//! O, (0, -pi/sqrt2, pi), (pi, 0, pi), (0, pi/sqrt2, pi). The reflections
//! J1..J3 in the simple-root mirrors together with J0: s3 -> 2pi - s3
//! generate the group that folds all of s-space onto R.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::{
    cluster_roots, polish_multiple_root, torus_quartic_coeffs, torus_quartic_roots,
};

type C = Complex64;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Simple roots of type A3 in s-coordinates; all have squared length 2.
pub const SIMPLE_ROOTS: [[f64; 3]; 3] = [
    [-0.5 * SQRT2, -1.0, 0.5 * SQRT2],
    [SQRT2, 0.0, 0.0],
    [-0.5 * SQRT2, 1.0, 0.5 * SQRT2],
];

/// Vertices of the fundamental alcove R.
pub const ALCOVE_VERTICES: [[f64; 3]; 4] = [
    [0.0, 0.0, 0.0],
    [0.0, -PI / SQRT2, PI],
    [PI, 0.0, PI],
    [0.0, PI / SQRT2, PI],
];

/// Vertices of the natural domain in angle space: O, B1, B2, B3.
pub const NATURAL_DOMAIN_VERTICES: [[f64; 3]; 4] = [
    [0.0, 0.0, 0.0],
    [PI / 2.0, PI / 2.0, PI / 2.0],
    [-PI, PI, PI],
    [-PI / 2.0, -PI / 2.0, 1.5 * PI],
];

/// Barycenter of the alcove.
pub fn alcove_barycenter() -> SCoord {
    SCoord::new(PI / 4.0, 0.0, 0.75 * PI)
}

/// A point of the parametrizing torus; all coordinates nonzero, the fourth
/// is `1/(t1 t2 t3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub t1: C,
    pub t2: C,
    pub t3: C,
}

impl TorusPoint {
    pub fn new(t1: C, t2: C, t3: C) -> Result<Self> {
        for t in [t1, t2, t3] {
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Domain("non-finite torus coordinate".into()));
            }
            if t.norm() == 0.0 {
                return Err(Error::Domain("torus coordinates must be nonzero".into()));
            }
        }
        Ok(Self { t1, t2, t3 })
    }

    pub fn from_reals(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        Self::new(C::new(t1, 0.0), C::new(t2, 0.0), C::new(t3, 0.0))
    }

    pub fn t4(&self) -> C {
        (self.t1 * self.t2 * self.t3).inv()
    }

    pub fn coords(&self) -> [C; 4] {
        [self.t1, self.t2, self.t3, self.t4()]
    }

    /// Coordinatewise d-th power (the conjugated dynamics upstairs).
    pub fn powi(&self, d: u32) -> Self {
        Self {
            t1: self.t1.powi(d as i32),
            t2: self.t2.powi(d as i32),
            t3: self.t3.powi(d as i32),
        }
    }
}

/// Angles `(alpha, beta, gamma)` in radians. Values are kept as given (the
/// natural domain needs representatives outside `[0, 2pi)`); use
/// [`AngleTriple::reduced`] for a mod-2pi normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AngleTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn reduced(&self) -> Self {
        let r = |x: f64| x.rem_euclid(2.0 * PI);
        Self::new(r(self.alpha), r(self.beta), r(self.gamma))
    }

    /// Membership in the natural domain
    /// `-a-b-g <= a <= b <= g <= 2pi-a-b-g` (within `tol`).
    pub fn in_natural_domain(&self, tol: f64) -> bool {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let d = -a - b - g;
        d - tol <= a && a <= b + tol && b <= g + tol && g <= 2.0 * PI + d + tol
    }

    /// The unit-torus point `(e^{ia}, e^{ib}, e^{ig})`.
    pub fn unit_torus(&self) -> TorusPoint {
        TorusPoint {
            t1: C::from_polar(1.0, self.alpha),
            t2: C::from_polar(1.0, self.beta),
            t3: C::from_polar(1.0, self.gamma),
        }
    }
}

/// Alcove coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SCoord {
    pub s: [f64; 3],
}

impl SCoord {
    pub fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s: [s1, s2, s3] }
    }

    /// Membership in the closed alcove (within `tol`).
    pub fn in_alcove(&self, tol: f64) -> bool {
        for root in &SIMPLE_ROOTS {
            if dot(&self.s, root) < -tol {
                return false;
            }
        }
        self.s[2] <= PI + tol
    }

    pub fn dist(&self, other: &SCoord) -> f64 {
        (0..3)
            .map(|i| (self.s[i] - other.s[i]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, k: f64) -> SCoord {
        SCoord::new(self.s[0] * k, self.s[1] * k, self.s[2] * k)
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The elementary-symmetric parametrization of `C^3` by the torus.
pub fn phi1(t: &TorusPoint) -> [C; 3] {
    let [t1, t2, t3, t4] = t.coords();
    let z1 = t1 + t2 + t3 + t4;
    let z2 = t1 * t2 + t1 * t3 + t1 * t4 + t2 * t3 + t2 * t4 + t3 * t4;
    let z3 = t1 * t2 * t3 + t1 * t2 * t4 + t1 * t3 * t4 + t2 * t3 * t4;
    [z1, z2, z3]
}

/// `phi1` at a unit-torus angle triple.
pub fn phi1_angles(a: &AngleTriple) -> [C; 3] {
    phi1(&a.unit_torus())
}

/// The square-root-level parametrization `(x,y,z) -> (x^2, x(y+1/y)/z, 1/z^2)`
/// that intertwines the leading homogeneous part with coordinatewise powers.
pub fn phi2(x: C, y: C, z: C) -> Result<[C; 3]> {
    if y.norm() == 0.0 || z.norm() == 0.0 {
        return Err(Error::Domain("phi2 requires y != 0 and z != 0".into()));
    }
    Ok([x * x, x * (y + y.inv()) / z, (z * z).inv()])
}

/// Linear change from angle space to alcove coordinates.
pub fn angles_to_s(a: &AngleTriple) -> SCoord {
    SCoord::new(
        0.5 * (-a.alpha + a.beta),
        -(a.alpha + a.beta) / SQRT2,
        0.5 * (a.alpha + a.beta) + a.gamma,
    )
}

/// Inverse of [`angles_to_s`].
pub fn s_to_angles(s: &SCoord) -> AngleTriple {
    let [s1, s2, s3] = s.s;
    AngleTriple::new(-s1 - s2 / SQRT2, s1 - s2 / SQRT2, s3 + s2 / SQRT2)
}

/// Apply reflection `k`: `J0` flips in the plane `s3 = pi`, `J1..J3` are the
/// simple-root mirror reflections through the origin.
pub fn reflect(k: usize, s: &SCoord) -> Result<SCoord> {
    match k {
        0 => Ok(SCoord::new(s.s[0], s.s[1], 2.0 * PI - s.s[2])),
        1..=3 => {
            let root = &SIMPLE_ROOTS[k - 1];
            let proj = dot(&s.s, root); // 2 (x, a)/(a, a) with |a|^2 = 2
            Ok(SCoord::new(
                s.s[0] - proj * root[0],
                s.s[1] - proj * root[1],
                s.s[2] - proj * root[2],
            ))
        }
        _ => Err(Error::Domain(format!("reflection index {k} out of range"))),
    }
}

/// A recorded folding word; reflection indices in order of application.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FoldWord(pub Vec<u8>);

impl FoldWord {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Undo the folding: maps the folded representative back to the original
    /// point (reflections are involutions, so the word is applied reversed).
    pub fn unfold(&self, s: &SCoord) -> SCoord {
        let mut x = *s;
        for &k in self.0.iter().rev() {
            x = reflect(k as usize, &x).expect("stored indices are valid");
        }
        x
    }
}

const FOLD_BUDGET: usize = 1000;
const FACE_TOL: f64 = 1e-12;

/// Fold a point into the closed alcove, reflecting in the most violated face
/// each time. Returns the representative and the applied word.
pub fn fold(s: &SCoord) -> Result<(SCoord, FoldWord)> {
    for v in s.s {
        if !v.is_finite() {
            return Err(Error::Domain("non-finite s-coordinate".into()));
        }
    }
    let mut x = *s;
    let mut word = Vec::new();
    for _ in 0..FOLD_BUDGET {
        // violation = distance to the offending mirror
        let mut worst = FACE_TOL;
        let mut pick = None;
        for (i, root) in SIMPLE_ROOTS.iter().enumerate() {
            let v = -dot(&x.s, root) / SQRT2;
            if v > worst {
                worst = v;
                pick = Some(i + 1);
            }
        }
        let v0 = x.s[2] - PI;
        if v0 > worst {
            pick = Some(0);
        }
        match pick {
            None => return Ok((x, FoldWord(word))),
            Some(k) => {
                x = reflect(k, &x)?;
                word.push(k as u8);
            }
        }
    }
    Err(Error::Internal("fold budget exceeded".into()))
}

/// Membership status of a point of the invariant real slice with respect to
/// the bounded-orbit set K.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KStatus {
    /// All four torus roots on the unit circle and pairwise distinct.
    Interior,
    /// On the circle with a collision (the folding surface).
    Boundary,
    /// Some root pair off the circle.
    Exterior,
}

impl KStatus {
    pub fn is_member(&self) -> bool {
        !matches!(self, KStatus::Exterior)
    }
}

pub const DEFAULT_EPS_CIRCLE: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-3;

/// Classify `(z1, q)` (a point with `z3 = conj(z1)`, `z2 = q` real) against
/// K by the root moduli of the torus quartic. Clusters of nearby roots are
/// polished on derivative polynomials so that multiple roots do not smear
/// the modulus test; the acceptance band is `10 * eps_circle`.
pub fn k_status(z1: C, q: f64, eps_circle: f64) -> Result<KStatus> {
    let z2 = C::new(q, 0.0);
    let roots = torus_quartic_roots(z1, z2, z1.conj())?;
    let coeffs = torus_quartic_coeffs(z1, z2, z1.conj());
    let clusters = cluster_roots(&roots, CLUSTER_TOL);
    let mut max_dev: f64 = 0.0;
    let mut multiple = false;
    for cl in &clusters {
        let center = if cl.multiplicity >= 2 {
            multiple = true;
            polish_multiple_root(&coeffs, cl.center, cl.multiplicity)
        } else {
            cl.center
        };
        max_dev = max_dev.max((center.norm() - 1.0).abs());
    }
    if max_dev > 10.0 * eps_circle {
        Ok(KStatus::Exterior)
    } else if multiple {
        Ok(KStatus::Boundary)
    } else {
        Ok(KStatus::Interior)
    }
}

/// Boolean K membership at the default circle tolerance.
pub fn k_membership(z1: C, q: f64) -> bool {
    k_status(z1, q, DEFAULT_EPS_CIRCLE)
        .map(|s| s.is_member())
        .unwrap_or(false)
}

/// Invert the parametrization on K: quartic root arguments sorted into the
/// natural domain. The representative is the unique window of length 2pi
/// whose entries sum to zero; ties break by the ascending sort.
pub fn inverse_phi1(z: [C; 3], eps_circle: f64) -> Result<AngleTriple> {
    let q = z[1];
    if (z[2] - z[0].conj()).norm() > 1e-9 * (1.0 + z[0].norm()) || q.im.abs() > 1e-9 {
        return Err(Error::Domain(
            "inverse parametrization needs z3 = conj(z1) and real z2".into(),
        ));
    }
    if !k_status(z[0], q.re, eps_circle)?.is_member() {
        return Err(Error::Domain("point is outside K".into()));
    }
    let roots = torus_quartic_roots(z[0], C::new(q.re, 0.0), z[0].conj())?;
    let coeffs = torus_quartic_coeffs(z[0], C::new(q.re, 0.0), z[0].conj());
    // polish multiple-root clusters so boundary points get exact arguments
    let mut args: Vec<f64> = Vec::with_capacity(4);
    for cl in cluster_roots(&roots, CLUSTER_TOL) {
        let center = if cl.multiplicity >= 2 {
            polish_multiple_root(&coeffs, cl.center, cl.multiplicity)
        } else {
            cl.center
        };
        for _ in 0..cl.multiplicity {
            args.push(center.arg().rem_euclid(2.0 * PI));
        }
    }
    args.sort_by(f64::total_cmp);
    let total: f64 = args.iter().sum();
    let k = (total / (2.0 * PI)).round().clamp(0.0, 3.0) as usize;
    // subtract 2pi from the k largest arguments and rotate them to the front
    let mut window = Vec::with_capacity(4);
    for a in &args[4 - k..] {
        window.push(a - 2.0 * PI);
    }
    window.extend_from_slice(&args[..4 - k]);
    let ang = AngleTriple::new(window[1], window[2], window[3]);
    // round trip guard
    let back = phi1_angles(&ang);
    let resid = (back[0] - z[0]).norm() + (back[1] - C::new(q.re, 0.0)).norm();
    if resid > 1e-6 * (1.0 + z[0].norm() + q.re.abs()) {
        return Err(Error::Numerical(format!(
            "inverse parametrization round trip residual {resid:.3e}"
        )));
    }
    Ok(ang)
}

/// Real coordinates `(p1, p2, q) = (Re z1, Im z1, z2)` on the invariant slice.
pub fn to_p1p2q(z: &[C; 3]) -> [f64; 3] {
    [z[0].re, z[0].im, z[1].re]
}

/// Embed `(p1, p2, q)` back as a complex triple with `z3 = conj(z1)`.
pub fn from_p1p2q(p: &[f64; 3]) -> [C; 3] {
    let z1 = C::new(p[0], p[1]);
    [z1, C::new(p[2], 0.0), z1.conj()]
}
