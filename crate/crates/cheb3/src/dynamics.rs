//! Iteration and orbit structure: Green function estimates, the four-way
//! orbit classification, the skew product on the plane at infinity,
//! periodic points on the alcove with equidistribution statistics, the
//! maximal-entropy measure density and Lyapunov exponents.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::linalg::spectral_radius_3x3;
use crate::poly::ChebyshevMapA3;
use crate::torus::{
    alcove_barycenter, fold, k_status, phi1_angles, s_to_angles, KStatus, SCoord,
    TorusPoint, ALCOVE_VERTICES, SIMPLE_ROOTS,
};

type C = Complex64;

/// A point of projective 3-space, normalized to unit max-modulus with the
/// first maximal coordinate real-positive. Normalization is idempotent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint {
    w: [C; 4],
}

impl ProjectivePoint {
    pub fn new(w: [C; 4]) -> Result<Self> {
        if w.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("non-finite homogeneous coordinates".into()));
        }
        if w.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::Domain("homogeneous coordinates all zero".into()));
        }
        Ok(Self { w: normalize4(w) })
    }

    pub fn from_affine(z: [C; 3]) -> Self {
        Self {
            w: normalize4([z[0], z[1], z[2], C::new(1.0, 0.0)]),
        }
    }

    pub fn coords(&self) -> &[C; 4] {
        &self.w
    }

    /// Affine chart `w4 = 1` when the point is not too close to infinity.
    pub fn affine(&self) -> Option<[C; 3]> {
        if self.w[3].norm() < 1e-150 {
            return None;
        }
        Some([
            self.w[0] / self.w[3],
            self.w[1] / self.w[3],
            self.w[2] / self.w[3],
        ])
    }

    /// Fubini-Study sine distance, computed as the projection residual
    /// `|u - <v,u> v|` to avoid cancellation near zero.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let u = unit4(&self.w);
        let v = unit4(&other.w);
        let mut inner = C::new(0.0, 0.0);
        for k in 0..4 {
            inner += v[k].conj() * u[k];
        }
        let mut resid = 0.0;
        for k in 0..4 {
            resid += (u[k] - inner * v[k]).norm_sqr();
        }
        resid.sqrt()
    }
}

fn normalize4(w: [C; 4]) -> [C; 4] {
    let maxmod = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = maxmod * (1.0 - 1e-12);
    let k = (0..4).find(|&i| w[i].norm() >= threshold).unwrap_or(0);
    let pivot = w[k];
    std::array::from_fn(|i| if i == k { C::new(1.0, 0.0) } else { w[i] / pivot })
}

fn unit4(w: &[C; 4]) -> [C; 4] {
    let n = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    std::array::from_fn(|i| w[i] / n)
}

/// The two invariant circles in the plane at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circle {
    S1,
    S2,
}

/// The three attracting fixed points at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPt {
    P1,
    P2,
    P3,
}

/// Orbit classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    BoundedK,
    StableMobius,
    StableCircles(Circle),
    FatouFixed(FixedPt),
    Unresolved,
}

impl OrbitClass {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitClass::BoundedK => "BoundedK",
            OrbitClass::StableMobius => "StableMobius",
            OrbitClass::StableCircles(Circle::S1) => "StableCircles(S1)",
            OrbitClass::StableCircles(Circle::S2) => "StableCircles(S2)",
            OrbitClass::FatouFixed(FixedPt::P1) => "FatouFixed(P1)",
            OrbitClass::FatouFixed(FixedPt::P2) => "FatouFixed(P2)",
            OrbitClass::FatouFixed(FixedPt::P3) => "FatouFixed(P3)",
            OrbitClass::Unresolved => "Unresolved",
        }
    }

    /// Same broad class, ignoring which circle / fixed point was reached.
    pub fn compatible(&self, other: &OrbitClass) -> bool {
        use OrbitClass::*;
        matches!(
            (self, other),
            (BoundedK, BoundedK)
                | (StableMobius, StableMobius)
                | (StableCircles(_), StableCircles(_))
                | (FatouFixed(_), FatouFixed(_))
                | (Unresolved, _)
                | (_, Unresolved)
        )
    }
}

/// One recorded orbit step.
#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub affine: Option<[C; 3]>,
    pub projective: ProjectivePoint,
}

/// An orbit trace of `n + 1` points.
#[derive(Debug, Clone)]
pub struct OrbitTrace {
    pub steps: Vec<OrbitPoint>,
}

/// Iterate the map `n` times from an affine start. Evaluation switches to
/// projective normalization once the affine norm would overflow.
pub fn iterate(map: &ChebyshevMapA3, z: [C; 3], n: u32) -> Result<OrbitTrace> {
    let d = map.degree();
    // keep affine evaluation only while f(z) stays well inside f64 range
    let affine_limit = 1e100_f64.min(10f64.powf(250.0 / d as f64));
    let mut steps = Vec::with_capacity(n as usize + 1);
    let mut affine = Some(z);
    let mut proj = ProjectivePoint::from_affine(z);
    for c in &z {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Domain("non-finite start point".into()));
        }
    }
    steps.push(OrbitPoint {
        affine,
        projective: proj,
    });
    for _ in 0..n {
        let small = affine
            .map(|za| za.iter().map(|c| c.norm()).fold(0.0, f64::max) <= affine_limit)
            .unwrap_or(false);
        if small {
            let za = map.eval(affine.unwrap())?;
            affine = Some(za);
            proj = ProjectivePoint::from_affine(za);
        } else {
            let w = map.eval_lift(proj.coords());
            proj = ProjectivePoint::new(w)?;
            affine = proj.affine().filter(|za| {
                za.iter()
                    .all(|c| c.re.is_finite() && c.im.is_finite())
            });
        }
        steps.push(OrbitPoint {
            affine,
            projective: proj,
        });
    }
    Ok(OrbitTrace { steps })
}

/// Green function estimate.
#[derive(Debug, Clone, Copy)]
pub struct GreenEstimate {
    pub value: f64,
    pub n_used: u32,
    pub error_bound: f64,
}

/// Estimate `G(z) = lim d^{-n} log+ |f^n(z)|` by projective iteration with a
/// running log scale. Bounded orbits (never past the escape radius within
/// `n_max`) report exactly zero.
pub fn green(map: &ChebyshevMapA3, z: [C; 3], cfg: &RunConfig, tol: f64) -> Result<GreenEstimate> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let d = map.degree() as f64;
    if map.degree() < 2 {
        return Err(Error::Domain("Green function needs degree >= 2".into()));
    }
    // v carries the direction of (f^n z, 1); lambda its log max-norm
    let mut v = [z[0], z[1], z[2], C::new(1.0, 0.0)];
    let mut lambda;
    {
        let m = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            // origin: fully bounded
            return Ok(GreenEstimate {
                value: 0.0,
                n_used: cfg.n_max,
                error_bound: 0.0,
            });
        }
        lambda = m.ln();
        for c in &mut v {
            *c /= m;
        }
    }
    let log_escape = cfg.escape_radius.ln();
    let mut escaped = false;
    let mut g_prev = {
        let affine_norm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        (lambda + affine_norm.ln()).max(0.0)
    };
    let mut last_inc = f64::INFINITY;
    let mut n_used = cfg.n_max;
    for n in 1..=cfg.n_max {
        let w = map.eval_lift(&v);
        let m = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Numerical("projective iteration degenerated".into()));
        }
        lambda = d * lambda + m.ln();
        v = std::array::from_fn(|i| w[i] / m);
        let affine_norm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        let logz = lambda + affine_norm.ln();
        if logz > log_escape {
            escaped = true;
        }
        let g = logz.max(0.0) * d.powi(-(n as i32));
        last_inc = (g - g_prev).abs();
        g_prev = g;
        if last_inc < tol {
            n_used = n;
            break;
        }
    }
    let error_bound = last_inc * d / (d - 1.0);
    // not past the escape radius by the stopping time: bounded verdict,
    // reported as exactly zero
    if escaped {
        Ok(GreenEstimate {
            value: g_prev,
            n_used,
            error_bound,
        })
    } else {
        Ok(GreenEstimate {
            value: 0.0,
            n_used,
            error_bound,
        })
    }
}

#[cfg(test)]
const SNAP_DEFAULT: f64 = 1e-8;

/// Classify a torus point by its sorted moduli. Moduli within `eps_circle`
/// of 1 are treated as exactly 1.
pub fn classify_exact(t: &TorusPoint, eps_circle: f64) -> Result<OrbitClass> {
    let snap = |x: f64| if (x - 1.0).abs() <= eps_circle { 1.0 } else { x };
    let mut m: Vec<f64> = t.coords().iter().map(|c| snap(c.norm())).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    let ones = m.iter().filter(|&&x| x == 1.0).count();
    let above = m.iter().filter(|&&x| x > 1.0).count();
    match (ones, above) {
        (4, _) => Ok(OrbitClass::BoundedK),
        (2, 1) => Ok(OrbitClass::StableMobius),
        (1, 1) => Ok(OrbitClass::StableCircles(Circle::S1)),
        (1, 2) => Ok(OrbitClass::StableCircles(Circle::S2)),
        (0, 1) => Ok(OrbitClass::FatouFixed(FixedPt::P1)),
        (0, 2) => Ok(OrbitClass::FatouFixed(FixedPt::P2)),
        (0, 3) => Ok(OrbitClass::FatouFixed(FixedPt::P3)),
        _ => Err(Error::Internal(format!(
            "modulus pattern {m:?} matches no case"
        ))),
    }
}

/// Chart distance from a projective point to the Mobius strip
/// `{(e^{i t}, x e^{i t/2}, 1, 0) : |x| <= 2}`, plus the magnitude of the
/// fourth homogeneous coordinate. Falls back to the symmetric chart when
/// `z3` vanishes.
pub fn mobius_distance(p: &ProjectivePoint) -> f64 {
    let w = p.coords();
    let extra = w[3].norm();
    let (xi, eta) = if w[2].norm() >= w[0].norm() && w[2].norm() > 1e-14 {
        (w[0] / w[2], w[1] / w[2])
    } else if w[0].norm() > 1e-14 {
        (w[2] / w[0], w[1] / w[0])
    } else {
        return extra + 1e6;
    };
    let objective = |theta: f64| -> f64 {
        let e = C::from_polar(1.0, theta);
        let h = C::from_polar(1.0, theta / 2.0);
        let frame = eta * h.conj();
        let x = frame.re.clamp(-2.0, 2.0);
        ((xi - e).norm_sqr() + (frame.re - x).powi(2) + frame.im.powi(2)).sqrt()
    };
    let n = 512;
    let mut best = (0usize, f64::INFINITY);
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let val = objective(th);
        if val < best.1 {
            best = (k, val);
        }
    }
    let step = 2.0 * PI / n as f64;
    let center = 2.0 * PI * best.0 as f64 / n as f64;
    let (mut lo, mut hi) = (center - step, center + step);
    // golden-section polish
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    objective(0.5 * (lo + hi)).min(best.1) + extra
}

fn circle_distance(u: &[C; 4], which: Circle) -> f64 {
    let (a, b) = match which {
        Circle::S1 => (u[0].norm(), u[1].norm()),
        Circle::S2 => (u[1].norm(), u[2].norm()),
    };
    (1.0 - (a + b).powi(2) / 2.0).max(0.0).sqrt()
}

fn fixed_point_distance(u: &[C; 4], which: FixedPt) -> f64 {
    let keep = match which {
        FixedPt::P1 => 0,
        FixedPt::P2 => 1,
        FixedPt::P3 => 2,
    };
    (1.0 - u[keep].norm_sqr()).max(0.0).sqrt()
}

/// Numeric orbit classification by projective iteration. Convergence to an
/// invariant set is declared after three consecutive iterates within
/// `cfg.eps_converge`; orbits that never pass the escape radius are checked
/// against K. `Unresolved` is a first-class outcome.
pub fn classify_numeric(map: &ChebyshevMapA3, z: [C; 3], budget: u32, cfg: &RunConfig) -> Result<OrbitClass> {
    if budget < 1 {
        return Err(Error::Domain("budget must be >= 1".into()));
    }
    // K first: it is completely invariant and a repeller, so membership is a
    // point test rather than a convergence test
    let looks_r3 = (z[2] - z[0].conj()).norm() <= 1e-9 * (1.0 + z[0].norm())
        && z[1].im.abs() <= 1e-9 * (1.0 + z[1].norm());
    if looks_r3
        && k_status(z[0], z[1].re, cfg.eps_circle)
            .map(|s| s.is_member())
            .unwrap_or(false)
    {
        return Ok(OrbitClass::BoundedK);
    }
    let d = map.degree() as f64;
    let mut v = [z[0], z[1], z[2], C::new(1.0, 0.0)];
    let mut lambda;
    {
        let m = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        lambda = m.max(1e-300).ln();
        if m > 0.0 {
            for c in &mut v {
                *c /= m;
            }
        } else {
            v[3] = C::new(1.0, 0.0);
        }
    }
    let log_escape = cfg.escape_radius.ln();
    let mut escaped = false;
    // streaks: M, S1, S2, P1, P2, P3
    let mut streak = [0u32; 6];
    for _ in 0..budget {
        let w = map.eval_lift(&v);
        let m = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Numerical("projective iteration degenerated".into()));
        }
        lambda = d * lambda + m.ln();
        v = std::array::from_fn(|i| w[i] / m);
        let affine_norm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        if lambda + affine_norm.ln() > log_escape {
            escaped = true;
        }
        if !escaped {
            continue;
        }
        let u = unit4(&v);
        let pp = ProjectivePoint { w: normalize4(v) };
        let dists = [
            mobius_distance(&pp),
            circle_distance(&u, Circle::S1),
            circle_distance(&u, Circle::S2),
            fixed_point_distance(&u, FixedPt::P1),
            fixed_point_distance(&u, FixedPt::P2),
            fixed_point_distance(&u, FixedPt::P3),
        ];
        for (k, dist) in dists.iter().enumerate() {
            if *dist < cfg.eps_converge {
                streak[k] += 1;
                if streak[k] >= 3 {
                    return Ok(match k {
                        0 => OrbitClass::StableMobius,
                        1 => OrbitClass::StableCircles(Circle::S1),
                        2 => OrbitClass::StableCircles(Circle::S2),
                        3 => OrbitClass::FatouFixed(FixedPt::P1),
                        4 => OrbitClass::FatouFixed(FixedPt::P2),
                        _ => OrbitClass::FatouFixed(FixedPt::P3),
                    });
                }
            } else {
                streak[k] = 0;
            }
        }
    }
    Ok(OrbitClass::Unresolved)
}

/// The polynomial skew product at infinity, `(z, w) -> (z^d, h2(z, w, 1))`.
pub fn skew_product(map: &ChebyshevMapA3, z: C, w: C) -> (C, C) {
    let zd = z.powi(map.degree() as i32);
    let h = map.h2().eval([z, w, C::new(1.0, 0.0)]);
    (zd, h)
}

// ---------------------------------------------------------------------------
// alcove cell machinery for periodic points

/// Affine isometry `x -> M x + t` of s-space.
#[derive(Debug, Clone, Copy)]
struct Isometry {
    m: [[f64; 3]; 3],
    t: [f64; 3],
}

impl Isometry {
    fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            t: [0.0; 3],
        }
    }

    fn reflection(k: usize) -> Self {
        if k == 0 {
            return Self {
                m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
                t: [0.0, 0.0, 2.0 * PI],
            };
        }
        let a = SIMPLE_ROOTS[k - 1];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = if i == j { 1.0 } else { 0.0 } - a[i] * a[j];
            }
        }
        Self { m, t: [0.0; 3] }
    }

    fn apply(&self, x: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| {
            self.m[i][0] * x[0] + self.m[i][1] * x[1] + self.m[i][2] * x[2] + self.t[i]
        })
    }

    /// `self ∘ other`.
    fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        let t = self.apply(&other.t);
        Isometry { m, t }
    }
}

fn quantize_key(x: &[f64; 3]) -> (i64, i64, i64) {
    (
        (x[0] * 1e6).round() as i64,
        (x[1] * 1e6).round() as i64,
        (x[2] * 1e6).round() as i64,
    )
}

/// All alcoves contained in `scale * R`, each as the isometry mapping R onto
/// it, discovered by face-adjacency search from the fundamental alcove.
fn enumerate_cells(scale: f64) -> Vec<Isometry> {
    let bary = alcove_barycenter();
    let reflections: [Isometry; 4] = std::array::from_fn(Isometry::reflection);
    let mut seen: HashMap<(i64, i64, i64), ()> = HashMap::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let id = Isometry::identity();
    seen.insert(quantize_key(&bary.s), ());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        out.push(g);
        for refl in &reflections {
            let g2 = g.compose(refl);
            let b = g2.apply(&bary.s);
            let key = quantize_key(&b);
            if seen.contains_key(&key) {
                continue;
            }
            let inside = SCoord::new(b[0] / scale, b[1] / scale, b[2] / scale).in_alcove(1e-9);
            if inside {
                seen.insert(key, ());
                queue.push_back(g2);
            }
        }
    }
    out
}

/// The periodic points of one period on the alcove.
#[derive(Debug, Clone)]
pub struct PeriodicPointSet {
    pub degree: u32,
    pub period: u32,
    pub points: Vec<SCoord>,
    /// `|fold(d^n s) - s|` for each point.
    pub residuals: Vec<f64>,
}

impl PeriodicPointSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Enumerate all `d^(3n)` period-`n` points of the folded multiplication map
/// on the alcove. Each alcove cell of `d^n R` carries one inverse branch, an
/// affine contraction of ratio `d^(-n)`, iterated to its fixed point.
pub fn periodic_points(d: u32, n: u32) -> Result<PeriodicPointSet> {
    if d < 2 || n < 1 {
        return Err(Error::Domain("need d >= 2 and n >= 1".into()));
    }
    let expected = (d as u64).checked_pow(3 * n).filter(|&c| c <= 1_000_000);
    let expected = expected.ok_or_else(|| Error::Domain("d^(3n) exceeds the 1e6 budget".into()))? as usize;
    let scale = (d as f64).powi(n as i32);
    let cells = enumerate_cells(scale);
    if cells.len() != expected {
        return Err(Error::Internal(format!(
            "cell enumeration found {} alcoves, expected {}",
            cells.len(),
            expected
        )));
    }
    let bary = alcove_barycenter();
    let fixed: Result<Vec<SCoord>> = cells
        .par_iter()
        .map(|g| {
            let mut x = bary.s;
            for _ in 0..200 {
                let y = g.apply(&x);
                let next = [y[0] / scale, y[1] / scale, y[2] / scale];
                let delta = (0..3).map(|i| (next[i] - x[i]).powi(2)).sum::<f64>().sqrt();
                x = next;
                if delta < 1e-12 {
                    return Ok(SCoord::new(x[0], x[1], x[2]));
                }
            }
            Err(Error::Numerical("branch contraction did not converge".into()))
        })
        .collect();
    let mut points = fixed?;
    // dedup points that landed on shared faces
    points.sort_by(|a, b| {
        a.s[0]
            .total_cmp(&b.s[0])
            .then(a.s[1].total_cmp(&b.s[1]))
            .then(a.s[2].total_cmp(&b.s[2]))
    });
    let mut dedup: Vec<SCoord> = Vec::with_capacity(points.len());
    'outer: for p in points {
        for q in dedup.iter().rev() {
            if (q.s[0] - p.s[0]).abs() > 1e-8 {
                break;
            }
            if q.dist(&p) < 1e-9 {
                continue 'outer;
            }
        }
        dedup.push(p);
    }
    if dedup.len() != expected {
        return Err(Error::Internal(format!(
            "{} periodic points after dedup, expected {}",
            dedup.len(),
            expected
        )));
    }
    let residuals: Vec<f64> = dedup
        .iter()
        .map(|p| {
            let scaled = p.scale(scale);
            let (f, _) = fold(&scaled).expect("fold of a finite point");
            f.dist(p)
        })
        .collect();
    Ok(PeriodicPointSet {
        degree: d,
        period: n,
        points: dedup,
        residuals,
    })
}

/// Per-cell counts of a periodic point set against the level-`m` subdivision
/// of the alcove, with a chi-square equidistribution statistic.
#[derive(Debug, Clone)]
pub struct EquidistStats {
    pub level: u32,
    pub counts: Vec<u64>,
    pub expected: f64,
    pub chi_square: f64,
    pub dof: u64,
    pub q99: f64,
    pub below_q99: bool,
}

pub fn equidistribution_stats(pts: &PeriodicPointSet, m: u32) -> Result<EquidistStats> {
    if m < 1 || m > pts.period {
        return Err(Error::Domain("need 1 <= m <= n".into()));
    }
    let d = pts.degree;
    let scale = (d as f64).powi(m as i32);
    let cells = enumerate_cells(scale);
    let bary = alcove_barycenter();
    let mut index: HashMap<(i64, i64, i64), usize> = HashMap::new();
    for (i, g) in cells.iter().enumerate() {
        index.insert(quantize_key(&g.apply(&bary.s)), i);
    }
    let mut counts = vec![0u64; cells.len()];
    for p in &pts.points {
        let mut assigned = false;
        // nudge towards the barycenter on retry so wall points resolve
        for nudge in [0.0, 1e-9, 1e-7] {
            let q = [
                p.s[0] + nudge * (bary.s[0] - p.s[0]),
                p.s[1] + nudge * (bary.s[1] - p.s[1]),
                p.s[2] + nudge * (bary.s[2] - p.s[2]),
            ];
            let scaled = [q[0] * scale, q[1] * scale, q[2] * scale];
            let (_, word) = fold(&SCoord::new(scaled[0], scaled[1], scaled[2]))?;
            let key = quantize_key(&word.unfold(&bary).s);
            if let Some(&i) = index.get(&key) {
                counts[i] += 1;
                assigned = true;
                break;
            }
        }
        if !assigned {
            return Err(Error::Internal("periodic point not matched to a cell".into()));
        }
    }
    let expected = pts.points.len() as f64 / cells.len() as f64;
    let chi_square = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = cells.len() as u64 - 1;
    let q99 = ChiSquared::new(dof as f64)
        .map_err(|e| Error::Internal(format!("chi-square dof: {e}")))?
        .inverse_cdf(0.99);
    Ok(EquidistStats {
        level: m,
        counts,
        expected,
        chi_square,
        dof,
        q99,
        below_q99: chi_square < q99,
    })
}

// ---------------------------------------------------------------------------
// maximal-entropy measure

/// The density polynomial at `(z1, q)`: one quarter of the discriminant of
/// the torus quartic, which equals the squared Jacobian determinant of the
/// angle parametrization of the slice. (The full discriminant would give the
/// measure total mass 1/2; the quarter normalization makes it a probability
/// measure, as the squared-Jacobian oracle confirms.)
pub fn d3_value(z1: C, q: f64) -> f64 {
    let a = z1.norm_sqr(); // z1 conj(z1)
    let re2 = 2.0 * (z1 * z1).re; // z1^2 + conj(z1)^2
    let re4 = 2.0 * (z1 * z1 * z1 * z1).re;
    let disc = 256.0 - 27.0 * re4 + re2 * (144.0 * q - 4.0 * q.powi(3) + 18.0 * a * q)
        - 80.0 * a * q * q
        + a * a * q * q
        - 192.0 * a
        - 4.0 * a.powi(3)
        - 6.0 * a * a
        - 128.0 * q * q
        + 16.0 * q.powi(4);
    0.25 * disc
}

/// Density of the maximal-entropy measure at a point of the invariant slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuDensity {
    /// Outside K: density zero.
    Outside,
    /// On the boundary surface, where the density diverges.
    Infinite,
    Finite(f64),
}

const D3_ZERO_TOL: f64 = 1e-9;

/// Evaluate `(3/pi^3) / sqrt(d3)` inside K, zero outside, with a divergence
/// flag on the boundary. A clearly negative `d3` inside K is an error.
pub fn mu_density(z1: C, q: f64, eps_circle: f64) -> Result<MuDensity> {
    let status = k_status(z1, q, eps_circle)?;
    if status == KStatus::Exterior {
        return Ok(MuDensity::Outside);
    }
    let d3 = d3_value(z1, q);
    let scale = 256.0 + z1.norm().powi(6) + q.abs().powi(4) + 1.0;
    if d3 <= D3_ZERO_TOL * scale {
        if d3 < -1e-6 * scale {
            return Err(Error::Numerical(format!("d3 = {d3:.3e} negative inside K")));
        }
        return Ok(MuDensity::Infinite);
    }
    Ok(MuDensity::Finite(3.0 / PI.powi(3) / d3.sqrt()))
}

/// Seeded RNG for a sample index; deterministic regardless of thread count.
pub fn stream_rng(seed: u64, idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx);
    rng
}

/// Coefficients (ascending in `q`) of the quartic `q -> 4 * d3(z1, q)`.
fn d3_q_quartic(z1: C) -> [f64; 5] {
    let a = z1.norm_sqr();
    let re2 = 2.0 * (z1 * z1).re;
    let re4 = 2.0 * (z1 * z1 * z1 * z1).re;
    [
        256.0 - 27.0 * re4 - 192.0 * a - 4.0 * a.powi(3) - 6.0 * a * a,
        re2 * (144.0 + 18.0 * a),
        a * a - 80.0 * a - 128.0,
        -4.0 * re2,
        16.0,
    ]
}

/// Monte Carlo integral of the measure density over K; converges to 1 for
/// the correctly normalized density.
///
/// Each vertical section of K in `q` is the bounded interval between the
/// middle pair of real roots of `d3(q)` (the density vanishes on the fold
/// boundary), and the substitution `q = mid + half * sin(theta)` absorbs the
/// inverse-square-root edge singularity, so the sampled integrand stays
/// bounded and plain Monte Carlo over `(p1, p2, theta)` converges at the
/// normal rate.
pub fn mu_integral_mc(n_samples: u64, seed: u64, eps_circle: f64) -> Result<f64> {
    const BOX2: [[f64; 2]; 2] = [[-4.0, 4.0], [-4.0, 4.0]];
    let area = (BOX2[0][1] - BOX2[0][0]) * (BOX2[1][1] - BOX2[1][0]);
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let p1 = rng.random_range(BOX2[0][0]..BOX2[0][1]);
            let p2 = rng.random_range(BOX2[1][0]..BOX2[1][1]);
            let theta = rng.random_range(-0.5 * PI..0.5 * PI);
            let z1 = C::new(p1, p2);
            let coeffs = d3_q_quartic(z1);
            let croots = match crate::roots::polynomial_roots(&coeffs.map(|x| C::new(x, 0.0))) {
                Ok(r) => r,
                Err(_) => return 0.0,
            };
            let mut real: Vec<f64> = croots
                .iter()
                .filter(|r| r.im.abs() < 1e-7 * (1.0 + r.re.abs()))
                .map(|r| r.re)
                .collect();
            if real.len() != 4 {
                // 0 or 2 real roots: no bounded positive section, line misses K
                return 0.0;
            }
            real.sort_by(f64::total_cmp);
            let (qa, qb) = (real[1], real[2]);
            if qb - qa < 1e-12 {
                return 0.0;
            }
            let mid = 0.5 * (qa + qb);
            if !k_status(z1, mid, eps_circle).map(|s| s.is_member()).unwrap_or(false) {
                return 0.0;
            }
            let half = 0.5 * (qb - qa);
            let q = mid + half * theta.sin();
            let d3 = d3_value(z1, q);
            if d3 <= 0.0 {
                return 0.0;
            }
            // E_theta[pi * f(q) * half * cos(theta)] = integral of f over [qa, qb]
            PI * (3.0 / PI.powi(3) / d3.sqrt()) * half * theta.cos()
        })
        .collect();
    let sum: f64 = values.iter().sum();
    Ok(sum / n_samples as f64 * area)
}

/// Uniform sample of the alcove by barycentric weights.
pub fn sample_alcove(rng: &mut impl Rng) -> SCoord {
    let mut u = [
        rng.random_range(0.0..1.0),
        rng.random_range(0.0..1.0),
        rng.random_range(0.0..1.0),
    ];
    u.sort_by(f64::total_cmp);
    let w = [u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]];
    let mut s = [0.0; 3];
    for (k, v) in ALCOVE_VERTICES.iter().enumerate() {
        for i in 0..3 {
            s[i] += w[k] * v[i];
        }
    }
    SCoord::new(s[0], s[1], s[2])
}

/// Finite-difference complex Jacobian of `f^n` at `z` (columns are the three
/// complex coordinate directions).
pub fn fd_jacobian_iterate(map: &ChebyshevMapA3, z: [C; 3], n: u32, h: f64) -> Result<Vec<Vec<C>>> {
    let f_n = |mut zz: [C; 3]| -> Result<[C; 3]> {
        for _ in 0..n {
            zz = map.eval(zz)?;
        }
        Ok(zz)
    };
    let mut jac = vec![vec![C::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let mut zp = z;
        let mut zm = z;
        zp[j] += C::new(h, 0.0);
        zm[j] -= C::new(h, 0.0);
        let fp = f_n(zp)?;
        let fm = f_n(zm)?;
        for i in 0..3 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Finite-difference complex Jacobian of a single map application.
fn fd_step_jacobian(map: &ChebyshevMapA3, z: [C; 3], h: f64) -> Result<Vec<Vec<C>>> {
    let mut jac = vec![vec![C::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let mut zp = z;
        let mut zm = z;
        zp[j] += C::new(h, 0.0);
        zm[j] -= C::new(h, 0.0);
        let fp = map.eval(zp)?;
        let fm = map.eval(zm)?;
        for i in 0..3 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Lyapunov exponents of the maximal-entropy measure: per-step
/// finite-difference Jacobians accumulated by QR re-orthonormalization along
/// length-`n` orbits from uniform alcove samples. The orbit itself is driven
/// through the folded linear conjugacy so it stays on the invariant set
/// (direct iteration drifts off the repeller in floating point).
/// Descending order.
pub fn lyapunov_estimate(
    map: &ChebyshevMapA3,
    n: u32,
    n_samples: u64,
    seed: u64,
) -> Result<[f64; 3]> {
    let d = map.degree() as f64;
    let per_sample: Result<Vec<[f64; 3]>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut s = sample_alcove(&mut rng);
            let mut q = vec![
                vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
                vec![C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)],
                vec![C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)],
            ];
            let mut sums = [0.0; 3];
            for _ in 0..n {
                let z = phi1_angles(&s_to_angles(&s));
                let jac = fd_step_jacobian(map, z, 1e-6)?;
                let logs = crate::linalg::benettin_step(&jac, &mut q);
                for k in 0..3 {
                    sums[k] += logs[k];
                }
                s = fold(&s.scale(d))?.0;
            }
            Ok(std::array::from_fn(|k| sums[k] / n as f64))
        })
        .collect();
    let per_sample = per_sample?;
    let mut acc = [0.0; 3];
    for v in &per_sample {
        for k in 0..3 {
            acc[k] += v[k];
        }
    }
    Ok(std::array::from_fn(|k| acc[k] / n_samples as f64))
}

/// The two exponents of the skew product at infinity, sampled from the
/// dynamical measure on the Mobius strip (uniform base angle, fiber
/// coordinate `2 cos` of a uniform angle). Orbits are driven through the
/// doubled-angle parametrization so they stay on the strip; per-step
/// finite-difference Jacobians accumulate by QR.
pub fn lyapunov_fiber(d: u32, n: u32, n_samples: u64, seed: u64) -> Result<[f64; 2]> {
    let map = crate::poly::build_map(d)?;
    let per_sample: Result<Vec<[f64; 2]>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut theta = rng.random_range(0.0..2.0 * PI);
            let mut phi = rng.random_range(0.0..PI);
            let h = 1e-6;
            let mut q = vec![
                vec![C::new(1.0, 0.0), C::new(0.0, 0.0)],
                vec![C::new(0.0, 0.0), C::new(1.0, 0.0)],
            ];
            let mut sums = [0.0; 2];
            for _ in 0..n {
                let z = C::from_polar(1.0, theta);
                let w = C::from_polar(1.0, theta / 2.0) * (2.0 * phi.cos());
                let mut jac = vec![vec![C::new(0.0, 0.0); 2]; 2];
                for col in 0..2 {
                    let (zp, wp) = if col == 0 { (z + h, w) } else { (z, w + h) };
                    let (zm, wm) = if col == 0 { (z - h, w) } else { (z, w - h) };
                    let fp = skew_product(&map, zp, wp);
                    let fm = skew_product(&map, zm, wm);
                    jac[0][col] = (fp.0 - fm.0) / (2.0 * h);
                    jac[1][col] = (fp.1 - fm.1) / (2.0 * h);
                }
                let logs = crate::linalg::benettin_step(&jac, &mut q);
                sums[0] += logs[0];
                sums[1] += logs[1];
                theta = (d as f64 * theta).rem_euclid(2.0 * PI);
                phi = (d as f64 * phi).rem_euclid(2.0 * PI);
            }
            Ok([sums[0] / n as f64, sums[1] / n as f64])
        })
        .collect();
    let per_sample = per_sample?;
    let mut acc = [0.0; 2];
    for v in &per_sample {
        acc[0] += v[0];
        acc[1] += v[1];
    }
    Ok([acc[0] / n_samples as f64, acc[1] / n_samples as f64])
}

/// Spectral radius of the analytic Jacobian of `f^n` at an affine point;
/// used to verify that interior periodic points repel.
pub fn jacobian_spectral_radius(map: &ChebyshevMapA3, z: [C; 3], n: u32) -> Result<f64> {
    let mut prod: [[C; 3]; 3] = [
        [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)],
    ];
    let mut zz = z;
    for _ in 0..n {
        let j = map.jacobian(zz);
        prod = crate::linalg::matmul_3x3(&j, &prod);
        zz = map.eval(zz)?;
    }
    Ok(spectral_radius_3x3(&prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_map;
    use crate::torus::AngleTriple;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn projective_normalization_idempotent() {
        let p = ProjectivePoint::new([c(3.0, 4.0), c(-5.0, 0.0), c(0.1, 0.2), c(1.0, 1.0)]).unwrap();
        let again = ProjectivePoint::new(*p.coords()).unwrap();
        for k in 0..4 {
            assert!((p.coords()[k] - again.coords()[k]).norm() < 1e-15);
        }
        let maxmod = p.coords().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!((maxmod - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iterate_fixed_point_and_preimage() {
        let m = build_map(2).unwrap();
        let tr = iterate(&m, [c(4.0, 0.0), c(6.0, 0.0), c(4.0, 0.0)], 5).unwrap();
        assert_eq!(tr.steps.len(), 6);
        for s in &tr.steps {
            let a = s.affine.unwrap();
            assert!((a[0] - c(4.0, 0.0)).norm() < 1e-9);
        }
        let tr = iterate(&m, [c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)], 1).unwrap();
        let a = tr.steps[1].affine.unwrap();
        assert!((a[0] - c(4.0, 0.0)).norm() < 1e-12);
        assert!((a[1] - c(6.0, 0.0)).norm() < 1e-12);
        assert!((a[2] - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn iterate_survives_escape() {
        let m = build_map(2).unwrap();
        let z = phi1_angles(&AngleTriple::new(0.0, 0.0, 0.0));
        let big = [z[0] + c(10.0, 0.0), z[1], z[2]];
        let tr = iterate(&m, big, 40).unwrap();
        // far iterates are at infinity but stay normalized
        let last = tr.steps.last().unwrap();
        let maxmod = last
            .projective
            .coords()
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!((maxmod - 1.0).abs() < 1e-9);
    }

    #[test]
    fn green_zero_on_k() {
        let cfg = RunConfig::default();
        let m = build_map(2).unwrap();
        let t = TorusPoint::new(
            C::from_polar(1.0, 0.7),
            C::from_polar(1.0, 2.1),
            C::from_polar(1.0, -1.3),
        )
        .unwrap();
        let g = green(&m, crate::torus::phi1(&t), &cfg, 1e-9).unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn green_log_r_on_rays() {
        let cfg = RunConfig::default();
        for d in [2u32, 3] {
            let m = build_map(d).unwrap();
            for r in [2.0f64, 3.0, 1.5] {
                let t = TorusPoint::from_reals(r, 1.0, 1.0 / r).unwrap();
                let g = green(&m, crate::torus::phi1(&t), &cfg, 1e-10).unwrap();
                assert!(
                    (g.value - r.ln()).abs() < 1e-6,
                    "d={d} r={r}: {} vs {}",
                    g.value,
                    r.ln()
                );
            }
        }
    }

    #[test]
    fn green_large_norm_asymptotics() {
        let cfg = RunConfig::default();
        let m = build_map(2).unwrap();
        let z = [c(1e6, 0.0), c(0.3e6, 0.2e6), c(-0.4e6, 0.0)];
        let g = green(&m, z, &cfg, 1e-9).unwrap();
        let norm = (z[0].norm_sqr() + z[1].norm_sqr() + z[2].norm_sqr()).sqrt();
        assert!((g.value - norm.ln()).abs() / norm.ln() < 0.01);
    }

    #[test]
    fn green_functional_equation() {
        let cfg = RunConfig::default();
        let m = build_map(3).unwrap();
        let t = TorusPoint::new(c(1.7, 0.3), C::from_polar(1.0, 1.0), c(0.2, -0.1)).unwrap();
        let z = crate::torus::phi1(&t);
        let gz = green(&m, z, &cfg, 1e-11).unwrap().value;
        let gfz = green(&m, m.eval(z).unwrap(), &cfg, 1e-11).unwrap().value;
        assert!((gfz - 3.0 * gz).abs() / gfz.abs() < 1e-6);
    }

    #[test]
    fn classify_exact_cases() {
        let e = |th: f64| C::from_polar(1.0, th);
        let t = TorusPoint::new(e(1.0), e(2.0), e(3.0)).unwrap();
        assert_eq!(classify_exact(&t, SNAP_DEFAULT).unwrap(), OrbitClass::BoundedK);

        let t = TorusPoint::new(c(2.0, 0.0), e(1.0), c(0.5, 0.0)).unwrap();
        assert_eq!(classify_exact(&t, SNAP_DEFAULT).unwrap(), OrbitClass::StableMobius);

        let t = TorusPoint::from_reals(2.0, 2.0, 2.0).unwrap();
        assert_eq!(
            classify_exact(&t, SNAP_DEFAULT).unwrap(),
            OrbitClass::FatouFixed(FixedPt::P3)
        );

        let t = TorusPoint::from_reals(2.0, 2.0, 1.0).unwrap();
        assert_eq!(
            classify_exact(&t, SNAP_DEFAULT).unwrap(),
            OrbitClass::StableCircles(Circle::S2)
        );

        // moduli (3, 1, 0.8, 5/12): one above, one on the circle
        let t = TorusPoint::from_reals(3.0, 1.0, 0.8).unwrap();
        assert_eq!(
            classify_exact(&t, SNAP_DEFAULT).unwrap(),
            OrbitClass::StableCircles(Circle::S1)
        );
    }

    #[test]
    fn skew_product_fiber_chebyshev() {
        let m2 = build_map(2).unwrap();
        let (z, w) = skew_product(&m2, c(1.0, 0.0), c(0.3, 0.0));
        assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        assert!((w - c(0.3 * 0.3 - 2.0, 0.0)).norm() < 1e-12);

        // fiber over 1 acts as the one-variable Chebyshev map
        let m3 = build_map(3).unwrap();
        for phi in [0.3f64, 1.2, 2.9] {
            let w0 = c(2.0 * phi.cos(), 0.0);
            let (_, w1) = skew_product(&m3, c(1.0, 0.0), w0);
            assert!((w1.re - 2.0 * (3.0 * phi).cos()).abs() < 1e-12);
        }

        // the strip is invariant
        let theta = 0.8;
        let (z1, w1) = skew_product(
            &m2,
            C::from_polar(1.0, theta),
            C::from_polar(2.0, theta / 2.0),
        );
        assert!((z1 - C::from_polar(1.0, 2.0 * theta)).norm() < 1e-12);
        assert!((w1 - C::from_polar(2.0, theta)).norm() < 1e-12);
    }

    #[test]
    fn mobius_distance_examples() {
        let p = ProjectivePoint::new([c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(mobius_distance(&p) < 1e-9);
        let p = ProjectivePoint::new([c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(mobius_distance(&p) < 1e-9);
        let p = ProjectivePoint::new([c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((mobius_distance(&p) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classify_numeric_agrees_on_examples() {
        let cfg = RunConfig::default();
        let m = build_map(2).unwrap();

        let t = TorusPoint::new(
            C::from_polar(1.0, 0.4),
            C::from_polar(1.0, 1.9),
            C::from_polar(1.0, -0.6),
        )
        .unwrap();
        let cl = classify_numeric(&m, crate::torus::phi1(&t), 200, &cfg).unwrap();
        assert_eq!(cl, OrbitClass::BoundedK);

        let t = TorusPoint::new(c(3.0, 0.0), C::from_polar(1.0, 1.0), c(1.0 / 3.0, 0.0)).unwrap();
        let cl = classify_numeric(&m, crate::torus::phi1(&t), 200, &cfg).unwrap();
        assert_eq!(cl, OrbitClass::StableMobius);
        assert_eq!(classify_exact(&t, SNAP_DEFAULT).unwrap(), OrbitClass::StableMobius);

        let cl = classify_numeric(&m, [c(1e6, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 200, &cfg).unwrap();
        assert_eq!(cl, OrbitClass::FatouFixed(FixedPt::P1));

        let t = TorusPoint::from_reals(2.0, 2.0, 1.0).unwrap();
        let cl = classify_numeric(&m, crate::torus::phi1(&t), 200, &cfg).unwrap();
        assert_eq!(cl, OrbitClass::StableCircles(Circle::S2));
    }

    #[test]
    fn periodic_point_counts_small() {
        let set = periodic_points(2, 1).unwrap();
        assert_eq!(set.count(), 8);
        assert!(set
            .points
            .iter()
            .any(|p| p.s.iter().all(|&x| x.abs() < 1e-9)));
        for r in &set.residuals {
            assert!(*r < 1e-10);
        }
        let set = periodic_points(3, 1).unwrap();
        assert_eq!(set.count(), 27);
    }

    #[test]
    fn periodic_points_match_brute_force_grid() {
        // independent search: from every coarse grid point, iterate the
        // inverse branch of whatever cell the iterate currently sits in;
        // collect the converged solutions of fold(2 s) = s
        let set = periodic_points(2, 1).unwrap();
        let mut found: Vec<SCoord> = Vec::new();
        let n = 12;
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    let w = [
                        i as f64 / n as f64,
                        j as f64 / n as f64,
                        k as f64 / n as f64,
                    ];
                    if w[0] + w[1] + w[2] > 1.0 {
                        continue;
                    }
                    let mut s = [0.0; 3];
                    let weights = [1.0 - w[0] - w[1] - w[2], w[0], w[1], w[2]];
                    for (vi, v) in ALCOVE_VERTICES.iter().enumerate() {
                        for a in 0..3 {
                            s[a] += weights[vi] * v[a];
                        }
                    }
                    let mut x = SCoord::new(s[0], s[1], s[2]);
                    for _ in 0..120 {
                        let (_, word) = fold(&x.scale(2.0)).unwrap();
                        x = word.unfold(&x).scale(0.5);
                    }
                    if fold(&x.scale(2.0)).unwrap().0.dist(&x) < 1e-9
                        && x.in_alcove(1e-9)
                        && found.iter().all(|q| q.dist(&x) > 1e-6)
                    {
                        found.push(x);
                    }
                }
            }
        }
        assert_eq!(found.len(), 8);
        for q in &found {
            assert!(
                set.points.iter().any(|p| p.dist(q) < 1e-7),
                "brute-force point {:?} missing",
                q
            );
        }
    }

    #[test]
    fn periodic_points_map_into_themselves() {
        let set = periodic_points(2, 2).unwrap();
        for p in &set.points {
            let (img, _) = fold(&p.scale(2.0)).unwrap();
            assert!(
                set.points.iter().any(|q| q.dist(&img) < 1e-8),
                "orbit left the set"
            );
        }
    }

    #[test]
    fn equidistribution_counts_exact_at_one_level_down() {
        let set = periodic_points(2, 2).unwrap();
        let stats = equidistribution_stats(&set, 1).unwrap();
        assert_eq!(stats.counts.len(), 8);
        assert!(stats.below_q99, "chi2 {} q99 {}", stats.chi_square, stats.q99);
        let total: u64 = stats.counts.iter().sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn d3_vanishes_at_vertex_and_matches_sign() {
        assert!(d3_value(c(4.0, 0.0), 6.0).abs() < 1e-9);
        // interior point: positive
        let z = phi1_angles(&AngleTriple::new(0.4, 1.1, 2.0));
        assert!(d3_value(z[0], z[1].re) > 0.0);
    }

    #[test]
    fn mu_density_flags() {
        assert_eq!(
            mu_density(c(4.0, 0.0), 6.0, SNAP_DEFAULT).unwrap(),
            MuDensity::Infinite
        );
        assert_eq!(
            mu_density(c(9.0, 0.0), 0.0, SNAP_DEFAULT).unwrap(),
            MuDensity::Outside
        );
        let z = phi1_angles(&AngleTriple::new(0.4, 1.1, 2.0));
        match mu_density(z[0], z[1].re, SNAP_DEFAULT).unwrap() {
            MuDensity::Finite(v) => assert!(v > 0.0),
            other => panic!("expected finite density, got {other:?}"),
        }
    }

    #[test]
    fn lyapunov_exponents_log_d() {
        let m = build_map(2).unwrap();
        let l = lyapunov_estimate(&m, 100, 100, 0).unwrap();
        for v in l {
            assert!((v - 2f64.ln()).abs() < 0.05 * 2f64.ln(), "exponent {v}");
        }
        let lf = lyapunov_fiber(2, 100, 100, 0).unwrap();
        for v in lf {
            assert!((v - 2f64.ln()).abs() < 0.05 * 2f64.ln(), "fiber exponent {v}");
        }
    }

    #[test]
    fn interior_periodic_points_repel() {
        let set = periodic_points(2, 1).unwrap();
        let bary = alcove_barycenter();
        for p in &set.points {
            // skip points on the alcove boundary
            let strict_interior = SIMPLE_ROOTS
                .iter()
                .all(|r| p.s[0] * r[0] + p.s[1] * r[1] + p.s[2] * r[2] > 1e-3)
                && p.s[2] < PI - 1e-3;
            if !strict_interior {
                continue;
            }
            let z = phi1_angles(&s_to_angles(p));
            let m = build_map(2).unwrap();
            let rho = jacobian_spectral_radius(&m, z, 1).unwrap();
            assert!(rho > 1.0, "spectral radius {rho} at {:?}", p);
            let _ = bary;
        }
    }
}
