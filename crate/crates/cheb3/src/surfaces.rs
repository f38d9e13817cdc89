//! Parametrized geometry: the astroidalhedron and its tangent developable,
//! the Mobius strip at infinity, external and internal rays, inscribed
//! faces, the ruling correspondence, bowls and whiskers, and mesh export.
//!
//! Real-surface geometry lives in `(p1, p2, q)` coordinates of the invariant
//! slice: `p1 = Re z1`, `p2 = Im z1`, `q = z2`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::dynamics::ProjectivePoint;
use crate::error::{Error, Result};

type C = Complex64;

/// Surface kinds with parametrizations in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Astroidalhedron,
    TangentDevelopable,
    Mobius,
    TopBowl,
    LowerBowl,
    TopWhiskers,
    LowerWhiskers,
}

impl SurfaceKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "astroidalhedron" => Self::Astroidalhedron,
            "developable" | "tangent-developable" => Self::TangentDevelopable,
            "mobius" => Self::Mobius,
            "top-bowl" => Self::TopBowl,
            "lower-bowl" => Self::LowerBowl,
            "top-whiskers" => Self::TopWhiskers,
            "lower-whiskers" => Self::LowerWhiskers,
            other => return Err(Error::Domain(format!("unknown surface kind {other:?}"))),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Astroidalhedron => "astroidalhedron",
            Self::TangentDevelopable => "developable",
            Self::Mobius => "mobius",
            Self::TopBowl => "top-bowl",
            Self::LowerBowl => "lower-bowl",
            Self::TopWhiskers => "top-whiskers",
            Self::LowerWhiskers => "lower-whiskers",
        }
    }
}

/// A parameter rectangle on one of the surface kinds.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePatch {
    pub kind: SurfaceKind,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
}

impl SurfacePatch {
    /// Full natural parameter ranges per kind (`v_cap` bounds the unbounded
    /// directions of the developable, bowls and whiskers).
    pub fn full(kind: SurfaceKind, v_cap: f64) -> Result<Self> {
        if v_cap <= 0.0 {
            return Err(Error::Domain("v_cap must be positive".into()));
        }
        let (u_range, v_range) = match kind {
            SurfaceKind::Astroidalhedron => ((0.0, 2.0 * PI), (0.0, 1.0)),
            SurfaceKind::TangentDevelopable => ((0.0, 2.0 * PI), (-v_cap, v_cap)),
            SurfaceKind::Mobius => ((0.0, 2.0 * PI), (-2.0, 2.0)),
            SurfaceKind::TopBowl | SurfaceKind::LowerBowl => ((0.0, 2.0 * PI), (1.0, v_cap.max(1.0 + 1e-6))),
            SurfaceKind::TopWhiskers | SurfaceKind::LowerWhiskers => {
                ((0.0, 0.0), (1.0, v_cap.max(1.0 + 1e-6)))
            }
        };
        Ok(Self {
            kind,
            u_range,
            v_range,
        })
    }
}

/// The space astroid `(4cos^3 u, 4sin^3 u, 6cos 2u)`.
pub fn astroid(u: f64) -> [f64; 3] {
    [
        4.0 * u.cos().powi(3),
        4.0 * u.sin().powi(3),
        6.0 * (2.0 * u).cos(),
    ]
}

/// Derivative of the astroid; parallel to the ruling direction.
pub fn astroid_tangent(u: f64) -> [f64; 3] {
    [
        -12.0 * u.cos().powi(2) * u.sin(),
        12.0 * u.sin().powi(2) * u.cos(),
        -12.0 * (2.0 * u).sin(),
    ]
}

/// Ruling direction `(cos u, -sin u, 2)`; squared length 5.
pub fn ruling_direction(u: f64) -> [f64; 3] {
    [u.cos(), -u.sin(), 2.0]
}

/// Bounds of the astroidalhedron portion of each ruling.
pub fn astroidalhedron_v_bounds(u: f64) -> (f64, f64) {
    let c2 = (2.0 * u).cos();
    (-2.0 - 2.0 * c2, 2.0 - 2.0 * c2)
}

/// Tangent-developable point `astroid(u) + v * (cos u, -sin u, 2)`, all v.
pub fn tangent_developable(u: f64, v: f64) -> [f64; 3] {
    let base = astroid(u);
    let dir = ruling_direction(u);
    [base[0] + v * dir[0], base[1] + v * dir[1], base[2] + v * dir[2]]
}

/// The bounded portion of the developable forming the surface of K;
/// `v` must lie within the per-ruling bounds.
pub fn astroidalhedron(u: f64, v: f64) -> Result<[f64; 3]> {
    let (lo, hi) = astroidalhedron_v_bounds(u);
    if v < lo - 1e-12 || v > hi + 1e-12 {
        return Err(Error::Domain(format!(
            "v = {v} outside the ruling bounds [{lo}, {hi}]"
        )));
    }
    Ok(tangent_developable(u, v))
}

/// A point of the Mobius strip at infinity, `(e^{i t} : x e^{i t/2} : 1 : 0)`.
pub fn mobius(theta: f64, x: f64) -> Result<ProjectivePoint> {
    if x.abs() > 2.0 + 1e-12 {
        return Err(Error::Domain("strip coordinate |x| <= 2".into()));
    }
    ProjectivePoint::new([
        C::from_polar(1.0, theta),
        C::from_polar(x.abs().max(1e-300), theta / 2.0) * x.signum(),
        C::new(1.0, 0.0),
        C::new(0.0, 0.0),
    ])
}

/// Half-twisted band embedding of the strip in 3-space for mesh export
/// (the strip itself lives in the plane at infinity). The seam respects the
/// identification `(t + 2pi, x) ~ (t, -x)`.
pub fn mobius_embed(theta: f64, x: f64) -> [f64; 3] {
    let r0 = 4.0;
    let half = theta / 2.0;
    [
        (r0 + x * half.cos()) * theta.cos(),
        (r0 + x * half.cos()) * theta.sin(),
        x * half.sin(),
    ]
}

/// A point of the external ray `(a, b, g; r)`: the torus image of
/// `(r e^{ia}, e^{ib}, e^{ig}/r)`.
pub fn external_ray_point(alpha: f64, beta: f64, gamma: f64, r: f64) -> Result<[C; 3]> {
    if r < 1.0 {
        return Err(Error::Domain("external rays need r >= 1".into()));
    }
    let t = crate::torus::TorusPoint::new(
        C::from_polar(r, alpha),
        C::from_polar(1.0, beta),
        C::from_polar(1.0 / r, gamma),
    )?;
    Ok(crate::torus::phi1(&t))
}

/// The landing point of the ray at infinity,
/// `(e^{i(a+g)} : 2cos((a+g)/2 + b) e^{i(a+g)/2} : 1 : 0)` on the strip.
pub fn external_ray_limit(alpha: f64, beta: f64, gamma: f64) -> ProjectivePoint {
    let s = alpha + gamma;
    let x = 2.0 * (s / 2.0 + beta).cos();
    ProjectivePoint::new([
        C::from_polar(1.0, s),
        C::from_polar(1.0, s / 2.0) * x,
        C::new(1.0, 0.0),
        C::new(0.0, 0.0),
    ])
    .expect("strip point is well formed")
}

/// A point of the internal ray obtained by substituting `e^{i t}` for `r` on
/// the invariant-slice ray `(a, b, a)`:
/// `z1 = e^{i(a+t)} + e^{i(a-t)} + e^{ib} + e^{-i(2a+b)}`,
/// `z2 = 4 cos t cos(a+b) + 2 cos 2a`.
pub fn internal_ray_point(alpha: f64, beta: f64, theta: f64) -> [C; 3] {
    let z1 = C::from_polar(1.0, alpha + theta)
        + C::from_polar(1.0, alpha - theta)
        + C::from_polar(1.0, beta)
        + C::from_polar(1.0, -2.0 * alpha - beta);
    let q = 4.0 * theta.cos() * (alpha + beta).cos() + 2.0 * (2.0 * alpha).cos();
    [z1, C::new(q, 0.0), z1.conj()]
}

/// The ruling correspondence: the strip point `(e^{2ia} : 2cos(a+b)e^{ia} : 1 : 0)`
/// and its landing target `z1 = 2e^{ia} + e^{ib} + e^{-i(2a+b)}`,
/// `q = 4cos(a+b) + 2cos 2a` on the astroidalhedron, in `(p1,p2,q)` form.
/// Directions with `a + b = 0 or pi (mod 2pi)` degenerate to whiskers and
/// are rejected.
pub fn ruling_e(alpha: f64, beta: f64) -> Result<(ProjectivePoint, [f64; 3])> {
    let s = (alpha + beta).rem_euclid(2.0 * PI);
    if s.min((s - PI).abs()).min(2.0 * PI - s) < 1e-9 {
        return Err(Error::Domain(
            "a + b = 0 or pi: ruling degenerates to a whisker direction".into(),
        ));
    }
    let source = ProjectivePoint::new([
        C::from_polar(1.0, 2.0 * alpha),
        C::from_polar(1.0, alpha) * (2.0 * (alpha + beta).cos()),
        C::new(1.0, 0.0),
        C::new(0.0, 0.0),
    ])?;
    let z1 = C::from_polar(2.0, alpha)
        + C::from_polar(1.0, beta)
        + C::from_polar(1.0, -2.0 * alpha - beta);
    let q = 4.0 * (alpha + beta).cos() + 2.0 * (2.0 * alpha).cos();
    Ok((source, [z1.re, z1.im, q]))
}

/// Coefficients `(n1, n2, n3, offset)` of the inscribed-face plane
/// `p1 cos c - p2 sin c - q/2 = cos 2c`.
pub fn inscribed_face(c: f64) -> [f64; 4] {
    [c.cos(), -c.sin(), -0.5, (2.0 * c).cos()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayKind {
    External,
    Internal,
}

/// A ray descriptor. External rays are parametrized by `r > 1`; internal
/// rays substitute `e^{i theta}` for `r` on a slice ray (so `gamma = alpha`).
/// The angle identification `(a, b, g) ~ (a, -a-b-g, g)` is respected by
/// [`Ray::same_ray`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub kind: RayKind,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Ray {
    pub fn external(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            kind: RayKind::External,
            alpha,
            beta,
            gamma,
        }
    }

    /// Internal rays live on the invariant slice, which forces `gamma = alpha`.
    pub fn internal(alpha: f64, beta: f64) -> Self {
        Self {
            kind: RayKind::Internal,
            alpha,
            beta,
            gamma: alpha,
        }
    }

    /// Point at ray parameter `r` (external) or angle `theta` (internal).
    pub fn point(&self, param: f64) -> Result<[C; 3]> {
        match self.kind {
            RayKind::External => external_ray_point(self.alpha, self.beta, self.gamma, param),
            RayKind::Internal => Ok(internal_ray_point(self.alpha, self.beta, param)),
        }
    }

    /// Landing point at infinity (external rays only).
    pub fn limit(&self) -> Option<ProjectivePoint> {
        match self.kind {
            RayKind::External => Some(external_ray_limit(self.alpha, self.beta, self.gamma)),
            RayKind::Internal => None,
        }
    }

    /// Same point set: equal angles mod 2pi up to swapping the second angle
    /// with `-a-b-g`.
    pub fn same_ray(&self, other: &Ray) -> bool {
        if self.kind != other.kind {
            return false;
        }
        let eq = |x: f64, y: f64| ((x - y).rem_euclid(2.0 * PI)).min((y - x).rem_euclid(2.0 * PI)) < 1e-12;
        let direct = eq(self.alpha, other.alpha)
            && eq(self.beta, other.beta)
            && eq(self.gamma, other.gamma);
        let swapped = eq(self.alpha, other.alpha)
            && eq(self.beta, -other.alpha - other.beta - other.gamma)
            && eq(self.gamma, other.gamma);
        direct || swapped
    }
}

/// Which bowl.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Top,
    Lower,
}

/// Bowl parametrization; `rho = r^2 + 1/r^2`:
/// top: `z1 = rho e^{-i t} + 2 e^{i t}`, `z2 = 2 rho + 2 cos 2t`;
/// lower: `z1 = rho e^{-i t} - 2 e^{i t}`, `z2 = -2 rho + 2 cos 2t`.
pub fn bowl_point(which: Sheet, theta: f64, r: f64) -> Result<[C; 3]> {
    if r < 1.0 {
        return Err(Error::Domain("bowls are parametrized by r >= 1".into()));
    }
    let rho = r * r + 1.0 / (r * r);
    let e_m = C::from_polar(1.0, -theta);
    let e_p = C::from_polar(1.0, theta);
    let (z1, q) = match which {
        Sheet::Top => (e_m * rho + e_p * 2.0, 2.0 * rho + 2.0 * (2.0 * theta).cos()),
        Sheet::Lower => (e_m * rho - e_p * 2.0, -2.0 * rho + 2.0 * (2.0 * theta).cos()),
    };
    Ok([z1, C::new(q, 0.0), z1.conj()])
}

/// Whisker parametrization;
/// top: `z1 = -2(r^2 + 1/r^2)`, `z2 = r^4 + 1/r^4 + 4`;
/// lower: `z1 = 2i(r^2 + 1/r^2)`, `z2 = -r^4 - 1/r^4 - 4`.
pub fn whisker_point(which: Sheet, r: f64) -> Result<[C; 3]> {
    if r < 1.0 {
        return Err(Error::Domain("whiskers are parametrized by r >= 1".into()));
    }
    let rho = r * r + 1.0 / (r * r);
    let quart = r.powi(4) + r.powi(-4);
    let (z1, q) = match which {
        Sheet::Top => (C::new(-2.0 * rho, 0.0), quart + 4.0),
        Sheet::Lower => (C::new(0.0, 2.0 * rho), -quart - 4.0),
    };
    Ok([z1, C::new(q, 0.0), z1.conj()])
}

/// Distance from a `(p1,p2,q)` point to a ruled kind, computed exactly per
/// ruling (point-to-segment) and minimized over the ruling parameter by a
/// dense scan plus golden-section refinement. Whisker kinds measure distance
/// to the curve.
pub fn surface_distance(p: [f64; 3], kind: SurfaceKind) -> f64 {
    match kind {
        SurfaceKind::Mobius => {
            panic!("the strip lives at infinity; use dynamics::mobius_distance")
        }
        SurfaceKind::TopWhiskers | SurfaceKind::LowerWhiskers => {
            let which = if kind == SurfaceKind::TopWhiskers {
                Sheet::Top
            } else {
                Sheet::Lower
            };
            let f = |r: f64| {
                let z = whisker_point(which, r).unwrap();
                let w = crate::torus::to_p1p2q(&z);
                dist3(&p, &w)
            };
            scan_min(&f, 1.0, 60.0, 4096)
        }
        _ => {
            let f = |u: f64| ruling_distance(&p, u, kind);
            scan_min(&f, 0.0, 2.0 * PI, 2048)
        }
    }
}

const DEVELOPABLE_V_CAP: f64 = 1e7;

fn ruling_distance(p: &[f64; 3], u: f64, kind: SurfaceKind) -> f64 {
    let base = astroid(u);
    let dir = ruling_direction(u);
    let rel = [p[0] - base[0], p[1] - base[1], p[2] - base[2]];
    let v = (rel[0] * dir[0] + rel[1] * dir[1] + rel[2] * dir[2]) / 5.0;
    let (lo, hi) = astroidalhedron_v_bounds(u);
    let v = match kind {
        SurfaceKind::Astroidalhedron => v.clamp(lo, hi),
        SurfaceKind::TangentDevelopable => v.clamp(-DEVELOPABLE_V_CAP, DEVELOPABLE_V_CAP),
        SurfaceKind::TopBowl => v.max(hi),
        SurfaceKind::LowerBowl => v.min(lo),
        _ => unreachable!("handled by surface_distance"),
    };
    let q = tangent_developable(u, v);
    dist3(p, &q)
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Beam rescan refinement: re-sample around up to four separated candidate
/// points per level and shrink. Near the cuspidal curve the distance profile
/// develops several competing valleys (consecutive rulings of a developable
/// intersect on the curve), and a sharp kink valley with a lower floor can
/// sample worse than a smooth neighbour at coarse spacing, so a single-track
/// refinement picks the wrong one.
fn rescan_refine(f: &dyn Fn(f64) -> f64, center: f64, half_width: f64) -> f64 {
    const M: usize = 24;
    const BEAM: usize = 4;
    let mut beam: Vec<f64> = vec![center];
    let mut hw = half_width;
    let mut best = f(center);
    for _ in 0..20 {
        let mut samples: Vec<(f64, f64)> = Vec::with_capacity(beam.len() * (M + 1));
        for &c in &beam {
            for k in 0..=M {
                let x = c - hw + 2.0 * hw * k as f64 / M as f64;
                samples.push((f(x), x));
            }
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        best = best.min(samples[0].0);
        let spacing = 2.0 * hw / M as f64;
        let mut next: Vec<f64> = Vec::with_capacity(BEAM);
        for &(_, x) in &samples {
            if next.iter().all(|&y| (y - x).abs() > 2.0 * spacing) {
                next.push(x);
                if next.len() == BEAM {
                    break;
                }
            }
        }
        beam = next;
        hw = spacing * 1.5;
    }
    best
}

/// Dense scan plus golden-section refinement around every competitive local
/// minimum (the distance-to-ruling profile can have several narrow valleys).
fn scan_min(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let step = (hi - lo) / n as f64;
    let values: Vec<f64> = (0..=n)
        .map(|k| f(lo + (hi - lo) * k as f64 / n as f64))
        .collect();
    let mut best = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut minima: Vec<(f64, usize)> = Vec::new();
    for k in 0..=n {
        let prev = if k == 0 { values[n] } else { values[k - 1] };
        let next = if k == n { values[0] } else { values[k + 1] };
        if values[k] <= prev && values[k] <= next {
            minima.push((values[k], k));
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(val, k) in minima.iter().take(8) {
        if val > best + 4.0 * step * 16.0 {
            break;
        }
        let x = lo + (hi - lo) * k as f64 / n as f64;
        best = best.min(rescan_refine(f, x, 2.0 * step));
    }
    best
}

/// Triangle mesh with optional polyline segments (whisker curves).
#[derive(Debug, Clone, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub segments: Vec<[u32; 2]>,
}

impl Mesh {
    pub fn triangle_area(&self, t: &[u32; 3]) -> f64 {
        let a = self.vertices[t[0] as usize];
        let b = self.vertices[t[1] as usize];
        let c = self.vertices[t[2] as usize];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let cx = u[1] * v[2] - u[2] * v[1];
        let cy = u[2] * v[0] - u[0] * v[2];
        let cz = u[0] * v[1] - u[1] * v[0];
        0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
    }

    /// Map from undirected edge to incident triangle count.
    pub fn edge_incidence(&self) -> std::collections::HashMap<(u32, u32), u32> {
        let mut map = std::collections::HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (a.min(b), a.max(b));
                *map.entry(key).or_insert(0) += 1;
            }
        }
        map
    }

    /// Edges not shared by exactly two triangles.
    pub fn irregular_edges(&self) -> Vec<(u32, u32)> {
        self.edge_incidence()
            .into_iter()
            .filter(|&(_, c)| c != 2)
            .map(|(e, _)| e)
            .collect()
    }
}

const WELD_QUANTUM: f64 = 1e-6;

fn weld_key(p: &[f64; 3]) -> (i64, i64, i64) {
    (
        (p[0] / WELD_QUANTUM).round() as i64,
        (p[1] / WELD_QUANTUM).round() as i64,
        (p[2] / WELD_QUANTUM).round() as i64,
    )
}

/// Sample a patch on a regular `nu x nv` grid and triangulate it. Vertices
/// are welded by position, periodic seams weld by construction, and
/// degenerate triangles (area below 1e-12) are dropped. Whisker kinds
/// produce polylines instead of triangles.
pub fn mesh(patch: &SurfacePatch, nu: u32, nv: u32) -> Result<Mesh> {
    if nu < 2 || nv < 2 {
        return Err(Error::Domain("mesh needs nu >= 2 and nv >= 2".into()));
    }
    let mut out = Mesh::default();
    if matches!(patch.kind, SurfaceKind::TopWhiskers | SurfaceKind::LowerWhiskers) {
        let which = if patch.kind == SurfaceKind::TopWhiskers {
            Sheet::Top
        } else {
            Sheet::Lower
        };
        let (lo, hi) = patch.v_range;
        for k in 0..=nv {
            let r = lo + (hi - lo) * k as f64 / nv as f64;
            let z = whisker_point(which, r.max(1.0))?;
            out.vertices.push(crate::torus::to_p1p2q(&z));
            if k > 0 {
                out.segments.push([k - 1, k]);
            }
        }
        return Ok(out);
    }
    let point = |i: u32, j: u32| -> [f64; 3] {
        let fu = patch.u_range.0 + (patch.u_range.1 - patch.u_range.0) * i as f64 / nu as f64;
        let fv = patch.v_range.0 + (patch.v_range.1 - patch.v_range.0) * j as f64 / nv as f64;
        match patch.kind {
            SurfaceKind::Astroidalhedron => {
                // v normalized to [0,1] across the (constant-width) ruling bounds
                let (lo, hi) = astroidalhedron_v_bounds(fu);
                tangent_developable(fu, lo + (hi - lo) * fv)
            }
            SurfaceKind::TangentDevelopable => tangent_developable(fu, fv),
            SurfaceKind::Mobius => mobius_embed(fu, fv),
            SurfaceKind::TopBowl => {
                let z = bowl_point(Sheet::Top, fu, fv.max(1.0)).unwrap();
                crate::torus::to_p1p2q(&z)
            }
            SurfaceKind::LowerBowl => {
                let z = bowl_point(Sheet::Lower, fu, fv.max(1.0)).unwrap();
                crate::torus::to_p1p2q(&z)
            }
            _ => unreachable!(),
        }
    };
    // closed in u for the full angular range
    let u_periodic = (patch.u_range.1 - patch.u_range.0 - 2.0 * PI).abs() < 1e-12;
    let mobius_seam = u_periodic && patch.kind == SurfaceKind::Mobius;
    let mut weld: std::collections::HashMap<(i64, i64, i64), u32> = Default::default();
    let mut grid_index = vec![vec![0u32; nv as usize + 1]; nu as usize + 1];
    for i in 0..=nu {
        for j in 0..=nv {
            let (ii, jj) = if i == nu && mobius_seam {
                (0, nv - j)
            } else if i == nu && u_periodic {
                (0, j)
            } else {
                (i, j)
            };
            let p = point(ii, jj);
            let key = weld_key(&p);
            let idx = *weld.entry(key).or_insert_with(|| {
                out.vertices.push(p);
                (out.vertices.len() - 1) as u32
            });
            grid_index[i as usize][j as usize] = idx;
        }
    }
    for i in 0..nu as usize {
        for j in 0..nv as usize {
            let a = grid_index[i][j];
            let b = grid_index[i + 1][j];
            let cc = grid_index[i + 1][j + 1];
            let d = grid_index[i][j + 1];
            for t in [[a, b, cc], [a, cc, d]] {
                if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                    continue;
                }
                if out.triangle_area(&t) >= 1e-12 {
                    out.triangles.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// Wavefront OBJ: `v` records, 1-based `f`/`l` records, LF line endings.
pub fn write_obj<W: Write>(mesh: &Mesh, w: &mut W) -> Result<()> {
    for v in &mesh.vertices {
        writeln!(
            w,
            "v {} {} {}",
            crate::emit::fmt_f64(v[0]),
            crate::emit::fmt_f64(v[1]),
            crate::emit::fmt_f64(v[2])
        )?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    for s in &mesh.segments {
        writeln!(w, "l {} {}", s[0] + 1, s[1] + 1)?;
    }
    Ok(())
}

/// ASCII PLY alternative.
pub fn write_ply<W: Write>(mesh: &Mesh, w: &mut W) -> Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", mesh.vertices.len())?;
    writeln!(w, "property double x")?;
    writeln!(w, "property double y")?;
    writeln!(w, "property double z")?;
    writeln!(w, "element face {}", mesh.triangles.len())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "end_header")?;
    for v in &mesh.vertices {
        writeln!(
            w,
            "{} {} {}",
            crate::emit::fmt_f64(v[0]),
            crate::emit::fmt_f64(v[1]),
            crate::emit::fmt_f64(v[2])
        )?;
    }
    for t in &mesh.triangles {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}
