//! Named property suites behind the `verify` command. Each suite runs a
//! batch of randomized or exact identity checks and reports worst-case
//! residuals against fixed thresholds.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::config::RunConfig;
use crate::dynamics::{fd_jacobian_iterate, stream_rng};
use crate::error::{Error, Result};
use crate::poly::build_map;
use crate::surfaces::{surface_distance, SurfaceKind};
use crate::torus::{phi1, phi1_angles, AngleTriple, TorusPoint, NATURAL_DOMAIN_VERTICES};

type C = Complex64;

/// One named check with its worst observed value against a threshold.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub observed: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn below(label: &str, observed: f64, threshold: f64) -> Self {
        Self {
            label: label.to_string(),
            observed,
            threshold,
            passed: observed < threshold,
        }
    }

    fn exact(label: &str, ok: bool) -> Self {
        Self {
            label: label.to_string(),
            observed: if ok { 0.0 } else { 1.0 },
            threshold: 0.5,
            passed: ok,
        }
    }
}

/// A suite outcome.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const SUITES: [&str; 6] = [
    "semiconjugacy",
    "symmetry",
    "jacobian-d3",
    "rays",
    "critical",
    "bridge",
];

/// Run one named suite (or `all`).
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<SuiteReport>> {
    match name {
        "semiconjugacy" => Ok(vec![semiconjugacy(cfg)?]),
        "symmetry" => Ok(vec![symmetry()?]),
        "jacobian-d3" => Ok(vec![jacobian_d3(cfg)?]),
        "rays" => Ok(vec![rays(cfg)?]),
        "critical" => Ok(vec![critical(cfg)?]),
        "bridge" => Ok(vec![bridge()?]),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
        other => Err(Error::Domain(format!("unknown suite {other:?}"))),
    }
}

fn random_torus_point(rng: &mut impl Rng, lo: f64, hi: f64) -> TorusPoint {
    let m = (
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
    );
    TorusPoint::new(
        C::from_polar(m.0, rng.random_range(0.0..2.0 * PI)),
        C::from_polar(m.1, rng.random_range(0.0..2.0 * PI)),
        C::from_polar(m.2, rng.random_range(0.0..2.0 * PI)),
    )
    .expect("moduli are positive")
}

/// Max relative residual of `f(phi1(t)) = phi1(t^d)` over random torus
/// points with moduli in `[0.5, 2]`, degrees 2..6.
pub fn semiconjugacy(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut worst: f64 = 0.0;
    for d in 2..=6u32 {
        let map = build_map(d)?;
        let mut rng = stream_rng(cfg.seed, d as u64);
        for _ in 0..10_000 {
            let t = random_torus_point(&mut rng, 0.5, 2.0);
            let lhs = map.eval(phi1(&t))?;
            let rhs = phi1(&t.powi(d));
            for k in 0..3 {
                let rel = (lhs[k] - rhs[k]).norm() / rhs[k].norm().max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    Ok(SuiteReport {
        name: "semiconjugacy",
        checks: vec![Check::below("max relative residual", worst, 1e-9)],
    })
}

/// Coefficient-exact symmetries: component swap, leading part, regularity
/// witness, and the composition semigroup.
pub fn symmetry() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut swap_ok = true;
    let mut lead_ok = true;
    let mut reg_ok = true;
    for d in 1..=12u32 {
        let m = build_map(d)?;
        swap_ok &= &m.g1().swap_z1_z3() == m.g3();
        lead_ok &= m.homogeneous_leading().is_ok();
        let h = crate::poly::h2_recurrence(d);
        let axis: Vec<_> = h
            .terms()
            .filter(|(e, _)| e.0[0] == 0 && e.0[2] == 0)
            .collect();
        reg_ok &= axis.len() == 1
            && axis[0].0 .0 == [0, d as u16, 0]
            && axis[0].1 == &num_bigint::BigInt::from(1);
    }
    checks.push(Check::exact("g3(z1,z2,z3) = g1(z3,z2,z1), d <= 12", swap_ok));
    checks.push(Check::exact("leading part (z1^d, h2, z3^d), d <= 12", lead_ok));
    checks.push(Check::exact("h2(0, z2, 0) = z2^d, d <= 12", reg_ok));
    let mut semigroup_ok = true;
    for p in 2..=4u32 {
        for q in 2..=4u32 {
            let (a, b, direct) = (build_map(p)?, build_map(q)?, build_map(p * q)?);
            semigroup_ok &= a.compose(&b).same_map(&direct);
        }
    }
    checks.push(Check::exact("compose(p, q) = map(p q), p,q in 2..4", semigroup_ok));
    Ok(SuiteReport {
        name: "symmetry",
        checks,
    })
}

/// Uniform interior sample of the natural domain with a margin away from
/// the boundary (barycentric weights bounded below).
pub fn sample_natural_domain_interior(rng: &mut impl Rng, margin: f64) -> AngleTriple {
    loop {
        let mut w = [
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
        ];
        let total: f64 = w.iter().sum();
        for x in &mut w {
            *x /= total;
        }
        if w.iter().any(|&x| x < margin) {
            continue;
        }
        let mut a = [0.0; 3];
        for (k, v) in NATURAL_DOMAIN_VERTICES.iter().enumerate() {
            for i in 0..3 {
                a[i] += w[k] * v[i];
            }
        }
        return AngleTriple::new(a[0], a[1], a[2]);
    }
}

/// The real coordinates of the slice parametrization as a function of the
/// angles; used by the density Jacobian oracle.
fn p_coords(a: &AngleTriple) -> [f64; 3] {
    crate::torus::to_p1p2q(&phi1_angles(a))
}

/// Fourth-order central finite-difference Jacobian determinant of the map
/// `(alpha, beta, gamma) -> (p1, p2, q)`.
pub fn fd_jacobian_det_angles(a: &AngleTriple, h: f64) -> f64 {
    let mut jac = [[0.0f64; 3]; 3];
    for j in 0..3 {
        let eval = |delta: f64| {
            let mut v = [a.alpha, a.beta, a.gamma];
            v[j] += delta;
            p_coords(&AngleTriple::new(v[0], v[1], v[2]))
        };
        let p2h = eval(2.0 * h);
        let p1h = eval(h);
        let m1h = eval(-h);
        let m2h = eval(-2.0 * h);
        for i in 0..3 {
            jac[i][j] = (-p2h[i] + 8.0 * p1h[i] - 8.0 * m1h[i] + m2h[i]) / (12.0 * h);
        }
    }
    jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1])
        - jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0])
        + jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0])
}

/// The density polynomial equals the squared Jacobian of the slice
/// parametrization at random interior angle triples.
pub fn jacobian_d3(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut rng = stream_rng(cfg.seed, 101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let a = sample_natural_domain_interior(&mut rng, 0.05);
        let z = phi1_angles(&a);
        let d3 = crate::dynamics::d3_value(z[0], z[1].re);
        let det = fd_jacobian_det_angles(&a, 1e-3);
        let rel = (d3 - det * det).abs() / d3.abs().max(det * det);
        worst = worst.max(rel);
    }
    Ok(SuiteReport {
        name: "jacobian-d3",
        checks: vec![Check::below("max relative error d3 vs (det J)^2", worst, 1e-6)],
    })
}

/// Ray functoriality, slice-ray collinearity and landing.
pub fn rays(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    // functoriality f(R(a,b,g; r)) = R(da,db,dg; r^d)
    let mut worst: f64 = 0.0;
    for d in [2u32, 3] {
        let map = build_map(d)?;
        let mut rng = stream_rng(cfg.seed, 200 + d as u64);
        for _ in 0..1000 {
            let (alpha, beta, gamma) = (
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.0..2.0 * PI),
            );
            let r = rng.random_range(1.01..2.2);
            let z = crate::surfaces::external_ray_point(alpha, beta, gamma, r)?;
            let lhs = map.eval(z)?;
            let rhs = crate::surfaces::external_ray_point(
                d as f64 * alpha,
                d as f64 * beta,
                d as f64 * gamma,
                r.powi(d as i32),
            )?;
            for k in 0..3 {
                worst = worst.max((lhs[k] - rhs[k]).norm() / rhs[k].norm().max(1.0));
            }
        }
    }
    checks.push(Check::below("functoriality max relative residual", worst, 1e-9));

    // collinearity of slice rays in (p1, p2, q)
    let mut rng = stream_rng(cfg.seed, 300);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let beta = rng.random_range(0.0..2.0 * PI);
        let pts: Vec<[f64; 3]> = [1.5, 2.0, 3.0]
            .iter()
            .map(|&r| {
                crate::torus::to_p1p2q(
                    &crate::surfaces::external_ray_point(alpha, beta, alpha, r).unwrap(),
                )
            })
            .collect();
        let u = [
            pts[1][0] - pts[0][0],
            pts[1][1] - pts[0][1],
            pts[1][2] - pts[0][2],
        ];
        let v = [
            pts[2][0] - pts[0][0],
            pts[2][1] - pts[0][1],
            pts[2][2] - pts[0][2],
        ];
        let cross = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let num = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        let den = (u[0].powi(2) + u[1].powi(2) + u[2].powi(2)).sqrt()
            * (v[0].powi(2) + v[1].powi(2) + v[2].powi(2)).sqrt();
        worst = worst.max(num / den);
    }
    checks.push(Check::below("slice-ray collinearity (normalized)", worst, 1e-10));

    // landing on the astroidalhedron at r = 1
    let mut rng = stream_rng(cfg.seed, 301);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let beta = rng.random_range(0.0..2.0 * PI);
        let z = crate::surfaces::external_ray_point(alpha, beta, alpha, 1.0)?;
        let d = surface_distance(crate::torus::to_p1p2q(&z), SurfaceKind::Astroidalhedron);
        worst = worst.max(d);
    }
    checks.push(Check::below("landing distance to the surface", worst, 1e-8));
    Ok(SuiteReport {
        name: "rays",
        checks,
    })
}

fn det3c(m: &[Vec<C>]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Critical-locus identities: determinant quotient against the
/// finite-difference oracle, vanishing on branch samples, the no-solution
/// search, and whisker absorption into the second fixed point.
pub fn critical(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let map = build_map(2)?;

    let mut rng = stream_rng(cfg.seed, 400);
    let mut worst: f64 = 0.0;
    let mut n_ok = 0;
    while n_ok < 1000 {
        let t = random_torus_point(&mut rng, 0.6, 1.8);
        if crate::critical::is_critical(&t, 2, 1e-4) {
            continue;
        }
        let dphi = crate::critical::det_dphi1(&t);
        if dphi.norm() < 1e-3 {
            continue;
        }
        n_ok += 1;
        let z = phi1(&t);
        let jac = fd_jacobian_iterate(&map, z, 1, 1e-5)?;
        let fd = det3c(&jac);
        let quotient = crate::critical::det_d_composite(&t, 2) / dphi;
        worst = worst.max((fd - quotient).norm() / quotient.norm().max(1.0));
    }
    checks.push(Check::below("det quotient vs finite differences", worst, 1e-6));

    // branch samples are critical values: |det Df| at a preimage ~ 0
    let mut worst: f64 = 0.0;
    let mut rng = stream_rng(cfg.seed, 401);
    for _ in 0..1000 {
        let kind = rng.random_range(0..3u32);
        let t = match kind {
            0 => {
                // astroidalhedron: all moduli 1 with t1 = -t4
                let a2 = rng.random_range(0.0..2.0 * PI);
                let a3 = rng.random_range(0.0..2.0 * PI);
                let t2 = C::from_polar(1.0, a2);
                let t3 = C::from_polar(1.0, a3);
                TorusPoint::new((-(t2 * t3).inv()).sqrt(), t2, t3).unwrap()
            }
            1 => {
                // bowls: t3 = +-(1/r) e^{i alpha}
                let r = rng.random_range(1.1..2.0);
                let alpha = rng.random_range(0.0..2.0 * PI);
                let sign = if rng.random_range(0..2) == 0 { 0.0 } else { PI };
                let t2 = C::from_polar(r, alpha);
                let t3 = C::from_polar(1.0 / r, alpha + sign);
                TorusPoint::new((-(t2 * t3).inv()).sqrt(), t2, t3).unwrap()
            }
            _ => {
                // whiskers
                let r = rng.random_range(1.1..2.0);
                let (t2, t3) = if rng.random_range(0..2) == 0 {
                    (C::new(0.0, r), C::new(0.0, -r))
                } else {
                    let w = C::from_polar(r, PI / 4.0);
                    (w, w)
                };
                TorusPoint::new((-(t2 * t3).inv()).sqrt(), t2, t3).unwrap()
            }
        };
        let z = phi1(&t);
        let jac = fd_jacobian_iterate(&map, z, 1, 1e-6)?;
        worst = worst.max(det3c(&jac).norm());
    }
    checks.push(Check::below("branch |det Df| at preimages", worst, 1e-3));

    let report = crate::critical::off_branch_search(100_000, cfg.seed, 1e-8);
    checks.push(Check::exact(
        "no off-branch slice solutions (1e5 trials)",
        !report.any_below,
    ));

    // whisker points converge to the second fixed point
    let mut ok = true;
    for which in [crate::surfaces::Sheet::Top, crate::surfaces::Sheet::Lower] {
        for r in [1.15, 1.6, 2.3] {
            let z = crate::surfaces::whisker_point(which, r)?;
            let cl = crate::dynamics::classify_numeric(&map, z, cfg.n_max, cfg)?;
            ok &= cl == crate::dynamics::OrbitClass::FatouFixed(crate::dynamics::FixedPt::P2);
        }
    }
    checks.push(Check::exact("whisker orbits land at P2", ok));
    Ok(SuiteReport {
        name: "critical",
        checks,
    })
}

/// Catastrophe bridge: the degenerate-quartic sheet maps onto the tangent
/// developable, and the bowl rims converge projectively to the strip
/// boundary.
pub fn bridge() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    let (nu, nv) = (256, 64);
    for i in 0..nu {
        let phi = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let gamma = -6.0 + 12.0 * j as f64 / (nv - 1) as f64;
            let z = crate::critical::ps_to_dynamics(crate::critical::q0_beta(phi, gamma), gamma);
            let p = crate::torus::to_p1p2q(&z);
            worst = worst.max(surface_distance(p, SurfaceKind::TangentDevelopable));
        }
    }
    checks.push(Check::below("sheet-to-developable max distance", worst, 1e-6));

    let mut worst: f64 = 0.0;
    for (which, x) in [
        (crate::surfaces::Sheet::Top, 2.0),
        (crate::surfaces::Sheet::Lower, -2.0),
    ] {
        for k in 0..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            let z = crate::surfaces::bowl_point(which, theta, 1e6)?;
            let p = crate::dynamics::ProjectivePoint::from_affine(z);
            let target = crate::surfaces::mobius(-2.0 * theta, x)?;
            worst = worst.max(p.distance(&target));
        }
    }
    checks.push(Check::below("bowl rims to strip boundary (r = 1e6)", worst, 1e-4));
    Ok(SuiteReport {
        name: "bridge",
        checks,
    })
}
