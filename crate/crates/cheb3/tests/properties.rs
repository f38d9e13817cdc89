//! Cross-module property checks that do not fit a single module's unit
//! tests: the square-root-level intertwining with arbitrary branches, slice
//! invariance, internal-ray sweeps, the bowls-extend-the-surface identity,
//! and classification concordance on constructed mixed patterns.

use std::f64::consts::PI;

use cheb3::config::RunConfig;
use cheb3::dynamics::{
    classify_exact, classify_numeric, equidistribution_stats, periodic_points, stream_rng,
    OrbitClass,
};
use cheb3::poly::build_map;
use cheb3::surfaces::{
    bowl_point, internal_ray_point, surface_distance, tangent_developable, Sheet, SurfaceKind,
};
use cheb3::torus::{phi1_angles, to_p1p2q, AngleTriple, TorusPoint};
use num_complex::Complex64 as C;
use rand::Rng;

/// The leading homogeneous part intertwines the square-root parametrization
/// with coordinatewise powers, for either branch of each square root.
#[test]
fn phi2_intertwines_leading_part() {
    let mut rng = stream_rng(11, 0);
    for d in [2u32, 3, 4] {
        let map = build_map(d).unwrap();
        let lead = map.homogeneous_leading().unwrap();
        for _ in 0..200 {
            let t: [C; 3] = std::array::from_fn(|_| {
                C::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI))
            });
            // arbitrary square-root branches
            let sq: [C; 3] = std::array::from_fn(|k| {
                let s = t[k].sqrt();
                if rng.random_range(0..2) == 0 {
                    s
                } else {
                    -s
                }
            });
            let below = cheb3::torus::phi2(sq[0], sq[1], sq[2]).unwrap();
            let lhs: [C; 3] = std::array::from_fn(|k| lead[k].eval(below));
            let sqd: [C; 3] = std::array::from_fn(|k| sq[k].powi(d as i32));
            let rhs = cheb3::torus::phi2(sqd[0], sqd[1], sqd[2]).unwrap();
            for k in 0..3 {
                let denom = rhs[k].norm().max(1.0);
                assert!(
                    (lhs[k] - rhs[k]).norm() / denom < 1e-12,
                    "d={d}, component {k}: {} vs {}",
                    lhs[k],
                    rhs[k]
                );
            }
        }
    }
}

/// The real slice `z3 = conj(z1), z2 real` is invariant under every map.
#[test]
fn slice_invariance() {
    let mut rng = stream_rng(12, 0);
    for d in [2u32, 3, 5] {
        let map = build_map(d).unwrap();
        for _ in 0..300 {
            let z1 = C::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let q = rng.random_range(-5.0..5.0);
            let z = [z1, C::new(q, 0.0), z1.conj()];
            let w = map.eval(z).unwrap();
            assert!((w[2] - w[0].conj()).norm() < 1e-12 * (1.0 + w[0].norm()));
            assert!(w[1].im.abs() < 1e-12 * (1.0 + w[1].norm()));
        }
    }
}

/// Internal rays with fixed second angle sweep exactly the image of the
/// corresponding angle slice: two-sided sampled inclusion.
#[test]
fn internal_rays_sweep_the_beta_slice() {
    let beta = 0.85;
    // one direction: every internal-ray point is an angle-slice image
    for i in 0..48 {
        let alpha = 2.0 * PI * i as f64 / 48.0;
        for j in 0..24 {
            let theta = 2.0 * PI * j as f64 / 24.0;
            let p = internal_ray_point(alpha, beta, theta);
            let q = phi1_angles(&AngleTriple::new(alpha + theta, beta, alpha - theta));
            for k in 0..3 {
                assert!((p[k] - q[k]).norm() < 1e-12);
            }
        }
    }
    // converse: every slice image point lies on some internal ray
    for i in 0..48 {
        let a = -PI + 2.0 * PI * i as f64 / 48.0;
        for j in 0..24 {
            let g = -PI + 2.0 * PI * j as f64 / 24.0;
            let q = phi1_angles(&AngleTriple::new(a, beta, g));
            let p = internal_ray_point(0.5 * (a + g), beta, 0.5 * (a - g));
            for k in 0..3 {
                assert!((p[k] - q[k]).norm() < 1e-12);
            }
        }
    }
    // and a sampled mutual-inclusion check at the stated tolerance
    let mut rays: Vec<[f64; 3]> = Vec::new();
    for i in 0..64 {
        for j in 0..32 {
            let alpha = 2.0 * PI * i as f64 / 64.0;
            let theta = 2.0 * PI * j as f64 / 32.0;
            rays.push(to_p1p2q(&internal_ray_point(alpha, beta, theta)));
        }
    }
    let mut slice: Vec<[f64; 3]> = Vec::new();
    for i in 0..64 {
        for j in 0..32 {
            let a = -PI + 2.0 * PI * i as f64 / 64.0;
            let g = -PI + 2.0 * PI * j as f64 / 32.0;
            slice.push(to_p1p2q(&phi1_angles(&AngleTriple::new(a, beta, g))));
        }
    }
    let nearest = |p: &[f64; 3], set: &[[f64; 3]]| {
        set.iter()
            .map(|q| {
                ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    };
    // grids are offset, so inclusion holds up to the grid spacing
    for p in rays.iter().step_by(41) {
        assert!(nearest(p, &slice) < 0.4);
    }
    for p in slice.iter().step_by(41) {
        assert!(nearest(p, &rays) < 0.4);
    }
}

/// Sampled bowls and astroidalhedron jointly cover the sampled developable:
/// matched-grid distances stay below 1e-6 in both directions.
#[test]
fn bowls_and_surface_make_the_developable() {
    // union pieces land on the developable
    for k in 0..48 {
        let u = 2.0 * PI * k as f64 / 48.0;
        for frac in [0.1, 0.5, 0.9] {
            let (lo, hi) = cheb3::surfaces::astroidalhedron_v_bounds(u);
            let p = tangent_developable(u, lo + (hi - lo) * frac);
            assert!(surface_distance(p, SurfaceKind::TangentDevelopable) < 1e-6);
        }
        for r in [1.0, 1.3, 2.0] {
            for which in [Sheet::Top, Sheet::Lower] {
                let z = bowl_point(which, u, r).unwrap();
                let p = to_p1p2q(&z);
                assert!(surface_distance(p, SurfaceKind::TangentDevelopable) < 1e-6);
            }
        }
    }
    // developable samples are covered by the union
    for k in 0..48 {
        let u = 2.0 * PI * k as f64 / 48.0 + 0.01;
        let (lo, hi) = cheb3::surfaces::astroidalhedron_v_bounds(u);
        for v in [
            lo - 7.0,
            lo - 1.0,
            lo + 0.3 * (hi - lo),
            lo + 0.8 * (hi - lo),
            hi + 1.0,
            hi + 7.0,
        ] {
            let p = tangent_developable(u, v);
            let d = surface_distance(p, SurfaceKind::Astroidalhedron)
                .min(surface_distance(p, SurfaceKind::TopBowl))
                .min(surface_distance(p, SurfaceKind::LowerBowl));
            assert!(d < 1e-6, "u={u} v={v}: union misses by {d}");
        }
    }
}

/// Exact and numeric classification agree on constructed representatives of
/// every class, not only the generic Fatou samples.
#[test]
fn classification_concordance_mixed_patterns() {
    let cfg = RunConfig::default();
    let map = build_map(2).unwrap();
    let mut rng = stream_rng(13, 0);
    let mut checked = 0;
    for _ in 0..300 {
        let kind = rng.random_range(0..4u32);
        let ang = || C::from_polar(1.0, 0.0);
        let _ = ang;
        let t = match kind {
            0 => {
                // bounded: all on the torus
                TorusPoint::new(
                    C::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                )
                .unwrap()
            }
            1 => {
                // strip-stable: moduli (r, 1, 1/r)
                let r = rng.random_range(1.3..3.0);
                TorusPoint::new(
                    C::from_polar(r, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(1.0 / r, rng.random_range(0.0..2.0 * PI)),
                )
                .unwrap()
            }
            2 => {
                // circle-stable: moduli (r1, r2, 1) with r1 >= r2 > 1
                let r1 = rng.random_range(1.5..3.0);
                let r2 = rng.random_range(1.3..r1);
                TorusPoint::new(
                    C::from_polar(r1, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(r2, rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
                )
                .unwrap()
            }
            _ => {
                // Fatou: all moduli well off the circle
                let m = |rng: &mut rand_chacha::ChaCha8Rng| {
                    if rng.random_range(0..2) == 0 {
                        rng.random_range(0.3..0.8)
                    } else {
                        rng.random_range(1.25..2.5)
                    }
                };
                TorusPoint::new(
                    C::from_polar(m(&mut rng), rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(m(&mut rng), rng.random_range(0.0..2.0 * PI)),
                    C::from_polar(m(&mut rng), rng.random_range(0.0..2.0 * PI)),
                )
                .unwrap()
            }
        };
        // skip patterns that land too close to the unit circle to be fair
        // to the exact classifier's snapping
        if kind != 0
            && t.coords()
                .iter()
                .any(|c| (c.norm() - 1.0).abs() < 0.1 && (c.norm() - 1.0).abs() > 1e-12)
        {
            continue;
        }
        checked += 1;
        let exact = classify_exact(&t, cfg.eps_circle).unwrap();
        let numeric = classify_numeric(&map, cheb3::torus::phi1(&t), cfg.n_max, &cfg).unwrap();
        assert!(
            numeric == exact || numeric == OrbitClass::Unresolved,
            "contradiction: exact {:?} vs numeric {:?} for {:?}",
            exact,
            numeric,
            t
        );
        assert_ne!(numeric, OrbitClass::Unresolved, "unresolved for {:?}", t);
    }
    assert!(checked > 200);
}

/// Level-1 statistics of the period-4 points: eight cells, 512 expected in
/// each, chi-square far below the 99% quantile.
#[test]
fn equidistribution_deeper_level() {
    let set = periodic_points(2, 4).unwrap();
    assert_eq!(set.count(), 4096);
    let stats = equidistribution_stats(&set, 1).unwrap();
    assert_eq!(stats.counts.len(), 8);
    assert!((stats.expected - 512.0).abs() < 1e-9);
    assert!(stats.below_q99);
    // the map permutes the period-4 set
    for p in set.points.iter().step_by(17) {
        let (img, _) = cheb3::torus::fold(&p.scale(2.0)).unwrap();
        assert!(set.points.iter().any(|q| q.dist(&img) < 1e-8));
    }
}

/// Periodic points transported to the ambient space are honest fixed points
/// of the iterated map, and interior ones repel.
#[test]
fn periodic_points_are_map_periodic() {
    let d = 2u32;
    let n = 2u32;
    let map = build_map(d).unwrap();
    let set = periodic_points(d, n).unwrap();
    for p in set.points.iter().step_by(3) {
        let z = phi1_angles(&cheb3::torus::s_to_angles(p));
        let mut w = z;
        for _ in 0..n {
            w = map.eval(w).unwrap();
        }
        let resid = (0..3).map(|k| (w[k] - z[k]).norm()).fold(0.0, f64::max);
        assert!(resid < 1e-8, "orbit residual {resid}");
    }
}
