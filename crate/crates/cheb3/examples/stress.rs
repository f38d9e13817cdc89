use cheb3::torus::{phi1, TorusPoint};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for d in 7..=12u32 {
        let map = cheb3::build_map(d).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..2000 {
            let t = TorusPoint::new(
                C::from_polar(rng.random_range(0.7..1.4), rng.random_range(0.0..6.283)),
                C::from_polar(rng.random_range(0.7..1.4), rng.random_range(0.0..6.283)),
                C::from_polar(rng.random_range(0.7..1.4), rng.random_range(0.0..6.283)),
            ).unwrap();
            let lhs = map.eval(phi1(&t)).unwrap();
            let rhs = phi1(&t.powi(d));
            for k in 0..3 {
                worst = worst.max((lhs[k] - rhs[k]).norm() / rhs[k].norm().max(1.0));
            }
        }
        println!("d={d}: semiconjugacy max rel residual {worst:.3e}");
        assert!(worst < 1e-8);
    }
    // fiber Chebyshev identity at degree 5
    let m5 = cheb3::build_map(5).unwrap();
    for phi in [0.2f64, 1.0, 2.3] {
        let w = C::new(2.0 * phi.cos(), 0.0);
        let (_, w5) = cheb3::dynamics::skew_product(&m5, C::new(1.0, 0.0), w);
        assert!((w5.re - 2.0 * (5.0 * phi).cos()).abs() < 1e-11, "{}", w5);
    }
    println!("degree-5 fiber Chebyshev identity ok");
    // boundary inversion round trips
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(100);
    for _ in 0..500 {
        let u: f64 = rng.random_range(0.0..6.283);
        let c2 = rng.random_range(-0.99..0.99f64);
        let v = 2.0 * c2 - 2.0 * (2.0 * u).cos();
        let (lo, hi) = cheb3::surfaces::astroidalhedron_v_bounds(u);
        if v <= lo + 1e-3 || v >= hi - 1e-3 { continue; }
        let p = cheb3::surfaces::tangent_developable(u, v);
        let z = cheb3::torus::from_p1p2q(&p);
        let ang = cheb3::torus::inverse_phi1(z, 1e-8).unwrap();
        let back = cheb3::torus::phi1_angles(&ang);
        for k in 0..3 {
            assert!((back[k] - z[k]).norm() < 1e-8, "boundary round trip {u} {v}");
        }
    }
    println!("boundary inversion round trips ok");
}
