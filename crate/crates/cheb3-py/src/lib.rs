//! Python bindings: the exact maps, torus parametrizations, orbit
//! classification, periodic points, measure density and the surface
//! geometry, with complex numbers passed as `(re, im)` tuples.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use num_complex::Complex64 as C;

type Pair = (f64, f64);

fn to_c(p: Pair) -> C {
    C::new(p.0, p.1)
}

fn from_c(c: C) -> Pair {
    (c.re, c.im)
}

fn to_triple(z: [Pair; 3]) -> [C; 3] {
    [to_c(z[0]), to_c(z[1]), to_c(z[2])]
}

fn from_triple(z: [C; 3]) -> [Pair; 3] {
    [from_c(z[0]), from_c(z[1]), from_c(z[2])]
}

fn err(e: cheb3::Error) -> PyErr {
    match e {
        cheb3::Error::Domain(m) | cheb3::Error::Parse(m) => PyValueError::new_err(m),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// The degree-d Chebyshev endomorphism of type A3.
#[pyclass(name = "ChebMap")]
struct PyChebMap {
    inner: std::sync::Arc<cheb3::ChebyshevMapA3>,
}

#[pymethods]
impl PyChebMap {
    #[new]
    fn new(degree: u32) -> PyResult<Self> {
        Ok(Self {
            inner: cheb3::build_map(degree).map_err(err)?,
        })
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Evaluate at a complex triple of `(re, im)` pairs.
    fn eval(&self, z: [Pair; 3]) -> PyResult<[Pair; 3]> {
        Ok(from_triple(self.inner.eval(to_triple(z)).map_err(err)?))
    }

    /// Formal composition `self o other` (degrees multiply).
    fn compose(&self, other: &PyChebMap) -> PyChebMap {
        PyChebMap {
            inner: std::sync::Arc::new(self.inner.compose(&other.inner)),
        }
    }

    /// Canonical JSON serialization of the exact integer coefficients.
    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("ChebMap(degree={})", self.inner.degree())
    }
}

/// Elementary-symmetric torus parametrization of a triple `(t1, t2, t3)`.
#[pyfunction]
fn phi1(t: [Pair; 3]) -> PyResult<[Pair; 3]> {
    let tp = cheb3::TorusPoint::new(to_c(t[0]), to_c(t[1]), to_c(t[2])).map_err(err)?;
    Ok(from_triple(cheb3::torus::phi1(&tp)))
}

/// Invert the parametrization on K: angle triple of a slice point.
#[pyfunction]
fn inverse_phi1(z1: Pair, q: f64) -> PyResult<(f64, f64, f64)> {
    let z1 = to_c(z1);
    let a = cheb3::torus::inverse_phi1([z1, C::new(q, 0.0), z1.conj()], 1e-8).map_err(err)?;
    Ok((a.alpha, a.beta, a.gamma))
}

/// Membership of a slice point in the bounded-orbit set.
#[pyfunction]
fn k_membership(z1: Pair, q: f64) -> bool {
    cheb3::torus::k_membership(to_c(z1), q)
}

/// Three-valued membership: "interior", "boundary" or "exterior".
#[pyfunction]
fn k_status(z1: Pair, q: f64) -> PyResult<&'static str> {
    Ok(match cheb3::torus::k_status(to_c(z1), q, 1e-8).map_err(err)? {
        cheb3::KStatus::Interior => "interior",
        cheb3::KStatus::Boundary => "boundary",
        cheb3::KStatus::Exterior => "exterior",
    })
}

/// Fold an s-space point into the fundamental alcove; returns the
/// representative and the reflection word.
#[pyfunction]
fn fold(s: (f64, f64, f64)) -> PyResult<((f64, f64, f64), Vec<u32>)> {
    let (folded, word) = cheb3::torus::fold(&cheb3::SCoord::new(s.0, s.1, s.2)).map_err(err)?;
    Ok((
        (folded.s[0], folded.s[1], folded.s[2]),
        word.0.iter().map(|&k| k as u32).collect(),
    ))
}

/// Exact orbit classification of a torus point by its moduli pattern.
#[pyfunction]
fn classify_exact(t: [Pair; 3]) -> PyResult<String> {
    let tp = cheb3::TorusPoint::new(to_c(t[0]), to_c(t[1]), to_c(t[2])).map_err(err)?;
    Ok(cheb3::dynamics::classify_exact(&tp, 1e-8)
        .map_err(err)?
        .label()
        .to_string())
}

/// Numeric orbit classification of a complex triple.
#[pyfunction]
#[pyo3(signature = (degree, z, budget = 200))]
fn classify_numeric(degree: u32, z: [Pair; 3], budget: u32) -> PyResult<String> {
    let map = cheb3::build_map(degree).map_err(err)?;
    let cfg = cheb3::config::RunConfig::default();
    Ok(cheb3::dynamics::classify_numeric(&map, to_triple(z), budget, &cfg)
        .map_err(err)?
        .label()
        .to_string())
}

/// Green function estimate `(value, n_used, error_bound)`.
#[pyfunction]
#[pyo3(signature = (degree, z, tol = 1e-9))]
fn green(degree: u32, z: [Pair; 3], tol: f64) -> PyResult<(f64, u32, f64)> {
    let map = cheb3::build_map(degree).map_err(err)?;
    let cfg = cheb3::config::RunConfig::default();
    let g = cheb3::dynamics::green(&map, to_triple(z), &cfg, tol).map_err(err)?;
    Ok((g.value, g.n_used, g.error_bound))
}

/// All `d^(3n)` period-n points on the alcove as `(s1, s2, s3)` triples.
#[pyfunction]
fn periodic_points(degree: u32, period: u32) -> PyResult<Vec<(f64, f64, f64)>> {
    let set = cheb3::dynamics::periodic_points(degree, period).map_err(err)?;
    Ok(set
        .points
        .iter()
        .map(|p| (p.s[0], p.s[1], p.s[2]))
        .collect())
}

/// Density of the maximal-entropy measure at a slice point
/// (0 outside K, `inf` on the boundary surface).
#[pyfunction]
fn mu_density(z1: Pair, q: f64) -> PyResult<f64> {
    Ok(match cheb3::dynamics::mu_density(to_c(z1), q, 1e-8).map_err(err)? {
        cheb3::dynamics::MuDensity::Outside => 0.0,
        cheb3::dynamics::MuDensity::Infinite => f64::INFINITY,
        cheb3::dynamics::MuDensity::Finite(v) => v,
    })
}

/// The density polynomial (quarter quartic discriminant).
#[pyfunction]
fn d3(z1: Pair, q: f64) -> f64 {
    cheb3::dynamics::d3_value(to_c(z1), q)
}

/// Monte Carlo mass of the measure density over K (converges to 1).
#[pyfunction]
#[pyo3(signature = (samples = 100_000, seed = 0))]
fn mu_integral(samples: u64, seed: u64) -> PyResult<f64> {
    cheb3::dynamics::mu_integral_mc(samples, seed, 1e-8).map_err(err)
}

/// Lyapunov exponents (descending) of the maximal-entropy measure.
#[pyfunction]
#[pyo3(signature = (degree, n = 100, samples = 100, seed = 0))]
fn lyapunov(degree: u32, n: u32, samples: u64, seed: u64) -> PyResult<(f64, f64, f64)> {
    let map = cheb3::build_map(degree).map_err(err)?;
    let l = cheb3::dynamics::lyapunov_estimate(&map, n, samples, seed).map_err(err)?;
    Ok((l[0], l[1], l[2]))
}

/// A point of the external ray `(alpha, beta, gamma; r)`.
#[pyfunction]
fn external_ray_point(alpha: f64, beta: f64, gamma: f64, r: f64) -> PyResult<[Pair; 3]> {
    Ok(from_triple(
        cheb3::surfaces::external_ray_point(alpha, beta, gamma, r).map_err(err)?,
    ))
}

/// A point of the internal ray of `(alpha, beta, alpha)` at angle `theta`.
#[pyfunction]
fn internal_ray_point(alpha: f64, beta: f64, theta: f64) -> [Pair; 3] {
    from_triple(cheb3::surfaces::internal_ray_point(alpha, beta, theta))
}

/// Point of the bounded critical-value surface.
#[pyfunction]
fn astroidalhedron(u: f64, v: f64) -> PyResult<(f64, f64, f64)> {
    let p = cheb3::surfaces::astroidalhedron(u, v).map_err(err)?;
    Ok((p[0], p[1], p[2]))
}

/// Point of the full tangent developable.
#[pyfunction]
fn tangent_developable(u: f64, v: f64) -> (f64, f64, f64) {
    let p = cheb3::surfaces::tangent_developable(u, v);
    (p[0], p[1], p[2])
}

/// Distance from a `(p1, p2, q)` point to a named surface kind.
#[pyfunction]
fn surface_distance(p: (f64, f64, f64), kind: &str) -> PyResult<f64> {
    let kind = cheb3::surfaces::SurfaceKind::parse(kind).map_err(err)?;
    if kind == cheb3::surfaces::SurfaceKind::Mobius {
        return Err(PyValueError::new_err(
            "the strip lives at infinity; use mobius_distance",
        ));
    }
    Ok(cheb3::surfaces::surface_distance([p.0, p.1, p.2], kind))
}

/// Chart distance from a projective point (four `(re, im)` pairs) to the
/// Mobius strip at infinity.
#[pyfunction]
fn mobius_distance(w: [Pair; 4]) -> PyResult<f64> {
    let p = cheb3::dynamics::ProjectivePoint::new([
        to_c(w[0]),
        to_c(w[1]),
        to_c(w[2]),
        to_c(w[3]),
    ])
    .map_err(err)?;
    Ok(cheb3::dynamics::mobius_distance(&p))
}

/// Triangulate a surface patch and return the OBJ text.
#[pyfunction]
#[pyo3(signature = (kind, nu = 64, nv = 16, v_cap = 6.0))]
fn mesh_obj(kind: &str, nu: u32, nv: u32, v_cap: f64) -> PyResult<String> {
    let kind = cheb3::surfaces::SurfaceKind::parse(kind).map_err(err)?;
    let patch = cheb3::surfaces::SurfacePatch::full(kind, v_cap).map_err(err)?;
    let mesh = cheb3::surfaces::mesh(&patch, nu, nv).map_err(err)?;
    let mut buf = Vec::new();
    cheb3::surfaces::write_obj(&mesh, &mut buf).map_err(err)?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

#[pymodule]
fn cheb3_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChebMap>()?;
    m.add_function(wrap_pyfunction!(phi1, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_phi1, m)?)?;
    m.add_function(wrap_pyfunction!(k_membership, m)?)?;
    m.add_function(wrap_pyfunction!(k_status, m)?)?;
    m.add_function(wrap_pyfunction!(fold, m)?)?;
    m.add_function(wrap_pyfunction!(classify_exact, m)?)?;
    m.add_function(wrap_pyfunction!(classify_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(green, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_points, m)?)?;
    m.add_function(wrap_pyfunction!(mu_density, m)?)?;
    m.add_function(wrap_pyfunction!(d3, m)?)?;
    m.add_function(wrap_pyfunction!(mu_integral, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(external_ray_point, m)?)?;
    m.add_function(wrap_pyfunction!(internal_ray_point, m)?)?;
    m.add_function(wrap_pyfunction!(astroidalhedron, m)?)?;
    m.add_function(wrap_pyfunction!(tangent_developable, m)?)?;
    m.add_function(wrap_pyfunction!(surface_distance, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_distance, m)?)?;
    m.add_function(wrap_pyfunction!(mesh_obj, m)?)?;
    Ok(())
}
