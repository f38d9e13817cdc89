//! Text rendering of command outputs (deterministic 17-digit floats).

use cheb3::dynamics::{EquidistStats, OrbitTrace, PeriodicPointSet};
use cheb3::emit::{fmt_complex_json, fmt_f64};
use cheb3::error::Result;
use num_complex::Complex64 as C;

pub fn render_orbit(degree: u32, trace: &OrbitTrace) -> String {
    let mut body = format!("{{\"degree\":{degree},\"steps\":[");
    for (i, step) in trace.steps.iter().enumerate() {
        if i > 0 {
            body.push(',');
        }
        body.push_str("{\"affine\":");
        match &step.affine {
            Some(z) => {
                body.push_str(&format!(
                    "[{},{},{}]",
                    fmt_complex_json(z[0]),
                    fmt_complex_json(z[1]),
                    fmt_complex_json(z[2])
                ));
            }
            None => body.push_str("null"),
        }
        let w = step.projective.coords();
        body.push_str(&format!(
            ",\"projective\":[{},{},{},{}]}}",
            fmt_complex_json(w[0]),
            fmt_complex_json(w[1]),
            fmt_complex_json(w[2]),
            fmt_complex_json(w[3])
        ));
    }
    body.push_str("]}\n");
    body
}

pub fn render_periodic_summary(
    set: &PeriodicPointSet,
    stats: Option<&EquidistStats>,
    exponents: Option<[f64; 3]>,
) -> String {
    let max_resid = set.residuals.iter().cloned().fold(0.0, f64::max);
    let mut body = format!(
        "{{\"degree\":{},\"period\":{},\"count\":{},\"max_residual\":{}",
        set.degree,
        set.period,
        set.count(),
        fmt_f64(max_resid)
    );
    if let Some(l) = exponents {
        body.push_str(&format!(
            ",\"lyapunov\":[{},{},{}]",
            fmt_f64(l[0]),
            fmt_f64(l[1]),
            fmt_f64(l[2])
        ));
    }
    if let Some(s) = stats {
        body.push_str(&format!(
            ",\"level\":{},\"cells\":{},\"expected\":{},\"chi_square\":{},\"q99\":{},\"below_q99\":{},\"counts\":[",
            s.level,
            s.counts.len(),
            fmt_f64(s.expected),
            fmt_f64(s.chi_square),
            fmt_f64(s.q99),
            s.below_q99
        ));
        for (i, c) in s.counts.iter().enumerate() {
            if i > 0 {
                body.push(',');
            }
            body.push_str(&c.to_string());
        }
        body.push(']');
    }
    body.push_str("}\n");
    body
}

/// CSV of points of K sampled through the angle parametrization
/// (`p1, p2, q` columns).
pub fn render_k_samples(n: u64, seed: u64) -> String {
    let mut csv = String::from("p1,p2,q\n");
    for i in 0..n {
        let mut rng = cheb3::dynamics::stream_rng(seed, i.wrapping_add(1 << 32));
        let s = cheb3::dynamics::sample_alcove(&mut rng);
        let z = cheb3::torus::phi1_angles(&cheb3::torus::s_to_angles(&s));
        let p = cheb3::torus::to_p1p2q(&z);
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2])
        ));
    }
    csv
}

pub fn render_ray(kind: &str, alpha: f64, beta: f64, gamma: f64, pts: &[[C; 3]]) -> String {
    let mut body = format!(
        "{{\"kind\":\"{kind}\",\"alpha\":{},\"beta\":{},\"gamma\":{},\"samples\":[",
        fmt_f64(alpha),
        fmt_f64(beta),
        fmt_f64(gamma)
    );
    for (i, z) in pts.iter().enumerate() {
        if i > 0 {
            body.push(',');
        }
        body.push_str(&format!(
            "[{},{},{}]",
            fmt_complex_json(z[0]),
            fmt_complex_json(z[1]),
            fmt_complex_json(z[2])
        ));
    }
    body.push_str("]}\n");
    body
}

/// CSV samples of a critical-value branch: tag, parameters, slice
/// coordinates.
pub fn render_branch_samples(branch: &str, samples: u32) -> Result<String> {
    use cheb3::surfaces::{astroidalhedron_v_bounds, bowl_point, tangent_developable, whisker_point, Sheet};
    use std::f64::consts::PI;
    let mut csv = String::from("branch,u,v,p1,p2,q\n");
    let n = samples.max(2);
    let push = |csv: &mut String, u: f64, v: f64, p: [f64; 3]| {
        csv.push_str(&format!(
            "{branch},{},{},{},{},{}\n",
            fmt_f64(u),
            fmt_f64(v),
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2])
        ));
    };
    match branch {
        "astroidalhedron" => {
            let side = (n as f64).sqrt().ceil() as u32;
            for i in 0..side {
                let u = 2.0 * PI * i as f64 / side as f64;
                let (lo, hi) = astroidalhedron_v_bounds(u);
                for j in 0..side {
                    let v = lo + (hi - lo) * j as f64 / (side - 1).max(1) as f64;
                    push(&mut csv, u, v, tangent_developable(u, v));
                }
            }
        }
        "top-bowl" | "lower-bowl" => {
            let which = if branch == "top-bowl" { Sheet::Top } else { Sheet::Lower };
            let side = (n as f64).sqrt().ceil() as u32;
            for i in 0..side {
                let theta = 2.0 * PI * i as f64 / side as f64;
                for j in 0..side {
                    let r = 1.0 + 3.0 * j as f64 / (side - 1).max(1) as f64;
                    let z = bowl_point(which, theta, r)?;
                    push(&mut csv, theta, r, cheb3::torus::to_p1p2q(&z));
                }
            }
        }
        "top-whiskers" | "lower-whiskers" => {
            let which = if branch == "top-whiskers" { Sheet::Top } else { Sheet::Lower };
            for j in 0..n {
                let r = 1.0 + 4.0 * j as f64 / (n - 1) as f64;
                let z = whisker_point(which, r)?;
                push(&mut csv, 0.0, r, cheb3::torus::to_p1p2q(&z));
            }
        }
        other => {
            return Err(cheb3::error::Error::Domain(format!(
                "unknown branch {other:?}"
            )))
        }
    }
    Ok(csv)
}
