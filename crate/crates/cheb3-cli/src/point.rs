//! Point specifications shared by `classify`, `orbit` and `green`:
//!
//! - `t,re,im,re,im,re,im` — a torus point, mapped through the
//!   parametrization (its exact classification is also available);
//! - `z,z1re,z1im,q,z3re,z3im` — a point of the invariant slice;
//! - `c,re,im,re,im,re,im` — an arbitrary complex triple.

use cheb3::error::{Error, Result};
use cheb3::torus::TorusPoint;
use num_complex::Complex64 as C;

pub fn parse_point(spec: &str) -> Result<([C; 3], Option<TorusPoint>)> {
    let mut parts = spec.split(',').map(str::trim);
    let tag = parts
        .next()
        .ok_or_else(|| Error::Parse("empty point spec".into()))?;
    let nums: Vec<f64> = parts
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {p:?}")))
        })
        .collect::<Result<_>>()?;
    match tag {
        "t" => {
            if nums.len() != 6 {
                return Err(Error::Parse("t rows need 6 numbers".into()));
            }
            let t = TorusPoint::new(
                C::new(nums[0], nums[1]),
                C::new(nums[2], nums[3]),
                C::new(nums[4], nums[5]),
            )?;
            Ok((cheb3::torus::phi1(&t), Some(t)))
        }
        "z" => {
            if nums.len() != 5 {
                return Err(Error::Parse(
                    "z rows need 5 numbers (z1re, z1im, q, z3re, z3im)".into(),
                ));
            }
            let z1 = C::new(nums[0], nums[1]);
            let z3 = C::new(nums[3], nums[4]);
            if (z3 - z1.conj()).norm() > 1e-9 * (1.0 + z1.norm()) {
                return Err(Error::Parse("z rows require z3 = conj(z1)".into()));
            }
            Ok(([z1, C::new(nums[2], 0.0), z3], None))
        }
        "c" => {
            if nums.len() != 6 {
                return Err(Error::Parse("c rows need 6 numbers".into()));
            }
            Ok((
                [
                    C::new(nums[0], nums[1]),
                    C::new(nums[2], nums[3]),
                    C::new(nums[4], nums[5]),
                ],
                None,
            ))
        }
        other => Err(Error::Parse(format!("unknown point tag {other:?}"))),
    }
}
