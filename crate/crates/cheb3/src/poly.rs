//! Exact sparse polynomials in `z1, z2, z3` and the Chebyshev endomorphisms
//! of Lie type A3.
//!
//! The degree-`d` map is generated from integer recurrences:
//!
//! - first component: `g1[k] = z1*g1[k-1] - z2*g1[k-2] + z3*g1[k-3] - g1[k-4]`
//!   seeded by `g1[0] = 4`, `g1[1] = z1`, `g1[2] = z1^2 - 2 z2`,
//!   `g1[3] = z1^3 - 3 z1 z2 + 3 z3`;
//! - third component: `g3[k](z1,z2,z3) = g1[k](z3,z2,z1)`;
//! - second component: the order-6 recurrence
//!   `g2[k] = z2 g2[k-1] - (z1 z3 - 1) g2[k-2] + (z1^2 - 2 z2 + z3^2) g2[k-3]
//!    - (z1 z3 - 1) g2[k-4] + z2 g2[k-5] - g2[k-6]`
//!   seeded by `g2[-2] = z2^2 - 2 z1 z3 + 2`, `g2[-1] = z2`, `g2[0] = 6`,
//!   `g2[1] = z2`, `g2[2] = g2[-2]`,
//!   `g2[3] = z2^3 - 3 z1 z2 z3 + 3 z3^2 + 3 z1^2 - 3 z2`.
//!
//! The top-degree homogeneous part is `(z1^d, h2[d], z3^d)` with
//! `h2[d+2] = z2 h2[d+1] - z1 z3 h2[d]`, `h2[1] = z2`, `h2[2] = z2^2 - 2 z1 z3`.
//!
//! Coefficients stay integral, so all arithmetic is done over `BigInt` and
//! equality of maps is coefficient-exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent triple ordered graded-lexicographically (total degree first,
/// then lexicographic in `e1, e2, e3`). This is the canonical term order used
/// for serialization and equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exp(pub [u16; 3]);

impl Exp {
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.0).cmp(&(other.total(), other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in three variables with arbitrary-precision integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exp, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0], c.into());
        p
    }

    /// The variable `z1`, `z2` or `z3` (`var` is 0-based).
    pub fn variable(var: usize) -> Self {
        assert!(var < 3, "variable index out of range");
        let mut e = [0u16; 3];
        e[var] = 1;
        Self::monomial(e, BigInt::from(1))
    }

    pub fn monomial<T: Into<BigInt>>(e: [u16; 3], c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    fn add_term(&mut self, e: [u16; 3], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = Exp(e);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exp::total).max().unwrap_or(0)
    }

    /// Coefficient of an exponent triple (zero if absent).
    pub fn coeff(&self, e: [u16; 3]) -> BigInt {
        self.terms.get(&Exp(e)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in canonical (graded-lexicographic ascending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.0, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.0, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e.0, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea.0[0] + eb.0[0], ea.0[1] + eb.0[1], ea.0[2] + eb.0[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale<T: Into<BigInt>>(&self, k: T) -> Self {
        let k = k.into();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e.0, c * &k);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.total() == deg {
                out.add_term(e.0, c.clone());
            }
        }
        out
    }

    /// Swap the roles of `z1` and `z3`.
    pub fn swap_z1_z3(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term([e.0[2], e.0[1], e.0[0]], c.clone());
        }
        out
    }

    /// Substitute polynomials for the three variables.
    pub fn substitute(&self, subs: [&MultiPoly; 3]) -> Self {
        // power tables per variable, built up to the needed exponent
        let mut pows: [Vec<MultiPoly>; 3] =
            [vec![MultiPoly::constant(1)], vec![MultiPoly::constant(1)], vec![MultiPoly::constant(1)]];
        for v in 0..3 {
            let need = self.terms.keys().map(|e| e.0[v]).max().unwrap_or(0) as usize;
            for k in 1..=need {
                let next = pows[v][k - 1].mul(subs[v]);
                pows[v].push(next);
            }
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let prod = pows[0][e.0[0] as usize]
                .mul(&pows[1][e.0[1] as usize])
                .mul(&pows[2][e.0[2] as usize]);
            out = out.add(&prod.scale(c.clone()));
        }
        out
    }

    /// Partial derivative with respect to variable `var` (0-based).
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < 3);
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.0[var] == 0 {
                continue;
            }
            let mut ne = e.0;
            ne[var] -= 1;
            out.add_term(ne, c * BigInt::from(e.0[var]));
        }
        out
    }

    /// Evaluate at a complex triple by nested sparse Horner recursion.
    pub fn eval(&self, z: [Complex64; 3]) -> Complex64 {
        let terms: Vec<([u16; 3], f64)> = lex_desc_terms(self);
        horner(&terms, 0, &z)
    }

    /// Canonical JSON form: a list of `{"e":[e1,e2,e3],"c":"<int>"}` objects
    /// in graded-lexicographic order.
    pub fn to_json(&self) -> String {
        let mut s = String::from("[");
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "{{\"e\":[{},{},{}],\"c\":\"{}\"}}",
                e.0[0], e.0[1], e.0[2], c
            ));
        }
        s.push(']');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial JSON must be an array".into()))?;
        let mut p = Self::zero();
        for item in arr {
            let e = item
                .get("e")
                .and_then(|e| e.as_array())
                .ok_or_else(|| Error::Parse("term missing \"e\"".into()))?;
            if e.len() != 3 {
                return Err(Error::Parse("exponent triple must have 3 entries".into()));
            }
            let mut exps = [0u16; 3];
            for (k, x) in e.iter().enumerate() {
                exps[k] = x
                    .as_u64()
                    .and_then(|x| u16::try_from(x).ok())
                    .ok_or_else(|| Error::Parse("bad exponent".into()))?;
            }
            let c = item
                .get("c")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Parse("term missing \"c\"".into()))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            p.add_term(exps, c);
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            let names = ["z1", "z2", "z3"];
            let mut wrote = false;
            if a != BigInt::from(1) || e.total() == 0 {
                write!(f, "{a}")?;
                wrote = true;
            }
            for v in 0..3 {
                match e.0[v] {
                    0 => {}
                    1 => {
                        if wrote {
                            write!(f, "*")?;
                        }
                        write!(f, "{}", names[v])?;
                        wrote = true;
                    }
                    k => {
                        if wrote {
                            write!(f, "*")?;
                        }
                        write!(f, "{}^{}", names[v], k)?;
                        wrote = true;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Terms as `(exponents, f64 coefficient)` sorted lexicographically
/// descending, the order consumed by the Horner recursion.
fn lex_desc_terms(p: &MultiPoly) -> Vec<([u16; 3], f64)> {
    let mut v: Vec<([u16; 3], f64)> = p
        .terms
        .iter()
        .map(|(e, c)| (e.0, c.to_f64().expect("coefficient convertible to f64")))
        .collect();
    v.sort_by(|a, b| b.0.cmp(&a.0));
    v
}

/// Nested sparse Horner evaluation over a lex-descending term slice.
fn horner(terms: &[([u16; 3], f64)], var: usize, z: &[Complex64; 3]) -> Complex64 {
    if terms.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    if var == 3 {
        // exponents unique per group at the innermost level
        return Complex64::new(terms[0].1, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev: Option<u16> = None;
    let mut i = 0;
    while i < terms.len() {
        let e = terms[i].0[var];
        let mut j = i;
        while j < terms.len() && terms[j].0[var] == e {
            j += 1;
        }
        if let Some(p) = prev {
            acc *= z[var].powi((p - e) as i32);
        }
        acc += horner(&terms[i..j], var + 1, z);
        prev = Some(e);
        i = j;
    }
    if let Some(p) = prev {
        if p > 0 {
            acc *= z[var].powi(p as i32);
        }
    }
    acc
}

/// Evaluate a homogenized 4-variable term list (used for the projective lift).
pub(crate) fn eval_terms4(terms: &[([u16; 4], f64)], w: &[Complex64; 4]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in terms {
        let mut t = Complex64::new(*c, 0.0);
        for v in 0..4 {
            if e[v] > 0 {
                t *= w[v].powi(e[v] as i32);
            }
        }
        acc += t;
    }
    acc
}

/// The generalized Chebyshev endomorphism of degree `d` on `C^3`
/// (the identity for `d = 1`), together with cached evaluation data.
#[derive(Debug, Clone)]
pub struct ChebyshevMapA3 {
    degree: u32,
    g: [MultiPoly; 3],
    h2: MultiPoly,
    // f64 term lists, lex-descending, for fast evaluation
    eval_terms: [Vec<([u16; 3], f64)>; 3],
    // degree-d homogenization in (z1,z2,z3,z4); fourth component of the lift is z4^d
    lift_terms: [Vec<([u16; 4], f64)>; 3],
    // analytic Jacobian entries d g_i / d z_j
    jac_terms: [[Vec<([u16; 3], f64)>; 3]; 3],
}

fn z(v: usize) -> MultiPoly {
    MultiPoly::variable(v)
}

/// `h2[d]`, the middle component of the top-degree homogeneous part,
/// built from its two-term recurrence.
pub fn h2_recurrence(d: u32) -> MultiPoly {
    assert!(d >= 1);
    let h1 = z(1);
    if d == 1 {
        return h1;
    }
    let h2 = z(1).mul(&z(1)).sub(&z(0).mul(&z(2)).scale(2));
    if d == 2 {
        return h2;
    }
    let z1z3 = z(0).mul(&z(2));
    let (mut a, mut b) = (h1, h2); // h2[k-1], h2[k]
    for _ in 3..=d {
        let next = z(1).mul(&b).sub(&z1z3.mul(&a));
        a = b;
        b = next;
    }
    b
}

fn g1_sequence(d: u32) -> Vec<MultiPoly> {
    // seeds expanded from the j-indexed initial line
    let g0 = MultiPoly::constant(4);
    let g1 = z(0);
    let g2 = z(0).mul(&z(0)).sub(&z(1).scale(2));
    let g3 = z(0).pow(3).sub(&z(0).mul(&z(1)).scale(3)).add(&z(2).scale(3));
    let mut seq = vec![g0, g1, g2, g3];
    for k in 4..=d as usize {
        let next = z(0)
            .mul(&seq[k - 1])
            .sub(&z(1).mul(&seq[k - 2]))
            .add(&z(2).mul(&seq[k - 3]))
            .sub(&seq[k - 4]);
        seq.push(next);
    }
    seq.truncate(d as usize + 1);
    seq
}

fn g2_component(d: u32) -> MultiPoly {
    // indices run from -2; store with offset 2
    let gm2 = z(1)
        .mul(&z(1))
        .sub(&z(0).mul(&z(2)).scale(2))
        .add(&MultiPoly::constant(2));
    let g3 = z(1)
        .pow(3)
        .sub(&z(0).mul(&z(1)).mul(&z(2)).scale(3))
        .add(&z(2).mul(&z(2)).scale(3))
        .add(&z(0).mul(&z(0)).scale(3))
        .sub(&z(1).scale(3));
    let mut seq = vec![
        gm2.clone(),             // g2[-2]
        z(1),                    // g2[-1]
        MultiPoly::constant(6),  // g2[0]
        z(1),                    // g2[1]
        gm2,                     // g2[2]
        g3,                      // g2[3]
    ];
    if d <= 3 {
        return seq[(d + 2) as usize].clone();
    }
    let z1z3m1 = z(0).mul(&z(2)).sub(&MultiPoly::constant(1));
    let mid = z(0)
        .mul(&z(0))
        .sub(&z(1).scale(2))
        .add(&z(2).mul(&z(2)));
    for k in 4..=d {
        let i = (k + 2) as usize;
        let next = z(1)
            .mul(&seq[i - 1])
            .sub(&z1z3m1.mul(&seq[i - 2]))
            .add(&mid.mul(&seq[i - 3]))
            .sub(&z1z3m1.mul(&seq[i - 4]))
            .add(&z(1).mul(&seq[i - 5]))
            .sub(&seq[i - 6]);
        seq.push(next);
    }
    seq.pop().unwrap()
}

fn homogenize(p: &MultiPoly, d: u32) -> Vec<([u16; 4], f64)> {
    p.terms()
        .map(|(e, c)| {
            let pad = (d - e.total()) as u16;
            (
                [e.0[0], e.0[1], e.0[2], pad],
                c.to_f64().expect("coefficient convertible to f64"),
            )
        })
        .collect()
}

impl ChebyshevMapA3 {
    fn from_components(degree: u32, g: [MultiPoly; 3]) -> Self {
        let h2 = h2_recurrence(degree);
        let eval_terms = [
            lex_desc_terms(&g[0]),
            lex_desc_terms(&g[1]),
            lex_desc_terms(&g[2]),
        ];
        let lift_terms = [
            homogenize(&g[0], degree),
            homogenize(&g[1], degree),
            homogenize(&g[2], degree),
        ];
        let jac_terms = std::array::from_fn(|i| std::array::from_fn(|j| lex_desc_terms(&g[i].partial(j))));
        Self {
            degree,
            g,
            h2,
            eval_terms,
            lift_terms,
            jac_terms,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn g1(&self) -> &MultiPoly {
        &self.g[0]
    }

    pub fn g2(&self) -> &MultiPoly {
        &self.g[1]
    }

    pub fn g3(&self) -> &MultiPoly {
        &self.g[2]
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.g
    }

    /// `h2` of the same degree (middle component of the leading part),
    /// from its own recurrence.
    pub fn h2(&self) -> &MultiPoly {
        &self.h2
    }

    /// Top-degree homogeneous part `(z1^d, h2, z3^d)`. The middle part is
    /// extracted from `g2` and cross-checked against the `h2` recurrence.
    pub fn homogeneous_leading(&self) -> Result<[MultiPoly; 3]> {
        let d = self.degree;
        let lead: [MultiPoly; 3] = std::array::from_fn(|i| self.g[i].homogeneous_part(d));
        if lead[1] != self.h2 {
            return Err(Error::Internal(
                "leading part of g2 disagrees with the h2 recurrence".into(),
            ));
        }
        let e1 = MultiPoly::monomial([d as u16, 0, 0], 1);
        let e3 = MultiPoly::monomial([0, 0, d as u16], 1);
        if lead[0] != e1 || lead[2] != e3 {
            return Err(Error::Internal(
                "outer components of the leading part are not pure powers".into(),
            ));
        }
        Ok(lead)
    }

    /// Evaluate the map at a complex triple.
    pub fn eval(&self, zv: [Complex64; 3]) -> Result<[Complex64; 3]> {
        for c in &zv {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::Domain("non-finite evaluation point".into()));
            }
        }
        Ok(self.eval_unchecked(zv))
    }

    pub(crate) fn eval_unchecked(&self, zv: [Complex64; 3]) -> [Complex64; 3] {
        std::array::from_fn(|i| horner(&self.eval_terms[i], 0, &zv))
    }

    /// Evaluate the degree-`d` homogeneous lift on `C^4`
    /// (the fourth component is `w4^d`).
    pub fn eval_lift(&self, w: &[Complex64; 4]) -> [Complex64; 4] {
        [
            eval_terms4(&self.lift_terms[0], w),
            eval_terms4(&self.lift_terms[1], w),
            eval_terms4(&self.lift_terms[2], w),
            w[3].powi(self.degree as i32),
        ]
    }

    /// Analytic Jacobian matrix at a point (row `i`, column `j` is
    /// `d g_i / d z_j`).
    pub fn jacobian(&self, zv: [Complex64; 3]) -> [[Complex64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| horner(&self.jac_terms[i][j], 0, &zv)))
    }

    /// Formal composition `self ∘ other`.
    pub fn compose(&self, other: &ChebyshevMapA3) -> ChebyshevMapA3 {
        let subs = [&other.g[0], &other.g[1], &other.g[2]];
        let g: [MultiPoly; 3] = std::array::from_fn(|i| self.g[i].substitute(subs));
        ChebyshevMapA3::from_components(self.degree * other.degree, g)
    }

    /// Coefficient-exact equality of the three components and the degree.
    pub fn same_map(&self, other: &ChebyshevMapA3) -> bool {
        self.degree == other.degree && self.g == other.g
    }

    /// JSON serialization of the full map in canonical term order.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"degree\":{},\"g1\":{},\"g2\":{},\"g3\":{}}}",
            self.degree,
            self.g[0].to_json(),
            self.g[1].to_json(),
            self.g[2].to_json()
        )
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad map JSON: {e}")))?;
        let degree = v
            .get("degree")
            .and_then(|d| d.as_u64())
            .and_then(|d| u32::try_from(d).ok())
            .ok_or_else(|| Error::Parse("map JSON missing degree".into()))?;
        let mut g = Vec::with_capacity(3);
        for key in ["g1", "g2", "g3"] {
            let comp = v
                .get(key)
                .ok_or_else(|| Error::Parse(format!("map JSON missing {key}")))?;
            g.push(MultiPoly::from_json_value(comp)?);
        }
        let g: [MultiPoly; 3] = g.try_into().unwrap();
        Ok(Self::from_components(degree, g))
    }
}

/// Build (and memoize) the degree-`d` map. `d = 1` yields the identity.
pub fn build_map(d: u32) -> Result<Arc<ChebyshevMapA3>> {
    if d == 0 {
        return Err(Error::Domain("degree must be >= 1".into()));
    }
    if d > 64 {
        return Err(Error::Domain(
            "degree too large; coefficients would exceed exact f64 evaluation range".into(),
        ));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ChebyshevMapA3>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&d) {
        return Ok(m.clone());
    }
    let g1 = g1_sequence(d).pop().unwrap();
    let g3 = g1.swap_z1_z3();
    let g2 = g2_component(d);
    let map = Arc::new(ChebyshevMapA3::from_components(d, [g1, g2, g3]));
    cache.lock().unwrap().insert(d, map.clone());
    Ok(map)
}
