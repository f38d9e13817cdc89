//! Deterministic text output helpers. All floating-point values are printed
//! with 17 significant digits so identical runs diff byte-for-byte.

use num_complex::Complex64;

/// 17 significant digits, scientific notation. Round-trips to the same f64.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0 so output does not depend on sign tricks
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

/// `re,im` pair for CSV columns.
pub fn fmt_complex_csv(z: Complex64) -> String {
    format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
}

/// JSON array `[re, im]`.
pub fn fmt_complex_json(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// JSON array of f64.
pub fn fmt_f64_array(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", body.join(","))
}

/// Minimal JSON string escaping for ASCII labels.
pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
