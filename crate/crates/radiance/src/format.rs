//! `printf("%g")` style number formatting with six significant digits.

use std::fmt::Write;

pub const SIGNIFICANT_DIGITS: usize = 6;

/// Formats `v` the way C's `%g` does: six significant digits, trailing zeros
/// removed, exponent form when the exponent is below -4 or at least 6.
pub fn fmt_g(v: f64) -> String {
    let mut out = String::new();
    push_g(&mut out, v);
    out
}

pub fn push_g(out: &mut String, v: f64) {
    if v == 0.0 {
        out.push('0');
        return;
    }
    if !v.is_finite() {
        let _ = write!(out, "{v}");
        return;
    }
    // Rounding to the target precision first fixes the exponent (9.999995 -> 10).
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        out.push_str(trim_fraction(mantissa));
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        out.push_str(trim_fraction(&format!("{v:.decimals$}")));
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
