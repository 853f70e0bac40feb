//! Float formatting for machine-readable outputs.

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// stripped, scientific notation outside `1e-4 <= |x| < 1e17`.
///
/// Seventeen significant digits always round-trip an `f64` through
/// `str::parse`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = strip_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
