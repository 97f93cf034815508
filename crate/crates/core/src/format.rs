//! Fixed-format numeric output shared by the CSV writers and the CLI.

/// Formats `x` in plain decimal notation with nine significant digits.
///
/// No exponent notation and no locale: `0.3112781245` becomes
/// `0.311278124`, `2.0` becomes `2.00000000`. Non-finite values print as
/// `nan`, `inf` and `-inf`.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", (DIGITS - 1) as usize, 0.0);
    }
    let mut exponent = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade (9.9999999996 -> 10.0000000).
    let probe = format!("{:.*e}", (DIGITS - 1) as usize, x.abs());
    if let Some(e) = probe.split('e').nth(1).and_then(|e| e.parse::<i32>().ok()) {
        exponent = e;
    }
    let decimals = (DIGITS - 1 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}
