//! Exact rational helpers used for bi-factor capacities and ratios.

use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::Ratio<i128>;

/// Parses `"3"`, `"0.25"` or `"1/4"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().ok()?;
        let den: i128 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    if frac_part.len() > 30 {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den = 10i128.checked_pow(frac_part.len() as u32)?;
    let value = Rational::new(num, den);
    Some(if negative { -value } else { value })
}

/// Canonical text form: `"3"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with `places` digits, rounded half away from zero.
pub fn to_decimal(value: &Rational, places: u32) -> String {
    let scale = 10i128.pow(places);
    let scaled = value * Rational::from_integer(scale);
    let abs = scaled.abs();
    let (q, r) = abs.numer().div_rem(abs.denom());
    let rounded = if r * 2 >= *abs.denom() { q + 1 } else { q };
    let sign = if scaled.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{rounded}");
    }
    let (int, frac) = rounded.div_rem(&scale);
    format!("{sign}{int}.{frac:0width$}", width = places as usize)
}

/// `floor(value)` for a non-negative rational.
pub fn floor(value: &Rational) -> i128 {
    value.numer().div_floor(value.denom())
}

/// `ceil(value)` for a non-negative rational.
pub fn ceil(value: &Rational) -> i128 {
    value.numer().div_ceil(value.denom())
}

/// Ceiling of an integer quotient for non-negative operands.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3"), Some(Rational::from_integer(3)));
        assert_eq!(parse_rational("0.25"), Some(Rational::new(1, 4)));
        assert_eq!(parse_rational("1/4"), Some(Rational::new(1, 4)));
        assert_eq!(parse_rational(".5"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&Rational::new(3, 2)), "3/2");
        assert_eq!(format_rational(&Rational::from_integer(5)), "5");
        assert_eq!(to_decimal(&Rational::new(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&Rational::new(5, 2), 0), "3");
        assert_eq!(floor(&Rational::new(7, 2)), 3);
        assert_eq!(ceil(&Rational::new(7, 2)), 4);
        assert_eq!(ceil(&Rational::from_integer(4)), 4);
    }
}
