//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn uint(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `n choose k`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n, k).to_u64().expect("binomial overflows u64")
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Smallest integer not below `x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Parses `"7"`, `"-3/4"` or `"0.25"` into an exact rational.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let whole_abs: BigInt = if whole == "-" || whole.is_empty() {
            BigInt::zero()
        } else {
            whole.trim_start_matches('-').parse().ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_n: BigInt = frac.parse().ok()?;
        let v = Rational::new(whole_abs * &scale + frac_n, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// `num/den`, or just `num` for integers.
pub fn format_exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with `places` digits, rounded half away from zero.
/// Computed on big integers so large values render exactly.
pub fn format_decimal(x: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let rem = scaled - Rational::from_integer(floor.clone());
    let rounded = if rem * BigInt::from(2) >= Rational::one() {
        floor + 1
    } else {
        floor
    };
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded_is_zero(&whole, &frac) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
}

fn rounded_is_zero(whole: &BigInt, frac: &BigInt) -> bool {
    whole.is_zero() && frac.is_zero()
}

/// `exact (decimal)` with six decimal places, the report format.
pub fn display(x: &Rational) -> String {
    format!("{} ({})", format_exact(x), format_decimal(x, 6))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_exact_and_decimal() {
        assert_eq!(display(&int(2)), "2 (2.000000)");
        assert_eq!(display(&ratio(3, 2)), "3/2 (1.500000)");
        assert_eq!(format_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(format_decimal(&ratio(-1, 3), 2), "-0.33");
        assert_eq!(format_decimal(&ratio(-1, 1000), 2), "0.00");
        assert_eq!(format_decimal(&ratio(7, 2), 0), "4");
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse("12"), Some(int(12)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(4, 2), 6);
        assert_eq!(binomial_u64(3, 5), 0);
        assert_eq!(binomial_u64(10, 0), 1);
        assert_eq!(ceil(&ratio(3, 2)), BigInt::from(2));
        assert_eq!(ceil(&int(2)), BigInt::from(2));
    }
}
