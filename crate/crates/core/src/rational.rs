//! Arbitrary-precision rationals and small helpers used throughout.
//!
//! Everything exact in this crate runs over `Rat` (`num_rational::BigRational`),
//! which keeps values reduced with a positive denominator. Text form is
//! `p/q`, or just `n` for integers, in every interface that prints or parses
//! rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

pub type Rat = BigRational;

/// `n/d` as a rational; panics on `d == 0` (callers pass literals).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer rational.
pub fn rati(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `n` (optionally signed), rejecting zero denominators.
pub fn parse_rat(text: &str) -> Result<Rat, CoreError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(CoreError::InvalidInput("empty rational literal".into()));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| CoreError::InvalidInput(format!("bad rational literal '{s}'")))?;
    let den: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| CoreError::InvalidInput(format!("bad rational literal '{s}'")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(CoreError::InvalidInput(format!("zero denominator in '{s}'")));
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `p/q`, or `n` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Scales a rational vector to a primitive integer vector on the same ray.
///
/// The result has coprime entries and is empty-safe only for nonzero input.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    assert!(v.iter().any(|x| !x.is_zero()), "zero vector has no primitive direction");
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    ints.into_iter().map(|n| n / &gcd).collect()
}

/// Rounds to the nearest f64 (for the numerical moment-map side).
pub fn rat_to_f64(r: &Rat) -> f64 {
    // Split into integer part + remainder to stay accurate for large values.
    let (quot, rem) = r.numer().div_rem(r.denom());
    let q = quot.to_string().parse::<f64>().unwrap_or(0.0);
    let rn = rem.to_string().parse::<f64>().unwrap_or(0.0);
    let rd = r.denom().to_string().parse::<f64>().unwrap_or(1.0);
    q + rn / rd
}

/// Absolute value.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "1/2", "-22/7", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Non-canonical forms normalize.
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = vec![rat(1, 2), rat(-3, 4), rati(0)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn f64_conversion() {
        assert!((rat_to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rat_to_f64(&rati(-5)), -5.0);
    }
}
