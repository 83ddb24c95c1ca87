use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact scalar: arbitrary precision rational, always in lowest terms with a
/// positive denominator (maintained by `num_rational`).
pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    assert!(q != 0, "zero denominator");
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q` with optional sign; rejects anything else.
pub fn parse(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Rational(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        Some(q) => q.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(p, q))
}

/// Canonical rendering, `p` for integers and `p/q` otherwise.
pub fn render(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["0", "5", "-3", "2/4", "-10/15"] {
            let x = parse(s).unwrap();
            let y = parse(&render(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(render(&parse("2/4").unwrap()), "1/2");
        assert_eq!(render(&parse("-10/15").unwrap()), "-2/3");
    }

    #[test]
    fn parse_rejects_junk() {
        for s in ["", "1/0", "a", "1.5", "1/2/3", "1e3"] {
            assert!(parse(s).is_err(), "accepted {s}");
        }
    }
}
