//! Exact rational scalars and the small helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let valid = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let value = match body.split_once('/') {
        Some((n, d)) => {
            if !valid(n) || !valid(d) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Rational::new(n.parse().ok()?, d)
        }
        None => {
            if !valid(body) {
                return None;
            }
            Rational::from_integer(body.parse().ok()?)
        }
    };
    Some(if neg { -value } else { value })
}

/// `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational approximation of `x` by continued fractions, accepted only
/// when it lands within `tol` using a denominator of at most `max_den`.
pub fn snap_f64(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rem - a;
        let approx = Rational::new(h1.clone(), k1.clone());
        if (to_f64(&approx) - x).abs() <= tol * 1e-3 || frac.abs() < 1e-15 {
            break;
        }
        rem = 1.0 / frac;
    }
    if k1.is_zero() {
        return None;
    }
    let r = Rational::new(h1, k1);
    ((to_f64(&r) - x).abs() <= tol).then_some(r)
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6"), Some(qf(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn fmt_round_trip() {
        for r in [q(0), q(-7), qf(-3, 4), qf(10, 4)] {
            assert_eq!(parse_rational(&fmt_rational(&r)), Some(r));
        }
        assert_eq!(fmt_rational(&qf(6, 3)), "2");
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_f64(0.5, 1000, 1e-12), Some(qf(1, 2)));
        assert_eq!(snap_f64(-1.0 / 3.0, 1000, 1e-12), Some(qf(-1, 3)));
        assert_eq!(snap_f64(0.0, 1000, 1e-12), Some(q(0)));
        assert!(snap_f64(std::f64::consts::PI, 10, 1e-9).is_none());
    }
}
