//! Exact rationals and half-integers stored doubled.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The rational `doubled / 2`.
pub fn half(doubled: i64) -> Q {
    frac(doubled, 2)
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Doubled value of a rational that must lie in ½ℤ.
pub fn to_doubled(x: &Q) -> Option<i64> {
    let twice = x * q(2);
    if twice.is_integer() {
        twice.to_integer().to_i64()
    } else {
        None
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// "3", "-1/2".
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Accepts "p", "p/q", decimals like "2.5", and the unicode minus.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_abs: BigInt = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            int.trim_start_matches('-').parse().ok()?
        };
        let scale = BigInt::from(10).pow(dec.len() as u32);
        let frac_part: BigInt = dec.parse().ok()?;
        let v = Q::new(int_abs * &scale + frac_part, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Doubled half-integer rendered as "3/2", "-1/2", "2".
pub fn fmt_doubled(d: i64) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{}/2", d)
    }
}

pub fn is_nonneg_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}
