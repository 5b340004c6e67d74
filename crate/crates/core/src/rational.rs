//! Exact rational helpers shared by the prover and the serializers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficient type used for every expression and certificate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: fall back to a ratio of logs
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// computed from the continued-fraction expansion.
pub fn approximate(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Q::new(BigInt::from(p1), BigInt::from(q1));
    Some(if negative { -r } else { r })
}

/// Rational approximation of a real constant, accurate to within `1e-12`.
pub fn from_f64_exactish(x: f64) -> Q {
    approximate(x, 1_000_000_000_000).unwrap_or_else(Q::zero)
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn abs_max<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter()
        .map(|c| c.abs())
        .fold(Q::zero(), |a, b| if b > a { b } else { a })
}

pub fn one() -> Q {
    Q::one()
}

/// Serde adapter writing a rational as `{"num": "..", "den": ".."}`.
pub mod serde_q {
    use super::Q;
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let w = Wire::deserialize(d)?;
        let num: BigInt = w.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = w.den.parse().map_err(D::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Q::new(num, den))
    }

    pub mod vec {
        use super::super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super")] Q);

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<W> = xs.iter().cloned().map(W).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v: Vec<W> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fraction_recovers_small_fractions() {
        assert_eq!(approximate(0.5, 1_000_000), Some(qr(1, 2)));
        assert_eq!(approximate(-2.0 / 3.0, 1_000_000), Some(qr(-2, 3)));
        assert_eq!(approximate(3.0, 1_000_000), Some(q(3)));
        assert_eq!(approximate(1e-13, 1_000_000), Some(q(0)));
    }

    #[test]
    fn constant_approximation_is_tight() {
        let e = std::f64::consts::E;
        let c = from_f64_exactish(e / (e - 1.0));
        assert!((to_f64(&c) - e / (e - 1.0)).abs() < 1e-12);
    }
}
