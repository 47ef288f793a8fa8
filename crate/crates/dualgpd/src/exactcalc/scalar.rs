use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Arbitrary-precision rational, always normalized (lowest terms, positive denominator).
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Serializes as `p/q`, with `q = 1` written out so every value has the same shape.
pub fn to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn vec_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(to_string).collect()
}

/// Largest of |numerator| and denominator, used to bound sample height.
pub fn height(x: &Rat) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

pub mod vector {
    use super::Rat;
    use num_traits::Zero;

    pub fn zeros(n: usize) -> Vec<Rat> {
        vec![Rat::zero(); n]
    }

    pub fn unit(n: usize, i: usize) -> Vec<Rat> {
        let mut v = zeros(n);
        v[i] = super::one();
        v
    }

    pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
        a.iter().map(|x| c * x).collect()
    }

    pub fn neg(a: &[Rat]) -> Vec<Rat> {
        a.iter().map(|x| -x).collect()
    }

    pub fn is_zero(a: &[Rat]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn concat(parts: &[&[Rat]]) -> Vec<Rat> {
        parts.iter().flat_map(|p| p.iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_on_construction() {
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(to_string(&x), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0/1", "-7/3", "12/1"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("5").unwrap(), int(5));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn sum_of_fractions_reduces() {
        assert_eq!(rat(1, 6) + rat(1, 3), rat(1, 2));
        assert_eq!(rat(2, 3) * rat(3, 4), rat(1, 2));
    }
}
