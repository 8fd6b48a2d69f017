//! Exact rational scalars and their text forms.
//!
//! Every coefficient and coordinate in the crate is a [`Rational`]. The text
//! form is `p/q` (or just `p` for integers); decimals are produced for display
//! only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`: expected `p/q` or an integer")]
pub struct ParseRationalError(pub String);

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    let err = || ParseRationalError(text.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// `p/q` text, reduced, with the sign on the numerator.
pub fn to_text(q: &Rational) -> String {
    q.to_string()
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
///
/// Values whose decimal exponent lies outside `[-20, 20]` are printed in
/// scientific notation. Trailing zeros of the mantissa are trimmed.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();

    // exponent e with 10^e <= |q| < 10^(e+1)
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10u8);
    let pow10 = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k as usize) };
    let ge_pow = |e: i64| -> bool {
        // |q| >= 10^e
        if e >= 0 {
            num >= &den * pow10(e)
        } else {
            &num * pow10(-e) >= den
        }
    };
    while !ge_pow(exp) {
        exp -= 1;
    }
    while ge_pow(exp + 1) {
        exp += 1;
    }

    // mantissa = round(|q| * 10^(digits-1-exp))
    let shift = digits as i64 - 1 - exp;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * pow10(shift), den.clone())
    } else {
        (num.clone(), &den * pow10(-shift))
    };
    let (mut mantissa, rem) = scaled_num.div_rem(&scaled_den);
    let twice = &rem * 2u8;
    match twice.cmp(&scaled_den) {
        Ordering::Greater => mantissa += 1u8,
        Ordering::Equal if mantissa.is_odd() => mantissa += 1u8,
        _ => {}
    }
    // rounding can carry into a new digit (e.g. 9.99.. -> 10.0)
    if mantissa.to_string().len() > digits {
        mantissa /= 10u8;
        exp += 1;
    }

    let mut mant = mantissa.to_string();
    while mant.len() > 1 && mant.ends_with('0') {
        mant.pop();
    }
    let sign = if negative { "-" } else { "" };
    if !(-20..=20).contains(&exp) {
        let (head, tail) = mant.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), mant)
    } else {
        let int_len = exp as usize + 1;
        if mant.len() <= int_len {
            format!("{}{}", mant, "0".repeat(int_len - mant.len()))
        } else {
            format!("{}.{}", &mant[..int_len], &mant[int_len..])
        }
    };
    format!("{sign}{body}")
}

/// Serde adapter storing a rational as a `"p/q"` string; integers are also
/// accepted on input.
pub mod serde_text {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as a \"p/q\" string or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(BigRational::from_integer(BigInt::from(v)))
        }
    }
}

/// Same as [`serde_text`] for sequences.
pub mod serde_text_vec {
    use super::*;
    use serde::de::SeqAccess;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&to_text(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        struct SeqVisitor;
        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = Vec<Rational>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of rationals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(Text(q)) = seq.next_element::<Text>()? {
                    out.push(q);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(SeqVisitor)
    }

    struct Text(Rational);

    impl<'de> serde::Deserialize<'de> for Text {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            super::serde_text::deserialize(d).map(Text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 6/-4 ").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(to_text(&rat(6, 4)), "3/2");
        assert_eq!(to_text(&int(7)), "7");
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal(&rat(1, 2), 20), "0.5");
        assert_eq!(to_decimal(&rat(5, 4), 20), "1.25");
        assert_eq!(to_decimal(&rat(1, 65536), 20), "0.0000152587890625");
        assert_eq!(to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&rat(2, 3), 5), "0.66667");
        assert_eq!(to_decimal(&int(-1234), 2), "-1200");
        // ties go to even
        assert_eq!(to_decimal(&rat(25, 10), 1), "2");
        assert_eq!(to_decimal(&rat(35, 10), 1), "4");
        assert_eq!(to_decimal(&rat(9999, 1000), 2), "10");
        assert_eq!(to_decimal(&int(0), 20), "0");
    }

    #[test]
    fn decimal_scientific_for_extremes() {
        let tiny = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2), 128));
        assert_eq!(to_decimal(&tiny, 5), "2.9387e-39");
        let one_plus = BigRational::one() + &tiny;
        assert_eq!(to_decimal(&one_plus, 20), "1");
    }
}
