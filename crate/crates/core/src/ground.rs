//! Conversions between ground types.
//!
//! The table coincides with JavaScript's native coercions so that generated
//! code needs no helper library:
//!
//! | from \ to | number        | string          | boolean    | null |
//! |-----------|---------------|-----------------|------------|------|
//! | number    | identity      | `String(x)`     | `x !== 0`  | null |
//! | string    | `parseInt(x)` | identity        | `Boolean(x)` | null |
//! | boolean   | `Number(x)`   | "true"/"false"  | identity   | null |
//! | null      | 0             | ""              | false      | identity |
//!
//! `parseInt` is partial: a string without a leading integer has no numeric
//! image and the conversion fails instead of producing NaN.

use thiserror::Error;

use crate::json::JsonValue;
use crate::schema::GroundType;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConvertError {
    #[error("cannot convert {value} from {src} to {dst}")]
    ConversionFailure {
        src: GroundType,
        dst: GroundType,
        value: JsonValue,
    },
    #[error("expected a {expected} value, found {value}")]
    UnexpectedType { expected: GroundType, value: JsonValue },
}

/// Converts `value`, which must be of ground type `src`, to ground type `dst`.
pub fn convert(src: GroundType, dst: GroundType, value: &JsonValue) -> Result<JsonValue, ConvertError> {
    use GroundType::*;

    if GroundType::of(value) != Some(src) {
        return Err(ConvertError::UnexpectedType {
            expected: src,
            value: value.clone(),
        });
    }
    if src == dst {
        return Ok(value.clone());
    }
    let out = match (value, dst) {
        (_, Null) => JsonValue::Null,

        (JsonValue::Num(n), String) => JsonValue::Str(js_number_to_string(*n)),
        (JsonValue::Num(n), Boolean) => JsonValue::Bool(*n != 0.0),

        (JsonValue::Str(s), Number) => match parse_int(s) {
            Some(n) => JsonValue::Num(n),
            None => {
                return Err(ConvertError::ConversionFailure {
                    src,
                    dst,
                    value: value.clone(),
                })
            }
        },
        (JsonValue::Str(s), Boolean) => JsonValue::Bool(!s.is_empty()),

        (JsonValue::Bool(b), Number) => JsonValue::Num(if *b { 1.0 } else { 0.0 }),
        (JsonValue::Bool(b), String) => JsonValue::str(if *b { "true" } else { "false" }),

        (JsonValue::Null, Number) => JsonValue::Num(0.0),
        (JsonValue::Null, String) => JsonValue::str(""),
        (JsonValue::Null, Boolean) => JsonValue::Bool(false),

        _ => unreachable!("ground type checked above"),
    };
    Ok(out)
}

/// `Number.prototype.toString()` for finite doubles.
pub fn js_number_to_string(n: f64) -> String {
    debug_assert!(n.is_finite());
    if n == 0.0 {
        return "0".into();
    }
    if n < 0.0 {
        return format!("-{}", js_number_to_string(-n));
    }

    // Rust's `{:e}` yields the shortest round-tripping digits, e.g. "1.2345e3".
    let sci = format!("{n:e}");
    let (mantissa, exp) = sci.split_once('e').expect("`{:e}` always has an exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let k = digits.len() as i32;
    let point = exp.parse::<i32>().expect("integer exponent") + 1;

    if k <= point && point <= 21 {
        format!("{digits}{}", "0".repeat((point - k) as usize))
    } else if 0 < point && point <= 21 {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    } else if -6 < point && point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else {
        let e = point - 1;
        let sign = if e < 0 { '-' } else { '+' };
        let (first, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{first}e{sign}{}", e.abs())
        } else {
            format!("{first}.{rest}e{sign}{}", e.abs())
        }
    }
}

// StrWhiteSpaceChar: WhiteSpace plus LineTerminator.
fn is_js_whitespace(c: char) -> bool {
    matches!(
        c,
        '\t' | '\n' | '\u{b}' | '\u{c}' | '\r' | ' ' | '\u{a0}' | '\u{1680}' | '\u{2000}'
            ..='\u{200a}' | '\u{2028}' | '\u{2029}' | '\u{202f}' | '\u{205f}' | '\u{3000}' | '\u{feff}'
    )
}

/// JavaScript's one-argument `parseInt`. Returns `None` where JavaScript
/// would produce NaN or an infinity.
pub fn parse_int(s: &str) -> Option<f64> {
    let s = s.trim_start_matches(is_js_whitespace);
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (radix, s) = match s.get(..2) {
        Some("0x") | Some("0X") => (16, &s[2..]),
        _ => (10, s),
    };
    let end = s
        .char_indices()
        .find(|(_, c)| !c.is_digit(radix))
        .map_or(s.len(), |(i, _)| i);
    let digits = &s[..end];
    if digits.is_empty() {
        return None;
    }

    let magnitude = if radix == 10 {
        digits.parse::<f64>().ok()?
    } else {
        match u128::from_str_radix(digits, 16) {
            Ok(v) => v as f64,
            Err(_) => digits
                .chars()
                .fold(0.0, |acc, c| acc * 16.0 + c.to_digit(16).unwrap() as f64),
        }
    };
    let value = if negative { -magnitude } else { magnitude };
    value.is_finite().then_some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroundType::*;

    fn num(n: f64) -> JsonValue {
        JsonValue::Num(n)
    }

    #[test]
    fn number_to_boolean_compares_to_zero() {
        assert_eq!(
            convert(Number, Boolean, &num(0.0)).unwrap(),
            JsonValue::Bool(false)
        );
        assert_eq!(
            convert(Number, Boolean, &num(-0.0)).unwrap(),
            JsonValue::Bool(false)
        );
        assert_eq!(
            convert(Number, Boolean, &num(0.25)).unwrap(),
            JsonValue::Bool(true)
        );
    }

    #[test]
    fn boolean_encodings() {
        assert_eq!(convert(Boolean, Number, &true.into()).unwrap(), num(1.0));
        assert_eq!(convert(Boolean, Number, &false.into()).unwrap(), num(0.0));
        assert_eq!(convert(Boolean, String, &true.into()).unwrap(), "true".into());
        assert_eq!(convert(Boolean, String, &false.into()).unwrap(), "false".into());
    }

    #[test]
    fn string_to_number_uses_parse_int() {
        assert_eq!(convert(String, Number, &"42".into()).unwrap(), num(42.0));
        assert!(matches!(
            convert(String, Number, &"abc".into()),
            Err(ConvertError::ConversionFailure { .. })
        ));
    }

    #[test]
    fn identity_on_diagonal() {
        assert_eq!(convert(Number, Number, &num(3.5)).unwrap(), num(3.5));
        assert_eq!(convert(Null, Null, &JsonValue::Null).unwrap(), JsonValue::Null);
    }

    #[test]
    fn from_null_yields_zero_values() {
        assert_eq!(convert(Null, Number, &JsonValue::Null).unwrap(), num(0.0));
        assert_eq!(convert(Null, String, &JsonValue::Null).unwrap(), "".into());
        assert_eq!(convert(Null, Boolean, &JsonValue::Null).unwrap(), false.into());
        for g in [Number, String, Boolean] {
            let v = convert(Null, g, &JsonValue::Null).unwrap();
            assert_eq!(convert(g, Null, &v).unwrap(), JsonValue::Null);
        }
    }

    #[test]
    fn string_to_boolean_is_nonempty() {
        assert_eq!(convert(String, Boolean, &"".into()).unwrap(), false.into());
        assert_eq!(convert(String, Boolean, &"0".into()).unwrap(), true.into());
        assert_eq!(convert(String, Boolean, &"false".into()).unwrap(), true.into());
    }

    #[test]
    fn wrong_input_type() {
        assert!(matches!(
            convert(Number, String, &"1".into()),
            Err(ConvertError::UnexpectedType { expected: Number, .. })
        ));
    }

    // Expected values recorded from node v20 (`parseInt(s)`).
    #[test]
    fn parse_int_matches_javascript() {
        let cases: &[(&str, Option<f64>)] = &[
            ("42", Some(42.0)),
            ("  -17abc", Some(-17.0)),
            ("+8", Some(8.0)),
            ("0x1A", Some(26.0)),
            ("-0x10", Some(-16.0)),
            ("abc", None),
            ("", None),
            ("3.9", Some(3.0)),
            ("1e3", Some(1.0)),
            ("  12", Some(12.0)),
            ("123456789012345678901234", Some(1.2345678901234569e23)),
            ("0x", None),
            ("- 5", None),
            ("\u{85} 5", None),
        ];
        for (s, expected) in cases {
            assert_eq!(parse_int(s), *expected, "parseInt({s:?})");
        }
        assert_eq!(parse_int(&"9".repeat(400)), None);
        let neg_zero = parse_int("-0").unwrap();
        assert!(neg_zero == 0.0 && neg_zero.is_sign_negative());
    }

    // Expected strings recorded from node v20 (`String(n)`).
    #[test]
    fn number_to_string_matches_javascript() {
        let cases: &[(f64, &str)] = &[
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (-1.0, "-1"),
            (3.5, "3.5"),
            (0.1, "0.1"),
            (1e21, "1e+21"),
            (1e-7, "1e-7"),
            (123456789012345680000.0, "123456789012345680000"),
            (0.0000015, "0.0000015"),
            (0.000001, "0.000001"),
            (-2.5e-8, "-2.5e-8"),
            (1e300, "1e+300"),
            (5e-324, "5e-324"),
            (1.7976931348623157e308, "1.7976931348623157e+308"),
            (100.0, "100"),
            (12345.678, "12345.678"),
            (1.0 / 3.0, "0.3333333333333333"),
        ];
        for (n, expected) in cases {
            assert_eq!(js_number_to_string(*n), *expected, "String({n:e})");
        }
    }
}
