//! JSON value builders with the output conventions shared by every
//! subcommand: integers become JSON numbers only below 2⁵³ in magnitude
//! (decimal strings above, bit-exact either way), enclosures become
//! `{"lo": "m*2^e", "hi": "m*2^e"}` objects whose endpoints re-parse to the
//! identical dyadics, rationals become `"p/q"` strings, and three-valued
//! verdicts become `"pass" | "fail" | "undecided"`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;
use serde_json::{json, Value};
use tthue::precision::Verdict;
use tthue::RealEnclosure;

/// Largest magnitude serialized as a native JSON number.
fn number_cutoff() -> BigInt {
    BigInt::from(1u64 << 53)
}

/// A big integer, as a number when exactly representable in every JSON
/// consumer, as a decimal string otherwise.
pub fn big(v: &BigInt) -> Value {
    if v.abs() < number_cutoff() {
        let as_i64 = i64::try_from(v).expect("|v| < 2^53 fits i64");
        json!(as_i64)
    } else {
        json!(v.to_string())
    }
}

pub fn int(v: i64) -> Value {
    big(&BigInt::from(v))
}

pub fn uint(v: u64) -> Value {
    big(&BigInt::from(v))
}

/// `{"lo": "m*2^e", "hi": "m*2^e"}`.
pub fn enclosure(e: &RealEnclosure) -> Value {
    json!({ "lo": e.lo().to_string(), "hi": e.hi().to_string() })
}

/// `"p/q"` (reduced; `q = 1` prints as a plain integer).
pub fn ratio(r: &Ratio<BigInt>) -> Value {
    json!(r.to_string())
}

pub fn verdict(v: Verdict) -> Value {
    json!(v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;
    use tthue::Dyadic;

    #[test]
    fn integer_cutoff_switches_to_strings() {
        assert_eq!(big(&BigInt::from(42)), json!(42));
        assert_eq!(big(&BigInt::from(-(1i64 << 53) + 1)), json!(-9007199254740991i64));
        let too_big = BigInt::from(1i64 << 53);
        assert_eq!(big(&too_big), json!("9007199254740992"));
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(big(&huge), json!("123456789012345678901234567890"));
    }

    #[test]
    fn enclosure_strings_round_trip() {
        let e = RealEnclosure::new(
            Dyadic::new(BigInt::from(-5), -3),
            Dyadic::new(BigInt::from(7), -2),
        );
        let v = enclosure(&e);
        let lo = Dyadic::from_str(v["lo"].as_str().unwrap()).unwrap();
        let hi = Dyadic::from_str(v["hi"].as_str().unwrap()).unwrap();
        assert_eq!(&lo, e.lo());
        assert_eq!(&hi, e.hi());
    }

    #[test]
    fn ratio_and_verdict_forms() {
        let r = Ratio::new(BigInt::from(2), BigInt::from(4));
        assert_eq!(ratio(&r), json!("1/2"));
        assert_eq!(ratio(&Ratio::from_integer(BigInt::from(3))), json!("3"));
        assert_eq!(verdict(Verdict::Pass), json!("pass"));
        assert_eq!(verdict(Verdict::Undecided), json!("undecided"));
    }
}
