use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PadicScalar;

/// Wire form: `{"p": int, "val": int | null, "unit": "decimal-string", "prec": int}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarWire {
    p: u64,
    val: Option<i64>,
    unit: String,
    prec: i64,
}

impl Serialize for PadicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarWire { p: self.p(), val: self.valuation(), unit: self.unit().to_string(), prec: self.prec() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ScalarWire::deserialize(d)?;
        let unit: BigInt = w.unit.trim().parse().map_err(|_| D::Error::custom(format!("unit {:?} is not an integer", w.unit)))?;
        PadicScalar::from_parts(w.p, w.val, unit, w.prec).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_encodes_null_valuation() {
        let z = PadicScalar::zero(5, 12);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"p":5,"val":null,"unit":"0","prec":12}"#);
        assert_eq!(serde_json::from_str::<PadicScalar>(&s).unwrap(), z);
    }

    #[test]
    fn rejects_non_unit() {
        assert!(serde_json::from_str::<PadicScalar>(r#"{"p":5,"val":0,"unit":"10","prec":12}"#).is_err());
        assert!(serde_json::from_str::<PadicScalar>(r#"{"p":5,"val":0,"unit":"1","prec":12,"x":1}"#).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(n in -100000i64..100000, d in 1i64..500, prec in 1i64..40) {
            let x = PadicScalar::from_rational(7, n, d, prec).unwrap();
            let back: PadicScalar = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
