//! Exact feasibility of linear inequality systems and the case catalog for
//! the stretch-factor argument.

pub mod catalog;
pub mod expr;
pub mod measure;
pub mod simplex;
pub mod system;

pub use catalog::{catalog, find_system, verify_all, CatalogOptions, SystemReport, VerifyReport};
pub use expr::{parse_expr, parse_relation, ExprError, LinExpr};
pub use measure::{measure_instance, Measurement};
pub use system::{
    check_certificate, solve_feasibility, Certificate, Expectation, Inequality, LinearSystem, LpError, Multipliers,
    Relation, Variable,
};

/// Rationals as `"p/q"` strings.
pub(crate) mod rational_serde {
    use num_rational::BigRational;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::parse_rational;

    fn from_str<'de, D: Deserializer<'de>>(s: &str) -> Result<BigRational, D::Error> {
        parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }

    pub mod single {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            from_str::<D>(&String::deserialize(d)?)
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?.map(|s| from_str::<D>(&s)).transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?.iter().map(|s| from_str::<D>(s)).collect()
        }
    }

    pub mod map {
        use super::*;
        use serde::ser::SerializeMap;
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(v: &BTreeMap<String, BigRational>, s: S) -> Result<S::Ok, S::Error> {
            let mut map = s.serialize_map(Some(v.len()))?;
            for (k, x) in v {
                map.serialize_entry(k, &x.to_string())?;
            }
            map.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, BigRational>, D::Error> {
            BTreeMap::<String, String>::deserialize(d)?
                .into_iter()
                .map(|(k, s)| Ok((k, from_str::<D>(&s)?)))
                .collect()
        }
    }
}
