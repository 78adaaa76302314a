//! Serializable invariant tables.

use crate::arith::{rational::serde_str, RatFunc, Rational};
use crate::classes::DimVector;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRow {
    pub class: DimVector,
    pub j: RatFunc,
    pub eps: RatFunc,
    pub dt_mot: RatFunc,
    #[serde(with = "serde_str")]
    pub dt_num: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdRow {
    pub class: DimVector,
    pub j: RatFunc,
    pub eps: RatFunc,
    pub dt_mot: RatFunc,
    #[serde(with = "serde_str")]
    pub dt_num: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantTable {
    pub quiver: String,
    #[serde(with = "serde_str_vec")]
    pub slope: Vec<Rational>,
    pub bound: u32,
    pub linear: Vec<LinearRow>,
    pub self_dual: Vec<SdRow>,
}

mod serde_str_vec {
    use crate::arith::{parse_rational, rational::format_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl InvariantTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// One line per row: kind,class,J,eps,DTmot,DTnum.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,class,J,eps,DTmot,DTnum\n");
        let rows = self
            .linear
            .iter()
            .map(|r| ("linear", &r.class, &r.j, &r.eps, &r.dt_mot, &r.dt_num))
            .chain(
                self.self_dual
                    .iter()
                    .map(|r| ("self_dual", &r.class, &r.j, &r.eps, &r.dt_mot, &r.dt_num)),
            );
        for (kind, class, j, eps, mot, num) in rows {
            let _ = writeln!(
                out,
                "{kind},{},{},{},{},{num}",
                csv_field(&class.to_string()),
                csv_field(&j.to_string()),
                csv_field(&eps.to_string()),
                csv_field(&mot.to_string()),
            );
        }
        out
    }
}
