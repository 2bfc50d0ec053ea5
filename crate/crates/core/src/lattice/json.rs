//! JSON form of lattices: `{label, rank, gram}`. Integers beyond the 53-bit
//! range that JSON consumers can represent exactly are written as decimal
//! strings.

use num::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{GramLattice, LatticeVector};
use crate::matrix::IntMatrix;

const SAFE_LIMIT: i64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) if v.abs() <= SAFE_LIMIT => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|e| de::Error::custom(format!("bad integer {s:?}: {e}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    label: Option<String>,
    rank: usize,
    gram: Vec<Vec<JsonInt>>,
}

impl Serialize for GramLattice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeJson {
            label: self.label.clone(),
            rank: self.rank(),
            gram: self
                .gram
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(JsonInt).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = LatticeJson::deserialize(d)?;
        if raw.gram.len() != raw.rank || raw.gram.iter().any(|r| r.len() != raw.rank) {
            return Err(de::Error::custom(format!(
                "gram matrix is not {0}x{0}",
                raw.rank
            )));
        }
        let rows: Vec<Vec<BigInt>> = raw
            .gram
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        let gram = if rows.is_empty() {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_rows(&rows)
        };
        GramLattice::new(gram, raw.label).map_err(de::Error::custom)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coords: Vec<JsonInt> = self.0.iter().cloned().map(JsonInt).collect();
        coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coords = Vec::<JsonInt>::deserialize(d)?;
        Ok(LatticeVector(coords.into_iter().map(|x| x.0).collect()))
    }
}
