//! Serde helpers writing exact rationals as `"p/q"` strings (integers as `"p"`).

use crate::Rational;
use serde::{Serialize, Serializer};
use serde_json::Value;
use std::collections::BTreeMap;

pub trait RationalTree {
    fn to_value(&self) -> Value;
}

impl RationalTree for Rational {
    fn to_value(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl<T: RationalTree> RationalTree for Vec<T> {
    fn to_value(&self) -> Value {
        Value::Array(self.iter().map(T::to_value).collect())
    }
}

impl<T: RationalTree> RationalTree for Option<T> {
    fn to_value(&self) -> Value {
        self.as_ref().map_or(Value::Null, T::to_value)
    }
}

impl<T: RationalTree> RationalTree for BTreeMap<String, T> {
    fn to_value(&self) -> Value {
        Value::Object(self.iter().map(|(k, v)| (k.clone(), v.to_value())).collect())
    }
}

/// Use with `#[serde(serialize_with = "crate::ratser::ser")]`.
pub fn ser<S: Serializer, T: RationalTree>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    v.to_value().serialize(s)
}
