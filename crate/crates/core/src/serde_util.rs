//! Serde helpers that keep persisted artifacts byte-deterministic.
//!
//! Hash maps serialize in random iteration order and integer map keys do not
//! survive internally-tagged enums (serde buffers them as string-keyed
//! content), so persisted maps are written as key-sorted pair sequences
//! instead.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::hash::Hash;

pub fn sorted_pairs<S, K, V>(map: &HashMap<K, V>, serializer: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    K: Ord + Eq + Hash + Serialize,
    V: Serialize,
{
    let mut pairs: Vec<(&K, &V)> = map.iter().collect();
    pairs.sort_by(|a, b| a.0.cmp(b.0));
    serializer.collect_seq(pairs)
}

pub fn from_pairs<'de, D, K, V>(deserializer: D) -> Result<HashMap<K, V>, D::Error>
where
    D: Deserializer<'de>,
    K: Deserialize<'de> + Eq + Hash,
    V: Deserialize<'de>,
{
    let pairs: Vec<(K, V)> = Vec::deserialize(deserializer)?;
    Ok(pairs.into_iter().collect())
}
