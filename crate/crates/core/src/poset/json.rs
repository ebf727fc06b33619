use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FinPoset, Layering, PosetError};

/// `{"elements":["a","b"],"leq":[["a","b"]]}`; the closure is computed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

/// A poset with `"level":{"a":1,"b":2}` attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeringJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    pub level: BTreeMap<String, usize>,
    #[serde(default)]
    pub layers: Option<usize>,
}

impl FinPoset {
    pub fn to_json(&self) -> PosetJson {
        let leq = self
            .order()
            .covers()
            .into_iter()
            .map(|(a, b)| (self.labels()[a].clone(), self.labels()[b].clone()))
            .collect();
        PosetJson { elements: self.labels().to_vec(), leq }
    }

    pub fn from_json(j: &PosetJson) -> Result<Self, PosetError> {
        let pairs: Vec<(&str, &str)> = j.leq.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let elems: Vec<&str> = j.elements.iter().map(String::as_str).collect();
        FinPoset::new(&elems, &pairs)
    }

    pub fn from_json_str(s: &str) -> Result<Self, PosetError> {
        let j: PosetJson = serde_json::from_str(s).map_err(|e| PosetError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}

impl Layering {
    pub fn to_json(&self) -> LayeringJson {
        let p = self.carrier().to_json();
        let level = self.carrier().labels().iter().cloned().zip(self.levels().iter().copied()).collect();
        LayeringJson { elements: p.elements, leq: p.leq, level, layers: Some(self.layer_count()) }
    }

    /// Without an explicit `"layers"` count the top level used is taken.
    pub fn from_json(j: &LayeringJson) -> Result<Self, PosetError> {
        let carrier = FinPoset::from_json(&PosetJson { elements: j.elements.clone(), leq: j.leq.clone() })?;
        let n = j.layers.unwrap_or_else(|| j.level.values().copied().max().unwrap_or(0));
        Layering::new(carrier, n, &j.level)
    }

    pub fn from_json_str(s: &str) -> Result<Self, PosetError> {
        let j: LayeringJson = serde_json::from_str(s).map_err(|e| PosetError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_round_trip() {
        let p = FinPoset::from_json_str(r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]]}"#).unwrap();
        assert!(p.leq("a", "c").unwrap());
        let again = FinPoset::from_json(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn layering_round_trip() {
        let l = Layering::from_json_str(r#"{"elements":["a","b"],"leq":[["a","b"]],"level":{"a":1,"b":2}}"#).unwrap();
        assert_eq!(l.layer_count(), 2);
        assert_eq!(Layering::from_json(&l.to_json()).unwrap(), l);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(FinPoset::from_json_str("{"), Err(PosetError::Json(_))));
        assert!(matches!(
            Layering::from_json_str(r#"{"elements":["a","b"],"leq":[["a","b"]],"level":{"a":2,"b":1}}"#),
            Err(PosetError::NotMonotone(..))
        ));
    }
}
