//! JSON formats for structures.
//!
//! - set: `{"elements":["a","b"]}`
//! - poset, linear order: `{"elements":[..],"leq":[["a","b"],..]}`
//! - graph: `{"vertices":[..],"edges":[["a","b"],["a","a"],..]}`, repeats
//!   give multiplicity
//! - forest: `{"nodes":[..],"parent":{"leaf":"root","root":null}}`
//! - double poset: `{"elements":[..],"leq":[..],"leq2":[..]}`
//! - DAG: `{"vertices":[..],"edges":[["a","b"],..]}`, order by reachability

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Decoration, Species, SpeciesError, Structure};
use crate::poset::{FinPoset, Order};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JsonFormat {
    Set,
    Poset,
    Graph,
    Forest,
    DoublePoset,
    Dag,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct ForestJson {
    nodes: Vec<String>,
    #[serde(default)]
    parent: BTreeMap<String, Option<String>>,
}

#[derive(Serialize, Deserialize)]
struct DoublePosetJson {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
    #[serde(default)]
    leq2: Vec<(String, String)>,
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, SpeciesError> {
    T::deserialize(v).map_err(|e| SpeciesError::Json(e.to_string()))
}

fn edges_by_index(carrier: &FinPoset, edges: &[(String, String)]) -> Result<Vec<(usize, usize)>, SpeciesError> {
    edges.iter().map(|(a, b)| Ok((carrier.index_of(a)?, carrier.index_of(b)?))).collect()
}

fn labelled_pairs(carrier: &FinPoset, m: &[u8], strict: bool) -> Vec<(String, String)> {
    let n = carrier.len();
    let l = carrier.labels();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for _ in 0..m[i * n + j] {
                if !(strict && i == j) {
                    out.push((l[i].clone(), l[j].clone()));
                }
            }
        }
    }
    out
}

impl Species {
    pub fn parse_structure(&self, v: &Value) -> Result<Structure, SpeciesError> {
        match self.json_format() {
            JsonFormat::Set => {
                let j: SetJson = parse(v)?;
                self.structure(FinPoset::discrete(&j.elements)?, Decoration::unit())
            }
            JsonFormat::Poset => {
                let j: PosetJson = parse(v)?;
                self.structure(FinPoset::new(&j.elements, &j.leq)?, Decoration::unit())
            }
            JsonFormat::Graph => {
                let j: GraphJson = parse(v)?;
                let carrier = FinPoset::discrete(&j.vertices)?;
                let n = carrier.len();
                let mut m = vec![0u8; n * n];
                for (a, b) in edges_by_index(&carrier, &j.edges)? {
                    m[a * n + b] = m[a * n + b].saturating_add(1);
                    if a != b {
                        m[b * n + a] = m[b * n + a].saturating_add(1);
                    }
                }
                self.structure(carrier, Decoration::new(vec![m]))
            }
            JsonFormat::Forest => {
                let j: ForestJson = parse(v)?;
                let leq: Vec<(String, String)> =
                    j.parent.iter().filter_map(|(c, p)| p.as_ref().map(|p| (c.clone(), p.clone()))).collect();
                self.structure(FinPoset::new(&j.nodes, &leq)?, Decoration::unit())
            }
            JsonFormat::DoublePoset => {
                let j: DoublePosetJson = parse(v)?;
                let carrier = FinPoset::new(&j.elements, &j.leq)?;
                let second = FinPoset::new(&j.elements, &j.leq2)?;
                self.structure(carrier, Decoration::new(vec![second.order().matrix().to_vec()]))
            }
            JsonFormat::Dag => {
                let j: GraphJson = parse(v)?;
                let carrier = FinPoset::new(&j.vertices, &j.edges)?;
                let n = carrier.len();
                let mut e = vec![0u8; n * n];
                for (a, b) in edges_by_index(&carrier, &j.edges)? {
                    if a == b {
                        return Err(SpeciesError::Invalid { species: self.tag().into(), reason: "loop in DAG".into() });
                    }
                    e[a * n + b] = 1;
                }
                self.structure(carrier, Decoration::new(vec![e]))
            }
        }
    }

    pub fn parse_structure_str(&self, s: &str) -> Result<Structure, SpeciesError> {
        let v: Value = serde_json::from_str(s).map_err(|e| SpeciesError::Json(e.to_string()))?;
        self.parse_structure(&v)
    }

    pub fn structure_to_json(&self, x: &Structure) -> Value {
        let labels = x.carrier().labels().to_vec();
        let order = x.carrier().order();
        let covers = || -> Vec<(String, String)> {
            order.covers().into_iter().map(|(a, b)| (labels[a].clone(), labels[b].clone())).collect()
        };
        let value = match self.json_format() {
            JsonFormat::Set => serde_json::to_value(SetJson { elements: labels.clone() }),
            JsonFormat::Poset => serde_json::to_value(PosetJson { elements: labels.clone(), leq: covers() }),
            JsonFormat::Graph => {
                let n = x.len();
                let m = &x.decoration().matrices()[0];
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i..n {
                        for _ in 0..m[i * n + j] {
                            edges.push((labels[i].clone(), labels[j].clone()));
                        }
                    }
                }
                serde_json::to_value(GraphJson { vertices: labels.clone(), edges })
            }
            JsonFormat::Forest => {
                let mut parent: BTreeMap<String, Option<String>> = labels.iter().map(|l| (l.clone(), None)).collect();
                for (a, b) in covers() {
                    parent.insert(a, Some(b));
                }
                serde_json::to_value(ForestJson { nodes: labels.clone(), parent })
            }
            JsonFormat::DoublePoset => {
                let n = x.len();
                let second = Order::from_matrix(n, x.decoration().matrices()[0].clone()).expect("valid second order");
                let leq2 = second.covers().into_iter().map(|(a, b)| (labels[a].clone(), labels[b].clone())).collect();
                serde_json::to_value(DoublePosetJson { elements: labels.clone(), leq: covers(), leq2 })
            }
            JsonFormat::Dag => {
                let edges = labelled_pairs(x.carrier(), &x.decoration().matrices()[0], true);
                serde_json::to_value(GraphJson { vertices: labels.clone(), edges })
            }
        };
        value.expect("structure JSON is serializable")
    }
}
