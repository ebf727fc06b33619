//! `coproduct`, `antipode` and `table`.

use std::collections::BTreeMap;
use std::path::Path;

use decomp_species::coalg::{IncidenceBialgebra, ModuleElement, TensorElement};
use decomp_species::decomp::describe_shape;
use decomp_species::poset::CanonicalKey;
use decomp_species::species::{Species, Structure};
use serde::Serialize;
use serde_json::Value;

use crate::config::{read_file, Format, RunConfig};
use crate::error::CliError;

/// A structure file, optionally with a `"restrict"` list of labels to
/// restrict to before use.
pub fn load_structure(species: &Species, path: &Path) -> Result<Structure, CliError> {
    let mut v: Value = serde_json::from_str(&read_file(path)?)?;
    let restrict = match v.as_object_mut() {
        Some(obj) => obj.remove("restrict"),
        None => None,
    };
    let x = species.parse_structure(&v)?;
    match restrict {
        None => Ok(x),
        Some(labels) => {
            let labels: Vec<String> = serde_json::from_value(labels)?;
            Ok(species.restrict(&x, &labels)?)
        }
    }
}

fn algebra_for(cfg: &RunConfig, x: &Structure) -> Result<IncidenceBialgebra, CliError> {
    // Graphs are bounded by their edge count; other species ignore the bound.
    let n = x.len();
    let edges = x
        .decoration()
        .matrices()
        .iter()
        .map(|m| (0..n).flat_map(|i| (i..n).map(move |j| m[i * n + j] as usize)).sum::<usize>())
        .max()
        .unwrap_or(0);
    Ok(IncidenceBialgebra::new(&cfg.species, n, cfg.edges.max(edges))?)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
}

fn json_text(v: &impl Serialize) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn tensor_rows(t: &TensorElement) -> Vec<Vec<String>> {
    t.terms().map(|((l, r), c)| vec![l.to_string(), r.to_string(), c.to_string()]).collect()
}

pub fn coproduct(cfg: &RunConfig, file: &Path) -> Result<(), CliError> {
    let x = load_structure(&cfg.species, file)?;
    let alg = algebra_for(cfg, &x)?;
    let delta = alg.coproduct_shape(&x.shape())?;
    let text = match cfg.format {
        Format::Json => json_text(&delta)?,
        Format::Csv => csv_text(&["left", "right", "coeff"], tensor_rows(&delta))?,
    };
    cfg.emit(&text)
}

/// `m (S ⊗ id) Δ (x)` and `m (id ⊗ S) Δ (x)`.
fn convolutions(alg: &IncidenceBialgebra, x: &ModuleElement) -> Result<[ModuleElement; 2], CliError> {
    let (mut left, mut right) = (ModuleElement::zero(), ModuleElement::zero());
    for ((l, r), c) in alg.coproduct(x)?.terms() {
        let (bl, br) = (ModuleElement::basis(l.clone()), ModuleElement::basis(r.clone()));
        left = left.plus(&alg.product(&alg.antipode(&bl)?, &br)?.scaled(c));
        right = right.plus(&alg.product(&bl, &alg.antipode(&br)?)?.scaled(c));
    }
    Ok([left, right])
}

pub fn antipode(cfg: &RunConfig, file: &Path) -> Result<(), CliError> {
    let x = load_structure(&cfg.species, file)?;
    let alg = algebra_for(cfg, &x)?;
    let element = ModuleElement::basis(cfg.species.structure_key(&x)?);
    let s = alg.antipode(&element)?;
    let unit = ModuleElement::basis(alg.unit_key()?).scaled(&alg.counit(&element)?);
    for side in convolutions(&alg, &element)? {
        if side != unit {
            return Err(CliError::Failed(format!(
                "convolution identity fails: expected {}, found {}",
                serde_json::to_string(&unit)?,
                serde_json::to_string(&side)?
            )));
        }
    }
    let text = match cfg.format {
        Format::Json => json_text(&s)?,
        Format::Csv => csv_text(&["key", "coeff"], s.terms().map(|(k, c)| vec![k.to_string(), c.to_string()]))?,
    };
    cfg.emit(&text)
}

#[derive(Serialize)]
struct GradeCount {
    grade: usize,
    count: usize,
}

#[derive(Serialize)]
struct TableRow {
    key: CanonicalKey,
    grade: usize,
    shape: String,
    coproduct: TensorElement,
}

#[derive(Serialize)]
struct Table {
    species: String,
    size: usize,
    edges: usize,
    grades: Vec<GradeCount>,
    rows: Vec<TableRow>,
}

pub fn table(cfg: &RunConfig) -> Result<(), CliError> {
    let alg = IncidenceBialgebra::new(&cfg.species, cfg.size, cfg.edges)?;
    let mut counts: BTreeMap<usize, usize> = (0..=cfg.size).map(|g| (g, 0)).collect();
    let mut rows = Vec::new();
    for (key, shape) in alg.basis() {
        *counts.entry(shape.len()).or_default() += 1;
        rows.push(TableRow {
            key: key.clone(),
            grade: shape.len(),
            shape: describe_shape(shape),
            coproduct: alg.coproduct_shape(shape)?,
        });
    }
    let grades: Vec<GradeCount> = counts.into_iter().map(|(grade, count)| GradeCount { grade, count }).collect();
    let text = match cfg.format {
        Format::Json => {
            json_text(&Table { species: cfg.species.tag().into(), size: cfg.size, edges: cfg.edges, grades, rows })?
        }
        Format::Csv => {
            let empty = String::new;
            let counts = grades.iter().map(|g| {
                vec!["count".into(), g.grade.to_string(), empty(), empty(), empty(), empty(), g.count.to_string()]
            });
            let terms = rows.iter().flat_map(|r| {
                tensor_rows(&r.coproduct).into_iter().map(|t| {
                    let [l, rt, c]: [String; 3] = t.try_into().expect("three columns");
                    vec!["coproduct".into(), r.grade.to_string(), r.key.to_string(), r.shape.clone(), l, rt, c]
                })
            });
            csv_text(&["section", "grade", "key", "shape", "left", "right", "value"], counts.chain(terms))?
        }
    };
    cfg.emit(&text)
}
