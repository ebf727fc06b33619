//! Bialgebra laws checked on every basis element, and the comparison of
//! coproduct coefficients with homotopy cardinalities of fibres.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{CoalgError, Coeff, IncidenceBialgebra, ModuleElement, Tensor3, TensorElement};
use crate::decomp::{build, AxiomReport, BuildOptions, CheckResult};
use crate::groupoid::fibre;
use crate::poset::CanonicalKey;
use crate::species::SpeciesError;
use crate::Exec;

#[derive(Serialize)]
struct Mismatch {
    term: String,
    expected: String,
    found: String,
}

fn first_mismatch<K: Ord + std::fmt::Debug>(
    expected: &BTreeMap<K, Coeff>,
    found: &BTreeMap<K, Coeff>,
) -> Option<Mismatch> {
    let zero = Coeff::zero();
    expected.keys().chain(found.keys()).find_map(|k| {
        let (e, f) = (expected.get(k).unwrap_or(&zero), found.get(k).unwrap_or(&zero));
        (e != f).then(|| Mismatch { term: format!("{k:?}"), expected: e.to_string(), found: f.to_string() })
    })
}

fn compare<K: Ord + std::fmt::Debug>(
    name: String,
    expected: &BTreeMap<K, Coeff>,
    found: &BTreeMap<K, Coeff>,
) -> CheckResult {
    match first_mismatch(expected, found) {
        None => CheckResult::pass(name),
        Some(m) => CheckResult::fail(name, m),
    }
}

fn per_key(
    alg: &IncidenceBialgebra,
    check: &str,
    exec: Exec,
    f: impl Fn(&CanonicalKey) -> Result<CheckResult, CoalgError> + Sync + Send,
) -> Result<AxiomReport, CoalgError> {
    let keys = alg.keys();
    let results = exec.map(&keys, f).into_iter().collect::<Result<_, _>>()?;
    Ok(AxiomReport::new(check, results))
}

/// `(Δ ⊗ id) Δ = (id ⊗ Δ) Δ`.
pub fn check_coassociativity(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    per_key(alg, "coassociativity", exec, |k| {
        let delta = alg.coproduct(&ModuleElement::basis(k.clone()))?;
        let (mut lhs, mut rhs) = (Tensor3::default(), Tensor3::default());
        for ((l, r), c) in delta.terms() {
            for ((a, b), d) in alg.coproduct(&ModuleElement::basis(l.clone()))?.terms() {
                lhs.add(a.clone(), b.clone(), r.clone(), c * d);
            }
            for ((a, b), d) in alg.coproduct(&ModuleElement::basis(r.clone()))?.terms() {
                rhs.add(l.clone(), a.clone(), b.clone(), c * d);
            }
        }
        Ok(compare(k.to_string(), &lhs.0, &rhs.0))
    })
}

/// `(ε ⊗ id) Δ = id = (id ⊗ ε) Δ`.
pub fn check_counit(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    let unit = alg.unit_key()?;
    per_key(alg, "counit", exec, |k| {
        let delta = alg.coproduct(&ModuleElement::basis(k.clone()))?;
        let (mut left, mut right) = (ModuleElement::zero(), ModuleElement::zero());
        for ((l, r), c) in delta.terms() {
            if *l == unit {
                left.add(r.clone(), c.clone());
            }
            if *r == unit {
                right.add(l.clone(), c.clone());
            }
        }
        let id = ModuleElement::basis(k.clone());
        let verdict = compare(format!("left/{k}"), &id.0, &left.0);
        if verdict.verdict != crate::decomp::Verdict::Pass {
            return Ok(verdict);
        }
        Ok(compare(format!("{k}"), &id.0, &right.0))
    })
}

/// `τ Δ = Δ`; expected to hold exactly for ordinary species.
pub fn check_cocommutativity(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    per_key(alg, "cocommutativity", exec, |k| {
        let delta = alg.coproduct(&ModuleElement::basis(k.clone()))?;
        Ok(compare(k.to_string(), &delta.0, &delta.flipped().0))
    })
}

fn tensor_product(alg: &IncidenceBialgebra, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, CoalgError> {
    let mut out = TensorElement::zero();
    for ((a, b), c) in x.terms() {
        for ((p, q), d) in y.terms() {
            let left = alg.product_shapes(alg.shape(a)?, alg.shape(p)?)?;
            let right = alg.product_shapes(alg.shape(b)?, alg.shape(q)?)?;
            out.add(alg.key(&left)?, alg.key(&right)?, c * d);
        }
    }
    Ok(out)
}

/// `Δ(XY) = Δ(X) Δ(Y)` for basis pairs of total size `≤ max_size`.
pub fn check_bialgebra(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    if !alg.species().is_monoidal() {
        return Err(SpeciesError::NotMonoidal(alg.species().tag().into()).into());
    }
    let basis: Vec<(CanonicalKey, usize)> = alg.basis().map(|(k, s)| (k.clone(), s.len())).collect();
    let pairs: Vec<(CanonicalKey, CanonicalKey)> = basis
        .iter()
        .flat_map(|(a, sa)| {
            basis.iter().filter(move |(_, sb)| sa + sb <= alg.max_size()).map(move |(b, _)| (a.clone(), b.clone()))
        })
        .collect();
    let results = exec
        .map(&pairs, |(a, b)| -> Result<CheckResult, CoalgError> {
            let xy = alg.product_shapes(alg.shape(a)?, alg.shape(b)?)?;
            let lhs = alg.coproduct_shape(&xy)?;
            let da = alg.coproduct(&ModuleElement::basis(a.clone()))?;
            let db = alg.coproduct(&ModuleElement::basis(b.clone()))?;
            let rhs = tensor_product(alg, &da, &db)?;
            Ok(compare(format!("{a}*{b}"), &lhs.0, &rhs.0))
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
    Ok(AxiomReport::new("bialgebra", results))
}

/// `m (S ⊗ id) Δ = η ε = m (id ⊗ S) Δ`.
pub fn check_antipode(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    let unit = alg.unit_key()?;
    per_key(alg, "antipode", exec, |k| {
        let delta = alg.coproduct(&ModuleElement::basis(k.clone()))?;
        let mut expected = ModuleElement::zero();
        if *k == unit {
            expected.add(unit.clone(), Coeff::one());
        }
        let (mut left, mut right) = (ModuleElement::zero(), ModuleElement::zero());
        for ((l, r), c) in delta.terms() {
            let sl = alg.antipode(&ModuleElement::basis(l.clone()))?;
            left = left.plus(&alg.product(&sl, &ModuleElement::basis(r.clone()))?.scaled(c));
            let sr = alg.antipode(&ModuleElement::basis(r.clone()))?;
            right = right.plus(&alg.product(&ModuleElement::basis(l.clone()), &sr)?.scaled(c));
        }
        let verdict = compare(format!("left/{k}"), &expected.0, &left.0);
        if verdict.verdict != crate::decomp::Verdict::Pass {
            return Ok(verdict);
        }
        Ok(compare(k.to_string(), &expected.0, &right.0))
    })
}

/// For each basis element `X`, the homotopy cardinality of the part of the
/// `d_1`-fibre over `X` lying over `(L, U)` under `(d_2, d_0)` equals the
/// coefficient of `L ⊗ U` in `Δ(X)`.
pub fn cardinality_coproduct_consistency(alg: &IncidenceBialgebra, exec: Exec) -> Result<AxiomReport, CoalgError> {
    let ds = build(alg.species(), &BuildOptions::new(2, alg.max_size()).with_bound(alg.bound()))?;
    let t = ds.simplicial();
    let x1 = t.level(1);
    let reps: Vec<usize> = (0..x1.class_count()).map(|c| x1.class_rep(c)).collect();
    let (d0, d1, d2) = (t.face(2, 0), t.face(2, 1), t.face(2, 2));
    let results = exec
        .map(&reps, |&x| -> Result<(CanonicalKey, CheckResult), CoalgError> {
            let key = ds.structure_key(1, x)?;
            let fib = fibre(d1, x).map_err(crate::decomp::DecompError::from)?;
            let mut found = TensorElement::zero();
            for (w, aut) in fib.groupoid.iso_classes() {
                let y = fib.left.on_object(w);
                let lower = ds.structure_key(1, d2.on_object(y))?;
                let upper = ds.structure_key(1, d0.on_object(y))?;
                found.add(lower, upper, Coeff::new(BigInt::one(), BigInt::from(aut)));
            }
            let expected = alg.coproduct(&ModuleElement::basis(key.clone()))?;
            Ok((key.clone(), compare(key.to_string(), &expected.0, &found.0)))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut results = results;
    results.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(AxiomReport::new("cardinality", results.into_iter().map(|(_, r)| r).collect()))
}
