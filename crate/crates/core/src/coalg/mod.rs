//! The incidence bialgebra of a species: coproduct by splitting into a lower
//! and an upper part, product by disjoint union, with exact rational
//! coefficients.

mod laws;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::DecompError;
use crate::poset::CanonicalKey;
use crate::species::{Shape, Species, SpeciesError};

pub use laws::{
    cardinality_coproduct_consistency, check_antipode, check_bialgebra, check_coassociativity, check_cocommutativity,
    check_counit,
};

pub type Coeff = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoalgError {
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error("no basis element with key {0}")]
    UnknownKey(String),
    #[error("species {0} has more than one structure on the empty set")]
    NotConnected(String),
    #[error("invalid coefficient {0:?}")]
    Coefficient(String),
}

/// A finite linear combination of iso-classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleElement(BTreeMap<CanonicalKey, Coeff>);

/// A finite linear combination of pairs of iso-classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement(BTreeMap<(CanonicalKey, CanonicalKey), Coeff>);

/// Threefold tensors, for coassociativity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor3(BTreeMap<(CanonicalKey, CanonicalKey, CanonicalKey), Coeff>);

fn add_term<K: Ord>(map: &mut BTreeMap<K, Coeff>, k: K, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn parse_coeff(s: &str) -> Result<Coeff, CoalgError> {
    s.trim().parse::<Coeff>().map_err(|_| CoalgError::Coefficient(s.into()))
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: CanonicalKey) -> Self {
        Self(BTreeMap::from([(key, Coeff::one())]))
    }

    pub fn add(&mut self, key: CanonicalKey, c: Coeff) {
        add_term(&mut self.0, key, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &Coeff)> {
        self.0.iter()
    }

    pub fn coeff(&self, key: &CanonicalKey) -> Coeff {
        self.0.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.0 {
            out.add(k.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.add(k.clone(), v.clone());
        }
        out
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, left: CanonicalKey, right: CanonicalKey, c: Coeff) {
        add_term(&mut self.0, (left, right), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(CanonicalKey, CanonicalKey), &Coeff)> {
        self.0.iter()
    }

    pub fn coeff(&self, left: &CanonicalKey, right: &CanonicalKey) -> Coeff {
        self.0.get(&(left.clone(), right.clone())).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Swap the factors.
    pub fn flipped(&self) -> Self {
        let mut out = Self::zero();
        for ((l, r), c) in &self.0 {
            out.add(r.clone(), l.clone(), c.clone());
        }
        out
    }
}

impl Tensor3 {
    pub fn add(&mut self, a: CanonicalKey, b: CanonicalKey, c: CanonicalKey, coeff: Coeff) {
        add_term(&mut self.0, (a, b, c), coeff);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(CanonicalKey, CanonicalKey, CanonicalKey), &Coeff)> {
        self.0.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleTermJson {
    key: CanonicalKey,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    terms: Vec<ModuleTermJson>,
}

#[derive(Serialize, Deserialize)]
struct TensorTermJson {
    left: CanonicalKey,
    right: CanonicalKey,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    terms: Vec<TensorTermJson>,
}

impl Serialize for ModuleElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.0.iter().map(|(k, c)| ModuleTermJson { key: k.clone(), coeff: c.to_string() }).collect();
        ModuleJson { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ModuleJson::deserialize(d)?;
        let mut out = Self::zero();
        for t in j.terms {
            out.add(t.key, parse_coeff(&t.coeff).map_err(serde::de::Error::custom)?);
        }
        Ok(out)
    }
}

impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .0
            .iter()
            .map(|((l, r), c)| TensorTermJson { left: l.clone(), right: r.clone(), coeff: c.to_string() })
            .collect();
        TensorJson { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TensorJson::deserialize(d)?;
        let mut out = Self::zero();
        for t in j.terms {
            out.add(t.left, t.right, parse_coeff(&t.coeff).map_err(serde::de::Error::custom)?);
        }
        Ok(out)
    }
}

/// The incidence bialgebra restricted to structures of size `≤ max_size`.
#[derive(Clone, Debug)]
pub struct IncidenceBialgebra {
    species: Species,
    max_size: usize,
    bound: usize,
    basis: BTreeMap<CanonicalKey, Shape>,
}

impl IncidenceBialgebra {
    pub fn new(species: &Species, max_size: usize, bound: usize) -> Result<Self, CoalgError> {
        let basis = species.basis_up_to(max_size, bound)?.into_iter().collect();
        Ok(Self { species: species.clone(), max_size, bound, basis })
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn basis(&self) -> impl Iterator<Item = (&CanonicalKey, &Shape)> {
        self.basis.iter()
    }

    pub fn keys(&self) -> Vec<CanonicalKey> {
        self.basis.keys().cloned().collect()
    }

    pub fn shape(&self, key: &CanonicalKey) -> Result<&Shape, CoalgError> {
        self.basis.get(key).ok_or_else(|| CoalgError::UnknownKey(key.to_string()))
    }

    pub fn key(&self, shape: &Shape) -> Result<CanonicalKey, CoalgError> {
        Ok(self.species.key(shape)?)
    }

    /// Key of the empty structure, the unit.
    pub fn unit_key(&self) -> Result<CanonicalKey, CoalgError> {
        self.key(&self.species.empty_structure().shape())
    }

    /// `Δ` of a single structure: one term per lower set.
    pub fn coproduct_shape(&self, shape: &Shape) -> Result<TensorElement, CoalgError> {
        let mut out = TensorElement::zero();
        let n = shape.len();
        for lower in shape.order().lower_sets() {
            let upper: Vec<usize> = (0..n).filter(|i| lower.binary_search(i).is_err()).collect();
            let l = self.species.def().restrict(shape, &lower);
            let u = self.species.def().restrict(shape, &upper);
            out.add(self.key(&l)?, self.key(&u)?, Coeff::one());
        }
        Ok(out)
    }

    pub fn coproduct(&self, x: &ModuleElement) -> Result<TensorElement, CoalgError> {
        let mut out = TensorElement::zero();
        for (k, c) in x.terms() {
            for ((l, r), d) in self.coproduct_shape(self.shape(k)?)?.terms() {
                out.add(l.clone(), r.clone(), c * d);
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &ModuleElement) -> Result<Coeff, CoalgError> {
        Ok(x.coeff(&self.unit_key()?))
    }

    /// Disjoint union; the result may exceed `max_size`.
    pub fn product_shapes(&self, a: &Shape, b: &Shape) -> Result<Shape, CoalgError> {
        Ok(self.species.combine_shapes(a, b)?)
    }

    /// Product of basis combinations whose sizes add up to at most
    /// `max_size`.
    pub fn product(&self, x: &ModuleElement, y: &ModuleElement) -> Result<ModuleElement, CoalgError> {
        let mut out = ModuleElement::zero();
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                let s = self.product_shapes(self.shape(a)?, self.shape(b)?)?;
                out.add(self.key(&s)?, c * d);
            }
        }
        Ok(out)
    }

    fn check_connected(&self) -> Result<(), CoalgError> {
        if self.species.basis(0, self.bound)?.len() != 1 {
            return Err(CoalgError::NotConnected(self.species.tag().into()));
        }
        if !self.species.is_monoidal() {
            return Err(SpeciesError::NotMonoidal(self.species.tag().into()).into());
        }
        Ok(())
    }

    /// Antipode of a single structure of size `≤ max_size`, by the recursion
    /// `S(X) = -Σ S(X|L) · X|U` over lower sets `L` with non-empty `U`.
    pub fn antipode_shape(&self, shape: &Shape) -> Result<ModuleElement, CoalgError> {
        self.check_connected()?;
        let mut memo = HashMap::new();
        self.antipode_rec(shape, &mut memo)
    }

    fn antipode_rec(
        &self,
        shape: &Shape,
        memo: &mut HashMap<CanonicalKey, ModuleElement>,
    ) -> Result<ModuleElement, CoalgError> {
        let key = self.key(shape)?;
        if let Some(done) = memo.get(&key) {
            return Ok(done.clone());
        }
        let n = shape.len();
        let mut out = ModuleElement::zero();
        if n == 0 {
            out.add(key.clone(), Coeff::one());
        } else {
            for lower in shape.order().lower_sets() {
                if lower.len() == n {
                    continue;
                }
                let upper: Vec<usize> = (0..n).filter(|i| lower.binary_search(i).is_err()).collect();
                let l = self.species.def().restrict(shape, &lower);
                let u = self.species.def().restrict(shape, &upper);
                let sl = self.antipode_rec(&l, memo)?;
                for (k, c) in sl.terms() {
                    let prod = self.product_shapes(self.shape(k)?, &u)?;
                    out.add(self.key(&prod)?, -c.clone());
                }
            }
        }
        memo.insert(key, out.clone());
        Ok(out)
    }

    pub fn antipode(&self, x: &ModuleElement) -> Result<ModuleElement, CoalgError> {
        self.check_connected()?;
        let mut memo = HashMap::new();
        let mut out = ModuleElement::zero();
        for (k, c) in x.terms() {
            let s = self.antipode_rec(self.shape(k)?, &mut memo)?;
            out = out.plus(&s.scaled(c));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
