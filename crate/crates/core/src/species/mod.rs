//! Restriction species on finite sets and directed restriction species on
//! finite posets.
//!
//! A structure is a carrier poset together with a decoration: a list of
//! square `u8` matrices indexed by the carrier. Restriction to a convex
//! subset and transport along bijections act on decorations by taking
//! submatrices and permuting rows and columns, which is what every built-in
//! species needs. A [`SpeciesDef`] may override either.

mod builtin;
mod json;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groupoid::{FinGroupoid, GroupoidBuilder};
use crate::poset::{
    block_sum, permute_matrix, restrict_matrix, size_cap, CanonicalKey, FinPoset, Order, PosetError, Relational,
};

pub use builtin::{AcyclicDigraphs, DoublePosets, Embedded, Forests, Graphs, LinearOrders, Posets, Sets};
pub use json::JsonFormat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpeciesError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("unknown species {0:?}")]
    UnknownSpecies(String),
    #[error("invalid {species} structure: {reason}")]
    Invalid { species: String, reason: String },
    #[error("subset is not convex: {low:?} ≤ {mid:?} ≤ {high:?} but {mid:?} is missing")]
    NotConvex { low: String, mid: String, high: String },
    #[error("species {0} is not monoidal")]
    NotMonoidal(String),
    #[error("species {0} is not an ordinary restriction species")]
    NotOrdinary(String),
    #[error("structure of species {found} passed to species {expected}")]
    Mismatch { expected: String, found: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesKind {
    /// Defined on finite sets and injections; carriers are discrete.
    Ordinary,
    /// Defined on finite posets and convex maps.
    Directed,
}

/// Square matrices over the carrier; empty for property species.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration(Vec<Vec<u8>>);

impl Decoration {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn new(matrices: Vec<Vec<u8>>) -> Self {
        Self(matrices)
    }

    pub fn matrices(&self) -> &[Vec<u8>] {
        &self.0
    }

    pub fn restrict(&self, n: usize, keep: &[usize]) -> Self {
        Self(self.0.iter().map(|m| restrict_matrix(m, n, keep)).collect())
    }

    pub fn transport(&self, n: usize, perm: &[usize]) -> Self {
        Self(self.0.iter().map(|m| permute_matrix(m, n, perm)).collect())
    }

    pub fn block_sum(&self, na: usize, other: &Decoration, nb: usize) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| block_sum(a, na, b, nb)).collect())
    }
}

/// A structure on the carrier `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    order: Order,
    deco: Decoration,
}

impl Shape {
    pub fn new(order: Order, deco: Decoration) -> Self {
        Self { order, deco }
    }

    pub fn empty() -> Self {
        Self { order: Order::discrete(0), deco: Decoration::unit() }
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn decoration(&self) -> &Decoration {
        &self.deco
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Induced structure on the sorted index list `keep`, relabelled
    /// order-preservingly.
    pub fn restrict(&self, keep: &[usize]) -> Shape {
        Shape { order: self.order.restrict(keep), deco: self.deco.restrict(self.len(), keep) }
    }

    /// Transport along `i ↦ perm[i]`.
    pub fn transport(&self, perm: &[usize]) -> Shape {
        Shape { order: self.order.transport(perm), deco: self.deco.transport(self.len(), perm) }
    }

    pub fn disjoint_union(&self, other: &Shape) -> Shape {
        Shape {
            order: self.order.disjoint_union(&other.order),
            deco: self.deco.block_sum(self.len(), &other.deco, other.len()),
        }
    }

    pub fn relational(&self) -> Relational {
        let mut rels = vec![self.order.matrix().to_vec()];
        rels.extend(self.deco.0.iter().cloned());
        Relational::new(self.len(), vec![0; self.len()], rels)
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let r = self.relational();
        r.isomorphisms(&r)
    }

    /// Compact byte encoding, unique per labelled shape.
    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(self.len() as u8);
        out.extend_from_slice(self.order.matrix());
        for m in &self.deco.0 {
            out.extend_from_slice(m);
        }
    }
}

/// The plug-in contract for a species.
pub trait SpeciesDef: Send + Sync {
    fn tag(&self) -> &str;

    fn kind(&self) -> SpeciesKind;

    /// Carrier orders on which structures may exist.
    fn supports(&self, order: &Order) -> bool;

    /// Whether `deco` is a valid decoration of a supported `order`.
    fn is_valid(&self, order: &Order, deco: &Decoration) -> bool;

    /// Every valid decoration of `order`, subject to the decoration bound
    /// where the species needs one. Must be closed under automorphisms of
    /// `order`.
    fn decorations(&self, order: &Order, bound: usize) -> Vec<Decoration>;

    fn json_format(&self) -> JsonFormat;

    fn is_monoidal(&self) -> bool {
        true
    }

    fn restrict(&self, shape: &Shape, keep: &[usize]) -> Shape {
        shape.restrict(keep)
    }

    fn transport(&self, shape: &Shape, perm: &[usize]) -> Shape {
        shape.transport(perm)
    }

    fn combine(&self, a: &Shape, b: &Shape) -> Shape {
        a.disjoint_union(b)
    }
}

/// A labelled structure of some species.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    tag: String,
    carrier: FinPoset,
    deco: Decoration,
}

impl Structure {
    pub fn species_tag(&self) -> &str {
        &self.tag
    }

    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn decoration(&self) -> &Decoration {
        &self.deco
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.carrier.order().clone(), self.deco.clone())
    }
}

/// Some `low ≤ mid ≤ high` with `low, high` kept and `mid` not.
fn convexity_violation(o: &Order, keep: &[usize]) -> Option<(usize, usize, usize)> {
    (0..o.len()).filter(|x| keep.binary_search(x).is_err()).find_map(|mid| {
        let low = keep.iter().copied().find(|&a| o.leq(a, mid))?;
        let high = keep.iter().copied().find(|&b| o.leq(mid, b))?;
        Some((low, mid, high))
    })
}

/// A shared handle to a species definition.
#[derive(Clone)]
pub struct Species(Arc<dyn SpeciesDef>);

impl fmt::Debug for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Species({})", self.tag())
    }
}

impl Species {
    pub fn new(def: impl SpeciesDef + 'static) -> Self {
        Self(Arc::new(def))
    }

    pub fn sets() -> Self {
        Self::new(Sets)
    }

    pub fn graphs() -> Self {
        Self::new(Graphs)
    }

    pub fn posets() -> Self {
        Self::new(Posets)
    }

    pub fn forests() -> Self {
        Self::new(Forests)
    }

    pub fn linear_orders() -> Self {
        Self::new(LinearOrders)
    }

    pub fn double_posets() -> Self {
        Self::new(DoublePosets)
    }

    pub fn acyclic_digraphs() -> Self {
        Self::new(AcyclicDigraphs)
    }

    pub fn builtins() -> Vec<Species> {
        vec![
            Self::sets(),
            Self::graphs(),
            Self::posets(),
            Self::forests(),
            Self::linear_orders(),
            Self::double_posets(),
            Self::acyclic_digraphs(),
        ]
    }

    pub fn from_tag(tag: &str) -> Result<Self, SpeciesError> {
        let norm = tag.to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "set" | "sets" => Self::sets(),
            "graph" | "graphs" => Self::graphs(),
            "poset" | "posets" => Self::posets(),
            "forest" | "forests" | "bck" => Self::forests(),
            "linear_order" | "linear_orders" | "chain" | "chains" => Self::linear_orders(),
            "double_poset" | "double_posets" => Self::double_posets(),
            "dag" | "dags" | "acyclic_digraph" | "acyclic_digraphs" => Self::acyclic_digraphs(),
            _ => return Err(SpeciesError::UnknownSpecies(tag.into())),
        })
    }

    /// The directed species supported on discrete posets.
    pub fn embed_ordinary(&self) -> Result<Species, SpeciesError> {
        if self.kind() != SpeciesKind::Ordinary {
            return Err(SpeciesError::NotOrdinary(self.tag().into()));
        }
        Ok(Self::new(Embedded::new(self.clone())))
    }

    pub fn def(&self) -> &dyn SpeciesDef {
        &*self.0
    }

    pub fn tag(&self) -> &str {
        self.0.tag()
    }

    pub fn kind(&self) -> SpeciesKind {
        self.0.kind()
    }

    pub fn is_monoidal(&self) -> bool {
        self.0.is_monoidal()
    }

    pub fn json_format(&self) -> JsonFormat {
        self.0.json_format()
    }

    pub fn validate_shape(&self, shape: &Shape) -> Result<(), SpeciesError> {
        if !self.0.supports(shape.order()) {
            return Err(self.invalid("carrier order is not supported"));
        }
        if !self.0.is_valid(shape.order(), shape.decoration()) {
            return Err(self.invalid("decoration is not valid for the carrier"));
        }
        Ok(())
    }

    fn invalid(&self, reason: &str) -> SpeciesError {
        SpeciesError::Invalid { species: self.tag().into(), reason: reason.into() }
    }

    pub fn key(&self, shape: &Shape) -> Result<CanonicalKey, SpeciesError> {
        let cap = size_cap();
        if shape.len() > cap {
            return Err(PosetError::SizeCap { size: shape.len(), cap }.into());
        }
        Ok(CanonicalKey::new(self.tag(), &shape.relational().canonical_form()))
    }

    /// Restriction to a sorted index list, which must be convex.
    pub fn restrict_shape(&self, shape: &Shape, keep: &[usize]) -> Result<Shape, SpeciesError> {
        if let Some((low, mid, high)) = convexity_violation(shape.order(), keep) {
            return Err(SpeciesError::NotConvex { low: low.to_string(), mid: mid.to_string(), high: high.to_string() });
        }
        Ok(self.0.restrict(shape, keep))
    }

    pub fn transport_shape(&self, shape: &Shape, perm: &[usize]) -> Shape {
        self.0.transport(shape, perm)
    }

    pub fn combine_shapes(&self, a: &Shape, b: &Shape) -> Result<Shape, SpeciesError> {
        if !self.is_monoidal() {
            return Err(SpeciesError::NotMonoidal(self.tag().into()));
        }
        Ok(self.0.combine(a, b))
    }

    /// Every structure on the labelled carrier `0..n`.
    pub fn shapes(&self, n: usize, bound: usize) -> Vec<Shape> {
        let orders = match self.kind() {
            SpeciesKind::Ordinary => vec![Order::discrete(n)],
            SpeciesKind::Directed => Order::all_labeled(n),
        };
        self.shapes_over(orders, bound)
    }

    fn shapes_over(&self, orders: Vec<Order>, bound: usize) -> Vec<Shape> {
        let mut out = Vec::new();
        for o in orders.into_iter().filter(|o| self.0.supports(o)) {
            for d in self.0.decorations(&o, bound) {
                out.push(Shape::new(o.clone(), d));
            }
        }
        out
    }

    /// One representative per isomorphism class on `n` elements, sorted by key.
    pub fn basis(&self, n: usize, bound: usize) -> Result<Vec<(CanonicalKey, Shape)>, SpeciesError> {
        let orders = match self.kind() {
            SpeciesKind::Ordinary => vec![Order::discrete(n)],
            SpeciesKind::Directed => Order::all_unlabeled(n),
        };
        let mut seen = BTreeMap::new();
        for s in self.shapes_over(orders, bound) {
            let k = self.key(&s)?;
            seen.entry(k).or_insert(s);
        }
        Ok(seen.into_iter().collect())
    }

    /// Basis elements of every size up to `max_size`.
    pub fn basis_up_to(&self, max_size: usize, bound: usize) -> Result<Vec<(CanonicalKey, Shape)>, SpeciesError> {
        let mut out = Vec::new();
        for n in 0..=max_size {
            out.extend(self.basis(n, bound)?);
        }
        Ok(out)
    }

    /// Decorations of `carrier` with the structure isomorphisms lying over
    /// automorphisms of the carrier.
    pub fn enumerate_structures(&self, carrier: &FinPoset, bound: usize) -> Result<FinGroupoid, SpeciesError> {
        let order = carrier.order();
        let n = order.len();
        let mut b = GroupoidBuilder::new();
        if !self.0.supports(order) {
            return Ok(b.build().expect("empty groupoid"));
        }
        let decos = self.0.decorations(order, bound);
        let mut index = HashMap::new();
        for (i, d) in decos.iter().enumerate() {
            let label =
                d.matrices().iter().map(|m| m.iter().map(u8::to_string).collect::<String>()).collect::<Vec<_>>();
            b.add_object(format!("{}[{}]", self.tag(), label.join("|")), n);
            index.insert(d.clone(), i);
        }
        let auts = order.relational().isomorphisms(&order.relational());
        for (i, d) in decos.iter().enumerate() {
            let shape = Shape::new(order.clone(), d.clone());
            for p in &auts {
                let t = self.transport_shape(&shape, p);
                let j = *index
                    .get(t.decoration())
                    .ok_or_else(|| self.invalid("decorations not closed under automorphisms"))?;
                b.add_morphism(i, j, p.iter().map(|&x| x as u16).collect::<Vec<_>>()).expect("valid permutation");
            }
        }
        Ok(b.build().expect("automorphisms form a group"))
    }

    pub fn structure(&self, carrier: FinPoset, deco: Decoration) -> Result<Structure, SpeciesError> {
        let s = Structure { tag: self.tag().into(), carrier, deco };
        self.validate_shape(&s.shape())?;
        Ok(s)
    }

    /// The structure on `0..n` with numbered labels.
    pub fn structure_from_shape(&self, shape: &Shape) -> Result<Structure, SpeciesError> {
        self.structure(FinPoset::numbered(shape.order().clone()), shape.decoration().clone())
    }

    pub fn empty_structure(&self) -> Structure {
        Structure {
            tag: self.tag().into(),
            carrier: FinPoset::numbered(Order::discrete(0)),
            deco: self.empty_decoration(),
        }
    }

    fn empty_decoration(&self) -> Decoration {
        self.0.decorations(&Order::discrete(0), 0).into_iter().next().unwrap_or_default()
    }

    fn check_tag(&self, x: &Structure) -> Result<(), SpeciesError> {
        if x.tag != self.tag() {
            return Err(SpeciesError::Mismatch { expected: self.tag().into(), found: x.tag.clone() });
        }
        Ok(())
    }

    pub fn structure_key(&self, x: &Structure) -> Result<CanonicalKey, SpeciesError> {
        self.check_tag(x)?;
        self.key(&x.shape())
    }

    /// `X|K`; for directed species `K` must be convex.
    pub fn restrict<S: AsRef<str>>(&self, x: &Structure, subset: &[S]) -> Result<Structure, SpeciesError> {
        self.check_tag(x)?;
        let keep = x.carrier.indices(subset)?;
        if let Some((low, mid, high)) = convexity_violation(x.carrier.order(), &keep) {
            let name = |i: usize| x.carrier.labels()[i].clone();
            return Err(SpeciesError::NotConvex { low: name(low), mid: name(mid), high: name(high) });
        }
        let shape = self.0.restrict(&x.shape(), &keep);
        Ok(Structure { tag: x.tag.clone(), carrier: x.carrier.restrict_indices(&keep), deco: shape.deco })
    }

    /// Transport along an order isomorphism onto `target`.
    pub fn transport(
        &self,
        x: &Structure,
        target: &FinPoset,
        iso: &BTreeMap<String, String>,
    ) -> Result<Structure, SpeciesError> {
        self.check_tag(x)?;
        let perm: Vec<usize> = x
            .carrier
            .labels()
            .iter()
            .map(|l| target.index_of(iso.get(l).ok_or_else(|| PosetError::Unassigned(l.clone()))?))
            .collect::<Result<_, PosetError>>()?;
        let shape = self.transport_shape(&x.shape(), &perm);
        if shape.order() != target.order() {
            return Err(self.invalid("transport map is not an order isomorphism"));
        }
        Ok(Structure { tag: x.tag.clone(), carrier: target.clone(), deco: shape.deco })
    }

    /// Disjoint union; labels are prefixed with `L.` and `R.`.
    pub fn product_structure(&self, x: &Structure, y: &Structure) -> Result<Structure, SpeciesError> {
        self.check_tag(x)?;
        self.check_tag(y)?;
        let shape = self.combine_shapes(&x.shape(), &y.shape())?;
        Ok(Structure { tag: x.tag.clone(), carrier: x.carrier.disjoint_union(&y.carrier), deco: shape.deco })
    }

    /// Structure isomorphisms `x → y` as label maps.
    pub fn isomorphisms(&self, x: &Structure, y: &Structure) -> Result<Vec<BTreeMap<String, String>>, SpeciesError> {
        self.check_tag(x)?;
        self.check_tag(y)?;
        let maps = x.shape().relational().isomorphisms(&y.shape().relational());
        Ok(maps
            .into_iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(i, &j)| (x.carrier.labels()[i].clone(), y.carrier.labels()[j].clone()))
                    .collect()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests;
