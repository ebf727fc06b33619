//! Explicit finite groupoids and functors between them.
//!
//! Every morphism carries a *payload*: a permutation of `0..degree`, where
//! the degree is attached to its source and target objects. Composition is
//! payload composition followed by a table lookup, so any groupoid whose
//! automorphism groups act faithfully on `0..degree` can be represented.

mod comma;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use comma::{
    fibre, is_equivalence, is_homotopy_pullback, is_homotopy_pullback_full, is_homotopy_pullback_where,
    is_mono_up_to_equiv, iso_comma, name, EquivalenceWitness, GroupoidSquare, IsoComma,
};

pub type ObjId = usize;
pub type MorId = usize;
pub type Payload = Box<[u16]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("object {0} has no identity morphism")]
    MissingIdentity(String),
    #[error("morphism {0} has no inverse")]
    MissingInverse(String),
    #[error("payload of length {len} does not match degree {degree} at {object}")]
    DegreeMismatch { object: String, len: usize, degree: usize },
    #[error("payload {0:?} is not a permutation")]
    NotPermutation(Vec<u16>),
    #[error("composite of {0} and {1} is missing")]
    NotClosed(String, String),
    #[error("functor does not preserve {0}")]
    NotFunctorial(String),
    #[error("functors are not composable")]
    NotComposable,
    #[error("square does not commute strictly at {0}")]
    NotCommuting(String),
    #[error("unknown object {0}")]
    UnknownObject(usize),
}

pub fn identity_payload(degree: usize) -> Payload {
    (0..degree as u16).collect()
}

/// `g ∘ f` on payloads.
pub fn compose_payload(g: &[u16], f: &[u16]) -> Payload {
    f.iter().map(|&i| g[i as usize]).collect()
}

pub fn invert_payload(p: &[u16]) -> Payload {
    let mut inv = vec![0u16; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u16;
    }
    inv.into()
}

/// Direct sum `p ⊕ q`, acting on `0..|p|+|q|`.
pub fn sum_payload(p: &[u16], q: &[u16]) -> Payload {
    let off = p.len() as u16;
    p.iter().copied().chain(q.iter().map(|&x| x + off)).collect()
}

fn is_permutation(p: &[u16]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| (v as usize) < p.len() && !std::mem::replace(&mut seen[v as usize], true))
}

#[derive(Debug)]
struct Components {
    class_of: Vec<usize>,
    reps: Vec<ObjId>,
}

#[derive(Debug, Default)]
pub struct GroupoidBuilder {
    labels: Vec<String>,
    degrees: Vec<usize>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    payload: Vec<Payload>,
    index: HashMap<(ObjId, ObjId, Payload), MorId>,
}

impl GroupoidBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>, degree: usize) -> ObjId {
        self.labels.push(label.into());
        self.degrees.push(degree);
        self.labels.len() - 1
    }

    /// Adds the identity on every object added so far that lacks one.
    pub fn add_identities(&mut self) {
        for x in 0..self.labels.len() {
            let p = identity_payload(self.degrees[x]);
            self.add_morphism(x, x, p).expect("identity is valid");
        }
    }

    /// Returns the existing id when the morphism is already present.
    pub fn add_morphism(
        &mut self,
        src: ObjId,
        tgt: ObjId,
        payload: impl Into<Payload>,
    ) -> Result<MorId, GroupoidError> {
        let payload = payload.into();
        for end in [src, tgt] {
            if self.degrees[end] != payload.len() {
                return Err(GroupoidError::DegreeMismatch {
                    object: self.labels[end].clone(),
                    len: payload.len(),
                    degree: self.degrees[end],
                });
            }
        }
        if !is_permutation(&payload) {
            return Err(GroupoidError::NotPermutation(payload.to_vec()));
        }
        if let Some(&m) = self.index.get(&(src, tgt, payload.clone())) {
            return Ok(m);
        }
        let id = self.src.len();
        self.src.push(src);
        self.tgt.push(tgt);
        self.payload.push(payload.clone());
        self.index.insert((src, tgt, payload), id);
        Ok(id)
    }

    pub fn object_count(&self) -> usize {
        self.labels.len()
    }

    /// Checks identities and inverses; closure under composition is checked
    /// by [`FinGroupoid::validate`].
    pub fn build(self) -> Result<FinGroupoid, GroupoidError> {
        let n = self.labels.len();
        let mut out = vec![Vec::new(); n];
        for (m, &s) in self.src.iter().enumerate() {
            out[s].push(m);
        }
        let identity = (0..n)
            .map(|x| {
                self.index
                    .get(&(x, x, identity_payload(self.degrees[x])))
                    .copied()
                    .ok_or_else(|| GroupoidError::MissingIdentity(self.labels[x].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let inverse = (0..self.src.len())
            .map(|m| {
                self.index.get(&(self.tgt[m], self.src[m], invert_payload(&self.payload[m]))).copied().ok_or_else(
                    || {
                        GroupoidError::MissingInverse(format!(
                            "{} -> {} {:?}",
                            self.labels[self.src[m]], self.labels[self.tgt[m]], self.payload[m]
                        ))
                    },
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinGroupoid {
            labels: self.labels,
            degrees: self.degrees,
            src: self.src,
            tgt: self.tgt,
            payload: self.payload,
            index: self.index,
            out,
            identity,
            inverse,
            components: OnceLock::new(),
            to_rep: OnceLock::new(),
        })
    }
}

/// A finite groupoid with explicit morphism tables.
pub struct FinGroupoid {
    labels: Vec<String>,
    degrees: Vec<usize>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    payload: Vec<Payload>,
    index: HashMap<(ObjId, ObjId, Payload), MorId>,
    out: Vec<Vec<MorId>>,
    identity: Vec<MorId>,
    inverse: Vec<MorId>,
    components: OnceLock<Components>,
    to_rep: OnceLock<Vec<MorId>>,
}

impl fmt::Debug for FinGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinGroupoid({} objects, {} morphisms)", self.object_count(), self.morphism_count())
    }
}

/// Object count and hom-set sizes, for witness reports.
#[derive(Clone, Debug, Serialize)]
pub struct GroupoidDump {
    pub objects: Vec<String>,
    /// `(source, target, count)` for every non-empty hom-set.
    pub homs: Vec<(usize, usize, usize)>,
}

impl FinGroupoid {
    pub fn empty() -> Self {
        GroupoidBuilder::new().build().expect("empty groupoid")
    }

    /// The terminal groupoid.
    pub fn point() -> Self {
        let mut b = GroupoidBuilder::new();
        b.add_object("*", 0);
        b.add_identities();
        b.build().expect("point")
    }

    /// `n` objects and identities only.
    pub fn discrete(n: usize) -> Self {
        let mut b = GroupoidBuilder::new();
        for i in 0..n {
            b.add_object(i.to_string(), 0);
        }
        b.add_identities();
        b.build().expect("discrete")
    }

    /// One object whose automorphism group is the given permutation group
    /// (closed under composition and inverses).
    pub fn delooping(label: &str, group: &[Vec<u16>]) -> Result<Self, GroupoidError> {
        let degree = group.first().map_or(0, Vec::len);
        let mut b = GroupoidBuilder::new();
        b.add_object(label, degree);
        b.add_identities();
        for p in group {
            b.add_morphism(0, 0, p.clone())?;
        }
        let g = b.build()?;
        g.validate()?;
        Ok(g)
    }

    /// `n` objects, each with a unique morphism to every other.
    pub fn contractible(n: usize) -> Self {
        let mut b = GroupoidBuilder::new();
        for i in 0..n {
            b.add_object(i.to_string(), 0);
        }
        for i in 0..n {
            for j in 0..n {
                b.add_morphism(i, j, Vec::new()).expect("degree zero");
            }
        }
        b.build().expect("contractible")
    }

    pub fn object_count(&self) -> usize {
        self.labels.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn label(&self, x: ObjId) -> &str {
        &self.labels[x]
    }

    pub fn degree(&self, x: ObjId) -> usize {
        self.degrees[x]
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.src[m]
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.tgt[m]
    }

    pub fn payload(&self, m: MorId) -> &[u16] {
        &self.payload[m]
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identity[x]
    }

    pub fn inverse(&self, m: MorId) -> MorId {
        self.inverse[m]
    }

    pub fn out_morphisms(&self, x: ObjId) -> &[MorId] {
        &self.out[x]
    }

    pub fn find(&self, src: ObjId, tgt: ObjId, payload: &[u16]) -> Option<MorId> {
        self.index.get(&(src, tgt, Payload::from(payload))).copied()
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.tgt[f] != self.src[g] {
            return None;
        }
        self.find(self.src[f], self.tgt[g], &compose_payload(&self.payload[g], &self.payload[f]))
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> Vec<MorId> {
        self.out[x].iter().copied().filter(|&m| self.tgt[m] == y).collect()
    }

    pub fn automorphisms(&self, x: ObjId) -> Vec<MorId> {
        self.hom(x, x)
    }

    /// Associativity holds for payload composition; this checks closure.
    pub fn validate(&self) -> Result<(), GroupoidError> {
        for f in 0..self.morphism_count() {
            for &g in &self.out[self.tgt[f]] {
                if self.compose(g, f).is_none() {
                    return Err(GroupoidError::NotClosed(self.describe(g), self.describe(f)));
                }
            }
        }
        Ok(())
    }

    fn describe(&self, m: MorId) -> String {
        format!("{} -> {} {:?}", self.labels[self.src[m]], self.labels[self.tgt[m]], self.payload[m])
    }

    fn components(&self) -> &Components {
        self.components.get_or_init(|| {
            let n = self.object_count();
            let mut class_of = vec![usize::MAX; n];
            let mut reps = Vec::new();
            let mut queue = VecDeque::new();
            for x0 in 0..n {
                if class_of[x0] != usize::MAX {
                    continue;
                }
                let c = reps.len();
                reps.push(x0);
                class_of[x0] = c;
                queue.push_back(x0);
                while let Some(y) = queue.pop_front() {
                    for &m in &self.out[y] {
                        let z = self.tgt[m];
                        if class_of[z] == usize::MAX {
                            class_of[z] = c;
                            queue.push_back(z);
                        }
                    }
                }
            }
            Components { class_of, reps }
        })
    }

    pub fn class_count(&self) -> usize {
        self.components().reps.len()
    }

    pub fn class_of(&self, x: ObjId) -> usize {
        self.components().class_of[x]
    }

    pub fn class_rep(&self, class: usize) -> ObjId {
        self.components().reps[class]
    }

    pub fn rep_of(&self, x: ObjId) -> ObjId {
        self.class_rep(self.class_of(x))
    }

    /// A chosen morphism `x → rep_of(x)`.
    pub fn to_rep(&self, x: ObjId) -> MorId {
        self.to_rep.get_or_init(|| {
            let n = self.object_count();
            let mut to_rep = vec![usize::MAX; n];
            let mut queue = VecDeque::new();
            for &r in &self.components().reps {
                to_rep[r] = self.identity[r];
                queue.push_back(r);
                while let Some(y) = queue.pop_front() {
                    for &m in &self.out[y] {
                        let z = self.tgt[m];
                        if to_rep[z] == usize::MAX {
                            to_rep[z] = self.compose(to_rep[y], self.inverse[m]).expect("groupoid is closed");
                            queue.push_back(z);
                        }
                    }
                }
            }
            to_rep
        })[x]
    }

    /// `(representative, |Aut|)` per connected component.
    pub fn iso_classes(&self) -> Vec<(ObjId, usize)> {
        self.components().reps.iter().map(|&r| (r, self.automorphisms(r).len())).collect()
    }

    /// `Σ 1/|Aut(x)|` over iso-classes.
    pub fn homotopy_cardinality(&self) -> BigRational {
        self.iso_classes()
            .into_iter()
            .fold(BigRational::zero(), |acc, (_, aut)| acc + BigRational::new(BigInt::from(1), BigInt::from(aut)))
    }

    /// Equivalent to a set: all automorphism groups trivial.
    pub fn is_discrete(&self) -> bool {
        self.iso_classes().iter().all(|&(_, aut)| aut == 1)
    }

    pub fn disjoint_union(&self, other: &FinGroupoid) -> FinGroupoid {
        let mut b = GroupoidBuilder::new();
        for x in 0..self.object_count() {
            b.add_object(format!("L.{}", self.labels[x]), self.degrees[x]);
        }
        for x in 0..other.object_count() {
            b.add_object(format!("R.{}", other.labels[x]), other.degrees[x]);
        }
        let off = self.object_count();
        for m in 0..self.morphism_count() {
            b.add_morphism(self.src[m], self.tgt[m], self.payload[m].clone()).expect("valid");
        }
        for m in 0..other.morphism_count() {
            b.add_morphism(off + other.src[m], off + other.tgt[m], other.payload[m].clone()).expect("valid");
        }
        b.build().expect("union of groupoids")
    }

    pub fn product(&self, other: &FinGroupoid) -> FinGroupoid {
        let mut b = GroupoidBuilder::new();
        let no = other.object_count();
        for x in 0..self.object_count() {
            for y in 0..no {
                b.add_object(format!("({}, {})", self.labels[x], other.labels[y]), self.degrees[x] + other.degrees[y]);
            }
        }
        for m in 0..self.morphism_count() {
            for k in 0..other.morphism_count() {
                b.add_morphism(
                    self.src[m] * no + other.src[k],
                    self.tgt[m] * no + other.tgt[k],
                    sum_payload(&self.payload[m], &other.payload[k]),
                )
                .expect("valid");
            }
        }
        b.build().expect("product of groupoids")
    }

    pub fn dump(&self) -> GroupoidDump {
        let mut homs: HashMap<(usize, usize), usize> = HashMap::new();
        for m in 0..self.morphism_count() {
            *homs.entry((self.src[m], self.tgt[m])).or_default() += 1;
        }
        let mut homs: Vec<(usize, usize, usize)> = homs.into_iter().map(|((a, b), c)| (a, b, c)).collect();
        homs.sort_unstable();
        GroupoidDump { objects: self.labels.clone(), homs }
    }
}

/// A functor given by explicit object and morphism tables.
#[derive(Clone)]
pub struct GroupoidFunctor {
    domain: Arc<FinGroupoid>,
    codomain: Arc<FinGroupoid>,
    obj: Vec<ObjId>,
    mor: Vec<MorId>,
}

impl fmt::Debug for GroupoidFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupoidFunctor({:?} -> {:?})", self.domain, self.codomain)
    }
}

impl GroupoidFunctor {
    /// Checks sources, targets and identities.
    pub fn new(
        domain: Arc<FinGroupoid>,
        codomain: Arc<FinGroupoid>,
        obj: Vec<ObjId>,
        mor: Vec<MorId>,
    ) -> Result<Self, GroupoidError> {
        if obj.len() != domain.object_count() || mor.len() != domain.morphism_count() {
            return Err(GroupoidError::NotFunctorial("table sizes".into()));
        }
        for m in 0..mor.len() {
            if codomain.source(mor[m]) != obj[domain.source(m)] || codomain.target(mor[m]) != obj[domain.target(m)] {
                return Err(GroupoidError::NotFunctorial(format!("endpoints of {}", domain.describe(m))));
            }
        }
        for x in 0..obj.len() {
            if mor[domain.identity(x)] != codomain.identity(obj[x]) {
                return Err(GroupoidError::NotFunctorial(format!("identity at {}", domain.label(x))));
            }
        }
        Ok(Self { domain, codomain, obj, mor })
    }

    /// Build from an object map and a payload map; each image morphism is
    /// looked up in the codomain.
    pub fn from_payloads(
        domain: Arc<FinGroupoid>,
        codomain: Arc<FinGroupoid>,
        obj: Vec<ObjId>,
        payload_of: impl Fn(MorId) -> Payload,
    ) -> Result<Self, GroupoidError> {
        let mor = (0..domain.morphism_count())
            .map(|m| {
                let (s, t) = (obj[domain.source(m)], obj[domain.target(m)]);
                codomain
                    .find(s, t, &payload_of(m))
                    .ok_or_else(|| GroupoidError::NotFunctorial(format!("image of {}", domain.describe(m))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(domain, codomain, obj, mor)
    }

    pub fn identity(g: Arc<FinGroupoid>) -> Self {
        let obj = (0..g.object_count()).collect();
        let mor = (0..g.morphism_count()).collect();
        Self { domain: g.clone(), codomain: g, obj, mor }
    }

    /// The unique functor to the point.
    pub fn to_point(domain: Arc<FinGroupoid>, point: Arc<FinGroupoid>) -> Self {
        let obj = vec![0; domain.object_count()];
        let mor = vec![point.identity(0); domain.morphism_count()];
        Self { domain, codomain: point, obj, mor }
    }

    pub fn domain(&self) -> &Arc<FinGroupoid> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinGroupoid> {
        &self.codomain
    }

    pub fn on_object(&self, x: ObjId) -> ObjId {
        self.obj[x]
    }

    pub fn on_morphism(&self, m: MorId) -> MorId {
        self.mor[m]
    }

    pub fn object_table(&self) -> &[ObjId] {
        &self.obj
    }

    pub fn morphism_table(&self) -> &[MorId] {
        &self.mor
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupoidFunctor) -> Result<GroupoidFunctor, GroupoidError> {
        if !Arc::ptr_eq(&first.codomain, &self.domain) {
            return Err(GroupoidError::NotComposable);
        }
        Ok(GroupoidFunctor {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            obj: first.obj.iter().map(|&x| self.obj[x]).collect(),
            mor: first.mor.iter().map(|&m| self.mor[m]).collect(),
        })
    }

    /// Equal on the nose: same endpoints and tables.
    pub fn same_as(&self, other: &GroupoidFunctor) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain)
            && Arc::ptr_eq(&self.codomain, &other.codomain)
            && self.obj == other.obj
            && self.mor == other.mor
    }

    /// First object or morphism where two parallel functors differ.
    pub fn first_difference(&self, other: &GroupoidFunctor) -> Option<String> {
        if let Some(x) = (0..self.obj.len()).find(|&x| self.obj[x] != other.obj[x]) {
            return Some(format!("object {}", self.domain.label(x)));
        }
        (0..self.mor.len())
            .find(|&m| self.mor[m] != other.mor[m])
            .map(|m| format!("morphism {}", self.domain.describe(m)))
    }

    /// Full check of composition preservation.
    pub fn validate(&self) -> Result<(), GroupoidError> {
        let d = &self.domain;
        for f in 0..d.morphism_count() {
            for &g in d.out_morphisms(d.target(f)) {
                let gf = d.compose(g, f).ok_or(GroupoidError::NotClosed(d.describe(g), d.describe(f)))?;
                if self.codomain.compose(self.mor[g], self.mor[f]) != Some(self.mor[gf]) {
                    return Err(GroupoidError::NotFunctorial(format!(
                        "composite {} ∘ {}",
                        d.describe(g),
                        d.describe(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Objects of the codomain hit by the functor.
    pub fn image_objects(&self) -> HashSet<ObjId> {
        self.obj.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    pub(crate) fn bz2() -> FinGroupoid {
        FinGroupoid::delooping("BZ2", &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn s3() -> FinGroupoid {
        let perms: Vec<Vec<u16>> =
            crate::poset::permutations(3).into_iter().map(|p| p.into_iter().map(|x| x as u16).collect()).collect();
        FinGroupoid::delooping("BS3", &perms).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(s3().homotopy_cardinality(), q(1, 6));
        assert_eq!(FinGroupoid::empty().homotopy_cardinality(), BigRational::zero());
        // Structures on a 2-element set with its bijections: one class, two automorphisms.
        let mut b = GroupoidBuilder::new();
        b.add_object("{a,b}", 2);
        b.add_identities();
        b.add_morphism(0, 0, vec![1, 0]).unwrap();
        assert_eq!(b.build().unwrap().homotopy_cardinality(), q(1, 2));
    }

    #[test]
    fn iso_class_examples() {
        let d = FinGroupoid::discrete(3);
        assert_eq!(d.iso_classes(), vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(s3().iso_classes(), vec![(0, 6)]);
        let mut b = GroupoidBuilder::new();
        b.add_object("x", 2);
        b.add_object("y", 2);
        for (s, t) in [(0, 0), (1, 1), (0, 1), (1, 0)] {
            b.add_morphism(s, t, vec![0, 1]).unwrap();
            b.add_morphism(s, t, vec![1, 0]).unwrap();
        }
        let g = b.build().unwrap();
        g.validate().unwrap();
        assert_eq!(g.iso_classes(), vec![(0, 2)]);
    }

    #[test]
    fn builder_rejects_incomplete_tables() {
        let mut b = GroupoidBuilder::new();
        b.add_object("x", 1);
        assert!(matches!(b.build(), Err(GroupoidError::MissingIdentity(_))));

        let mut b = GroupoidBuilder::new();
        b.add_object("x", 0);
        b.add_object("y", 0);
        b.add_identities();
        b.add_morphism(0, 1, vec![]).unwrap();
        assert!(matches!(b.build(), Err(GroupoidError::MissingInverse(_))));

        let mut b = GroupoidBuilder::new();
        b.add_object("x", 2);
        assert!(matches!(b.add_morphism(0, 0, vec![0]), Err(GroupoidError::DegreeMismatch { .. })));
        assert!(matches!(b.add_morphism(0, 0, vec![0, 0]), Err(GroupoidError::NotPermutation(_))));
    }

    #[test]
    fn unclosed_tables_fail_validation() {
        let mut b = GroupoidBuilder::new();
        b.add_object("x", 3);
        b.add_identities();
        b.add_morphism(0, 0, vec![1, 0, 2]).unwrap();
        b.add_morphism(0, 0, vec![0, 2, 1]).unwrap();
        assert!(matches!(b.build().unwrap().validate(), Err(GroupoidError::NotClosed(..))));
    }

    #[test]
    fn to_rep_lands_on_representatives() {
        let g = FinGroupoid::contractible(4);
        for x in 0..4 {
            let m = g.to_rep(x);
            assert_eq!((g.source(m), g.target(m)), (x, 0));
        }
    }

    #[test]
    fn cardinality_is_additive_and_multiplicative() {
        let gs = [FinGroupoid::point(), bz2(), s3(), FinGroupoid::discrete(2), FinGroupoid::contractible(3)];
        for g in &gs {
            for h in &gs {
                let u = g.disjoint_union(h);
                u.validate().unwrap();
                assert_eq!(u.homotopy_cardinality(), g.homotopy_cardinality() + h.homotopy_cardinality());
                let p = g.product(h);
                p.validate().unwrap();
                assert_eq!(p.homotopy_cardinality(), g.homotopy_cardinality() * h.homotopy_cardinality());
            }
        }
        assert_eq!(FinGroupoid::contractible(3).homotopy_cardinality(), BigRational::one());
    }

    #[test]
    fn discreteness() {
        assert!(FinGroupoid::discrete(3).is_discrete());
        assert!(FinGroupoid::contractible(3).is_discrete());
        assert!(!bz2().is_discrete());
    }

    #[test]
    fn functor_checks() {
        let g = Arc::new(bz2());
        let pt = Arc::new(FinGroupoid::point());
        let f = GroupoidFunctor::to_point(g.clone(), pt.clone());
        f.validate().unwrap();
        let id = GroupoidFunctor::identity(g.clone());
        assert!(f.compose(&id).unwrap().same_as(&f));
        assert!(id.compose(&f).is_err());
        // Sending the swap to the identity and vice versa breaks identities.
        let swap = g.find(0, 0, &[1, 0]).unwrap();
        let idm = g.identity(0);
        let mut mor = vec![0; 2];
        mor[idm] = swap;
        mor[swap] = idm;
        assert!(GroupoidFunctor::new(g.clone(), g, vec![0], mor).is_err());
    }

    #[test]
    fn dump_lists_hom_sizes() {
        let d = bz2().dump();
        assert_eq!(d.objects, ["BZ2"]);
        assert_eq!(d.homs, vec![(0, 0, 2)]);
    }
}
