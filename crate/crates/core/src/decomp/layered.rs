//! The decomposition space of layered structures of a species, truncated at a
//! level and a carrier size.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{DecompError, LevelwiseMap, Provenance, TruncatedSimplicialGroupoid};
use crate::groupoid::{FinGroupoid, GroupoidBuilder, GroupoidFunctor, MorId, ObjId, Payload};
use crate::poset::{permutations, CanonicalKey};
use crate::simplex::DeltaMap;
use crate::species::{Shape, Species, SpeciesError};

/// A labelled structure on `0..s` with a level in `1..=k` for each element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayeredShape {
    pub shape: Shape,
    pub level: Vec<u8>,
}

impl LayeredShape {
    pub fn new(shape: Shape, level: Vec<u8>) -> Self {
        Self { shape, level }
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    /// Element `i` moves to `perm[i]`.
    pub fn transport(&self, species: &Species, perm: &[usize]) -> LayeredShape {
        let mut level = vec![0; self.level.len()];
        for (i, &p) in perm.iter().enumerate() {
            level[p] = self.level[i];
        }
        LayeredShape { shape: species.transport_shape(&self.shape, perm), level }
    }

    /// The action of `a: [m] → [n]` on an `n`-layered structure, with the
    /// sorted list of surviving elements.
    pub fn apply(&self, species: &Species, a: &DeltaMap) -> (LayeredShape, Vec<usize>) {
        let (generic, free) = a.generic_free_factorize();
        let offset = free.values()[0];
        let width = generic.target();
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| (self.level[i] as usize) > offset && (self.level[i] as usize) <= offset + width)
            .collect();
        let dual = generic.joyal_dual().expect("generic part");
        let level = keep.iter().map(|&i| dual.apply(self.level[i] as usize - offset) as u8).collect();
        (LayeredShape { shape: species.def().restrict(&self.shape, &keep), level }, keep)
    }

    /// Some layer in `1..=k` is empty.
    pub fn has_empty_layer(&self, k: usize) -> bool {
        (1..=k as u8).any(|l| !self.level.contains(&l))
    }

    /// Compact label such as `3{0<1}[0-1,1-0]@1,1,2`.
    pub fn describe(&self) -> String {
        let levels: Vec<String> = self.level.iter().map(u8::to_string).collect();
        format!("{}@{}", describe_shape(&self.shape), levels.join(","))
    }
}

/// Size, cover relations and non-zero decoration entries.
pub fn describe_shape(shape: &Shape) -> String {
    let n = shape.len();
    let covers: Vec<String> = shape.order().covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    let mut s = format!("{n}{{{}}}", covers.join(","));
    for m in shape.decoration().matrices() {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                match m[i * n + j] {
                    0 => {}
                    1 => entries.push(format!("{i}-{j}")),
                    c => entries.push(format!("{i}-{j}x{c}")),
                }
            }
        }
        let _ = write!(s, "[{}]", entries.join(","));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Top simplicial level `N`.
    pub levels: usize,
    /// Largest carrier.
    pub size: usize,
    /// Decoration bound passed to the species.
    pub bound: usize,
    /// Refuse levels estimated to exceed this many morphisms.
    pub max_morphisms: usize,
}

impl BuildOptions {
    pub fn new(levels: usize, size: usize) -> Self {
        Self { levels, size, bound: 1, max_morphisms: 4_000_000 }
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }
}

/// The layered-structure simplicial groupoid together with the labelled
/// shape behind every object.
#[derive(Clone, Debug)]
pub struct LayeredComplex {
    species: Species,
    options: BuildOptions,
    simplicial: TruncatedSimplicialGroupoid,
    objects: Vec<Vec<LayeredShape>>,
    index: Vec<HashMap<LayeredShape, ObjId>>,
}

struct Level {
    groupoid: Arc<FinGroupoid>,
    objects: Vec<LayeredShape>,
    index: HashMap<LayeredShape, ObjId>,
}

fn to_payload(p: &[usize]) -> Payload {
    p.iter().map(|&x| x as u16).collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn build_level(species: &Species, opts: &BuildOptions, k: usize, shapes: &[Vec<Shape>]) -> Result<Level, DecompError> {
    let mut objects = Vec::new();
    for (s, list) in shapes.iter().enumerate() {
        for shape in list {
            for level in shape.order().layerings(k) {
                debug_assert_eq!(level.len(), s);
                objects.push(LayeredShape::new(shape.clone(), level));
            }
        }
    }
    let estimate: usize = objects.iter().map(|x| factorial(x.len())).sum();
    if estimate > opts.max_morphisms {
        return Err(DecompError::LevelTooLarge { level: k, morphisms: estimate, cap: opts.max_morphisms });
    }
    let index: HashMap<LayeredShape, ObjId> = objects.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut b = GroupoidBuilder::new();
    for x in &objects {
        b.add_object(x.describe(), x.len());
    }
    let perms: Vec<Vec<Vec<usize>>> = (0..shapes.len()).map(permutations).collect();
    for (id, x) in objects.iter().enumerate() {
        for p in &perms[x.len()] {
            let target = index[&x.transport(species, p)];
            b.add_morphism(id, target, to_payload(p))?;
        }
    }
    Ok(Level { groupoid: Arc::new(b.build()?), objects, index })
}

/// `X(a)` computed directly on layered shapes.
fn direct_operator(species: &Species, a: &DeltaMap, from: &Level, to: &Level) -> Result<GroupoidFunctor, DecompError> {
    let mut obj = Vec::with_capacity(from.objects.len());
    let mut keeps = Vec::with_capacity(from.objects.len());
    for x in &from.objects {
        let (y, keep) = x.apply(species, a);
        let id =
            *to.index.get(&y).ok_or_else(|| DecompError::Inconsistent(format!("image of {} missing", x.describe())))?;
        obj.push(id);
        keeps.push(keep);
    }
    let g = &from.groupoid;
    let payload_of = |m: MorId| -> Payload {
        let (src, tgt) = (g.source(m), g.target(m));
        let sigma = g.payload(m);
        keeps[src]
            .iter()
            .map(|&i| keeps[tgt].binary_search(&(sigma[i] as usize)).expect("equivariant restriction") as u16)
            .collect()
    };
    Ok(GroupoidFunctor::from_payloads(g.clone(), to.groupoid.clone(), obj, payload_of)?)
}

/// Build `X_0..X_N` for `species` with carriers of size `≤ opts.size`.
pub fn build(species: &Species, opts: &BuildOptions) -> Result<LayeredComplex, DecompError> {
    let shapes: Vec<Vec<Shape>> = (0..=opts.size).map(|s| species.shapes(s, opts.bound)).collect();
    let levels = (0..=opts.levels).map(|k| build_level(species, opts, k, &shapes)).collect::<Result<Vec<_>, _>>()?;
    let mut faces = vec![Vec::new()];
    for n in 1..=opts.levels {
        let row = (0..=n)
            .map(|i| direct_operator(species, &DeltaMap::coface(n - 1, i), &levels[n], &levels[n - 1]))
            .collect::<Result<Vec<_>, _>>()?;
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for n in 0..opts.levels {
        let row = (0..=n)
            .map(|i| direct_operator(species, &DeltaMap::codegeneracy(n, i), &levels[n], &levels[n + 1]))
            .collect::<Result<Vec<_>, _>>()?;
        degeneracies.push(row);
    }
    let provenance = Provenance {
        construction: "layered".into(),
        species: species.tag().into(),
        size: opts.size,
        bound: opts.bound,
    };
    let simplicial = TruncatedSimplicialGroupoid::new(
        levels.iter().map(|l| l.groupoid.clone()).collect(),
        faces,
        degeneracies,
        provenance,
    )?;
    let (objects, index) = levels.into_iter().map(|l| (l.objects, l.index)).unzip();
    Ok(LayeredComplex { species: species.clone(), options: *opts, simplicial, objects, index })
}

impl LayeredComplex {
    pub fn simplicial(&self) -> &TruncatedSimplicialGroupoid {
        &self.simplicial
    }

    pub fn into_simplicial(self) -> TruncatedSimplicialGroupoid {
        self.simplicial
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn options(&self) -> &BuildOptions {
        &self.options
    }

    pub fn top(&self) -> usize {
        self.simplicial.top()
    }

    pub fn level(&self, n: usize) -> &Arc<FinGroupoid> {
        self.simplicial.level(n)
    }

    pub fn object(&self, n: usize, x: ObjId) -> &LayeredShape {
        &self.objects[n][x]
    }

    pub fn find(&self, n: usize, x: &LayeredShape) -> Option<ObjId> {
        self.index[n].get(x).copied()
    }

    /// Iso-class key of the underlying structure.
    pub fn structure_key(&self, n: usize, x: ObjId) -> Result<CanonicalKey, SpeciesError> {
        self.species.key(&self.objects[n][x].shape)
    }

    /// `X(a)` computed on shapes rather than by composing faces and
    /// degeneracies.
    pub fn direct_operator(&self, a: &DeltaMap) -> Result<GroupoidFunctor, DecompError> {
        let top = self.top();
        for needed in [a.source(), a.target()] {
            if needed > top {
                return Err(DecompError::Truncation { needed, top });
            }
        }
        let level = |n: usize| Level {
            groupoid: self.level(n).clone(),
            objects: self.objects[n].clone(),
            index: self.index[n].clone(),
        };
        direct_operator(&self.species, a, &level(a.target()), &level(a.source()))
    }

    /// Objects of `X_n` with an empty layer.
    pub fn empty_layer_objects(&self, n: usize) -> Vec<ObjId> {
        (0..self.objects[n].len()).filter(|&x| self.objects[n][x].has_empty_layer(n)).collect()
    }

    /// The level-wise map induced by a shape map that fixes carriers, such as
    /// forgetting a decoration. Morphisms keep their permutation.
    pub fn project_to(
        &self,
        target: &LayeredComplex,
        f: impl Fn(&Shape) -> Shape,
    ) -> Result<LevelwiseMap, DecompError> {
        let top = self.top().min(target.top());
        let mut components = Vec::new();
        for n in 0..=top {
            let obj = self.objects[n]
                .iter()
                .map(|x| {
                    let y = LayeredShape::new(f(&x.shape), x.level.clone());
                    target
                        .find(n, &y)
                        .ok_or_else(|| DecompError::Inconsistent(format!("projection of {} missing", x.describe())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let g = self.level(n).clone();
            let component =
                GroupoidFunctor::from_payloads(g.clone(), target.level(n).clone(), obj, |m| g.payload(m).into())?;
            components.push(component);
        }
        Ok(LevelwiseMap::new(components))
    }
}
