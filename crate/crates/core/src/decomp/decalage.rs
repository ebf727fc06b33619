//! Lower and upper décalage, fat nerves of restriction categories, and the
//! comparison between them.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::checks::{check_culf, check_segal};
use super::layered::describe_shape;
use super::{
    build, AxiomReport, BuildOptions, CheckResult, DecompError, LayeredComplex, LevelwiseMap, Provenance,
    TruncatedSimplicialGroupoid,
};
use crate::groupoid::{is_equivalence, FinGroupoid, GroupoidBuilder, GroupoidFunctor, MorId, ObjId, Payload};
use crate::poset::permutations;
use crate::species::{Shape, Species, SpeciesError, SpeciesKind};
use crate::Exec;

/// A décalage with its dec map back to the original.
#[derive(Clone, Debug)]
pub struct Decalage {
    pub complex: TruncatedSimplicialGroupoid,
    pub map: LevelwiseMap,
}

fn shifted(
    t: &TruncatedSimplicialGroupoid,
    construction: &str,
) -> Result<(Vec<Arc<FinGroupoid>>, Provenance), DecompError> {
    if t.top() == 0 {
        return Err(DecompError::Truncation { needed: 1, top: 0 });
    }
    let levels = (1..=t.top()).map(|n| t.level(n).clone()).collect();
    let mut provenance = t.provenance().clone();
    provenance.construction = format!("{construction}({})", provenance.construction);
    Ok((levels, provenance))
}

/// Drop the bottom face: level `k` is `X_{k+1}` with faces `d_1..d_{k+1}`;
/// the dec map is `d_0`.
pub fn dec_bot(t: &TruncatedSimplicialGroupoid) -> Result<Decalage, DecompError> {
    let (levels, provenance) = shifted(t, "dec_bot")?;
    let top = t.top() - 1;
    let mut faces = vec![Vec::new()];
    faces.extend((1..=top).map(|k| (0..=k).map(|i| t.face(k + 1, i + 1).clone()).collect()));
    let degeneracies = (0..top).map(|k| (0..=k).map(|i| t.degeneracy(k + 1, i + 1).clone()).collect()).collect();
    let map = LevelwiseMap::new((0..=top).map(|k| t.face(k + 1, 0).clone()).collect());
    Ok(Decalage { complex: TruncatedSimplicialGroupoid::new(levels, faces, degeneracies, provenance)?, map })
}

/// Drop the top face: level `k` is `X_{k+1}` with faces `d_0..d_k`; the dec
/// map is `d_{k+1}`.
pub fn dec_top(t: &TruncatedSimplicialGroupoid) -> Result<Decalage, DecompError> {
    let (levels, provenance) = shifted(t, "dec_top")?;
    let top = t.top() - 1;
    let mut faces = vec![Vec::new()];
    faces.extend((1..=top).map(|k| (0..=k).map(|i| t.face(k + 1, i).clone()).collect()));
    let degeneracies = (0..top).map(|k| (0..=k).map(|i| t.degeneracy(k + 1, i).clone()).collect()).collect();
    let map = LevelwiseMap::new((0..=top).map(|k| t.face(k + 1, k + 1).clone()).collect());
    Ok(Decalage { complex: TruncatedSimplicialGroupoid::new(levels, faces, degeneracies, provenance)?, map })
}

/// Which restriction category the fat nerve is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NerveVariant {
    /// Inclusions of lower sets.
    Lower,
    /// Inclusions of upper sets, taken in the opposite category.
    UpperOp,
    /// Arbitrary injections of an ordinary species.
    AllInjections,
}

impl NerveVariant {
    /// Map `j` of a chain goes from part `j` to part `j + 1`, or backwards for
    /// the opposite category.
    fn ends(self, j: usize) -> (usize, usize) {
        match self {
            NerveVariant::UpperOp => (j + 1, j),
            _ => (j, j + 1),
        }
    }
}

/// A composable string of restriction-compatible injections. `maps[j]`
/// sends positions of its source part to positions of its target part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub parts: Vec<Shape>,
    pub maps: Vec<Vec<u8>>,
}

impl Chain {
    fn transport(&self, species: &Species, variant: NerveVariant, perms: &[&[usize]]) -> Chain {
        let parts = self.parts.iter().zip(perms).map(|(p, s)| species.transport_shape(p, s)).collect();
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let (src, tgt) = variant.ends(j);
                let mut out = vec![0u8; f.len()];
                for (p, &v) in f.iter().enumerate() {
                    out[perms[src][p]] = perms[tgt][v as usize] as u8;
                }
                out
            })
            .collect();
        Chain { parts, maps }
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(describe_shape).collect();
        let maps: Vec<String> =
            self.maps.iter().map(|f| f.iter().map(u8::to_string).collect::<Vec<_>>().join(",")).collect();
        format!("{} via {}", parts.join(" | "), maps.join(" | "))
    }

    fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Shape::len).collect()
    }

    /// Delete part `i`, composing the two maps through it.
    fn delete(&self, variant: NerveVariant, i: usize) -> Chain {
        let mut parts = self.parts.clone();
        parts.remove(i);
        let k = self.maps.len();
        let mut maps = self.maps.clone();
        if i == 0 {
            maps.remove(0);
        } else if i == k {
            maps.pop();
        } else {
            let (first, second) = match variant {
                NerveVariant::UpperOp => (&self.maps[i], &self.maps[i - 1]),
                _ => (&self.maps[i - 1], &self.maps[i]),
            };
            let composed = first.iter().map(|&p| second[p as usize]).collect();
            maps.splice(i - 1..=i, [composed]);
        }
        Chain { parts, maps }
    }

    /// Repeat part `i` with an identity map.
    fn repeat(&self, i: usize) -> Chain {
        let mut parts = self.parts.clone();
        parts.insert(i, self.parts[i].clone());
        let mut maps = self.maps.clone();
        maps.insert(i, (0..self.parts[i].len() as u8).collect());
        Chain { parts, maps }
    }
}

/// Chains determined by a labelled structure and a `(k+1)`-layering: lower
/// variants take the cumulative unions of layers from the bottom, the upper
/// variant from the top.
pub(crate) fn chain_of_layering(
    species: &Species,
    variant: NerveVariant,
    shape: &Shape,
    level: &[u8],
    k: usize,
) -> (Chain, Vec<Vec<usize>>) {
    let keeps: Vec<Vec<usize>> = (0..=k)
        .map(|i| {
            let i = i as u8 + 1;
            (0..level.len())
                .filter(|&x| match variant {
                    NerveVariant::UpperOp => level[x] >= i,
                    _ => level[x] <= i,
                })
                .collect()
        })
        .collect();
    let parts = keeps.iter().map(|keep| species.def().restrict(shape, keep)).collect();
    let maps = (0..k)
        .map(|j| {
            let (src, tgt) = variant.ends(j);
            keeps[src].iter().map(|x| keeps[tgt].binary_search(x).expect("nested") as u8).collect()
        })
        .collect();
    (Chain { parts, maps }, keeps)
}

fn block_offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

/// The truncated fat nerve together with the chain behind every object.
#[derive(Clone, Debug)]
pub struct FatNerve {
    pub variant: NerveVariant,
    simplicial: TruncatedSimplicialGroupoid,
    objects: Vec<Vec<Chain>>,
    index: Vec<HashMap<Chain, ObjId>>,
}

impl FatNerve {
    pub fn simplicial(&self) -> &TruncatedSimplicialGroupoid {
        &self.simplicial
    }

    pub fn object(&self, k: usize, x: ObjId) -> &Chain {
        &self.objects[k][x]
    }

    pub fn find(&self, k: usize, c: &Chain) -> Option<ObjId> {
        self.index[k].get(c).copied()
    }
}

struct NerveLevel {
    groupoid: Arc<FinGroupoid>,
    objects: Vec<Chain>,
    index: HashMap<Chain, ObjId>,
}

fn tuples(sizes: &[usize], perms: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| (0..perms[s].len()).map(move |p| [t.clone(), vec![p]].concat()))
            .collect();
    }
    out
}

fn nerve_level(
    species: &Species,
    variant: NerveVariant,
    k: usize,
    tops: &[Shape],
    perms: &[Vec<Vec<usize>>],
    cap: usize,
) -> Result<NerveLevel, DecompError> {
    let mut objects: Vec<Chain> = Vec::new();
    let mut index: HashMap<Chain, ObjId> = HashMap::new();
    for top in tops {
        for level in top.order().layerings(k + 1) {
            let (seed, _) = chain_of_layering(species, variant, top, &level, k);
            if index.contains_key(&seed) {
                continue;
            }
            for t in tuples(&seed.sizes(), perms) {
                let ps: Vec<&[usize]> = t.iter().zip(seed.sizes()).map(|(&p, s)| perms[s][p].as_slice()).collect();
                let c = seed.transport(species, variant, &ps);
                if !index.contains_key(&c) {
                    index.insert(c.clone(), objects.len());
                    objects.push(c);
                }
            }
        }
    }
    let estimate: usize = objects.iter().map(|c| c.sizes().iter().map(|&s| perms[s].len()).product::<usize>()).sum();
    if estimate > cap {
        return Err(DecompError::LevelTooLarge { level: k, morphisms: estimate, cap });
    }
    let mut b = GroupoidBuilder::new();
    for c in &objects {
        b.add_object(c.describe(), c.sizes().iter().sum());
    }
    for (id, c) in objects.iter().enumerate() {
        let sizes = c.sizes();
        for t in tuples(&sizes, perms) {
            let ps: Vec<&[usize]> = t.iter().zip(&sizes).map(|(&p, &s)| perms[s][p].as_slice()).collect();
            let target = index[&c.transport(species, variant, &ps)];
            let offsets = &block_offsets(&sizes);
            let payload: Payload =
                ps.iter().enumerate().flat_map(|(j, p)| p.iter().map(move |&v| (v + offsets[j]) as u16)).collect();
            b.add_morphism(id, target, payload)?;
        }
    }
    Ok(NerveLevel { groupoid: Arc::new(b.build()?), objects, index })
}

/// A functor between nerve levels given on chains, with payload blocks
/// rearranged by `blocks` (source block index for each target block).
fn nerve_functor(
    from: &NerveLevel,
    to: &NerveLevel,
    on_chain: impl Fn(&Chain) -> Chain,
    blocks: impl Fn(usize) -> usize,
) -> Result<GroupoidFunctor, DecompError> {
    let obj = from
        .objects
        .iter()
        .map(|c| {
            to.index
                .get(&on_chain(c))
                .copied()
                .ok_or_else(|| DecompError::Inconsistent(format!("image of {}", c.describe())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = &from.groupoid;
    let image_lens: Vec<usize> = obj.iter().map(|&o| to.objects[o].parts.len()).collect();
    let payload_of = |m: MorId| -> Payload {
        let c = &from.objects[g.source(m)];
        let sizes = c.sizes();
        let offsets = block_offsets(&sizes);
        let p = g.payload(m);
        let image_len = image_lens[g.source(m)];
        let mut out = Vec::new();
        let mut base = 0u16;
        for j in 0..image_len {
            let b = blocks(j);
            out.extend(p[offsets[b]..offsets[b + 1]].iter().map(|&v| v - offsets[b] as u16 + base));
            base += sizes[b] as u16;
        }
        out.into()
    };
    Ok(GroupoidFunctor::from_payloads(g.clone(), to.groupoid.clone(), obj, payload_of)?)
}

/// The fat nerve truncated at `levels`, on structures of size `≤ size`.
pub fn fat_nerve(
    species: &Species,
    variant: NerveVariant,
    levels: usize,
    size: usize,
    bound: usize,
) -> Result<FatNerve, DecompError> {
    if variant == NerveVariant::AllInjections && species.kind() != SpeciesKind::Ordinary {
        return Err(SpeciesError::NotOrdinary(species.tag().into()).into());
    }
    let cap = BuildOptions::new(levels, size).max_morphisms;
    let tops: Vec<Shape> = species.basis_up_to(size, bound)?.into_iter().map(|(_, s)| s).collect();
    let perms: Vec<Vec<Vec<usize>>> = (0..=size).map(permutations).collect();
    let lv =
        (0..=levels).map(|k| nerve_level(species, variant, k, &tops, &perms, cap)).collect::<Result<Vec<_>, _>>()?;
    let mut faces = vec![Vec::new()];
    for k in 1..=levels {
        let row = (0..=k)
            .map(|i| nerve_functor(&lv[k], &lv[k - 1], |c| c.delete(variant, i), |j| if j < i { j } else { j + 1 }))
            .collect::<Result<Vec<_>, _>>()?;
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for k in 0..levels {
        let row = (0..=k)
            .map(|i| nerve_functor(&lv[k], &lv[k + 1], |c| c.repeat(i), |j| if j <= i { j } else { j - 1 }))
            .collect::<Result<Vec<_>, _>>()?;
        degeneracies.push(row);
    }
    let provenance =
        Provenance { construction: format!("nerve-{variant:?}"), species: species.tag().into(), size, bound };
    let simplicial = TruncatedSimplicialGroupoid::new(
        lv.iter().map(|l| l.groupoid.clone()).collect(),
        faces,
        degeneracies,
        provenance,
    )?;
    let (objects, index) = lv.into_iter().map(|l| (l.objects, l.index)).unzip();
    Ok(FatNerve { variant, simplicial, objects, index })
}

/// Send a `(k+1)`-layered structure to its chain of cumulative layers.
fn comparison(
    ds: &LayeredComplex,
    nerve: &FatNerve,
    dec: &TruncatedSimplicialGroupoid,
) -> Result<LevelwiseMap, DecompError> {
    let species = ds.species();
    let mut components = Vec::new();
    for k in 0..=dec.top().min(nerve.simplicial.top()) {
        let g = dec.level(k).clone();
        let mut obj = Vec::new();
        let mut keeps = Vec::new();
        for y in 0..g.object_count() {
            let x = ds.object(k + 1, y);
            let (c, keep) = chain_of_layering(species, nerve.variant, &x.shape, &x.level, k);
            obj.push(nerve.find(k, &c).ok_or_else(|| DecompError::Inconsistent(format!("chain of {}", x.describe())))?);
            keeps.push(keep);
        }
        let payload_of = |m: MorId| -> Payload {
            let (s, t) = (g.source(m), g.target(m));
            let sigma = g.payload(m);
            let mut out = Vec::new();
            let mut base = 0u16;
            for (ks, kt) in keeps[s].iter().zip(&keeps[t]) {
                out.extend(
                    ks.iter().map(|&x| kt.binary_search(&(sigma[x] as usize)).expect("equivariant") as u16 + base),
                );
                base += ks.len() as u16;
            }
            out.into()
        };
        components.push(GroupoidFunctor::from_payloads(g.clone(), nerve.simplicial.level(k).clone(), obj, payload_of)?);
    }
    Ok(LevelwiseMap::new(components))
}

/// Compare both décalages of the layered complex with the matching fat
/// nerves at levels `≤ levels`: a level-wise equivalence that commutes with
/// every face and degeneracy on the nose.
pub fn check_decalage_formulas(
    species: &Species,
    levels: usize,
    size: usize,
    bound: usize,
    exec: Exec,
) -> Result<AxiomReport, DecompError> {
    let ds = build(species, &BuildOptions::new(levels + 1, size).with_bound(bound))?;
    let lower = match species.kind() {
        SpeciesKind::Ordinary => NerveVariant::AllInjections,
        SpeciesKind::Directed => NerveVariant::Lower,
    };
    let mut results = Vec::new();
    for (side, dec, variant) in
        [("bottom", dec_bot(ds.simplicial())?, lower), ("top", dec_top(ds.simplicial())?, NerveVariant::UpperOp)]
    {
        let nerve = fat_nerve(species, variant, levels, size, bound)?;
        let c = comparison(&ds, &nerve, &dec.complex)?;
        let per_level = exec.map(&c.components, is_equivalence);
        for (k, outcome) in per_level.into_iter().enumerate() {
            results.push(CheckResult::from_outcome(format!("{side}-equivalence@X{k}"), outcome));
        }
        let name = format!("{side}-simplicial");
        match c.check_simplicial(&dec.complex, nerve.simplicial()) {
            Ok(()) => results.push(CheckResult::pass(name)),
            Err(DecompError::NotSimplicial(at)) => results.push(CheckResult::fail(name, at)),
            Err(e) => return Err(e),
        }
    }
    Ok(AxiomReport::new("decalage", results))
}

/// Both décalages are Segal and both dec maps are CULF, within the
/// truncation. `max_degree` is passed on to [`check_segal`].
pub fn check_dec_coherence(
    t: &TruncatedSimplicialGroupoid,
    max_degree: Option<usize>,
    exec: Exec,
) -> Result<AxiomReport, DecompError> {
    let mut parts = Vec::new();
    for (side, dec) in [("bottom", dec_bot(t)?), ("top", dec_top(t)?)] {
        let mut segal = check_segal(&dec.complex, max_degree, exec)?;
        segal.check = format!("{side}-segal");
        let mut culf = check_culf(&dec.map, &dec.complex, t, exec)?;
        culf.check = format!("{side}-culf");
        parts.extend([segal, culf]);
    }
    Ok(AxiomReport::merge("dec-coherence", parts))
}
