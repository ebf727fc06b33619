//! Level-wise disjoint union `X × X → X` for monoidal species.

use std::sync::Arc;

use super::{
    build, check_culf, AxiomReport, BuildOptions, DecompError, LayeredComplex, LayeredShape, LevelwiseMap,
    TruncatedSimplicialGroupoid,
};
use crate::groupoid::{FinGroupoid, GroupoidFunctor};
use crate::species::{Species, SpeciesError};
use crate::Exec;

fn product_functor(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
    domain: Arc<FinGroupoid>,
    codomain: Arc<FinGroupoid>,
) -> Result<GroupoidFunctor, DecompError> {
    let (gd, gc) = (g.domain(), g.codomain());
    let obj = (0..f.domain().object_count())
        .flat_map(|x| (0..gd.object_count()).map(move |y| (x, y)))
        .map(|(x, y)| f.on_object(x) * gc.object_count() + g.on_object(y))
        .collect();
    let mor = (0..f.domain().morphism_count())
        .flat_map(|m| (0..gd.morphism_count()).map(move |k| (m, k)))
        .map(|(m, k)| f.on_morphism(m) * gc.morphism_count() + g.on_morphism(k))
        .collect();
    Ok(GroupoidFunctor::new(domain, codomain, obj, mor)?)
}

/// The level-wise square `X × X` of a truncated simplicial groupoid.
pub fn product_complex(t: &TruncatedSimplicialGroupoid) -> Result<TruncatedSimplicialGroupoid, DecompError> {
    let levels: Vec<Arc<FinGroupoid>> = (0..=t.top()).map(|n| Arc::new(t.level(n).product(t.level(n)))).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=t.top() {
        let row = (0..=n)
            .map(|i| product_functor(t.face(n, i), t.face(n, i), levels[n].clone(), levels[n - 1].clone()))
            .collect::<Result<Vec<_>, _>>()?;
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for n in 0..t.top() {
        let row = (0..=n)
            .map(|i| product_functor(t.degeneracy(n, i), t.degeneracy(n, i), levels[n].clone(), levels[n + 1].clone()))
            .collect::<Result<Vec<_>, _>>()?;
        degeneracies.push(row);
    }
    let mut provenance = t.provenance().clone();
    provenance.construction = format!("square({})", provenance.construction);
    TruncatedSimplicialGroupoid::new(levels, faces, degeneracies, provenance)
}

/// Layer-wise disjoint union from `small × small` into `big`, where `big`
/// must hold carriers up to twice the size of `small`.
pub fn monoidal_map(
    small: &LayeredComplex,
    product: &TruncatedSimplicialGroupoid,
    big: &LayeredComplex,
) -> Result<LevelwiseMap, DecompError> {
    let species = small.species();
    let mut components = Vec::new();
    for n in 0..=product.top().min(big.top()) {
        let count = small.level(n).object_count();
        let obj = (0..count * count)
            .map(|xy| {
                let (x, y) = (small.object(n, xy / count), small.object(n, xy % count));
                let shape = species.combine_shapes(&x.shape, &y.shape)?;
                let joined = LayeredShape::new(shape, [x.level.as_slice(), y.level.as_slice()].concat());
                big.find(n, &joined).ok_or_else(|| {
                    DecompError::Inconsistent(format!("union {} + {} missing", x.describe(), y.describe()))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = product.level(n).clone();
        components.push(GroupoidFunctor::from_payloads(g.clone(), big.level(n).clone(), obj, |m| g.payload(m).into())?);
    }
    Ok(LevelwiseMap::new(components))
}

/// CULF check of the disjoint-union map on carriers of size `≤ size`.
pub fn check_monoidal(
    species: &Species,
    levels: usize,
    size: usize,
    bound: usize,
    exec: Exec,
) -> Result<AxiomReport, DecompError> {
    if !species.is_monoidal() {
        return Err(SpeciesError::NotMonoidal(species.tag().into()).into());
    }
    let small = build(species, &BuildOptions::new(levels, size).with_bound(bound))?;
    let big = build(species, &BuildOptions::new(levels, 2 * size).with_bound(2 * bound))?;
    let product = product_complex(small.simplicial())?;
    let map = monoidal_map(&small, &product, &big)?;
    let mut report = check_culf(&map, &product, big.simplicial(), exec)?;
    report.check = "monoidal".into();
    Ok(report)
}
