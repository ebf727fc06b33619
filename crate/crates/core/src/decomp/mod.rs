//! Truncated simplicial groupoids, the layered-structure construction and
//! the axiom checkers.

mod checks;
mod decalage;
mod layered;
mod monoidal;
mod report;

use std::sync::Arc;

use thiserror::Error;

use crate::groupoid::{FinGroupoid, GroupoidError, GroupoidFunctor};
use crate::simplex::{DeltaMap, Elementary};
use crate::species::SpeciesError;

pub use checks::{
    check_culf, check_decomposition, check_finiteness, check_segal, check_simplicial_identities, generic_maps,
};
pub use decalage::{
    check_dec_coherence, check_decalage_formulas, dec_bot, dec_top, fat_nerve, Chain, Decalage, FatNerve, NerveVariant,
};
pub use layered::{build, describe_shape, BuildOptions, LayeredComplex, LayeredShape};
pub use monoidal::{check_monoidal, monoidal_map, product_complex};
pub use report::{AxiomReport, CheckResult, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("level {level} would need about {morphisms} morphisms, above the cap {cap}")]
    LevelTooLarge { level: usize, morphisms: usize, cap: usize },
    #[error("operator needs level {needed} but the truncation stops at {top}")]
    Truncation { needed: usize, top: usize },
    #[error("inconsistent simplicial data: {0}")]
    Inconsistent(String),
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
}

/// Where a truncation came from, for reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Provenance {
    pub construction: String,
    pub species: String,
    pub size: usize,
    pub bound: usize,
}

/// Levels `X_0..X_N` with faces `d_i: X_n → X_{n-1}` and degeneracies
/// `s_i: X_n → X_{n+1}` stored as explicit functors.
#[derive(Clone, Debug)]
pub struct TruncatedSimplicialGroupoid {
    levels: Vec<Arc<FinGroupoid>>,
    faces: Vec<Vec<GroupoidFunctor>>,
    degeneracies: Vec<Vec<GroupoidFunctor>>,
    provenance: Provenance,
}

impl TruncatedSimplicialGroupoid {
    /// `faces[n]` holds `d_0..d_n` out of `X_n` (empty for `n = 0`);
    /// `degeneracies[n]` holds `s_0..s_n` out of `X_n` for `n < N`.
    pub fn new(
        levels: Vec<Arc<FinGroupoid>>,
        faces: Vec<Vec<GroupoidFunctor>>,
        degeneracies: Vec<Vec<GroupoidFunctor>>,
        provenance: Provenance,
    ) -> Result<Self, DecompError> {
        let top = levels.len().checked_sub(1).ok_or_else(|| DecompError::Inconsistent("no levels".into()))?;
        if faces.len() != top + 1 || degeneracies.len() != top {
            return Err(DecompError::Inconsistent("table lengths".into()));
        }
        for n in 0..=top {
            let expected = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected {
                return Err(DecompError::Inconsistent(format!("face count at level {n}")));
            }
            for (i, d) in faces[n].iter().enumerate() {
                if !Arc::ptr_eq(d.domain(), &levels[n]) || !Arc::ptr_eq(d.codomain(), &levels[n - 1]) {
                    return Err(DecompError::Inconsistent(format!("endpoints of d{i} at level {n}")));
                }
            }
        }
        for n in 0..top {
            if degeneracies[n].len() != n + 1 {
                return Err(DecompError::Inconsistent(format!("degeneracy count at level {n}")));
            }
            for (i, s) in degeneracies[n].iter().enumerate() {
                if !Arc::ptr_eq(s.domain(), &levels[n]) || !Arc::ptr_eq(s.codomain(), &levels[n + 1]) {
                    return Err(DecompError::Inconsistent(format!("endpoints of s{i} at level {n}")));
                }
            }
        }
        Ok(Self { levels, faces, degeneracies, provenance })
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Arc<FinGroupoid> {
        &self.levels[n]
    }

    /// `d_i: X_n → X_{n-1}`.
    pub fn face(&self, n: usize, i: usize) -> &GroupoidFunctor {
        &self.faces[n][i]
    }

    /// `s_i: X_n → X_{n+1}`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &GroupoidFunctor {
        &self.degeneracies[n][i]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Replace a stored face; for mutation tests.
    pub fn set_face(&mut self, n: usize, i: usize, d: GroupoidFunctor) -> Result<(), DecompError> {
        if !Arc::ptr_eq(d.domain(), &self.levels[n]) || !Arc::ptr_eq(d.codomain(), &self.levels[n - 1]) {
            return Err(DecompError::Inconsistent(format!("endpoints of replacement d{i} at level {n}")));
        }
        self.faces[n][i] = d;
        Ok(())
    }

    /// `X(a): X_n → X_m` for `a: [m] → [n]`, composed from faces and
    /// degeneracies along the normal form of `a`.
    pub fn operator(&self, a: &DeltaMap) -> Result<GroupoidFunctor, DecompError> {
        let top = self.top();
        for needed in [a.source(), a.target()] {
            if needed > top {
                return Err(DecompError::Truncation { needed, top });
            }
        }
        let word = a.elementary_word();
        let mut acc = GroupoidFunctor::identity(self.levels[a.target()].clone());
        for e in word.iter().rev() {
            let step = match *e {
                Elementary::Coface { n, k } => &self.faces[n + 1][k],
                Elementary::Codegeneracy { n, k } => &self.degeneracies[n][k],
            };
            acc = step.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// A level-wise map of truncated simplicial groupoids.
#[derive(Clone, Debug)]
pub struct LevelwiseMap {
    pub components: Vec<GroupoidFunctor>,
}

impl LevelwiseMap {
    pub fn new(components: Vec<GroupoidFunctor>) -> Self {
        Self { components }
    }

    pub fn top(&self) -> usize {
        self.components.len() - 1
    }

    pub fn identity(t: &TruncatedSimplicialGroupoid) -> Self {
        Self { components: (0..=t.top()).map(|n| GroupoidFunctor::identity(t.level(n).clone())).collect() }
    }

    /// Strict compatibility with every face and degeneracy up to the common
    /// truncation.
    pub fn check_simplicial(
        &self,
        domain: &TruncatedSimplicialGroupoid,
        codomain: &TruncatedSimplicialGroupoid,
    ) -> Result<(), DecompError> {
        let top = self.top();
        if top > domain.top() || top > codomain.top() {
            return Err(DecompError::Inconsistent("map exceeds truncation".into()));
        }
        for n in 0..=top {
            let f = &self.components[n];
            if !Arc::ptr_eq(f.domain(), domain.level(n)) || !Arc::ptr_eq(f.codomain(), codomain.level(n)) {
                return Err(DecompError::NotSimplicial(format!("component {n} has the wrong endpoints")));
            }
        }
        for n in 1..=top {
            for i in 0..=n {
                let lhs = self.components[n - 1].compose(domain.face(n, i))?;
                let rhs = codomain.face(n, i).compose(&self.components[n])?;
                if let Some(at) = lhs.first_difference(&rhs) {
                    return Err(DecompError::NotSimplicial(format!("d{i} at level {n}, {at}")));
                }
            }
        }
        for n in 0..top {
            for i in 0..=n {
                let lhs = self.components[n + 1].compose(domain.degeneracy(n, i))?;
                let rhs = codomain.degeneracy(n, i).compose(&self.components[n])?;
                if let Some(at) = lhs.first_difference(&rhs) {
                    return Err(DecompError::NotSimplicial(format!("s{i} at level {n}, {at}")));
                }
            }
        }
        Ok(())
    }
}
